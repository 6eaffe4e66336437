#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"

namespace epochscope {

// Product-moment correlation. Throws on length mismatch or constant input.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatchError("pearson: vectors differ in length");
    if (x.size() < 2) throw LengthMismatchError("pearson: need at least 2 points");
    const std::size_t n = x.size();
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0L || syy == 0.0L)
        throw ConstantVectorError("pearson: constant vector");
    const double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
    return std::clamp(r, -1.0, 1.0);
}

enum class VncDistance { OneMinusR, HalfOneMinusR };

struct DendroMerge {
    std::size_t left_id = 0;   // leaves are 0..n-1 in rank order; merge k creates n+k
    std::size_t right_id = 0;
    std::size_t new_id = 0;
    double height = 0.0;
    std::size_t leaf_lo = 0;  // contiguous leaf range covered by the new cluster
    std::size_t leaf_hi = 0;
    bool euclidean_fallback = false;
};

struct Dendrogram {
    std::vector<std::string> leaves;  // part names, rank order
    std::vector<DendroMerge> merges;  // exactly n-1
    std::vector<std::string> notices;
    VncDistance distance = VncDistance::OneMinusR;
};

namespace detail {

inline bool is_constant(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != v[0]) return false;
    return true;
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    long double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = a[i] - b[i];
        acc += d * d;
    }
    return static_cast<double>(std::sqrt(acc));
}

}  // namespace detail

// Neighbour-constrained agglomerative clustering: only chronologically
// adjacent clusters may merge. Cluster distance is 1 - pearson of the two
// centroids (mean vectors of member parts); ties break toward the lower
// rank. A constant centroid makes Pearson undefined, in which case that
// pair's distance falls back to Euclidean and a notice is recorded.
inline Dendrogram vnc_cluster(const std::vector<std::vector<double>>& vectors,
                              const std::vector<std::string>& names,
                              VncDistance distance = VncDistance::OneMinusR) {
    const std::size_t n = vectors.size();
    if (n < 2) throw DataError("vnc_cluster: need at least 2 parts");
    if (names.size() != n)
        throw LengthMismatchError("vnc_cluster: names/vectors size mismatch");
    const std::size_t dim = vectors[0].size();
    if (dim < 2)
        throw LengthMismatchError("vnc_cluster: vectors need at least 2 components");
    for (const auto& v : vectors)
        if (v.size() != dim)
            throw LengthMismatchError("vnc_cluster: vectors differ in length");

    Dendrogram out;
    out.leaves = names;
    out.distance = distance;

    struct Cluster {
        std::size_t id;
        std::size_t leaf_lo, leaf_hi;
        std::vector<double> centroid;
        std::size_t size;
    };
    std::vector<Cluster> active;
    for (std::size_t i = 0; i < n; ++i) active.push_back({i, i, i, vectors[i], 1});

    auto pair_distance = [&](const Cluster& a, const Cluster& b, bool& fallback) {
        fallback = detail::is_constant(a.centroid) || detail::is_constant(b.centroid);
        if (fallback) return detail::euclidean(a.centroid, b.centroid);
        const double r = pearson(a.centroid, b.centroid);
        return distance == VncDistance::OneMinusR ? 1.0 - r : (1.0 - r) / 2.0;
    };

    std::size_t next_id = n;
    while (active.size() > 1) {
        std::size_t best = 0;
        double best_distance = 0.0;
        bool best_fallback = false;
        for (std::size_t i = 0; i + 1 < active.size(); ++i) {
            bool fallback = false;
            const double d = pair_distance(active[i], active[i + 1], fallback);
            if (i == 0 || d < best_distance) {
                best = i;
                best_distance = d;
                best_fallback = fallback;
            }
        }
        Cluster& left = active[best];
        Cluster& right = active[best + 1];
        if (best_fallback) {
            std::ostringstream msg;
            msg << "constant centroid near parts " << names[left.leaf_lo] << ".."
                << names[right.leaf_hi]
                << ": Pearson undefined, used Euclidean distance";
            out.notices.push_back(msg.str());
        }

        Cluster merged;
        merged.id = next_id++;
        merged.leaf_lo = left.leaf_lo;
        merged.leaf_hi = right.leaf_hi;
        merged.size = left.size + right.size;
        merged.centroid.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            merged.centroid[k] =
                (left.centroid[k] * static_cast<double>(left.size) +
                 right.centroid[k] * static_cast<double>(right.size)) /
                static_cast<double>(merged.size);

        out.merges.push_back({left.id, right.id, merged.id, best_distance,
                              merged.leaf_lo, merged.leaf_hi, best_fallback});
        active[best] = std::move(merged);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return out;
}

// Renders the dendrogram as an indented tree, heights on the merge nodes.
inline std::string render_dendrogram(const Dendrogram& d, int precision = 6) {
    std::string out;
    auto render = [&](auto&& self, std::size_t id, int depth) -> void {
        for (int i = 0; i < depth; ++i) out += "  ";
        if (id < d.leaves.size()) {
            out += "- " + d.leaves[id] + "\n";
            return;
        }
        const DendroMerge& m = d.merges[id - d.leaves.size()];
        out += "+ [" + format_sig(m.height, precision) + "]";
        if (m.euclidean_fallback) out += " (euclidean)";
        out += "\n";
        self(self, m.left_id, depth + 1);
        self(self, m.right_id, depth + 1);
    };
    if (!d.merges.empty()) render(render, d.merges.back().new_id, 0);
    return out;
}

// Frequency-weighted mean ordinal position, 1-based within the selected
// range: where the form has as many occurrences before as after.
inline double barycentre_temporel(std::span<const double> fq) {
    long double total = 0, weighted = 0;
    for (std::size_t k = 0; k < fq.size(); ++k) {
        if (fq[k] < 0) throw DomainError("barycentre_temporel: negative frequency");
        total += fq[k];
        weighted += static_cast<long double>(k + 1) * fq[k];
    }
    if (total == 0.0L)
        throw ZeroFrequencyError("barycentre_temporel: all frequencies are zero");
    return static_cast<double>(weighted / total);
}

// Von Neumann coefficient: mean squared successive difference over twice the
// squared deviation sum. Undefined (nullopt) for a constant vector.
inline std::optional<double> von_neumann(std::span<const double> fq) {
    if (fq.size() < 2) throw LengthMismatchError("von_neumann: need at least 2 parts");
    const std::size_t n = fq.size();
    long double mean = 0;
    for (const double v : fq) mean += v;
    mean /= n;
    long double dev2 = 0, diff2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const long double d = fq[k] - mean;
        dev2 += d * d;
        if (k + 1 < n) {
            const long double s = fq[k + 1] - fq[k];
            diff2 += s * s;
        }
    }
    if (dev2 == 0.0L) return std::nullopt;
    return static_cast<double>(diff2 / (2.0L * dev2));
}

struct ChronoRow {
    std::string form;
    std::uint64_t FQ = 0;  // total over the selected range
    double BT = 0.0;
    std::optional<double> VN;
    std::vector<std::uint32_t> fq;  // per selected part
};

// Rows for every form with FQ > fq_max within the range, sorted by BT then
// VN ascending (undefined VN last), then FQ descending, then surface bytes.
inline std::vector<ChronoRow> chrono_report(const CorpusBase& base,
                                            const std::vector<std::string>& range_parts,
                                            std::uint64_t fq_max) {
    if (range_parts.size() < 2)
        throw EmptyRangeError("chrono_report: range must select at least 2 parts");
    std::vector<std::size_t> cols;
    for (const std::string& name : range_parts) cols.push_back(base.part_pos(name));

    std::vector<ChronoRow> rows;
    for (FormId form = 0; form < base.index.form_count(); ++form) {
        ChronoRow row;
        row.fq.resize(cols.size());
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row.fq[k] = base.index.count(form, cols[k]);
            total += row.fq[k];
        }
        if (total <= fq_max) continue;
        row.form = base.index.surface(form);
        row.FQ = total;
        std::vector<double> v(row.fq.begin(), row.fq.end());
        row.BT = barycentre_temporel(v);
        row.VN = von_neumann(v);
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const ChronoRow& a, const ChronoRow& b) {
        if (a.BT != b.BT) return a.BT < b.BT;
        const double va = a.VN.value_or(std::numeric_limits<double>::infinity());
        const double vb = b.VN.value_or(std::numeric_limits<double>::infinity());
        if (va != vb) return va < vb;
        if (a.FQ != b.FQ) return a.FQ > b.FQ;
        return a.form < b.form;
    });
    return rows;
}

}  // namespace epochscope
