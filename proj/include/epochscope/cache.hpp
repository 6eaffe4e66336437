#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epochscope/chronology.hpp"
#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"
#include "epochscope/specificity.hpp"
#include "epochscope/version.hpp"

namespace epochscope {

struct SnapshotPart {
    std::string name;
    std::size_t rank = 0;
    std::size_t debut = 0;
    std::size_t fin = 0;
    bool aligned = false;
    std::size_t sentence_count = 0;
    std::uint64_t occurrences = 0;  // Fq
    std::uint64_t distinct = 0;     // fq
    std::uint64_t fq_max = 0;
    std::string forme_max;
};

// The frequency index of a built base, detached from the trame: everything
// the index-only analyses (summary, specificities, contingency and the
// chronological table) need, and exactly what the JSON index cache stores.
struct IndexSnapshot {
    std::string manifest_digest;
    std::string policy_digest;
    std::vector<SnapshotPart> parts;
    std::vector<std::string> forms;
    std::vector<std::vector<std::uint32_t>> counts;  // [form][part]

    std::size_t part_pos(std::string_view name) const {
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (parts[i].name == name) return i;
        throw UnknownPartError(std::string(name));
    }
};

inline IndexSnapshot make_snapshot(const CorpusBase& base,
                                   std::string manifest_digest) {
    IndexSnapshot snap;
    snap.manifest_digest = std::move(manifest_digest);
    snap.policy_digest = base.policy.digest();
    for (std::size_t p = 0; p < base.parts.size(); ++p) {
        const Part& part = base.parts[p];
        const PartStats& st = base.index.part_stats(p);
        SnapshotPart sp;
        sp.name = part.name;
        sp.rank = part.rank;
        sp.debut = part.debut;
        sp.fin = part.fin;
        sp.aligned = part.aligned;
        sp.sentence_count = part.sentences.size();
        sp.occurrences = st.occurrences;
        sp.distinct = st.distinct;
        sp.fq_max = st.fq_max;
        if (st.forme_max != kNoForm) sp.forme_max = base.index.surface(st.forme_max);
        snap.parts.push_back(std::move(sp));
    }
    snap.forms.reserve(base.index.form_count());
    snap.counts.reserve(base.index.form_count());
    for (FormId f = 0; f < base.index.form_count(); ++f) {
        snap.forms.push_back(base.index.surface(f));
        std::vector<std::uint32_t> row(base.parts.size());
        for (std::size_t p = 0; p < base.parts.size(); ++p)
            row[p] = base.index.count(f, p);
        snap.counts.push_back(std::move(row));
    }
    return snap;
}

inline nlohmann::ordered_json snapshot_to_json(const IndexSnapshot& snap) {
    nlohmann::ordered_json j;
    j["version"] = kCacheVersion;
    j["manifest_digest"] = snap.manifest_digest;
    j["policy_digest"] = snap.policy_digest;
    j["parts"] = nlohmann::ordered_json::array();
    for (const SnapshotPart& p : snap.parts) {
        nlohmann::ordered_json jp;
        jp["name"] = p.name;
        jp["rank"] = p.rank;
        jp["debut"] = p.debut;
        jp["fin"] = p.fin;
        jp["aligned"] = p.aligned;
        jp["sentences"] = p.sentence_count;
        jp["Fq"] = p.occurrences;
        jp["fq"] = p.distinct;
        jp["fq_max"] = p.fq_max;
        jp["forme_max"] = p.forme_max;
        j["parts"].push_back(std::move(jp));
    }
    j["forms"] = snap.forms;
    j["counts"] = snap.counts;
    return j;
}

inline IndexSnapshot snapshot_from_json(const nlohmann::ordered_json& j) {
    if (!j.contains("version") || j["version"].get<int>() != kCacheVersion)
        throw ConfigError("index cache: unsupported version");
    IndexSnapshot snap;
    snap.manifest_digest = j["manifest_digest"].get<std::string>();
    snap.policy_digest = j["policy_digest"].get<std::string>();
    for (const auto& jp : j["parts"]) {
        SnapshotPart p;
        p.name = jp["name"].get<std::string>();
        p.rank = jp["rank"].get<std::size_t>();
        p.debut = jp["debut"].get<std::size_t>();
        p.fin = jp["fin"].get<std::size_t>();
        p.aligned = jp["aligned"].get<bool>();
        p.sentence_count = jp["sentences"].get<std::size_t>();
        p.occurrences = jp["Fq"].get<std::uint64_t>();
        p.distinct = jp["fq"].get<std::uint64_t>();
        p.fq_max = jp["fq_max"].get<std::uint64_t>();
        p.forme_max = jp["forme_max"].get<std::string>();
        snap.parts.push_back(std::move(p));
    }
    snap.forms = j["forms"].get<std::vector<std::string>>();
    snap.counts = j["counts"].get<std::vector<std::vector<std::uint32_t>>>();
    if (snap.forms.size() != snap.counts.size())
        throw ConfigError("index cache: forms/counts size mismatch");
    for (const auto& row : snap.counts)
        if (row.size() != snap.parts.size())
            throw ConfigError("index cache: counts row width mismatch");
    return snap;
}

inline void save_snapshot(const std::filesystem::path& path,
                          const IndexSnapshot& snap) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write index cache: " + path.string());
    out << snapshot_to_json(snap).dump(1, '\t') << "\n";
}

// Loads a cache file when it exists, parses, and carries the expected
// digests. Any mismatch or parse failure reads as a miss, never an error.
inline std::optional<IndexSnapshot> try_load_snapshot(
    const std::filesystem::path& path, std::string_view manifest_digest,
    std::string_view policy_digest) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const auto j = nlohmann::ordered_json::parse(in);
        IndexSnapshot snap = snapshot_from_json(j);
        if (snap.manifest_digest != manifest_digest ||
            snap.policy_digest != policy_digest)
            return std::nullopt;
        return snap;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// -- index-only analyses served from a snapshot ---------------------------
// These mirror the CorpusBase versions field for field; equality of the two
// routes is asserted in the test suite.

inline std::vector<PartSummary> summaries(const IndexSnapshot& snap) {
    std::vector<PartSummary> out;
    out.reserve(snap.parts.size());
    for (const SnapshotPart& p : snap.parts)
        out.push_back({p.name, p.debut, p.fin, p.distinct, p.occurrences, p.fq_max,
                       p.forme_max});
    return out;
}

inline ContingencyTable contingency(const IndexSnapshot& snap,
                                    const std::vector<std::string>& part_filter,
                                    std::uint64_t min_freq) {
    if (min_freq < 1) throw DomainError("contingency: min_freq must be >= 1");
    if (part_filter.size() < 2)
        throw DataError("contingency: part filter must select at least 2 parts");

    std::vector<std::size_t> cols;
    cols.reserve(part_filter.size());
    for (const std::string& name : part_filter) cols.push_back(snap.part_pos(name));

    struct Row {
        std::size_t form;
        std::uint64_t total;
    };
    std::vector<Row> rows;
    for (std::size_t f = 0; f < snap.forms.size(); ++f) {
        std::uint64_t total = 0;
        for (const std::size_t c : cols) total += snap.counts[f][c];
        if (total >= min_freq) rows.push_back({f, total});
    }
    if (rows.empty()) throw EmptyTableError("contingency: no form reaches min_freq");

    std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        if (a.total != b.total) return a.total > b.total;
        return snap.forms[a.form] < snap.forms[b.form];
    });

    ContingencyTable table;
    for (const std::size_t c : cols) table.col_labels.push_back(snap.parts[c].name);
    table.col_totals.assign(cols.size(), 0);
    for (const Row& r : rows) {
        table.row_labels.push_back(snap.forms[r.form]);
        std::vector<std::uint32_t> counts(cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            counts[j] = snap.counts[r.form][cols[j]];
            table.col_totals[j] += counts[j];
        }
        table.counts.push_back(std::move(counts));
        table.row_totals.push_back(r.total);
        table.grand_total += r.total;
    }
    return table;
}

inline std::vector<SpecificityScore> part_specificities(
    const IndexSnapshot& snap, const std::vector<std::string>& part_filter,
    std::string_view part, double threshold, std::uint64_t min_freq = 1) {
    if (threshold < 0) throw DomainError("part_specificities: threshold must be >= 0");
    std::vector<std::size_t> cols;
    for (const std::string& name : part_filter) cols.push_back(snap.part_pos(name));
    const std::size_t target = snap.part_pos(part);
    if (std::find(cols.begin(), cols.end(), target) == cols.end())
        throw UnknownPartError(std::string(part) + " (not in the selected parts)");

    std::uint64_t T = 0;
    for (const std::size_t c : cols) T += snap.parts[c].occurrences;
    const std::uint64_t t = snap.parts[target].occurrences;

    std::vector<SpecificityScore> out;
    for (std::size_t form = 0; form < snap.forms.size(); ++form) {
        std::uint64_t F = 0;
        for (const std::size_t c : cols) F += snap.counts[form][c];
        if (F < min_freq || F == 0) continue;
        const std::uint64_t f = snap.counts[form][target];
        const double index = specificity_index(T, t, F, f);
        if (std::abs(index) >= threshold)
            out.push_back({snap.forms[form], std::string(part), index, F, f});
    }
    detail::sort_scores(out);
    return out;
}

inline std::vector<ChronoRow> chrono_report(const IndexSnapshot& snap,
                                            const std::vector<std::string>& range_parts,
                                            std::uint64_t fq_max) {
    if (range_parts.size() < 2)
        throw EmptyRangeError("chrono_report: range must select at least 2 parts");
    std::vector<std::size_t> cols;
    for (const std::string& name : range_parts) cols.push_back(snap.part_pos(name));

    std::vector<ChronoRow> rows;
    for (std::size_t form = 0; form < snap.forms.size(); ++form) {
        ChronoRow row;
        row.fq.resize(cols.size());
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row.fq[k] = snap.counts[form][cols[k]];
            total += row.fq[k];
        }
        if (total <= fq_max) continue;
        row.form = snap.forms[form];
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
