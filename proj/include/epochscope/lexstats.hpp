#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"

namespace epochscope {

struct PartSummary {
    std::string part;
    std::size_t debut = 0;
    std::size_t fin = 0;
    std::uint64_t distinct_forms = 0;  // fq
    std::uint64_t occurrences = 0;     // Fq
    std::uint64_t fq_max = 0;
    std::string forme_max;
};

inline std::vector<PartSummary> summarize(const CorpusBase& base) {
    std::vector<PartSummary> out;
    out.reserve(base.parts.size());
    for (std::size_t p = 0; p < base.parts.size(); ++p) {
        const Part& part = base.parts[p];
        const PartStats& st = base.index.part_stats(p);
        PartSummary row;
        row.part = part.name;
        row.debut = part.debut;
        row.fin = part.fin;
        row.distinct_forms = st.distinct;
        row.occurrences = st.occurrences;
        row.fq_max = st.fq_max;
        if (st.forme_max != kNoForm) row.forme_max = base.index.surface(st.forme_max);
        out.push_back(std::move(row));
    }
    return out;
}

struct GrowthPoint {
    std::uint64_t occurrences = 0;
    std::uint64_t distinct = 0;
};

struct GrowthCurve {
    std::string part;
    std::vector<GrowthPoint> points;
};

// Exact left-to-right accumulation of distinct forms, sampled every `step`
// occurrences plus the final point.
inline GrowthCurve vocab_growth(const CorpusBase& base, std::string_view part_name,
                                std::size_t step) {
    if (step < 1) throw DomainError("vocab_growth: step must be >= 1");
    const Part& part = base.part(part_name);

    GrowthCurve curve;
    curve.part = part.name;
    std::vector<bool> seen(base.index.form_count(), false);
    std::uint64_t occ = 0;
    std::uint64_t distinct = 0;
    for (std::size_t i = part.first_item; i < part.end_item; ++i) {
        const FormId f = base.item_form[i];
        if (f == kNoForm) continue;
        ++occ;
        if (!seen[f]) {
            seen[f] = true;
            ++distinct;
        }
        if (occ % step == 0) curve.points.push_back({occ, distinct});
    }
    if (curve.points.empty() || curve.points.back().occurrences != occ)
        curve.points.push_back({occ, distinct});
    return curve;
}

struct ContingencyTable {
    std::vector<std::string> row_labels;  // forms
    std::vector<std::string> col_labels;  // parts, rank order
    std::vector<std::vector<std::uint32_t>> counts;  // [row][col]
    std::uint64_t grand_total = 0;
    std::vector<std::uint64_t> row_totals;
    std::vector<std::uint64_t> col_totals;
};

// Form x part occurrence table over the selected parts. Rows are the forms
// whose total within the selection reaches min_freq, ordered by descending
// total then by surface bytes.
inline ContingencyTable contingency(const CorpusBase& base,
                                    const std::vector<std::string>& part_filter,
                                    std::uint64_t min_freq) {
    if (min_freq < 1) throw DomainError("contingency: min_freq must be >= 1");
    if (part_filter.size() < 2)
        throw DataError("contingency: part filter must select at least 2 parts");

    std::vector<std::size_t> cols;
    cols.reserve(part_filter.size());
    for (const std::string& name : part_filter) cols.push_back(base.part_pos(name));

    struct Row {
        FormId form;
        std::uint64_t total;
    };
    std::vector<Row> rows;
    for (FormId f = 0; f < base.index.form_count(); ++f) {
        std::uint64_t total = 0;
        for (const std::size_t c : cols) total += base.index.count(f, c);
        if (total >= min_freq) rows.push_back({f, total});
    }
    if (rows.empty()) throw EmptyTableError("contingency: no form reaches min_freq");

    std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        if (a.total != b.total) return a.total > b.total;
        return base.index.surface(a.form) < base.index.surface(b.form);
    });

    ContingencyTable table;
    for (const std::size_t c : cols) table.col_labels.push_back(base.parts[c].name);
    table.col_totals.assign(cols.size(), 0);
    for (const Row& r : rows) {
        table.row_labels.push_back(base.index.surface(r.form));
        std::vector<std::uint32_t> counts(cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            counts[j] = base.index.count(r.form, cols[j]);
            table.col_totals[j] += counts[j];
        }
        table.counts.push_back(std::move(counts));
        table.row_totals.push_back(r.total);
        table.grand_total += r.total;
    }
    return table;
}

}  // namespace epochscope
