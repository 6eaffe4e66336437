#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"

namespace epochscope {

namespace detail {

inline double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// log of the hypergeometric pmf P(X = k), X ~ Hypergeometric(T, F, t).
inline double log_hyper_pmf(std::uint64_t T, std::uint64_t t, std::uint64_t F,
                            std::uint64_t k) {
    return log_choose(F, k) + log_choose(T - F, t - k) - log_choose(T, t);
}

// log P(X >= f). Terms are accumulated outward from the boundary term,
// which is the largest in the tail whenever f is at or above the mode, with
// early exit once terms drop below 1e-18 relative.
inline double log_upper_tail(std::uint64_t T, std::uint64_t t, std::uint64_t F,
                             std::uint64_t f) {
    const std::uint64_t kmax = std::min(F, t);
    const double lp0 = log_hyper_pmf(T, t, F, f);
    long double sum = 1.0L;
    long double term = 1.0L;
    for (std::uint64_t k = f; k < kmax; ++k) {
        // pmf(k+1)/pmf(k)
        const long double ratio =
            (static_cast<long double>(F - k) * static_cast<long double>(t - k)) /
            (static_cast<long double>(k + 1) *
             static_cast<long double>(T - F - t + k + 1));
        term *= ratio;
        sum += term;
        if (term < 1e-18L * sum) break;
    }
    return lp0 + static_cast<double>(std::log(sum));
}

// log P(X <= f), mirrored accumulation downward from f.
inline double log_lower_tail(std::uint64_t T, std::uint64_t t, std::uint64_t F,
                             std::uint64_t f) {
    const std::uint64_t kmin = (t + F > T) ? t + F - T : 0;
    const double lp0 = log_hyper_pmf(T, t, F, f);
    long double sum = 1.0L;
    long double term = 1.0L;
    for (std::uint64_t k = f; k > kmin; --k) {
        // pmf(k-1)/pmf(k)
        const long double ratio =
            (static_cast<long double>(k) *
             static_cast<long double>(T - F - t + k)) /
            (static_cast<long double>(F - k + 1) *
             static_cast<long double>(t - k + 1));
        term *= ratio;
        sum += term;
        if (term < 1e-18L * sum) break;
    }
    return lp0 + static_cast<double>(std::log(sum));
}

}  // namespace detail

// Signed lexical specificity of a form with sub-frequency f in a part of t
// occurrences, out of F total occurrences in a corpus of T. Over-use
// (f above the hypergeometric mode) returns -log10 P(X >= f) > 0, under-use
// returns log10 P(X <= f) < 0. At the mode the sign follows the comparison
// with the expectation F*t/T and the magnitude comes from the smaller tail.
inline double specificity_index(std::uint64_t T, std::uint64_t t, std::uint64_t F,
                                std::uint64_t f) {
    if (F > T || t > T) throw DomainError("specificity_index: F and t must be <= T");
    if (f > std::min(F, t))
        throw DomainError("specificity_index: f must be <= min(F, t)");
    if (T == 0) throw DomainError("specificity_index: T must be positive");
    const std::uint64_t support_min = (t + F > T) ? t + F - T : 0;
    if (f < support_min)
        throw DomainError("specificity_index: f below the hypergeometric support");

    constexpr double kLn10 = 2.302585092994045684;
    const auto mode = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(t + 1) * (F + 1)) / (T + 2));

    if (f > mode) return -detail::log_upper_tail(T, t, F, f) / kLn10;
    if (f < mode) return detail::log_lower_tail(T, t, F, f) / kLn10;

    const double upper = detail::log_upper_tail(T, t, F, f);
    const double lower = detail::log_lower_tail(T, t, F, f);
    const double magnitude = -std::max(upper, lower) / kLn10;  // smaller tail
    const bool over = static_cast<double>(f) * static_cast<double>(T) >=
                      static_cast<double>(F) * static_cast<double>(t);
    return over ? magnitude : -magnitude;
}

struct SpecificityScore {
    std::string form;
    std::string part;
    double index = 0.0;
    std::uint64_t FQ = 0;  // form total over the selected parts
    std::uint64_t fq = 0;  // form sub-frequency in the part
};

namespace detail {

inline void sort_scores(std::vector<SpecificityScore>& scores) {
    std::sort(scores.begin(), scores.end(),
              [](const SpecificityScore& a, const SpecificityScore& b) {
                  if (a.index != b.index) return a.index > b.index;
                  if (a.FQ != b.FQ) return a.FQ > b.FQ;
                  return a.form < b.form;
              });
}

}  // namespace detail

// Specificities of one column of a contingency table; the table is the
// universe (T = grand total, t = column total).
inline std::vector<SpecificityScore> part_specificities(const ContingencyTable& table,
                                                        std::string_view part,
                                                        double threshold) {
    if (threshold < 0) throw DomainError("part_specificities: threshold must be >= 0");
    std::size_t col = table.col_labels.size();
    for (std::size_t j = 0; j < table.col_labels.size(); ++j)
        if (table.col_labels[j] == part) col = j;
    if (col == table.col_labels.size()) throw UnknownPartError(std::string(part));

    std::vector<SpecificityScore> out;
    for (std::size_t i = 0; i < table.row_labels.size(); ++i) {
        const std::uint64_t F = table.row_totals[i];
        const std::uint64_t f = table.counts[i][col];
        const double index =
            specificity_index(table.grand_total, table.col_totals[col], F, f);
        if (std::abs(index) >= threshold)
            out.push_back({table.row_labels[i], std::string(part), index, F, f});
    }
    detail::sort_scores(out);
    return out;
}

// Specificities of `part` against the whole selected universe. T and t count
// every occurrence in the selected parts; the min_freq filter only limits
// which forms get a row.
inline std::vector<SpecificityScore> part_specificities(
    const CorpusBase& base, const std::vector<std::string>& part_filter,
    std::string_view part, double threshold, std::uint64_t min_freq = 1) {
    if (threshold < 0) throw DomainError("part_specificities: threshold must be >= 0");
    std::vector<std::size_t> cols;
    for (const std::string& name : part_filter) cols.push_back(base.part_pos(name));
    const std::size_t target = base.part_pos(part);
    if (std::find(cols.begin(), cols.end(), target) == cols.end())
        throw UnknownPartError(std::string(part) + " (not in the selected parts)");

    std::uint64_t T = 0;
    for (const std::size_t c : cols) T += base.index.part_stats(c).occurrences;
    const std::uint64_t t = base.index.part_stats(target).occurrences;

    std::vector<SpecificityScore> out;
    for (FormId form = 0; form < base.index.form_count(); ++form) {
        std::uint64_t F = 0;
        for (const std::size_t c : cols) F += base.index.count(form, c);
        if (F < min_freq || F == 0) continue;
        const std::uint64_t f = base.index.count(form, target);
        const double index = specificity_index(T, t, F, f);
        if (std::abs(index) >= threshold)
            out.push_back({base.index.surface(form), std::string(part), index, F, f});
    }
    detail::sort_scores(out);
    return out;
}

}  // namespace epochscope
