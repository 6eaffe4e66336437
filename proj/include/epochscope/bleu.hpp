#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epochscope/error.hpp"

namespace epochscope {

enum class Smoothing { None, Add1, Exp };

inline std::string_view smoothing_name(Smoothing s) {
    switch (s) {
        case Smoothing::None: return "none";
        case Smoothing::Add1: return "add1";
        case Smoothing::Exp: return "exp";
    }
    return "?";
}

struct BleuReport {
    double score = 0.0;  // 0..100
    std::array<double, 4> precisions{};  // p1..p4; orders past effective_order stay 0
    double brevity_penalty = 1.0;
    std::uint64_t hyp_length = 0;  // c
    std::uint64_t ref_length = 0;  // r
    int effective_order = 4;
    std::array<std::uint64_t, 4> matches{};
    std::array<std::uint64_t, 4> totals{};
    Smoothing smoothing = Smoothing::None;
};

// BLEU's own tokenization, independent of the corpus policy: runs of ASCII
// alphanumerics (plus any non-ASCII bytes) form word tokens, every other
// visible character is a token of its own. Case-sensitive.
inline std::vector<std::string> bleu_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (const char ch : text) {
        const auto b = static_cast<unsigned char>(ch);
        const bool word = (b >= '0' && b <= '9') || (b >= 'A' && b <= 'Z') ||
                          (b >= 'a' && b <= 'z') || b >= 0x80;
        if (word) {
            current.push_back(ch);
        } else {
            flush();
            if (!std::isspace(b)) tokens.push_back(std::string(1, ch));
        }
    }
    flush();
    return tokens;
}

namespace detail {

using NgramCounts = std::map<std::vector<std::string>, std::uint64_t>;

inline NgramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n) {
    NgramCounts counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

struct BleuStats {
    std::array<std::uint64_t, 4> matches{};
    std::array<std::uint64_t, 4> totals{};
    std::uint64_t hyp_length = 0;
    std::uint64_t ref_length = 0;

    void add(std::span<const std::string> hyp, std::span<const std::string> ref) {
        hyp_length += hyp.size();
        ref_length += ref.size();
        for (std::size_t n = 1; n <= 4; ++n) {
            const NgramCounts hyp_counts = ngram_counts(hyp, n);
            const NgramCounts ref_counts = ngram_counts(ref, n);
            for (const auto& [gram, count] : hyp_counts) {
                totals[n - 1] += count;
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end())
                    matches[n - 1] += std::min(count, it->second);  // clipping
            }
        }
    }
};

// Assembles the report from aggregated counts. Smoothing replaces only zero
// precisions: the k-th zero order (k = 1, 2, ...) becomes 1/(2^k * total_n)
// under "exp", and 1/(total_n + 1) under "add1".
inline BleuReport score_from_stats(const BleuStats& stats, int effective_order,
                                   Smoothing smoothing) {
    BleuReport report;
    report.matches = stats.matches;
    report.totals = stats.totals;
    report.hyp_length = stats.hyp_length;
    report.ref_length = stats.ref_length;
    report.effective_order = effective_order;
    report.smoothing = smoothing;

    if (stats.hyp_length == 0) {
        report.brevity_penalty = 0.0;
        return report;
    }
    report.brevity_penalty =
        stats.hyp_length >= stats.ref_length
            ? 1.0
            : std::exp(1.0 - static_cast<double>(stats.ref_length) /
                                 static_cast<double>(stats.hyp_length));

    double log_sum = 0.0;
    bool zero = false;
    std::uint64_t half = 1;
    for (int n = 0; n < effective_order; ++n) {
        double p = 0.0;
        if (stats.matches[n] > 0) {
            p = static_cast<double>(stats.matches[n]) /
                static_cast<double>(stats.totals[n]);
        } else {
            switch (smoothing) {
                case Smoothing::None:
                    p = 0.0;
                    break;
                case Smoothing::Add1:
                    p = 1.0 / (static_cast<double>(stats.totals[n]) + 1.0);
                    break;
                case Smoothing::Exp:
                    half *= 2;
                    p = 1.0 / (static_cast<double>(half) *
                               static_cast<double>(stats.totals[n]));
                    break;
            }
        }
        report.precisions[static_cast<std::size_t>(n)] = p;
        if (p == 0.0)
            zero = true;
        else
            log_sum += std::log(p);
    }
    if (zero || effective_order == 0) {
        report.score = 0.0;
        return report;
    }
    report.score =
        100.0 * report.brevity_penalty * std::exp(log_sum / effective_order);
    return report;
}

}  // namespace detail

// Corpus BLEU: modified n-gram precisions aggregated corpus-wide before the
// ratio, geometric mean over orders 1..4, closed-form brevity penalty, no
// smoothing.
inline BleuReport bleu_corpus(std::span<const std::string> hyps,
                              std::span<const std::string> refs) {
    if (hyps.size() != refs.size())
        throw LengthMismatchError("bleu_corpus: hypothesis/reference counts differ");
    if (hyps.empty()) throw EmptyCorpusError("bleu_corpus: empty corpus");

    detail::BleuStats stats;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        const auto hyp = bleu_tokenize(hyps[i]);
        const auto ref = bleu_tokenize(refs[i]);
        stats.add(hyp, ref);
    }
    return detail::score_from_stats(stats, 4, Smoothing::None);
}

// Sentence BLEU. The effective order drops to the hypothesis length when the
// sentence is shorter than 4 tokens.
inline BleuReport bleu_sentence(std::string_view hyp, std::string_view ref,
                                Smoothing smoothing = Smoothing::Exp) {
    const auto hyp_tokens = bleu_tokenize(hyp);
    const auto ref_tokens = bleu_tokenize(ref);
    if (hyp_tokens.empty() || ref_tokens.empty())
        throw EmptySentenceError("bleu_sentence: empty sentence");

    detail::BleuStats stats;
    stats.add(hyp_tokens, ref_tokens);
    const int effective_order =
        static_cast<int>(std::min<std::size_t>(4, hyp_tokens.size()));
    return detail::score_from_stats(stats, effective_order, smoothing);
}

}  // namespace epochscope
