#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epochscope/bleu.hpp"
#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"

namespace epochscope {

struct UnkProfile {
    std::string part;
    std::vector<std::uint32_t> per_sentence;
    std::uint64_t total_unk = 0;
    std::size_t sentences_without_unk = 0;
};

// Counts tokens equal to unk_token in every sentence of the part. The unknown
// marker is matched as a whole form under the corpus tokenization policy.
inline UnkProfile unk_profile(const CorpusBase& base, std::string_view part_name,
                              std::string_view unk_token = "<unk>") {
    const Part& part = base.part(part_name);
    UnkProfile profile;
    profile.part = part.name;
    profile.per_sentence.reserve(part.sentences.size());

    const std::optional<FormId> unk = base.index.find(unk_token);
    for (std::size_t sid = 0; sid < part.sentences.size(); ++sid) {
        std::uint32_t count = 0;
        if (unk) {
            for (const FormId f : base.sentence_forms(part, sid))
                if (f == *unk) ++count;
        }
        profile.per_sentence.push_back(count);
        profile.total_unk += count;
        if (count == 0) ++profile.sentences_without_unk;
    }
    return profile;
}

// Index (into `profiles`) of the profile with the most unknown-free
// sentences; ties go to the earliest one.
inline std::size_t best_epoch_by_unk(std::span<const UnkProfile> profiles) {
    if (profiles.empty())
        throw EmptyRangeError("best_epoch_by_unk: no profiles");
    std::size_t best = 0;
    for (std::size_t i = 1; i < profiles.size(); ++i)
        if (profiles[i].sentences_without_unk >
            profiles[best].sentences_without_unk)
            best = i;
    return best;
}

// Token-level edit distance with unit insert/delete/substitute costs.
template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<std::size_t> prev(n + 1);
    std::vector<std::size_t> curr(n + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= m; ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            curr[j] = std::min({sub, prev[j] + 1, curr[j - 1] + 1});
        }
        std::swap(prev, curr);
    }
    return prev[n];
}

inline std::size_t levenshtein(std::span<const std::string> a,
                               std::span<const std::string> b) {
    return levenshtein<std::string>(a, b);
}

struct EpochBleu {
    std::string part;
    std::size_t rank = 0;
    double mean_bleu = 0.0;
};

// Mean sentence BLEU of each epoch part against the reference part, in rank
// order. A sentence pair where either side has no BLEU tokens scores 0.
inline std::vector<EpochBleu> bleu_progression(
    const CorpusBase& base, std::span<const std::string> epoch_parts,
    std::string_view ref_part, Smoothing smoothing = Smoothing::Exp) {
    const Part& ref = base.part(ref_part);
    if (!ref.aligned)
        throw AlignmentError("reference part '" + ref.name + "' is not aligned");

    std::vector<EpochBleu> out;
    out.reserve(epoch_parts.size());
    for (const std::string& name : epoch_parts) {
        const Part& epoch = base.part(name);
        if (!epoch.aligned)
            throw AlignmentError("part '" + epoch.name + "' is not aligned");

        double sum = 0.0;
        const std::size_t n = epoch.sentences.size();
        for (std::size_t sid = 0; sid < n; ++sid) {
            const std::string hyp = base.sentence_text(epoch, sid);
            const std::string rf = base.sentence_text(ref, sid);
            if (bleu_tokenize(hyp).empty() || bleu_tokenize(rf).empty()) continue;
            sum += bleu_sentence(hyp, rf, smoothing).score;
        }
        out.push_back({epoch.name, epoch.rank, n == 0 ? 0.0 : sum / n});
    }
    return out;
}

}  // namespace epochscope
