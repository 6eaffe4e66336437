#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epochscope/corpus.hpp"
#include "epochscope/error.hpp"

namespace epochscope {

struct SegmentOccurrence {
    std::size_t part = 0;      // position in base.parts
    std::size_t sentence = 0;  // sentence ordinal within the part
    std::size_t start = 0;     // token offset within the sentence's forms
};

struct RepeatedSegment {
    std::vector<std::string> tokens;
    std::uint64_t frequency = 0;
    std::vector<SegmentOccurrence> occurrences;
};

struct SegmentOptions {
    std::size_t min_len = 2;
    std::size_t max_len = 10;
    std::uint64_t min_freq = 2;
    bool maximal_only = false;
};

namespace detail {

// True when `needle` occurs contiguously inside `hay`.
template <class T>
bool contains_run(const std::vector<T>& hay, const std::vector<T>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k)
            if (!(hay[i + k] == needle[k])) {
                match = false;
                break;
            }
        if (match) return true;
    }
    return false;
}

}  // namespace detail

// Enumerates all within-sentence form n-grams of length [min_len, max_len]
// occurring at least min_freq times across the given parts. Delimiters never
// enter a segment and segments never cross sentence boundaries. Enumeration
// walks lengths upward and stops early once a length produces no repeats
// (a repeated (n+1)-gram would imply a repeated n-gram prefix). With
// maximal_only, segments contained in an equally frequent longer segment are
// dropped. Output is sorted by frequency descending, then length descending,
// then token sequence.
inline std::vector<RepeatedSegment> repeated_segments(
    const CorpusBase& base, std::span<const std::string> scope_parts,
    const SegmentOptions& options = {}) {
    if (scope_parts.empty()) throw EmptyScopeError("repeated_segments: empty scope");
    if (options.min_len < 2)
        throw ConfigError("repeated_segments: min_len must be >= 2");
    if (options.min_freq < 2)
        throw ConfigError("repeated_segments: min_freq must be >= 2");

    struct SentenceRef {
        std::size_t part;
        std::size_t sentence;
        std::vector<FormId> forms;
    };
    std::vector<SentenceRef> sentences;
    for (const std::string& name : scope_parts) {
        const std::size_t p = base.part_pos(name);
        const Part& part = base.parts[p];
        for (std::size_t sid = 0; sid < part.sentences.size(); ++sid)
            sentences.push_back({p, sid, base.sentence_forms(part, sid)});
    }

    std::vector<RepeatedSegment> found;
    for (std::size_t len = options.min_len; len <= options.max_len; ++len) {
        std::map<std::vector<FormId>, std::vector<SegmentOccurrence>> grams;
        for (const SentenceRef& s : sentences) {
            if (s.forms.size() < len) continue;
            for (std::size_t i = 0; i + len <= s.forms.size(); ++i)
                grams[std::vector<FormId>(s.forms.begin() + i,
                                          s.forms.begin() + i + len)]
                    .push_back({s.part, s.sentence, i});
        }
        bool any = false;
        for (auto& [gram, occs] : grams) {
            if (occs.size() < options.min_freq) continue;
            any = true;
            RepeatedSegment seg;
            seg.tokens.reserve(len);
            for (const FormId f : gram) seg.tokens.push_back(base.index.surface(f));
            seg.frequency = occs.size();
            seg.occurrences = std::move(occs);
            found.push_back(std::move(seg));
        }
        if (!any) break;
    }

    if (options.maximal_only) {
        std::vector<RepeatedSegment> kept;
        for (const RepeatedSegment& seg : found) {
            bool contained = false;
            for (const RepeatedSegment& other : found) {
                if (other.tokens.size() <= seg.tokens.size()) continue;
                if (other.frequency == seg.frequency &&
                    detail::contains_run(other.tokens, seg.tokens)) {
                    contained = true;
                    break;
                }
            }
            if (!contained) kept.push_back(seg);
        }
        found = std::move(kept);
    }

    std::sort(found.begin(), found.end(),
              [](const RepeatedSegment& a, const RepeatedSegment& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  if (a.tokens.size() != b.tokens.size())
                      return a.tokens.size() > b.tokens.size();
                  return a.tokens < b.tokens;
              });
    return found;
}

struct ViewSpan {
    std::size_t begin = 0;  // [begin, end) token offsets within the sentence
    std::size_t end = 0;
    std::size_t segment_id = 0;
};

struct ViewLine {
    std::string part;
    std::vector<std::string> tokens;
    std::vector<ViewSpan> spans;
};

struct AlignedView {
    std::size_t sentence_id = 0;
    std::vector<ViewLine> lines;                     // in display order
    std::vector<std::vector<std::string>> segments;  // segment_id -> tokens
};

// Side-by-side view of one aligned sentence across the given parts, in the
// given display order (callers put the reference part last). Marked spans
// are the maximal token runs shared verbatim with at least one other
// displayed part; every occurrence of a marked run is flagged in every part
// that contains it, so identical runs carry one segment_id across lines.
inline AlignedView aligned_view(const CorpusBase& base, std::size_t sentence_id,
                                std::span<const std::string> part_names) {
    if (part_names.size() < 2)
        throw ConfigError("aligned_view: need at least two parts");

    std::vector<const Part*> parts;
    for (const std::string& name : part_names) {
        const Part& p = base.part(name);
        if (!p.aligned)
            throw NotAlignedError("part '" + p.name + "' is not aligned");
        if (sentence_id >= p.sentences.size())
            throw SentenceOutOfRangeError("sentence " + std::to_string(sentence_id) +
                                          " out of range");
        parts.push_back(&p);
    }

    std::vector<std::vector<FormId>> forms;
    forms.reserve(parts.size());
    for (const Part* p : parts) forms.push_back(base.sentence_forms(*p, sentence_id));

    // Longest run starting at position i of part p that also occurs in some
    // other displayed part. Sharedness is closed under shrinking a run, so
    // the maximal shared runs are exactly the longest-at-each-start runs not
    // covered by an earlier one.
    auto shared_length = [&](std::size_t p, std::size_t i) {
        std::size_t best = 0;
        for (std::size_t q = 0; q < forms.size(); ++q) {
            if (q == p) continue;
            const std::vector<FormId>& other = forms[q];
            for (std::size_t j = 0; j < other.size(); ++j) {
                std::size_t len = 0;
                while (i + len < forms[p].size() && j + len < other.size() &&
                       forms[p][i + len] == other[j + len])
                    ++len;
                best = std::max(best, len);
            }
        }
        return best;
    };

    std::map<std::vector<FormId>, std::size_t> segment_ids;
    std::vector<std::vector<FormId>> segment_forms;
    for (std::size_t p = 0; p < forms.size(); ++p) {
        std::size_t covered_end = 0;
        for (std::size_t i = 0; i < forms[p].size(); ++i) {
            const std::size_t len = shared_length(p, i);
            if (len == 0 || i + len <= covered_end) continue;
            covered_end = i + len;
            std::vector<FormId> run(forms[p].begin() + i, forms[p].begin() + i + len);
            if (segment_ids.emplace(run, segment_forms.size()).second)
                segment_forms.push_back(std::move(run));
        }
    }

    AlignedView view;
    view.sentence_id = sentence_id;
    for (const std::vector<FormId>& seg : segment_forms) {
        std::vector<std::string> tokens;
        tokens.reserve(seg.size());
        for (const FormId f : seg) tokens.push_back(base.index.surface(f));
        view.segments.push_back(std::move(tokens));
    }

    for (std::size_t p = 0; p < forms.size(); ++p) {
        ViewLine line;
        line.part = parts[p]->name;
        line.tokens = base.sentence_tokens(*parts[p], sentence_id);
        for (std::size_t sid = 0; sid < segment_forms.size(); ++sid) {
            const std::vector<FormId>& seg = segment_forms[sid];
            if (seg.size() > forms[p].size()) continue;
            for (std::size_t i = 0; i + seg.size() <= forms[p].size(); ++i) {
                if (std::equal(seg.begin(), seg.end(), forms[p].begin() + i))
                    line.spans.push_back({i, i + seg.size(), sid});
            }
        }
        std::sort(line.spans.begin(), line.spans.end(),
                  [](const ViewSpan& a, const ViewSpan& b) {
                      if (a.begin != b.begin) return a.begin < b.begin;
                      if (a.end != b.end) return a.end > b.end;
                      return a.segment_id < b.segment_id;
                  });
        view.lines.push_back(std::move(line));
    }
    return view;
}

// Renders a view as plain text: one token line per part followed by one
// underline row per marked span, carets under the covered tokens.
inline std::string render_view(const AlignedView& view) {
    std::string out;
    for (const ViewLine& line : view.lines) {
        std::vector<std::size_t> starts;  // byte offset of each token
        std::string text = line.part + ": ";
        for (std::size_t i = 0; i < line.tokens.size(); ++i) {
            if (i > 0) text += ' ';
            starts.push_back(text.size());
            text += line.tokens[i];
        }
        starts.push_back(text.size() + 1);
        out += text;
        out += '\n';
        for (const ViewSpan& span : line.spans) {
            const std::size_t from = starts[span.begin];
            const std::size_t to = starts[span.end] - 1;
            std::string marks(from, ' ');
            marks.append(to - from, '^');
            marks += " [" + std::to_string(span.segment_id) + "]";
            out += marks;
            out += '\n';
        }
    }
    return out;
}

struct DiffHunk {
    std::size_t a_begin = 0;  // [a_begin, a_end) token range in part A
    std::size_t a_end = 0;
    std::size_t b_begin = 0;  // [b_begin, b_end) token range in part B
    std::size_t b_end = 0;
};

struct SentenceDiff {
    std::size_t sentence = 0;
    std::size_t distance = 0;
    std::vector<DiffHunk> hunks;
};

namespace detail {

// Full Levenshtein table plus a backtrace that prefers diagonal moves, then
// deletions, then insertions, which pins one optimal alignment per pair.
inline SentenceDiff diff_tokens(std::size_t sentence,
                                std::span<const std::string> a,
                                std::span<const std::string> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1));
    for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            d[i][j] = std::min({d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1),
                                d[i - 1][j] + 1, d[i][j - 1] + 1});

    SentenceDiff diff;
    diff.sentence = sentence;
    diff.distance = d[m][n];

    enum class Op { Match, Edit };
    std::vector<Op> ops;  // built back to front
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t i = m, j = n;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && d[i][j] == d[i - 1][j - 1]) {
            ops.push_back(Op::Match);
            cells.push_back({--i, --j});
        } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
            ops.push_back(Op::Edit);  // substitution
            cells.push_back({--i, --j});
        } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
            ops.push_back(Op::Edit);  // deletion
            cells.push_back({--i, j});
        } else {
            ops.push_back(Op::Edit);  // insertion
            cells.push_back({i, --j});
        }
    }
    std::reverse(ops.begin(), ops.end());
    std::reverse(cells.begin(), cells.end());

    // Maximal runs of non-match operations become hunks. Each cell records
    // the (i, j) prefix lengths before the operation applies.
    std::size_t k = 0;
    while (k < ops.size()) {
        if (ops[k] == Op::Match) {
            ++k;
            continue;
        }
        DiffHunk hunk;
        hunk.a_begin = cells[k].first;
        hunk.b_begin = cells[k].second;
        std::size_t end = k;
        while (end < ops.size() && ops[end] == Op::Edit) ++end;
        if (end < ops.size()) {
            hunk.a_end = cells[end].first;
            hunk.b_end = cells[end].second;
        } else {
            hunk.a_end = m;
            hunk.b_end = n;
        }
        diff.hunks.push_back(hunk);
        k = end;
    }
    return diff;
}

}  // namespace detail

// Token-level revisions between two aligned parts: one entry per sentence
// whose form sequences differ, with the edit distance and the changed spans
// of one optimal alignment.
inline std::vector<SentenceDiff> revision_diff(const CorpusBase& base,
                                               std::string_view part_a,
                                               std::string_view part_b) {
    const Part& pa = base.part(part_a);
    const Part& pb = base.part(part_b);
    if (!pa.aligned || !pb.aligned)
        throw NotAlignedError("revision_diff: both parts must be aligned");

    std::vector<SentenceDiff> out;
    for (std::size_t sid = 0; sid < pa.sentences.size(); ++sid) {
        const std::vector<std::string> a = base.sentence_tokens(pa, sid);
        const std::vector<std::string> b = base.sentence_tokens(pb, sid);
        if (a == b) continue;
        out.push_back(detail::diff_tokens(sid, a, b));
    }
    return out;
}

}  // namespace epochscope
