#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "epochscope/segments.hpp"

#include "../support/oracles.hpp"

using epochscope::aligned_view;
using epochscope::AlignedView;
using epochscope::build_base;
using epochscope::CorpusBase;
using epochscope::DiffHunk;
using epochscope::PartInput;
using epochscope::render_view;
using epochscope::RepeatedSegment;
using epochscope::repeated_segments;
using epochscope::revision_diff;
using epochscope::SegmentOptions;
using epochscope::SentenceDiff;
using epochscope::ViewSpan;

namespace {

std::string joined(const std::vector<std::string>& tokens) {
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) key += '\x1f';
        key += tokens[i];
    }
    return key;
}

bool has_run(const std::vector<std::string>& hay,
             const std::vector<std::string>& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
           hay.end();
}

std::size_t lev(const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1),
                               prev[j] + 1, cur[j - 1] + 1});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Splice each hunk's replacement text from b into a; matches must fill the gaps.
std::vector<std::string> apply_hunks(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b,
                                     const std::vector<DiffHunk>& hunks) {
    std::vector<std::string> out;
    std::size_t ai = 0;
    for (const DiffHunk& h : hunks) {
        out.insert(out.end(), a.begin() + ai, a.begin() + h.a_begin);
        out.insert(out.end(), b.begin() + h.b_begin, b.begin() + h.b_end);
        ai = h.a_end;
    }
    out.insert(out.end(), a.begin() + ai, a.end());
    return out;
}

}  // namespace

TEST_CASE("repeated segments on a hand corpus", "[segments]") {
    const auto base = build_base({{"P", "a b c\na b d\n", false}});
    const std::vector<std::string> scope{"P"};

    const auto segs = repeated_segments(base, scope);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].tokens == std::vector<std::string>{"a", "b"});
    CHECK(segs[0].frequency == 2);
    REQUIRE(segs[0].occurrences.size() == 2);
    CHECK(segs[0].occurrences[0].part == 0);
    CHECK(segs[0].occurrences[0].sentence == 0);
    CHECK(segs[0].occurrences[0].start == 0);
    CHECK(segs[0].occurrences[1].part == 0);
    CHECK(segs[0].occurrences[1].sentence == 1);
    CHECK(segs[0].occurrences[1].start == 0);

    SegmentOptions strict;
    strict.min_freq = 3;
    CHECK(repeated_segments(base, scope, strict).empty());
}

TEST_CASE("repeated segments pool occurrences across parts", "[segments]") {
    const auto base =
        build_base({{"P1", "a b c\n", false}, {"P2", "e a b\n", false}});

    const std::vector<std::string> scope{"P1", "P2"};
    const auto segs = repeated_segments(base, scope);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].tokens == std::vector<std::string>{"a", "b"});
    REQUIRE(segs[0].occurrences.size() == 2);
    CHECK(segs[0].occurrences[0].part == 0);
    CHECK(segs[0].occurrences[0].start == 0);
    CHECK(segs[0].occurrences[1].part == 1);
    CHECK(segs[0].occurrences[1].start == 1);

    // occurrence order follows scope order, the part field stays the base position
    const std::vector<std::string> reversed{"P2", "P1"};
    const auto swapped = repeated_segments(base, reversed);
    REQUIRE(swapped.size() == 1);
    REQUIRE(swapped[0].occurrences.size() == 2);
    CHECK(swapped[0].occurrences[0].part == 1);
    CHECK(swapped[0].occurrences[1].part == 0);
}

TEST_CASE("segments never cross sentence boundaries", "[segments]") {
    // one form per line: crossing the terminator would fabricate repeats
    const auto base = build_base({{"P", "a\nb\na\nb\n", false}});
    CHECK(repeated_segments(base, std::vector<std::string>{"P"}).empty());
}

TEST_CASE("punctuation is a delimiter and drops out of segments", "[segments]") {
    const auto base = build_base({{"P", "le chat .\nle chat .\n", false}});
    SegmentOptions opts;
    opts.maximal_only = true;
    const auto segs =
        repeated_segments(base, std::vector<std::string>{"P"}, opts);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].tokens == std::vector<std::string>{"le", "chat"});
    CHECK(segs[0].frequency == 2);

    // forms separated only by punctuation are adjacent in the form sequence
    const auto bridged = build_base({{"P", "a . b\na . b\n", false}});
    const auto spans =
        repeated_segments(bridged, std::vector<std::string>{"P"}, opts);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].tokens == std::vector<std::string>{"a", "b"});
    CHECK(spans[0].frequency == 2);
}

TEST_CASE("maximal_only drops runs absorbed by longer equal-frequency ones",
          "[segments]") {
    const auto base = build_base({{"P", "x y z\nx y z\nx y\n", false}});
    const std::vector<std::string> scope{"P"};

    const auto all = repeated_segments(base, scope);
    REQUIRE(all.size() == 3);
    CHECK(all[0].tokens == std::vector<std::string>{"x", "y"});
    CHECK(all[0].frequency == 3);
    CHECK(all[1].tokens == std::vector<std::string>{"x", "y", "z"});
    CHECK(all[1].frequency == 2);
    CHECK(all[2].tokens == std::vector<std::string>{"y", "z"});
    CHECK(all[2].frequency == 2);

    SegmentOptions opts;
    opts.maximal_only = true;
    const auto kept = repeated_segments(base, scope, opts);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].tokens == std::vector<std::string>{"x", "y"});
    CHECK(kept[1].tokens == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("segment ordering: frequency, then length, then tokens", "[segments]") {
    const auto base = build_base({{"P", "p q\na b\np q\na b\n", false}});
    const auto segs = repeated_segments(base, std::vector<std::string>{"P"});
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].tokens == std::vector<std::string>{"a", "b"});
    CHECK(segs[1].tokens == std::vector<std::string>{"p", "q"});
}

TEST_CASE("repeated segments reject bad options and scopes", "[segments]") {
    const auto base = build_base({{"P", "a b\n", false}});
    const std::vector<std::string> scope{"P"};

    SegmentOptions bad_len;
    bad_len.min_len = 1;
    CHECK_THROWS_AS(repeated_segments(base, scope, bad_len),
                    epochscope::ConfigError);

    SegmentOptions bad_freq;
    bad_freq.min_freq = 1;
    CHECK_THROWS_AS(repeated_segments(base, scope, bad_freq),
                    epochscope::ConfigError);

    CHECK_THROWS_AS(repeated_segments(base, std::vector<std::string>{}),
                    epochscope::EmptyScopeError);
    CHECK_THROWS_AS(repeated_segments(base, std::vector<std::string>{"Q"}),
                    epochscope::UnknownPartError);
}

TEST_CASE("repeated segments match a frequency recount", "[segments]") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t nparts = 2 + trial % 2;
        std::vector<PartInput> inputs;
        std::vector<oracle::RefPart> refs;
        for (std::size_t p = 0; p < nparts; ++p) {
            const std::string name = "P" + std::to_string(p);
            const std::string text =
                oracle::random_document(rng, 4 + rng() % 5, 8);
            inputs.push_back({name, text, false});
            refs.push_back(oracle::ref_scan_part(name, text));
        }
        const auto base = build_base(inputs);

        std::vector<std::string> scope;
        std::vector<std::size_t> scope_idx;
        for (std::size_t p = 0; p < nparts; ++p) {
            scope.push_back(inputs[p].name);
            scope_idx.push_back(p);
        }

        SegmentOptions opts;
        opts.min_len = 2;
        opts.max_len = 5;
        opts.min_freq = 2;
        const auto segs = repeated_segments(base, scope, opts);

        std::map<std::string, std::uint64_t> want;
        for (const auto& [key, n] :
             oracle::ref_ngram_frequencies(refs, scope_idx, 2, 5))
            if (n >= 2) want[key] = n;

        CAPTURE(trial, segs.size(), want.size());
        std::map<std::string, std::uint64_t> got;
        for (const RepeatedSegment& s : segs) {
            got[joined(s.tokens)] = s.frequency;
            CHECK(s.occurrences.size() == s.frequency);
            for (const auto& occ : s.occurrences) {
                REQUIRE(occ.part < base.parts.size());
                const auto line =
                    base.sentence_tokens(base.parts[occ.part], occ.sentence);
                REQUIRE(occ.start + s.tokens.size() <= line.size());
                CHECK(std::equal(s.tokens.begin(), s.tokens.end(),
                                 line.begin() + occ.start));
            }
        }
        CHECK(got == want);

        for (std::size_t i = 1; i < segs.size(); ++i) {
            const auto& a = segs[i - 1];
            const auto& b = segs[i];
            const bool ordered =
                a.frequency > b.frequency ||
                (a.frequency == b.frequency &&
                 (a.tokens.size() > b.tokens.size() ||
                  (a.tokens.size() == b.tokens.size() && a.tokens < b.tokens)));
            CHECK(ordered);
        }

        // maximal filter keeps exactly the containment-free segments
        SegmentOptions maximal = opts;
        maximal.maximal_only = true;
        const auto kept = repeated_segments(base, scope, maximal);
        std::set<std::string> kept_keys;
        for (const RepeatedSegment& s : kept) kept_keys.insert(joined(s.tokens));
        for (const RepeatedSegment& s : segs) {
            bool contained = false;
            for (const RepeatedSegment& t : segs)
                if (t.tokens.size() > s.tokens.size() &&
                    t.frequency == s.frequency && has_run(t.tokens, s.tokens)) {
                    contained = true;
                    break;
                }
            CAPTURE(joined(s.tokens));
            CHECK(kept_keys.count(joined(s.tokens)) == (contained ? 0u : 1u));
        }
    }
}

TEST_CASE("aligned view marks one full-width run on identical lines", "[segments][view]") {
    const auto base = build_base(
        {{"A", "the cold war\n", true}, {"B", "the cold war\n", true}});
    const std::vector<std::string> order{"A", "B"};
    const AlignedView view = aligned_view(base, 0, order);

    CHECK(view.sentence_id == 0);
    REQUIRE(view.segments.size() == 1);
    CHECK(view.segments[0] == std::vector<std::string>{"the", "cold", "war"});
    REQUIRE(view.lines.size() == 2);
    for (const auto& line : view.lines) {
        CHECK(line.tokens == std::vector<std::string>{"the", "cold", "war"});
        REQUIRE(line.spans.size() == 1);
        CHECK(line.spans[0].begin == 0);
        CHECK(line.spans[0].end == 3);
        CHECK(line.spans[0].segment_id == 0);
    }
    CHECK(view.lines[0].part == "A");
    CHECK(view.lines[1].part == "B");

    CHECK(render_view(view) ==
          "A: the cold war\n"
          "   ^^^^^^^^^^^^ [0]\n"
          "B: the cold war\n"
          "   ^^^^^^^^^^^^ [0]\n");
}

TEST_CASE("aligned view shows every occurrence of every shared run", "[segments][view]") {
    const auto base = build_base({{"A", "the cold war\n", true},
                                  {"B", "the <unk> war\n", true},
                                  {"C", "the cold war\n", true}});
    const std::vector<std::string> order{"A", "B", "C"};
    const AlignedView view = aligned_view(base, 0, order);

    REQUIRE(view.segments.size() == 3);
    CHECK(view.segments[0] == std::vector<std::string>{"the", "cold", "war"});
    CHECK(view.segments[1] == std::vector<std::string>{"the"});
    CHECK(view.segments[2] == std::vector<std::string>{"war"});

    REQUIRE(view.lines.size() == 3);
    const auto spans_of = [&](std::size_t i) {
        std::vector<std::array<std::size_t, 3>> out;
        for (const ViewSpan& s : view.lines[i].spans)
            out.push_back({s.begin, s.end, s.segment_id});
        return out;
    };
    // same begin sorts wider span first; shorter nested runs still marked
    const std::vector<std::array<std::size_t, 3>> full{{0, 3, 0}, {0, 1, 1},
                                                       {2, 3, 2}};
    const std::vector<std::array<std::size_t, 3>> gapped{{0, 1, 1}, {2, 3, 2}};
    CHECK(spans_of(0) == full);
    CHECK(spans_of(1) == gapped);
    CHECK(spans_of(2) == full);

    // every span reads back as its segment
    for (const auto& line : view.lines)
        for (const ViewSpan& s : line.spans) {
            REQUIRE(s.end <= line.tokens.size());
            const std::vector<std::string> run(line.tokens.begin() + s.begin,
                                               line.tokens.begin() + s.end);
            CHECK(run == view.segments[s.segment_id]);
        }

    CHECK(render_view(view) ==
          "A: the cold war\n"
          "   ^^^^^^^^^^^^ [0]\n"
          "   ^^^ [1]\n"
          "            ^^^ [2]\n"
          "B: the <unk> war\n"
          "   ^^^ [1]\n"
          "             ^^^ [2]\n"
          "C: the cold war\n"
          "   ^^^^^^^^^^^^ [0]\n"
          "   ^^^ [1]\n"
          "            ^^^ [2]\n");
}

TEST_CASE("aligned view marks repeats within one line", "[segments][view]") {
    const auto base = build_base(
        {{"A", "x <unk> y <unk>\n", true}, {"B", "z <unk>\n", true}});
    const AlignedView view =
        aligned_view(base, 0, std::vector<std::string>{"A", "B"});

    REQUIRE(view.segments.size() == 1);
    CHECK(view.segments[0] == std::vector<std::string>{"<unk>"});
    REQUIRE(view.lines[0].spans.size() == 2);
    CHECK(view.lines[0].spans[0].begin == 1);
    CHECK(view.lines[0].spans[1].begin == 3);
    REQUIRE(view.lines[1].spans.size() == 1);
    CHECK(view.lines[1].spans[0].begin == 1);
}

TEST_CASE("aligned view validates parts and sentence ids", "[segments][view]") {
    const auto base = build_base(
        {{"A", "a b\nc\n", true}, {"B", "a b\nd\n", true}, {"U", "x\n", false}});

    CHECK_THROWS_AS(aligned_view(base, 0, std::vector<std::string>{"A"}),
                    epochscope::ConfigError);
    CHECK_THROWS_AS(aligned_view(base, 0, std::vector<std::string>{"A", "U"}),
                    epochscope::NotAlignedError);
    CHECK_THROWS_AS(aligned_view(base, 2, std::vector<std::string>{"A", "B"}),
                    epochscope::SentenceOutOfRangeError);
    CHECK_THROWS_AS(aligned_view(base, 0, std::vector<std::string>{"A", "Z"}),
                    epochscope::UnknownPartError);
}

TEST_CASE("revision diff emits insertion, substitution and deletion hunks",
          "[segments]") {
    const auto base = build_base({{"A", "the cat sat\na b c\na b c\nsame\n", true},
                                  {"B", "the big cat sat\na x c\na c\nsame\n", true}});
    const auto diffs = revision_diff(base, "A", "B");
    REQUIRE(diffs.size() == 3);

    CHECK(diffs[0].sentence == 0);
    CHECK(diffs[0].distance == 1);
    REQUIRE(diffs[0].hunks.size() == 1);
    CHECK(diffs[0].hunks[0].a_begin == 1);
    CHECK(diffs[0].hunks[0].a_end == 1);  // empty source side: pure insertion
    CHECK(diffs[0].hunks[0].b_begin == 1);
    CHECK(diffs[0].hunks[0].b_end == 2);

    CHECK(diffs[1].sentence == 1);
    CHECK(diffs[1].distance == 1);
    REQUIRE(diffs[1].hunks.size() == 1);
    CHECK(diffs[1].hunks[0].a_begin == 1);
    CHECK(diffs[1].hunks[0].a_end == 2);
    CHECK(diffs[1].hunks[0].b_begin == 1);
    CHECK(diffs[1].hunks[0].b_end == 2);

    CHECK(diffs[2].sentence == 2);
    CHECK(diffs[2].distance == 1);
    REQUIRE(diffs[2].hunks.size() == 1);
    CHECK(diffs[2].hunks[0].a_begin == 1);
    CHECK(diffs[2].hunks[0].a_end == 2);
    CHECK(diffs[2].hunks[0].b_begin == 1);
    CHECK(diffs[2].hunks[0].b_end == 1);  // empty target side: pure deletion
}

TEST_CASE("revision diff separates distant edits and handles tail inserts",
          "[segments]") {
    const auto base = build_base(
        {{"A", "a b c d e\nc\n", true}, {"B", "a X c d f\nc y\n", true}});
    const auto diffs = revision_diff(base, "A", "B");
    REQUIRE(diffs.size() == 2);

    REQUIRE(diffs[0].hunks.size() == 2);
    CHECK(diffs[0].distance == 2);
    CHECK(diffs[0].hunks[0].a_begin == 1);
    CHECK(diffs[0].hunks[0].a_end == 2);
    CHECK(diffs[0].hunks[1].a_begin == 4);
    CHECK(diffs[0].hunks[1].a_end == 5);
    CHECK(diffs[0].hunks[1].b_begin == 4);
    CHECK(diffs[0].hunks[1].b_end == 5);

    // edit run reaching the end of both sentences
    CHECK(diffs[1].distance == 1);
    REQUIRE(diffs[1].hunks.size() == 1);
    CHECK(diffs[1].hunks[0].a_begin == 1);
    CHECK(diffs[1].hunks[0].a_end == 1);
    CHECK(diffs[1].hunks[0].b_begin == 1);
    CHECK(diffs[1].hunks[0].b_end == 2);
}

TEST_CASE("revision diff skips identical sentences and checks alignment",
          "[segments]") {
    const auto same = build_base({{"A", "a b\nc\n", true}, {"B", "a b\nc\n", true}});
    CHECK(revision_diff(same, "A", "B").empty());

    const auto mixed =
        build_base({{"A", "a\nx\n", true}, {"U", "a b\n", false}});
    CHECK_THROWS_AS(revision_diff(mixed, "A", "U"),
                    epochscope::NotAlignedError);
}

TEST_CASE("revision diff hunks rebuild the target sentence", "[segments]") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        const auto base =
            build_base({{"A", oracle::random_document(rng, n, 9), true},
                        {"B", oracle::random_document(rng, n, 9), true}});
        const auto diffs = revision_diff(base, "A", "B");

        std::set<std::size_t> reported;
        for (const SentenceDiff& d : diffs) reported.insert(d.sentence);

        const auto& pa = base.part("A");
        const auto& pb = base.part("B");
        for (std::size_t sid = 0; sid < n; ++sid) {
            const auto a = base.sentence_tokens(pa, sid);
            const auto b = base.sentence_tokens(pb, sid);
            CAPTURE(trial, sid);
            CHECK(reported.count(sid) == (a == b ? 0u : 1u));
        }

        for (const SentenceDiff& d : diffs) {
            const auto a = base.sentence_tokens(pa, d.sentence);
            const auto b = base.sentence_tokens(pb, d.sentence);
            CAPTURE(trial, d.sentence);
            CHECK(d.distance == lev(a, b));
            CHECK(apply_hunks(a, b, d.hunks) == b);

            std::size_t lower = 0, upper = 0, prev_a = 0, prev_b = 0;
            for (const DiffHunk& h : d.hunks) {
                REQUIRE(h.a_begin <= h.a_end);
                REQUIRE(h.b_begin <= h.b_end);
                REQUIRE(h.a_end <= a.size());
                REQUIRE(h.b_end <= b.size());
                CHECK(h.a_begin >= prev_a);
                CHECK(h.b_begin >= prev_b);
                CHECK(h.a_end - h.a_begin + h.b_end - h.b_begin > 0);
                prev_a = h.a_end;
                prev_b = h.b_end;
                lower += std::max(h.a_end - h.a_begin, h.b_end - h.b_begin);
                upper += (h.a_end - h.a_begin) + (h.b_end - h.b_begin);
            }
            CHECK(d.distance >= lower);
            CHECK(d.distance <= upper);
        }
    }
}
