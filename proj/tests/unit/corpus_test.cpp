#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "epochscope/corpus.hpp"

#include "../support/oracles.hpp"

using epochscope::build_base;
using epochscope::CorpusBase;
using epochscope::ItemKind;
using epochscope::kNoForm;
using epochscope::PartInput;

namespace {

std::string rejoin(const CorpusBase& base) {
    std::string out;
    for (const auto& item : base.items) out += item.surface;
    return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("epochscope-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("positions tile the backbone", "[corpus]") {
    const CorpusBase base =
        build_base({{"A", "a b\nc d\n", false}, {"B", "x\n", false}});

    REQUIRE(base.items.size() == 10);
    CHECK(base.parts[0].debut == 1);
    CHECK(base.parts[0].fin == 8);  // a,' ',b,'\n',c,' ',d,'\n'
    CHECK(base.parts[1].debut == 9);
    CHECK(base.parts[1].fin == 10);

    REQUIRE(base.parts[0].sentences.size() == 2);
    CHECK(base.sentence_text(base.parts[0], 0) == "a b");
    CHECK(base.sentence_text(base.parts[0], 1) == "c d");
    // the line terminator sits between the sentence spans
    CHECK(base.parts[0].sentences[0].end == 3);
    CHECK(base.parts[0].sentences[1].begin == 4);
    CHECK(base.items[3].surface == "\n");
    CHECK(base.item_form[3] == kNoForm);
}

TEST_CASE("document without trailing terminator still round-trips", "[corpus]") {
    const CorpusBase base = build_base({{"A", "a b\nc", false}});
    CHECK(rejoin(base) == "a b\nc");
    CHECK(base.parts[0].sentences.size() == 2);
    CHECK(base.parts[0].fin == base.items.size());
}

TEST_CASE("empty middle line becomes an empty sentence", "[corpus]") {
    const CorpusBase base = build_base({{"A", "a\n\nb\n", false}});
    REQUIRE(base.parts[0].sentences.size() == 3);
    CHECK(base.parts[0].sentences[1].begin == base.parts[0].sentences[1].end);
    CHECK(rejoin(base) == "a\n\nb\n");
}

TEST_CASE("joining item surfaces reproduces every document", "[corpus]") {
    std::mt19937 rng(123u);
    for (int i = 0; i < 30; ++i) {
        const std::string d1 = oracle::random_document(rng, 3, 8);
        const std::string d2 = oracle::random_document(rng, 2, 8);
        const CorpusBase base = build_base({{"A", d1, false}, {"B", d2, false}});
        CHECK(rejoin(base) == d1 + d2);
    }
}

TEST_CASE("frequency marginals agree with each other", "[corpus]") {
    std::mt19937 rng(321u);
    for (int i = 0; i < 20; ++i) {
        std::vector<PartInput> inputs;
        const std::size_t nparts = 2 + i % 3;
        for (std::size_t p = 0; p < nparts; ++p)
            inputs.push_back({"P" + std::to_string(p),
                              oracle::random_document(rng, 3, 8), false});
        const CorpusBase base = build_base(inputs);
        const auto& ix = base.index;

        std::uint64_t grand = 0;
        for (std::size_t p = 0; p < nparts; ++p) {
            const auto& st = ix.part_stats(p);
            std::uint64_t occ = 0, distinct = 0, fq_max = 0;
            for (epochscope::FormId f = 0; f < ix.form_count(); ++f) {
                occ += ix.count(f, p);
                if (ix.count(f, p) > 0) ++distinct;
                if (ix.count(f, p) > fq_max) fq_max = ix.count(f, p);
            }
            CHECK(st.occurrences == occ);
            CHECK(st.distinct == distinct);
            CHECK(st.fq_max == fq_max);
            grand += occ;
        }
        std::uint64_t total_by_form = 0;
        for (epochscope::FormId f = 0; f < ix.form_count(); ++f) {
            std::uint64_t row = 0;
            for (std::size_t p = 0; p < nparts; ++p) row += ix.count(f, p);
            CHECK(row == ix.total(f));
            CHECK(row > 0);  // no phantom forms
            total_by_form += row;
        }
        CHECK(total_by_form == grand);
    }
}

TEST_CASE("forme max ties break toward the earliest occurrence", "[corpus]") {
    const CorpusBase base = build_base({{"A", "b a b a\n", false}});
    const auto& st = base.index.part_stats(0);
    CHECK(st.fq_max == 2);
    CHECK(base.index.surface(st.forme_max) == "b");
}

TEST_CASE("aligned parts must share the sentence count", "[corpus]") {
    CHECK_THROWS_AS(build_base({{"A", "a\nb\n", true}, {"B", "c\n", true}}),
                    epochscope::AlignmentError);
    // unaligned parts may differ
    CHECK_NOTHROW(build_base({{"A", "a\nb\n", true}, {"B", "c\n", false}}));
}

TEST_CASE("empty inputs are rejected", "[corpus]") {
    CHECK_THROWS_AS(build_base(std::vector<PartInput>{}), epochscope::EmptyPartError);
    CHECK_THROWS_AS(build_base({{"A", "", false}}), epochscope::EmptyPartError);
}

TEST_CASE("part lookup by name", "[corpus]") {
    const CorpusBase base = build_base({{"A", "a\n", false}, {"B", "b\n", false}});
    CHECK(base.part_pos("B") == 1);
    CHECK(base.part("A").rank == 1);
    CHECK_THROWS_AS(base.part_pos("C"), epochscope::UnknownPartError);
}

TEST_CASE("manifest loading resolves paths and validates ranks", "[corpus]") {
    const auto dir = scratch_dir("manifest");
    write(dir / "one.txt", "un deux\n");
    write(dir / "two.txt", "trois\n");
    write(dir / "manifest.tsv",
          "# comment line\n"
          "1\tSource\tone.txt\taligned:yes\n"
          "2\tTarget\ttwo.txt\taligned:no\n");

    const auto manifest = epochscope::load_manifest(dir / "manifest.tsv");
    REQUIRE(manifest.entries.size() == 2);
    CHECK(manifest.entries[0].name == "Source");
    CHECK(manifest.entries[0].aligned);
    CHECK_FALSE(manifest.entries[1].aligned);
    CHECK(manifest.entries[1].path == dir / "two.txt");

    const CorpusBase base = build_base(manifest);
    CHECK(base.parts[0].name == "Source");
    CHECK(base.index.part_stats(0).occurrences == 2);

    write(dir / "bad1.tsv", "2\tA\tone.txt\taligned:yes\n");
    CHECK_THROWS_AS(epochscope::load_manifest(dir / "bad1.tsv"),
                    epochscope::ConfigError);
    write(dir / "bad2.tsv", "1\tA\tone.txt\tmaybe\n");
    CHECK_THROWS_AS(epochscope::load_manifest(dir / "bad2.tsv"),
                    epochscope::ConfigError);
    write(dir / "bad3.tsv", "1\tA\tone.txt\n");
    CHECK_THROWS_AS(epochscope::load_manifest(dir / "bad3.tsv"),
                    epochscope::ConfigError);
    write(dir / "bad4.tsv", "\n#\n");
    CHECK_THROWS_AS(epochscope::load_manifest(dir / "bad4.tsv"),
                    epochscope::ConfigError);
    CHECK_THROWS_AS(epochscope::load_manifest(dir / "absent.tsv"),
                    epochscope::ConfigError);

    write(dir / "bad5.tsv", "1\tA\tmissing.txt\taligned:yes\n");
    CHECK_THROWS_AS(build_base(epochscope::load_manifest(dir / "bad5.tsv")),
                    epochscope::DataError);
}
