#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epochscope/error.hpp"
#include "epochscope/text.hpp"
#include "epochscope/tokenizer.hpp"

namespace epochscope {

using FormId = std::uint32_t;
inline constexpr FormId kNoForm = std::numeric_limits<FormId>::max();

// Item index range [begin, end) of one sentence, line terminator excluded.
// begin == end marks an empty line.
struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct Part {
    std::string name;
    std::size_t rank = 0;   // 1-based, chronological
    std::size_t debut = 0;  // first position on the trame, 1-based
    std::size_t fin = 0;    // last position, inclusive
    bool aligned = false;
    std::size_t first_item = 0;  // [first_item, end_item) into the item vector
    std::size_t end_item = 0;
    std::vector<SentenceSpan> sentences;
};

struct PartStats {
    std::uint64_t occurrences = 0;  // Fq: form occurrences, delimiters excluded
    std::uint64_t distinct = 0;     // fq: distinct forms
    std::uint64_t fq_max = 0;
    FormId forme_max = kNoForm;  // earliest first occurrence wins ties
};

// Per-form and per-part frequency bookkeeping for a built base.
class FrequencyIndex {
public:
    FormId intern(std::string_view surface, std::size_t part_count) {
        auto it = ids_.find(std::string(surface));
        if (it != ids_.end()) return it->second;
        const FormId id = static_cast<FormId>(forms_.size());
        forms_.emplace_back(surface);
        ids_.emplace(forms_.back(), id);
        counts_.emplace_back(part_count, 0);
        totals_.push_back(0);
        return id;
    }

    std::size_t form_count() const { return forms_.size(); }
    const std::string& surface(FormId id) const { return forms_[id]; }

    std::optional<FormId> find(std::string_view surface) const {
        auto it = ids_.find(std::string(surface));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    std::uint32_t count(FormId form, std::size_t part) const {
        return counts_[form][part];
    }
    std::uint64_t total(FormId form) const { return totals_[form]; }

    const PartStats& part_stats(std::size_t part) const { return part_stats_[part]; }
    std::size_t part_count() const { return part_stats_.size(); }

    void add_occurrence(FormId form, std::size_t part) {
        ++counts_[form][part];
        ++totals_[form];
    }

    void finalize(std::size_t part_count,
                  const std::vector<std::vector<FormId>>& first_occurrence_order) {
        part_stats_.assign(part_count, {});
        for (std::size_t p = 0; p < part_count; ++p) {
            PartStats& st = part_stats_[p];
            for (FormId f = 0; f < counts_.size(); ++f) {
                const std::uint64_t c = counts_[f][p];
                if (c == 0) continue;
                st.occurrences += c;
                ++st.distinct;
            }
            // forme_max: walk forms in first-occurrence order so the earliest
            // form attaining the maximum wins.
            for (const FormId f : first_occurrence_order[p]) {
                if (counts_[f][p] > st.fq_max) {
                    st.fq_max = counts_[f][p];
                    st.forme_max = f;
                }
            }
        }
    }

private:
    std::vector<std::string> forms_;
    std::unordered_map<std::string, FormId> ids_;
    std::vector<std::vector<std::uint32_t>> counts_;  // [form][part]
    std::vector<std::uint64_t> totals_;
    std::vector<PartStats> part_stats_;
};

struct PartInput {
    std::string name;
    std::string text;  // full document, one sentence per line
    bool aligned = true;
};

// An immutable textometric base: the trame (all items in position order),
// the partition laid over it, and the frequency index. Analyses only read.
struct CorpusBase {
    TokenPolicy policy;
    std::vector<Item> items;
    std::vector<FormId> item_form;  // kNoForm for delimiters
    std::vector<Part> parts;
    FrequencyIndex index;

    const Part& part(std::string_view name) const {
        for (const Part& p : parts)
            if (p.name == name) return p;
        throw UnknownPartError(std::string(name));
    }

    std::size_t part_pos(std::string_view name) const {
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (parts[i].name == name) return i;
        throw UnknownPartError(std::string(name));
    }

    // Reconstructs the original line bytes of sentence `sid` (0-based).
    std::string sentence_text(const Part& p, std::size_t sid) const {
        const SentenceSpan& s = p.sentences.at(sid);
        std::string out;
        for (std::size_t i = s.begin; i < s.end; ++i) out += items[i].surface;
        return out;
    }

    std::vector<FormId> sentence_forms(const Part& p, std::size_t sid) const {
        const SentenceSpan& s = p.sentences.at(sid);
        std::vector<FormId> out;
        for (std::size_t i = s.begin; i < s.end; ++i)
            if (item_form[i] != kNoForm) out.push_back(item_form[i]);
        return out;
    }

    std::vector<std::string> sentence_tokens(const Part& p, std::size_t sid) const {
        std::vector<std::string> out;
        for (const FormId f : sentence_forms(p, sid)) out.push_back(index.surface(f));
        return out;
    }

    // Sentence count shared by all aligned parts.
    std::size_t aligned_sentence_count() const {
        for (const Part& p : parts)
            if (p.aligned) return p.sentences.size();
        return 0;
    }
};

// Builds the trame, partition and frequency index from ordered part inputs.
// Documents are tokenized line by line; each line terminator becomes its own
// delimiter item outside the sentence span, so sentence spans stay disjoint
// and joining all item surfaces reproduces every document byte for byte.
inline CorpusBase build_base(const std::vector<PartInput>& inputs,
                             const TokenPolicy& policy = {}) {
    if (inputs.empty()) throw EmptyPartError("no parts in manifest");

    CorpusBase base;
    base.policy = policy;
    const std::size_t part_count = inputs.size();
    std::vector<std::vector<FormId>> first_occurrence(part_count);
    std::optional<std::size_t> aligned_count;

    for (std::size_t p = 0; p < part_count; ++p) {
        const PartInput& in = inputs[p];
        Part part;
        part.name = in.name;
        part.rank = p + 1;
        part.aligned = in.aligned;
        part.first_item = base.items.size();

        std::string_view text = in.text;
        if (text.empty()) throw EmptyPartError("part '" + in.name + "' has zero lines");

        std::size_t line_start = 0;
        while (line_start < text.size()) {
            std::size_t nl = text.find('\n', line_start);
            const bool has_terminator = nl != std::string_view::npos;
            if (!has_terminator) nl = text.size();
            const std::string_view line = text.substr(line_start, nl - line_start);

            SentenceSpan span;
            span.begin = base.items.size();
            for (Item& item : tokenize(line, policy)) {
                if (item.kind == ItemKind::Form) {
                    const FormId id = base.index.intern(item.surface, part_count);
                    if (base.index.count(id, p) == 0) first_occurrence[p].push_back(id);
                    base.index.add_occurrence(id, p);
                    base.item_form.push_back(id);
                } else {
                    base.item_form.push_back(kNoForm);
                }
                base.items.push_back(std::move(item));
            }
            span.end = base.items.size();
            part.sentences.push_back(span);

            if (has_terminator) {
                base.items.push_back({"\n", ItemKind::Delimiter});
                base.item_form.push_back(kNoForm);
            }
            line_start = nl + 1;
        }

        part.end_item = base.items.size();
        part.debut = part.first_item + 1;
        part.fin = part.end_item;  // == index of last item + 1, positions 1-based

        if (in.aligned) {
            if (!aligned_count) {
                aligned_count = part.sentences.size();
            } else if (*aligned_count != part.sentences.size()) {
                std::ostringstream msg;
                msg << "aligned part '" << in.name << "' has "
                    << part.sentences.size() << " sentences, expected "
                    << *aligned_count;
                throw AlignmentError(msg.str());
            }
        }
        base.parts.push_back(std::move(part));
    }

    base.index.finalize(part_count, first_occurrence);
    return base;
}

// -- manifest ------------------------------------------------------------

struct ManifestEntry {
    std::size_t rank = 0;
    std::string name;
    std::filesystem::path path;  // resolved against the manifest directory
    bool aligned = false;
};

struct Manifest {
    std::filesystem::path path;
    std::vector<ManifestEntry> entries;
};

// Manifest lines: rank<TAB>part_name<TAB>path<TAB>aligned:{yes,no}, ranks
// ascending from 1. Blank lines and lines starting with '#' are skipped.
inline Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();

    Manifest manifest;
    manifest.path = path;
    const auto dir = path.parent_path();
    std::size_t lineno = 0;
    for (const std::string_view line : split_lines(content)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 4)
            throw ConfigError("manifest line " + std::to_string(lineno) +
                              ": expected 4 tab-separated fields");
        ManifestEntry e;
        try {
            e.rank = std::stoul(std::string(fields[0]));
        } catch (const std::exception&) {
            throw ConfigError("manifest line " + std::to_string(lineno) +
                              ": bad rank '" + std::string(fields[0]) + "'");
        }
        if (e.rank != manifest.entries.size() + 1)
            throw ConfigError("manifest line " + std::to_string(lineno) +
                              ": ranks must be 1..n ascending");
        e.name = std::string(fields[1]);
        e.path = dir / std::string(fields[2]);
        if (fields[3] == "aligned:yes") {
            e.aligned = true;
        } else if (fields[3] == "aligned:no") {
            e.aligned = false;
        } else {
            throw ConfigError("manifest line " + std::to_string(lineno) +
                              ": expected aligned:{yes,no}, got '" +
                              std::string(fields[3]) + "'");
        }
        manifest.entries.push_back(std::move(e));
    }
    if (manifest.entries.empty())
        throw ConfigError("manifest has no part entries: " + path.string());
    return manifest;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open document: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline CorpusBase build_base(const Manifest& manifest, const TokenPolicy& policy = {}) {
    std::vector<PartInput> inputs;
    inputs.reserve(manifest.entries.size());
    for (const ManifestEntry& e : manifest.entries)
        inputs.push_back({e.name, read_file(e.path), e.aligned});
    return build_base(inputs, policy);
}

}  // namespace epochscope
