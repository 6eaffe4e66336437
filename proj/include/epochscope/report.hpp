#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epochscope/cache.hpp"
#include "epochscope/chronology.hpp"
#include "epochscope/corpus.hpp"
#include "epochscope/correspondence.hpp"
#include "epochscope/error.hpp"
#include "epochscope/lexstats.hpp"
#include "epochscope/mt_metrics.hpp"
#include "epochscope/segments.hpp"
#include "epochscope/specificity.hpp"
#include "epochscope/text.hpp"
#include "epochscope/version.hpp"

namespace epochscope {

// Fully materialized run configuration. Every field has an explicit value,
// and the canonical echo string (hence its hash) goes into every artifact
// header, so an artifact always names the exact configuration behind it.
struct RunConfig {
    std::string manifest;
    std::string parts = "all";  // "all" or "a..b" over numeric part names
    std::string ref_part = "Target";
    std::string unk_token = "<unk>";
    std::uint64_t min_freq = 10;  // contingency row filter (specif, ca)
    double threshold = 10.0;      // specificity display threshold
    std::size_t step = 100;       // growth sampling step
    std::uint64_t fq_max = 5;     // chrono FQ floor (rows need FQ > fq_max)
    std::string distance = "1-r";  // vnc: "1-r" or "half"
    std::string smoothing = "exp";  // sentence BLEU: none|add1|exp
    std::size_t sentence = 1;       // view target, 1-based
    std::size_t segment_min_len = 2;
    std::size_t segment_max_len = 10;
    std::uint64_t segment_min_freq = 2;
    bool maximal_only = false;
    std::string format = "native";  // native|tsv|csv|json (tabular artifacts)
    int precision = 6;
    std::string out_dir = ".";
    bool cache = false;
    std::string punctuation = to_utf8(TokenPolicy{}.punctuation);
    std::string apostrophes = to_utf8(TokenPolicy{}.apostrophes);

    TokenPolicy policy() const {
        TokenPolicy p;
        p.punctuation = to_u32(punctuation);
        p.apostrophes = to_u32(apostrophes);
        return p;
    }

    std::string echo() const {
        std::string s;
        s += "manifest=" + manifest;
        s += " parts=" + parts;
        s += " ref-part=" + ref_part;
        s += " unk-token=" + unk_token;
        s += " min-freq=" + std::to_string(min_freq);
        s += " threshold=" + format_sig(threshold, 15);
        s += " step=" + std::to_string(step);
        s += " fq-max=" + std::to_string(fq_max);
        s += " distance=" + distance;
        s += " smoothing=" + smoothing;
        s += " sentence=" + std::to_string(sentence);
        s += " segment-min-len=" + std::to_string(segment_min_len);
        s += " segment-max-len=" + std::to_string(segment_max_len);
        s += " segment-min-freq=" + std::to_string(segment_min_freq);
        s += std::string(" maximal-only=") + (maximal_only ? "yes" : "no");
        s += " format=" + format;
        s += " precision=" + std::to_string(precision);
        s += " out=" + out_dir;
        s += std::string(" cache=") + (cache ? "on" : "off");
        s += " punctuation=" + punctuation;
        s += " apostrophes=" + apostrophes;
        return s;
    }

    std::string hash() const { return fnv1a64_hex(echo()); }
};

// Rounds to `sig` significant digits through the printed form, for numbers
// that enter JSON artifacts (text artifacts print format_sig directly).
inline double sigd(double v, int sig) { return std::stod(format_sig(v, sig)); }

struct Table {
    std::string artifact;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string csv_cell(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string artifact_header(std::string_view artifact, const RunConfig& cfg,
                                   const std::vector<std::string>& notes) {
    std::string out;
    out += "# epochscope " + std::string(artifact) + "\n";
    out += "# config: " + cfg.echo() + "\n";
    out += "# config-hash: " + cfg.hash() + "\n";
    for (const std::string& note : notes) out += "# note: " + note + "\n";
    return out;
}

}  // namespace detail

inline std::string render_table(const Table& t, std::string_view format,
                                const RunConfig& cfg) {
    std::string out = detail::artifact_header(t.artifact, cfg, t.notes);
    if (format == "tsv") {
        out += join(t.columns, "\t") + "\n";
        for (const auto& row : t.rows) out += join(row, "\t") + "\n";
    } else if (format == "csv") {
        std::vector<std::string> cells;
        for (const auto& c : t.columns) cells.push_back(detail::csv_cell(c));
        out += join(cells, ",") + "\n";
        for (const auto& row : t.rows) {
            cells.clear();
            for (const auto& c : row) cells.push_back(detail::csv_cell(c));
            out += join(cells, ",") + "\n";
        }
    } else {
        throw ConfigError("render_table: unknown format '" + std::string(format) + "'");
    }
    return out;
}

inline std::string render_table_json(const Table& t, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["artifact"] = t.artifact;
    j["config"] = cfg.echo();
    j["config_hash"] = cfg.hash();
    j["notes"] = t.notes;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    return j.dump(1, '\t') + "\n";
}

// -- tabular artifact builders ---------------------------------------------

inline Table summary_table(const std::vector<PartSummary>& rows) {
    Table t;
    t.artifact = "summary";
    t.columns = {"part", "debut", "fin", "fq", "Fq", "FqMax", "FormeMax"};
    for (const PartSummary& r : rows)
        t.rows.push_back({r.part, std::to_string(r.debut), std::to_string(r.fin),
                          std::to_string(r.distinct_forms),
                          std::to_string(r.occurrences), std::to_string(r.fq_max),
                          r.forme_max});
    return t;
}

inline Table growth_table(const std::vector<GrowthCurve>& curves) {
    Table t;
    t.artifact = "growth";
    t.columns = {"part", "occurrences", "distinct"};
    for (const GrowthCurve& c : curves)
        for (const GrowthPoint& p : c.points)
            t.rows.push_back({c.part, std::to_string(p.occurrences),
                              std::to_string(p.distinct)});
    return t;
}

inline Table specif_table(const std::vector<SpecificityScore>& scores,
                          int precision) {
    Table t;
    t.artifact = "specif";
    t.columns = {"part", "form", "index", "FQ", "fq"};
    for (const SpecificityScore& s : scores)
        t.rows.push_back({s.part, s.form, format_sig(s.index, precision),
                          std::to_string(s.FQ), std::to_string(s.fq)});
    return t;
}

inline Table chrono_table(const std::vector<ChronoRow>& rows,
                          const std::vector<std::string>& range_parts,
                          int precision) {
    Table t;
    t.artifact = "chrono";
    t.columns = {"Item", "FQ", "BT", "VN"};
    for (const std::string& p : range_parts) t.columns.push_back(p + "/fq");
    for (const ChronoRow& r : rows) {
        std::vector<std::string> cells = {
            r.form, std::to_string(r.FQ), format_sig(r.BT, precision),
            r.VN ? format_sig(*r.VN, precision) : "-"};
        for (const std::uint32_t f : r.fq) cells.push_back(std::to_string(f));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

inline Table segments_table(const std::vector<RepeatedSegment>& segments) {
    Table t;
    t.artifact = "segments";
    t.columns = {"segment", "freq", "n_occurrences"};
    for (const RepeatedSegment& s : segments)
        t.rows.push_back({join(s.tokens, " "), std::to_string(s.frequency),
                          std::to_string(s.occurrences.size())});
    return t;
}

inline Table bleu_table(const std::vector<EpochBleu>& rows, int precision) {
    Table t;
    t.artifact = "bleu";
    t.columns = {"epoch", "mean_bleu"};
    for (const EpochBleu& r : rows)
        t.rows.push_back({r.part, format_sig(r.mean_bleu, precision)});
    return t;
}

inline Table unk_table(const std::vector<UnkProfile>& profiles,
                       std::size_t best_index) {
    Table t;
    t.artifact = "unk";
    t.columns = {"epoch", "total_unk", "zero_unk_sentences"};
    for (const UnkProfile& p : profiles)
        t.rows.push_back({p.part, std::to_string(p.total_unk),
                          std::to_string(p.sentences_without_unk)});
    if (best_index < profiles.size())
        t.notes.push_back("most unk-free sentences: " + profiles[best_index].part);
    return t;
}

// One revision row per changed sentence of each compared pair. Spans print
// as half-open token ranges "a..b>c..d", hunks separated by ";".
inline Table diff_table(const CorpusBase& base,
                        const std::vector<std::pair<std::string, std::string>>& pairs,
                        const std::vector<std::vector<SentenceDiff>>& diffs) {
    Table t;
    t.artifact = "diff";
    t.columns = {"part_a", "part_b", "sentence", "distance",
                 "hunks", "a_tokens", "b_tokens"};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const Part& pa = base.part(pairs[k].first);
        const Part& pb = base.part(pairs[k].second);
        for (const SentenceDiff& d : diffs[k]) {
            const auto a = base.sentence_tokens(pa, d.sentence);
            const auto b = base.sentence_tokens(pb, d.sentence);
            std::vector<std::string> spans, atoks, btoks;
            for (const DiffHunk& h : d.hunks) {
                spans.push_back(std::to_string(h.a_begin) + ".." +
                                std::to_string(h.a_end) + ">" +
                                std::to_string(h.b_begin) + ".." +
                                std::to_string(h.b_end));
                atoks.push_back(join(std::vector<std::string>(
                                         a.begin() + static_cast<std::ptrdiff_t>(h.a_begin),
                                         a.begin() + static_cast<std::ptrdiff_t>(h.a_end)),
                                     " "));
                btoks.push_back(join(std::vector<std::string>(
                                         b.begin() + static_cast<std::ptrdiff_t>(h.b_begin),
                                         b.begin() + static_cast<std::ptrdiff_t>(h.b_end)),
                                     " "));
            }
            t.rows.push_back({pairs[k].first, pairs[k].second,
                              std::to_string(d.sentence + 1),
                              std::to_string(d.distance), join(spans, ";"),
                              join(atoks, ";"), join(btoks, ";")});
        }
    }
    return t;
}

struct CaPlotRow {
    std::string part;
    std::size_t rank = 0;
    double dim1 = 0.0;
    double dim2 = 0.0;
    bool polyline = false;  // on the rank-order polyline (active epoch parts)
};

inline Table ca_plot_table(const std::vector<CaPlotRow>& rows, int precision) {
    Table t;
    t.artifact = "ca";
    t.columns = {"part", "rank", "dim1", "dim2", "polyline"};
    for (const CaPlotRow& r : rows)
        t.rows.push_back({r.part, std::to_string(r.rank),
                          format_sig(r.dim1, precision),
                          format_sig(r.dim2, precision),
                          r.polyline ? "yes" : "no"});
    return t;
}

// -- structured (JSON / plain-text) artifacts -------------------------------

struct SupplementaryPoint {
    std::string label;
    std::vector<double> coords;
};

inline nlohmann::ordered_json ca_to_json(
    const CAResult& r, const std::vector<SupplementaryPoint>& supplementary,
    const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["artifact"] = "ca";
    j["config"] = cfg.echo();
    j["config_hash"] = cfg.hash();
    j["total_inertia"] = sigd(r.total_inertia, cfg.precision);
    j["inertias"] = nlohmann::ordered_json::array();
    j["inertia_pct"] = nlohmann::ordered_json::array();
    for (const double v : r.inertias) j["inertias"].push_back(sigd(v, cfg.precision));
    for (const double v : r.inertia_pct)
        j["inertia_pct"].push_back(sigd(v, cfg.precision));
    auto points = [&](const std::vector<std::string>& labels,
                      const std::vector<std::vector<double>>& coords,
                      const std::vector<double>& mass) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            nlohmann::ordered_json p;
            p["label"] = labels[i];
            p["mass"] = sigd(mass[i], cfg.precision);
            p["coords"] = nlohmann::ordered_json::array();
            for (const double c : coords[i])
                p["coords"].push_back(sigd(c, cfg.precision));
            arr.push_back(std::move(p));
        }
        return arr;
    };
    j["rows"] = points(r.row_labels, r.row_coords, r.row_mass);
    j["columns"] = points(r.col_labels, r.col_coords, r.col_mass);
    j["supplementary"] = nlohmann::ordered_json::array();
    for (const SupplementaryPoint& s : supplementary) {
        nlohmann::ordered_json p;
        p["label"] = s.label;
        p["coords"] = nlohmann::ordered_json::array();
        for (const double c : s.coords) p["coords"].push_back(sigd(c, cfg.precision));
        j["supplementary"].push_back(std::move(p));
    }
    return j;
}

inline nlohmann::ordered_json vnc_to_json(const Dendrogram& d, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["artifact"] = "vnc";
    j["config"] = cfg.echo();
    j["config_hash"] = cfg.hash();
    j["distance"] = d.distance == VncDistance::OneMinusR ? "1-r" : "half";
    j["leaves"] = d.leaves;
    j["merges"] = nlohmann::ordered_json::array();
    for (const DendroMerge& m : d.merges) {
        nlohmann::ordered_json jm;
        jm["left"] = m.left_id;
        jm["right"] = m.right_id;
        jm["id"] = m.new_id;
        jm["height"] = sigd(m.height, cfg.precision);
        jm["euclidean_fallback"] = m.euclidean_fallback;
        j["merges"].push_back(std::move(jm));
    }
    j["notices"] = d.notices;
    return j;
}

inline nlohmann::ordered_json view_to_json(const AlignedView& v, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["artifact"] = "view";
    j["config"] = cfg.echo();
    j["config_hash"] = cfg.hash();
    j["sentence"] = v.sentence_id + 1;  // 1-based outside the library
    j["segments"] = v.segments;
    j["lines"] = nlohmann::ordered_json::array();
    for (const ViewLine& line : v.lines) {
        nlohmann::ordered_json jl;
        jl["part"] = line.part;
        jl["tokens"] = line.tokens;
        jl["spans"] = nlohmann::ordered_json::array();
        for (const ViewSpan& s : line.spans) {
            nlohmann::ordered_json js;
            js["begin"] = s.begin;
            js["end"] = s.end;
            js["segment"] = s.segment_id;
            jl["spans"].push_back(std::move(js));
        }
        j["lines"].push_back(std::move(jl));
    }
    return j;
}

// -- file plumbing -----------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write artifact: " + path.string());
    out << content;
}

inline std::string resolve_format(const RunConfig& cfg, std::string_view native) {
    return cfg.format == "native" ? std::string(native) : cfg.format;
}

// Writes one tabular artifact in the resolved format; returns the file name.
inline std::string write_table_artifact(const Table& t, const RunConfig& cfg,
                                        std::string_view native_format,
                                        const std::filesystem::path& out_dir) {
    const std::string format = resolve_format(cfg, native_format);
    const std::string name = t.artifact + "." + format;
    if (format == "json")
        write_text_file(out_dir / name, render_table_json(t, cfg));
    else
        write_text_file(out_dir / name, render_table(t, format, cfg));
    return name;
}

inline std::string write_json_artifact(std::string_view name,
                                       const nlohmann::ordered_json& j,
                                       const std::filesystem::path& out_dir) {
    write_text_file(out_dir / std::string(name), j.dump(1, '\t') + "\n");
    return std::string(name);
}

}  // namespace epochscope
