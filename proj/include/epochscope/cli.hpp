#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "epochscope/report.hpp"

namespace epochscope {

namespace detail {

// Part names that read as integers ("01", "13") are epoch names; the range
// filter --parts a..b works on that numeric value.
inline std::optional<long> numeric_name(std::string_view name) {
    if (name.empty() || name.size() > 9) return std::nullopt;
    for (const char c : name)
        if (c < '0' || c > '9') return std::nullopt;
    return std::stol(std::string(name));
}

inline std::pair<long, long> parse_range(const std::string& spec) {
    const std::size_t dots = spec.find("..");
    if (dots == std::string::npos || dots == 0 || dots + 2 >= spec.size())
        throw ConfigError("--parts expects a..b, got '" + spec + "'");
    try {
        const long lo = std::stol(spec.substr(0, dots));
        const long hi = std::stol(spec.substr(dots + 2));
        if (lo > hi) throw ConfigError("--parts range is empty: " + spec);
        return {lo, hi};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("--parts expects integer bounds, got '" + spec + "'");
    }
}

}  // namespace detail

// Everything one invocation needs: the resolved config, lazily built base
// and index snapshot (served from the JSON cache when enabled), and the
// resolved part selection.
class Workspace {
public:
    explicit Workspace(RunConfig cfg) : cfg_(std::move(cfg)) {
        manifest_ = load_manifest(cfg_.manifest);
        policy_ = cfg_.policy();

        Fnv1a64 h;
        h.update(read_file(manifest_.path));
        for (const ManifestEntry& e : manifest_.entries) {
            h.update(e.name);
            h.update(read_file(e.path));
        }
        digest_ = h.hex();

        if (const char* env = std::getenv("EPOCHSCOPE_CACHE_DIR"))
            cache_dir_ = env;
        else
            cache_dir_ = manifest_.path.parent_path() / ".epochscope-cache";
        cache_file_ = cache_dir_ / ("index-" + digest_ + "-" + policy_.digest() + ".json");

        if (cfg_.parts == "all") {
            for (const ManifestEntry& e : manifest_.entries)
                selected_.push_back(e.name);
        } else {
            const auto [lo, hi] = detail::parse_range(cfg_.parts);
            for (const ManifestEntry& e : manifest_.entries) {
                const auto v = detail::numeric_name(e.name);
                if (v && *v >= lo && *v <= hi) selected_.push_back(e.name);
            }
            if (selected_.empty())
                throw ConfigError("--parts " + cfg_.parts + " selects no part");
        }
        for (const std::string& name : selected_)
            if (detail::numeric_name(name) && name != cfg_.ref_part)
                epochs_.push_back(name);
    }

    const RunConfig& cfg() const { return cfg_; }
    const std::vector<std::string>& selected() const { return selected_; }
    const std::vector<std::string>& epochs() const { return epochs_; }
    std::filesystem::path out_dir() const { return cfg_.out_dir; }

    const CorpusBase& base() {
        if (!base_) base_ = build_base(manifest_, policy_);
        return *base_;
    }

    const IndexSnapshot& snapshot() {
        if (snap_) return *snap_;
        if (cfg_.cache) {
            snap_ = try_load_snapshot(cache_file_, digest_, policy_.digest());
            if (snap_) return *snap_;
        }
        snap_ = make_snapshot(base(), digest_);
        if (cfg_.cache) save_snapshot(cache_file_, *snap_);
        return *snap_;
    }

    std::vector<std::string> epochs_or_throw(std::size_t at_least) {
        if (epochs_.size() < at_least)
            throw DataError("need at least " + std::to_string(at_least) +
                            " epoch parts in the selection, have " +
                            std::to_string(epochs_.size()));
        return epochs_;
    }

private:
    RunConfig cfg_;
    Manifest manifest_;
    TokenPolicy policy_;
    std::string digest_;
    std::filesystem::path cache_dir_;
    std::filesystem::path cache_file_;
    std::optional<CorpusBase> base_;
    std::optional<IndexSnapshot> snap_;
    std::vector<std::string> selected_;
    std::vector<std::string> epochs_;
};

namespace detail {

inline Smoothing parse_smoothing(const std::string& s) {
    if (s == "none") return Smoothing::None;
    if (s == "add1") return Smoothing::Add1;
    if (s == "exp") return Smoothing::Exp;
    throw ConfigError("--smoothing expects none|add1|exp, got '" + s + "'");
}

inline VncDistance parse_distance(const std::string& s) {
    if (s == "1-r") return VncDistance::OneMinusR;
    if (s == "half") return VncDistance::HalfOneMinusR;
    throw ConfigError("--distance expects 1-r|half, got '" + s + "'");
}

// -- one function per artifact family; each returns the files it wrote ----

inline std::vector<std::string> run_summary(Workspace& ws) {
    const Table t = summary_table(summaries(ws.snapshot()));
    return {write_table_artifact(t, ws.cfg(), "tsv", ws.out_dir())};
}

inline std::vector<std::string> run_growth(Workspace& ws) {
    std::vector<GrowthCurve> curves;
    for (const std::string& part : ws.selected())
        curves.push_back(vocab_growth(ws.base(), part, ws.cfg().step));
    return {write_table_artifact(growth_table(curves), ws.cfg(), "csv",
                                 ws.out_dir())};
}

inline std::vector<std::string> run_specif(Workspace& ws) {
    std::vector<SpecificityScore> all;
    for (const std::string& part : ws.selected()) {
        auto scores = part_specificities(ws.snapshot(), ws.selected(), part,
                                         ws.cfg().threshold, ws.cfg().min_freq);
        all.insert(all.end(), scores.begin(), scores.end());
    }
    return {write_table_artifact(specif_table(all, ws.cfg().precision), ws.cfg(),
                                 "tsv", ws.out_dir())};
}

inline std::vector<std::string> run_ca(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(2);
    const IndexSnapshot& snap = ws.snapshot();
    const ContingencyTable table = contingency(snap, epochs, ws.cfg().min_freq);
    const CAResult result = ca_fit(table);

    // The reference translation enters as a supplementary column profile
    // over the table's forms.
    std::vector<SupplementaryPoint> supplementary;
    std::size_t ref_rank = 0;
    bool have_ref = false;
    try {
        const std::size_t ref = snap.part_pos(ws.cfg().ref_part);
        std::unordered_map<std::string_view, std::size_t> form_pos;
        for (std::size_t f = 0; f < snap.forms.size(); ++f)
            form_pos.emplace(snap.forms[f], f);
        std::vector<double> counts(table.row_labels.size(), 0.0);
        double total = 0;
        for (std::size_t i = 0; i < table.row_labels.size(); ++i) {
            counts[i] = snap.counts[form_pos.at(table.row_labels[i])][ref];
            total += counts[i];
        }
        if (total > 0) {
            for (double& c : counts) c /= total;
            supplementary.push_back(
                {ws.cfg().ref_part, ca_project_supplementary(result, counts)});
            ref_rank = snap.parts[ref].rank;
            have_ref = true;
        }
    } catch (const UnknownPartError&) {
        // no reference part in this corpus: plot the active columns only
    }

    std::vector<std::string> files;
    files.push_back(write_json_artifact(
        "ca.json", ca_to_json(result, supplementary, ws.cfg()), ws.out_dir()));

    std::vector<CaPlotRow> rows;
    for (std::size_t j = 0; j < result.col_labels.size(); ++j) {
        CaPlotRow row;
        row.part = result.col_labels[j];
        row.rank = snap.parts[snap.part_pos(row.part)].rank;
        row.dim1 = result.dimensions() > 0 ? result.col_coords[j][0] : 0.0;
        row.dim2 = result.dimensions() > 1 ? result.col_coords[j][1] : 0.0;
        row.polyline = true;
        rows.push_back(row);
    }
    if (have_ref) {
        CaPlotRow row;
        row.part = ws.cfg().ref_part;
        row.rank = ref_rank;
        const auto& coords = supplementary.front().coords;
        row.dim1 = !coords.empty() ? coords[0] : 0.0;
        row.dim2 = coords.size() > 1 ? coords[1] : 0.0;
        row.polyline = false;
        rows.push_back(row);
    }
    if (resolve_format(ws.cfg(), "csv") != "json")
        files.push_back(write_table_artifact(
            ca_plot_table(rows, ws.cfg().precision), ws.cfg(), "csv", ws.out_dir()));
    return files;
}

inline std::vector<std::string> run_vnc(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(2);
    std::vector<std::vector<double>> vectors;
    for (const std::string& name : epochs) {
        const UnkProfile profile = unk_profile(ws.base(), name, ws.cfg().unk_token);
        vectors.emplace_back(profile.per_sentence.begin(),
                             profile.per_sentence.end());
    }
    const Dendrogram d =
        vnc_cluster(vectors, epochs, parse_distance(ws.cfg().distance));

    std::string text = detail::artifact_header("vnc", ws.cfg(), d.notices);
    text += render_dendrogram(d, ws.cfg().precision);
    write_text_file(ws.out_dir() / "vnc.txt", text);
    write_json_artifact("vnc.json", vnc_to_json(d, ws.cfg()), ws.out_dir());
    return {"vnc.txt", "vnc.json"};
}

inline std::vector<std::string> run_chrono(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(2);
    const auto rows = chrono_report(ws.snapshot(), epochs, ws.cfg().fq_max);
    return {write_table_artifact(chrono_table(rows, epochs, ws.cfg().precision),
                                 ws.cfg(), "tsv", ws.out_dir())};
}

inline std::vector<std::string> run_segments(Workspace& ws) {
    std::vector<std::string> scope = ws.epochs_or_throw(1);
    try {
        ws.base().part(ws.cfg().ref_part);
        scope.push_back(ws.cfg().ref_part);
    } catch (const UnknownPartError&) {
    }
    SegmentOptions options;
    options.min_len = ws.cfg().segment_min_len;
    options.max_len = ws.cfg().segment_max_len;
    options.min_freq = ws.cfg().segment_min_freq;
    options.maximal_only = ws.cfg().maximal_only;
    const auto segments = repeated_segments(ws.base(), scope, options);
    return {write_table_artifact(segments_table(segments), ws.cfg(), "tsv",
                                 ws.out_dir())};
}

inline std::vector<std::string> run_view(Workspace& ws) {
    if (ws.cfg().sentence < 1)
        throw ConfigError("--sentence is 1-based, got 0");
    std::vector<std::string> parts = ws.epochs_or_throw(1);
    parts.push_back(ws.cfg().ref_part);  // rendered last
    const AlignedView view =
        aligned_view(ws.base(), ws.cfg().sentence - 1, parts);

    std::string text = detail::artifact_header("view", ws.cfg(), {});
    text += render_view(view);
    write_text_file(ws.out_dir() / "view.txt", text);
    write_json_artifact("view.json", view_to_json(view, ws.cfg()), ws.out_dir());
    return {"view.txt", "view.json"};
}

inline std::vector<std::string> run_bleu(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(1);
    const auto rows = bleu_progression(ws.base(), epochs, ws.cfg().ref_part,
                                       parse_smoothing(ws.cfg().smoothing));
    return {write_table_artifact(bleu_table(rows, ws.cfg().precision), ws.cfg(),
                                 "csv", ws.out_dir())};
}

inline std::vector<std::string> run_unk(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(1);
    std::vector<UnkProfile> profiles;
    for (const std::string& name : epochs)
        profiles.push_back(unk_profile(ws.base(), name, ws.cfg().unk_token));
    const std::size_t best = best_epoch_by_unk(profiles);
    return {write_table_artifact(unk_table(profiles, best), ws.cfg(), "tsv",
                                 ws.out_dir())};
}

inline std::vector<std::string> run_diff(Workspace& ws) {
    const auto epochs = ws.epochs_or_throw(2);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::vector<SentenceDiff>> diffs;
    for (std::size_t k = 0; k + 1 < epochs.size(); ++k) {
        pairs.emplace_back(epochs[k], epochs[k + 1]);
        diffs.push_back(revision_diff(ws.base(), epochs[k], epochs[k + 1]));
    }
    return {write_table_artifact(diff_table(ws.base(), pairs, diffs), ws.cfg(),
                                 "tsv", ws.out_dir())};
}

inline std::vector<std::string> run_report(Workspace& ws, std::ostream& out) {
    struct Family {
        const char* name;
        std::vector<std::string> (*fn)(Workspace&);
    };
    static const Family families[] = {
        {"summary", run_summary}, {"growth", run_growth},
        {"specif", run_specif},   {"ca", run_ca},
        {"vnc", run_vnc},         {"chrono", run_chrono},
        {"segments", run_segments}, {"view", run_view},
        {"bleu", run_bleu},       {"unk", run_unk},
        {"diff", run_diff},
    };

    nlohmann::ordered_json index;
    index["artifact"] = "report";
    index["config"] = ws.cfg().echo();
    index["config_hash"] = ws.cfg().hash();
    index["families"] = nlohmann::ordered_json::array();

    std::vector<std::string> all;
    for (const Family& fam : families) {
        std::vector<std::string> files = fam.fn(ws);
        nlohmann::ordered_json jf;
        jf["family"] = fam.name;
        jf["files"] = files;
        index["families"].push_back(std::move(jf));
        for (std::string& f : files) all.push_back(std::move(f));
        out << "report: " << fam.name << " done\n";
    }
    all.push_back(write_json_artifact("report.json", index, ws.out_dir()));
    return all;
}

}  // namespace detail

// Parses arguments (without the program name) and runs one subcommand.
// Returns the process exit code: 0 success, 1 configuration error, 2 data
// error, 3 numeric failure.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"epochscope: textometric analysis of chronological parallel corpora"};
    app.require_subcommand(1);

    static const std::vector<std::string> subcommands = {
        "summary",  "growth", "specif", "ca",   "vnc",  "chrono",
        "segments", "view",   "bleu",   "unk",  "diff", "report"};
    static const std::vector<std::string> descriptions = {
        "lexicometric part summaries",
        "vocabulary growth curves",
        "hypergeometric specificities per part",
        "correspondence analysis of the form x part table",
        "neighbour-constrained clustering of epochs",
        "temporal barycenter / Von Neumann table",
        "repeated segments",
        "aligned differential view of one sentence",
        "BLEU progression per epoch",
        "unknown-token profile per epoch",
        "token revisions between consecutive epochs",
        "all analyses plus an index file"};

    for (std::size_t i = 0; i < subcommands.size(); ++i) {
        CLI::App* sub = app.add_subcommand(subcommands[i], descriptions[i]);
        sub->add_option("--manifest", cfg.manifest, "corpus manifest path")
            ->required();
        sub->add_option("--parts", cfg.parts,
                        "numeric part-name range a..b (default: all parts)");
        sub->add_option("--ref-part", cfg.ref_part, "reference part name");
        sub->add_option("--unk-token", cfg.unk_token, "unknown-token surface");
        sub->add_option("--min-freq", cfg.min_freq,
                        "contingency row threshold (specif, ca)");
        sub->add_option("--threshold", cfg.threshold,
                        "specificity display threshold");
        sub->add_option("--step", cfg.step, "growth sampling step");
        sub->add_option("--fq-max", cfg.fq_max, "chrono keeps forms with FQ > fq-max");
        sub->add_option("--distance", cfg.distance, "vnc distance: 1-r or half");
        sub->add_option("--smoothing", cfg.smoothing,
                        "sentence BLEU smoothing: none, add1 or exp");
        sub->add_option("--sentence", cfg.sentence, "view target sentence, 1-based");
        sub->add_option("--segment-min-len", cfg.segment_min_len,
                        "minimum segment length");
        sub->add_option("--segment-max-len", cfg.segment_max_len,
                        "maximum segment length");
        sub->add_option("--segment-min-freq", cfg.segment_min_freq,
                        "minimum segment frequency");
        sub->add_flag("--maximal-only", cfg.maximal_only,
                      "drop segments contained in equally frequent longer ones");
        sub->add_option("--format", cfg.format,
                        "tabular output format: native, tsv, csv or json");
        sub->add_option("--precision", cfg.precision, "significant digits");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_flag("--cache", cfg.cache, "use the JSON index cache");
        sub->add_option("--punctuation", cfg.punctuation,
                        "punctuation delimiter characters");
        sub->add_option("--apostrophes", cfg.apostrophes, "apostrophe characters");
    }

    try {
        std::vector<const char*> argv;
        argv.push_back("epochscope");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (cfg.precision < 1 || cfg.precision > 17)
            throw ConfigError("--precision must be in 1..17");
        if (cfg.step < 1) throw ConfigError("--step must be >= 1");
        if (cfg.min_freq < 1) throw ConfigError("--min-freq must be >= 1");
        if (cfg.threshold < 0) throw ConfigError("--threshold must be >= 0");
        if (cfg.segment_min_len < 2)
            throw ConfigError("--segment-min-len must be >= 2");
        if (cfg.segment_max_len < cfg.segment_min_len)
            throw ConfigError("--segment-max-len must be >= --segment-min-len");
        if (cfg.segment_min_freq < 2)
            throw ConfigError("--segment-min-freq must be >= 2");
        if (cfg.sentence < 1) throw ConfigError("--sentence is 1-based");
        if (cfg.format != "native" && cfg.format != "tsv" && cfg.format != "csv" &&
            cfg.format != "json")
            throw ConfigError("--format expects native|tsv|csv|json");
        detail::parse_smoothing(cfg.smoothing);
        detail::parse_distance(cfg.distance);
        if (cfg.parts != "all") detail::parse_range(cfg.parts);

        const std::string name = app.get_subcommands().front()->get_name();
        Workspace ws(cfg);

        std::vector<std::string> files;
        if (name == "summary") files = detail::run_summary(ws);
        else if (name == "growth") files = detail::run_growth(ws);
        else if (name == "specif") files = detail::run_specif(ws);
        else if (name == "ca") files = detail::run_ca(ws);
        else if (name == "vnc") files = detail::run_vnc(ws);
        else if (name == "chrono") files = detail::run_chrono(ws);
        else if (name == "segments") files = detail::run_segments(ws);
        else if (name == "view") files = detail::run_view(ws);
        else if (name == "bleu") files = detail::run_bleu(ws);
        else if (name == "unk") files = detail::run_unk(ws);
        else if (name == "diff") files = detail::run_diff(ws);
        else files = detail::run_report(ws, out);

        for (const std::string& f : files)
            out << "wrote " << (ws.out_dir() / f).generic_string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(const std::vector<std::string>& args) {
    return run(args, std::cout, std::cerr);
}

}  // namespace epochscope
