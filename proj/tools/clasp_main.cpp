// clasp: self-supervised time series segmentation from the command line.
//
// Subcommands: segment, profile, window-size, evaluate. All outputs are
// deterministic for identical flags, inputs and seed; timing goes to stderr.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "clasp/clasp.hpp"

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

clasp::SeriesFormat parse_format(const std::string& format) {
    if (format == "plain") return clasp::SeriesFormat::plain;
    if (format == "annotated") return clasp::SeriesFormat::annotated;
    throw std::runtime_error("unknown format '" + format + "'");
}

clasp::Scorer parse_scorer(const std::string& name) {
    if (name == "roc_auc") return clasp::Scorer::roc_auc;
    if (name == "macro_f1") return clasp::Scorer::macro_f1;
    throw std::runtime_error("unknown score '" + name + "'");
}

// Comma-separated offsets, or a path to an annotated document whose
// change_points field is used. An empty string is the empty set.
std::vector<std::size_t> parse_cp_list(const std::string& arg) {
    if (arg.empty()) return {};
    if (std::filesystem::exists(arg)) {
        const auto rec = clasp::load_annotated(arg);
        if (!rec.change_points)
            throw std::runtime_error(arg + ": no change_points field");
        return *rec.change_points;
    }
    std::vector<std::size_t> cps;
    std::stringstream ss(arg);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const std::string t = clasp::detail::strip(token);
        if (t.empty()) throw std::runtime_error("empty entry in change point list");
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
        if (ec != std::errc{} || ptr != t.data() + t.size())
            throw std::runtime_error("cannot parse change point '" + t + "'");
        cps.push_back(value);
    }
    return cps;
}

// All output is assembled in memory first so failures never leave behind a
// partial file.
void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

void warn_window_outcome(clasp::WindowSizeOutcome outcome, std::size_t w) {
    switch (outcome) {
        case clasp::WindowSizeOutcome::found:
            break;
        case clasp::WindowSizeOutcome::degenerate:
            std::cerr << "warning: constant series; falling back to the lower bound "
                      << w << "\n";
            break;
        case clasp::WindowSizeOutcome::threshold_not_reached:
            std::cerr << "warning: no window size reached the score threshold; "
                         "returning the upper bound " << w << "\n";
            break;
    }
}

std::string render_profile(const clasp::Profile& profile) {
    std::string out;
    out.reserve(profile.scores.size() * 12);
    for (std::size_t i = 0; i < profile.scores.size(); ++i) {
        out += std::to_string(i);
        out += ' ';
        out += fixed6(profile.scores[i]);
        out += '\n';
    }
    return out;
}

struct SeriesOptions {
    std::string input;
    std::string format = "plain";
    std::size_t window = 0;
    bool auto_window = false;
    double threshold = 0.89;

    clasp::TimeSeries load() const {
        return clasp::TimeSeries(clasp::load_series(input, parse_format(format)).values);
    }

    // --window wins when given; otherwise the width is learned from the data.
    std::pair<std::size_t, clasp::WindowSizeOutcome> resolve_window(
        const clasp::TimeSeries& ts) const {
        if (window > 0) return {window, clasp::WindowSizeOutcome::found};
        clasp::SussConfig cfg;
        cfg.threshold = threshold;
        const auto r = clasp::select_window_size(ts.values(), cfg);
        warn_window_outcome(r.outcome, r.window);
        return {r.window, r.outcome};
    }
};

void add_series_options(CLI::App* cmd, SeriesOptions& opts, bool with_window = true) {
    cmd->add_option("--input", opts.input, "input series file")->required();
    cmd->add_option("--format", opts.format, "input format: plain | annotated")
        ->check(CLI::IsMember({"plain", "annotated"}));
    if (with_window) {
        auto* w = cmd->add_option("--window", opts.window, "window width (data points)")
                      ->check(CLI::PositiveNumber);
        auto* a = cmd->add_flag("--auto-window", opts.auto_window,
                                "learn the window width from the data (default)");
        w->excludes(a);
        a->excludes(w);
    }
}

int run_segment(const SeriesOptions& series, std::size_t num_cps_segments,
                std::size_t n_iter, std::uint64_t seed, double max_p, const std::string& score,
                const std::string& output, const std::string& emit_profile) {
    const auto ts = series.load();
    const auto started = std::chrono::steady_clock::now();

    clasp::SegmentationConfig cfg;
    cfg.ensemble.n_iter = n_iter;
    cfg.ensemble.seed = seed;
    cfg.ensemble.scorer = parse_scorer(score);
    cfg.validation.max_p_value = max_p;
    if (num_cps_segments > 0) {
        cfg.mode = clasp::SegmentationMode::fixed;
        cfg.num_segments = num_cps_segments;
    }

    const auto [w, outcome] = series.resolve_window(ts);
    clasp::Segmentation seg = clasp::segment(ts.values(), w, cfg);
    seg.window_auto = series.window == 0;
    seg.window_outcome = outcome;

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    nlohmann::ordered_json doc;
    doc["n"] = ts.size();
    doc["window"] = seg.window;
    doc["window_source"] = seg.window_auto ? "auto" : "flag";
    doc["mode"] = seg.mode == clasp::SegmentationMode::learned ? "learned" : "fixed";
    doc["score"] = score;
    doc["n_iter"] = n_iter;
    doc["seed"] = seed;
    doc["p_value_threshold"] = max_p;
    auto offsets = nlohmann::ordered_json::array();
    auto details = nlohmann::ordered_json::array();
    for (const auto& cp : seg.change_points) {
        offsets.push_back(cp.offset);
        nlohmann::ordered_json d;
        d["offset"] = cp.offset;
        d["score"] = round6(cp.score);
        d["p_value"] = cp.p_value;
        details.push_back(d);
    }
    doc["change_points"] = offsets;
    doc["details"] = details;

    write_output(doc.dump(2) + "\n", output);
    if (!emit_profile.empty()) write_output(render_profile(seg.root_profile), emit_profile);
    std::cerr << "segment: " << elapsed << " ms\n";
    return 0;
}

int run_profile(const SeriesOptions& series, std::size_t n_iter, std::uint64_t seed,
                const std::string& score, const std::string& output) {
    const auto ts = series.load();
    const auto [w, outcome] = series.resolve_window(ts);
    (void)outcome;

    clasp::EnsembleConfig cfg;
    cfg.n_iter = n_iter;
    cfg.seed = seed;
    cfg.scorer = parse_scorer(score);
    const auto profile = clasp::compute_ensemble_profile(ts.values(), w, cfg);
    if (!profile)
        throw std::runtime_error("series too short for window " + std::to_string(w));
    write_output(render_profile(*profile), output);
    return 0;
}

int run_window_size(const SeriesOptions& series) {
    const auto ts = series.load();
    clasp::SussConfig cfg;
    cfg.threshold = series.threshold;
    const auto r = clasp::select_window_size(ts.values(), cfg);
    warn_window_outcome(r.outcome, r.window);
    std::cout << r.window << "\n";
    return 0;
}

int run_evaluate(const std::string& truth_arg, const std::string& pred_arg, std::size_t length,
                 const std::string& metric, double margin) {
    const auto truth = parse_cp_list(truth_arg);
    const auto pred = parse_cp_list(pred_arg);
    std::string out;
    if (metric == "covering" || metric == "both")
        out += "covering " + fixed6(clasp::covering_score(truth, pred, length)) + "\n";
    if (metric == "f1" || metric == "both")
        out += "f1 " + fixed6(clasp::f1_score(truth, pred, length, margin)) + "\n";
    std::cout << out;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "clasp: self-supervised, parameter-free time series segmentation.\n"
        "Set CLASP_THREADS to bound worker threads (default: all cores)."};
    app.require_subcommand(1);

    SeriesOptions seg_series;
    std::size_t seg_ncps = 0;
    std::size_t seg_niter = 30;
    std::uint64_t seg_seed = 0;
    double seg_pvalue = 1e-15;
    std::string seg_score = "roc_auc";
    std::string seg_output;
    std::string seg_emit_profile;
    auto* seg = app.add_subcommand("segment", "detect change points");
    add_series_options(seg, seg_series);
    seg->add_option("--n-cps", seg_ncps,
                    "segment into this many parts (one fewer change points); "
                    "omits statistical validation")
        ->check(CLI::PositiveNumber);
    seg->add_option("--n-iter", seg_niter, "temporal constraint draws (default 30)");
    seg->add_option("--seed", seg_seed, "random seed (default 0)");
    seg->add_option("--p-value", seg_pvalue, "max approved p-value (default 1e-15)");
    seg->add_option("--score", seg_score, "classification score: roc_auc | macro_f1")
        ->check(CLI::IsMember({"roc_auc", "macro_f1"}));
    seg->add_option("--output", seg_output, "write the result document here instead of stdout");
    seg->add_option("--emit-profile", seg_emit_profile,
                    "write the top-level profile as two-column text");

    SeriesOptions prof_series;
    std::size_t prof_niter = 30;
    std::uint64_t prof_seed = 0;
    std::string prof_score = "roc_auc";
    std::string prof_output;
    auto* prof = app.add_subcommand("profile", "emit the classification score profile");
    add_series_options(prof, prof_series);
    prof->add_option("--n-iter", prof_niter, "temporal constraint draws (default 30)");
    prof->add_option("--seed", prof_seed, "random seed (default 0)");
    prof->add_option("--score", prof_score, "classification score: roc_auc | macro_f1")
        ->check(CLI::IsMember({"roc_auc", "macro_f1"}));
    prof->add_option("--output", prof_output, "write the profile here instead of stdout");

    SeriesOptions ws_series;
    auto* ws = app.add_subcommand("window-size", "learn the window width");
    add_series_options(ws, ws_series, false);
    ws->add_option("--threshold", ws_series.threshold, "score threshold (default 0.89)");

    std::string eval_truth;
    std::string eval_pred;
    std::size_t eval_length = 0;
    std::string eval_metric = "both";
    double eval_margin = 0.01;
    auto* eval = app.add_subcommand("evaluate", "score a predicted segmentation");
    eval->add_option("--truth", eval_truth, "ground truth change points (list or annotated file)")
        ->required();
    eval->add_option("--pred", eval_pred, "predicted change points (list or annotated file)")
        ->required();
    eval->add_option("--length", eval_length, "series length")->required()
        ->check(CLI::PositiveNumber);
    eval->add_option("--metric", eval_metric, "covering | f1 | both")
        ->check(CLI::IsMember({"covering", "f1", "both"}));
    eval->add_option("--margin", eval_margin, "margin as a fraction of the length (default 0.01)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (seg->parsed())
            return run_segment(seg_series, seg_ncps, seg_niter, seg_seed, seg_pvalue,
                               seg_score, seg_output, seg_emit_profile);
        if (prof->parsed())
            return run_profile(prof_series, prof_niter, prof_seed, prof_score, prof_output);
        if (ws->parsed()) return run_window_size(ws_series);
        if (eval->parsed())
            return run_evaluate(eval_truth, eval_pred, eval_length, eval_metric, eval_margin);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
