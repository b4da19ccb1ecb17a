#pragma once

#include "clasp/series.hpp"

namespace clasp {

struct SussConfig {
    double threshold = 0.89;
    std::size_t lower = 10;
    std::size_t upper = 0;  // 0: capped at floor(n / 2)

    void validate() const {
        if (!(threshold > 0.0) || !(threshold < 1.0))
            throw std::invalid_argument("suss threshold must lie in (0, 1)");
        if (lower < 1) throw std::invalid_argument("suss lower bound must be at least 1");
    }
};

enum class WindowSizeOutcome {
    found,                  // smallest width reaching the threshold
    threshold_not_reached,  // no width qualified; upper bound returned
    degenerate,             // constant series; lower bound returned
};

struct WindowSizeResult {
    std::size_t window = 0;
    WindowSizeOutcome outcome = WindowSizeOutcome::found;
};

// Mean over all width-w windows of the (1/sqrt(w))-weighted Euclidean
// distance between the window's (mean, std, range) vector and the global one.
// Expects a min-max scaled series.
inline double stats_diff(std::span<const double> scaled, std::size_t w,
                         const SummaryStats& global) {
    const auto rows = rolling_stats(scaled, w);
    const double inv_sqrt_w = 1.0 / std::sqrt(static_cast<double>(w));
    double total = 0.0;
    for (const auto& r : rows) {
        const double dm = r.mean - global.mean;
        const double ds = r.std - global.std;
        const double dr = r.range - global.range;
        total += inv_sqrt_w * std::sqrt(dm * dm + ds * ds + dr * dr);
    }
    return total / static_cast<double>(rows.size());
}

namespace detail {

inline SummaryStats global_stats(std::span<const double> scaled) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : scaled) {
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(scaled.size());
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0);
    // the range component is pinned to 1 on scaled input
    return SummaryStats{mean, std::sqrt(var), 1.0};
}

// Caches the scaling anchors so a search evaluates each width in O(n).
struct SussScorer {
    std::span<const double> scaled;
    SummaryStats global;
    double s_min = 0.0;  // stats_diff at w = n
    double s_max = 0.0;  // stats_diff at w = 1

    SussScorer(std::span<const double> values, const SummaryStats& g)
        : scaled(values), global(g) {
        s_min = stats_diff(scaled, scaled.size(), global);
        s_max = stats_diff(scaled, 1, global);
    }

    bool degenerate() const { return std::abs(s_max - s_min) < 1e-12; }

    double operator()(std::size_t w) const {
        if (degenerate()) return 1.0;
        const double raw = (stats_diff(scaled, w, global) - s_min) / (s_max - s_min);
        return std::clamp(1.0 - raw, 0.0, 1.0);
    }
};

}  // namespace detail

// Window-size score in [0, 1]: the stats_diff of w rescaled between the
// whole-series and single-point anchors, inverted so larger is better. By
// construction the score is 0 at w = 1 and 1 at w = n.
inline double suss_score(std::span<const double> scaled, std::size_t w,
                         const SummaryStats& global) {
    window_count(scaled.size(), w);  // range check
    return detail::SussScorer(scaled, global)(w);
}

// Learns the window width: smallest w in [lower, upper] whose score reaches
// the threshold, located by exponential doubling followed by binary search.
inline WindowSizeResult select_window_size(std::span<const double> values,
                                           const SussConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = values.size();
    if (n < 4 * cfg.lower)
        throw std::invalid_argument("series too short to learn a window size (need at least " +
                                    std::to_string(4 * cfg.lower) + " values)");
    std::size_t upper = cfg.upper > 0 ? std::min(cfg.upper, n) : n / 2;
    if (upper < cfg.lower) upper = cfg.lower;

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mx - *mn <= 0.0) return {cfg.lower, WindowSizeOutcome::degenerate};

    const std::vector<double> scaled = minmax_scale(values);
    const detail::SussScorer scorer(scaled, detail::global_stats(scaled));
    if (scorer.degenerate()) return {cfg.lower, WindowSizeOutcome::degenerate};

    if (scorer(cfg.lower) >= cfg.threshold) return {cfg.lower, WindowSizeOutcome::found};

    // bracket: score(lo) < threshold <= score(hi)
    std::size_t lo = cfg.lower;
    std::size_t hi = std::min(lo * 2, upper);
    while (scorer(hi) < cfg.threshold) {
        if (hi == upper) return {upper, WindowSizeOutcome::threshold_not_reached};
        lo = hi;
        hi = std::min(hi * 2, upper);
    }
    while (lo + 1 < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (scorer(mid) >= cfg.threshold)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, WindowSizeOutcome::found};
}

inline WindowSizeResult select_window_size(const TimeSeries& ts, const SussConfig& cfg = {}) {
    return select_window_size(ts.values(), cfg);
}

}  // namespace clasp
