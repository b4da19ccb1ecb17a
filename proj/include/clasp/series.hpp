#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clasp {

// Window standard deviations below this floor are treated as zero; such
// windows z-normalize to the zero vector so flat regions compare as equal.
inline constexpr double kDegenerateStd = 1e-8;

// Immutable sequence of real values. Ingestion rejects NaN/Inf outright.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty())
            throw std::invalid_argument("TimeSeries: need at least one value");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw std::invalid_argument("TimeSeries: non-finite value at offset " +
                                            std::to_string(i));
        }
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
};

struct Window {
    std::size_t start = 0;
    std::size_t width = 0;
};

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    double range = 0.0;
};

inline std::size_t window_count(std::size_t n, std::size_t w) {
    if (w < 1 || w > n)
        throw std::invalid_argument("window width " + std::to_string(w) +
                                    " out of range [1, " + std::to_string(n) + "]");
    return n - w + 1;
}

inline std::vector<Window> windows(const TimeSeries& ts, std::size_t w) {
    const std::size_t m = window_count(ts.size(), w);
    std::vector<Window> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = Window{i, w};
    return out;
}

// Z-normalizes one window of values; constant windows map to the zero vector.
inline std::vector<double> znormalize(std::span<const double> values,
                                      double eps = kDegenerateStd) {
    if (values.empty()) throw std::invalid_argument("znormalize: empty input");
    if (!(eps > 0.0)) throw std::invalid_argument("znormalize: eps must be positive");
    const std::size_t n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double std_dev = std::sqrt(ss / static_cast<double>(n));
    std::vector<double> out(n, 0.0);
    if (std_dev < eps) return out;
    for (std::size_t i = 0; i < n; ++i) out[i] = (values[i] - mean) / std_dev;
    return out;
}

// Mean/std/range for every width-w window. Mean and std come from one pass
// over prefix sums of values and squares; range uses monotonic deques.
inline std::vector<SummaryStats> rolling_stats(std::span<const double> values, std::size_t w) {
    const std::size_t n = values.size();
    const std::size_t m = window_count(n, w);
    std::vector<double> prefix(n + 1, 0.0);
    std::vector<double> prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + values[i];
        prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
    }
    std::vector<SummaryStats> out(m);
    const double dw = static_cast<double>(w);
    std::deque<std::size_t> lo;
    std::deque<std::size_t> hi;
    for (std::size_t i = 0; i < n; ++i) {
        while (!lo.empty() && values[lo.back()] >= values[i]) lo.pop_back();
        lo.push_back(i);
        while (!hi.empty() && values[hi.back()] <= values[i]) hi.pop_back();
        hi.push_back(i);
        if (i + 1 < w) continue;
        const std::size_t j = i + 1 - w;  // window start
        while (lo.front() < j) lo.pop_front();
        while (hi.front() < j) hi.pop_front();
        const double mean = (prefix[i + 1] - prefix[j]) / dw;
        const double raw_sq = (prefix_sq[i + 1] - prefix_sq[j]) / dw;
        double var = std::max(raw_sq - mean * mean, 0.0);
        if (var < 1e-9 * std::max(raw_sq, mean * mean)) {
            // the prefix difference cancels almost completely here, so its
            // rounding noise dominates; recompute the deviations directly
            var = 0.0;
            for (std::size_t u = 0; u < w; ++u) {
                const double d = values[j + u] - mean;
                var += d * d;
            }
            var /= dw;
        }
        out[j] = SummaryStats{mean, std::sqrt(var), values[hi.front()] - values[lo.front()]};
    }
    return out;
}

// Affine map onto [0, 1]; a constant input maps to all zeros.
inline std::vector<double> minmax_scale(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("minmax_scale: empty input");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    std::vector<double> out(values.size(), 0.0);
    const double range = *mx - *mn;
    if (range <= 0.0) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *mn) / range;
    return out;
}

inline TimeSeries minmax_scale(const TimeSeries& ts) {
    return TimeSeries(minmax_scale(ts.values()));
}

}  // namespace clasp
