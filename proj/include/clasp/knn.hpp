#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <thread>

#include "clasp/series.hpp"

namespace clasp {

// Neighbors overlapping a window by more than w/2 points are trivial matches;
// this is the half-width of the band excluded around the diagonal.
inline std::size_t exclusion_radius(std::size_t w) { return (w + 1) / 2; }

// Worker count for the pairwise-distance sweep. CLASP_THREADS overrides the
// hardware default; the result is identical for any value.
inline std::size_t thread_count() {
    if (const char* env = std::getenv("CLASP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Per-window offsets of the k nearest z-normalized neighbors plus the
// transposed (fan-in) relation stored as CSR lists.
struct KnnIndex {
    std::size_t w = 0;
    std::size_t k = 0;
    std::size_t num_windows = 0;
    std::vector<std::uint32_t> offsets;      // num_windows x k, row-major
    std::vector<std::uint32_t> fanin_start;  // size num_windows + 1
    std::vector<std::uint32_t> fanin;        // windows listing j among their k-NNs

    std::span<const std::uint32_t> neighbors(std::size_t i) const {
        return {offsets.data() + i * k, k};
    }
    std::span<const std::uint32_t> fan_in(std::size_t j) const {
        return {fanin.data() + fanin_start[j], fanin_start[j + 1] - fanin_start[j]};
    }
};

namespace detail {

// 1 - corr below this floor is indistinguishable from rounding noise, so such
// pairs count as exact matches (duplicate windows land at distance zero).
inline constexpr double kCorrNoiseFloor = 1e-12;

struct WindowMoments {
    std::vector<double> centered;  // values minus the series mean
    std::vector<double> mean;      // per-window mean of centered values
    std::vector<double> norm;      // per-window sqrt(sum((x - mean)^2))
    std::vector<char> degenerate;  // window std below kDegenerateStd
};

inline WindowMoments window_moments(std::span<const double> values, std::size_t w) {
    const std::size_t n = values.size();
    const std::size_t m = window_count(n, w);
    WindowMoments mom;
    mom.centered.resize(n);
    double sum = 0.0;
    for (double v : values) sum += v;
    const double global_mean = sum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) mom.centered[i] = values[i] - global_mean;

    std::vector<double> prefix(n + 1, 0.0);
    std::vector<double> prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + mom.centered[i];
        prefix_sq[i + 1] = prefix_sq[i] + mom.centered[i] * mom.centered[i];
    }
    mom.mean.resize(m);
    mom.norm.resize(m);
    mom.degenerate.resize(m);
    const double dw = static_cast<double>(w);
    const double norm_floor = kDegenerateStd * std::sqrt(dw);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = (prefix[j + w] - prefix[j]) / dw;
        const double raw_sq = prefix_sq[j + w] - prefix_sq[j];
        double sq = std::max(raw_sq - dw * mean * mean, 0.0);
        if (sq < 1e-9 * std::max(raw_sq, dw * mean * mean)) {
            // near-total cancellation: prefix rounding noise would leak into
            // the degeneracy test, so recompute the deviations directly
            sq = 0.0;
            for (std::size_t u = 0; u < w; ++u) {
                const double d = mom.centered[j + u] - mean;
                sq += d * d;
            }
        }
        mom.mean[j] = mean;
        mom.norm[j] = std::sqrt(sq);
        mom.degenerate[j] = mom.norm[j] < norm_floor ? 1 : 0;
    }
    return mom;
}

// Similarity key in [-1, 1]: the Pearson correlation of the raw windows, with
// degenerate windows mapped so that the induced distance sqrt(2w(1 - key))
// matches the zero-vector rule (0 for two flat windows, sqrt(w) for one).
inline double similarity_key(double qt, const WindowMoments& mom, std::size_t i,
                             std::size_t j, double dw) {
    if (mom.degenerate[i] || mom.degenerate[j])
        return (mom.degenerate[i] && mom.degenerate[j]) ? 1.0 : 0.5;
    double corr = (qt - dw * mom.mean[i] * mom.mean[j]) / (mom.norm[i] * mom.norm[j]);
    if (corr > 1.0 - kCorrNoiseFloor) return 1.0;
    if (corr < -1.0) return -1.0;
    return corr;
}

inline double key_to_distance(double key, double dw) {
    return std::sqrt(2.0 * dw * (1.0 - key));
}

inline double window_dot(std::span<const double> c, std::size_t i, std::size_t j,
                         std::size_t w) {
    double acc = 0.0;
    for (std::size_t u = 0; u < w; ++u) acc += c[i + u] * c[j + u];
    return acc;
}

// k-NN selection for rows [row_begin, row_end). Dot products are carried
// diagonally from row to row; each block restarts from a direct computation,
// which also bounds the accumulated drift.
inline void knn_block(const WindowMoments& mom, std::size_t w, std::size_t k,
                      std::size_t excl, std::size_t row_begin, std::size_t row_end,
                      std::uint32_t* out) {
    const std::size_t m = mom.mean.size();
    const double dw = static_cast<double>(w);
    const std::span<const double> c(mom.centered);
    std::vector<double> qt(m);
    std::vector<double> best_key(k);
    std::vector<std::uint32_t> best_off(k);
    for (std::size_t i = row_begin; i < row_end; ++i) {
        if (i == row_begin) {
            for (std::size_t j = 0; j < m; ++j) qt[j] = window_dot(c, i, j, w);
        } else {
            const double head = c[i - 1];
            const double tail = c[i + w - 1];
            for (std::size_t j = m; j-- > 1;)
                qt[j] = qt[j - 1] + tail * c[j + w - 1] - head * c[j - 1];
            qt[0] = window_dot(c, i, 0, w);
        }
        std::size_t count = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t gap = i > j ? i - j : j - i;
            if (gap < excl) continue;
            const double key = similarity_key(qt[j], mom, i, j, dw);
            if (count == k && key <= best_key[k - 1]) continue;
            std::size_t pos = count < k ? count : k - 1;
            while (pos > 0 && best_key[pos - 1] < key) {
                best_key[pos] = best_key[pos - 1];
                best_off[pos] = best_off[pos - 1];
                --pos;
            }
            best_key[pos] = key;
            best_off[pos] = static_cast<std::uint32_t>(j);
            if (count < k) ++count;
        }
        for (std::size_t s = 0; s < k; ++s) out[i * k + s] = best_off[s];
    }
}

}  // namespace detail

// One row of the pairwise z-normalized Euclidean distance matrix, computed
// through the dot-product identity d^2 = 2w(1 - corr). Entries inside the
// exclusion zone are +infinity.
inline std::vector<double> distance_row(std::span<const double> values, std::size_t w,
                                        std::size_t i) {
    const std::size_t m = window_count(values.size(), w);
    if (i >= m) throw std::invalid_argument("distance_row: row index out of range");
    const auto mom = detail::window_moments(values, w);
    const std::size_t excl = exclusion_radius(w);
    const double dw = static_cast<double>(w);
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t gap = i > j ? i - j : j - i;
        if (gap < excl) {
            row[j] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double qt = detail::window_dot(mom.centered, i, j, w);
        row[j] = detail::key_to_distance(detail::similarity_key(qt, mom, i, j, dw), dw);
    }
    return row;
}

// Builds the k-NN index for all width-w windows. Rows are reduced to k
// offsets on the fly; the full distance matrix is never materialized. Ties
// break toward the smaller offset, and the fixed 256-row blocking makes the
// result identical for any thread count.
inline KnnIndex compute_knn_index(std::span<const double> values, std::size_t w,
                                  std::size_t k = 3) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be a positive odd number");
    if (k > 255) throw std::invalid_argument("k must be at most 255");
    const std::size_t m = window_count(values.size(), w);
    const std::size_t excl = exclusion_radius(w);
    if (m < k + 2 * excl)
        throw std::invalid_argument("need at least " + std::to_string(k + 2 * excl) +
                                    " windows for k=" + std::to_string(k) + ", got " +
                                    std::to_string(m));

    const auto mom = detail::window_moments(values, w);
    KnnIndex idx;
    idx.w = w;
    idx.k = k;
    idx.num_windows = m;
    idx.offsets.resize(m * k);

    constexpr std::size_t kBlockRows = 256;
    const std::size_t blocks = (m + kBlockRows - 1) / kBlockRows;
    const std::size_t workers = std::min(thread_count(), blocks);
    auto run = [&](std::size_t t) {
        for (std::size_t b = t; b < blocks; b += workers)
            detail::knn_block(mom, w, k, excl, b * kBlockRows,
                              std::min(m, (b + 1) * kBlockRows), idx.offsets.data());
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run, t);
        run(0);
        for (auto& th : pool) th.join();
    }

    idx.fanin_start.assign(m + 1, 0);
    for (std::uint32_t o : idx.offsets) ++idx.fanin_start[o + 1];
    for (std::size_t j = 0; j < m; ++j) idx.fanin_start[j + 1] += idx.fanin_start[j];
    idx.fanin.resize(idx.offsets.size());
    std::vector<std::uint32_t> fill(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t s = 0; s < k; ++s) {
            const std::uint32_t o = idx.offsets[i * k + s];
            idx.fanin[idx.fanin_start[o] + fill[o]++] = static_cast<std::uint32_t>(i);
        }
    }
    return idx;
}

}  // namespace clasp
