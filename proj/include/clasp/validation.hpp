#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace clasp {

struct ValidationConfig {
    double max_p_value = 1e-15;

    void validate() const {
        if (!(max_p_value > 0.0) || max_p_value > 1.0)
            throw std::invalid_argument("max p-value must lie in (0, 1]");
    }
};

namespace detail {

// Both groups at most this size: the permutation distribution is enumerated
// exactly instead of using the normal approximation, which is too coarse for
// such tiny samples.
inline constexpr std::size_t kExactRankSumLimit = 10;

// log of the standard normal CDF at -z, z >= 0. Uses erfc up to the point
// where it underflows, then the Mills-ratio asymptotic expansion so p-values
// far below 1e-15 keep a meaningful log.
inline double log_normal_tail(double z) {
    if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log(series);
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] != i + n - k) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Two-sided permutation p-value P(|R - mu| >= |r_obs - mu|) over all
// assignments of n1 of the pooled ranks to the left group.
inline double exact_ranksum_pvalue(const std::vector<double>& ranks, std::size_t n1,
                                   double r1_obs) {
    const std::size_t nn = ranks.size();
    const double mu = static_cast<double>(n1) * static_cast<double>(nn + 1) / 2.0;
    const double dev_obs = std::abs(r1_obs - mu) - 1e-9;
    std::vector<std::size_t> idx(n1);
    for (std::size_t i = 0; i < n1; ++i) idx[i] = i;
    std::uint64_t total = 0;
    std::uint64_t tail = 0;
    do {
        double sum = 0.0;
        for (std::size_t i : idx) sum += ranks[i];
        ++total;
        if (std::abs(sum - mu) >= dev_obs) ++tail;
    } while (next_combination(idx, nn));
    return static_cast<double>(tail) / static_cast<double>(total);
}

}  // namespace detail

struct RankSumResult {
    double p = 1.0;
    double log_p = 0.0;  // natural log of p
    double z = 0.0;      // normal-approximation statistic (0 when degenerate)
};

// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Large samples use the
// normal approximation with tie and continuity correction; when both groups
// have at most 8 elements the permutation distribution is enumerated exactly.
// The U statistic is accumulated over value groups, which keeps heavy-tie
// (e.g. binary) input exact and makes the result symmetric under a group
// swap. Identical values across both groups have zero variance and p = 1.
inline RankSumResult ranksum_test(std::span<const double> left,
                                  std::span<const double> right) {
    if (left.empty() || right.empty())
        throw std::invalid_argument("ranksum_test: both groups must be nonempty");

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(left.size() + right.size());
    for (double v : left) pooled.emplace_back(v, 0);
    for (double v : right) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double n1 = static_cast<double>(left.size());
    const double n2 = static_cast<double>(right.size());
    const double nn = n1 + n2;
    const bool tiny = left.size() <= detail::kExactRankSumLimit &&
                      right.size() <= detail::kExactRankSumLimit;

    double u = 0.0;        // Mann-Whitney U of the left group
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    double right_below = 0.0;
    std::vector<double> ranks;
    if (tiny) ranks.resize(pooled.size());
    std::size_t g = 0;
    while (g < pooled.size()) {
        std::size_t h = g;
        double l_count = 0.0;
        double r_count = 0.0;
        while (h < pooled.size() && pooled[h].first == pooled[g].first) {
            (pooled[h].second == 0 ? l_count : r_count) += 1.0;
            ++h;
        }
        u += l_count * right_below + 0.5 * l_count * r_count;
        const double t = l_count + r_count;
        tie_sum += t * t * t - t;
        right_below += r_count;
        if (tiny) {
            const double avg_rank = (static_cast<double>(g + 1) + static_cast<double>(h)) / 2.0;
            for (std::size_t i = g; i < h; ++i) ranks[i] = avg_rank;
        }
        g = h;
    }

    const double var = n1 * n2 / 12.0 * ((nn + 1.0) - tie_sum / (nn * (nn - 1.0)));
    if (var <= 0.0) return {1.0, 0.0, 0.0};

    double dev = std::abs(u - 0.5 * n1 * n2) - 0.5;  // continuity correction
    if (dev < 0.0) dev = 0.0;
    const double z = dev / std::sqrt(var);

    if (tiny) {
        const double r1_obs = u + n1 * (n1 + 1.0) / 2.0;
        const double p = detail::exact_ranksum_pvalue(ranks, left.size(), r1_obs);
        return {p, std::log(p), z};
    }

    double log_p = std::log(2.0) + detail::log_normal_tail(z);
    if (log_p > 0.0) log_p = 0.0;
    const double p =
        std::min(std::max(std::exp(log_p), std::numeric_limits<double>::denorm_min()), 1.0);
    return {p, log_p, z};
}

inline double ranksum_pvalue(std::span<const double> left, std::span<const double> right) {
    return ranksum_test(left, right).p;
}

struct SplitValidation {
    bool accepted = false;
    double p_value = 1.0;
    double log_p = 0.0;
};

// Tests whether the predicted labels left of the split differ from those to
// the right (same window-to-side assignment as the label sweep: windows up to
// split - w are left). Degenerate partitions are rejected with p = 1.
inline SplitValidation validate_split(std::span<const std::uint8_t> predictions,
                                      std::size_t split, std::size_t w,
                                      const ValidationConfig& cfg = {}) {
    cfg.validate();
    if (split < w) return {false, 1.0, 0.0};
    const std::size_t left_count = split - w + 1;
    if (left_count >= predictions.size()) return {false, 1.0, 0.0};

    std::vector<double> left(predictions.begin(), predictions.begin() + left_count);
    std::vector<double> right(predictions.begin() + left_count, predictions.end());
    const RankSumResult r = ranksum_test(left, right);
    const bool accepted = r.log_p <= std::log(cfg.max_p_value);
    return {accepted, r.p, r.log_p};
}

}  // namespace clasp
