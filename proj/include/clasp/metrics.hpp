#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace clasp {

// Change point sets are strictly ascending offsets in (0, n).
inline void validate_change_points(std::span<const std::size_t> cps, std::size_t n) {
    if (n < 1) throw std::invalid_argument("series length must be positive");
    std::size_t prev = 0;
    for (std::size_t c : cps) {
        if (c < 1 || c >= n)
            throw std::invalid_argument("change point " + std::to_string(c) +
                                        " outside (0, " + std::to_string(n) + ")");
        if (c <= prev)
            throw std::invalid_argument("change points must be strictly ascending");
        prev = c;
    }
}

// F1 over change point sets with a +-margin slack of margin_fraction * n.
// Each truth offset consumes at most one prediction: truths are matched in
// ascending order to the nearest unmatched prediction, ties to the left.
// Both sets empty counts as a perfect score, exactly one empty as zero.
inline double f1_score(std::span<const std::size_t> truth, std::span<const std::size_t> pred,
                       std::size_t n, double margin_fraction = 0.01) {
    validate_change_points(truth, n);
    validate_change_points(pred, n);
    if (!(margin_fraction >= 0.0))
        throw std::invalid_argument("margin fraction must be non-negative");
    if (truth.empty() && pred.empty()) return 1.0;
    if (truth.empty() || pred.empty()) return 0.0;

    const auto margin = static_cast<std::int64_t>(
        margin_fraction * static_cast<double>(n) + 1e-9);
    std::vector<char> used(pred.size(), 0);
    std::size_t tp = 0;
    for (std::size_t t : truth) {
        std::int64_t best_dist = margin + 1;
        std::size_t best = pred.size();
        for (std::size_t i = 0; i < pred.size(); ++i) {
            if (used[i]) continue;
            const std::int64_t d = std::abs(static_cast<std::int64_t>(pred[i]) -
                                            static_cast<std::int64_t>(t));
            if (d < best_dist) {  // ascending scan keeps the leftmost on ties
                best_dist = d;
                best = i;
            }
        }
        if (best < pred.size() && best_dist <= margin) {
            used[best] = 1;
            ++tp;
        }
    }
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(pred.size());
    const double recall = static_cast<double>(tp) / static_cast<double>(truth.size());
    return 2.0 * precision * recall / (precision + recall);
}

namespace detail {

// Half-open position ranges induced by a change point set, with virtual
// boundaries closing off the first and last segment.
inline std::vector<std::pair<std::int64_t, std::int64_t>> segments_of(
    std::span<const std::size_t> cps, std::size_t n) {
    std::vector<std::pair<std::int64_t, std::int64_t>> segs;
    segs.reserve(cps.size() + 1);
    std::int64_t prev = 1;
    for (std::size_t c : cps) {
        segs.emplace_back(prev, static_cast<std::int64_t>(c));
        prev = static_cast<std::int64_t>(c);
    }
    segs.emplace_back(prev, static_cast<std::int64_t>(n) + 1);
    return segs;
}

}  // namespace detail

// Best-scoring weighted overlap between the truth and predicted
// segmentations: each truth segment contributes its length times the highest
// Jaccard index against any predicted segment, normalized by n.
inline double covering_score(std::span<const std::size_t> truth,
                             std::span<const std::size_t> pred, std::size_t n) {
    validate_change_points(truth, n);
    validate_change_points(pred, n);
    const auto truth_segs = detail::segments_of(truth, n);
    const auto pred_segs = detail::segments_of(pred, n);
    double total = 0.0;
    for (const auto& [lo, hi] : truth_segs) {
        double best = 0.0;
        for (const auto& [plo, phi] : pred_segs) {
            const std::int64_t inter = std::min(hi, phi) - std::max(lo, plo);
            if (inter <= 0) continue;
            const std::int64_t uni = (hi - lo) + (phi - plo) - inter;
            best = std::max(best, static_cast<double>(inter) / static_cast<double>(uni));
        }
        total += static_cast<double>(hi - lo) * best;
    }
    return total / static_cast<double>(n);
}

}  // namespace clasp
