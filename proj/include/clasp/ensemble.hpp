#pragma once

#include "clasp/profile.hpp"
#include "clasp/rng.hpp"

namespace clasp {

struct EnsembleConfig {
    std::size_t n_iter = 30;
    std::uint64_t seed = 0;
    std::size_t min_interval = 0;  // 0: use min_segment_length(w)
    Scorer scorer = Scorer::roc_auc;
    std::size_t k = 3;
};

namespace detail {

// Global profile max-merged with profiles of randomly drawn temporal
// constraints. Each iteration samples a start and a constraint length,
// clamps the interval to the series end, and reweights the local profile
// with a confidence term that favors longer constraints.
inline std::optional<IndexedProfile> compute_ensemble_indexed(std::span<const double> values,
                                                              std::size_t w,
                                                              const EnsembleConfig& cfg) {
    auto base = compute_profile_indexed(values, w, cfg.scorer, cfg.k);
    if (!base) return std::nullopt;
    const std::size_t n = values.size();
    const std::size_t min_len = cfg.min_interval > 0 ? cfg.min_interval : min_segment_length(w);
    if (min_len > n) return base;

    for (std::size_t iter = 0; iter < cfg.n_iter; ++iter) {
        SplitMix64 rng(iteration_seed(cfg.seed, iter));
        const std::size_t start = rng.below(n);
        const std::size_t constraint = min_len + rng.below(n - min_len + 1);
        const std::size_t end = std::min(start + constraint, n);
        if (end - start < min_len) continue;

        const auto local = compute_profile(values.subspan(start, end - start), w,
                                           cfg.scorer, cfg.k);
        if (!local) continue;
        // confidence uses the effective (clamped) length: a tail interval cut
        // short must not inherit the full sampled constraint's weight
        const double confidence = static_cast<double>(end - start) / static_cast<double>(n);
        for (std::size_t j = local->first_split; j < local->end_split; ++j) {
            const double v = (2.0 * local->scores[j] + confidence) / 3.0;
            double& g = base->profile.scores[start + j];
            if (v > g) g = v;
        }
    }
    return base;
}

}  // namespace detail

// Deterministic for a fixed (values, w, cfg): each iteration derives its own
// RNG stream from the seed and iteration number.
inline std::optional<Profile> compute_ensemble_profile(std::span<const double> values,
                                                       std::size_t w,
                                                       const EnsembleConfig& cfg = {}) {
    auto r = detail::compute_ensemble_indexed(values, w, cfg);
    if (!r) return std::nullopt;
    return std::move(r->profile);
}

}  // namespace clasp
