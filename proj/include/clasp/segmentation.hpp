#pragma once

#include <queue>

#include "clasp/ensemble.hpp"
#include "clasp/suss.hpp"
#include "clasp/validation.hpp"

namespace clasp {

enum class SegmentationMode { learned, fixed };

struct SegmentationConfig {
    SegmentationMode mode = SegmentationMode::learned;
    std::size_t num_segments = 0;  // fixed mode: target segment count C
    EnsembleConfig ensemble{};
    ValidationConfig validation{};
};

struct ChangePoint {
    std::size_t offset = 0;
    double score = 0.0;
    double p_value = 1.0;
};

struct Segmentation {
    std::vector<ChangePoint> change_points;  // ascending offsets
    std::size_t window = 0;
    SegmentationMode mode = SegmentationMode::learned;
    bool window_auto = false;
    WindowSizeOutcome window_outcome = WindowSizeOutcome::found;
    Profile root_profile;  // ensemble profile of the full series
};

struct Candidate {
    double score = 0.0;
    std::size_t offset = 0;  // global coordinates
    double p_value = 1.0;
    double log_p = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Best split of values[begin, end): the argmax of the ensemble profile,
// validated against the predicted labels at that split. Returns nothing when
// the range is too short or (in learned mode) validation rejects the split.
inline std::optional<Candidate> find_candidate(std::span<const double> values,
                                               std::size_t begin, std::size_t end,
                                               std::size_t w, const SegmentationConfig& cfg,
                                               Profile* profile_out = nullptr) {
    const std::size_t len = end - begin;
    if (len < min_segment_length(w)) return std::nullopt;
    auto core = detail::compute_ensemble_indexed(values.subspan(begin, len), w, cfg.ensemble);
    if (!core) return std::nullopt;

    const Profile::Peak peak = core->profile.argmax();
    SplitState st = init_split_state(core->index);
    while (st.split < peak.offset)
        if (!advance_split(st, core->index, cfg.ensemble.scorer)) break;
    const SplitValidation val = validate_split(st.pred, peak.offset, w, cfg.validation);

    if (profile_out) *profile_out = std::move(core->profile);
    if (cfg.mode == SegmentationMode::learned && !val.accepted) return std::nullopt;
    return Candidate{peak.score, begin + peak.offset, val.p_value, val.log_p, begin, end};
}

// Recursive segmentation driven by a max priority queue over candidate
// scores. Learned mode keeps popping until no validated candidate remains;
// fixed mode skips validation and stops after C - 1 change points.
inline Segmentation segment(std::span<const double> values, std::size_t w,
                            const SegmentationConfig& cfg = {}) {
    const std::size_t n = values.size();
    if (cfg.mode == SegmentationMode::fixed && cfg.num_segments < 1)
        throw std::invalid_argument("fixed mode requires at least one segment");
    cfg.validation.validate();
    if (w < 1 || n < min_segment_length(w))
        throw std::invalid_argument("series too short for window " + std::to_string(w) +
                                    " (need at least " + std::to_string(min_segment_length(w)) +
                                    " values)");

    Segmentation out;
    out.window = w;
    out.mode = cfg.mode;
    const std::size_t max_cps = cfg.mode == SegmentationMode::fixed
                                    ? cfg.num_segments - 1
                                    : std::numeric_limits<std::size_t>::max();

    const auto worse = [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.offset > b.offset;  // ties: smaller offset first
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> queue(worse);

    if (auto root = find_candidate(values, 0, n, w, cfg, &out.root_profile))
        if (max_cps > 0) queue.push(*root);

    while (!queue.empty() && out.change_points.size() < max_cps) {
        const Candidate top = queue.top();
        queue.pop();
        out.change_points.push_back({top.offset, top.score, top.p_value});
        if (out.change_points.size() >= max_cps) break;
        if (auto left = find_candidate(values, top.begin, top.offset, w, cfg))
            queue.push(*left);
        if (auto right = find_candidate(values, top.offset, top.end, w, cfg))
            queue.push(*right);
    }

    std::sort(out.change_points.begin(), out.change_points.end(),
              [](const ChangePoint& a, const ChangePoint& b) { return a.offset < b.offset; });
    return out;
}

// Convenience overload: resolves the window width first (learned via SuSS
// when absent) and passes it down unchanged to every subrange.
inline Segmentation segment(const TimeSeries& ts, std::optional<std::size_t> w,
                            const SegmentationConfig& cfg = {},
                            const SussConfig& window_cfg = {}) {
    if (w) return segment(ts.values(), *w, cfg);
    const WindowSizeResult ws = select_window_size(ts.values(), window_cfg);
    Segmentation out = segment(ts.values(), ws.window, cfg);
    out.window_auto = true;
    out.window_outcome = ws.outcome;
    return out;
}

}  // namespace clasp
