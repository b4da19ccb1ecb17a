#pragma once

#include <optional>

#include "clasp/knn.hpp"
#include "clasp/scoring.hpp"

namespace clasp {

// Classification score per split offset. Entries outside [first_split,
// end_split) keep the fill value 0, so the argmax only ranges over valid
// splits.
struct Profile {
    std::vector<double> scores;
    std::size_t first_split = 0;
    std::size_t end_split = 0;  // exclusive
    std::size_t window = 0;

    struct Peak {
        std::size_t offset = 0;
        double score = 0.0;
    };

    // Highest-scoring valid split; ties go to the smaller offset.
    Peak argmax() const {
        Peak best{first_split, scores[first_split]};
        for (std::size_t i = first_split + 1; i < end_split; ++i)
            if (scores[i] > best.score) best = Peak{i, scores[i]};
        return best;
    }
};

// Shortest series that still has a nonempty split range for width w.
inline std::size_t min_segment_length(std::size_t w) { return 2 * (w + 2); }

// Incremental state of the split sweep: self-supervised labels, per-window
// positive-neighbor counts, majority predictions, and the confusion counts
// they induce.
struct SplitState {
    std::size_t w = 0;
    std::size_t n = 0;
    std::size_t split = 0;
    std::vector<std::uint8_t> labels;     // 0 left of split, 1 right
    std::vector<std::uint8_t> pos_count;  // neighbors currently labeled 1
    std::vector<std::uint8_t> pred;
    Confusion confusion{};

    std::size_t last_split() const { return n - w - 3; }
};

// State at the first valid split (offset w), built by one pass over every
// window's neighbor labels.
inline SplitState init_split_state(const KnnIndex& idx) {
    SplitState st;
    st.w = idx.w;
    st.n = idx.num_windows + idx.w - 1;
    st.split = idx.w;
    const std::size_t m = idx.num_windows;
    const std::uint8_t majority = static_cast<std::uint8_t>(idx.k / 2);
    st.labels.assign(m, 1);
    st.labels[0] = 0;  // only the first window lies left of split w
    st.pos_count.resize(m);
    st.pred.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint8_t pos = 0;
        for (std::uint32_t o : idx.neighbors(i)) pos += st.labels[o];
        st.pos_count[i] = pos;
        st.pred[i] = pos > majority ? 1 : 0;
        confusion_add(st.confusion, st.labels[i] != 0, st.pred[i] != 0);
    }
    return st;
}

// Moves the split one position right: exactly one window changes its label,
// and only that window's fan-in can change predictions. Returns the score at
// the new split, or nothing once the valid range is exhausted.
inline std::optional<double> advance_split(SplitState& st, const KnnIndex& idx,
                                           Scorer scorer) {
    if (st.split >= st.last_split()) return std::nullopt;
    ++st.split;
    const std::size_t flip = st.split - st.w;
    // the flipped window keeps its prediction; only its ground truth moves
    confusion_add(st.confusion, true, st.pred[flip] != 0, -1);
    confusion_add(st.confusion, false, st.pred[flip] != 0, +1);
    st.labels[flip] = 0;
    const std::uint8_t majority = static_cast<std::uint8_t>(idx.k / 2);
    for (std::uint32_t q : idx.fan_in(flip)) {
        const std::uint8_t pos = --st.pos_count[q];
        const std::uint8_t new_pred = pos > majority ? 1 : 0;
        if (new_pred != st.pred[q]) {
            confusion_add(st.confusion, st.labels[q] != 0, st.pred[q] != 0, -1);
            confusion_add(st.confusion, st.labels[q] != 0, new_pred != 0, +1);
            st.pred[q] = new_pred;
        }
    }
    return score(st.confusion, scorer);
}

namespace detail {

struct IndexedProfile {
    Profile profile;
    KnnIndex index;
};

inline std::optional<IndexedProfile> compute_profile_indexed(std::span<const double> values,
                                                             std::size_t w, Scorer scorer,
                                                             std::size_t k) {
    if (w < 1) throw std::invalid_argument("window width must be at least 1");
    const std::size_t n = values.size();
    if (n < min_segment_length(w)) return std::nullopt;
    if (n - w + 1 < k + 2 * exclusion_radius(w)) return std::nullopt;

    IndexedProfile out;
    out.index = compute_knn_index(values, w, k);
    out.profile.scores.assign(n, 0.0);
    out.profile.first_split = w;
    out.profile.end_split = n - w - 2;
    out.profile.window = w;
    SplitState st = init_split_state(out.index);
    out.profile.scores[st.split] = score(st.confusion, scorer);
    while (auto s = advance_split(st, out.index, scorer)) out.profile.scores[st.split] = *s;
    return out;
}

}  // namespace detail

// Classification score profile of the series: every valid split is scored by
// leave-one-out k-NN cross-validation, advanced incrementally. Returns
// nothing when the series is too short for any valid split.
inline std::optional<Profile> compute_profile(std::span<const double> values, std::size_t w,
                                              Scorer scorer = Scorer::roc_auc,
                                              std::size_t k = 3) {
    auto r = detail::compute_profile_indexed(values, w, scorer, k);
    if (!r) return std::nullopt;
    return std::move(r->profile);
}

}  // namespace clasp
