#pragma once

#include <cstdint>
#include <stdexcept>

namespace clasp {

// Binary confusion counts with class 1 as the positive class.
struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
};

inline void confusion_add(Confusion& c, bool truth, bool pred, std::int64_t delta = 1) {
    if (truth)
        (pred ? c.tp : c.fn) += delta;
    else
        (pred ? c.fp : c.tn) += delta;
}

enum class Scorer { roc_auc, macro_f1 };

// Unweighted mean of the per-class F1 values; a class whose denominator is
// zero contributes 0.
inline double macro_f1(const Confusion& c) {
    const std::int64_t den1 = 2 * c.tp + c.fp + c.fn;
    const std::int64_t den0 = 2 * c.tn + c.fn + c.fp;
    const double f1_pos = den1 > 0 ? 2.0 * static_cast<double>(c.tp) / static_cast<double>(den1) : 0.0;
    const double f1_neg = den0 > 0 ? 2.0 * static_cast<double>(c.tn) / static_cast<double>(den0) : 0.0;
    return 0.5 * (f1_pos + f1_neg);
}

// With hard binary predictions the ROC curve has a single interior point, so
// the area reduces to (TPR + TNR) / 2. An empty class yields 0.5.
inline double roc_auc(const Confusion& c) {
    const std::int64_t pos = c.tp + c.fn;
    const std::int64_t neg = c.tn + c.fp;
    if (pos == 0 || neg == 0) return 0.5;
    const double tpr = static_cast<double>(c.tp) / static_cast<double>(pos);
    const double tnr = static_cast<double>(c.tn) / static_cast<double>(neg);
    return 0.5 * (tpr + tnr);
}

inline double score(const Confusion& c, Scorer scorer) {
    switch (scorer) {
        case Scorer::roc_auc: return roc_auc(c);
        case Scorer::macro_f1: return macro_f1(c);
    }
    throw std::invalid_argument("unknown scorer");
}

}  // namespace clasp
