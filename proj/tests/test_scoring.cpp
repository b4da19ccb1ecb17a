#include <catch2/catch_amalgamated.hpp>

#include "clasp/scoring.hpp"
#include "support/oracles.hpp"

using clasp::Confusion;

namespace {

// rank-based AUC with tie handling, applied to hard 0/1 prediction scores
double rank_auc(const std::vector<int>& truth, const std::vector<int>& pred) {
    double pos = 0.0;
    double neg = 0.0;
    double rank_sum_pos = 0.0;
    // two score levels only: 0 and 1
    std::size_t zeros = 0;
    for (int p : pred) zeros += p == 0 ? 1 : 0;
    const double rank_zero = (static_cast<double>(zeros) + 1.0) / 2.0;
    const double rank_one =
        static_cast<double>(zeros) + (static_cast<double>(pred.size() - zeros) + 1.0) / 2.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1) {
            pos += 1.0;
            rank_sum_pos += pred[i] == 1 ? rank_one : rank_zero;
        } else {
            neg += 1.0;
        }
    }
    return (rank_sum_pos - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

Confusion count(const std::vector<int>& truth, const std::vector<int>& pred) {
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i)
        clasp::confusion_add(c, truth[i] != 0, pred[i] != 0);
    return c;
}

}  // namespace

TEST_CASE("perfect predictions score 1 under both metrics", "[scoring]") {
    const Confusion c{10, 0, 14, 0};
    CHECK(clasp::macro_f1(c) == 1.0);
    CHECK(clasp::roc_auc(c) == 1.0);
}

TEST_CASE("all-one predictions on balanced truth", "[scoring]") {
    // per-class F1 = (0, 2/3), macro = 1/3; AUC = (1 + 0) / 2
    const Confusion c{8, 8, 0, 0};
    CHECK(clasp::macro_f1(c) == Catch::Approx(1.0 / 3.0));
    CHECK(clasp::roc_auc(c) == 0.5);
}

TEST_CASE("an empty class yields AUC one half", "[scoring]") {
    CHECK(clasp::roc_auc(Confusion{5, 0, 0, 2}) == 0.5);  // no negatives
    CHECK(clasp::roc_auc(Confusion{0, 3, 4, 0}) == 0.5);  // no positives
}

TEST_CASE("macro F1 equals direct per-class arithmetic on random counts", "[scoring]") {
    oracle::Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const Confusion c{static_cast<std::int64_t>(rng.gen.below(20)),
                          static_cast<std::int64_t>(rng.gen.below(20)),
                          static_cast<std::int64_t>(rng.gen.below(20)),
                          static_cast<std::int64_t>(rng.gen.below(20))};
        const auto f1_of = [](double tp, double fp, double fn) {
            const double den = 2.0 * tp + fp + fn;
            return den > 0.0 ? 2.0 * tp / den : 0.0;
        };
        const double expected =
            0.5 * (f1_of(static_cast<double>(c.tp), static_cast<double>(c.fp),
                         static_cast<double>(c.fn)) +
                   f1_of(static_cast<double>(c.tn), static_cast<double>(c.fn),
                         static_cast<double>(c.fp)));
        CHECK(clasp::macro_f1(c) == Catch::Approx(expected).margin(1e-15));
        CHECK(clasp::macro_f1(c) >= 0.0);
        CHECK(clasp::macro_f1(c) <= 1.0);
        CHECK(clasp::roc_auc(c) >= 0.0);
        CHECK(clasp::roc_auc(c) <= 1.0);
    }
}

TEST_CASE("hard-label AUC equals the rank-based oracle", "[scoring]") {
    oracle::Rng rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<int> truth(40);
        std::vector<int> pred(40);
        bool pos_seen = false;
        bool neg_seen = false;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth[i] = static_cast<int>(rng.gen.below(2));
            pred[i] = static_cast<int>(rng.gen.below(2));
            (truth[i] ? pos_seen : neg_seen) = true;
        }
        if (!pos_seen || !neg_seen) continue;
        CHECK(clasp::roc_auc(count(truth, pred)) ==
              Catch::Approx(rank_auc(truth, pred)).margin(1e-12));
    }
}
