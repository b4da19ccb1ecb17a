#include <catch2/catch_amalgamated.hpp>

#include "clasp/validation.hpp"
#include "support/oracles.hpp"

namespace {

std::vector<double> binary_group(int zeros, int ones) {
    std::vector<double> g(static_cast<std::size_t>(zeros), 0.0);
    g.insert(g.end(), static_cast<std::size_t>(ones), 1.0);
    return g;
}

}  // namespace

TEST_CASE("identical constant groups give exactly p = 1", "[validation]") {
    const std::vector<double> g(12, 2.5);
    const auto r = clasp::ranksum_test(g, g);
    CHECK(r.p == 1.0);
    CHECK(r.log_p == 0.0);
}

TEST_CASE("eight zeros vs eight ones matches the permutation oracle", "[validation]") {
    const auto left = binary_group(8, 0);
    const auto right = binary_group(0, 8);
    const double exact = oracle::exact_binary_ranksum_p(8, 0, 0, 8);
    CHECK(clasp::ranksum_pvalue(left, right) == Catch::Approx(exact).margin(0.05));
}

TEST_CASE("tiny binary configurations agree with the permutation oracle", "[validation]") {
    for (int n1 = 1; n1 <= 5; ++n1)
        for (int n2 = 1; n2 <= 5; ++n2)
            for (int lo = 0; lo <= n1; ++lo)
                for (int ro = 0; ro <= n2; ++ro) {
                    const auto left = binary_group(n1 - lo, lo);
                    const auto right = binary_group(n2 - ro, ro);
                    const double exact = oracle::exact_binary_ranksum_p(n1 - lo, lo, n2 - ro, ro);
                    const double got = clasp::ranksum_pvalue(left, right);
                    INFO("n1=" << n1 << " n2=" << n2 << " lo=" << lo << " ro=" << ro);
                    CHECK(got == Catch::Approx(exact).margin(0.05));
                }
}

TEST_CASE("the normal approximation is close for moderate groups", "[validation]") {
    for (int n : {9, 10, 12}) {
        for (int wrong : {0, 1, 3}) {
            const auto left = binary_group(n - wrong, wrong);
            const auto right = binary_group(wrong, n - wrong);
            const double exact =
                oracle::exact_binary_ranksum_p(n - wrong, wrong, wrong, n - wrong);
            const double got = clasp::ranksum_pvalue(left, right);
            INFO("n=" << n << " wrong=" << wrong);
            CHECK(got == Catch::Approx(exact).margin(0.05));
        }
    }
}

TEST_CASE("the p-value is symmetric under a group swap", "[validation]") {
    oracle::Rng rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n1 = 1 + rng.gen.below(30);
        const std::size_t n2 = 1 + rng.gen.below(30);
        std::vector<double> a(n1);
        std::vector<double> b(n2);
        for (auto& v : a) v = static_cast<double>(rng.gen.below(4));  // heavy ties
        for (auto& v : b) v = static_cast<double>(rng.gen.below(4));
        CHECK(clasp::ranksum_pvalue(a, b) == clasp::ranksum_pvalue(b, a));
    }
}

TEST_CASE("a perfectly separating split is overwhelming", "[validation]") {
    const auto left = binary_group(60, 0);
    const auto right = binary_group(0, 60);
    const auto r = clasp::ranksum_test(left, right);
    CHECK(r.p > 0.0);
    CHECK(r.p < 1e-15);
    CHECK(r.log_p < std::log(1e-15));
    // z for a pure split of m vs m is about sqrt(2m); check the magnitude
    CHECK(r.z == Catch::Approx(std::sqrt(2.0 * 60.0)).epsilon(0.05));
}

TEST_CASE("p-values survive far-tail underflow", "[validation]") {
    const auto left = binary_group(5000, 0);
    const auto right = binary_group(0, 5000);
    const auto r = clasp::ranksum_test(left, right);
    CHECK(r.p > 0.0);  // clamped to the smallest positive double, never 0
    CHECK(r.log_p < -1000.0);
}

TEST_CASE("moving an element to its correct side never raises the p-value", "[validation]") {
    oracle::Rng rng(31);
    int tested = 0;
    for (int rep = 0; rep < 200 && tested < 50; ++rep) {
        const int n1 = 2 + static_cast<int>(rng.gen.below(10));
        const int n2 = 2 + static_cast<int>(rng.gen.below(10));
        const int left_ones = 1 + static_cast<int>(rng.gen.below(static_cast<std::uint64_t>(n1)));
        const int right_zeros = 1 + static_cast<int>(rng.gen.below(static_cast<std::uint64_t>(n2)));
        const int right_ones = n2 - right_zeros;
        // only oriented configurations: the left group under-represents ones
        if (left_ones * n2 >= right_ones * n1) continue;
        ++tested;
        const double before = clasp::ranksum_pvalue(
            binary_group(n1 - left_ones, left_ones), binary_group(right_zeros, right_ones));
        const double after =
            clasp::ranksum_pvalue(binary_group(n1 - left_ones + 1, left_ones - 1),
                                  binary_group(right_zeros - 1, right_ones + 1));
        INFO("n1=" << n1 << " n2=" << n2 << " lo=" << left_ones << " rz=" << right_zeros);
        CHECK(after <= before + 1e-12);
    }
    CHECK(tested >= 20);
}

TEST_CASE("empty groups are rejected", "[validation]") {
    const std::vector<double> some{1.0, 2.0};
    const std::vector<double> none;
    CHECK_THROWS_AS(clasp::ranksum_test(some, none), std::invalid_argument);
    CHECK_THROWS_AS(clasp::ranksum_test(none, some), std::invalid_argument);
}

TEST_CASE("split validation accepts pure splits and rejects degenerate ones", "[validation]") {
    const std::size_t w = 5;
    std::vector<std::uint8_t> preds(200, 1);
    for (std::size_t i = 0; i < 100; ++i) preds[i] = 0;
    // split so that exactly the first 100 windows are left: split - w + 1 = 100
    const auto good = clasp::validate_split(preds, 104, w, {});
    CHECK(good.accepted);
    CHECK(good.p_value < 1e-15);

    const auto degenerate = clasp::validate_split(preds, 3, w, {});
    CHECK_FALSE(degenerate.accepted);
    CHECK(degenerate.p_value == 1.0);

    const auto no_right = clasp::validate_split(preds, 204 + w, w, {});
    CHECK_FALSE(no_right.accepted);
    CHECK(no_right.p_value == 1.0);
}

TEST_CASE("random predictions are rejected at the default threshold", "[validation]") {
    oracle::Rng rng(41);
    std::vector<std::uint8_t> preds(400);
    for (auto& p : preds) p = static_cast<std::uint8_t>(rng.gen.below(2));
    const auto r = clasp::validate_split(preds, 205, 6, {});
    CHECK_FALSE(r.accepted);
    CHECK(r.p_value > 1e-15);
}

TEST_CASE("validation config is checked", "[validation]") {
    clasp::ValidationConfig bad;
    bad.max_p_value = 0.0;
    std::vector<std::uint8_t> preds(50, 1);
    CHECK_THROWS_AS(clasp::validate_split(preds, 20, 5, bad), std::invalid_argument);
    bad.max_p_value = 1.5;
    CHECK_THROWS_AS(clasp::validate_split(preds, 20, 5, bad), std::invalid_argument);
}
