#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "clasp/knn.hpp"
#include "support/oracles.hpp"

namespace {

// pattern tiled so that windows one period apart are exact copies
std::vector<double> tiled_pattern(std::size_t period, std::size_t repeats, std::uint64_t seed) {
    const auto pattern = oracle::gaussian_series(period, seed);
    std::vector<double> out;
    for (std::size_t r = 0; r < repeats; ++r) out.insert(out.end(), pattern.begin(), pattern.end());
    return out;
}

}  // namespace

TEST_CASE("identical windows sit at distance zero", "[knn]") {
    const std::size_t w = 10;
    const auto series = tiled_pattern(2 * w, 4, 42);
    const auto row = clasp::distance_row(series, w, 3);
    CHECK(row[3 + 2 * w] <= 1e-9);
    CHECK(row[3 + 4 * w] <= 1e-9);
}

TEST_CASE("a window and its negation sit at distance sqrt(4w)", "[knn]") {
    const std::size_t w = 16;
    const auto pattern = oracle::gaussian_series(w, 7);
    std::vector<double> series = pattern;
    for (double v : pattern) series.push_back(-v);
    series.insert(series.end(), pattern.begin(), pattern.end());

    const auto row = clasp::distance_row(series, w, 0);
    CHECK(row[w] == Catch::Approx(std::sqrt(4.0 * static_cast<double>(w))).epsilon(1e-6));
}

TEST_CASE("exclusion zone blanks the diagonal band", "[knn]") {
    const auto series = oracle::gaussian_series(60, 3);
    const std::size_t w = 5;
    const std::size_t excl = clasp::exclusion_radius(w);
    const auto row = clasp::distance_row(series, w, 20);
    for (std::size_t j = 0; j < row.size(); ++j) {
        const std::size_t gap = j > 20 ? j - 20 : 20 - j;
        if (gap < excl)
            CHECK(std::isinf(row[j]));
        else
            CHECK(std::isfinite(row[j]));
    }
}

TEST_CASE("dot-product distances match the naive oracle", "[knn]") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto series = oracle::gaussian_series(300, seed);
        const std::size_t w = seed == 1 ? 5 : (seed == 2 ? 12 : 25);
        const auto naive = oracle::naive_distance_matrix(series, w);
        for (std::size_t i = 0; i < naive.size(); i += 17) {
            const auto row = clasp::distance_row(series, w, i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (std::isinf(naive[i][j])) {
                    CHECK(std::isinf(row[j]));
                } else {
                    CHECK(row[j] ==
                          Catch::Approx(naive[i][j]).epsilon(1e-6).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("knn offsets equal the full-sort oracle", "[knn]") {
    struct Case {
        std::size_t n, w, k;
        std::uint64_t seed;
    };
    for (const Case& c : {Case{60, 5, 3, 10}, Case{100, 7, 5, 11}, Case{150, 4, 1, 12}}) {
        const auto series = oracle::gaussian_series(c.n, c.seed);
        const auto idx = clasp::compute_knn_index(series, c.w, c.k);
        const auto naive = oracle::naive_knn_offsets(series, c.w, c.k);
        REQUIRE(idx.num_windows == naive.size());
        for (std::size_t i = 0; i < naive.size(); ++i) {
            const auto got = idx.neighbors(i);
            const std::vector<std::uint32_t> got_vec(got.begin(), got.end());
            CHECK(got_vec == naive[i]);
        }
    }
}

TEST_CASE("exact periodic series finds zero-distance neighbors", "[knn]") {
    const std::size_t p = 20;
    const auto series = oracle::sine_series(200, static_cast<double>(p));
    const auto idx = clasp::compute_knn_index(series, p, 3);
    for (std::size_t i = 0; i < idx.num_windows; i += 13) {
        const auto row = clasp::distance_row(series, p, i);
        const std::uint32_t nn = idx.neighbors(i)[0];
        CHECK(row[nn] <= 1e-6);
        CHECK((nn % p) == (i % p));
    }
}

TEST_CASE("knn index structure is valid", "[knn]") {
    const auto series = oracle::gaussian_series(120, 8);
    const std::size_t w = 9;
    const std::size_t k = 3;
    const auto idx = clasp::compute_knn_index(series, w, k);
    const std::size_t excl = clasp::exclusion_radius(w);
    for (std::size_t i = 0; i < idx.num_windows; ++i) {
        const auto nn = idx.neighbors(i);
        REQUIRE(nn.size() == k);
        std::set<std::uint32_t> distinct(nn.begin(), nn.end());
        CHECK(distinct.size() == k);
        for (std::uint32_t o : nn) {
            const std::size_t gap = o > i ? o - i : i - o;
            CHECK(gap >= excl);
        }
    }

    // fan-in is the exact transpose of the offsets relation
    std::size_t fanin_total = 0;
    for (std::size_t j = 0; j < idx.num_windows; ++j) {
        for (std::uint32_t i : idx.fan_in(j)) {
            const auto nn = idx.neighbors(i);
            CHECK(std::find(nn.begin(), nn.end(), j) != nn.end());
        }
        fanin_total += idx.fan_in(j).size();
    }
    CHECK(fanin_total == idx.num_windows * k);
}

TEST_CASE("knn result does not depend on the thread count", "[knn]") {
    const auto series = oracle::gaussian_series(900, 21);
    setenv("CLASP_THREADS", "1", 1);
    const auto one = clasp::compute_knn_index(series, 11, 3);
    setenv("CLASP_THREADS", "4", 1);
    const auto four = clasp::compute_knn_index(series, 11, 3);
    unsetenv("CLASP_THREADS");
    const auto again = clasp::compute_knn_index(series, 11, 3);
    CHECK(one.offsets == four.offsets);
    CHECK(one.offsets == again.offsets);
    CHECK(one.fanin == four.fanin);
}

TEST_CASE("knn parameter validation", "[knn]") {
    const auto series = oracle::gaussian_series(50, 5);
    CHECK_THROWS_AS(clasp::compute_knn_index(series, 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(clasp::compute_knn_index(series, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(clasp::compute_knn_index(series, 0, 3), std::invalid_argument);
    // 50 values, w = 30: 21 windows < 3 + 2 * 15
    CHECK_THROWS_AS(clasp::compute_knn_index(series, 30, 3), std::invalid_argument);
}

TEST_CASE("degenerate windows follow the zero-vector rule", "[knn]") {
    // flat head, structured tail
    std::vector<double> series(40, 1.0);
    const auto tail = oracle::gaussian_series(40, 9);
    series.insert(series.end(), tail.begin(), tail.end());
    const std::size_t w = 8;
    const auto row = clasp::distance_row(series, w, 0);  // flat window
    // another flat window far away: distance 0
    CHECK(row[20] == 0.0);
    // flat vs structured: sqrt(w)
    CHECK(row[60] == Catch::Approx(std::sqrt(static_cast<double>(w))).epsilon(1e-9));
}
