#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "formav/stats.hpp"
#include "oracles.hpp"

using namespace formav;

TEST_CASE("mean, variance, quantiles on a hand column", "[stats]") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    CHECK(stats::mean(v) == 3.0);
    CHECK(stats::variance(v) == Catch::Approx(2.5).epsilon(1e-15));
    CHECK(stats::stddev(v) == Catch::Approx(1.5811388300841898).epsilon(1e-12));
    CHECK(stats::median(v) == 3.0);
    CHECK(stats::quantile(v, 0.25) == 2.0);
    CHECK(stats::quantile(v, 0.75) == 4.0);
    CHECK(stats::interquartile_range(v) == 2.0);
}

TEST_CASE("type-7 quantile interpolates between order statistics", "[stats]") {
    const std::vector<double> v{1, 2, 3, 4};
    // h = 3 * 0.25 = 0.75 -> between 1 and 2
    CHECK(stats::quantile(v, 0.25) == Catch::Approx(1.75).epsilon(1e-15));
    CHECK(stats::quantile(v, 0.75) == Catch::Approx(3.25).epsilon(1e-15));
    CHECK(stats::quantile(v, 0.0) == 1.0);
    CHECK(stats::quantile(v, 1.0) == 4.0);
}

TEST_CASE("ranks average over ties", "[stats]") {
    const std::vector<double> v{10, 20, 20, 30};
    const std::vector<double> r = stats::ranks_average(v);
    CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("pearson and spearman match the sum-formula oracles", "[stats]") {
    const std::vector<double> x{2, 4, 4, 1, 5, 3};
    const std::vector<double> y{3, 5, 4, 2, 5, 2};
    REQUIRE(stats::pearson(x, y).has_value());
    CHECK(*stats::pearson(x, y) == Catch::Approx(oracle::pearson_sums(x, y)).epsilon(1e-12));
    REQUIRE(stats::spearman(x, y).has_value());
    CHECK(*stats::spearman(x, y) == Catch::Approx(oracle::spearman_counting(x, y)).epsilon(1e-12));
}

TEST_CASE("exact anti-monotone pair gives -1 for both coefficients", "[stats]") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(-v);
    CHECK(*stats::pearson(x, y) == -1.0);
    CHECK(*stats::spearman(x, y) == -1.0);
}

TEST_CASE("constant column makes correlation undefined", "[stats]") {
    const std::vector<double> x{3, 3, 3, 3};
    const std::vector<double> y{1, 2, 3, 4};
    CHECK_FALSE(stats::pearson(x, y).has_value());
    CHECK_FALSE(stats::spearman(x, y).has_value());
}

TEST_CASE("pearson is invariant under positive affine transforms", "[stats][property]") {
    oracle::Rng rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = rng.uniform_int(4, 20);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(rng.uniform_int(1, 5));
            y.push_back(rng.uniform_int(1, 5));
        }
        const auto r0 = stats::pearson(x, y);
        if (!r0) continue;
        const double a = 0.5 + rng.uniform() * 3.0;
        const double b = rng.uniform() * 10.0 - 5.0;
        std::vector<double> xt, yt;
        for (double v : x) xt.push_back(a * v + b);
        for (double v : y) yt.push_back(a * v + b);
        CHECK(*stats::pearson(xt, yt) == Catch::Approx(*r0).margin(1e-12));
    }
}

TEST_CASE("spearman is invariant under strictly monotone transforms", "[stats][property]") {
    oracle::Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = rng.uniform_int(4, 20);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(rng.uniform_int(1, 7));
            y.push_back(rng.uniform_int(1, 7));
        }
        const auto r0 = stats::spearman(x, y);
        if (!r0) continue;
        std::vector<double> xt, yt;
        for (double v : x) xt.push_back(v * v * v + 2 * v);  // strictly increasing
        for (double v : y) yt.push_back(std::exp(v * 0.5));
        CHECK(*stats::spearman(xt, yt) == Catch::Approx(*r0).margin(1e-12));
    }
}
