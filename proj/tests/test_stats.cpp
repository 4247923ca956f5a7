#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "unicollab/stats.hpp"

using namespace unicollab::stats;

namespace {

// Raw-sum definitional form, independent of the centered two-pass kernel.
double pearson_definitional(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

double sse(const std::vector<double>& x, const std::vector<double>& y, double a, double b) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
    return s;
}

// Least squares by successive grid refinement over (intercept, slope).
std::pair<double, double> grid_least_squares(const std::vector<double>& x,
                                             const std::vector<double>& y) {
    double a = 0, b = 0, step = 4.0;
    for (int round = 0; round < 60; ++round) {
        double best_a = a, best_b = b, best = sse(x, y, a, b);
        for (int i = -10; i <= 10; ++i) {
            for (int j = -10; j <= 10; ++j) {
                const double ca = a + i * step / 10, cb = b + j * step / 10;
                const double e = sse(x, y, ca, cb);
                if (e < best) {
                    best = e;
                    best_a = ca;
                    best_b = cb;
                }
            }
        }
        a = best_a;
        b = best_b;
        step /= 2;
    }
    return {a, b};
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST_CASE("pearson examples") {
    const std::vector<double> x = {1, 2, 3};
    CHECK(*pearson(x, std::vector<double>{2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*pearson(x, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0).epsilon(1e-15));

    const std::vector<double> a = {0, 1, 2}, b = {0, 1, 3};
    const double expected = std::sqrt(27.0 / 28.0);
    CHECK(pearson_definitional(a, b) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(*pearson(a, b) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(*pearson(a, b) == doctest::Approx(0.98198).epsilon(1e-5));
}

TEST_CASE("pearson undefined cases") {
    CHECK_FALSE(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
    CHECK_FALSE(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
    CHECK_FALSE(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5}));
}

TEST_CASE("ols examples") {
    auto fit = ols_simple(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 3, 5, 7});
    REQUIRE(fit);
    CHECK(fit->beta == doctest::Approx(2.0));
    CHECK(fit->r_squared == doctest::Approx(1.0));

    auto flat = ols_simple(std::vector<double>{0, 1, 2, 3}, std::vector<double>{4, 4, 4, 4});
    REQUIRE(flat);
    CHECK(flat->beta == 0.0);
    CHECK(flat->r_squared == 0.0);

    const std::vector<double> x = {0, 1, 2}, y = {0, 1, 3};
    auto [a, b] = grid_least_squares(x, y);
    auto f = ols_simple(x, y);
    REQUIRE(f);
    CHECK(b == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(f->beta == doctest::Approx(b).epsilon(1e-9));
    CHECK(f->intercept == doctest::Approx(a).epsilon(1e-9));
    CHECK(f->r_squared == doctest::Approx(27.0 / 28.0).epsilon(1e-14));

    CHECK_FALSE(ols_simple(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("r squared equals pearson squared on random data") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_series(rng, 30);
        auto y = random_series(rng, 30);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
        const double r = *pearson(x, y);
        const auto fit = *ols_simple(x, y);
        REQUIRE(std::abs(fit.r_squared - r * r) <= 1e-10);
        REQUIRE((fit.beta > 0) == (r > 0));
        REQUIRE(std::abs(r - pearson_definitional(x, y)) <= 1e-10);
    }
}

TEST_CASE("pearson symmetry and affine behaviour") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = random_series(rng, 20);
        auto y = random_series(rng, 20);
        const double r = *pearson(x, y);
        CHECK(*pearson(y, x) == doctest::Approx(r).epsilon(1e-12));
        std::vector<double> neg(x.size());
        std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -3.0 * v + 7.0; });
        CHECK(*pearson(neg, y) == doctest::Approx(-r).epsilon(1e-10));
        std::vector<double> pos(x.size());
        std::transform(x.begin(), x.end(), pos.begin(), [](double v) { return 0.25 * v - 2.0; });
        CHECK(*pearson(pos, y) == doctest::Approx(r).epsilon(1e-10));
    }
}

TEST_CASE("associate drops undefined pairs") {
    std::vector<std::optional<double>> x = {1, std::nullopt, 2, 3, 4};
    std::vector<std::optional<double>> y = {2, 10, std::nullopt, 6, 8};
    auto res = associate(x, y);
    REQUIRE(res.stats);
    CHECK(res.n == 3);
    CHECK(res.stats->r == doctest::Approx(1.0));
    CHECK(res.stats->beta == doctest::Approx(2.0));

    std::vector<std::optional<double>> short_x = {1, 2}, short_y = {1, 2};
    auto small = associate(short_x, short_y);
    CHECK_FALSE(small.stats);
    CHECK(small.reason.find("insufficient n") != std::string::npos);
}

TEST_CASE("concentration index examples") {
    CHECK(*concentration_index(2974, 7481, 16011, 53420) == doctest::Approx(1.33).epsilon(0.005 / 1.33));
    CHECK(std::abs(*concentration_index(2974, 7481, 16011, 53420) - 1.33) <= 0.005);
    CHECK(std::abs(*concentration_index(4754, 20844, 16011, 53420) - 0.76) <= 0.005);
    CHECK(*concentration_index(5, 10, 25, 50) == doctest::Approx(1.0));
    CHECK_FALSE(concentration_index(1, 0, 5, 10));
    CHECK_FALSE(concentration_index(1, 5, 0, 10));
}

TEST_CASE("concentration indices average to one within a column") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> cell(0, 500);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = 2 + trial % 5, cols = 2 + trial % 3;
        std::vector<std::vector<double>> t(rows, std::vector<double>(cols));
        std::vector<double> row_total(rows, 0), col_total(cols, 0);
        double grand = 0;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                t[r][c] = cell(rng) + 1;
                row_total[r] += t[r][c];
                col_total[c] += t[r][c];
                grand += t[r][c];
            }
        }
        for (int c = 0; c < cols; ++c) {
            double weighted = 0;
            for (int r = 0; r < rows; ++r) {
                weighted += *concentration_index(t[r][c], row_total[r], col_total[c], grand) *
                            (row_total[r] / grand);
            }
            REQUIRE(std::abs(weighted - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("quartile bins") {
    auto bins = quartile_bins(std::vector<double>{1, 2, 3, 4});
    CHECK(bins == std::vector<std::uint8_t>{0, 1, 2, 3});

    auto same = quartile_bins(std::vector<double>(9, 2.5));
    CHECK(std::all_of(same.begin(), same.end(), [](auto b) { return b == 0; }));

    CHECK_THROWS_AS(quartile_bins(std::vector<double>{1, 2, 3}), std::invalid_argument);

    // Ties at a cut go to the lower bin.
    auto tied = quartile_bins(std::vector<double>{1, 1, 1, 2, 3, 4, 5, 6});
    CHECK(tied == std::vector<std::uint8_t>{0, 0, 0, 1, 2, 2, 3, 3});
}

TEST_CASE("quartile bins on uniform values match a direct percentile count") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> v(1000);
    for (auto& x : v) x = u(rng);
    const auto bins = quartile_bins(v);
    std::array<int, 4> sizes{};
    for (auto b : bins) ++sizes[b];

    // Oracle: rank each value; rank r (1-based, distinct values) falls in bin
    // ceil(4r/n) - 1.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto rank = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin() + 1);
        const std::size_t expected = (4 * rank + v.size() - 1) / v.size() - 1;
        REQUIRE(bins[i] == expected);
    }
    CHECK(sizes == std::array<int, 4>{250, 250, 250, 250});
}

TEST_CASE("quartile bins are invariant under increasing transforms") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(4 + trial % 37);
        for (auto& x : v) x = d(rng);
        std::vector<double> t(v.size());
        std::transform(v.begin(), v.end(), t.begin(), [](double x) { return std::exp(0.3 * x) + 5; });
        REQUIRE(quartile_bins(v) == quartile_bins(t));
    }
}

TEST_CASE("descriptive statistics") {
    auto one = descriptive(std::vector<double>{5});
    CHECK(one.mean == 5);
    CHECK(one.median == 5);
    CHECK(one.min == 5);
    CHECK(one.max == 5);
    CHECK(one.std == 0);
    CHECK(*one.cv == 0);

    auto two = descriptive(std::vector<double>{2, 4});
    CHECK(two.mean == doctest::Approx(3));
    CHECK(two.median == doctest::Approx(3));
    CHECK(two.std == doctest::Approx(std::sqrt(2.0)));
    CHECK(*two.cv == doctest::Approx(std::sqrt(2.0) / 3));

    auto three = descriptive(std::vector<double>{77.1, 55.6, 70.0});
    CHECK(three.min == 55.6);
    CHECK(three.max == 77.1);
    CHECK(three.median == 70.0);

    CHECK_FALSE(descriptive(std::vector<double>{-1, -2}).cv);
    CHECK_THROWS_AS(descriptive(std::vector<double>{}), std::invalid_argument);

    // Physics column of the dispersion table: 5.1 / 92.7 against 0.056.
    CHECK(std::abs(5.1 / 92.7 - 0.056) <= 0.002);
}

TEST_CASE("std is zero exactly when values are equal") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> d(0, 3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> v(1 + trial % 6);
        for (auto& x : v) x = 0.1 * d(rng);
        const bool all_equal = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
        REQUIRE((descriptive(v).std == 0.0) == all_equal);
    }
}
