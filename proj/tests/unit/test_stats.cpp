#include <doctest.h>

#include "depwatch/model.hpp"
#include "depwatch/stats.hpp"

#include <cmath>
#include <vector>

using namespace depwatch::stats;

namespace {

/// U by direct pair counting.
double pair_u(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0;
    for (double x : a) {
        for (double y : b) u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
    }
    return u;
}

/// Two-sided exact p by enumerating every split of the pooled sample.
double enumerated_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const double mu = static_cast<double>(a.size() * b.size()) / 2.0;
    const double dev = std::abs(pair_u(a, b) - mu);
    double extreme = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
        std::vector<double> x, y;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? x : y).push_back(pooled[i]);
        total += 1;
        if (std::abs(pair_u(x, y) - mu) >= dev - 1e-9) extreme += 1;
    }
    return extreme / total;
}

}  // namespace

TEST_CASE("average ranks share ties") {
    const std::vector<double> xs{10, 20, 20, 5, 30, 20};
    CHECK(average_ranks(xs) == std::vector<double>{2, 4, 4, 1, 6, 4});
}

TEST_CASE("spearman extremes and a tied fixture") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(spearman(x, std::vector<double>{2, 4, 8, 16, 32}) == doctest::Approx(1.0));
    CHECK(spearman(x, std::vector<double>{9, 7, 5, 3, 1}) == doctest::Approx(-1.0));

    const std::vector<double> tx{1, 2, 2, 3, 4, 4};
    const std::vector<double> ty{1, 3, 2, 4, 6, 5};
    CHECK(spearman(tx, ty) == doctest::Approx(std::sqrt(33.0 / 35.0)).epsilon(1e-12));
    CHECK(spearman(tx, ty) == doctest::Approx(spearman(ty, tx)));

    CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), StatsError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), StatsError);
    CHECK_THROWS_AS(spearman(x, std::vector<double>{3, 3, 3, 3, 3}), StatsError);
}

TEST_CASE("mann-whitney on a separated sample") {
    const auto r = mann_whitney_u(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
    CHECK(r.u_a == 0);
    CHECK(r.u_b == 9);
    CHECK(r.z == doctest::Approx(4.0 / std::sqrt(5.25)));
    CHECK(r.p_two_sided == doctest::Approx(0.080856).epsilon(1e-4));
    REQUIRE(r.p_exact);
    CHECK(*r.p_exact == doctest::Approx(0.1));

    const auto flat = mann_whitney_u(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2});
    CHECK(flat.u_a == 3);
    CHECK(flat.p_two_sided == 1.0);
    CHECK(*flat.p_exact == doctest::Approx(1.0));
    CHECK_THROWS_AS(mann_whitney_u(std::vector<double>{}, std::vector<double>{1}), StatsError);
}

TEST_CASE("mann-whitney matches exhaustive enumeration on eight-point samples") {
    depwatch::model::Rng rng(7);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n1 = 1 + rng.below(7);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < 8; ++i) (i < n1 ? a : b).push_back(static_cast<double>(rng.below(5)));
        CAPTURE(round);
        const auto r = mann_whitney_u(a, b);
        CHECK(r.u_a == pair_u(a, b));
        CHECK(r.u_a + r.u_b == doctest::Approx(static_cast<double>(a.size() * b.size())));
        REQUIRE(r.p_exact);
        CHECK(*r.p_exact == doctest::Approx(enumerated_p(a, b)).epsilon(1e-12));
        CHECK(r.p_two_sided >= 0.0);
        CHECK(r.p_two_sided <= 1.0);

        const auto swapped = mann_whitney_u(b, a);
        CHECK(swapped.u_a == r.u_b);
        CHECK(*swapped.p_exact == doctest::Approx(*r.p_exact));
    }
}

TEST_CASE("exact p is skipped for large samples") {
    std::vector<double> a(30), b(30);
    for (std::size_t i = 0; i < 30; ++i) {
        a[i] = static_cast<double>(i);
        b[i] = static_cast<double>(i) + 0.5;
    }
    CHECK_FALSE(mann_whitney_u(a, b).p_exact);
}

TEST_CASE("summary statistics") {
    const std::vector<double> xs{4, 1, 3, 2};
    CHECK(mean(xs) == 2.5);
    CHECK(median(xs) == 2.5);
    CHECK(median(std::vector<double>{5, 1, 3}) == 3);
    CHECK(quantile(xs, 0.25) == 1.75);
    CHECK(quantile(xs, 0.0) == 1);
    CHECK(quantile(xs, 1.0) == 4);
    CHECK(stddev(xs) == doctest::Approx(std::sqrt(1.25)));
    CHECK_THROWS_AS(mean(std::vector<double>{}), StatsError);
    CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), StatsError);
}

TEST_CASE("correlated column pairs") {
    const std::vector<std::vector<double>> columns{
        {1, 2, 3, 4, 5},
        {2, 4, 6, 8, 11},
        {5, 4, 3, 2, 1},
        {7, 7, 7, 7, 7},
        {3, 1, 4, 1, 5},
    };
    const auto pairs = correlated_pairs(columns);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].first == 0);
    CHECK(pairs[0].second == 1);
    CHECK(pairs[0].rho == doctest::Approx(1.0));
    CHECK(pairs[1].second == 2);
    CHECK(pairs[1].rho == doctest::Approx(-1.0));
    CHECK(pairs[2].first == 1);
    CHECK(pairs[2].second == 2);
    CHECK(correlated_pairs(columns, 1.0).empty());
}
