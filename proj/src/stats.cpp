#include "depwatch/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace depwatch::stats {

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) throw StatsError("correlation is undefined for a constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw StatsError(fmt::format("length mismatch ({} vs {})", xs.size(), ys.size()));
    }
    if (xs.size() < 2) throw StatsError("spearman needs at least two observations");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw StatsError("mann_whitney_u needs two non-empty samples");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = average_ranks(pooled);

    const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);
    MannWhitney out;
    out.u_a = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    out.u_b = static_cast<double>(n1 * n2) - out.u_a;

    // Tie term sum(t^3 - t) over groups of equal values.
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double ties = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    const double nn = static_cast<double>(n);
    const double mu = static_cast<double>(n1 * n2) / 2.0;
    const double var = static_cast<double>(n1 * n2) / 12.0 * ((nn + 1.0) - ties / (nn * (nn - 1.0)));
    if (var > 0) {
        out.z = (std::abs(out.u_a - mu) - 0.5) / std::sqrt(var);
        out.p_two_sided = std::min(1.0, std::erfc(out.z / std::sqrt(2.0)));
    } else {
        out.z = 0;
        out.p_two_sided = 1.0;
    }

    if (n <= kExactLimit) {
        // Doubled midranks are integers, so subset sums can be counted exactly.
        std::vector<std::int64_t> r2(n);
        for (std::size_t i = 0; i < n; ++i) r2[i] = std::llround(ranks[i] * 2.0);
        const std::int64_t max_sum = std::accumulate(r2.begin(), r2.end(), std::int64_t{0});
        std::vector<std::vector<double>> dp(n1 + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
        dp[0][0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = std::min(i + 1, n1); k >= 1; --k) {
                for (std::int64_t s = max_sum; s >= r2[i]; --s) {
                    dp[k][static_cast<std::size_t>(s)] += dp[k - 1][static_cast<std::size_t>(s - r2[i])];
                }
            }
        }
        const std::int64_t observed = std::accumulate(r2.begin(), r2.begin() + static_cast<std::ptrdiff_t>(n1),
                                                      std::int64_t{0});
        const std::int64_t centre = static_cast<std::int64_t>(n1 * (n + 1));
        const std::int64_t dev = std::llabs(observed - centre);
        double extreme = 0, total = 0;
        for (std::int64_t s = 0; s <= max_sum; ++s) {
            const double c = dp[n1][static_cast<std::size_t>(s)];
            total += c;
            if (std::llabs(s - centre) >= dev) extreme += c;
        }
        out.p_exact = extreme / total;
    }
    return out;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw StatsError("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) { return quantile(xs, 0.5); }

double stddev(std::span<const double> xs) {
    const double m = mean(xs);
    double acc = 0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

double quantile(std::span<const double> xs, double q) {
    if (xs.empty()) throw StatsError("quantile of an empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<CorrelatedPair> correlated_pairs(const std::vector<std::vector<double>>& columns, double threshold) {
    std::vector<CorrelatedPair> out;
    auto constant = [](const std::vector<double>& c) {
        return c.empty() || std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); });
    };
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (constant(columns[i])) continue;
        for (std::size_t j = i + 1; j < columns.size(); ++j) {
            if (constant(columns[j])) continue;
            const double rho = spearman(columns[i], columns[j]);
            if (std::abs(rho) > threshold) out.push_back({i, j, rho});
        }
    }
    return out;
}

}  // namespace depwatch::stats
