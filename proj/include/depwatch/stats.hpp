#pragma once

#include "depwatch/error.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace depwatch::stats {

class StatsError : public Error {
public:
    using Error::Error;
};

/// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

/// Rank correlation. Throws on length mismatch, n < 2 or a constant input.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct MannWhitney {
    double u_a = 0;  // U for the first sample: pairs (a, b) with a > b, ties counted 1/2
    double u_b = 0;
    double z = 0;
    double p_two_sided = 1;                // normal approximation, tie + continuity corrected
    std::optional<double> p_exact;         // permutation distribution, small samples only
};

/// Largest combined size for which the exact p-value is computed.
inline constexpr std::size_t kExactLimit = 50;

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
double stddev(std::span<const double> xs);  // population
/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::span<const double> xs, double q);

struct CorrelatedPair {
    std::size_t first;
    std::size_t second;
    double rho;
};

/// Column pairs with |rho| above `threshold`; constant columns are skipped.
std::vector<CorrelatedPair> correlated_pairs(const std::vector<std::vector<double>>& columns, double threshold = 0.7);

}  // namespace depwatch::stats
