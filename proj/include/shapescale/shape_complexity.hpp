#pragma once

#include <optional>
#include <vector>

#include "shapescale/pair_table.hpp"

namespace shapescale {

/// SC = g * h with g = (sum_{i<j} r_ij^2)^{1/2} and h = sum_{i<j} 1/r_ij,
/// where r_ij^2 = sum_k alpha_k^2 rho2[p][k]. `gradient` holds the partial
/// derivatives of SC with respect to each alpha_k when requested.
struct ScEvaluation {
    double sc = 0.0;
    double g = 0.0;
    double h = 0.0;
    std::vector<double> gradient;
    std::optional<std::vector<double>> distances;
};

enum class DimensionCase { C1, C2, Equilibrium };

/// Evaluate SC at alpha. g is always computed by direct summation over the
/// table's pairs; when the table covers all rows, the closed form
/// g^2 = N sum alpha_k^2 is verified as a consistency cross-check.
/// Throws NumericError on a coincident pair (r_ij = 0, meaning the caller
/// bypassed deduplication) and UsageError on non-positive alpha.
ScEvaluation sc_value(const PairTable& table, const std::vector<double>& alpha,
                      bool want_distances = false);

/// As sc_value, and fills `gradient` with the analytic partials
///   g'_k = alpha_k g^-1 sum rho2_k,   h'_k = -alpha_k sum r^-3 rho2_k,
///   SC'_k = g'_k h + g h'_k.
ScEvaluation sc_gradient(const PairTable& table, const std::vector<double>& alpha);

/// Classify each dimension by the strict comparison of g'_k/g against
/// -h'_k/h: C1 when the relative gain in g dominates, C2 when the relative
/// loss in h dominates, Equilibrium when they balance within 1e-10
/// (relative to the larger ratio magnitude).
std::vector<DimensionCase> cases_c1_c2(const PairTable& table, const std::vector<double>& alpha);

/// Smallest pairwise distance at alpha; reported by the CLI so users can
/// diagnose conditioning (near-duplicates make r^-3 terms enormous).
double min_pair_distance(const PairTable& table, const std::vector<double>& alpha);

}  // namespace shapescale
