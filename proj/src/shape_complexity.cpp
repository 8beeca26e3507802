#include "shapescale/shape_complexity.hpp"

#include <cmath>
#include <limits>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"

namespace shapescale {

namespace {

void check_alpha(const PairTable& table, const std::vector<double>& alpha) {
    if (alpha.size() != table.d()) {
        throw UsageError("alpha vector length " + std::to_string(alpha.size()) +
                         " does not match the table's " + std::to_string(table.d()) + " dimensions");
    }
    for (double a : alpha) {
        if (!std::isfinite(a) || a <= 0.0) {
            throw UsageError("alpha entries must be finite and strictly positive");
        }
    }
}

[[noreturn]] void coincident_pair(std::size_t t) {
    throw NumericError("pair " + std::to_string(t) +
                       " has zero distance; the pair table was built without deduplication");
}

}  // namespace

ScEvaluation sc_value(const PairTable& table, const std::vector<double>& alpha,
                      bool want_distances) {
    check_alpha(table, alpha);
    const std::size_t d = table.d();
    std::vector<double> alpha_sq(d);
    for (std::size_t k = 0; k < d; ++k) alpha_sq[k] = alpha[k] * alpha[k];

    CompensatedSum sum_r2;
    CompensatedSum sum_rinv;
    std::vector<double> distances;
    if (want_distances) distances.reserve(table.pair_count());

    table.for_each_pair([&](std::size_t t, const double* rho2) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) r2 += alpha_sq[k] * rho2[k];
        if (!(r2 > 0.0)) coincident_pair(t);
        const double r = std::sqrt(r2);
        sum_r2.add(r2);
        sum_rinv.add(1.0 / r);
        if (want_distances) distances.push_back(r);
    });

    ScEvaluation eval;
    eval.g = std::sqrt(sum_r2.value());
    eval.h = sum_rinv.value();
    eval.sc = eval.g * eval.h;
    if (want_distances) eval.distances = std::move(distances);

    // With every original row in the table, sum_{i<j} rho2_k = N per
    // dimension, so g^2 = N sum_k alpha_k^2 must hold.
    if (table.covers_all_rows() && std::isfinite(eval.g)) {
        double closed = 0.0;
        for (double a2 : alpha_sq) closed += a2;
        closed *= table.pair_normalizer();
        const double direct = eval.g * eval.g;
        if (std::abs(direct - closed) > 1e-8 * std::max(1.0, std::abs(closed))) {
            throw NumericError("g^2 disagrees with its closed form on a full-row table");
        }
    }
    return eval;
}

ScEvaluation sc_gradient(const PairTable& table, const std::vector<double>& alpha) {
    check_alpha(table, alpha);
    const std::size_t d = table.d();
    std::vector<double> alpha_sq(d);
    for (std::size_t k = 0; k < d; ++k) alpha_sq[k] = alpha[k] * alpha[k];

    CompensatedSum sum_r2;
    CompensatedSum sum_rinv;
    std::vector<CompensatedSum> weighted(d);  // B_k = sum r^-3 rho2_k

    table.for_each_pair([&](std::size_t t, const double* rho2) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) r2 += alpha_sq[k] * rho2[k];
        if (!(r2 > 0.0)) coincident_pair(t);
        const double r = std::sqrt(r2);
        const double rm3 = 1.0 / (r2 * r);
        sum_r2.add(r2);
        sum_rinv.add(1.0 / r);
        for (std::size_t k = 0; k < d; ++k) weighted[k].add(rm3 * rho2[k]);
    });

    ScEvaluation eval;
    eval.g = std::sqrt(sum_r2.value());
    eval.h = sum_rinv.value();
    eval.sc = eval.g * eval.h;
    eval.gradient.resize(d);
    const auto& col_sums = table.column_pair_sums();
    for (std::size_t k = 0; k < d; ++k) {
        const double g_k = alpha[k] / eval.g * col_sums[k];
        const double h_k = -alpha[k] * weighted[k].value();
        eval.gradient[k] = g_k * eval.h + eval.g * h_k;
    }
    return eval;
}

std::vector<DimensionCase> cases_c1_c2(const PairTable& table, const std::vector<double>& alpha) {
    const ScEvaluation eval = sc_gradient(table, alpha);
    const std::size_t d = table.d();
    const auto& col_sums = table.column_pair_sums();
    std::vector<DimensionCase> cases(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double g_k = alpha[k] / eval.g * col_sums[k];
        const double h_k = (eval.gradient[k] - g_k * eval.h) / eval.g;
        const double lhs = g_k / eval.g;
        const double rhs = -h_k / eval.h;
        const double tol = 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (std::abs(lhs - rhs) <= tol) {
            cases[k] = DimensionCase::Equilibrium;
        } else {
            cases[k] = lhs > rhs ? DimensionCase::C1 : DimensionCase::C2;
        }
    }
    return cases;
}

double min_pair_distance(const PairTable& table, const std::vector<double>& alpha) {
    check_alpha(table, alpha);
    const std::size_t d = table.d();
    std::vector<double> alpha_sq(d);
    for (std::size_t k = 0; k < d; ++k) alpha_sq[k] = alpha[k] * alpha[k];
    double best = std::numeric_limits<double>::infinity();
    table.for_each_pair([&](std::size_t, const double* rho2) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) r2 += alpha_sq[k] * rho2[k];
        if (r2 < best) best = r2;
    });
    return std::sqrt(best);
}

}  // namespace shapescale
