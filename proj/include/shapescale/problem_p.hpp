#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shapescale/pair_table.hpp"

namespace shapescale {

/// Objective choices. pair_one_two is the default formulation: the squared
/// orthogonality residual of dimensions (1, 2). all_pairs extends the same
/// residual to every unordered dimension pair. maximize_sc is the
/// alternative mode: maximize SC subject only to the floor bound.
enum class ObjectiveVariant { pair_one_two, all_pairs, maximize_sc };

std::string to_string(ObjectiveVariant v);
ObjectiveVariant objective_variant_from_string(const std::string& s);

struct TrialConfig {
    std::uint64_t seed = 0;
    double init_low = 0.5;
    double init_high = 1.5;
    int max_iterations = 5000;
    double alpha_floor = 1e-5;
    double objective_tolerance = 1e-12;
    double step_tolerance = 1e-9;

    /// Paper defaults per mode: [0.5, 1.5]^d for the residual problems,
    /// [1e-5, 1]^d for SC maximization.
    static TrialConfig defaults(ObjectiveVariant variant, std::uint64_t seed = 0);

    void validate() const;  // throws UsageError
};

struct TrialResult {
    std::vector<double> initial_alpha;
    std::vector<double> final_alpha;
    double objective = 0.0;
    double sc = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string diagnostic;  // set when the trial aborted on a non-finite objective
};

struct TrialSet {
    std::vector<TrialResult> results;
    std::size_t discarded = 0;  // results with converged == false
    std::uint64_t master_seed = 0;
};

/// Signed residual sum_{i<j} r_ij^-3 N^-1 (rho2_k - rho2_l) with
/// N = n_orig (n_orig - 1). Antisymmetric in (k, l) exactly. Dimensions
/// are 0-based. Throws UsageError when k == l or out of range.
double residual(const PairTable& table, const std::vector<double>& alpha, std::size_t k,
                std::size_t l);

/// Scalar objective, uniformly minimized: residual(0,1)^2 for
/// pair_one_two, the sum of squared residuals over all dimension pairs for
/// all_pairs, and -SC for maximize_sc.
double objective(const PairTable& table, const std::vector<double>& alpha,
                 ObjectiveVariant variant);

/// Projection onto { sum alpha_k^2 = d } intersected with
/// { alpha_k >= floor }: clamp to the floor, renormalize the free entries
/// onto the remaining sphere mass, repeat while renormalization pushes new
/// entries below the floor (the active set grows monotonically, so at most
/// d rounds). Exposed for tests.
std::vector<double> project_sphere_floor(std::vector<double> alpha, double floor);

/// Local solve from one initial point: projected gradient descent with
/// central finite-difference gradients (step 1e-6 max(1, alpha_k)) and a
/// step-halving line search. A trial counts as converged only when the
/// objective-change / step-norm tolerances are met at a point that is also
/// first-order stationary (tangent-projected, floor-reduced gradient norm
/// <= 1e-6 relative). maximize_sc trials normally end non-converged: SC is
/// unbounded along floor-active rays, so iterates grow until the iteration
/// cap or until no finite improving step exists, as in the source
/// formulation.
TrialResult solve_local(const PairTable& table, const std::vector<double>& init,
                        const TrialConfig& config, ObjectiveVariant variant);

/// Multi-start batch. Trial t draws its initial point from an RNG stream
/// derived from (config.seed, t), so the batch is byte-identical for a
/// fixed seed regardless of thread count. Results are stored by trial
/// index. Throws NumericError when every trial aborted without producing a
/// finite objective.
TrialSet run_trials(const PairTable& table, std::size_t count, const TrialConfig& config,
                    ObjectiveVariant variant, int threads = 0);

/// Line-delimited JSON stream, one record per trial: index, initial and
/// final alpha, objective, SC, converged flag, iteration count.
void write_trials(const TrialSet& set, std::ostream& out);
TrialSet read_trials(std::istream& in);

}  // namespace shapescale
