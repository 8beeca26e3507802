#include "shapescale/problem_p.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"
#include "shapescale/shape_complexity.hpp"

namespace shapescale {

std::string to_string(ObjectiveVariant v) {
    switch (v) {
        case ObjectiveVariant::pair_one_two: return "pair-one-two";
        case ObjectiveVariant::all_pairs: return "all-pairs";
        case ObjectiveVariant::maximize_sc: return "maximize-sc";
    }
    return "unknown";
}

ObjectiveVariant objective_variant_from_string(const std::string& s) {
    if (s == "pair-one-two" || s == "pair_one_two") return ObjectiveVariant::pair_one_two;
    if (s == "all-pairs" || s == "all_pairs") return ObjectiveVariant::all_pairs;
    if (s == "maximize-sc" || s == "maximize_sc") return ObjectiveVariant::maximize_sc;
    throw UsageError("unknown objective variant '" + s +
                     "' (expected pair-one-two, all-pairs or maximize-sc)");
}

TrialConfig TrialConfig::defaults(ObjectiveVariant variant, std::uint64_t seed) {
    TrialConfig config;
    config.seed = seed;
    if (variant == ObjectiveVariant::maximize_sc) {
        config.init_low = 1e-5;
        config.init_high = 1.0;
    }
    return config;
}

void TrialConfig::validate() const {
    if (!(init_low > 0.0) || !(init_low < init_high)) {
        throw UsageError("initial-point bounds must satisfy 0 < low < high");
    }
    if (alpha_floor < 1e-5) throw UsageError("alpha floor must be at least 1e-5");
    if (max_iterations < 1) throw UsageError("max_iterations must be at least 1");
    if (!(objective_tolerance > 0.0) || !(step_tolerance > 0.0)) {
        throw UsageError("tolerances must be positive");
    }
}

double residual(const PairTable& table, const std::vector<double>& alpha, std::size_t k,
                std::size_t l) {
    const std::size_t d = table.d();
    if (k >= d || l >= d) throw UsageError("residual dimensions out of range");
    if (k == l) throw UsageError("residual requires two distinct dimensions");
    if (alpha.size() != d) throw UsageError("alpha vector length does not match the table");

    std::vector<double> alpha_sq(d);
    for (std::size_t q = 0; q < d; ++q) alpha_sq[q] = alpha[q] * alpha[q];
    const double inv_n = 1.0 / table.pair_normalizer();

    CompensatedSum sum;
    table.for_each_pair([&](std::size_t, const double* rho2) {
        double r2 = 0.0;
        for (std::size_t q = 0; q < d; ++q) r2 += alpha_sq[q] * rho2[q];
        const double r = std::sqrt(r2);
        sum.add((rho2[k] - rho2[l]) * inv_n / (r2 * r));
    });
    return sum.value();
}

double objective(const PairTable& table, const std::vector<double>& alpha,
                 ObjectiveVariant variant) {
    switch (variant) {
        case ObjectiveVariant::pair_one_two: {
            const double r = residual(table, alpha, 0, 1);
            return r * r;
        }
        case ObjectiveVariant::all_pairs: {
            const std::size_t d = table.d();
            if (d < 2) throw UsageError("all-pairs objective needs at least 2 dimensions");
            CompensatedSum sum;
            for (std::size_t k = 0; k + 1 < d; ++k) {
                for (std::size_t l = k + 1; l < d; ++l) {
                    const double r = residual(table, alpha, k, l);
                    sum.add(r * r);
                }
            }
            return sum.value();
        }
        case ObjectiveVariant::maximize_sc:
            return -sc_value(table, alpha).sc;
    }
    throw UsageError("unknown objective variant");
}

std::vector<double> project_sphere_floor(std::vector<double> alpha, double floor) {
    const std::size_t d = alpha.size();
    const double target_total = static_cast<double>(d);
    std::vector<bool> active(d, false);
    for (std::size_t round = 0; round <= d; ++round) {
        std::size_t n_active = 0;
        for (std::size_t k = 0; k < d; ++k) {
            if (alpha[k] < floor) active[k] = true;
            if (active[k]) {
                alpha[k] = floor;
                ++n_active;
            }
        }
        double free_mass = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            if (!active[k]) free_mass += alpha[k] * alpha[k];
        if (free_mass <= 0.0) break;  // everything clamped; floor << 1 keeps this unreachable
        const double target = target_total - static_cast<double>(n_active) * floor * floor;
        const double scale = std::sqrt(target / free_mass);
        bool pushed_below = false;
        for (std::size_t k = 0; k < d; ++k) {
            if (active[k]) continue;
            alpha[k] *= scale;
            if (alpha[k] < floor) pushed_below = true;
        }
        if (!pushed_below) break;
    }
    return alpha;
}

namespace {

std::vector<double> project_floor(std::vector<double> alpha, double floor) {
    for (double& a : alpha) a = std::max(a, floor);
    return alpha;
}

template <class F>
bool fd_gradient(F&& f, const std::vector<double>& alpha, std::vector<double>& grad) {
    const std::size_t d = alpha.size();
    grad.resize(d);
    std::vector<double> probe = alpha;
    bool finite = true;
    for (std::size_t k = 0; k < d; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(alpha[k]));
        probe[k] = alpha[k] + h;
        const double fp = f(probe);
        probe[k] = alpha[k] - h;
        const double fm = f(probe);
        probe[k] = alpha[k];
        grad[k] = (fp - fm) / (2.0 * h);
        if (!std::isfinite(grad[k])) finite = false;
    }
    return finite;
}

/// First-order stationarity at the tolerance of the acceptance contract.
/// For the sphere-constrained variants the gradient is reduced by zeroing
/// floor-active components and projecting out the radial direction of the
/// free coordinates; for maximize_sc only the floor reduction applies and
/// the comparison scale follows the objective's own magnitude (an absolute
/// test would never pass while SC grows without bound, a relative-to-
/// gradient test would pass spuriously at overflow stalls).
bool stationary(const std::vector<double>& alpha, const std::vector<double>& grad,
                double f_value, double floor, ObjectiveVariant variant) {
    const std::size_t d = alpha.size();
    for (double g : grad)
        if (!std::isfinite(g)) return false;

    std::vector<double> reduced = grad;
    std::vector<double> free_alpha = alpha;
    for (std::size_t k = 0; k < d; ++k) {
        if (alpha[k] <= floor * (1.0 + 1e-12)) {
            reduced[k] = 0.0;
            free_alpha[k] = 0.0;
        }
    }
    if (variant == ObjectiveVariant::maximize_sc) {
        const double scale = std::max(1.0, std::abs(f_value)) / std::max(1.0, norm(alpha));
        return norm(reduced) <= 1e-6 * scale;
    }
    const double nf = squared_norm(free_alpha);
    if (nf > 0.0) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += reduced[k] * free_alpha[k];
        for (std::size_t k = 0; k < d; ++k) reduced[k] -= dot / nf * free_alpha[k];
    }
    return norm(reduced) <= 1e-6 * std::max(1.0, norm(grad));
}

}  // namespace

TrialResult solve_local(const PairTable& table, const std::vector<double>& init,
                        const TrialConfig& config, ObjectiveVariant variant) {
    config.validate();
    if (init.size() != table.d()) {
        throw UsageError("initial point length does not match the table's dimension count");
    }
    for (double a : init) {
        if (!std::isfinite(a) || a <= 0.0) {
            throw UsageError("initial point must be finite and strictly positive");
        }
    }

    const bool sphere = variant != ObjectiveVariant::maximize_sc;
    const double floor = config.alpha_floor;
    auto project = [&](std::vector<double> a) {
        return sphere ? project_sphere_floor(std::move(a), floor)
                      : project_floor(std::move(a), floor);
    };
    auto f = [&](const std::vector<double>& a) { return objective(table, a, variant); };

    TrialResult result;
    result.initial_alpha = init;

    std::vector<double> alpha = project(init);
    double fa = f(alpha);
    if (!std::isfinite(fa)) {
        result.final_alpha = alpha;
        result.objective = fa;
        result.sc = std::numeric_limits<double>::quiet_NaN();
        result.converged = false;
        result.iterations = 0;
        result.diagnostic = "objective is non-finite at the initial point";
        return result;
    }

    std::vector<double> grad;
    std::vector<double> candidate;
    double step_scale = 0.5;
    int it = 0;
    while (it < config.max_iterations) {
        ++it;
        const bool grad_finite = fd_gradient(f, alpha, grad);
        if (!grad_finite) {
            result.diagnostic = "finite-difference gradient is non-finite";
            break;
        }
        const double grad_norm = norm(grad);
        if (grad_norm == 0.0) {
            result.converged = true;  // exactly stationary (symmetric data)
            break;
        }

        bool accepted = false;
        double st = step_scale;
        for (int halvings = 0; halvings < 60; ++halvings) {
            candidate = alpha;
            for (std::size_t k = 0; k < candidate.size(); ++k) candidate[k] -= st * grad[k];
            candidate = project(std::move(candidate));
            const double fc = f(candidate);
            if (std::isfinite(fc) && fc < fa) {
                const double df = fa - fc;
                double step_norm = 0.0;
                for (std::size_t k = 0; k < candidate.size(); ++k) {
                    const double dk = candidate[k] - alpha[k];
                    step_norm += dk * dk;
                }
                step_norm = std::sqrt(step_norm);
                alpha = candidate;
                fa = fc;
                step_scale = st * 2.0;
                accepted = true;
                if (df < config.objective_tolerance || step_norm < config.step_tolerance) {
                    if (fd_gradient(f, alpha, grad) &&
                        stationary(alpha, grad, fa, floor, variant)) {
                        result.converged = true;
                    }
                }
                break;
            }
            st *= 0.5;
        }
        if (result.converged) break;
        if (!accepted) {
            // No finite improving step exists at any scale; the point is
            // either stationary or the objective diverged (maximize_sc).
            result.converged = stationary(alpha, grad, fa, floor, variant);
            break;
        }
    }

    result.final_alpha = alpha;
    result.objective = fa;
    result.iterations = it;
    try {
        result.sc = sc_value(table, alpha).sc;
    } catch (const std::exception&) {
        result.sc = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

TrialSet run_trials(const PairTable& table, std::size_t count, const TrialConfig& config,
                    ObjectiveVariant variant, int threads) {
    if (count < 1) throw UsageError("trial count must be at least 1");
    config.validate();

    TrialSet set;
    set.master_seed = config.seed;
    set.results.resize(count);

    const std::size_t d = table.d();
    auto run_one = [&](std::size_t t) {
        Rng rng(config.seed, t);
        std::vector<double> init(d);
        for (std::size_t k = 0; k < d; ++k) init[k] = rng.uniform(config.init_low, config.init_high);
        set.results[t] = solve_local(table, init, config, variant);
    };

    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, count);
    if (n_threads <= 1) {
        for (std::size_t t = 0; t < count; ++t) run_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t t = next.fetch_add(1); t < count; t = next.fetch_add(1)) run_one(t);
        };
        std::vector<std::thread> pool;
        pool.reserve(n_threads - 1);
        for (std::size_t i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    std::size_t aborted = 0;
    for (const auto& r : set.results) {
        if (!r.converged) ++set.discarded;
        if (!std::isfinite(r.objective)) ++aborted;
    }
    if (aborted == count) {
        throw NumericError("all " + std::to_string(count) +
                           " trials failed with non-finite objectives; the data may contain "
                           "near-coincident samples or extreme magnitudes");
    }
    return set;
}

void write_trials(const TrialSet& set, std::ostream& out) {
    for (std::size_t t = 0; t < set.results.size(); ++t) {
        const TrialResult& r = set.results[t];
        nlohmann::ordered_json rec;
        rec["trial"] = t;
        rec["initial_alpha"] = r.initial_alpha;
        rec["final_alpha"] = r.final_alpha;
        rec["objective"] = r.objective;
        rec["sc"] = r.sc;
        rec["converged"] = r.converged;
        rec["iterations"] = r.iterations;
        if (!r.diagnostic.empty()) rec["diagnostic"] = r.diagnostic;
        out << rec.dump() << '\n';
    }
}

TrialSet read_trials(std::istream& in) {
    TrialSet set;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto rec = nlohmann::json::parse(line);
        // Non-finite reals serialize as JSON null.
        auto real_or_nan = [](const nlohmann::json& v) {
            return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        };
        TrialResult r;
        r.initial_alpha = rec.at("initial_alpha").get<std::vector<double>>();
        r.final_alpha = rec.at("final_alpha").get<std::vector<double>>();
        r.objective = real_or_nan(rec.at("objective"));
        r.sc = real_or_nan(rec.at("sc"));
        r.converged = rec.at("converged").get<bool>();
        r.iterations = rec.at("iterations").get<int>();
        if (rec.contains("diagnostic")) r.diagnostic = rec.at("diagnostic").get<std::string>();
        const std::size_t t = rec.at("trial").get<std::size_t>();
        if (set.results.size() <= t) set.results.resize(t + 1);
        set.results[t] = std::move(r);
    }
    for (const auto& r : set.results)
        if (!r.converged) ++set.discarded;
    return set;
}

}  // namespace shapescale
