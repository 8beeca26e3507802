#include "shapescale/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <set>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"

namespace shapescale {

namespace {

double sq_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

std::size_t count_distinct_rows(const std::vector<double>& matrix, std::size_t n, std::size_t d) {
    std::set<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        rows.emplace(matrix.begin() + i * d, matrix.begin() + (i + 1) * d);
    }
    return rows.size();
}

struct LloydOutcome {
    std::vector<int> labels;
    double within_ss = std::numeric_limits<double>::infinity();
};

/// k-means++ seeding: the first centroid uniform, each next with
/// probability proportional to the squared distance to the nearest centroid
/// already chosen. Selection works on distance ratios, so it is invariant
/// under uniform rescaling of the matrix.
std::vector<double> seed_centroids(const std::vector<double>& matrix, std::size_t n, std::size_t d,
                                   std::size_t C, Rng& rng) {
    std::vector<double> centroids(C * d);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    const std::size_t first = rng.uniform_index(n);
    std::copy_n(matrix.data() + first * d, d, centroids.data());

    for (std::size_t c = 1; c < C; ++c) {
        const double* last = centroids.data() + (c - 1) * d;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = sq_distance(matrix.data() + i * d, last, d);
            if (dist < nearest[i]) nearest[i] = dist;
            total += nearest[i];
        }
        const double threshold = rng.next_double() * total;
        double cumulative = 0.0;
        std::size_t chosen = n;
        for (std::size_t i = 0; i < n; ++i) {
            cumulative += nearest[i];
            if (cumulative >= threshold && nearest[i] > 0.0) {
                chosen = i;
                break;
            }
        }
        if (chosen == n) {  // ran off the end; take the last point with positive weight
            for (std::size_t i = n; i-- > 0;) {
                if (nearest[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        }
        std::copy_n(matrix.data() + chosen * d, d, centroids.data() + c * d);
    }
    return centroids;
}

LloydOutcome lloyd(const std::vector<double>& matrix, std::size_t n, std::size_t d, std::size_t C,
                   const KMeansConfig& config, Rng& rng) {
    std::vector<double> centroids = seed_centroids(matrix, n, d, C, rng);
    std::vector<int> labels(n, -1);
    std::vector<double> sums(C * d);
    std::vector<std::size_t> sizes(C);

    double prev_ss = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < config.max_lloyd_iterations; ++iter) {
        bool changed = false;
        CompensatedSum ss;
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = matrix.data() + i * d;
            int best = 0;
            double best_dist = sq_distance(x, centroids.data(), d);
            for (std::size_t c = 1; c < C; ++c) {
                const double dist = sq_distance(x, centroids.data() + c * d, d);
                if (dist < best_dist) {  // ties keep the lowest centroid index
                    best_dist = dist;
                    best = static_cast<int>(c);
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
            ss.add(best_dist);
        }
        const double cur_ss = ss.value();
        assert(cur_ss <= prev_ss * (1.0 + 1e-12) && "within_ss must not increase");

        const bool tiny_change =
            std::abs(prev_ss - cur_ss) <= config.tolerance * std::max(prev_ss, 1e-300);
        if (!changed || tiny_change) {
            prev_ss = cur_ss;
            break;
        }
        prev_ss = cur_ss;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = matrix.data() + i * d;
            double* s = sums.data() + static_cast<std::size_t>(labels[i]) * d;
            for (std::size_t k = 0; k < d; ++k) s[k] += x[k];
            ++sizes[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t c = 0; c < C; ++c) {
            if (sizes[c] > 0) {
                for (std::size_t k = 0; k < d; ++k) centroids[c * d + k] = sums[c * d + k] / sizes[c];
            } else {
                // Empty cluster: reseed at the point farthest from its own
                // centroid (lowest index on ties).
                std::size_t farthest = 0;
                double far_dist = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dist =
                        sq_distance(matrix.data() + i * d,
                                    centroids.data() + static_cast<std::size_t>(labels[i]) * d, d);
                    if (dist > far_dist) {
                        far_dist = dist;
                        farthest = i;
                    }
                }
                std::copy_n(matrix.data() + farthest * d, d, centroids.data() + c * d);
            }
        }
    }

    // Final pass so within_ss matches the returned labels exactly, with
    // centroids recomputed as the exact means of the final assignment.
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = matrix.data() + i * d;
        double* s = sums.data() + static_cast<std::size_t>(labels[i]) * d;
        for (std::size_t k = 0; k < d; ++k) s[k] += x[k];
        ++sizes[static_cast<std::size_t>(labels[i])];
    }
    CompensatedSum ss;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = matrix.data() + i * d;
        const auto c = static_cast<std::size_t>(labels[i]);
        double dist = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = x[k] - sums[c * d + k] / sizes[c];
            dist += diff * diff;
        }
        ss.add(dist);
    }
    return {std::move(labels), ss.value()};
}

}  // namespace

Partition Partition::from_labels(const std::vector<int>& raw) {
    Partition p;
    p.labels.resize(raw.size());
    std::vector<int> remap;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const int l = raw[i];
        if (l < 0) throw UsageError("cluster labels must be non-negative");
        int mapped = -1;
        for (std::size_t m = 0; m < remap.size(); ++m) {
            if (remap[m] == l) {
                mapped = static_cast<int>(m);
                break;
            }
        }
        if (mapped < 0) {
            mapped = static_cast<int>(remap.size());
            remap.push_back(l);
        }
        p.labels[i] = mapped;
    }
    p.C = remap.size();
    return p;
}

Partition kmeans(const std::vector<double>& matrix, std::size_t n, std::size_t d, std::size_t C,
                 const KMeansConfig& config) {
    if (n == 0 || d == 0 || matrix.size() != n * d) {
        throw UsageError("kmeans input matrix dimensions are inconsistent");
    }
    if (C < 2) throw UsageError("cluster count must be at least 2");
    if (config.restarts < 1) throw UsageError("kmeans needs at least one restart");
    const std::size_t distinct = count_distinct_rows(matrix, n, d);
    if (C > distinct) {
        throw UsageError("cluster count " + std::to_string(C) + " exceeds the " +
                         std::to_string(distinct) + " distinct rows");
    }

    LloydOutcome best;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        Rng rng(config.seed, r);
        LloydOutcome outcome = lloyd(matrix, n, d, C, config, rng);
        if (outcome.within_ss < best.within_ss) best = std::move(outcome);
    }

    Partition p = Partition::from_labels(best.labels);
    if (p.C != C) {
        throw NumericError("kmeans produced " + std::to_string(p.C) + " non-empty clusters of " +
                           std::to_string(C) + " requested");
    }
    p.within_ss = best.within_ss;
    return p;
}

}  // namespace shapescale
