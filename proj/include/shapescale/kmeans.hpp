#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace shapescale {

/// A clustering of n points into C non-empty clusters. Labels are
/// canonicalized by first-occurrence order, so two runs that produce the
/// same grouping produce the same label vector.
struct Partition {
    std::vector<int> labels;
    std::size_t C = 0;
    double within_ss = 0.0;

    /// Canonicalize an arbitrary label vector (relabel by first occurrence,
    /// count clusters). within_ss is left at zero; reference partitions
    /// have no meaningful one.
    static Partition from_labels(const std::vector<int>& raw);
};

struct KMeansConfig {
    std::size_t restarts = 50;
    int max_lloyd_iterations = 300;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;  // relative within_ss change
};

/// Lloyd's algorithm with k-means++ seeding and `restarts` independent
/// restarts (per-restart derived seeds); returns the restart with minimal
/// within-cluster sum of squares, ties broken by restart index. Distance
/// ties in assignment go to the lowest-index centroid; empty clusters are
/// repaired by reseeding at the point farthest from its centroid.
/// `matrix` is row-major n x d. Throws UsageError when C < 2 or C exceeds
/// the number of distinct rows.
Partition kmeans(const std::vector<double>& matrix, std::size_t n, std::size_t d, std::size_t C,
                 const KMeansConfig& config);

}  // namespace shapescale
