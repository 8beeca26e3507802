#pragma once

#include <cstdint>
#include <cstddef>

#include "shapescale/kmeans.hpp"

namespace shapescale {

/// Pair tallies against the reference partition: TS pairs co-clustered in
/// both, TD split in both, FD co-clustered in the reference but split in
/// the obtained partition, FS the converse. TS + TD + FD + FS = C(n, 2).
struct PairCounts {
    std::int64_t TS = 0;
    std::int64_t TD = 0;
    std::int64_t FD = 0;
    std::int64_t FS = 0;

    std::int64_t total() const { return TS + TD + FD + FS; }
};

struct AriReport {
    double ri = 0.0;
    double expected_ri = 0.0;
    double u = 0.0;  // Stirling ratio S(n-1, C) / S(n, C)
    double v = 0.0;  // reference co-clustering rate (TS + FD) / C(n, 2)
    double ari_fnc = 0.0;
};

/// Tally via the contingency table (O(n + K1 K2)). Throws UsageError on
/// length mismatch.
PairCounts pair_counts(const Partition& reference, const Partition& obtained);

/// Direct O(n^2) enumeration of all pairs; must agree with pair_counts
/// exactly (kept as the independent route for verification).
PairCounts pair_counts_direct(const Partition& reference, const Partition& obtained);

/// RI = (TS + TD) / C(n_orig, 2). Throws UsageError when n_orig < 2.
double rand_index(const PairCounts& counts, std::size_t n_orig);

/// U = S(n_orig - 1, C) / S(n_orig, C) with Stirling numbers of the second
/// kind, evaluated by the recurrence on per-row normalized values (each row
/// rescaled to keep magnitudes bounded; the ratio is scale-free). For
/// n_orig <= 200 the result is cross-checked against an exact big-integer
/// evaluation. Throws UsageError unless 2 <= C <= n_orig.
double stirling_ratio(std::size_t n_orig, std::size_t C);

/// Exact big-integer evaluation of the same ratio (n_orig <= 200).
double stirling_ratio_exact(std::size_t n_orig, std::size_t C);

/// Fixed-cluster-count Adjusted Rand Index:
///   ARI_fnc = (RI - E[RI]) / (1 - E[RI]),  E[RI] = UV + (1-U)(1-V).
/// Asymmetric in its arguments: the reference partition comes first (V
/// counts pairs co-clustered in the reference). C is taken from the
/// obtained partition. Throws NumericError when E[RI] = 1 (undefined).
AriReport ari_fnc(const Partition& reference, const Partition& obtained);

}  // namespace shapescale
