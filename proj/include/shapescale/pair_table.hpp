#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "shapescale/dataset.hpp"

namespace shapescale {

/// Per-pair, per-dimension squared normalized differences
/// rho2[p][k] = ((X_ik - X_jk) / sigma_k)^2 over the unique samples, in
/// fixed lexicographic pair order (i, j), i < j.
///
/// Two storage modes with identical results: `dense` materializes the
/// n(n-1)/2 x d table up front (the multi-start solver touches every pair
/// thousands of times), `lazy` recomputes rows on the fly for data too
/// large for the memory budget. Both evaluate the same expression in the
/// same order, so every downstream sum is bit-identical.
///
/// Immutable after construction; safe to share across threads.
class PairTable {
public:
    static constexpr std::size_t kDefaultBudgetBytes = std::size_t{1} << 31;  // 2 GiB

    /// Materialized table. Throws DataError when the table would exceed
    /// `budget_bytes` (advising the lazy mode), or when two listed rows
    /// coincide (the view bypassed deduplication).
    static PairTable dense(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas,
                           std::size_t budget_bytes = kDefaultBudgetBytes);

    /// On-the-fly mode: stores only the unique rows and sigmas.
    static PairTable lazy(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas);

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    std::size_t pair_count() const { return n_ * (n_ - 1) / 2; }

    /// Row count of the underlying dataset (duplicates included); the
    /// normalization constant of the stationarity residual is
    /// N = n_orig (n_orig - 1).
    std::size_t n_orig() const { return n_orig_; }
    double pair_normalizer() const { return static_cast<double>(n_orig_) * (n_orig_ - 1.0); }

    /// True when the view covered every row of the dataset, in which case
    /// sum_{i<j} rho2 = N holds per dimension and the closed form
    /// g^2 = N sum_k alpha_k^2 is available as a cross-check.
    bool covers_all_rows() const { return n_ == n_orig_; }

    bool is_dense() const { return !rho_sq_.empty(); }

    /// Alpha-independent column sums A_k = sum_{i<j} rho2[p][k].
    const std::vector<double>& column_pair_sums() const { return column_pair_sums_; }

    /// Visit every pair in fixed order: f(pair_index, row_pointer) where
    /// row_pointer addresses d contiguous rho^2 values. The lazy mode
    /// writes into an internal scratch row, so the pointer is only valid
    /// during the call.
    template <class F>
    void for_each_pair(F&& f) const {
        const std::size_t d = d_;
        if (is_dense()) {
            const double* p = rho_sq_.data();
            const std::size_t m = pair_count();
            for (std::size_t t = 0; t < m; ++t, p += d) f(t, p);
        } else {
            std::vector<double> scratch(d);
            std::size_t t = 0;
            for (std::size_t i = 0; i + 1 < n_; ++i) {
                const double* ri = rows_.data() + i * d;
                for (std::size_t j = i + 1; j < n_; ++j, ++t) {
                    const double* rj = rows_.data() + j * d;
                    for (std::size_t k = 0; k < d; ++k) {
                        const double rho = (ri[k] - rj[k]) / sigma_[k];
                        scratch[k] = rho * rho;
                    }
                    f(t, scratch.data());
                }
            }
        }
    }

private:
    PairTable() = default;
    void init(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas, bool materialize,
              std::size_t budget_bytes);

    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::size_t n_orig_ = 0;
    std::vector<double> rho_sq_;            // dense mode: pair-major, pair_count x d
    std::vector<double> rows_;              // lazy mode: unique rows, n x d
    std::vector<double> sigma_;             // lazy mode
    std::vector<double> column_pair_sums_;  // A_k, both modes
};

}  // namespace shapescale
