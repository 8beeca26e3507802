#include "shapescale/pair_table.hpp"

#include <cmath>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"

namespace shapescale {

void PairTable::init(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas,
                     bool materialize, std::size_t budget_bytes) {
    n_ = view.n();
    d_ = data.n_cols();
    n_orig_ = data.n_rows();
    if (n_ < 2) throw DataError("pair table needs at least 2 unique samples");
    if (sigmas.size() != d_) {
        throw UsageError("sigma vector length does not match the dataset's column count");
    }
    for (std::size_t k = 0; k < d_; ++k) {
        if (!(sigmas[k] > 0.0)) throw DataError("sigma must be strictly positive in every dimension");
    }
    for (std::size_t idx : view.indices) {
        if (idx >= n_orig_) throw UsageError("unique view indexes a row outside the dataset");
    }

    rows_.resize(n_ * d_);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* src = data.row(view.indices[i]);
        for (std::size_t k = 0; k < d_; ++k) rows_[i * d_ + k] = src[k];
    }
    sigma_ = sigmas.sigma;

    if (materialize) {
        const std::size_t bytes = pair_count() * d_ * sizeof(double);
        if (bytes > budget_bytes) {
            throw DataError("pair table of " + std::to_string(bytes) +
                            " bytes exceeds the memory budget of " + std::to_string(budget_bytes) +
                            " bytes; use the on-the-fly (lazy) mode instead");
        }
        rho_sq_.resize(pair_count() * d_);
        std::size_t t = 0;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            const double* ri = rows_.data() + i * d_;
            for (std::size_t j = i + 1; j < n_; ++j, ++t) {
                const double* rj = rows_.data() + j * d_;
                double* out = rho_sq_.data() + t * d_;
                for (std::size_t k = 0; k < d_; ++k) {
                    const double rho = (ri[k] - rj[k]) / sigma_[k];
                    out[k] = rho * rho;
                }
            }
        }
    }

    // One validation sweep: finite entries, and no pair may vanish in every
    // dimension (that would be a duplicate the view failed to discard).
    std::vector<CompensatedSum> sums(d_);
    bool coincident = false;
    std::size_t bad_pair = 0;
    for_each_pair([&](std::size_t t, const double* rho2) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < d_; ++k) {
            sums[k].add(rho2[k]);
            row_sum += rho2[k];
        }
        if (!coincident && !(row_sum > 0.0)) {
            coincident = true;
            bad_pair = t;
        }
    });
    if (coincident) {
        throw DataError("pair " + std::to_string(bad_pair) +
                        " joins two identical samples; deduplicate the data first");
    }
    column_pair_sums_.resize(d_);
    for (std::size_t k = 0; k < d_; ++k) {
        const double s = column_pair_sums_[k] = sums[k].value();
        if (!std::isfinite(s)) throw DataError("pair table contains non-finite differences");
    }

    if (materialize) {
        rows_.clear();
        rows_.shrink_to_fit();
        sigma_.clear();
        sigma_.shrink_to_fit();
    }
}

PairTable PairTable::dense(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas,
                           std::size_t budget_bytes) {
    PairTable table;
    table.init(view, data, sigmas, true, budget_bytes);
    return table;
}

PairTable PairTable::lazy(const UniqueView& view, const Dataset& data, const SigmaVector& sigmas) {
    PairTable table;
    table.init(view, data, sigmas, false, 0);
    return table;
}

}  // namespace shapescale
