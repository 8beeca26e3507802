#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace shapescale {

/// Rectangular real-valued data matrix with column metadata and an optional
/// reference partition. Missing cells are held as NaN until impute_mean
/// replaces them; all other operations require complete data.
///
/// Immutable by convention after construction: operations return new
/// Dataset values and never mutate their input, so a Dataset can be shared
/// freely across threads.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t n_rows, std::size_t n_cols, std::vector<double> values,
            std::vector<std::string> column_names,
            std::optional<std::vector<int>> reference_labels = std::nullopt,
            std::string provenance = {});

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }

    double operator()(std::size_t i, std::size_t k) const { return values_[i * n_cols_ + k]; }
    double& operator()(std::size_t i, std::size_t k) { return values_[i * n_cols_ + k]; }

    const std::vector<double>& values() const { return values_; }
    const double* row(std::size_t i) const { return values_.data() + i * n_cols_; }

    const std::vector<std::string>& column_names() const { return column_names_; }
    const std::optional<std::vector<int>>& reference_labels() const { return reference_labels_; }
    const std::vector<std::string>& reference_label_names() const { return reference_label_names_; }
    void set_reference_label_names(std::vector<std::string> names);

    const std::string& provenance() const { return provenance_; }
    void append_provenance(const std::string& note);

    bool has_missing() const;
    std::size_t missing_count() const;

    /// Number of reference clusters (0 when no labels are attached).
    std::size_t reference_cluster_count() const;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<double> values_;
    std::vector<std::string> column_names_;
    std::optional<std::vector<int>> reference_labels_;
    std::vector<std::string> reference_label_names_;
    std::string provenance_;
};

/// Per-dimension standard deviations (sample convention, divisor n-1),
/// computed over all rows including duplicates.
struct SigmaVector {
    std::vector<double> sigma;

    std::size_t size() const { return sigma.size(); }
    double operator[](std::size_t k) const { return sigma[k]; }
};

/// Indices of the first occurrence of each distinct row.
struct UniqueView {
    std::vector<std::size_t> indices;

    std::size_t n() const { return indices.size(); }
};

enum class ScalingKind { none, inv_sigma, alpha_over_sigma };

/// Column scaling rule applied before clustering. `alpha` is required
/// exactly when kind == alpha_over_sigma.
struct ScalingScheme {
    ScalingKind kind = ScalingKind::none;
    std::optional<std::vector<double>> alpha;

    static ScalingScheme none() { return {ScalingKind::none, std::nullopt}; }
    static ScalingScheme inv_sigma() { return {ScalingKind::inv_sigma, std::nullopt}; }
    static ScalingScheme alpha_over_sigma(std::vector<double> a) {
        return {ScalingKind::alpha_over_sigma, std::move(a)};
    }
};

/// Replace every missing cell by its column mean over present values.
/// Throws DataError when a column has no present value at all.
Dataset impute_mean(const Dataset& data);

/// First occurrence of each distinct row under exact value equality.
/// Throws DataError when fewer than two distinct rows remain.
UniqueView deduplicate(const Dataset& data);

/// Sample standard deviation of every column, over all rows.
/// Throws DataError when a column is constant.
SigmaVector column_sigmas(const Dataset& data);

/// Scale columns according to the scheme. Throws UsageError when the alpha
/// vector length does not match the column count.
Dataset apply_scaling(const Dataset& data, const SigmaVector& sigmas, const ScalingScheme& scheme);

}  // namespace shapescale
