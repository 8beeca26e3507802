#include "shapescale/dataset.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"

namespace shapescale {

Dataset::Dataset(std::size_t n_rows, std::size_t n_cols, std::vector<double> values,
                 std::vector<std::string> column_names,
                 std::optional<std::vector<int>> reference_labels, std::string provenance)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      values_(std::move(values)),
      column_names_(std::move(column_names)),
      reference_labels_(std::move(reference_labels)),
      provenance_(std::move(provenance)) {
    if (n_rows_ < 2 || n_cols_ < 2) {
        throw DataError("dataset needs at least 2 rows and 2 feature columns, got " +
                        std::to_string(n_rows_) + "x" + std::to_string(n_cols_));
    }
    if (values_.size() != n_rows_ * n_cols_) {
        throw DataError("dataset value buffer does not match its dimensions");
    }
    if (column_names_.size() != n_cols_) {
        throw DataError("dataset has " + std::to_string(column_names_.size()) + " column names for " +
                        std::to_string(n_cols_) + " columns");
    }
    if (reference_labels_ && reference_labels_->size() != n_rows_) {
        throw DataError("reference label vector length " + std::to_string(reference_labels_->size()) +
                        " does not match row count " + std::to_string(n_rows_));
    }
    for (double v : values_) {
        if (std::isinf(v)) throw DataError("dataset contains non-finite values");
    }
}

void Dataset::set_reference_label_names(std::vector<std::string> names) {
    reference_label_names_ = std::move(names);
}

void Dataset::append_provenance(const std::string& note) {
    if (!provenance_.empty()) provenance_ += "; ";
    provenance_ += note;
}

bool Dataset::has_missing() const { return missing_count() > 0; }

std::size_t Dataset::missing_count() const {
    std::size_t count = 0;
    for (double v : values_)
        if (std::isnan(v)) ++count;
    return count;
}

std::size_t Dataset::reference_cluster_count() const {
    if (!reference_labels_) return 0;
    int max_id = -1;
    for (int l : *reference_labels_) max_id = std::max(max_id, l);
    return static_cast<std::size_t>(max_id + 1);
}

Dataset impute_mean(const Dataset& data) {
    const std::size_t n = data.n_rows(), d = data.n_cols();
    std::vector<double> values(data.values());

    for (std::size_t k = 0; k < d; ++k) {
        CompensatedSum sum;
        std::size_t present = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data(i, k);
            if (!std::isnan(v)) {
                sum.add(v);
                ++present;
            }
        }
        if (present == 0) {
            throw DataError("column '" + data.column_names()[k] + "' has no present values to impute from");
        }
        if (present == n) continue;
        const double mean = sum.value() / static_cast<double>(present);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isnan(values[i * d + k])) values[i * d + k] = mean;
        }
    }

    Dataset out(n, d, std::move(values), data.column_names(), data.reference_labels(),
                data.provenance());
    out.set_reference_label_names(data.reference_label_names());
    if (data.has_missing()) {
        out.append_provenance("missing values replaced by column means (" +
                              std::to_string(data.missing_count()) + " cells)");
    }
    return out;
}

UniqueView deduplicate(const Dataset& data) {
    if (data.has_missing()) {
        throw DataError("deduplicate requires complete data; impute missing values first");
    }
    const std::size_t n = data.n_rows(), d = data.n_cols();
    // Exact value equality: duplicate counts in the benchmarks are exact,
    // so no epsilon is involved.
    std::map<std::vector<double>, std::size_t> seen;
    UniqueView view;
    view.indices.reserve(n);
    std::vector<double> key(d);
    for (std::size_t i = 0; i < n; ++i) {
        key.assign(data.row(i), data.row(i) + d);
        if (seen.emplace(key, i).second) view.indices.push_back(i);
    }
    if (view.indices.size() <= 1) {
        throw DataError("all rows are identical; shape complexity is undefined for a single point");
    }
    return view;
}

SigmaVector column_sigmas(const Dataset& data) {
    if (data.has_missing()) {
        throw DataError("column_sigmas requires complete data; impute missing values first");
    }
    const std::size_t n = data.n_rows(), d = data.n_cols();
    SigmaVector out;
    out.sigma.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        CompensatedSum sum;
        for (std::size_t i = 0; i < n; ++i) sum.add(data(i, k));
        const double mean = sum.value() / static_cast<double>(n);
        CompensatedSum ss;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = data(i, k) - mean;
            ss.add(c * c);
        }
        const double var = ss.value() / static_cast<double>(n - 1);
        if (!(var > 0.0)) {
            throw DataError("column '" + data.column_names()[k] +
                            "' is constant (sigma = 0); drop it or supply varying data");
        }
        out.sigma[k] = std::sqrt(var);
    }
    return out;
}

Dataset apply_scaling(const Dataset& data, const SigmaVector& sigmas, const ScalingScheme& scheme) {
    const std::size_t n = data.n_rows(), d = data.n_cols();
    if (scheme.kind != ScalingKind::none && sigmas.size() != d) {
        throw UsageError("sigma vector length " + std::to_string(sigmas.size()) +
                         " does not match column count " + std::to_string(d));
    }
    if (scheme.kind == ScalingKind::alpha_over_sigma) {
        if (!scheme.alpha) throw UsageError("alpha_over_sigma scheme requires an alpha vector");
        if (scheme.alpha->size() != d) {
            throw UsageError("alpha vector length " + std::to_string(scheme.alpha->size()) +
                             " does not match column count " + std::to_string(d));
        }
    } else if (scheme.alpha) {
        throw UsageError("alpha vector given for a scheme that does not use one");
    }

    if (scheme.kind == ScalingKind::none) return data;

    std::vector<double> factor(d);
    for (std::size_t k = 0; k < d; ++k) {
        factor[k] = scheme.kind == ScalingKind::inv_sigma ? 1.0 / sigmas[k]
                                                          : (*scheme.alpha)[k] / sigmas[k];
    }
    std::vector<double> values(data.values());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) values[i * d + k] *= factor[k];

    Dataset out(n, d, std::move(values), data.column_names(), data.reference_labels(),
                data.provenance());
    out.set_reference_label_names(data.reference_label_names());
    return out;
}

}  // namespace shapescale
