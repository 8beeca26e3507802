#include "shapescale/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "shapescale/errors.hpp"

namespace shapescale {

PcaResult pca_reduce(const Dataset& data, std::size_t m) {
    const std::size_t n = data.n_rows(), d = data.n_cols();
    if (m < 1 || m > d) {
        throw UsageError("pca target dimension " + std::to_string(m) + " out of range [1, " +
                         std::to_string(d) + "]");
    }
    if (data.has_missing()) {
        throw DataError("pca_reduce requires complete data; impute missing values first");
    }

    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) x(i, k) = data(i, k);

    // Centering only, no scaling.
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the covariance matrix failed");
    }

    // Eigen returns ascending eigenvalues; take the top m in descending order.
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Eigen::MatrixXd evecs = solver.eigenvectors();
    const double total = std::max(evals.sum(), 0.0);

    Eigen::MatrixXd components(d, m);
    double retained = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        const auto src = static_cast<Eigen::Index>(d - 1 - c);
        Eigen::VectorXd v = evecs.col(src);
        // Deterministic sign: largest-magnitude loading positive.
        Eigen::Index argmax = 0;
        v.cwiseAbs().maxCoeff(&argmax);
        if (v(argmax) < 0.0) v = -v;
        components.col(static_cast<Eigen::Index>(c)) = v;
        retained += std::max(evals(src), 0.0);
    }

    const Eigen::MatrixXd scores = x * components;

    std::vector<double> values(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < m; ++c) values[i * m + c] = scores(i, c);

    std::vector<std::string> names(m);
    for (std::size_t c = 0; c < m; ++c) names[c] = "pc" + std::to_string(c + 1);

    Dataset reduced(n, m, std::move(values), std::move(names), data.reference_labels(),
                    data.provenance());
    reduced.set_reference_label_names(data.reference_label_names());
    reduced.append_provenance("pca to " + std::to_string(m) + " of " + std::to_string(d) +
                              " dimensions (centering only)");

    const double fraction = total > 0.0 ? retained / total : 1.0;
    return {std::move(reduced), fraction};
}

}  // namespace shapescale
