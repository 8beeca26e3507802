#pragma once

#include <cstddef>

#include "shapescale/dataset.hpp"

namespace shapescale {

struct PcaResult {
    Dataset reduced;
    double variance_retained;  // top-m eigenvalue mass / total variance
};

/// Project onto the top-m principal components of the column-centered data
/// (centering only, no scaling). The sign of each component is fixed by
/// making its largest-magnitude loading positive. Throws UsageError when
/// m is out of range, DataError on incomplete data.
PcaResult pca_reduce(const Dataset& data, std::size_t m);

}  // namespace shapescale
