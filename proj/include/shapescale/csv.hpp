#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shapescale/dataset.hpp"

namespace shapescale {

/// CSV parsing options. The label column may be named (header required) or
/// given as a 0-based index; missing feature cells match one of the listed
/// tokens (empty field and "?" by default).
struct CsvOptions {
    char delimiter = ',';
    bool has_header = true;
    std::optional<std::string> label_column;  // name, or decimal index
    std::vector<std::string> missing_tokens = {"", "?"};
};

/// Parse a rectangular CSV file into a Dataset. Ragged rows and
/// non-numeric feature cells raise DataError naming the offending row.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Same, from an already-open stream (used by tests).
Dataset load_csv(std::istream& in, const CsvOptions& options, const std::string& source_name);

/// Write the dataset back to CSV with 17-significant-digit reals, which
/// round-trips doubles exactly. The label column, when present, is written
/// last under the name "label" unless the dataset kept its original name.
void write_csv(const Dataset& data, const std::string& path, char delimiter = ',');
void write_csv(const Dataset& data, std::ostream& out, char delimiter = ',');

}  // namespace shapescale
