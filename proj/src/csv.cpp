#include "shapescale/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "shapescale/errors.hpp"
#include "shapescale/numeric.hpp"

namespace shapescale {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delimiter) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    const std::string t = trim(token);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_index(const std::string& token, std::size_t& out) {
    const std::string t = trim(token);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && ptr == t.data() + t.size();
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_csv(in, options, path);
}

Dataset load_csv(std::istream& in, const CsvOptions& options, const std::string& source_name) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_number = 0;
    std::vector<std::string> header;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty() && header.empty()) continue;  // leading blank lines
        if (line.empty()) continue;
        auto fields = split(line, options.delimiter);
        if (options.has_header && header.empty()) {
            header = fields;
            width = header.size();
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width) {
            throw DataError(source_name + ":" + std::to_string(line_number) + ": row has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(width));
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw DataError(source_name + ": no data rows");

    if (!options.has_header) {
        header.resize(width);
        for (std::size_t k = 0; k < width; ++k) header[k] = "col" + std::to_string(k);
    } else {
        for (auto& h : header) h = trim(h);
    }

    // Resolve the label column: by name first, then as a 0-based index.
    std::optional<std::size_t> label_index;
    if (options.label_column) {
        const std::string want = trim(*options.label_column);
        auto it = std::find(header.begin(), header.end(), want);
        if (it != header.end()) {
            label_index = static_cast<std::size_t>(it - header.begin());
        } else {
            std::size_t idx = 0;
            if (parse_index(want, idx) && idx < width) {
                label_index = idx;
            } else {
                throw DataError(source_name + ": label column '" + want + "' not found");
            }
        }
    }

    const std::size_t d = width - (label_index ? 1 : 0);
    if (rows.size() < 2 || d < 2) {
        throw DataError(source_name + ": need at least 2 rows and 2 feature columns, got " +
                        std::to_string(rows.size()) + "x" + std::to_string(d));
    }

    std::vector<std::string> names;
    names.reserve(d);
    for (std::size_t k = 0; k < width; ++k) {
        if (label_index && k == *label_index) continue;
        names.push_back(header[k]);
    }

    auto is_missing = [&](const std::string& token) {
        const std::string t = trim(token);
        for (const auto& m : options.missing_tokens)
            if (t == m) return true;
        return false;
    };

    std::vector<double> values;
    values.reserve(rows.size() * d);
    std::vector<int> labels;
    std::vector<std::string> label_names;
    if (label_index) labels.reserve(rows.size());

    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < width; ++k) {
            const std::string& token = rows[r][k];
            if (label_index && k == *label_index) {
                const std::string name = trim(token);
                auto it = std::find(label_names.begin(), label_names.end(), name);
                if (it == label_names.end()) {
                    labels.push_back(static_cast<int>(label_names.size()));
                    label_names.push_back(name);
                } else {
                    labels.push_back(static_cast<int>(it - label_names.begin()));
                }
                continue;
            }
            double v = 0.0;
            if (is_missing(token)) {
                v = std::numeric_limits<double>::quiet_NaN();
            } else if (!parse_double(token, v)) {
                throw DataError(source_name + ": data row " + std::to_string(r + 1) + ", column '" +
                                names[col] + "': cannot parse '" + trim(token) + "' as a number");
            }
            values.push_back(v);
            ++col;
        }
    }

    Dataset data(rows.size(), d, std::move(values), std::move(names),
                 label_index ? std::optional<std::vector<int>>(std::move(labels)) : std::nullopt,
                 "loaded from " + source_name);
    if (label_index) data.set_reference_label_names(std::move(label_names));
    return data;
}

void write_csv(const Dataset& data, const std::string& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_csv(data, out, delimiter);
}

void write_csv(const Dataset& data, std::ostream& out, char delimiter) {
    const std::size_t n = data.n_rows(), d = data.n_cols();
    const bool labeled = data.reference_labels().has_value();
    for (std::size_t k = 0; k < d; ++k) {
        if (k) out << delimiter;
        out << data.column_names()[k];
    }
    if (labeled) out << delimiter << "label";
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            if (k) out << delimiter;
            out << format_real(data(i, k));
        }
        if (labeled) {
            const int l = (*data.reference_labels())[i];
            out << delimiter;
            if (static_cast<std::size_t>(l) < data.reference_label_names().size()) {
                out << data.reference_label_names()[l];
            } else {
                out << l;
            }
        }
        out << '\n';
    }
}

}  // namespace shapescale
