#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "errors.hpp"

namespace missnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool is_nan_token(const std::string& field) {
    if (field.size() != 3) return false;
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    return lower(field[0]) == 'n' && lower(field[1]) == 'a' && lower(field[2]) == 'n';
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> default_feature_names(Eigen::Index n) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) names.push_back("f" + std::to_string(i));
    return names;
}

NamedSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty file '" + path + "'", 0);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> names;
    for (const auto& f : split_fields(line)) names.push_back(trim(f));
    const std::size_t n = names.size();
    if (n == 0 || (n == 1 && names[0].empty()))
        throw ParseError("missing header row", line_no);

    std::vector<std::vector<double>> rows;
    std::vector<std::vector<std::uint8_t>> row_masks;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != n)
            throw ParseError("expected " + std::to_string(n) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> values(n, 0.0);
        std::vector<std::uint8_t> mask(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string field = trim(fields[i]);
            if (field.empty() || is_nan_token(field)) {
                mask[i] = 0;
                values[i] = 0.0;
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == nullptr || *end != '\0')
                throw ParseError("invalid number '" + field + "' in column " +
                                     std::to_string(i + 1),
                                 line_no);
            values[i] = v;
        }
        rows.push_back(std::move(values));
        row_masks.push_back(std::move(mask));
    }
    if (rows.size() < 2) throw ParseError("need at least two data rows", line_no);

    const Eigen::Index N = static_cast<Eigen::Index>(n);
    const Eigen::Index T = static_cast<Eigen::Index>(rows.size());
    Matrix values(N, T);
    MaskMatrix mask(N, T);
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index i = 0; i < N; ++i) {
            values(i, t) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            mask(i, t) = row_masks[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
        }
    }
    return {PartialSeries(std::move(values), std::move(mask)), std::move(names)};
}

void write_series_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& names, const MaskMatrix* mask) {
    if (static_cast<Eigen::Index>(names.size()) != values.rows())
        throw std::invalid_argument("write_series_csv: name count mismatch");
    if (mask && (mask->rows() != values.rows() || mask->cols() != values.cols()))
        throw std::invalid_argument("write_series_csv: mask shape mismatch");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ',';
        out << names[i];
    }
    out << '\n';
    for (Eigen::Index t = 0; t < values.cols(); ++t) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            if (i) out << ',';
            if (mask && !(*mask)(i, t)) continue;
            out << format_double(values(i, t));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace missnet
