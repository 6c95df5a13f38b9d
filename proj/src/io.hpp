#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

struct NamedSeries {
    PartialSeries series;
    std::vector<std::string> names;
};

// CSV layout: header row of feature names, one row per timestep. Empty cells
// and the token "NaN" (any case) mark missing values. Throws ParseError with a
// 1-based line number on malformed input.
NamedSeries read_series_csv(const std::string& path);

// Values are written with 17 significant digits; masked-out cells (when a mask
// is given) are written blank.
void write_series_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& names, const MaskMatrix* mask = nullptr);

std::string format_double(double v);

std::vector<std::string> default_feature_names(Eigen::Index n);

}  // namespace missnet
