#pragma once

#include <string>
#include <vector>

#include "csv.hpp"

namespace lab {

// Static 800x500 line plot. Depends only on the rows, so the plot can be
// rebuilt from a saved CSV.
std::string render_svg(const std::vector<ResultRow>& rows);

}  // namespace lab
