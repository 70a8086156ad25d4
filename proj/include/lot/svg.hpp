#pragma once

#include <array>
#include <string>
#include <vector>

namespace lot {

// Standalone SVG scatter plot: one marker element (class "pt") per point,
// circles for label +1 and squares otherwise, with axes and a legend.
std::string svg_scatter(const std::vector<std::array<double, 2>>& points, const std::vector<int>& labels,
                        const std::string& title = {});
void emit_svg_scatter(const std::vector<std::array<double, 2>>& points, const std::vector<int>& labels,
                      const std::string& path, const std::string& title = {});

}  // namespace lot
