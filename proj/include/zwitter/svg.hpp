#pragma once

#include "zwitter/core.hpp"
#include "zwitter/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

// Minimal static SVG line plots for marginals, traces and scaling fits.

namespace zwitter::svg {

struct Series {
  std::string label;
  std::vector<Real> x;
  std::vector<Real> y;
};

void write_line_plot(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace zwitter::svg
