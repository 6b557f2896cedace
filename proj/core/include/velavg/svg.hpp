#pragma once
/// @file svg.hpp
/// @brief Minimal SVG line plots for experiment artifacts.

#include <filesystem>
#include <string>
#include <vector>

namespace velavg::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool line = true;
    bool markers = false;
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
};

/// Non-finite points are skipped. Output depends only on the input.
std::string render(const Plot& plot, int width = 640, int height = 420);
void write(const std::filesystem::path& path, const Plot& plot);

}  // namespace velavg::svg
