#include "velavg/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "velavg/error.hpp"

namespace velavg {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

GridLayout::GridLayout(int d, std::size_t n_, double L_) : dim(d), n(n_), L(L_) {
    if (d != 1 && d != 2) throw InputError(fmt::format("grid dimension must be 1 or 2, got {}", d));
    if (!is_power_of_two(n_) || n_ < 2) throw InputError(fmt::format("grid size must be a power of two, got {}", n_));
    if (!(L_ > 0.0) || !std::isfinite(L_)) throw InputError("box length must be positive");
}

ScalarField::ScalarField(GridLayout g, std::string label_)
    : layout(g), values(g.size(), 0.0), label(std::move(label_)) {}

ScalarField::ScalarField(GridLayout g, std::vector<double> vals, std::string label_)
    : layout(g), values(std::move(vals)), label(std::move(label_)) {
    if (values.size() != layout.size())
        throw InputError(fmt::format("field has {} values, layout needs {}", values.size(), layout.size()));
    for (double x : values)
        if (!std::isfinite(x)) throw InputError("field values must be finite");
}

double ScalarField::integral() const {
    double s = 0.0;
    for (double x : values) s += x;
    return s * layout.cell_volume();
}

double ScalarField::lp_norm(double p) const {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : values) m = std::max(m, std::fabs(x));
        return m;
    }
    double s = 0.0;
    if (p == 1.0) {
        for (double x : values) s += std::fabs(x);
        return s * layout.cell_volume();
    }
    if (p == 2.0) {
        for (double x : values) s += x * x;
        return std::sqrt(s * layout.cell_volume());
    }
    for (double x : values) s += std::pow(std::fabs(x), p);
    return std::pow(s * layout.cell_volume(), 1.0 / p);
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

XVField::XVField(GridLayout g, VelocityGrid vg) : layout(g), vgrid(vg), values(g.size() * vg.m, 0.0) {
    if (vg.m == 0 || !(vg.hi > vg.lo)) throw InputError("velocity grid must be non-empty with lo < hi");
}

double XVField::lp_norm(double p) const {
    double s = 0.0;
    for (double x : values) s += std::pow(std::fabs(x), p);
    return std::pow(s * layout.cell_volume() * vgrid.dv(), 1.0 / p);
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto out = fmt::output_file(path.string());
    out.print("# d={}\n# N={}\n# L={:.17g}\n# label={}\n", f.layout.dim, f.layout.n, f.layout.L, f.label);
    for (double x : f.values) out.print("{:.17g}\n", x);
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open field file '{}'", path.string()));
    int d = 0;
    std::size_t n = 0;
    double L = 0.0;
    std::string label;
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
            const std::string val = line.substr(eq + 1);
            try {
                if (key == "d") d = std::stoi(val);
                else if (key == "N") n = std::stoul(val);
                else if (key == "L") L = std::stod(val);
                else if (key == "label") label = val;
            } catch (const std::exception&) {
                throw InputError(fmt::format("field file '{}': bad header line '{}'", path.string(), line));
            }
            continue;
        }
        try {
            vals.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw InputError(fmt::format("field file '{}': bad value '{}'", path.string(), line));
        }
    }
    return ScalarField(GridLayout(d, n, L), std::move(vals), label);
}

}  // namespace velavg
