#include <doctest.h>

#include "velavg/config.hpp"
#include "velavg/error.hpp"

using namespace velavg;

namespace {

const char* kBase = R"(id = probe
example = burgers
ell = 2
seed = 7
ladder = 64 128

[symbol]
dim = 1
convection = power 2
interval = -1 1

[scheme]
scheme = engquist-osher
cfl = 0.4
final_time = 0.25
snapshots = 0.1 0.2

[data]
name = riemann
rho_left = 1
rho_right = -0.5

[estimator]
p = 1
method = increments
window = none

[prediction]
mode = fit
J = 1 2
)";

std::string with(const std::string& from, const std::string& to) {
    std::string s = kBase;
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("a full config parses") {
    const auto c = parse_config(kBase);
    CHECK(c.id == "probe");
    CHECK(c.example == "burgers");
    CHECK(c.params.ell == 2.0);
    CHECK(c.seed == 7);
    CHECK(c.data.seed == 7);
    CHECK(c.ladder == std::vector<std::size_t>{64, 128});
    CHECK(c.symbol.a(0) == VelocityFunction::power(2));
    CHECK(c.scheme.scheme == pde::Scheme::engquist_osher);
    CHECK(c.scheme.cfl == 0.4);
    CHECK(c.scheme.snapshot_times == std::vector<double>{0.1, 0.2});
    CHECK(c.data.rho_right == -0.5);
    CHECK(c.estimator.method == lp::Method::increments);
    CHECK(c.estimator.window.kind == lp::WindowKind::none);
    CHECK(c.prediction.mode == "fit");
    CHECK(c.prediction.J == std::vector<double>{1.0, 2.0});
    CHECK(c.problem == ProblemKind::evolution);
}

TEST_CASE("2D function lists") {
    const auto c = parse_config(with("dim = 1\nconvection = power 2",
                                     "dim = 2\nconvection = power 1 | power 2\ndiffusion = abs_power 2 | -abs_power 2 | "
                                     "-abs_power 2 | abs_power 2"));
    CHECK(c.symbol.dim() == 2);
    CHECK(c.symbol.b(0, 1) == VelocityFunction::abs_power(2).scaled(-1));
}

TEST_CASE("bad configs name the offending key") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(with("ladder = 64 128", "ladder = 64 96")).find("power of two") != std::string::npos);
    CHECK(message(with("ladder = 64 128", "ladder = 128 64")).find("increasing") != std::string::npos);
    CHECK(message(with("cfl = 0.4", "cfl = abc")).find("cfl") != std::string::npos);
    CHECK(message(with("id = probe\n", "")).find("id") != std::string::npos);
    CHECK_FALSE(message(with("scheme = engquist-osher", "scheme = upwind")).empty());
    CHECK_FALSE(message(with("[symbol]", "[sym]")).empty());
}

TEST_CASE("shipped configs load") {
    for (const char* name : {"burgers-1", "burgers-2", "twod-12", "sine-cubic", "porous-2", "convdiff-1-2",
                             "fully-degenerate-1-2", "elliptic"}) {
        CAPTURE(name);
        const auto c = load_config(std::filesystem::path(VELAVG_CONFIG_DIR) / (std::string(name) + ".ini"));
        CHECK(c.id == name);
    }
    const auto e = load_config(std::filesystem::path(VELAVG_CONFIG_DIR) / "elliptic.ini");
    CHECK(e.problem == ProblemKind::elliptic);
    CHECK(e.estimator.window.kind == lp::WindowKind::distance);
}
