#pragma once

// Command execution behind the ginx binary: configuration record,
// orchestration of the numerical and Monte Carlo runs, output emission.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ginx/ensemble.hpp"
#include "ginx/fredholm.hpp"

namespace ginx {
namespace cli {

enum class Command { LimitLaw, Gap, Simulate, Figures, Selfcheck };

struct RunConfig {
    Command command = Command::Selfcheck;
    ensemble::Kind kind = ensemble::Kind::Real;
    long long n = 100;
    std::string n_list = "5:100:5";  // figures --which 2
    long long samples = 10000;
    std::uint64_t seed = 1;
    double t_min = -4.0;
    double t_max = 4.0;
    double step = 0.25;
    int nodes = 64;
    double L = 12.0;
    double L2 = 12.0;
    specialfn::GammaMode gamma_mode = specialfn::GammaMode::Implicit;
    std::string out = "ginx-out";
    std::string format = "csv";  // csv | json
    int workers = 2;
    bool full = false;
    int which = 0;  // figures selector; 0 = all
    std::vector<std::string> statistics = {"spectral-radius", "largest-real",
                                           "largest-complex"};
};

// Throws std::invalid_argument on invalid ranges/combinations.
void validate(const RunConfig& config);

std::vector<long long> parse_n_list(const std::string& spec);

// Exit status: 0 ok, 2 usage (bad parameter combination discovered during
// the run), 4 numerical-check failure, 5 I/O failure.
int execute(const RunConfig& config, std::ostream& log);

}  // namespace cli
}  // namespace ginx
