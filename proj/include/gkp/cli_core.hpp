#pragma once

#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "gkp/fock.hpp"

namespace gkp::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitCompute = 4;

// Parses "value" or "start:stop:step" (endpoints inclusive within 1e-12).
// "inf" is accepted as a value. Throws InvalidArgument on malformed input.
std::vector<double> parse_grid(const std::string& text);

// Shortest round-trippable decimal with up to 17 significant digits.
std::string fmt_g17(double v);

struct PerfConfig {
    ChannelSpec::Kind kind = ChannelSpec::Kind::loss;
    std::vector<double> strengths;
    std::string lattice = "square";  // catalog name, or a .json generator file
    long dl = 2;
    std::vector<double> nbars;  // entries may be infinity
    std::vector<std::string> methods;
    std::string out_path;  // empty writes CSV to the provided stream
};

struct RatesConfig {
    ChannelSpec::Kind kind = ChannelSpec::Kind::loss;
    std::vector<double> strengths;
    std::vector<std::string> methods;
    std::string family = "square";  // base lattice for the scaled_family method
    long family_dl = 1;
    double nbar = std::numeric_limits<double>::infinity();
    double eps_ceiling = 1e-2;
    long lambda_max = 4096;
    std::string out_path;
};

struct VerifyConfig {
    bool fast = false;
    std::map<std::string, double> tol;  // keys: table, qec, tc, bessel, hardy, disp, theta
    bool inject_thermal_defect = false;  // negative-test fixture
};

int run_lattice_info(const std::string& name_or_file, bool json, std::ostream& out,
                     std::ostream& err);
int run_perf(const PerfConfig& cfg, std::ostream& out, std::ostream& err);
int run_rates(const RatesConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const VerifyConfig& cfg, std::ostream& out);

}  // namespace gkp::cli
