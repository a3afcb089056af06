#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkp/cli_core.hpp"
#include "gkp/errors.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int pick_strengths(const std::string& channel, const std::string& gamma_grid,
                   const std::string& gain_grid, gkp::cli::PerfConfig* perf,
                   gkp::cli::RatesConfig* rates) {
    bool loss = channel == "loss";
    const std::string& want = loss ? gamma_grid : gain_grid;
    const std::string& other = loss ? gain_grid : gamma_grid;
    if (want.empty()) {
        std::cerr << "need " << (loss ? "--gamma" : "--gain") << " for channel " << channel
                  << "\n";
        return gkp::cli::kExitUsage;
    }
    if (!other.empty()) {
        std::cerr << (loss ? "--gain" : "--gamma") << " does not apply to channel " << channel
                  << "\n";
        return gkp::cli::kExitUsage;
    }
    auto kind = loss ? gkp::ChannelSpec::Kind::loss : gkp::ChannelSpec::Kind::amp;
    auto grid = gkp::cli::parse_grid(want);
    if (perf) {
        perf->kind = kind;
        perf->strengths = grid;
    }
    if (rates) {
        rates->kind = kind;
        rates->strengths = grid;
    }
    return gkp::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GKP bosonic code performance toolkit"};
    app.require_subcommand(1);

    auto* lattice = app.add_subcommand("lattice", "Lattice geometry reports");
    lattice->require_subcommand(1);
    auto* info = lattice->add_subcommand("info", "Determinant, dual distance, kissing number");
    std::string info_name;
    bool info_json = false;
    info->add_option("name", info_name, "catalog name or generator .json file")->required();
    info->add_flag("--json", info_json, "emit a JSON object");

    std::string channel = "loss";
    std::string gamma_grid, gain_grid, methods_csv, out_path;
    std::string perf_lattice = "square", nbar_grid = "inf";
    long dl = 2;
    std::uint64_t seed = 0;

    auto* perf = app.add_subcommand("perf", "Infidelity sweeps (CSV)");
    perf->add_option("--channel", channel, "loss or amp")
        ->check(CLI::IsMember({"loss", "amp"}));
    perf->add_option("--gamma", gamma_grid, "loss strength grid value|start:stop:step");
    perf->add_option("--gain", gain_grid, "amplification gain grid");
    perf->add_option("--lattice", perf_lattice, "catalog name or generator .json file");
    perf->add_option("--dl", dl, "logical dimension for square/hexagonal families");
    perf->add_option("--nbar", nbar_grid, "envelope photon-number grid, or inf");
    perf->add_option("--methods", methods_csv,
                     "comma list: exact_sqrt,perturbative,leading,finite_exact,inf_bound,ad")
        ->required();
    perf->add_option("--out", out_path, "CSV path (default: stdout)");
    perf->add_option("--seed", seed, "reserved for sampling methods; sweeps are deterministic");

    std::string rates_methods =
        "capacity,multimode_floor,selfdual_constructive,hashing_hex,ad";
    std::string family = "square", rates_nbar = "inf";
    long family_dl = 1, lambda_max = 4096;
    double eps_ceiling = 1e-2;
    auto* rates = app.add_subcommand("rates", "Achievable-rate curves (CSV)");
    rates->add_option("--channel", channel, "loss or amp")
        ->check(CLI::IsMember({"loss", "amp"}));
    rates->add_option("--gamma", gamma_grid, "loss strength grid");
    rates->add_option("--gain", gain_grid, "amplification gain grid");
    rates->add_option("--methods", rates_methods,
                      "comma list: capacity,multimode_floor,selfdual_constructive,"
                      "hashing_hex,ad,scaled_family");
    rates->add_option("--family", family, "base lattice for scaled_family");
    rates->add_option("--dl", family_dl, "base logical dimension for scaled_family");
    rates->add_option("--nbar", rates_nbar, "envelope photon number for scaled_family, or inf");
    rates->add_option("--eps-ceiling", eps_ceiling, "feasibility ceiling for scaled_family");
    rates->add_option("--lambda-max", lambda_max, "largest scaling for scaled_family");
    rates->add_option("--out", out_path, "CSV path (default: stdout)");

    auto* verify = app.add_subcommand("verify", "Self-check suite (PASS/FAIL lines)");
    bool fast = false, defect = false;
    std::vector<std::string> tol_args;
    verify->add_flag("--fast", fast, "smaller cutoffs for quick runs");
    verify->add_option("--tol", tol_args,
                       "override a check tolerance, e.g. --tol qec=1e-2 "
                       "(keys: table,qec,tc,bessel,hardy,disp,theta)");
    verify->add_flag("--inject-thermal-defect", defect,
                     "negative-test fixture: corrupt the thermal factor in the QEC check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? gkp::cli::kExitOk : gkp::cli::kExitUsage;
    }

    try {
        if (info->parsed()) {
            return gkp::cli::run_lattice_info(info_name, info_json, std::cout, std::cerr);
        }
        if (perf->parsed()) {
            gkp::cli::PerfConfig cfg;
            int rc = pick_strengths(channel, gamma_grid, gain_grid, &cfg, nullptr);
            if (rc != gkp::cli::kExitOk) return rc;
            cfg.lattice = perf_lattice;
            cfg.dl = dl;
            cfg.nbars = gkp::cli::parse_grid(nbar_grid);
            cfg.methods = split_csv(methods_csv);
            cfg.out_path = out_path;
            return gkp::cli::run_perf(cfg, std::cout, std::cerr);
        }
        if (rates->parsed()) {
            gkp::cli::RatesConfig cfg;
            int rc = pick_strengths(channel, gamma_grid, gain_grid, nullptr, &cfg);
            if (rc != gkp::cli::kExitOk) return rc;
            cfg.methods = split_csv(rates_methods);
            cfg.family = family;
            cfg.family_dl = family_dl;
            auto nb = gkp::cli::parse_grid(rates_nbar);
            if (nb.size() != 1) {
                std::cerr << "--nbar for rates takes a single value\n";
                return gkp::cli::kExitUsage;
            }
            cfg.nbar = nb[0];
            cfg.eps_ceiling = eps_ceiling;
            cfg.lambda_max = lambda_max;
            cfg.out_path = out_path;
            return gkp::cli::run_rates(cfg, std::cout, std::cerr);
        }
        gkp::cli::VerifyConfig cfg;
        cfg.fast = fast;
        cfg.inject_thermal_defect = defect;
        for (const auto& kv : tol_args) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "--tol expects key=value, got: " << kv << "\n";
                return gkp::cli::kExitUsage;
            }
            try {
                cfg.tol[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                std::cerr << "--tol expects a numeric value, got: " << kv << "\n";
                return gkp::cli::kExitUsage;
            }
        }
        return gkp::cli::run_verify(cfg, std::cout);
    } catch (const gkp::InvalidArgument& e) {
        std::cerr << e.what() << "\n";
        return gkp::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return gkp::cli::kExitCompute;
    }
}
