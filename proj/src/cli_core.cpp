#include "gkp/cli_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gkp/decoders.hpp"
#include "gkp/errors.hpp"
#include "gkp/fidelity.hpp"
#include "gkp/rates.hpp"

namespace gkp::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::set<std::string> kPerfMethods = {"exact_sqrt", "perturbative", "leading",
                                            "finite_exact", "inf_bound", "ad"};
const std::set<std::string> kRateMethods = {"capacity",    "multimode_floor",
                                            "selfdual_constructive", "hashing_hex",
                                            "ad",          "scaled_family"};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool square_family(const Lattice& lat) {
    if (lat.modes != 1 || !lat.has_generator()) return false;
    RMat mtm = lat.generator.rows.transpose() * lat.generator.rows;
    double d0 = static_cast<double>(lat.det_abs);
    return (mtm - d0 * RMat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-9 * d0;
}

// Resolves a catalog name or a .json generator file. Returns the exit code to
// use on failure, kExitOk on success.
int resolve_lattice(const std::string& spec, long dl, Lattice& out, std::ostream& err) {
    if (ends_with(spec, ".json")) {
        std::ifstream in(spec);
        if (!in) {
            err << "cannot open lattice file: " << spec << "\n";
            return kExitIo;
        }
        try {
            nlohmann::json j = nlohmann::json::parse(in);
            out = lattice_from_json(j);
        } catch (const std::exception& e) {
            err << "invalid lattice file: " << e.what() << "\n";
            return kExitIo;
        }
        return kExitOk;
    }
    try {
        out = catalog_lattice(spec, dl);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int commit_output(const std::string& body, const std::string& out_path, std::ostream& out,
                  std::ostream& err) {
    if (out_path.empty()) {
        out << body;
        return kExitOk;
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
        err << "cannot open output file: " << out_path << "\n";
        return kExitIo;
    }
    f << body;
    if (!f) {
        err << "write failed: " << out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

ChannelSpec make_channel(ChannelSpec::Kind kind, double strength) {
    return kind == ChannelSpec::Kind::loss ? ChannelSpec::loss(strength)
                                           : ChannelSpec::amp(strength);
}

struct VerifyCheck {
    std::string name;
    double default_tol;
    // Runs the check; returns the worst observed deviation in units where the
    // tolerance applies, plus a short detail string.
    std::function<double(double tol, std::string& detail)> run;
};

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw InvalidArgument("empty grid");
    auto parse_one = [](const std::string& tok) {
        if (tok == "inf") return std::numeric_limits<double>::infinity();
        size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw InvalidArgument("malformed grid value: " + tok);
        }
        if (pos != tok.size()) throw InvalidArgument("malformed grid value: " + tok);
        return v;
    };
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() == 1) return {parse_one(parts[0])};
    if (parts.size() != 3) throw InvalidArgument("grid must be value or start:stop:step");
    double start = parse_one(parts[0]);
    double stop = parse_one(parts[1]);
    double step = parse_one(parts[2]);
    if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step))) {
        throw InvalidArgument("grid endpoints and step must be finite");
    }
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    if (stop < start) throw InvalidArgument("grid stop must be >= start");
    std::vector<double> grid;
    double slack = 1e-12 * std::max(1.0, std::abs(stop));
    for (long i = 0;; ++i) {
        double v = start + step * static_cast<double>(i);
        if (v > stop + slack) break;
        grid.push_back(std::min(v, stop));
    }
    return grid;
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int run_lattice_info(const std::string& name_or_file, bool json, std::ostream& out,
                     std::ostream& err) {
    Lattice lat;
    int rc = resolve_lattice(name_or_file, 1, lat, err);
    if (rc != kExitOk) return rc;
    ShortestVectorReport sv;
    try {
        sv = shortest_vectors(lat, Which::dual);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitCompute;
    }
    long det_gram = lat.det_abs * lat.det_abs;
    bool enumerable = lat.has_generator();
    if (json) {
        nlohmann::json j;
        j["name"] = lat.name;
        j["N"] = lat.modes;
        j["det"] = det_gram;
        j["d_L"] = lat.det_abs;
        j["dual_min_norm_sq"] = sv.min_norm_sq;
        j["kissing"] = sv.kissing;
        j["enumerable"] = enumerable;
        out << j.dump() << "\n";
    } else {
        out << "name: " << lat.name << "\n"
            << "N: " << lat.modes << "\n"
            << "det: " << det_gram << "\n"
            << "d_L: " << lat.det_abs << "\n"
            << "dual_min_norm_sq: " << fmt_g17(sv.min_norm_sq) << "\n"
            << "kissing: " << sv.kissing << "\n"
            << "enumerable: " << (enumerable ? "true" : "false") << "\n";
    }
    return kExitOk;
}

int run_perf(const PerfConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.strengths.empty() || cfg.nbars.empty() || cfg.methods.empty()) {
        err << "strength grid, nbar grid, and methods must be nonempty\n";
        return kExitUsage;
    }
    for (const auto& m : cfg.methods) {
        if (!kPerfMethods.count(m)) {
            err << "unknown perf method: " << m << "\n";
            return kExitUsage;
        }
    }
    for (double s : cfg.strengths) {
        try {
            make_channel(cfg.kind, s);
        } catch (const Error& e) {
            err << "strength " << fmt_g17(s) << ": " << e.what() << "\n";
            return kExitUsage;
        }
    }
    Lattice lat;
    int rc = resolve_lattice(cfg.lattice, cfg.dl, lat, err);
    if (rc != kExitOk) return rc;

    auto has = [&](const char* m) {
        return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };
    bool finite_method = has("exact_sqrt") || has("perturbative") || has("leading") ||
                         has("finite_exact");
    for (double nb : cfg.nbars) {
        if (!std::isfinite(nb) && finite_method) {
            err << "finite-energy methods require finite nbar\n";
            return kExitUsage;
        }
        if (std::isfinite(nb) && !(nb > 0.0)) {
            err << "nbar must be positive\n";
            return kExitUsage;
        }
    }
    if (has("ad")) {
        if (cfg.kind != ChannelSpec::Kind::loss) {
            err << "method ad requires a loss channel\n";
            return kExitUsage;
        }
        if (!square_family(lat)) {
            err << "method ad requires a square-family lattice\n";
            return kExitUsage;
        }
    }

    const std::string chname = cfg.kind == ChannelSpec::Kind::loss ? "loss" : "amp";
    const long d_l = logical_dimension(lat);
    const std::string nan = fmt_g17(std::numeric_limits<double>::quiet_NaN());
    std::ostringstream csv;
    csv << "channel,strength,lattice,d_L,nbar,method,infidelity,diag_tail,diag_trD\n";
    try {
        for (double s : cfg.strengths) {
            ChannelSpec ch = make_channel(cfg.kind, s);
            for (double nb : cfg.nbars) {
                GkpCode code;
                bool have_code = false;
                if (std::isfinite(nb)) {
                    code = GkpCode::from_nbar(lat, nb);
                    have_code = true;
                }
                QecMatrix m;
                CorrectableSplit split;
                bool have_m = false, have_split = false;
                if (have_code && (has("exact_sqrt") || has("perturbative"))) {
                    m = analytic_qec_matrix(code, ch);
                    have_m = true;
                    if (has("perturbative")) {
                        split = split_correctable(m, ch, code);
                        have_split = true;
                    }
                }
                for (const auto& method : cfg.methods) {
                    double infid, tail = std::numeric_limits<double>::quiet_NaN();
                    double trd = std::numeric_limits<double>::quiet_NaN();
                    if (method == "exact_sqrt") {
                        infid = near_optimal_infidelity(m).infidelity;
                        tail = m.tail_bound;
                    } else if (method == "perturbative") {
                        infid = perturbative_infidelity(m, split).infidelity;
                        tail = m.tail_bound;
                        trd = split.trace_d;
                    } else if (method == "leading") {
                        FidelityReport r = leading_order_infidelity(code, ch);
                        infid = r.infidelity;
                        tail = r.truncation_bound;
                    } else if (method == "finite_exact") {
                        FidelityReport r = finite_energy_exact_infidelity(code, ch);
                        infid = r.infidelity;
                        tail = r.truncation_bound;
                    } else if (method == "inf_bound") {
                        FidelityReport r = infinite_energy_bound(lat, ch);
                        infid = r.infidelity;
                        tail = r.truncation_bound;
                    } else {  // ad
                        infid = ad_baseline(lat, ch).infidelity;
                    }
                    csv << chname << ',' << fmt_g17(s) << ',' << lat.name << ',' << d_l << ','
                        << (std::isfinite(nb) ? fmt_g17(nb) : "inf") << ',' << method << ','
                        << fmt_g17(infid) << ',' << fmt_g17(tail) << ',' << fmt_g17(trd)
                        << '\n';
                }
                (void)have_m;
                (void)have_split;
            }
        }
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return kExitCompute;
    }
    return commit_output(csv.str(), cfg.out_path, out, err);
}

int run_rates(const RatesConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.strengths.empty() || cfg.methods.empty()) {
        err << "strength grid and methods must be nonempty\n";
        return kExitUsage;
    }
    for (const auto& m : cfg.methods) {
        if (!kRateMethods.count(m)) {
            err << "unknown rates method: " << m << "\n";
            return kExitUsage;
        }
    }
    for (double s : cfg.strengths) {
        try {
            make_channel(cfg.kind, s);
        } catch (const Error& e) {
            err << "strength " << fmt_g17(s) << ": " << e.what() << "\n";
            return kExitUsage;
        }
    }
    auto has = [&](const char* m) {
        return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };
    if (has("ad") && cfg.kind != ChannelSpec::Kind::loss) {
        err << "method ad requires a loss channel\n";
        return kExitUsage;
    }
    Lattice base;
    if (has("scaled_family")) {
        int rc = resolve_lattice(cfg.family, cfg.family_dl, base, err);
        if (rc != kExitOk) return rc;
        if (!base.has_generator()) {
            err << "scaled_family needs an enumerable base lattice\n";
            return kExitUsage;
        }
    }
    Lattice square1 = catalog_lattice("square", 1);

    std::ostringstream csv;
    csv << "channel,strength,method,N,rate_bits_per_mode,lambda_star\n";
    const std::string chname = cfg.kind == ChannelSpec::Kind::loss ? "loss" : "amp";
    try {
        for (double s : cfg.strengths) {
            ChannelSpec ch = make_channel(cfg.kind, s);
            for (const auto& method : cfg.methods) {
                double rate;
                long lambda_star = 0;
                int n_modes = 1;
                if (method == "capacity") {
                    rate = capacity(ch);
                } else if (method == "multimode_floor") {
                    rate = multimode_rate(ch);
                    double kf = std::floor(ch.quality() + 1e-9);
                    lambda_star = kf >= 1.0 ? static_cast<long>(kf) : 0;
                } else if (method == "selfdual_constructive") {
                    SelfdualRate r = selfdual_asymptotic_rate(ch);
                    rate = r.constructive_bits;
                    lambda_star = r.k_floor;
                } else if (method == "hashing_hex") {
                    RatePoint r = hashing_hex_rate(ch);
                    rate = r.rate_bits_per_mode;
                    lambda_star = r.d_l;
                } else if (method == "ad") {
                    SupRatePoint r = ad_baseline(square1, ch);
                    rate = r.rate_bits;
                    lambda_star = r.best_d;
                } else {  // scaled_family
                    RatePoint r = scaled_family_rate(base, ch, cfg.nbar, cfg.eps_ceiling,
                                                     cfg.lambda_max);
                    rate = r.rate_bits_per_mode;
                    lambda_star = r.lambda;
                    n_modes = base.modes;
                }
                csv << chname << ',' << fmt_g17(s) << ',' << method << ',' << n_modes << ','
                    << fmt_g17(rate) << ',' << lambda_star << '\n';
            }
        }
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return kExitCompute;
    }
    return commit_output(csv.str(), cfg.out_path, out, err);
}

int run_verify(const VerifyConfig& cfg, std::ostream& out) {
    std::vector<VerifyCheck> checks;

    checks.push_back({"lattice_table", 1e-9, [&](double tol, std::string& detail) {
        struct Row {
            const char* name;
            double min_sq;
            long kissing;
            long det;
        };
        const Row rows[] = {{"square", 1.0, 4, 1},
                            {"hexagonal", 2.0 / std::sqrt(3.0), 6, 1},
                            {"tesseract", 1.0 / std::sqrt(2.0), 8, 4},
                            {"d4", std::sqrt(2.0), 24, 1},
                            {"e8", 2.0, 240, 1}};
        double worst = 0.0;
        for (const Row& row : rows) {
            Lattice lat = catalog_lattice(row.name, 1);
            ShortestVectorReport sv = shortest_vectors(lat, Which::dual);
            worst = std::max(worst, std::abs(sv.min_norm_sq - row.min_sq) / row.min_sq);
            if (sv.kissing != row.kissing || lat.det_abs * lat.det_abs != row.det) {
                worst = std::max(worst, 1.0);
            }
        }
        detail = "max_rel=" + fmt_g17(worst);
        (void)tol;
        return worst;
    }});

    checks.push_back({"qec_oracle", 1e-4, [&](double tol, std::string& detail) {
        struct Case {
            const char* lattice;
            long d;
            ChannelSpec ch;
            double nbar;
            int cutoff;
        };
        // The Fock cutoff must grow with nbar for the oracle codewords to
        // converge; entries below 1e-9 of the matrix scale sit in the
        // truncation floor and are compared against that floor instead.
        std::vector<Case> cases;
        if (cfg.fast) {
            cases.push_back({"square", 2, ChannelSpec::loss(0.1), 2.0, 70});
        } else {
            cases.push_back({"square", 2, ChannelSpec::loss(0.1), 2.0, 80});
            cases.push_back({"square", 2, ChannelSpec::loss(0.2), 2.0, 80});
            cases.push_back({"square", 2, ChannelSpec::loss(0.1), 5.0, 160});
            cases.push_back({"square", 2, ChannelSpec::loss(0.2), 5.0, 160});
            cases.push_back({"square", 2, ChannelSpec::amp(1.2), 2.0, 120});
            cases.push_back({"hexagonal", 2, ChannelSpec::loss(0.1), 2.0, 80});
            cases.push_back({"hexagonal", 3, ChannelSpec::amp(1.2), 2.0, 120});
        }
        const int lj = cfg.fast ? 18 : 25;
        double worst = 0.0;
        for (const Case& cs : cases) {
            Lattice lat = catalog_lattice(cs.lattice, cs.d);
            GkpCode code = GkpCode::from_nbar(lat, cs.nbar);
            QecMatrix an = analytic_qec_matrix(code, cs.ch, lj);
            QecMatrix orc = oracle_qec_matrix(code, cs.ch, cs.cutoff, lj, 1e-2);
            if (cfg.inject_thermal_defect) {
                // Fixture: corrupt the thermal decay factor sqrt(t)^{l+k}.
                const long lsz = lj + 1;
                for (long r = 0; r < an.data.rows(); ++r) {
                    for (long c = 0; c < an.data.cols(); ++c) {
                        double lk = static_cast<double>(r % lsz + c % lsz);
                        an.data(r, c) *= std::pow(1.01, 0.5 * lk);
                    }
                }
            }
            const double floor = 1e-9 * orc.data.cwiseAbs().maxCoeff();
            for (long r = 0; r < an.data.rows(); ++r) {
                for (long c = 0; c < an.data.cols(); ++c) {
                    double ref = std::max(std::abs(orc.data(r, c)), floor);
                    worst = std::max(worst, std::abs(an.data(r, c) - orc.data(r, c)) / ref);
                }
            }
        }
        detail = "max_rel=" + fmt_g17(worst);
        (void)tol;
        return worst;
    }});

    checks.push_back({"tc_identity", 1e-6, [&](double tol, std::string& detail) {
        const int cutoff = cfg.fast ? 140 : 200;
        const int lj = cfg.fast ? 20 : 25;
        Lattice lat = catalog_lattice("square", 2);
        GkpCode code = GkpCode::from_nbar(lat, 5.0);
        ChannelSpec ch = ChannelSpec::loss(0.1);
        std::vector<Vec> words;
        for (long mu = 0; mu < 2; ++mu) {
            words.push_back(gkp_codeword_fock(2, mu, code.delta, cutoff, -1, 1e-2).amplitudes);
        }
        double tc = transpose_channel_infidelity(words, ch, lj).infidelity;
        double no = near_optimal_infidelity(oracle_qec_matrix(code, ch, cutoff, lj, 1e-2))
                        .infidelity;
        double diff = std::abs(tc - no);
        detail = "abs_diff=" + fmt_g17(diff);
        (void)tol;
        return diff;
    }});

    checks.push_back({"bessel_sum", 5e-3, [&](double tol, std::string& detail) {
        double v = bessel_sum_partial(1e4, 1.0, 2000);
        double dev = std::abs(v - 0.5);
        detail = "value=" + fmt_g17(v);
        (void)tol;
        return dev;
    }});

    checks.push_back({"hardy_hill", 1e-6, [&](double tol, std::string& detail) {
        double series = laguerre_bilinear_series(2.0, 1.5, 0.7, 0.8, 2000);
        double closed = laguerre_bilinear_closed_form(2.0, 1.5, 0.7, 0.8);
        double rel = std::abs(series - closed) / std::abs(closed);
        detail = "rel=" + fmt_g17(rel);
        (void)tol;
        return rel;
    }});

    checks.push_back({"displacement_unitary", 1e-10, [&](double tol, std::string& detail) {
        const int cutoff = cfg.fast ? 90 : 120;
        const int probe = 40;
        cplx alpha(0.7, -0.2);
        Mat d(cutoff + 1, cutoff + 1);
        for (int l = 0; l <= cutoff; ++l) {
            for (int k = 0; k <= cutoff; ++k) d(l, k) = displacement_element(l, k, alpha);
        }
        Mat g = d.adjoint() * d;
        double worst = (g.topLeftCorner(probe, probe) - Mat::Identity(probe, probe))
                           .cwiseAbs()
                           .maxCoeff();
        detail = "max_dev=" + fmt_g17(worst);
        (void)tol;
        return worst;
    }});

    checks.push_back({"theta_consistency", 1e-10, [&](double tol, std::string& detail) {
        Lattice lat = catalog_lattice("square", 1);
        double c = kPi * 9.0;
        double via_sum = theta_sum(lat, Which::dual, c, 1e-12).value;
        double direct = 0.0;
        for (int a = -6; a <= 6; ++a) {
            for (int b = -6; b <= 6; ++b) {
                if (a == 0 && b == 0) continue;
                direct += std::exp(-c * (a * a + b * b));
            }
        }
        double rel = std::abs(via_sum - direct) / direct;
        detail = "rel=" + fmt_g17(rel);
        (void)tol;
        return rel;
    }});

    int failures = 0;
    for (const auto& check : checks) {
        double tol = check.default_tol;
        auto it = cfg.tol.find(check.name == "qec_oracle"      ? "qec"
                               : check.name == "tc_identity"   ? "tc"
                               : check.name == "bessel_sum"    ? "bessel"
                               : check.name == "hardy_hill"    ? "hardy"
                               : check.name == "displacement_unitary" ? "disp"
                               : check.name == "theta_consistency"    ? "theta"
                                                                      : "table");
        if (it != cfg.tol.end()) tol = it->second;
        std::string detail;
        double dev;
        try {
            dev = check.run(tol, detail);
        } catch (const std::exception& e) {
            out << "FAIL " << check.name << " exception: " << e.what() << "\n";
            ++failures;
            continue;
        }
        bool ok = dev <= tol;
        out << (ok ? "PASS " : "FAIL ") << check.name << " " << detail
            << " (tol " << fmt_g17(tol) << ")\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? kExitOk : kExitVerifyFail;
}

}  // namespace gkp::cli
