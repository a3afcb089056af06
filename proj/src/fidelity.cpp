#include "gkp/fidelity.hpp"

#include <cmath>
#include <limits>

#include "gkp/errors.hpp"

namespace gkp {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct EnginePoint {
    double l1 = 0.0, l2 = 0.0;
    long n1 = 0, n2 = 0;
};

std::vector<EnginePoint> lattice_points(const RMat& s2, long d, long dmu, double rmax2) {
    Eigen::JacobiSVD<RMat> svd(s2);
    double smin = svd.singularValues().minCoeff();
    double umax = std::sqrt(rmax2 * d) / smin;
    long n1max = static_cast<long>(std::ceil((umax + std::abs(dmu)) / d)) + 1;
    long n2max = static_cast<long>(std::ceil(umax)) + 1;
    if ((2 * n1max + 1) * (2 * n2max + 1) > 4000000L) {
        throw LatticeSumBudgetExceeded("lattice window exceeds point budget");
    }
    std::vector<EnginePoint> pts;
    for (long n1 = -n1max; n1 <= n1max; ++n1) {
        for (long n2 = -n2max; n2 <= n2max; ++n2) {
            if (dmu == 0 && n1 == 0 && n2 == 0) continue;
            RVec u(2);
            u << static_cast<double>(d * n1 + dmu), static_cast<double>(n2);
            RVec lv = s2 * u / std::sqrt(static_cast<double>(d));
            if (lv.squaredNorm() <= rmax2) pts.push_back({lv[0], lv[1], n1, n2});
        }
    }
    return pts;
}

// e^{-z} times the angular Bessel kernel sum_{dl in Z} w_|dl| e^{i dl psi} I_|dl|(z)
// with w_dl = sqrt(t)^dl / (1 + sqrt(t)^dl)^2.
double kernel(double z, double psi, double t) {
    int dl_max = static_cast<int>(8.0 * std::sqrt(std::max(z, 1.0))) + 80;
    auto row = bessel_i_scaled_row(dl_max, z);
    double acc = 0.25 * row[0];
    double st = std::sqrt(t);
    double w_pow = 1.0;
    int dl = 1;
    for (; dl <= dl_max; ++dl) {
        w_pow *= st;
        double w = w_pow / ((1.0 + w_pow) * (1.0 + w_pow));
        double term = 2.0 * w * std::cos(dl * psi) * row[dl];
        acc += term;
        if (std::abs(term) < 1e-22 * std::max(std::abs(acc), 1e-30) && dl > 4) break;
    }
    if (dl > dl_max) {
        double envelope = 2.0 * w_pow * row[dl_max];
        if (envelope > 1e-10 * std::max(std::abs(acc), 1e-30)) {
            throw SeriesNonConvergent("Bessel kernel did not decay within its budget");
        }
    }
    return acc;
}

struct ChannelSums {
    double t = 0.0;   // thermal decay factor
    double zc = 0.0;  // kernel argument scale
};

ChannelSums channel_sums(const ChannelSpec& ch, double ndel) {
    ChannelSums cs;
    if (ch.kind == ChannelSpec::Kind::loss) {
        cs.t = ch.strength * ndel / (ch.strength * ndel + 1.0);
        cs.zc = 2.0 * kPi * (ndel + 1.0) * std::sqrt(cs.t);
    } else {
        double g = ch.strength - 1.0;
        cs.t = g * (ndel + 1.0) / (g * (ndel + 1.0) + 1.0);
        cs.zc = 2.0 * kPi * ndel * std::sqrt(cs.t);
    }
    return cs;
}

}  // namespace

FidelityReport near_optimal_infidelity(const QecMatrix& m) {
    Mat root = sqrt_psd(m.data, 1e-8);
    const long lsz = m.data.rows() / m.d_l;
    // Partial trace over the codeword index leaves a jump-indexed matrix.
    Mat b = Mat::Zero(lsz, lsz);
    for (long l = 0; l < lsz; ++l) {
        for (long k = 0; k < lsz; ++k) {
            cplx acc = 0.0;
            for (long mu = 0; mu < m.d_l; ++mu) acc += root(mu * lsz + l, mu * lsz + k);
            b(l, k) = acc;
        }
    }
    FidelityReport r;
    r.method = "exact_sqrt";
    double fid = b.squaredNorm() / static_cast<double>(m.d_l * m.d_l);
    r.infidelity = 1.0 - fid;
    r.diagnostics["fidelity"] = fid;
    return r;
}

FidelityReport perturbative_infidelity(const QecMatrix& m, const CorrectableSplit& split) {
    const long lsz = split.thermal_diag.size();
    const long dim = m.data.rows();
    if (dim != m.d_l * lsz) throw InvalidArgument("split does not match matrix layout");
    double dmax = split.thermal_diag.maxCoeff();
    if (!(dmax > 0.0)) throw DegenerateWeights("all correctable weights vanished");
    double acc = 0.0;
    long dropped = 0;
    double dropped_mass = 0.0;
    for (long i = 0; i < dim; ++i) {
        double di = split.thermal_diag[i % lsz];
        for (long j = 0; j < dim; ++j) {
            double dj = split.thermal_diag[j % lsz];
            if (di < 1e-300 && dj < 1e-300) {
                ++dropped;
                dropped_mass += std::norm(split.residual(i, j));
                continue;
            }
            double f = 1.0 / (std::sqrt(di) + std::sqrt(dj));
            acc += std::norm(f * split.residual(i, j));
        }
    }
    FidelityReport r;
    r.method = "perturbative";
    r.infidelity = acc / static_cast<double>(m.d_l);
    r.diagnostics["dropped_entries"] = static_cast<double>(dropped);
    r.diagnostics["dropped_residual_mass"] = dropped_mass;
    r.diagnostics["trace_d"] = split.trace_d;
    return r;
}

FidelityReport finite_energy_exact_infidelity(const GkpCode& code, const ChannelSpec& ch,
                                              bool shell_only) {
    if (code.lattice.modes != 1) {
        throw InvalidArgument("exact lattice-sum infidelity is single-mode only");
    }
    const long d = code.d_l;
    const RMat s2 = code.s_factor;
    const double ndel = code.n_delta();
    ChannelSums cs = channel_sums(ch, ndel);
    const double kcoef = kPi * (ndel + 0.5);
    const double rmax2 = 60.0 / kcoef + 2.0;

    std::vector<double> sn(d);
    for (long mu = 0; mu < d; ++mu) sn[mu] = codeword_norm_sum(d, mu, s2, ndel);

    double allmin = 0.0;
    if (shell_only) {
        allmin = std::numeric_limits<double>::infinity();
        for (long dmu = 0; dmu < d; ++dmu) {
            for (const auto& p : lattice_points(s2, d, dmu, rmax2)) {
                allmin = std::min(allmin, p.l1 * p.l1 + p.l2 * p.l2);
            }
        }
    }

    cplx eps = 0.0;
    for (long mu = 0; mu < d; ++mu) {
        for (long nu = 0; nu < d; ++nu) {
            auto pts = lattice_points(s2, d, mu - nu, rmax2);
            if (shell_only) {
                std::vector<EnginePoint> kept;
                for (const auto& p : pts) {
                    if (p.l1 * p.l1 + p.l2 * p.l2 <= allmin * (1.0 + 1e-9)) kept.push_back(p);
                }
                pts = std::move(kept);
            }
            std::vector<cplx> phases;
            std::vector<double> lamps, norms, thetas;
            for (const auto& p : pts) {
                phases.push_back(std::polar(
                    1.0, kPi * p.n2 * (p.n1 + (mu + nu) / static_cast<double>(d))));
                double l2 = p.l1 * p.l1 + p.l2 * p.l2;
                lamps.push_back(-kcoef * l2);
                norms.push_back(std::sqrt(l2));
                thetas.push_back(std::atan2(p.l2, p.l1));
            }
            if (mu == nu && !shell_only) {
                // The thermal-diagonal subtraction leaves the origin with the
                // codeword-normalization deficit 1 - S_mu.
                double w0 = 1.0 - sn[mu];
                phases.push_back(w0 >= 0.0 ? cplx(1.0) : cplx(-1.0));
                lamps.push_back(w0 != 0.0 ? std::log(std::abs(w0)) : -1e300);
                norms.push_back(0.0);
                thetas.push_back(0.0);
            }
            const size_t n = norms.size();
            for (size_t a = 0; a < n; ++a) {
                for (size_t b = 0; b < n; ++b) {
                    double z = cs.zc * norms[a] * norms[b];
                    double expo = lamps[a] + lamps[b] + z;
                    if (expo < -70.0) continue;
                    double k = kernel(z, thetas[a] - thetas[b], cs.t);
                    eps += phases[a] * std::conj(phases[b]) * std::exp(expo) * k /
                           (sn[mu] * sn[nu]);
                }
            }
        }
    }
    FidelityReport r;
    r.method = shell_only ? "leading" : "finite_exact";
    r.infidelity = eps.real() / static_cast<double>(d);
    r.truncation_bound = std::exp(-60.0) * d * d;
    r.diagnostics["imag_residual"] = std::abs(eps.imag()) / static_cast<double>(d);
    return r;
}

FidelityReport leading_order_infidelity(const GkpCode& code, const ChannelSpec& ch) {
    return finite_energy_exact_infidelity(code, ch, true);
}

FidelityReport leading_order_closed_form(const ShortestVectorReport& dual_sv,
                                         const ChannelSpec& ch, double n_delta) {
    if (!(n_delta > 0.0)) throw InvalidArgument("need n_delta > 0");
    double x2 = dual_sv.min_norm_sq;
    double m = static_cast<double>(dual_sv.kissing);
    ChannelSums cs = channel_sums(ch, n_delta);
    double z = cs.zc * x2;
    int dl_max = static_cast<int>(8.0 * std::sqrt(std::max(z, 1.0))) + 80;
    auto row = bessel_i_scaled_row(2 * dl_max, z);
    // 8 sum_{k>=0} t^k/(t^k+1)^2 I_{2k}(z) - I_0(z), evaluated with scaled
    // Bessels; the trailing -1 is the codeword-overlap term.
    double acc = 2.0 * row[0] - row[0];
    double tp = 1.0;
    for (int k = 1; k <= dl_max; ++k) {
        tp *= cs.t;
        double term = 8.0 * tp / ((1.0 + tp) * (1.0 + tp)) * row[2 * k];
        acc += term;
        if (term < 1e-16 * std::abs(acc) && k > 4) break;
    }
    double log_pref = std::log(0.5 * m) - 2.0 * kPi * (n_delta + 0.5) * x2;
    double value = std::exp(log_pref + z) * acc - std::exp(log_pref);
    FidelityReport r;
    r.method = "leading_closed";
    r.infidelity = value;
    r.diagnostics["z"] = z;
    r.diagnostics["shell_size"] = m;
    return r;
}

FidelityReport infinite_energy_bound(const Lattice& lat, const ChannelSpec& ch, double tol) {
    double k = ch.quality();
    ThetaResult theta = theta_sum(lat, Which::dual, kPi * k, tol);
    FidelityReport r;
    r.method = "inf_bound";
    r.infidelity = 0.25 * theta.value;
    r.truncation_bound = 0.25 * theta.truncation_bound;
    r.vacuous = r.infidelity >= 1.0;
    r.diagnostics["single_mode_equality"] = lat.modes == 1 ? 1.0 : 0.0;
    r.diagnostics["leading_shell_only"] = theta.leading_shell_only ? 1.0 : 0.0;
    return r;
}

FidelityReport selfdual_scaled_bound(long lambda, int modes, const ChannelSpec& ch) {
    if (lambda < 1 || modes < 1) throw InvalidArgument("need lambda >= 1, modes >= 1");
    double k = ch.quality();
    FidelityReport r;
    r.method = "selfdual_bound";
    r.infidelity = 0.25 * std::pow(static_cast<double>(lambda) / k, modes);
    r.vacuous = r.infidelity >= 1.0;
    r.diagnostics["quality"] = k;
    return r;
}

FidelityReport transpose_channel_infidelity(const std::vector<Vec>& raw_words,
                                            const ChannelSpec& ch, int l_jump) {
    if (raw_words.empty()) throw InvalidArgument("need at least one codeword");
    const long d = static_cast<long>(raw_words.size());
    const int dim = static_cast<int>(raw_words[0].size());
    Mat w(dim, d);
    for (long i = 0; i < d; ++i) {
        if (raw_words[i].size() != dim) throw InvalidArgument("codeword lengths differ");
        w.col(i) = raw_words[i];
    }
    // Loewdin orthonormalization of the raw span.
    Mat gram = w.adjoint() * w;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    if (es.eigenvalues().minCoeff() < 1e-12 * es.eigenvalues().maxCoeff()) {
        throw RankDeficientCodespace("raw codewords are numerically dependent");
    }
    Mat ginv_sqrt = es.eigenvectors() *
                    es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().adjoint();
    Mat v = w * ginv_sqrt;

    Mat p = v * v.adjoint();
    std::vector<RMat> ks;
    for (int l = 0; l <= l_jump; ++l) ks.push_back(kraus_matrix(ch, l, dim - 1));
    Mat np = Mat::Zero(dim, dim);
    for (const auto& k : ks) np += k * p * k.transpose();
    Mat np_is = pinv_sqrt(np, 1e-12);

    std::vector<Mat> a(ks.size());
    for (size_t i = 0; i < ks.size(); ++i) a[i] = ks[i] * v;
    double fid = 0.0;
    for (size_t i = 0; i < ks.size(); ++i) {
        Mat left = a[i].adjoint() * np_is;
        for (size_t j = 0; j < ks.size(); ++j) {
            cplx tr = (left * a[j]).trace();
            fid += std::norm(tr);
        }
    }
    fid /= static_cast<double>(d * d);
    FidelityReport r;
    r.method = "tc_numeric";
    r.infidelity = 1.0 - fid;
    r.diagnostics["fidelity"] = fid;
    return r;
}

}  // namespace gkp
