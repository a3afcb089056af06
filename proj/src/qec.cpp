#include "gkp/qec.hpp"

#include <cmath>
#include <json.hpp>

#include "gkp/errors.hpp"

namespace gkp {

namespace {

constexpr double kPi = 3.14159265358979323846;

long product_of(const std::vector<long>& v) {
    long p = 1;
    for (long x : v) p *= x;
    return p;
}

long int_pow(long base, int exp) {
    long p = 1;
    for (int i = 0; i < exp; ++i) p *= base;
    return p;
}

// Smallest singular value of the 2x2 map u -> s2 u / sqrt(d).
double min_scale(const RMat& s2, long d) {
    Eigen::JacobiSVD<RMat> svd(s2);
    return svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(d));
}

void require_block_diagonal(const RMat& s, int modes, const char* what) {
    for (int i = 0; i < 2 * modes; ++i) {
        for (int j = 0; j < 2 * modes; ++j) {
            if (i / 2 != j / 2 && std::abs(s(i, j)) > 1e-12) {
                throw InvalidArgument(std::string(what) +
                                      " requires a product lattice (block-diagonal "
                                      "symplectic factor)");
            }
        }
    }
}

// Full Fock matrix of D(alpha) up to nmax, filled one diagonal at a time so
// each generalized Laguerre recurrence is shared along its diagonal.
Mat displacement_matrix(cplx alpha, int nmax) {
    Mat d = Mat::Zero(nmax + 1, nmax + 1);
    double r = std::abs(alpha);
    if (r == 0.0) {
        d.setIdentity();
        return d;
    }
    double x = r * r;
    double theta = std::arg(alpha);
    for (int dn = 0; dn <= nmax; ++dn) {
        double lm1 = 0.0, lag = 1.0;  // L_0^{dn}(x)
        cplx lower_ph = std::polar(1.0, dn * theta);
        cplx upper_ph = std::polar(1.0, -dn * theta) * ((dn % 2) ? -1.0 : 1.0);
        for (int k = 0; k + dn <= nmax; ++k) {
            if (k > 0) {
                double next = ((2.0 * (k - 1) + 1.0 + dn - x) * lag - (k - 1.0 + dn) * lm1) / k;
                lm1 = lag;
                lag = next;
            }
            double log_mag = -0.5 * x + dn * std::log(r) +
                             0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + dn + 1.0));
            double mag = std::exp(log_mag) * lag;
            d(k + dn, k) = mag * lower_ph;
            if (dn > 0) d(k, k + dn) = mag * upper_ph;
        }
    }
    return d;
}

Mat single_mode_analytic(long d, const RMat& s2, const ThermalParams& tp, double ndel,
                         int l_jump, bool transpose_displacement, double term_tol,
                         double* tail_out) {
    const int lp1 = l_jump + 1;
    const double cut = std::log(1.0 / term_tol) + 10.0;
    std::vector<double> norms(d);
    for (long mu = 0; mu < d; ++mu) norms[mu] = codeword_norm_sum(d, mu, s2, ndel);

    double smin = min_scale(s2, d);
    double umax = std::sqrt(cut / tp.gwt) / smin;
    long n1m = static_cast<long>((umax + d) / d) + 1;
    long n2m = static_cast<long>(umax) + 1;

    Mat m = Mat::Zero(d * lp1, d * lp1);
    double sqt = std::sqrt(tp.t);
    double skipped = 0.0;
    RVec tpow(2 * l_jump + 1);
    for (int p = 0; p <= 2 * l_jump; ++p) tpow[p] = std::pow(sqt, p);

    for (long mu = 0; mu < d; ++mu) {
        for (long nu = 0; nu < d; ++nu) {
            Mat acc = Mat::Zero(lp1, lp1);
            for (long n1 = -n1m; n1 <= n1m; ++n1) {
                for (long n2 = -n2m; n2 <= n2m; ++n2) {
                    RVec u(2);
                    u << static_cast<double>(d * n1 + mu - nu), static_cast<double>(n2);
                    RVec lv = s2 * u / std::sqrt(static_cast<double>(d));
                    double lsq = lv.squaredNorm();
                    double expo = tp.gwt * lsq;
                    if (expo > cut) {
                        skipped += std::exp(-std::min(expo, 700.0));
                        continue;
                    }
                    double gauss = std::exp(-expo);
                    cplx phase = std::polar(1.0, kPi * n2 * (n1 + (mu + nu) / static_cast<double>(d)));
                    cplx beta = tp.c * std::sqrt(kPi) * cplx(lv[0], -lv[1]);
                    Mat dm = displacement_matrix(beta, l_jump);
                    if (transpose_displacement) {
                        acc += (phase * gauss) * dm.transpose();
                    } else {
                        acc += (phase * gauss) * dm;
                    }
                }
            }
            double nf = tp.pref0 / std::sqrt(norms[mu] * norms[nu]);
            for (int l = 0; l < lp1; ++l) {
                for (int k = 0; k < lp1; ++k) {
                    m(mu * lp1 + l, nu * lp1 + k) = acc(l, k) * tpow[l + k] * nf;
                }
            }
        }
    }
    if (tail_out) *tail_out = tp.pref0 * skipped;
    Mat h = 0.5 * (m + m.adjoint());
    return h;
}

// Per-mode lower-triangular lattice basis v1 = (a, 0), v2 = (b, c) with
// a c = d after sign normalisation.
struct ModeBasis {
    double a = 0.0, b = 0.0, c = 0.0;
    long d = 1;
};

ModeBasis mode_basis(const Lattice& lat, int k, long d) {
    const RMat& g = lat.generator.rows;
    for (int i = 0; i < 2 * lat.modes; ++i) {
        for (int j = 0; j < 2 * lat.modes; ++j) {
            if (i / 2 != j / 2 && std::abs(g(i, j)) > 1e-12) {
                throw InvalidArgument("Fock-basis oracle requires a product lattice");
            }
        }
    }
    if (std::abs(g(2 * k, 2 * k + 1)) > 1e-12) {
        throw InvalidArgument("oracle requires per-mode lower-triangular generator blocks");
    }
    ModeBasis mb;
    mb.a = g(2 * k, 2 * k);
    mb.b = g(2 * k + 1, 2 * k);
    mb.c = g(2 * k + 1, 2 * k + 1);
    mb.d = d;
    if (mb.a < 0.0) {
        mb.a = -mb.a;  // flipping v1 leaves the lattice unchanged
    }
    if (mb.c < 0.0) {
        mb.b = -mb.b;  // flipping v2 leaves the lattice unchanged
        mb.c = -mb.c;
    }
    if (std::abs(mb.a * mb.c - static_cast<double>(d)) > 1e-9 * d) {
        throw InvalidArgument("per-mode basis determinant does not match the logical dimension");
    }
    return mb;
}

// Ideal codeword as a position comb, solved from the logical eigenvalue
// relation T(v2 / d) |mu> = omega^mu |mu> together with invariance under the
// stabilizer shift T(v1).  For b = 0 the logical shift is a pure momentum
// kick, so the peaks sit at x = a n + mu / c with unit weights.  For b != 0
// the peaks tile x = (b / d)(m + off) and the recursion fixes the weights to
// omega^{-mu m} exp(i pi (b c / d^2)(m^2 + 2 off m)); off = 1/2 exactly when
// (a / b) d is odd, which restores T(v1) periodicity of the weights.  The
// global factor exp(i pi (a / b) mu^2 / d) aligns the per-codeword phase with
// the symplectically transported square-lattice basis.
Vec comb_codeword_fock(const ModeBasis& mb, long mu, double delta, int cutoff, long nwin,
                       double tail_tol, double* tail_out) {
    const double a = mb.a, b = mb.b, c = mb.c;
    const long d = mb.d;
    Vec vec = Vec::Zero(cutoff + 1);
    double qlim = std::sqrt(2.0 * cutoff + 1.0) + 20.0;
    auto add_peak = [&](double x, cplx cf) {
        double q = std::sqrt(2.0 * kPi) * x;
        if (std::abs(q) > qlim) return;
        auto psi = hermite_psi(q, cutoff);
        for (int n = 0; n <= cutoff; ++n) vec[n] += cf * psi[n];
    };
    if (std::abs(b) < 1e-12) {
        for (long n = -nwin; n <= nwin; ++n) {
            add_peak(a * n + mu / c, 1.0);
        }
    } else {
        double ab = a / b;
        long ab_int = std::llround(ab);
        if (std::abs(ab - ab_int) > 1e-12) {
            throw InvalidArgument("comb grid does not close: a/b is not an integer");
        }
        double off = (ab_int * d) % 2 != 0 ? 0.5 : 0.0;
        double shear = b * c / static_cast<double>(d * d);
        long mwin = nwin * std::labs(ab_int) * d;
        double gauge = kPi * ab_int * mu * mu / static_cast<double>(d);
        for (long m = -mwin; m <= mwin; ++m) {
            double md = static_cast<double>(m);
            double arg = gauge + kPi * (shear * (md * md + 2.0 * off * md) -
                                        2.0 * static_cast<double>(mu) * md / static_cast<double>(d));
            add_peak((b / d) * (md + off), std::polar(1.0, arg));
        }
    }
    for (int n = 0; n <= cutoff; ++n) vec[n] *= std::exp(-delta * delta * n);
    double nrm2 = vec.squaredNorm();
    if (!(nrm2 > 0.0)) throw WindowTooSmall("comb window produced a zero state");
    vec /= std::sqrt(nrm2);
    double tail = 0.0;
    for (int n = std::max(0, cutoff - 9); n <= cutoff; ++n) tail += std::norm(vec[n]);
    if (tail > tail_tol) {
        throw CutoffTooSmall("top Fock levels of the comb codeword carry mass " +
                             std::to_string(tail));
    }
    if (tail_out) *tail_out = tail;
    return vec;
}

Mat single_mode_oracle(const ModeBasis& mb, const ChannelSpec& ch, double delta, int cutoff,
                       int l_jump, double tail_tol, double* tail_out) {
    const long d = mb.d;
    const int lp1 = l_jump + 1;
    double worst_tail = 0.0;
    std::vector<Vec> words(d);
    for (long mu = 0; mu < d; ++mu) {
        double t = 0.0;
        words[mu] = comb_codeword_fock(mb, mu, delta, cutoff, 80, tail_tol, &t);
        worst_tail = std::max(worst_tail, t);
    }
    Mat cols(cutoff + 1, d * lp1);
    for (long mu = 0; mu < d; ++mu) {
        for (int l = 0; l < lp1; ++l) {
            RMat k = kraus_matrix(ch, l, cutoff);
            cols.col(mu * lp1 + l) = k * words[mu];
        }
    }
    if (tail_out) *tail_out = worst_tail;
    return cols.adjoint() * cols;
}

// Composite matrix over modes: entry = product of per-mode entries with mu and
// jump labels both row-major over modes.
QecMatrix assemble_composite(const std::vector<Mat>& mats, const std::vector<long>& dims,
                             int l_jump, double tail_bound) {
    const int modes = static_cast<int>(dims.size());
    const int lp1 = l_jump + 1;
    const long d_l = product_of(dims);
    const long lsz = int_pow(lp1, modes);
    const long dim = d_l * lsz;

    auto decode = [&](long flat, std::vector<long>& mu_k, std::vector<long>& l_k) {
        long mu = flat / lsz, l = flat % lsz;
        for (int k = modes - 1; k >= 0; --k) {
            mu_k[k] = mu % dims[k];
            mu /= dims[k];
            l_k[k] = l % lp1;
            l /= lp1;
        }
    };

    QecMatrix out;
    out.data = Mat::Zero(dim, dim);
    out.d_l = d_l;
    out.l_jump = l_jump;
    out.modes = modes;
    out.mode_dims = dims;
    out.tail_bound = tail_bound;
    std::vector<long> amu(modes), al(modes), bmu(modes), bl(modes);
    for (long i = 0; i < dim; ++i) {
        decode(i, amu, al);
        for (long j = 0; j < dim; ++j) {
            decode(j, bmu, bl);
            cplx v = 1.0;
            for (int k = 0; k < modes; ++k) {
                v *= mats[k](amu[k] * lp1 + al[k], bmu[k] * lp1 + bl[k]);
            }
            out.data(i, j) = v;
        }
    }
    return out;
}

}  // namespace

double GkpCode::n_delta() const { return envelope_mean_photon(delta); }

GkpCode GkpCode::from_delta(const Lattice& lat, double delta) {
    GkpCode code;
    code.lattice = lat;
    code.delta = delta;
    code.mode_dims = canonical_mode_dims(lat);
    code.d_l = lat.det_abs;
    code.s_factor = symplectic_factor(lat);
    return code;
}

GkpCode GkpCode::from_nbar(const Lattice& lat, double nbar) {
    return from_delta(lat, delta_from_mean_photon(nbar));
}

ThermalParams thermal_params(const ChannelSpec& ch, double ndel) {
    ThermalParams tp;
    if (ch.kind == ChannelSpec::Kind::loss) {
        double gamma = ch.strength;
        tp.t = gamma * ndel / (gamma * ndel + 1.0);
        tp.c = std::sqrt((ndel + 1.0) / (gamma * ndel + 1.0));
        tp.pref0 = 1.0 / (gamma * ndel + 1.0);
        tp.gwt = 0.5 * kPi * (1.0 - gamma) * ndel / (gamma * ndel + 1.0);
    } else {
        double g = ch.strength - 1.0;
        double mdel = ndel + 1.0;
        tp.t = g * mdel / (g * mdel + 1.0);
        tp.c = std::sqrt(ndel / (g * mdel + 1.0));
        tp.pref0 = 1.0 / (g * mdel + 1.0);
        tp.gwt = 0.5 * kPi * ((2.0 * ndel + 1.0 + g * mdel) / (g * mdel + 1.0) - tp.c * tp.c);
    }
    return tp;
}

double codeword_norm_sum(long d, long mu, const RMat& s2, double ndel) {
    double kcoef = kPi * (ndel + 0.5);
    double smin = min_scale(s2, d);
    double umax = std::sqrt(50.0 / kcoef) / smin;
    long n1m = static_cast<long>(umax / d) + 1;
    long n2m = static_cast<long>(umax) + 1;
    double s = 0.0;
    for (long n1 = -n1m; n1 <= n1m; ++n1) {
        for (long n2 = -n2m; n2 <= n2m; ++n2) {
            RVec u(2);
            u << static_cast<double>(d * n1), static_cast<double>(n2);
            RVec lv = s2 * u / std::sqrt(static_cast<double>(d));
            s += std::cos(kPi * n2 * (n1 + 2.0 * mu / static_cast<double>(d))) *
                 std::exp(-kcoef * lv.squaredNorm());
        }
    }
    return s;
}

int default_jump_cutoff(const GkpCode& code, const ChannelSpec& ch) {
    double nd = code.n_delta();
    double s_eff = (ch.kind == ChannelSpec::Kind::loss) ? ch.strength * nd
                                                        : (ch.strength - 1.0) * (nd + 1.0);
    return static_cast<int>(std::ceil(10.0 * s_eff)) + 15;
}

QecMatrix analytic_qec_matrix(const GkpCode& code, const ChannelSpec& ch, int l_jump,
                              double term_tol) {
    if (l_jump < 0) l_jump = default_jump_cutoff(code, ch);
    require_block_diagonal(code.s_factor, code.lattice.modes, "analytic QEC matrix");
    double ndel = code.n_delta();
    ThermalParams tp = thermal_params(ch, ndel);
    bool amp = (ch.kind == ChannelSpec::Kind::amp);
    std::vector<Mat> mats;
    double tail = 0.0;
    for (int k = 0; k < code.lattice.modes; ++k) {
        RMat s2 = code.s_factor.block(2 * k, 2 * k, 2, 2);
        double tk = 0.0;
        mats.push_back(single_mode_analytic(code.mode_dims[k], s2, tp, ndel, l_jump, amp,
                                            term_tol, &tk));
        tail += tk;
    }
    return assemble_composite(mats, code.mode_dims, l_jump, tail);
}

QecMatrix oracle_qec_matrix(const GkpCode& code, const ChannelSpec& ch, int cutoff,
                            int l_jump, double tail_tol) {
    if (cutoff < 1 || l_jump < 0) throw InvalidArgument("oracle needs cutoff >= 1, l_jump >= 0");
    std::vector<Mat> mats;
    double tail = 0.0;
    for (int k = 0; k < code.lattice.modes; ++k) {
        ModeBasis mb = mode_basis(code.lattice, k, code.mode_dims[k]);
        double tk = 0.0;
        mats.push_back(single_mode_oracle(mb, ch, code.delta, cutoff, l_jump, tail_tol, &tk));
        tail = std::max(tail, tk);
    }
    return assemble_composite(mats, code.mode_dims, l_jump, tail);
}

cplx displaced_overlap(const GkpCode& code, long mu, long nu, const Vec& alpha,
                       double term_tol) {
    if (alpha.size() != code.lattice.modes) {
        throw InvalidArgument("need one displacement amplitude per mode");
    }
    require_block_diagonal(code.s_factor, code.lattice.modes, "displaced overlap");
    double td = std::tanh(0.5 * code.delta * code.delta);
    double cut = std::log(1.0 / term_tol) + 10.0;
    cplx value = 1.0;
    std::vector<long> mus(code.lattice.modes), nus(code.lattice.modes);
    long m = mu, n = nu;
    for (int k = code.lattice.modes - 1; k >= 0; --k) {
        mus[k] = m % code.mode_dims[k];
        m /= code.mode_dims[k];
        nus[k] = n % code.mode_dims[k];
        n /= code.mode_dims[k];
    }
    if (m != 0 || n != 0) throw InvalidArgument("logical label out of range");
    for (int k = 0; k < code.lattice.modes; ++k) {
        long d = code.mode_dims[k];
        RMat s2 = code.s_factor.block(2 * k, 2 * k, 2, 2);
        cplx a = alpha[k];
        double smin = min_scale(s2, d);
        double lmax = (std::abs(a) + std::sqrt(4.0 * td * cut)) / std::sqrt(kPi);
        long umax = static_cast<long>(lmax / smin) + 1;
        long n1m = umax / d + 1, n2m = umax + 1;
        cplx acc = 0.0;
        for (long n1 = -n1m; n1 <= n1m; ++n1) {
            for (long n2 = -n2m; n2 <= n2m; ++n2) {
                RVec u(2);
                u << static_cast<double>(d * n1 + mus[k] - nus[k]), static_cast<double>(n2);
                RVec lv = s2 * u / std::sqrt(static_cast<double>(d));
                cplx x = std::sqrt(kPi) * cplx(lv[0], lv[1]);
                double e1 = std::norm(x - a) / (4.0 * td);
                double e2 = 0.25 * td * std::norm(x + a);
                if (e1 + e2 > cut + 40.0) continue;
                cplx phase =
                    std::polar(1.0, kPi * n2 * (n1 + (mus[k] + nus[k]) / static_cast<double>(d)));
                acc += phase * std::exp(-e1 - e2);
            }
        }
        value *= acc;
    }
    return value;
}

CorrectableSplit split_correctable(const QecMatrix& m, const ChannelSpec& ch,
                                   const GkpCode& code) {
    ThermalParams tp = thermal_params(ch, code.n_delta());
    const int lp1 = m.l_jump + 1;
    const long lsz = int_pow(lp1, m.modes);
    RVec diag(lsz);
    for (long l = 0; l < lsz; ++l) {
        long rest = l;
        double v = 1.0;
        for (int k = 0; k < m.modes; ++k) {
            long lk = rest % lp1;
            rest /= lp1;
            v *= (1.0 - tp.t) * std::pow(tp.t, static_cast<double>(lk));
        }
        diag[l] = v;
    }
    CorrectableSplit cs;
    cs.thermal_diag = diag;
    cs.residual = m.data;
    for (long mu = 0; mu < m.d_l; ++mu) {
        for (long l = 0; l < lsz; ++l) {
            cs.residual(mu * lsz + l, mu * lsz + l) -= diag[l];
        }
    }
    double per_mode = 1.0 - std::pow(tp.t, static_cast<double>(lp1));
    cs.trace_d = std::pow(per_mode, m.modes);
    cs.trace_deficit = 1.0 - cs.trace_d;
    return cs;
}

std::string qec_matrix_json(const QecMatrix& m) {
    nlohmann::json j;
    j["dims"] = {{"d_l", m.d_l},
                 {"l_jump", m.l_jump},
                 {"modes", m.modes},
                 {"mode_dims", m.mode_dims}};
    j["index_map"] = "flat = mu * (l_jump+1)^modes + l; mu and l row-major over modes";
    j["tail_bound"] = m.tail_bound;
    std::vector<std::vector<double>> re, im;
    for (Eigen::Index i = 0; i < m.data.rows(); ++i) {
        std::vector<double> r, c;
        for (Eigen::Index k = 0; k < m.data.cols(); ++k) {
            r.push_back(m.data(i, k).real());
            c.push_back(m.data(i, k).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(c));
    }
    j["real"] = re;
    j["imag"] = im;
    return j.dump();
}

}  // namespace gkp
