#include "gkp/rates.hpp"

#include <cmath>
#include <limits>

#include "gkp/errors.hpp"

namespace gkp {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

constexpr long kSupScanMaxD = 4096;

}  // namespace

double capacity(const ChannelSpec& ch) {
    return std::max(std::log2(ch.quality()), 0.0);
}

double werner_rate(double f, long d_l, int modes) {
    if (f < 0.0 || f > 1.0) throw InvalidArgument("fidelity outside [0, 1]");
    if (d_l < 2) throw InvalidArgument("need d_l >= 2");
    if (modes < 1) throw InvalidArgument("need modes >= 1");
    double dd = static_cast<double>(d_l);
    double off = (1.0 - f) / (dd * dd - 1.0);
    double info = std::log2(dd) + xlog2x(f) + (1.0 - f) * (off > 0.0 ? std::log2(off) : 0.0);
    return info / static_cast<double>(modes);
}

double hashing_rate(double f, long d_l) {
    if (f < 0.0 || f > 1.0) throw InvalidArgument("fidelity outside [0, 1]");
    if (d_l < 2) throw InvalidArgument("need d_l >= 2");
    double dd = static_cast<double>(d_l);
    double logd = std::log(dd);
    double off = (1.0 - f) / (dd * dd - 1.0);
    // Base-d entropy of the d^2-entry depolarizing vector.
    double entropy = 0.0;
    if (f > 0.0) entropy -= f * std::log(f) / logd;
    if (off > 0.0) entropy -= (dd * dd - 1.0) * off * std::log(off) / logd;
    return (1.0 - entropy) * std::log2(dd);
}

double multimode_rate(const ChannelSpec& ch) {
    double k = ch.quality();
    double kf = std::floor(k + 1e-9);
    if (kf < 1.0) return 0.0;
    return std::max(std::log2(kf), 0.0);
}

RatePoint scaled_family_rate(const Lattice& base, const ChannelSpec& ch, double nbar,
                             double eps_ceiling, long lambda_max) {
    if (!base.has_generator()) throw InvalidArgument("base lattice must be enumerable");
    if (!(eps_ceiling > 0.0 && eps_ceiling < 1.0)) {
        throw InvalidArgument("eps_ceiling must lie in (0, 1)");
    }
    if (lambda_max < 1) throw InvalidArgument("need lambda_max >= 1");
    const bool finite_route = std::isfinite(nbar) && base.modes == 1;

    RatePoint best;
    best.method = "scaled_family";
    best.modes = base.modes;
    bool found = false;
    for (long lambda = 1; lambda <= lambda_max; ++lambda) {
        Lattice scaled = scale_lattice(base, static_cast<double>(lambda));
        double eps;
        if (finite_route) {
            GkpCode code = GkpCode::from_nbar(scaled, nbar);
            eps = finite_energy_exact_infidelity(code, ch).infidelity;
        } else {
            eps = infinite_energy_bound(scaled, ch).infidelity;
        }
        if (!(eps <= eps_ceiling)) continue;
        long d_l = logical_dimension(scaled);
        double f = 1.0 - eps;
        double rate = d_l >= 2 ? werner_rate(f, d_l, base.modes) : 0.0;
        if (!found || rate > best.rate_bits_per_mode) {
            found = true;
            best.rate_bits_per_mode = rate;
            best.d_l = d_l;
            best.lambda = lambda;
            best.fidelity = f;
            best.epsilon = eps;
        }
    }
    if (!found) throw NoFeasibleLambda("no scaling satisfies the infidelity ceiling");
    best.negative = best.rate_bits_per_mode < 0.0;
    return best;
}

SelfdualRate selfdual_asymptotic_rate(const ChannelSpec& ch) {
    double k = ch.quality();
    if (!(k > 1.0)) throw InvalidArgument("need channel quality K > 1");
    SelfdualRate r;
    r.k_floor = static_cast<long>(std::floor(k + 1e-9));
    r.constructive_bits = std::log2(static_cast<double>(r.k_floor));
    r.ideal_bits = std::log2(k);
    return r;
}

SupRatePoint ad_baseline(const Lattice& lat, const ChannelSpec& ch) {
    if (ch.kind != ChannelSpec::Kind::loss) {
        throw WrongChannelKind("the amplification-decoder baseline applies to loss only");
    }
    if (lat.modes != 1 || !lat.has_generator()) {
        throw InvalidArgument("square-family baseline needs a single-mode generator");
    }
    RMat mtm = lat.generator.rows.transpose() * lat.generator.rows;
    double d0 = static_cast<double>(lat.det_abs);
    if ((mtm - d0 * RMat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-9 * d0) {
        throw InvalidArgument("lattice is not in the square family");
    }
    double k = ch.quality();
    SupRatePoint out;
    out.sigma_sq = ch.strength;
    out.infidelity = std::exp(-0.25 * M_PI * k / d0);
    double best = -std::numeric_limits<double>::infinity();
    for (long d = 2; d <= kSupScanMaxD; ++d) {
        double eps = std::exp(-0.25 * M_PI * k / static_cast<double>(d));
        if (eps >= 1.0) continue;
        double rate = werner_rate(1.0 - eps, d, 1);
        if (rate > best) {
            best = rate;
            out.best_d = d;
        }
    }
    out.rate_bits = best;
    return out;
}

RatePoint hashing_hex_rate(const ChannelSpec& ch) {
    RatePoint best;
    best.method = "hashing_hex";
    best.rate_bits_per_mode = -std::numeric_limits<double>::infinity();
    for (long d = 2; d <= kSupScanMaxD; ++d) {
        Lattice hex = catalog_lattice("hexagonal", d);
        FidelityReport bound = infinite_energy_bound(hex, ch);
        // The dual lattice only gets denser as d grows, so once the theta
        // bound is vacuous it stays vacuous.
        if (bound.vacuous) break;
        double rate = hashing_rate(1.0 - bound.infidelity, d);
        if (rate > best.rate_bits_per_mode) {
            best.rate_bits_per_mode = rate;
            best.d_l = d;
            best.fidelity = 1.0 - bound.infidelity;
            best.epsilon = bound.infidelity;
        }
    }
    if (!std::isfinite(best.rate_bits_per_mode)) {
        best.rate_bits_per_mode = 0.0;
        best.negative = false;
        return best;
    }
    best.negative = best.rate_bits_per_mode < 0.0;
    return best;
}

}  // namespace gkp
