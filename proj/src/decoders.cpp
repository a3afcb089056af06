#include "gkp/decoders.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gkp/errors.hpp"

namespace gkp {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace

DisplacementChannel ad_effective_channel(const ChannelSpec& ch) {
    if (ch.kind != ChannelSpec::Kind::loss) {
        throw WrongChannelKind("the amplification reduction applies to loss channels only");
    }
    return DisplacementChannel{ch.strength};
}

MonteCarloEstimate voronoi_logical_error(const Lattice& lat, long d_l,
                                         const DisplacementChannel& dch, long samples,
                                         std::uint64_t seed) {
    if (!lat.has_generator()) throw InvalidArgument("decoder needs an explicit generator");
    if (d_l != logical_dimension(lat)) {
        throw InvalidArgument("d_l does not match the lattice's logical dimension");
    }
    if (!(dch.sigma_sq > 0.0)) throw InvalidArgument("need sigma_sq > 0");
    if (samples < 10000) throw InvalidArgument("need at least 1e4 samples");

    const int n = 2 * lat.modes;
    const double sigma = std::sqrt(dch.sigma_sq);
    // Dual code lattice in quadrature units; rows are basis vectors.
    RMat dual_rows = dual_generator(lat).rows;
    RMat dual = std::sqrt(kTwoPi) * dual_rows;
    RMat dual_inv = dual.inverse();
    // Integer coefficients a of a dual vector map to stabilizer cosets via
    // a * (dual relative to the stabilizer basis); integrality means the
    // trivial coset.
    RMat coset_map = dual_rows * lat.generator.rows.inverse();

    Eigen::JacobiSVD<RMat> svd(dual);
    double smin = svd.singularValues().minCoeff();
    double min_dual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) min_dual = std::min(min_dual, dual.row(i).norm());
    double radius = 6.0 * sigma + min_dual;
    double cover = 0.0;
    for (int i = 0; i < n; ++i) cover += 0.5 * dual.row(i).norm();
    long wmax = static_cast<long>(std::ceil((radius + cover) / smin));
    double table_size = std::pow(2.0 * wmax + 1.0, n);
    if (table_size > 2e4) {
        throw EnumerationBudgetExceeded("offset table too large for this lattice/noise");
    }

    // Precompute candidate offsets (integer coefficient shifts and vectors).
    std::vector<Eigen::VectorXi> offs;
    std::vector<RVec> offv;
    Eigen::VectorXi w = Eigen::VectorXi::Constant(n, static_cast<int>(-wmax));
    while (true) {
        offs.push_back(w);
        offv.push_back(w.cast<double>().transpose() * dual);
        int i = 0;
        for (; i < n; ++i) {
            if (w[i] < wmax) {
                ++w[i];
                break;
            }
            w[i] = static_cast<int>(-wmax);
        }
        if (i == n) break;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    long errors = 0;
    RVec u(n), t(n), r(n);
    Eigen::VectorXi base(n), best(n);
    for (long s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) u[i] = gauss(rng);
        t = (u.transpose() * dual_inv).transpose();
        for (int i = 0; i < n; ++i) base[i] = static_cast<int>(std::lround(t[i]));
        r = u - (base.cast<double>().transpose() * dual).transpose();
        double dmin = std::numeric_limits<double>::infinity();
        size_t arg = 0;
        for (size_t c = 0; c < offv.size(); ++c) {
            double dist = (offv[c] - r).squaredNorm();
            if (dist < dmin) {
                dmin = dist;
                arg = c;
            }
        }
        best = base + offs[arg];
        RVec coset = (best.cast<double>().transpose() * coset_map).transpose();
        bool logical = false;
        for (int i = 0; i < n; ++i) {
            if (std::abs(coset[i] - std::lround(coset[i])) > 1e-6) {
                logical = true;
                break;
            }
        }
        if (logical) ++errors;
    }

    MonteCarloEstimate est;
    est.samples = samples;
    est.p_err = static_cast<double>(errors) / static_cast<double>(samples);
    est.std_err = std::sqrt(est.p_err * (1.0 - est.p_err) / static_cast<double>(samples));
    return est;
}

}  // namespace gkp
