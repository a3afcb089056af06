#include "gkp/fock.hpp"

#include <cmath>

#include "gkp/errors.hpp"

namespace gkp {

ChannelSpec ChannelSpec::loss(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw InvalidArgument("loss probability must lie in (0,1)");
    }
    return {Kind::loss, gamma};
}

ChannelSpec ChannelSpec::amp(double gain) {
    if (!(gain > 1.0)) throw InvalidArgument("gain must exceed 1");
    return {Kind::amp, gain};
}

double ChannelSpec::tau() const {
    return kind == Kind::loss ? 1.0 - strength : strength;
}

double ChannelSpec::quality() const {
    return kind == Kind::loss ? (1.0 - strength) / strength : strength / (strength - 1.0);
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw InvalidArgument("laguerre order must be nonnegative");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) / (k + 1.0);
        lm1 = l;
        l = next;
    }
    return l;
}

std::vector<double> bessel_i_scaled_row(int nmax, double x) {
    if (nmax < 0 || x < 0.0) throw InvalidArgument("bessel row needs nmax >= 0, x >= 0");
    std::vector<double> row(nmax + 1, 0.0);
    if (x == 0.0) {
        row[0] = 1.0;
        return row;
    }
    if (x < 0.5) {
        // Power series in x/2 is accurate and cheap at small argument.
        double damp = std::exp(-x);
        for (int n = 0; n <= nmax; ++n) {
            double term = std::exp(n * std::log(0.5 * x) - std::lgamma(n + 1.0));
            double acc = 0.0, t = term;
            for (int m = 0;; ++m) {
                acc += t;
                t *= 0.25 * x * x / ((m + 1.0) * (m + 1.0 + n));
                if (t < acc * 1e-18 + 1e-300) break;
            }
            row[n] = acc * damp;
        }
        return row;
    }
    // Miller backward recurrence: contamination from the second solution decays
    // like exp(-(start^2 - nmax^2)/x), so start far enough above nmax.
    int start = static_cast<int>(std::sqrt(static_cast<double>(nmax) * nmax + 44.0 * x)) + 44;
    std::vector<double> f(start + 2, 0.0);
    f[start + 1] = 0.0;
    f[start] = 1e-280;
    for (int k = start; k >= 1; --k) {
        f[k - 1] = f[k + 1] + (2.0 * k / x) * f[k];
        if (f[k - 1] > 1e260) {
            for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-260;
        }
    }
    // Normalization from I_0 + 2 sum_{k>=1} I_k = e^x.
    double norm = f[0];
    for (int k = 1; k <= start; ++k) norm += 2.0 * f[k];
    for (int n = 0; n <= nmax; ++n) row[n] = f[n] / norm;
    return row;
}

double bessel_i_scaled(int n, double x) { return bessel_i_scaled_row(n, x)[n]; }

cplx displacement_element(int l, int k, cplx alpha) {
    if (l < 0 || k < 0) throw InvalidArgument("Fock indices must be nonnegative");
    double r = std::abs(alpha);
    if (r == 0.0) return (l == k) ? 1.0 : 0.0;
    if (l < k) return std::conj(displacement_element(k, l, -alpha));
    int dn = l - k;
    double x = r * r;
    // Magnitude assembled in log space so large offsets neither overflow nor
    // underflow before the final exponential.
    double log_mag = -0.5 * x + 0.5 * (std::lgamma(k + 1.0) - std::lgamma(l + 1.0)) +
                     dn * std::log(r);
    double lag = laguerre(k, static_cast<double>(dn), x);
    double theta = std::arg(alpha);
    return lag * std::exp(log_mag) * std::polar(1.0, dn * theta);
}

RMat kraus_matrix(const ChannelSpec& ch, int l, int cutoff) {
    if (l < 0 || cutoff < 0) throw InvalidArgument("kraus_matrix needs l >= 0, cutoff >= 0");
    RMat e = RMat::Zero(cutoff + 1, cutoff + 1);
    if (ch.kind == ChannelSpec::Kind::loss) {
        double gamma = ch.strength;
        double eta = 1.0 - gamma;
        for (int m = l; m <= cutoff; ++m) {
            double le = 0.5 * (l * std::log(gamma / eta) - std::lgamma(l + 1.0) +
                               std::lgamma(m + 1.0) - std::lgamma(m - l + 1.0)) +
                        0.5 * m * std::log(eta);
            e(m - l, m) = std::exp(le);
        }
    } else {
        double g = ch.strength;
        for (int m = 0; m + l <= cutoff; ++m) {
            double le = 0.5 * (l * std::log(g - 1.0) - std::log(g) - std::lgamma(l + 1.0)) -
                        0.5 * (m + l) * std::log(g) +
                        0.5 * (std::lgamma(m + l + 1.0) - std::lgamma(m + 1.0));
            e(m + l, m) = std::exp(le);
        }
    }
    return e;
}

std::vector<double> hermite_psi(double x, int mmax) {
    std::vector<double> psi(mmax + 1, 0.0);
    double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    psi[0] = p0;
    if (mmax >= 1) psi[1] = std::sqrt(2.0) * x * p0;
    for (int n = 2; n <= mmax; ++n) {
        psi[n] = std::sqrt(2.0 / n) * x * psi[n - 1] - std::sqrt((n - 1.0) / n) * psi[n - 2];
    }
    return psi;
}

double envelope_mean_photon(double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("envelope width must be positive");
    return 1.0 / std::expm1(2.0 * delta * delta);
}

double delta_from_mean_photon(double nbar) {
    if (!(nbar > 0.0)) throw InvalidArgument("mean photon number must be positive");
    return std::sqrt(0.5 * std::log1p(1.0 / nbar));
}

int default_codeword_cutoff(double delta) {
    double nd = envelope_mean_photon(delta);
    return static_cast<int>(std::ceil(nd + 12.0 * std::sqrt(nd + 1.0) + 20.0));
}

int default_peak_window(long d, double delta) {
    return static_cast<int>(std::ceil(4.0 / (std::sqrt(M_PI) * d * delta))) + 2;
}

FockState gkp_codeword_fock(long d, long mu, double delta, int cutoff, int peak_window,
                            double tail_tol, double window_tol) {
    if (d < 1 || mu < 0 || mu >= d) throw InvalidArgument("need 0 <= mu < d");
    if (!(delta > 0.0)) throw InvalidArgument("envelope width must be positive");
    if (cutoff < 0) cutoff = default_codeword_cutoff(delta);
    if (peak_window < 0) peak_window = default_peak_window(d, delta);

    Vec amp = Vec::Zero(cutoff + 1);
    double outer2 = 0.0;
    for (long n = -peak_window; n <= peak_window; ++n) {
        double q = std::sqrt(2.0 * M_PI * d) * n + std::sqrt(2.0 * M_PI / d) * mu;
        auto psi = hermite_psi(q, cutoff);
        double peak2 = 0.0;
        for (int m = 0; m <= cutoff; ++m) {
            double w = psi[m] * std::exp(-delta * delta * m);
            amp[m] += w;
            peak2 += w * w;
        }
        if (std::abs(n) == peak_window) outer2 += peak2;
    }
    double norm2 = amp.squaredNorm();
    if (!(norm2 > 0.0)) throw WindowTooSmall("comb window produced a zero state");
    double outer_rel = outer2 / norm2;
    if (outer_rel > window_tol) {
        throw WindowTooSmall("outermost comb peaks carry relative weight " +
                             std::to_string(outer_rel));
    }
    amp /= std::sqrt(norm2);
    double tail = 0.0;
    for (int m = std::max(0, cutoff - 9); m <= cutoff; ++m) tail += std::norm(amp[m]);
    if (tail > tail_tol) {
        throw CutoffTooSmall("top Fock levels carry mass " + std::to_string(tail) +
                             " above tolerance " + std::to_string(tail_tol));
    }
    FockState st;
    st.amplitudes = amp;
    st.cutoff = cutoff;
    st.tail_mass = tail;
    st.outer_peak_mass = outer_rel;
    return st;
}

double bessel_sum_partial(double x, double c, int ncut) {
    if (ncut < 0) throw InvalidArgument("partial sum needs ncut >= 0");
    auto row = bessel_i_scaled_row(ncut, x);
    double base = 1.0 - 1.0 / x;
    double acc = 0.0;
    for (int n = 0; n <= ncut; ++n) acc += std::pow(base, c * n) * row[n];
    return acc;
}

double laguerre_bilinear_series(int alpha, double x, double y, double t, int ncut) {
    double acc = 0.0;
    for (int n = 0; n <= ncut; ++n) {
        double w = std::exp(std::lgamma(n + 1.0) - std::lgamma(n + alpha + 1.0)) *
                   std::pow(t, n);
        acc += w * laguerre(n, alpha, x) * laguerre(n, alpha, y);
    }
    return acc;
}

double laguerre_bilinear_closed_form(int alpha, double x, double y, double t) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("need 0 < t < 1");
    double z = 2.0 * std::sqrt(x * y * t) / (1.0 - t);
    double i_alpha = bessel_i_scaled(alpha, z) * std::exp(z);
    return 1.0 / (1.0 - t) * std::exp(-(x + y) * t / (1.0 - t)) *
           std::pow(x * y * t, -0.5 * alpha) * i_alpha;
}

}  // namespace gkp
