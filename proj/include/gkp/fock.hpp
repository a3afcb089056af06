#pragma once

#include <complex>
#include <vector>

#include "gkp/linalg.hpp"

namespace gkp {

// One-parameter Gaussian channel family: pure loss (strength = loss
// probability gamma in (0,1)) or quantum-limited amplification (strength =
// gain G > 1).
struct ChannelSpec {
    enum class Kind { loss, amp };
    Kind kind = Kind::loss;
    double strength = 0.0;

    static ChannelSpec loss(double gamma);
    static ChannelSpec amp(double gain);

    // Transmissivity eta = 1 - gamma for loss, gain G for amplification.
    double tau() const;
    // Effective quality factor: eta/(1-eta) for loss, G/(G-1) for amplification.
    double quality() const;
    const char* name() const { return kind == Kind::loss ? "loss" : "amp"; }
};

// Generalized Laguerre polynomial L_n^{(alpha)}(x) by upward recurrence.
double laguerre(int n, double alpha, double x);

// Exponentially scaled modified Bessel function e^{-x} I_n(x), n >= 0, x >= 0.
double bessel_i_scaled(int n, double x);

// Row of scaled Bessel values for orders 0..nmax at a common argument.
std::vector<double> bessel_i_scaled_row(int nmax, double x);

// Fock matrix element <l| D(alpha) |k> of the displacement operator.
cplx displacement_element(int l, int k, cplx alpha);

// Kraus operator number l of the channel, truncated to (cutoff+1)^2.
RMat kraus_matrix(const ChannelSpec& ch, int l, int cutoff);

// Harmonic-oscillator position eigenfunctions psi_0..psi_mmax at point x,
// with the q = (a + a^dag)/sqrt(2) convention.
std::vector<double> hermite_psi(double x, int mmax);

struct FockState {
    Vec amplitudes;
    int cutoff = 0;
    double tail_mass = 0.0;     // mass in the top ten retained levels
    double outer_peak_mass = 0.0;  // relative weight of the outermost comb peaks
};

// Fock expansion of the finite-energy square-family codeword mu of a
// d-dimensional code: ideal comb at q = sqrt(2 pi d) n + sqrt(2 pi / d) mu,
// damped by exp(-Delta^2 m) and normalized.
FockState gkp_codeword_fock(long d, long mu, double delta, int cutoff = -1,
                            int peak_window = -1, double tail_tol = 1e-8,
                            double window_tol = 1e-12);

int default_codeword_cutoff(double delta);
int default_peak_window(long d, double delta);

// Mean photon number n_Delta = 1/(e^{2 Delta^2} - 1) of the damping envelope.
double envelope_mean_photon(double delta);
double delta_from_mean_photon(double nbar);

// Partial sum over n = 0..ncut of (1 - 1/x)^{c n} e^{-x} I_n(x); the full sum
// tends to 1/2 as x grows.
double bessel_sum_partial(double x, double c, int ncut);

// Bilinear Laguerre generating-function identity: truncated series on the
// left, closed form on the right.
double laguerre_bilinear_series(int alpha, double x, double y, double t, int ncut);
double laguerre_bilinear_closed_form(int alpha, double x, double y, double t);

}  // namespace gkp
