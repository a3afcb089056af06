#pragma once

#include <string>

#include "gkp/fidelity.hpp"

namespace gkp {

// Quantum capacity of the one-mode Gaussian channel, bits per mode:
// max(log2 K, 0) with K = eta/(1-eta) for loss and G/(G-1) for amplification.
double capacity(const ChannelSpec& ch);

// Coherent information of the d_L-dimensional Werner state with fidelity f,
// regularized per mode. Uses the 0*log(0) = 0 convention.
double werner_rate(double f, long d_l, int modes);

// Random-stabilizer (hashing) rate for the depolarizing probability vector
// (f, (1-f)/(d_L^2-1), ...): (1 - H_{d_L}(p)) * log2(d_L). May be negative;
// reported raw.
double hashing_rate(double f, long d_l);

// Floor-constrained achievable rate max(log2 floor(K), 0), bits per mode.
double multimode_rate(const ChannelSpec& ch);

struct RatePoint {
    std::string method;
    double rate_bits_per_mode = 0.0;
    long d_l = 0;
    int modes = 1;
    long lambda = 0;
    double fidelity = 1.0;
    double epsilon = 0.0;
    bool negative = false;
};

// Scans integer scalings lambda = 1..lambda_max of the base lattice, keeping
// those whose infidelity stays at or below eps_ceiling, and returns the best
// Werner rate among them. Infidelity is the exact finite-energy value for a
// single-mode base with finite nbar, and the dual theta bound otherwise
// (nbar = infinity selects the theta route as well). The scan is exhaustive;
// the finite-energy route costs O(d_L^2) per lambda, so pick lambda_max
// accordingly. Throws NoFeasibleLambda when even lambda = 1 violates the
// ceiling.
RatePoint scaled_family_rate(const Lattice& base, const ChannelSpec& ch, double nbar,
                             double eps_ceiling, long lambda_max = 4096);

struct SelfdualRate {
    double constructive_bits = 0.0;  // log2 floor(K), integer-scaling family
    double ideal_bits = 0.0;         // log2 K
    long k_floor = 0;
};

// Asymptotic achievable rates of the self-dual scaled family; requires K > 1.
SelfdualRate selfdual_asymptotic_rate(const ChannelSpec& ch);

struct SupRatePoint {
    double infidelity = 0.0;  // at the d_L of the queried lattice
    double rate_bits = 0.0;   // supremum of the single-mode Werner rate over d
    long best_d = 0;
    double sigma_sq = 0.0;    // displacement variance of the reduced channel
};

// Amplification-decoder baseline for the square family under loss: the code
// infidelity is the closed form exp(-(pi/(4 d_L)) K) and the rate is the
// supremum of werner_rate(1 - infidelity(d), d, 1) over d = 2..4096.
SupRatePoint ad_baseline(const Lattice& lat, const ChannelSpec& ch);

// Hashing-bound curve of the hexagonal family: supremum over d = 2..4096 of
// hashing_rate(1 - eps(d), d) with eps(d) the dual theta bound of the
// hexagonal lattice with logical dimension d. Dimensions whose bound is
// vacuous are skipped.
RatePoint hashing_hex_rate(const ChannelSpec& ch);

}  // namespace gkp
