#pragma once

#include <map>
#include <string>
#include <vector>

#include "gkp/qec.hpp"

namespace gkp {

struct FidelityReport {
    std::string method;
    double infidelity = 0.0;
    bool vacuous = false;           // bound grew past its useful range
    double truncation_bound = 0.0;  // bound on truncated contributions
    std::map<std::string, double> diagnostics;
};

// Entanglement infidelity of the near-optimal (transpose-channel) recovery,
// 1 - (1/d_L^2) ||Tr_jump sqrt(M)||_F^2, from the exact matrix square root.
FidelityReport near_optimal_infidelity(const QecMatrix& m);

// First-order expansion around the correctable thermal diagonal:
// (1/d_L) || f(D) .* (M - I (x) D) ||_F^2 with f = 1/(sqrt(D_l)+sqrt(D_k)).
FidelityReport perturbative_infidelity(const QecMatrix& m, const CorrectableSplit& split);

// Full double lattice sum with Bessel kernel; exact to all orders in the
// residual. Single mode only. shell_only restricts both sums to the globally
// minimal nonzero shell.
FidelityReport finite_energy_exact_infidelity(const GkpCode& code, const ChannelSpec& ch,
                                              bool shell_only = false);

// Leading-order infidelity: the exact engine restricted to the minimal shell.
FidelityReport leading_order_infidelity(const GkpCode& code, const ChannelSpec& ch);

// Closed-form single-shell evaluation from dual shortest-vector data:
// (m/2) e^{-2 pi (n+1/2) x2} (8 sum_{k>=0} t^k/(t^k+1)^2 I_{2k}(z) - I_0(z) - 1)
// with z = 2 pi (n+1) sqrt(t) x2.
FidelityReport leading_order_closed_form(const ShortestVectorReport& dual_sv,
                                         const ChannelSpec& ch, double n_delta);

// Infinite-energy upper bound (1/4) sum_{x in dual, x != 0} e^{-pi K |x|^2}.
FidelityReport infinite_energy_bound(const Lattice& lat, const ChannelSpec& ch,
                                     double tol = 1e-12);

// Bound for scaled self-dual lattices: (1/4) (lambda / K)^N.
FidelityReport selfdual_scaled_bound(long lambda, int modes, const ChannelSpec& ch);

// Numeric transpose-channel recovery fidelity built directly from raw
// codewords and truncated Kraus operators.
FidelityReport transpose_channel_infidelity(const std::vector<Vec>& raw_words,
                                            const ChannelSpec& ch, int l_jump);

}  // namespace gkp
