#pragma once

#include <cstdint>

#include "gkp/fock.hpp"
#include "gkp/lattice.hpp"

namespace gkp {

// Isotropic Gaussian displacement channel. sigma_sq is the variance of each
// quadrature component of the displacement, matching the complex-displacement
// density exp(-|alpha|^2 / sigma_sq) / (pi sigma_sq) with
// |alpha|^2 = (u_q^2 + u_p^2) / 2.
struct DisplacementChannel {
    double sigma_sq = 0.0;
};

// Reduction of a pure-loss channel to a displacement channel by amplification
// to unit total gain: sigma_sq = 1 - eta = gamma. Amplification inputs are
// rejected.
DisplacementChannel ad_effective_channel(const ChannelSpec& ch);

struct MonteCarloEstimate {
    double p_err = 0.0;
    double std_err = 0.0;
    long samples = 0;
};

// Monte-Carlo logical error rate of the closest-point (Voronoi) decoder:
// draws displacements u ~ N(0, sigma_sq I), snaps each to the nearest vector
// of the dual code lattice, and counts a logical error whenever that vector
// lies outside the stabilizer lattice. d_l must match the lattice's logical
// dimension. Deterministic for a fixed seed; single-threaded.
MonteCarloEstimate voronoi_logical_error(const Lattice& lat, long d_l,
                                         const DisplacementChannel& dch, long samples,
                                         std::uint64_t seed);

}  // namespace gkp
