#pragma once

#include <string>
#include <vector>

#include "gkp/fock.hpp"
#include "gkp/lattice.hpp"
#include "gkp/linalg.hpp"

namespace gkp {

// A GKP code: a symplectically integral lattice in canonical basis form plus
// a finite-energy envelope width.
struct GkpCode {
    Lattice lattice;
    double delta = 0.0;
    long d_l = 0;                 // total logical dimension
    std::vector<long> mode_dims;  // per-mode logical dimensions from the Gram form
    RMat s_factor;                // symplectic S with M = M_sq S^T

    double n_delta() const;
    double nbar() const { return n_delta(); }

    static GkpCode from_delta(const Lattice& lat, double delta);
    static GkpCode from_nbar(const Lattice& lat, double nbar);
};

// Matrix of codeword overlaps <mu| K_l^dag K_k |nu> over jump labels l,k up to
// l_jump per mode. Flat index = mu * (l_jump+1)^modes + l with mu and l
// row-major over modes.
struct QecMatrix {
    Mat data;
    long d_l = 0;
    int l_jump = 0;
    int modes = 1;
    std::vector<long> mode_dims;
    double tail_bound = 0.0;  // dropped lattice-sum mass (analytic) or Fock tail (oracle)
};

// Thermal-factor bundle of the exact jump expansion: diagonal decay t,
// overall prefactor, displacement scale c, and Gaussian weight gwt.
struct ThermalParams {
    double t = 0.0;
    double pref0 = 0.0;
    double c = 0.0;
    double gwt = 0.0;
};
ThermalParams thermal_params(const ChannelSpec& ch, double n_delta);

// Normalization sum S_mu of the finite-energy codeword for a single mode with
// logical dimension d and 2x2 symplectic factor s2.
double codeword_norm_sum(long d, long mu, const RMat& s2, double n_delta);

int default_jump_cutoff(const GkpCode& code, const ChannelSpec& ch);

// Closed-form lattice-sum evaluation of the QEC matrix. Supports products of
// single-mode lattices (block-diagonal symplectic factor).
QecMatrix analytic_qec_matrix(const GkpCode& code, const ChannelSpec& ch, int l_jump = -1,
                              double term_tol = 1e-16);

// Independent brute-force evaluation: expands codewords in the Fock basis via
// the canonical comb construction and multiplies truncated Kraus matrices.
QecMatrix oracle_qec_matrix(const GkpCode& code, const ChannelSpec& ch, int cutoff,
                            int l_jump, double tail_tol = 1e-8);

// Overlap <mu|D(alpha)|nu> of finite-energy codewords, alpha one complex
// amplitude per mode, evaluated by the double lattice sum with unit prefactor.
cplx displaced_overlap(const GkpCode& code, long mu, long nu, const Vec& alpha,
                       double term_tol = 1e-16);

// Split of the QEC matrix into its correctable thermal diagonal and the
// residual that drives the infidelity.
struct CorrectableSplit {
    RVec thermal_diag;   // D over composite jump labels
    Mat residual;        // M - I_{d_L} (x) diag(D)
    double trace_d = 0.0;
    double trace_deficit = 0.0;  // closed-form mass beyond the jump cutoff
};
CorrectableSplit split_correctable(const QecMatrix& m, const ChannelSpec& ch,
                                   const GkpCode& code);

std::string qec_matrix_json(const QecMatrix& m);

}  // namespace gkp
