#pragma once

#include <Eigen/Dense>
#include <complex>

namespace gkp {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

// Principal square root of a Hermitian positive semidefinite matrix.
// Eigenvalues in [-clip_rel * lambda_max, 0) are treated as rounding noise and
// clipped to zero; anything more negative throws NotPositiveSemidefinite.
Mat sqrt_psd(const Mat& a, double clip_rel = 1e-8);

// Pseudo-inverse square root A^{-1/2} restricted to the numerical range of A.
// Eigenvalues below floor_rel * lambda_max are treated as zero.
Mat pinv_sqrt(const Mat& a, double floor_rel = 1e-12);

// Squared Frobenius norm.
double fro_sq(const Mat& a);

}  // namespace gkp
