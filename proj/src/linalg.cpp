#include "gkp/linalg.hpp"

#include <cmath>

#include "gkp/errors.hpp"

namespace gkp {

namespace {

Eigen::SelfAdjointEigenSolver<Mat> eig_hermitized(const Mat& a) {
    Mat h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) {
        throw NonConvergent("hermitian eigendecomposition failed");
    }
    return es;
}

}  // namespace

Mat sqrt_psd(const Mat& a, double clip_rel) {
    auto es = eig_hermitized(a);
    RVec w = es.eigenvalues();
    double wmax = w.size() ? w.maxCoeff() : 0.0;
    double floor = -clip_rel * std::max(wmax, 0.0);
    RVec s(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] < floor) {
            throw NotPositiveSemidefinite("eigenvalue " + std::to_string(w[i]) +
                                          " below clip floor " + std::to_string(floor));
        }
        s[i] = std::sqrt(std::max(w[i], 0.0));
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

Mat pinv_sqrt(const Mat& a, double floor_rel) {
    auto es = eig_hermitized(a);
    RVec w = es.eigenvalues();
    double wmax = w.size() ? w.maxCoeff() : 0.0;
    double floor = floor_rel * std::max(wmax, 0.0);
    RVec s(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        s[i] = (w[i] > floor) ? 1.0 / std::sqrt(w[i]) : 0.0;
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double fro_sq(const Mat& a) { return a.squaredNorm(); }

}  // namespace gkp
