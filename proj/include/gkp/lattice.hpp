#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gkp/linalg.hpp"

namespace gkp {

// Standard symplectic form on N modes with interleaved (q1,p1,...,qN,pN)
// ordering: block-diagonal copies of [[0,1],[-1,0]].
RMat symplectic_form(int modes);

// Rows are basis vectors of the lattice in quadrature coordinates.
struct GeneratorMatrix {
    RMat rows;
    int modes = 0;

    // Validates shape (2N x 2N), invertibility, integrality of M Omega M^T,
    // and integrality of |det M|.
    static GeneratorMatrix checked(const RMat& rows);
};

struct Lattice {
    std::string name;
    int modes = 0;
    GeneratorMatrix generator;      // empty rows when metadata_only
    Eigen::MatrixXi gram;           // M Omega M^T, exact integer form
    long det_abs = 0;               // |det M|, the logical dimension

    // Catalog entries beyond the enumerable size are served from stored
    // constants instead of a generator matrix.
    bool metadata_only = false;
    double stored_dual_min_sq = 0.0;
    int stored_dual_kissing = 0;

    bool has_generator() const { return !metadata_only; }
};

enum class Which { primal, dual };

Eigen::MatrixXi symplectic_gram(const GeneratorMatrix& m);
long logical_dimension(const Lattice& lat);

// Generator of the symplectic dual lattice: -M^{-T} Omega.
GeneratorMatrix dual_generator(const Lattice& lat);

struct ShortestVectorReport {
    double min_norm_sq = 0.0;
    int kissing = 0;
    std::vector<RVec> vectors;  // closed under negation; empty when not enumerated
    bool enumerated = true;
};

ShortestVectorReport shortest_vectors(const Lattice& lat, Which which);

struct ThetaResult {
    double value = 0.0;             // sum over nonzero points of exp(-c |v|^2)
    double truncation_bound = 0.0;  // bound on the omitted tail
    bool leading_shell_only = false;
};

ThetaResult theta_sum(const Lattice& lat, Which which, double c, double tol = 1e-12);

// Scales the lattice by sqrt(lambda) so the Gram matrix (and the logical
// dimension per mode) is multiplied by the integer lambda.
Lattice scale_lattice(const Lattice& lat, long lambda);

// Named catalog: square, hexagonal (both take a logical dimension dl),
// tesseract, d4, d6, e8, leech (fixed entries; dl must be omitted or 1).
Lattice catalog_lattice(const std::string& name, long dl = 1);

// Block-diagonal direct sum of single-mode (or general) lattices.
Lattice product_lattice(const std::vector<Lattice>& factors, const std::string& name);

// Symplectic matrix S with M = M_sq S^T, where M_sq is the square-lattice
// generator diag(sqrt(d_k)) (x) I_2 read off the canonical Gram form
// diag(d_1..d_N) (x) omega. Throws NotCanonicalBasis otherwise.
RMat symplectic_factor(const Lattice& lat);

// Per-mode logical dimensions d_k from a canonical-form Gram matrix.
std::vector<long> canonical_mode_dims(const Lattice& lat);

// Parses {"modes": N, "generator": [[...],...]} and validates it.
Lattice lattice_from_json(const std::string& json_text, const std::string& name = "custom");

// Calls cb(coeffs, norm_sq) for every nonzero integer combination x of the
// rows of basis with |x B|^2 <= c2. Throws EnumerationBudgetExceeded if more
// than budget candidates are visited.
void for_each_lattice_point(const RMat& basis, double c2,
                            const std::function<void(const Eigen::VectorXi&, double)>& cb,
                            long budget = 200000000);

}  // namespace gkp
