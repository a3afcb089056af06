#include "gkp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "gkp/errors.hpp"

namespace gkp {

RMat symplectic_form(int modes) {
    RMat om = RMat::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        om(2 * k, 2 * k + 1) = 1.0;
        om(2 * k + 1, 2 * k) = -1.0;
    }
    return om;
}

GeneratorMatrix GeneratorMatrix::checked(const RMat& rows) {
    if (rows.rows() != rows.cols() || rows.rows() == 0 || rows.rows() % 2 != 0) {
        throw InvalidArgument("generator matrix must be square with even dimension");
    }
    int modes = static_cast<int>(rows.rows()) / 2;
    double det = rows.determinant();
    if (std::abs(det) < 1e-12) {
        throw SingularGenerator("generator matrix is singular");
    }
    RMat a = rows * symplectic_form(modes) * rows.transpose();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - std::round(a(i, j))) > 1e-9) {
                throw NotSymplecticallyIntegral(
                    "M Omega M^T entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") = " + std::to_string(a(i, j)) + " is not an integer");
            }
        }
    }
    double ad = std::abs(det);
    if (std::abs(ad - std::round(ad)) > 1e-8 * std::max(1.0, ad) || std::round(ad) < 1.0) {
        throw NonIntegerDeterminant("|det M| = " + std::to_string(ad) +
                                    " is not a positive integer");
    }
    return GeneratorMatrix{rows, modes};
}

Eigen::MatrixXi symplectic_gram(const GeneratorMatrix& m) {
    RMat a = m.rows * symplectic_form(m.modes) * m.rows.transpose();
    Eigen::MatrixXi g(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            g(i, j) = static_cast<int>(std::llround(a(i, j)));
        }
    }
    return g;
}

long logical_dimension(const Lattice& lat) { return lat.det_abs; }

GeneratorMatrix dual_generator(const Lattice& lat) {
    if (!lat.has_generator()) {
        throw UnknownLattice("lattice '" + lat.name + "' has no stored generator");
    }
    const RMat& m = lat.generator.rows;
    RMat md = -m.inverse().transpose() * symplectic_form(lat.modes);
    // The dual of a symplectically integral lattice contains the primal, so
    // its generator passes the same validation with |det| = 1 / det_abs only
    // when det_abs = 1; skip the integrality check and validate shape only.
    GeneratorMatrix g;
    g.rows = md;
    g.modes = lat.modes;
    return g;
}

void for_each_lattice_point(const RMat& basis, double c2,
                            const std::function<void(const Eigen::VectorXi&, double)>& cb,
                            long budget) {
    const int n = static_cast<int>(basis.rows());
    RMat gram = basis * basis.transpose();
    Eigen::LLT<RMat> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw SingularGenerator("basis Gram matrix is not positive definite");
    }
    RMat u = llt.matrixU();
    Eigen::VectorXi x = Eigen::VectorXi::Zero(n);
    long visited = 0;

    // Depth-first sweep over the ellipsoid |U x|^2 <= c2, dimensions from the
    // last row of U down to the first.
    std::function<void(int, double)> descend = [&](int i, double remaining) {
        double center = 0.0;
        for (int j = i + 1; j < n; ++j) center -= u(i, j) * x[j];
        center /= u(i, i);
        double radius = std::sqrt(std::max(remaining, 0.0)) / u(i, i);
        long lo = static_cast<long>(std::ceil(center - radius - 1e-12));
        long hi = static_cast<long>(std::floor(center + radius + 1e-12));
        for (long xi = lo; xi <= hi; ++xi) {
            if (++visited > budget) {
                throw EnumerationBudgetExceeded("lattice enumeration exceeded " +
                                                std::to_string(budget) + " candidates");
            }
            x[i] = static_cast<int>(xi);
            double step = u(i, i) * (xi - center);
            double rem2 = remaining - step * step;
            if (rem2 < -1e-9) continue;
            if (i == 0) {
                if (x.isZero()) continue;
                double norm_sq = (x.cast<double>().transpose() * basis).squaredNorm();
                if (norm_sq <= c2 + 1e-9) cb(x, norm_sq);
            } else {
                descend(i - 1, rem2);
            }
        }
        x[i] = 0;
    };
    descend(n - 1, c2);
}

ShortestVectorReport shortest_vectors(const Lattice& lat, Which which) {
    if (!lat.has_generator()) {
        if (which == Which::dual) {
            ShortestVectorReport r;
            r.min_norm_sq = lat.stored_dual_min_sq;
            r.kissing = lat.stored_dual_kissing;
            r.enumerated = false;
            return r;
        }
        throw UnknownLattice("lattice '" + lat.name + "' has no stored generator");
    }
    RMat basis = (which == Which::primal) ? lat.generator.rows : dual_generator(lat).rows;
    double c2 = basis.row(0).squaredNorm();
    for (Eigen::Index i = 1; i < basis.rows(); ++i) {
        c2 = std::min(c2, basis.row(i).squaredNorm());
    }
    struct Hit {
        RVec v;
        double n2;
    };
    std::vector<Hit> hits;
    double best = c2;
    for_each_lattice_point(basis, c2 * (1.0 + 1e-12), [&](const Eigen::VectorXi& x, double n2) {
        best = std::min(best, n2);
        if (n2 <= best * (1.0 + 1e-9) + 1e-12) {
            hits.push_back({(x.cast<double>().transpose() * basis).transpose(), n2});
        }
    });
    ShortestVectorReport r;
    r.min_norm_sq = best;
    for (auto& h : hits) {
        if (h.n2 <= best * (1.0 + 1e-9) + 1e-12) r.vectors.push_back(h.v);
    }
    r.kissing = static_cast<int>(r.vectors.size());
    return r;
}

ThetaResult theta_sum(const Lattice& lat, Which which, double c, double tol) {
    if (c <= 0.0) throw InvalidArgument("theta exponent must be positive");
    if (!lat.has_generator()) {
        if (which != Which::dual) {
            throw UnknownLattice("lattice '" + lat.name + "' has no stored generator");
        }
        ThetaResult r;
        r.value = lat.stored_dual_kissing * std::exp(-c * lat.stored_dual_min_sq);
        r.truncation_bound = r.value;  // no control beyond the leading shell
        r.leading_shell_only = true;
        return r;
    }
    RMat basis = (which == Which::primal) ? lat.generator.rows : dual_generator(lat).rows;
    double inner = (std::log(1.0 / tol) + 25.0) / c;
    double outer = inner + 10.0 / c;
    double s_inner = 0.0, s_outer = 0.0;
    for_each_lattice_point(basis, outer, [&](const Eigen::VectorXi&, double n2) {
        double w = std::exp(-c * n2);
        s_outer += w;
        if (n2 <= inner) s_inner += w;
    });
    ThetaResult r;
    r.value = s_outer;
    // Mass in successive annuli of equal width shrinks by at least e^{-10}
    // times a mild point-count growth factor, so the annulus mass bounds the
    // remaining tail geometrically.
    double annulus = s_outer - s_inner;
    r.truncation_bound = std::max(2.0 * annulus * std::exp(-10.0), 1e-300);
    return r;
}

Lattice scale_lattice(const Lattice& lat, long lambda) {
    if (lambda < 1) throw InvalidArgument("scale factor must be a positive integer");
    Lattice out = lat;
    out.name = lat.name + ":scaled" + std::to_string(lambda);
    double lam = static_cast<double>(lambda);
    if (lat.has_generator()) {
        out.generator.rows = std::sqrt(lam) * lat.generator.rows;
        out.gram = (lat.gram.cast<long>() * lambda).cast<int>();
    }
    double det_scale = std::pow(lam, lat.modes);
    out.det_abs = static_cast<long>(std::llround(lat.det_abs * det_scale));
    out.stored_dual_min_sq = lat.stored_dual_min_sq / lam;
    return out;
}

namespace {

// Builds the orthogonal map R with R^T Omega R = J for a complex structure J
// (J^2 = -I), by assembling a J-adapted orthonormal basis {x_k, J x_k}.
RMat complex_structure_frame(const RMat& j) {
    const int n = static_cast<int>(j.rows());
    const int modes = n / 2;
    RMat om = symplectic_form(modes);
    std::vector<RVec> basis;
    RMat r = RMat::Zero(n, n);
    for (int k = 0; k < modes; ++k) {
        RVec x;
        bool found = false;
        for (int t = 0; t < n && !found; ++t) {
            x = RVec::Zero(n);
            x[t] = 1.0;
            for (const auto& b : basis) x -= b.dot(x) * b;
            if (x.norm() > 1e-8) {
                x.normalize();
                found = true;
            }
        }
        if (!found) throw NonConvergent("failed to extend complex-structure frame");
        RVec y = j * x;
        basis.push_back(x);
        basis.push_back(y);
        RVec f = RVec::Zero(n);
        f[2 * k] = 1.0;
        RVec g = om * f;
        r += f * x.transpose() + g * y.transpose();
    }
    return r;
}

Lattice finish_catalog(const std::string& name, const RMat& rows, double dual_min_sq,
                       int dual_kissing) {
    Lattice lat;
    lat.name = name;
    lat.generator = GeneratorMatrix::checked(rows);
    lat.modes = lat.generator.modes;
    lat.gram = symplectic_gram(lat.generator);
    lat.det_abs = static_cast<long>(std::llround(std::abs(rows.determinant())));
    lat.stored_dual_min_sq = dual_min_sq;
    lat.stored_dual_kissing = dual_kissing;
    return lat;
}

Lattice metadata_entry(const std::string& name, int modes, long det_abs, double dual_min_sq,
                       int dual_kissing) {
    Lattice lat;
    lat.name = name;
    lat.modes = modes;
    lat.det_abs = det_abs;
    lat.metadata_only = true;
    lat.stored_dual_min_sq = dual_min_sq;
    lat.stored_dual_kissing = dual_kissing;
    return lat;
}

// Antisymmetric, sqrt(2)-orthogonal seed for the two-mode complex structure.
RMat two_mode_structure() {
    RMat a(4, 4);
    a << 0, 1, -1, 0, -1, 0, 0, 1, 1, 0, 0, 1, 0, -1, -1, 0;
    return a / std::sqrt(2.0);
}

RMat four_mode_structure() {
    RMat j = RMat::Zero(8, 8);
    for (int k = 0; k < 4; ++k) {
        j(2 * k, 2 * k + 1) = -1.0;
        j(2 * k + 1, 2 * k) = 1.0;
    }
    return j;
}

}  // namespace

Lattice catalog_lattice(const std::string& name, long dl) {
    if (dl < 1) throw InvalidArgument("logical dimension must be a positive integer");
    if (name == "square") {
        double s = std::sqrt(static_cast<double>(dl));
        RMat m = s * RMat::Identity(2, 2);
        return finish_catalog(dl == 1 ? name : name + ":" + std::to_string(dl), m, 1.0 / dl,
                              4);
    }
    if (name == "hexagonal") {
        double a = std::sqrt(2.0 * dl / std::sqrt(3.0));
        RMat m(2, 2);
        m << a, 0.0, -0.5 * a, 0.5 * std::sqrt(3.0) * a;
        return finish_catalog(dl == 1 ? name : name + ":" + std::to_string(dl), m,
                              2.0 / (std::sqrt(3.0) * dl), 6);
    }
    if (dl != 1) {
        throw UnknownLattice("lattice '" + name + "' does not take a logical dimension");
    }
    if (name == "tesseract") {
        RMat r = complex_structure_frame(two_mode_structure());
        RMat m = std::pow(2.0, 0.25) * r.transpose();
        return finish_catalog(name, m, 1.0 / std::sqrt(2.0), 8);
    }
    if (name == "d4") {
        RMat b(4, 4);
        b << 1, -1, 0, 0, 0, 1, -1, 0, 0, 0, 1, -1, 0, 0, 1, 1;
        RMat r = complex_structure_frame(two_mode_structure());
        RMat m = std::pow(2.0, -0.25) * b * r.transpose();
        return finish_catalog(name, m, std::sqrt(2.0), 24);
    }
    if (name == "e8") {
        RMat b = RMat::Zero(8, 8);
        b(0, 0) = 2.0;
        for (int i = 1; i <= 6; ++i) {
            b(i, i - 1) = -1.0;
            b(i, i) = 1.0;
        }
        b.row(7).setConstant(0.5);
        RMat r = complex_structure_frame(four_mode_structure());
        RMat m = b * r.transpose();
        return finish_catalog(name, m, 2.0, 240);
    }
    if (name == "d6") return metadata_entry(name, 3, 2, 1.0, 12);
    if (name == "leech") return metadata_entry(name, 12, 1, 4.0, 196560);
    throw UnknownLattice("no catalog lattice named '" + name + "'");
}

Lattice product_lattice(const std::vector<Lattice>& factors, const std::string& name) {
    if (factors.empty()) throw InvalidArgument("product of zero lattices");
    int modes = 0;
    for (const auto& f : factors) {
        if (!f.has_generator()) {
            throw UnknownLattice("product factor '" + f.name + "' has no stored generator");
        }
        modes += f.modes;
    }
    RMat rows = RMat::Zero(2 * modes, 2 * modes);
    int off = 0;
    for (const auto& f : factors) {
        rows.block(off, off, 2 * f.modes, 2 * f.modes) = f.generator.rows;
        off += 2 * f.modes;
    }
    Lattice lat;
    lat.name = name;
    lat.generator = GeneratorMatrix::checked(rows);
    lat.modes = modes;
    lat.gram = symplectic_gram(lat.generator);
    long det = 1;
    for (const auto& f : factors) det *= f.det_abs;
    lat.det_abs = det;
    return lat;
}

std::vector<long> canonical_mode_dims(const Lattice& lat) {
    if (!lat.has_generator()) {
        throw UnknownLattice("lattice '" + lat.name + "' has no stored generator");
    }
    const auto& g = lat.gram;
    std::vector<long> dims;
    for (int k = 0; k < lat.modes; ++k) {
        long d = g(2 * k, 2 * k + 1);
        if (d < 1 || g(2 * k + 1, 2 * k) != -d) {
            throw NotCanonicalBasis("Gram block for mode " + std::to_string(k) +
                                    " is not d * omega");
        }
        dims.push_back(d);
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            bool in_block = (i / 2 == j / 2) && (i != j);
            if (!in_block && g(i, j) != 0) {
                throw NotCanonicalBasis("Gram matrix has off-block entry at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return dims;
}

RMat symplectic_factor(const Lattice& lat) {
    auto dims = canonical_mode_dims(lat);
    RVec diag(2 * lat.modes);
    for (int k = 0; k < lat.modes; ++k) {
        double s = std::sqrt(static_cast<double>(dims[k]));
        diag[2 * k] = s;
        diag[2 * k + 1] = s;
    }
    RMat msq_inv = diag.cwiseInverse().asDiagonal();
    RMat s = (msq_inv * lat.generator.rows).transpose();
    RMat om = symplectic_form(lat.modes);
    if ((s * om * s.transpose() - om).cwiseAbs().maxCoeff() > 1e-9) {
        throw NotCanonicalBasis("factor of the generator is not symplectic");
    }
    return s;
}

Lattice lattice_from_json(const std::string& json_text, const std::string& name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("bad lattice JSON: ") + e.what());
    }
    if (!j.contains("modes") || !j.contains("generator")) {
        throw InvalidArgument("lattice JSON needs 'modes' and 'generator'");
    }
    int modes = j.at("modes").get<int>();
    auto rows_j = j.at("generator");
    if (!rows_j.is_array() || static_cast<int>(rows_j.size()) != 2 * modes) {
        throw InvalidArgument("generator must be a 2N x 2N array");
    }
    RMat rows(2 * modes, 2 * modes);
    for (int i = 0; i < 2 * modes; ++i) {
        auto row = rows_j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != 2 * modes) {
            throw InvalidArgument("generator must be a 2N x 2N array");
        }
        for (int k = 0; k < 2 * modes; ++k) rows(i, k) = row.at(k).get<double>();
    }
    Lattice lat;
    lat.name = name;
    lat.generator = GeneratorMatrix::checked(rows);
    lat.modes = modes;
    lat.gram = symplectic_gram(lat.generator);
    lat.det_abs = static_cast<long>(std::llround(std::abs(rows.determinant())));
    return lat;
}

}  // namespace gkp
