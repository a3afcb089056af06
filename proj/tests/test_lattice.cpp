#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gkp/errors.hpp"
#include "gkp/lattice.hpp"

using namespace gkp;

namespace {

constexpr double kPi = 3.14159265358979323846;

double theta_direct(const Lattice& lat, Which which, double c, int window) {
    // Brute-force double loop over integer coefficients, no shell logic.
    const RMat basis = which == Which::dual ? dual_generator(lat).rows : lat.generator.rows;
    double sum = 0.0;
    const int n = static_cast<int>(basis.rows());
    REQUIRE(n == 2);
    for (int i = -window; i <= window; ++i) {
        for (int j = -window; j <= window; ++j) {
            if (i == 0 && j == 0) continue;
            RVec v = i * basis.row(0).transpose() + j * basis.row(1).transpose();
            sum += std::exp(-c * v.squaredNorm());
        }
    }
    return sum;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("symplectic form is block diagonal omega") {
    RMat omega = symplectic_form(2);
    CHECK(omega.rows() == 4);
    CHECK(omega(0, 1) == 1.0);
    CHECK(omega(1, 0) == -1.0);
    CHECK(omega(0, 2) == 0.0);
    CHECK((omega + omega.transpose()).norm() == 0.0);
}

TEST_CASE("catalog matches the reference shortest-vector table") {
    struct Row {
        const char* name;
        long dl;
        int modes;
        double dual_min_sq;
        int kissing;
        long det;
    };
    const Row rows[] = {
        {"square", 1, 1, 1.0, 4, 1},
        {"hexagonal", 1, 1, 2.0 / std::sqrt(3.0), 6, 1},
        {"tesseract", 1, 2, 1.0 / std::sqrt(2.0), 8, 4},
        {"d4", 1, 2, std::sqrt(2.0), 24, 1},
        {"d6", 1, 3, 1.0, 12, 4},
        {"e8", 1, 4, 2.0, 240, 1},
    };
    for (const Row& r : rows) {
        CAPTURE(r.name);
        Lattice lat = catalog_lattice(r.name, r.dl);
        CHECK(lat.modes == r.modes);
        CHECK(lat.det_abs == r.det);
        ShortestVectorReport sv = shortest_vectors(lat, Which::dual);
        CHECK(sv.enumerated);
        CHECK(sv.min_norm_sq == doctest::Approx(r.dual_min_sq).epsilon(1e-9));
        CHECK(sv.kissing == r.kissing);
    }
}

TEST_CASE("metadata-only catalog entry serves stored constants") {
    Lattice leech = catalog_lattice("leech");
    CHECK(leech.modes == 12);
    CHECK(leech.det_abs == 1);
    CHECK_FALSE(leech.has_generator());
    ShortestVectorReport sv = shortest_vectors(leech, Which::dual);
    CHECK_FALSE(sv.enumerated);
    CHECK(sv.min_norm_sq == doctest::Approx(4.0));
    CHECK(sv.kissing == 196560);
}

TEST_CASE("unknown catalog name throws") {
    CHECK_THROWS_AS(catalog_lattice("nope"), UnknownLattice);
    CHECK_THROWS_AS(catalog_lattice("leech", 3), InvalidArgument);
}

TEST_CASE("shortest vectors come closed under negation") {
    ShortestVectorReport sv = shortest_vectors(catalog_lattice("hexagonal", 1), Which::dual);
    CHECK(sv.vectors.size() == 6);
    for (const RVec& v : sv.vectors) {
        bool found = false;
        for (const RVec& w : sv.vectors) {
            if ((v + w).norm() < 1e-12) found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("dual generator has unit symplectic pairing with the primal") {
    for (const char* name : {"square", "hexagonal", "d4", "e8"}) {
        CAPTURE(name);
        Lattice lat = catalog_lattice(name, 1);
        GeneratorMatrix dual = dual_generator(lat);
        RMat pairing = lat.generator.rows * symplectic_form(lat.modes) * dual.rows.transpose();
        for (int i = 0; i < pairing.rows(); ++i) {
            for (int j = 0; j < pairing.cols(); ++j) {
                CHECK(std::abs(pairing(i, j) - std::round(pairing(i, j))) < 1e-12);
            }
        }
    }
}

TEST_CASE("dual of the dual restores the primal geometry") {
    Lattice hex = catalog_lattice("hexagonal", 2);
    Lattice dual_lat = hex;
    dual_lat.generator = dual_generator(hex);
    Lattice dd = hex;
    dd.generator = dual_generator(dual_lat);
    // The two generators span the same lattice, so primal geometry agrees.
    ShortestVectorReport a = shortest_vectors(hex, Which::primal);
    ShortestVectorReport b = shortest_vectors(dd, Which::primal);
    CHECK(a.min_norm_sq == doctest::Approx(b.min_norm_sq).epsilon(1e-12));
    CHECK(a.kissing == b.kissing);
}

TEST_CASE("scaling multiplies the Gram matrix and determinant") {
    Lattice sq = catalog_lattice("square", 2);
    Lattice s3 = scale_lattice(sq, 3);
    CHECK(s3.det_abs == 6);
    CHECK((s3.gram - 3 * sq.gram).cwiseAbs().maxCoeff() == 0);
    ShortestVectorReport sv = shortest_vectors(s3, Which::primal);
    ShortestVectorReport sv0 = shortest_vectors(sq, Which::primal);
    CHECK(sv.min_norm_sq == doctest::Approx(3.0 * sv0.min_norm_sq).epsilon(1e-12));
}

TEST_CASE("product lattice multiplies dimensions and stacks blocks") {
    Lattice p =
        product_lattice({catalog_lattice("square", 2), catalog_lattice("hexagonal", 3)}, "mix");
    CHECK(p.modes == 2);
    CHECK(p.det_abs == 6);
    std::vector<long> dims = canonical_mode_dims(p);
    REQUIRE(dims.size() == 2);
    CHECK(dims[0] == 2);
    CHECK(dims[1] == 3);
    CHECK(p.generator.rows(0, 2) == 0.0);
    CHECK(p.generator.rows(2, 0) == 0.0);
}

TEST_CASE("symplectic factor reconstructs the generator") {
    for (const char* name : {"square", "hexagonal"}) {
        for (long dl : {1L, 2L, 3L}) {
            CAPTURE(name);
            CAPTURE(dl);
            Lattice lat = catalog_lattice(name, dl);
            RMat s = symplectic_factor(lat);
            RMat omega = symplectic_form(lat.modes);
            CHECK((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() < 1e-12);
            RMat msq = RMat::Zero(2, 2);
            msq(0, 0) = msq(1, 1) = std::sqrt(static_cast<double>(dl));
            CHECK((msq * s.transpose() - lat.generator.rows).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("symplectic factor rejects a cross-mode Gram form") {
    RMat rows(4, 4);
    rows << 1, 0, 1, 0,
            0, 1, 0, 0,
            0, 0, 1, 0,
            0, 0, 0, 1;
    Lattice sheared;
    sheared.name = "sheared";
    sheared.modes = 2;
    sheared.generator = GeneratorMatrix::checked(rows);
    sheared.gram = symplectic_gram(sheared.generator);
    sheared.det_abs = logical_dimension(sheared);
    CHECK_THROWS_AS(symplectic_factor(sheared), NotCanonicalBasis);
}

TEST_CASE("json parsing validates symplectic integrality") {
    CHECK_THROWS_AS(lattice_from_json(R"({"modes":1,"generator":[[1.3,0],[0,1.0]]})"),
                    NotSymplecticallyIntegral);
    CHECK_THROWS_AS(lattice_from_json(R"({"modes":1,"generator":[[1,0],[2,0]]})"),
                    SingularGenerator);
    Lattice sq2 = lattice_from_json(
        R"({"modes":1,"generator":[[1.4142135623730951,0],[0,1.4142135623730951]]})");
    CHECK(sq2.det_abs == 2);
    CHECK(sq2.modes == 1);
}

TEST_CASE("theta sum matches a brute-force double loop") {
    Lattice sq = catalog_lattice("square", 1);
    ThetaResult th = theta_sum(sq, Which::primal, kPi);
    CHECK(th.value == doctest::Approx(1.803405990160963e-01).epsilon(1e-12));
    CHECK(th.value == doctest::Approx(theta_direct(sq, Which::primal, kPi, 8)).epsilon(1e-12));
    Lattice hex = catalog_lattice("hexagonal", 2);
    for (Which w : {Which::primal, Which::dual}) {
        ThetaResult t = theta_sum(hex, w, 2.7);
        CHECK(t.value == doctest::Approx(theta_direct(hex, w, 2.7, 10)).epsilon(1e-10));
    }
}

TEST_CASE("theta truncation bound shrinks with tolerance") {
    Lattice hex = catalog_lattice("hexagonal", 1);
    ThetaResult loose = theta_sum(hex, Which::dual, 1.0, 1e-6);
    ThetaResult tight = theta_sum(hex, Which::dual, 1.0, 1e-12);
    CHECK(tight.truncation_bound <= loose.truncation_bound);
    CHECK(std::abs(loose.value - tight.value) <= loose.truncation_bound + 1e-15);
}

TEST_CASE("point enumeration respects its budget") {
    Lattice sq = catalog_lattice("square", 1);
    long count = 0;
    for_each_lattice_point(sq.generator.rows, 4.0,
                           [&](const Eigen::VectorXi&, double) { ++count; });
    CHECK(count > 0);
    CHECK_THROWS_AS(for_each_lattice_point(
                        sq.generator.rows, 1e4,
                        [&](const Eigen::VectorXi&, double) {}, 100),
                    EnumerationBudgetExceeded);
}

TEST_CASE("generator validation rejects bad shapes") {
    RMat bad(2, 3);
    bad.setZero();
    CHECK_THROWS_AS(GeneratorMatrix::checked(bad), InvalidArgument);
}

}  // TEST_SUITE
