#include <doctest.h>

#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <vector>

#include "gkp/errors.hpp"
#include "gkp/fock.hpp"
#include "gkp/lattice.hpp"
#include "gkp/qec.hpp"

using namespace gkp;

namespace {

constexpr double kPi = 3.14159265358979323846;

double floor_rel_error(const Mat& a, const Mat& b) {
    double floor = 1e-9 * b.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            double denom = std::max(std::abs(b(i, j)), floor);
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
        }
    }
    return worst;
}

}  // namespace

TEST_SUITE("qec") {

TEST_CASE("code construction exposes envelope and dimension data") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    CHECK(code.d_l == 2);
    CHECK(code.nbar() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(code.delta == doctest::Approx(std::sqrt(0.5 * std::log1p(1.0 / 5.0))).epsilon(1e-14));
    REQUIRE(code.mode_dims.size() == 1);
    CHECK(code.mode_dims[0] == 2);
    GkpCode tess = GkpCode::from_nbar(catalog_lattice("tesseract"), 3.0);
    CHECK(tess.d_l == 4);
    REQUIRE(tess.mode_dims.size() == 2);
    CHECK(tess.mode_dims[0] == 2);
    CHECK(tess.mode_dims[1] == 2);
}

TEST_CASE("codes with cross-mode Gram entries are rejected") {
    CHECK_THROWS_AS(GkpCode::from_nbar(catalog_lattice("d4"), 4.0), NotCanonicalBasis);
}

TEST_CASE("thermal parameters reduce to their closed forms") {
    double ndel = 4.0;
    ThermalParams lp = thermal_params(ChannelSpec::loss(0.15), ndel);
    double gn = 0.15 * ndel;
    CHECK(lp.t == doctest::Approx(gn / (gn + 1.0)).epsilon(1e-15));
    CHECK(lp.pref0 == doctest::Approx(1.0 / (gn + 1.0)).epsilon(1e-15));
    CHECK(lp.c == doctest::Approx(std::sqrt((ndel + 1.0) / (gn + 1.0))).epsilon(1e-15));
    CHECK(lp.gwt == doctest::Approx(0.5 * kPi * 0.85 * ndel / (gn + 1.0)).epsilon(1e-15));
    ThermalParams ap = thermal_params(ChannelSpec::amp(1.3), ndel);
    double gm = 0.3 * (ndel + 1.0);
    CHECK(ap.t == doctest::Approx(gm / (gm + 1.0)).epsilon(1e-15));
    CHECK(ap.pref0 == doctest::Approx(1.0 / (gm + 1.0)).epsilon(1e-15));
    CHECK(ap.c == doctest::Approx(std::sqrt(ndel / (gm + 1.0))).epsilon(1e-15));
    double csq = ndel / (gm + 1.0);
    CHECK(ap.gwt ==
          doctest::Approx(0.5 * kPi * ((2.0 * ndel + 1.0 + gm) / (gm + 1.0) - csq)).epsilon(1e-15));
}

TEST_CASE("codeword norm sums are near one and ordered") {
    RMat s2 = RMat::Identity(2, 2);
    double s0 = codeword_norm_sum(2, 0, s2, 5.0);
    double s1 = codeword_norm_sum(2, 1, s2, 5.0);
    CHECK(s0 > 0.9);
    CHECK(s0 < 1.1);
    CHECK(s1 > 0.9);
    CHECK(s1 < 1.1);
    // The mu = 0 word picks up the positive nearest-shell contribution.
    CHECK(s0 > s1);
}

TEST_CASE("default jump cutoff grows with envelope energy") {
    Lattice sq = catalog_lattice("square", 2);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    int small = default_jump_cutoff(GkpCode::from_nbar(sq, 2.0), ch);
    int large = default_jump_cutoff(GkpCode::from_nbar(sq, 20.0), ch);
    CHECK(large > small);
}

TEST_CASE("closed-form matrix entries match frozen brute-force references") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    QecMatrix m = analytic_qec_matrix(code, ChannelSpec::loss(0.1), 25);
    REQUIRE(m.data.rows() == 52);
    struct Pin {
        int r, c;
        double v;
    };
    const Pin pins[] = {
        {0, 0, 6.718899227464591e-01},   {0, 2, -8.084813829896403e-03},
        {0, 4, 4.888087486826979e-03},   {0, 26, 5.461100191563362e-03},
        {27, 1, -9.617334738616690e-03}, {30, 26, -4.891527902152910e-03},
    };
    for (const Pin& p : pins) {
        CAPTURE(p.r);
        CAPTURE(p.c);
        CHECK(std::abs(m.data(p.r, p.c) - p.v) < 1e-9);
        CHECK(std::abs(m.data(p.r, p.c).imag()) < 1e-12);
    }
}

TEST_CASE("closed-form matrix is hermitian with unit-trace thermal diagonal") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 3), 4.0);
    for (ChannelSpec ch : {ChannelSpec::loss(0.12), ChannelSpec::amp(1.25)}) {
        CAPTURE(ch.name());
        QecMatrix m = analytic_qec_matrix(code, ch, 12);
        CHECK((m.data - m.data.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        // Diagonal entries are real populations in [0, 1].
        for (Eigen::Index i = 0; i < m.data.rows(); ++i) {
            CHECK(m.data(i, i).real() > -1e-12);
            CHECK(m.data(i, i).real() < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("hexagonal closed-form entries match frozen references") {
    struct Pin {
        int r, c;
        cplx v;
    };
    {
        GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 2), 4.0);
        QecMatrix ml = analytic_qec_matrix(code, ChannelSpec::loss(0.1), 4);
        const Pin loss_pins[] = {
            {0, 0, cplx(7.193135948747570e-01, 0.0)},
            {0, 2, cplx(-3.556773528317571e-03, -6.160512462062052e-03)},
            {1, 6, cplx(-8.511149724389964e-03, 8.511149724389960e-03)},
        };
        for (const Pin& p : loss_pins) {
            CAPTURE(p.r);
            CAPTURE(p.c);
            CHECK(std::abs(ml.data(p.r, p.c) - p.v) < 1e-12);
        }
        QecMatrix ma = analytic_qec_matrix(code, ChannelSpec::amp(1.3), 4);
        const Pin amp_pins[] = {
            {0, 0, cplx(4.174903209906747e-01, 0.0)},
            {0, 2, cplx(-1.092897176038365e-02, 1.892953436346996e-02)},
            {1, 6, cplx(-2.020159614585100e-02, 2.020159614585101e-02)},
        };
        for (const Pin& p : amp_pins) {
            CAPTURE(p.r);
            CAPTURE(p.c);
            CHECK(std::abs(ma.data(p.r, p.c) - p.v) < 1e-12);
        }
    }
    {
        GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 3), 4.0);
        QecMatrix ml = analytic_qec_matrix(code, ChannelSpec::loss(0.1), 4);
        const Pin loss_pins[] = {
            {0, 0, cplx(7.426788773976286e-01, 0.0)},
            {0, 2, cplx(-1.506432151194438e-02, -2.609217017460316e-02)},
            {1, 6, cplx(-2.469782773877786e-02, 1.429868782650727e-02)},
            {2, 8, cplx(-1.069573844214900e-03, 4.501255461260631e-05)},
        };
        for (const Pin& p : loss_pins) {
            CAPTURE(p.r);
            CAPTURE(p.c);
            CHECK(std::abs(ml.data(p.r, p.c) - p.v) < 1e-12);
        }
        QecMatrix ma = analytic_qec_matrix(code, ChannelSpec::amp(1.3), 4);
        const Pin amp_pins[] = {
            {0, 0, cplx(4.591874235362318e-01, 0.0)},
            {0, 2, cplx(-2.573997878234459e-02, 4.458282443746563e-02)},
            {1, 6, cplx(-2.624815614433318e-02, 1.573504783407226e-02)},
            {2, 8, cplx(3.390543915114086e-03, -6.009299235239969e-03)},
        };
        for (const Pin& p : amp_pins) {
            CAPTURE(p.r);
            CAPTURE(p.c);
            CHECK(std::abs(ma.data(p.r, p.c) - p.v) < 1e-12);
        }
    }
}

TEST_CASE("fock-basis oracle agrees with the closed form on a reduced grid") {
    {
        GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 2.0);
        ChannelSpec ch = ChannelSpec::loss(0.1);
        QecMatrix an = analytic_qec_matrix(code, ch, 12);
        QecMatrix orc = oracle_qec_matrix(code, ch, 70, 12);
        CHECK(floor_rel_error(an.data, orc.data) < 1e-4);
    }
    {
        GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 2), 2.0);
        ChannelSpec ch = ChannelSpec::amp(1.2);
        QecMatrix an = analytic_qec_matrix(code, ch, 10);
        QecMatrix orc = oracle_qec_matrix(code, ch, 100, 10);
        CHECK(floor_rel_error(an.data, orc.data) < 1e-4);
    }
}

TEST_CASE("fock-basis oracle reproduces frozen high-accuracy entries") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    QecMatrix orc = oracle_qec_matrix(code, ChannelSpec::loss(0.1), 160, 25, 1e-2);
    struct Pin {
        int r, c;
        double v;
    };
    const Pin pins[] = {
        {0, 0, 6.718899227464591e-01},   {0, 2, -8.084813829896403e-03},
        {0, 4, 4.888087486826979e-03},   {0, 26, 5.461100191563362e-03},
        {27, 1, -9.617334738616690e-03}, {30, 26, -4.891527902152910e-03},
    };
    for (const Pin& p : pins) {
        CAPTURE(p.r);
        CAPTURE(p.c);
        CHECK(orc.data(p.r, p.c).real() == doctest::Approx(p.v).epsilon(1e-9));
    }
}

TEST_CASE("two-mode composite factorizes over independent single modes") {
    const double nbar = 3.0;
    const int lj = 6;
    ChannelSpec ch = ChannelSpec::loss(0.1);
    Lattice prod =
        product_lattice({catalog_lattice("square", 2), catalog_lattice("square", 3)}, "s2xs3");
    GkpCode code = GkpCode::from_nbar(prod, nbar);
    QecMatrix mp = analytic_qec_matrix(code, ch, lj);
    QecMatrix m1 = analytic_qec_matrix(GkpCode::from_nbar(catalog_lattice("square", 2), nbar), ch, lj);
    QecMatrix m2 = analytic_qec_matrix(GkpCode::from_nbar(catalog_lattice("square", 3), nbar), ch, lj);
    const int lp1 = lj + 1;
    const long lsz = static_cast<long>(lp1) * lp1;
    REQUIRE(mp.data.rows() == 6 * lsz);
    for (long mu1 = 0; mu1 < 2; ++mu1) {
        for (long mu2 = 0; mu2 < 3; ++mu2) {
            for (long nu1 = 0; nu1 < 2; ++nu1) {
                for (long nu2 = 0; nu2 < 3; ++nu2) {
                    for (int l1 : {0, 2, 5}) {
                        for (int l2 : {1, 3}) {
                            for (int k1 : {0, 4}) {
                                for (int k2 : {2, 6}) {
                                    long r = (mu1 * 3 + mu2) * lsz + l1 * lp1 + l2;
                                    long c = (nu1 * 3 + nu2) * lsz + k1 * lp1 + k2;
                                    cplx want = m1.data(mu1 * lp1 + l1, nu1 * lp1 + k1) *
                                                m2.data(mu2 * lp1 + l2, nu2 * lp1 + k2);
                                    CHECK(std::abs(mp.data(r, c) - want) < 1e-14);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("two-mode oracle and closed form agree for the four-dimensional code") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("tesseract"), 2.0);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    QecMatrix an = analytic_qec_matrix(code, ch, 8);
    QecMatrix orc = oracle_qec_matrix(code, ch, 70, 8);
    CHECK(an.data.rows() == 4 * 81);
    CHECK(floor_rel_error(an.data, orc.data) < 1e-4);
}

TEST_CASE("oracle validates its truncation") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    CHECK_THROWS_AS(oracle_qec_matrix(code, ChannelSpec::loss(0.1), 80, 12), CutoffTooSmall);
}

TEST_CASE("displaced overlaps reproduce the logical phase flip") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    Vec alpha(1);
    alpha[0] = cplx(0.0, std::sqrt(0.5 * kPi));
    cplx z0 = displaced_overlap(code, 0, 0, alpha);
    cplx z1 = displaced_overlap(code, 1, 1, alpha);
    CHECK(z0.real() == doctest::Approx(9.312820169e-01).epsilon(1e-9));
    CHECK(z1.real() == doctest::Approx(-9.306212279e-01).epsilon(1e-9));
    CHECK(std::abs(z0.imag()) < 1e-12);
    CHECK(std::abs(z1.imag()) < 1e-12);
    Vec bad(2);
    bad.setZero();
    CHECK_THROWS_AS(displaced_overlap(code, 0, 0, bad), InvalidArgument);
}

TEST_CASE("correctable split isolates the thermal diagonal") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 5.0);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    QecMatrix m = analytic_qec_matrix(code, ch, 20);
    CorrectableSplit cs = split_correctable(m, ch, code);
    ThermalParams tp = thermal_params(ch, code.n_delta());
    REQUIRE(cs.thermal_diag.size() == 21);
    for (int l = 0; l <= 20; ++l) {
        CHECK(cs.thermal_diag[l] ==
              doctest::Approx((1.0 - tp.t) * std::pow(tp.t, l)).epsilon(1e-13));
    }
    CHECK(cs.thermal_diag.sum() == doctest::Approx(cs.trace_d).epsilon(1e-13));
    CHECK(cs.trace_d + cs.trace_deficit == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cs.trace_deficit > 0.0);
    CHECK(cs.trace_deficit < 1e-6);
    // Residual diagonal plus thermal diagonal restores the matrix diagonal.
    for (long mu = 0; mu < 2; ++mu) {
        for (int l = 0; l <= 20; ++l) {
            long i = mu * 21 + l;
            CHECK(std::abs(cs.residual(i, i) + cs.thermal_diag[l] - m.data(i, i)) < 1e-15);
        }
    }
}

TEST_CASE("matrix serialization round-trips through json") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 2), 3.0);
    QecMatrix m = analytic_qec_matrix(code, ChannelSpec::loss(0.2), 5);
    nlohmann::json j = nlohmann::json::parse(qec_matrix_json(m));
    CHECK(j["dims"]["d_l"] == 2);
    CHECK(j["dims"]["l_jump"] == 5);
    CHECK(j["dims"]["modes"] == 1);
    CHECK(j["dims"]["mode_dims"][0] == 2);
    REQUIRE(j["real"].size() == 12);
    REQUIRE(j["imag"].size() == 12);
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 12; ++c) {
            cplx back(j["real"][r][c].get<double>(), j["imag"][r][c].get<double>());
            CHECK(std::abs(back - m.data(r, c)) < 1e-15);
        }
    }
}

}  // TEST_SUITE
