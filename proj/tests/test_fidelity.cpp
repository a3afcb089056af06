#include <doctest.h>

#include <cmath>
#include <vector>

#include "gkp/errors.hpp"
#include "gkp/fidelity.hpp"
#include "gkp/fock.hpp"
#include "gkp/lattice.hpp"
#include "gkp/qec.hpp"

using namespace gkp;

TEST_SUITE("fidelity") {

TEST_CASE("exact lattice-sum infidelity matches frozen references") {
    struct Pin {
        const char* lattice;
        long dl;
        bool amp;
        double strength;
        double nbar;
        double fin, lead, closed;
    };
    const Pin pins[] = {
        {"hexagonal", 2, false, 0.1, 5.0, 5.746481305473e-04, 5.746503444862e-04,
         5.746438473512e-04},
        {"hexagonal", 2, false, 0.2, 8.0, 6.232483767828e-03, 6.232345988881e-03,
         6.232345988758e-03},
        {"square", 2, false, 0.2, 5.0, 1.492068978781e-02, 1.468095427392e-02,
         1.468088793892e-02},
        {"square", 2, true, 1.5, 5.0, 2.434487731748e-02, 2.377398392390e-02,
         2.377391530998e-02},
        {"square", 2, false, 0.25, 5.0, 3.284926089663e-02, 3.175849195301e-02,
         3.175842133800e-02},
    };
    for (const Pin& p : pins) {
        CAPTURE(p.lattice);
        CAPTURE(p.strength);
        Lattice lat = catalog_lattice(p.lattice, p.dl);
        GkpCode code = GkpCode::from_nbar(lat, p.nbar);
        ChannelSpec ch = p.amp ? ChannelSpec::amp(p.strength) : ChannelSpec::loss(p.strength);
        FidelityReport fin = finite_energy_exact_infidelity(code, ch);
        FidelityReport lead = leading_order_infidelity(code, ch);
        FidelityReport closed =
            leading_order_closed_form(shortest_vectors(lat, Which::dual), ch, code.n_delta());
        CHECK(fin.infidelity == doctest::Approx(p.fin).epsilon(1e-9));
        CHECK(lead.infidelity == doctest::Approx(p.lead).epsilon(1e-9));
        CHECK(closed.infidelity == doctest::Approx(p.closed).epsilon(1e-9));
        // Shell restriction and the closed form are two routes to one number.
        CHECK(lead.infidelity == doctest::Approx(closed.infidelity).epsilon(1e-4));
        CHECK(fin.method == "finite_exact");
        CHECK(lead.method == "leading");
        CHECK(closed.method == "leading_closed");
    }
}

TEST_CASE("shell-only switch reproduces the leading-order entry point") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("hexagonal", 3), 6.0);
    ChannelSpec ch = ChannelSpec::loss(0.15);
    FidelityReport a = finite_energy_exact_infidelity(code, ch, true);
    FidelityReport b = leading_order_infidelity(code, ch);
    CHECK(a.infidelity == b.infidelity);
}

TEST_CASE("exact engine rejects multimode codes") {
    GkpCode tess = GkpCode::from_nbar(catalog_lattice("tesseract"), 3.0);
    CHECK_THROWS_AS(finite_energy_exact_infidelity(tess, ChannelSpec::loss(0.1)),
                    InvalidArgument);
}

TEST_CASE("recovery routes agree at moderate envelope energy") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 10.0);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    QecMatrix m = analytic_qec_matrix(code, ch, 25);
    CorrectableSplit cs = split_correctable(m, ch, code);
    FidelityReport pert = perturbative_infidelity(m, cs);
    FidelityReport fin = finite_energy_exact_infidelity(code, ch);
    FidelityReport nopt = near_optimal_infidelity(m);
    CHECK(pert.infidelity == doctest::Approx(1.280831859056e-04).epsilon(1e-9));
    CHECK(fin.infidelity == doctest::Approx(1.280832291188e-04).epsilon(1e-9));
    CHECK(nopt.infidelity == doctest::Approx(1.280996393574e-04).epsilon(1e-9));
    CHECK(pert.infidelity == doctest::Approx(fin.infidelity).epsilon(1e-5));
    // The exact recovery differs from the first-order value at second order.
    CHECK(std::abs(nopt.infidelity - fin.infidelity) <
          10.0 * std::pow(fin.infidelity, 1.5));
    CHECK(nopt.method == "exact_sqrt");
    CHECK(pert.method == "perturbative");
}

TEST_CASE("trivial code recovers perfectly under the exact recovery") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 1), 4.0);
    QecMatrix m = analytic_qec_matrix(code, ChannelSpec::loss(0.1), 30);
    FidelityReport r = near_optimal_infidelity(m);
    CHECK(std::abs(r.infidelity) < 1e-9);
}

TEST_CASE("raw-codeword recovery matches the closed-form route") {
    double delta = delta_from_mean_photon(3.0);
    std::vector<Vec> words;
    for (long mu = 0; mu < 2; ++mu) {
        words.push_back(gkp_codeword_fock(2, mu, delta, 120).amplitudes);
    }
    ChannelSpec ch = ChannelSpec::loss(0.1);
    FidelityReport tc = transpose_channel_infidelity(words, ch, 15);
    CHECK(tc.method == "tc_numeric");
    CHECK(tc.infidelity == doctest::Approx(4.684180114141e-03).epsilon(1e-8));
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 3.0);
    FidelityReport nopt = near_optimal_infidelity(analytic_qec_matrix(code, ch, 15));
    CHECK(nopt.infidelity == doctest::Approx(4.699584945408e-03).epsilon(1e-8));
    CHECK(std::abs(tc.infidelity - nopt.infidelity) < 2e-5);
}

TEST_CASE("raw-codeword recovery rejects dependent inputs") {
    Vec w = Vec::Zero(40);
    w[0] = 1.0;
    std::vector<Vec> words = {w, w};
    CHECK_THROWS_AS(transpose_channel_infidelity(words, ChannelSpec::loss(0.1), 5),
                    RankDeficientCodespace);
    Vec v = Vec::Zero(30);
    v[1] = 1.0;
    std::vector<Vec> bad = {w, v};
    CHECK_THROWS_AS(transpose_channel_infidelity(bad, ChannelSpec::loss(0.1), 5),
                    InvalidArgument);
    CHECK_THROWS_AS(transpose_channel_infidelity({}, ChannelSpec::loss(0.1), 5),
                    InvalidArgument);
}

TEST_CASE("ideal-code bound matches frozen references and flags vacuity") {
    Lattice sq2 = catalog_lattice("square", 2);
    FidelityReport b1 = infinite_energy_bound(sq2, ChannelSpec::loss(0.1));
    CHECK(b1.infidelity == doctest::Approx(7.249477771473e-07).epsilon(1e-10));
    CHECK_FALSE(b1.vacuous);
    CHECK(b1.method == "inf_bound");
    FidelityReport b2 = infinite_energy_bound(sq2, ChannelSpec::loss(0.6));
    CHECK(b2.infidelity == doctest::Approx(5.002421180899e-01).epsilon(1e-10));
    CHECK_FALSE(b2.vacuous);
    FidelityReport b3 = infinite_energy_bound(sq2, ChannelSpec::loss(0.8));
    CHECK(b3.infidelity == doctest::Approx(1.75).epsilon(1e-9));
    CHECK(b3.vacuous);
}

TEST_CASE("ideal-code bound depends on the channel only through its quality") {
    // Loss at gamma = 0.25 and gain G = 1.5 share K = 3.
    Lattice hex2 = catalog_lattice("hexagonal", 2);
    FidelityReport lossb = infinite_energy_bound(hex2, ChannelSpec::loss(0.25));
    FidelityReport ampb = infinite_energy_bound(hex2, ChannelSpec::amp(1.5));
    CHECK(lossb.infidelity == doctest::Approx(ampb.infidelity).epsilon(1e-13));
}

TEST_CASE("scaled self-dual bound follows its closed form") {
    FidelityReport r = selfdual_scaled_bound(2, 3, ChannelSpec::loss(0.1));
    CHECK(r.infidelity == doctest::Approx(0.25 * std::pow(2.0 / 9.0, 3)).epsilon(1e-14));
    CHECK_FALSE(r.vacuous);
    CHECK(r.method == "selfdual_bound");
    FidelityReport v = selfdual_scaled_bound(12, 1, ChannelSpec::loss(0.5));
    CHECK(v.vacuous);
    CHECK_THROWS_AS(selfdual_scaled_bound(0, 1, ChannelSpec::loss(0.1)), InvalidArgument);
}

TEST_CASE("perturbative split validates the layout") {
    GkpCode code = GkpCode::from_nbar(catalog_lattice("square", 2), 4.0);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    QecMatrix m = analytic_qec_matrix(code, ch, 10);
    CorrectableSplit cs = split_correctable(m, ch, code);
    cs.thermal_diag = RVec::Ones(4);
    CHECK_THROWS_AS(perturbative_infidelity(m, cs), InvalidArgument);
}

TEST_CASE("finite-energy exact value tracks the ideal bound at high energy") {
    // At nbar = 40 the envelope correction is still visible but bounded.
    Lattice sq2 = catalog_lattice("square", 2);
    ChannelSpec ch = ChannelSpec::loss(0.1);
    double ideal = infinite_energy_bound(sq2, ch).infidelity;
    double fin40 = finite_energy_exact_infidelity(GkpCode::from_nbar(sq2, 40.0), ch).infidelity;
    double fin160 =
        finite_energy_exact_infidelity(GkpCode::from_nbar(sq2, 160.0), ch).infidelity;
    CHECK(fin40 > ideal);
    CHECK(fin160 > ideal);
    // Monotone approach from above as the envelope widens.
    CHECK(fin160 < fin40);
    CHECK(fin160 / ideal < 2.0);
}

}  // TEST_SUITE
