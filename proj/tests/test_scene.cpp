#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "skg/scene.hpp"

using namespace skg;

TEST_CASE("path_loss_factor") {
    CHECK(path_loss_factor(1.0, 3.67, 30.0) == doctest::Approx(1.0e-3).epsilon(1e-12));
    CHECK(path_loss_factor(1.0, 2.2, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // high-precision reference: 1e-3 / 30^3.67
    const double ref = 1.0e-3 / std::pow(30.0, 3.67);
    CHECK(path_loss_factor(30.0, 3.67, 30.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(ref == doctest::Approx(3.786e-9).epsilon(1e-3));

    CHECK_THROWS_AS(path_loss_factor(0.0, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(path_loss_factor(-1.0, 2.0, 0.0), DomainError);
}

TEST_CASE("path_loss_factor is strictly decreasing in d and alpha beyond 1 m") {
    double prev = path_loss_factor(1.5, 3.0, 10.0);
    for (double d = 2.0; d < 100.0; d *= 1.5) {
        const double cur = path_loss_factor(d, 3.0, 10.0);
        CHECK(cur < prev);
        prev = cur;
    }
    double prev_a = path_loss_factor(10.0, 1.0, 10.0);
    for (double a = 1.5; a < 5.0; a += 0.5) {
        const double cur = path_loss_factor(10.0, a, 10.0);
        CHECK(cur < prev_a);
        prev_a = cur;
    }
}

TEST_CASE("pearson_correlation") {
    CHECK(pearson_correlation(0.0, 0.1) == 1.0);
    const double lambda = 0.12;
    // independent Bessel evaluation
    const double at_half = std::pow(std::cyl_bessel_j(0.0, 3.14159265358979323846), 2.0);
    CHECK(pearson_correlation(lambda / 2.0, lambda) == doctest::Approx(at_half).epsilon(1e-10));
    CHECK(at_half == doctest::Approx(0.0926).epsilon(2e-3));
    const double at_tenth = std::pow(std::cyl_bessel_j(0.0, 0.6283185307179586), 2.0);
    CHECK(pearson_correlation(lambda / 10.0, lambda) ==
          doctest::Approx(at_tenth).epsilon(1e-10));
    CHECK(at_tenth == doctest::Approx(0.817).epsilon(2e-3));

    CHECK_THROWS_AS(pearson_correlation(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(pearson_correlation(0.1, 0.0), DomainError);
}

TEST_CASE("pearson_correlation decays below 0.2 past 0.6 wavelengths") {
    for (double d = 0.6; d <= 5.0; d += 0.01) {
        CHECK(pearson_correlation(d, 1.0) <= 0.2);
    }
}

TEST_CASE("frobenius_norm_sq") {
    CHECK(frobenius_norm_sq(Eigen::MatrixXd::Identity(7, 7)) == doctest::Approx(7.0));
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.6366, 0.6366, 1.0;
    CHECK(frobenius_norm_sq(m) == doctest::Approx(2.0 + 2.0 * 0.6366 * 0.6366).epsilon(1e-12));
    CHECK(frobenius_norm_sq(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
}

TEST_CASE("planar layout geometry") {
    const RisLayout layout = RisLayout::planar(4, 2, 0.05, {1.0, 2.0, 3.0});
    REQUIRE(layout.size() == 8);
    REQUIRE(int(layout.element_positions.size()) == 8);
    // row-major: second element is one column step along y
    CHECK(layout.element_positions[1].y - layout.element_positions[0].y ==
          doctest::Approx(0.05));
    CHECK(layout.element_positions[4].z - layout.element_positions[0].z ==
          doctest::Approx(0.05));
    // centered on the origin
    double cy = 0.0, cz = 0.0;
    for (const Position& p : layout.element_positions) {
        CHECK(p.x == 1.0);
        cy += p.y;
        cz += p.z;
    }
    CHECK(cy / 8.0 == doctest::Approx(2.0));
    CHECK(cz / 8.0 == doctest::Approx(3.0));

    CHECK_THROWS_AS(RisLayout::planar(0, 2, 0.05, {}), ConfigError);
    CHECK_THROWS_AS(RisLayout::planar(2, 2, 0.0, {}), ConfigError);
}

TEST_CASE("build_ris_correlation entries and invariants") {
    const double lambda = 0.1;
    const RisLayout layout = RisLayout::planar(4, 3, lambda / 4.0, {0, 0, 0});
    const SpatialCorrelation corr = build_ris_correlation(layout, lambda, 0.3);
    const int n = layout.size();
    REQUIRE(corr.matrix.rows() == n);
    CHECK(corr.rho == 0.3);
    for (int i = 0; i < n; ++i) {
        CHECK(corr.matrix(i, i) == 1.0);
    }
    CHECK((corr.matrix - corr.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // adjacent elements at lambda/4: sinc(pi/2) = 2/pi
    CHECK(corr.matrix(0, 1) == doctest::Approx(2.0 / 3.14159265358979323846).epsilon(1e-12));
    // elements exactly lambda/2 apart
    CHECK(std::fabs(corr.matrix(0, 2)) < 1e-15);
    CHECK(corr.frob_sq == doctest::Approx(frobenius_norm_sq(corr.matrix)));
    CHECK(corr.frob_sq >= double(n));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr.matrix, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("half-wavelength grid on a line gives the identity correlation") {
    const double lambda = 0.2;
    const RisLayout layout = RisLayout::planar(6, 1, lambda / 2.0, {0, 0, 0});
    const SpatialCorrelation corr = build_ris_correlation(layout, lambda);
    CHECK((corr.matrix - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(corr.frob_sq == doctest::Approx(6.0));
}

TEST_CASE("coincident elements are rejected") {
    RisLayout layout = RisLayout::planar(2, 1, 0.05, {0, 0, 0});
    layout.element_positions[1] = layout.element_positions[0];
    CHECK_THROWS_AS(build_ris_correlation(layout, 0.1), ConfigError);
}

TEST_CASE("link budget from geometry") {
    const RisLayout ris = RisLayout::planar(2, 2, 0.025, {0, 3, 1.5});
    PathLossSpec pl;
    pl.fixed_loss_db = 30.0;
    pl.exponent_direct = 3.67;
    pl.exponent_ris = 2.2;
    const Position alice{0, 0, 1.5}, bob{30, 0, 1.5}, eve{30.01, 0, 1.5};
    const LinkBudget b =
        link_budget_from_geometry(alice, bob, eve, ris, pl, 3e9, 25.0, -96.0);

    CHECK(b.tx_power == doctest::Approx(0.3162).epsilon(1e-3));
    CHECK(b.noise_power == doctest::Approx(2.512e-13).epsilon(1e-3));
    CHECK(b.beta_ab == doctest::Approx(1.0e-3 / std::pow(30.0, 3.67)).epsilon(1e-12));
    CHECK(b.beta_ar == doctest::Approx(1.0e-3 / std::pow(3.0, 2.2)).epsilon(1e-12));
    CHECK(b.wavelength == doctest::Approx(kSpeedOfLight / 3e9));

    CHECK_THROWS_AS(link_budget_from_geometry(alice, alice, eve, ris, pl, 3e9, 25.0, -96.0),
                    ConfigError);
}

TEST_CASE("antenna gain boosts only the RIS cascade, penetration only direct Alice links") {
    const RisLayout ris = RisLayout::planar(2, 2, 0.025, {0, 3, 1.5});
    const Position alice{0, 0, 1.5}, bob{30, 0, 1.5}, eve{28, 1, 1.5};
    PathLossSpec plain;
    plain.fixed_loss_db = 30.0;
    const LinkBudget base =
        link_budget_from_geometry(alice, bob, eve, ris, plain, 3e9, 25.0, -96.0);

    PathLossSpec gained = plain;
    gained.antenna_gain_db = 5.0;
    const LinkBudget g = link_budget_from_geometry(alice, bob, eve, ris, gained, 3e9, 25.0, -96.0);
    CHECK(g.beta_ab == base.beta_ab);
    CHECK(g.beta_ae == base.beta_ae);
    // 5 dBi at each of the three apertures of the cascade: 15 dB on the
    // product, split evenly over the two legs.
    CHECK(g.beta_ar / base.beta_ar == doctest::Approx(std::pow(10.0, 0.75)).epsilon(1e-12));
    CHECK((g.beta_ar * g.beta_rb) / (base.beta_ar * base.beta_rb) ==
          doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-12));

    PathLossSpec walled = plain;
    walled.penetration_loss_db = 20.0;
    const LinkBudget w = link_budget_from_geometry(alice, bob, eve, ris, walled, 3e9, 25.0, -96.0);
    CHECK(w.beta_ab / base.beta_ab == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(w.beta_ae / base.beta_ae == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(w.beta_be == base.beta_be);
    CHECK(w.beta_ar == base.beta_ar);
}
