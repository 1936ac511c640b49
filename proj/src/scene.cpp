#include "skg/scene.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "skg/mathx.hpp"

namespace skg {

double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

RisLayout RisLayout::planar(int cols, int rows, double spacing, const Position& origin) {
    if (cols < 1 || rows < 1) {
        throw ConfigError("RIS layout needs at least one row and one column");
    }
    if (!(spacing > 0.0)) {
        throw ConfigError("RIS element spacing must be positive");
    }
    RisLayout layout;
    layout.cols = cols;
    layout.rows = rows;
    layout.spacing = spacing;
    layout.origin = origin;
    layout.element_positions.reserve(std::size_t(cols) * std::size_t(rows));
    const double y0 = -0.5 * (cols - 1) * spacing;
    const double z0 = -0.5 * (rows - 1) * spacing;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            layout.element_positions.push_back(
                {origin.x, origin.y + y0 + c * spacing, origin.z + z0 + r * spacing});
        }
    }
    return layout;
}

double path_loss_factor(double d, double alpha, double c_db) {
    if (!(d > 0.0)) {
        throw DomainError("path_loss_factor: distance must be positive");
    }
    return std::pow(10.0, -c_db / 10.0) / std::pow(d, alpha);
}

double pearson_correlation(double d, double wavelength) {
    if (d < 0.0) {
        throw DomainError("pearson_correlation: negative distance");
    }
    if (!(wavelength > 0.0)) {
        throw DomainError("pearson_correlation: wavelength must be positive");
    }
    const double j = bessel_j0(kTwoPi * d / wavelength);
    return std::clamp(j * j, 0.0, 1.0);
}

double frobenius_norm_sq(const Eigen::MatrixXd& r) { return r.squaredNorm(); }

SpatialCorrelation build_ris_correlation(const RisLayout& layout, double wavelength, double rho) {
    if (!(wavelength > 0.0)) {
        throw DomainError("build_ris_correlation: wavelength must be positive");
    }
    const int n = layout.size();
    SpatialCorrelation corr;
    corr.rho = rho;
    corr.matrix.resize(n, n);
    for (int m = 0; m < n; ++m) {
        corr.matrix(m, m) = 1.0;
        for (int k = m + 1; k < n; ++k) {
            const double d = distance(layout.element_positions[m], layout.element_positions[k]);
            if (d == 0.0) {
                throw ConfigError("build_ris_correlation: coincident RIS elements");
            }
            const double v = sinc(kTwoPi * d / wavelength);
            corr.matrix(m, k) = v;
            corr.matrix(k, m) = v;
        }
    }
    corr.frob_sq = frobenius_norm_sq(corr.matrix);
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr.matrix,
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9) {
            throw DomainError("build_ris_correlation: correlation matrix not PSD");
        }
    }
    return corr;
}

LinkBudget link_budget_from_geometry(const Position& alice, const Position& bob,
                                     const Position& eve, const RisLayout& ris,
                                     const PathLossSpec& pl, double carrier_hz,
                                     double tx_power_dbm, double noise_dbm) {
    if (!(carrier_hz > 0.0)) {
        throw ConfigError("carrier frequency must be positive");
    }
    const double d_ab = distance(alice, bob);
    const double d_ae = distance(alice, eve);
    const double d_be = distance(bob, eve);
    const double d_ar = distance(alice, ris.origin);
    const double d_rb = distance(ris.origin, bob);
    const double d_re = distance(ris.origin, eve);
    for (double d : {d_ab, d_ae, d_be, d_ar, d_rb, d_re}) {
        if (!(d > 0.0)) {
            throw ConfigError("link_budget_from_geometry: overlapping nodes");
        }
    }

    const double pen = db_to_linear(-pl.penetration_loss_db);
    // The per-terminal antenna gain enters each RIS leg at half weight so the
    // two-leg cascade picks up the three apertures it traverses
    // (terminal, RIS element, terminal): 3 x gain on the product beta_ar*beta_rx.
    const double ris_gain = db_to_linear(1.5 * pl.antenna_gain_db);

    LinkBudget b;
    b.wavelength = kSpeedOfLight / carrier_hz;
    b.tx_power = dbm_to_watts(tx_power_dbm);
    b.noise_power = dbm_to_watts(noise_dbm);
    b.beta_ab = pen * path_loss_factor(d_ab, pl.exponent_direct, pl.fixed_loss_db);
    b.beta_ae = pen * path_loss_factor(d_ae, pl.exponent_direct, pl.fixed_loss_db);
    b.beta_be = path_loss_factor(d_be, pl.exponent_direct, pl.fixed_loss_db);
    b.beta_ar = ris_gain * path_loss_factor(d_ar, pl.exponent_ris, pl.fixed_loss_db);
    b.beta_rb = ris_gain * path_loss_factor(d_rb, pl.exponent_ris, pl.fixed_loss_db);
    b.beta_re = ris_gain * path_loss_factor(d_re, pl.exponent_ris, pl.fixed_loss_db);
    return b;
}

}  // namespace skg
