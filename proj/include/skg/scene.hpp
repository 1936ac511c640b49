#pragma once

#include <vector>

#include <Eigen/Dense>

#include "skg/common.hpp"

namespace skg {

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Position& a, const Position& b);

/// Uniform planar RIS array in the y-z plane, centered at `origin`.
/// Elements are indexed row-major over (rows, cols).
struct RisLayout {
    int cols = 0;
    int rows = 0;
    double spacing = 0.0;  // meters
    Position origin;
    std::vector<Position> element_positions;

    int size() const { return cols * rows; }

    static RisLayout planar(int cols, int rows, double spacing, const Position& origin);
};

struct PathLossSpec {
    double fixed_loss_db = 0.0;       // C, at d = 1 m
    double exponent_ris = 2.2;        // alpha for RIS legs
    double exponent_direct = 3.67;    // alpha for direct links
    double antenna_gain_db = 0.0;     // per terminal, applied to the RIS cascade when set
    double penetration_loss_db = 0.0; // extra loss on Alice-Bob / Alice-Eve (legacy scenes)
};

struct LinkBudget {
    double beta_ab = 0.0;
    double beta_ae = 0.0;
    double beta_be = 0.0;
    double beta_ar = 0.0;
    double beta_rb = 0.0;
    double beta_re = 0.0;
    double wavelength = 0.0;   // meters
    double tx_power = 0.0;     // watts
    double noise_power = 0.0;  // watts
};

struct SpatialCorrelation {
    Eigen::MatrixXd matrix;  // N x N, unit diagonal, PSD
    double frob_sq = 0.0;
    double rho = 0.0;  // Bob-Eve proximity correlation
};

/// 10^(-c_db/10) / d^alpha.
double path_loss_factor(double d, double alpha, double c_db);

/// [J0(2*pi*d/lambda)]^2, clamped to [0,1].
double pearson_correlation(double d, double wavelength);

double frobenius_norm_sq(const Eigen::MatrixXd& r);

/// Spatial correlation under isotropic scattering: R_mn = sinc(2*pi*d_mn/lambda).
SpatialCorrelation build_ris_correlation(const RisLayout& layout, double wavelength,
                                         double rho = 0.0);

LinkBudget link_budget_from_geometry(const Position& alice, const Position& bob,
                                     const Position& eve, const RisLayout& ris,
                                     const PathLossSpec& pl, double carrier_hz,
                                     double tx_power_dbm, double noise_dbm);

/// A fully built physical scenario: link budget plus RIS spatial correlation
/// (with the Bob-Eve coefficient rho riding along in the correlation).
struct Scenario {
    LinkBudget budget;
    SpatialCorrelation corr;
};

}  // namespace skg
