#pragma once

#include <vector>

#include <Eigen/Dense>

#include "skg/common.hpp"
#include "skg/rng.hpp"
#include "skg/scene.hpp"

namespace skg {

/// One coherence block of channel realizations.  Reciprocity makes the
/// reverse-direction channels redundant, so only one of each pair is stored.
struct ChannelBlock {
    cx h_ab;
    cx h_ae;
    cx h_be;
    std::vector<cx> h_ar;
    std::vector<cx> h_rb;
    std::vector<cx> h_re;
};

struct PhaseMatrix {
    std::vector<double> thetas;  // radians in [0, 2*pi)
};

struct CorrelationFactor {
    Eigen::MatrixXd factor;  // factor * factor^T == R
};

/// Square root of a correlation matrix.  Cholesky when R is positive
/// definite; eigenvalue factorization with clipping of tiny negative
/// eigenvalues when it is only semidefinite.
CorrelationFactor correlation_factor(const Eigen::MatrixXd& r);

/// Precomputes the correlation square root once, then draws blocks.
class ChannelSampler {
  public:
    ChannelSampler(const LinkBudget& budget, const SpatialCorrelation& corr);

    ChannelBlock draw(Rng& rng) const;

    const LinkBudget& budget() const { return budget_; }
    double frob_sq() const { return frob_sq_; }
    double rho() const { return rho_; }

  private:
    std::vector<cx> correlated_vector(Rng& rng, double beta) const;

    LinkBudget budget_;
    Eigen::MatrixXd factor_;
    double frob_sq_ = 0.0;
    double rho_ = 0.0;
};

/// Convenience wrapper: factorize and draw in one call.
ChannelBlock draw_block(Rng& rng, const LinkBudget& budget, const SpatialCorrelation& corr);

PhaseMatrix random_phase_matrix(Rng& rng, int n);

/// h_direct + sum_n conj(h_in[n]) * e^{j theta_n} * h_out[n].
cx aggregate(cx h_direct, const std::vector<cx>& h_in, const PhaseMatrix& phases,
             const std::vector<cx>& h_out);

/// Phases that co-phase every RIS path with the direct channel, so the
/// aggregate magnitude is |h_ab| + sum_n |h_ar,n||h_rb,n|.  Zero-magnitude
/// entries contribute phase 0 by convention.
PhaseMatrix aligned_phase_matrix(const ChannelBlock& block);

}  // namespace skg
