#include "skg/channels.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace skg {

CorrelationFactor correlation_factor(const Eigen::MatrixXd& r) {
    if (r.rows() != r.cols()) {
        throw DomainError("correlation_factor: matrix not square");
    }
    const Eigen::Index n = r.rows();
    if (n == 0) {
        return {Eigen::MatrixXd(0, 0)};
    }
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd l = llt.matrixL();
        if (((l * l.transpose()) - r).cwiseAbs().maxCoeff() < 1e-9) {
            return {std::move(l)};
        }
    }
    // Semidefinite (or numerically borderline): eigenvalue square root with
    // clipping of round-off negatives.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -1e-6) {
        throw DomainError("correlation_factor: matrix is not positive semidefinite");
    }
    lam = lam.cwiseMax(0.0).cwiseSqrt();
    return {es.eigenvectors() * lam.asDiagonal()};
}

ChannelSampler::ChannelSampler(const LinkBudget& budget, const SpatialCorrelation& corr)
    : budget_(budget), frob_sq_(corr.frob_sq), rho_(corr.rho) {
    if (rho_ < 0.0 || rho_ > 1.0) {
        throw ConfigError("ChannelSampler: rho must lie in [0,1]");
    }
    factor_ = correlation_factor(corr.matrix).factor;
}

std::vector<cx> ChannelSampler::correlated_vector(Rng& rng, double beta) const {
    const Eigen::Index n = factor_.rows();
    Eigen::VectorXcd z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        z(i) = rng.cnormal(1.0);
    }
    Eigen::VectorXcd v = std::sqrt(beta) * (factor_ * z);
    return {v.data(), v.data() + n};
}

ChannelBlock ChannelSampler::draw(Rng& rng) const {
    const LinkBudget& b = budget_;
    ChannelBlock blk;
    blk.h_ab = rng.cnormal(b.beta_ab);
    // Eve's direct channel, correlated with h_ab by rho.
    if (rho_ > 0.0 && b.beta_ab > 0.0 && b.beta_ae > 0.0) {
        blk.h_ae = rho_ * std::sqrt(b.beta_ae / b.beta_ab) * blk.h_ab +
                   rng.cnormal(b.beta_ae * (1.0 - rho_ * rho_));
    } else {
        blk.h_ae = rng.cnormal(b.beta_ae);
    }
    blk.h_be = rng.cnormal(b.beta_be);
    blk.h_ar = correlated_vector(rng, b.beta_ar);
    blk.h_rb = correlated_vector(rng, b.beta_rb);
    // Eve's RIS leg shares the spatial correlation of h_rb and is tied to it
    // elementwise by rho, matching E[h_rb,n conj(h_re,m)] = rho sqrt(beta_rb
    // beta_re) R_nm.
    if (rho_ > 0.0 && b.beta_rb > 0.0 && b.beta_re > 0.0) {
        std::vector<cx> w = correlated_vector(rng, b.beta_re * (1.0 - rho_ * rho_));
        const double scale = rho_ * std::sqrt(b.beta_re / b.beta_rb);
        blk.h_re.resize(blk.h_rb.size());
        for (std::size_t i = 0; i < blk.h_rb.size(); ++i) {
            blk.h_re[i] = scale * blk.h_rb[i] + w[i];
        }
    } else {
        blk.h_re = correlated_vector(rng, b.beta_re);
    }
    return blk;
}

ChannelBlock draw_block(Rng& rng, const LinkBudget& budget, const SpatialCorrelation& corr) {
    return ChannelSampler(budget, corr).draw(rng);
}

PhaseMatrix random_phase_matrix(Rng& rng, int n) {
    if (n < 0) {
        throw DomainError("random_phase_matrix: negative size");
    }
    PhaseMatrix p;
    p.thetas.resize(n);
    for (double& t : p.thetas) {
        t = rng.uniform_phase();
    }
    return p;
}

cx aggregate(cx h_direct, const std::vector<cx>& h_in, const PhaseMatrix& phases,
             const std::vector<cx>& h_out) {
    if (h_in.size() != h_out.size() || h_in.size() != phases.thetas.size()) {
        throw DomainError("aggregate: vector length mismatch");
    }
    cx acc = h_direct;
    for (std::size_t n = 0; n < h_in.size(); ++n) {
        acc += std::conj(h_in[n]) * std::polar(1.0, phases.thetas[n]) * h_out[n];
    }
    return acc;
}

PhaseMatrix aligned_phase_matrix(const ChannelBlock& block) {
    if (block.h_ar.size() != block.h_rb.size()) {
        throw DomainError("aligned_phase_matrix: vector length mismatch");
    }
    PhaseMatrix p;
    p.thetas.resize(block.h_ar.size());
    const double target = std::arg(block.h_ab);
    for (std::size_t n = 0; n < p.thetas.size(); ++n) {
        const cx path = std::conj(block.h_ar[n]) * block.h_rb[n];
        double theta = (path == cx{}) ? 0.0 : target - std::arg(path);
        theta = std::fmod(theta, kTwoPi);
        if (theta < 0.0) {
            theta += kTwoPi;
        }
        p.thetas[n] = theta;
    }
    return p;
}

}  // namespace skg
