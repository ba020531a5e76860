#pragma once

// Hamiltonians for two interacting collective spins, unitary evolution,
// entanglement entropy and the boundary variances of EPR-like observables.
// Units: hbar = 1, times in units of 1/chi.

#include "spinport/spin_core.hpp"

#include <array>
#include <cmath>

namespace spinport {

struct LinearCoefficients {
    struct Triple {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };
    std::array<Triple, 2> species{};
};

struct QuadraticCoefficient {
    double chi = 1.0;
};

struct CorrelationSnapshot {
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
    double cxx = 0.0;
    double cxy = 0.0;
    double sigma_plus_sq = 0.0;
    double sigma_minus_sq = 0.0;
    double phi_opt = 0.0;
};

namespace detail {

inline int particles_for_dim(int d) {
    require(d >= 2, "subsystem dimension must be >= 2");
    return d - 1;
}

} // namespace detail

/// Sum over species of kx Jx + ky Jy + kz Jz. Accepts one or two species.
inline HermitianOperator build_linear_hamiltonian(const LinearCoefficients& coeffs, std::span<const int> dims) {
    detail::require(dims.size() == 1 || dims.size() == 2, "build_linear_hamiltonian: need one or two species");
    long total = 1;
    for (int d : dims) total *= d;
    cmat h = cmat::Zero(total, total);
    for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
        const auto ops = angular_momentum_ops(detail::particles_for_dim(dims[s]));
        const auto& k = coeffs.species[s];
        const cmat local = k.x * ops.x.matrix() + k.y * ops.y.matrix() + k.z * ops.z.matrix();
        h += embed_local(local, s, dims);
    }
    return HermitianOperator(h);
}

inline HermitianOperator build_linear_hamiltonian(const LinearCoefficients& coeffs, std::initializer_list<int> dims) {
    return build_linear_hamiltonian(coeffs, std::span<const int>(dims.begin(), dims.size()));
}

/// chi [(Jx1 + Jx2)^2 + (Jy1 + Jy2)^2] on the joint space of two species.
inline HermitianOperator build_quadratic_hamiltonian(QuadraticCoefficient chi, std::span<const int> dims) {
    detail::require(dims.size() == 2, "build_quadratic_hamiltonian: need exactly two species");
    const auto a = angular_momentum_ops(detail::particles_for_dim(dims[0]));
    const auto b = angular_momentum_ops(detail::particles_for_dim(dims[1]));
    const cmat jx = embed_local(a.x.matrix(), 0, dims) + embed_local(b.x.matrix(), 1, dims);
    const cmat jy = embed_local(a.y.matrix(), 0, dims) + embed_local(b.y.matrix(), 1, dims);
    cmat h = chi.chi * (jx * jx + jy * jy);
    h = 0.5 * (h + h.adjoint()).eval();
    return HermitianOperator(h);
}

inline HermitianOperator build_quadratic_hamiltonian(QuadraticCoefficient chi, std::initializer_list<int> dims) {
    return build_quadratic_hamiltonian(chi, std::span<const int>(dims.begin(), dims.size()));
}

/// exp(-i H t) for a fixed H, diagonalized once and reused for any t.
class Propagator {
public:
    explicit Propagator(const HermitianOperator& h) : eig_(h.matrix()) {}

    Eigen::Index dim() const { return eig_.dim(); }
    const HermitianEigen& eigen() const { return eig_; }

    cmat matrix(double t) const { return eig_.exp_minus_i(t); }

    SpinState evolve(const SpinState& s, double t) const {
        detail::require(s.dim() == dim(), "evolve: dimension mismatch");
        return SpinState::normalized(s.n_particles(), eig_.apply_exp_minus_i(t, s.amplitudes()));
    }

    CompositeState evolve(const CompositeState& s, double t) const {
        detail::require(s.dim() == dim(), "evolve: dimension mismatch");
        cvec out = eig_.apply_exp_minus_i(t, s.amplitudes());
        out.normalize();
        return CompositeState(s.dims(), std::move(out));
    }

    /// Evolves only the listed subsystems (H acts on their product space, in
    /// the order given), identity on the rest.
    CompositeState evolve(const CompositeState& s, double t, std::span<const int> slots) const {
        const SlotSplit split(s.dims(), slots);
        detail::require(split.selected_dim() == dim(), "evolve: dimension mismatch on selected slots");
        const cmat u = matrix(t);
        cvec out = split.fold(u * split.unfold(s.amplitudes()));
        out.normalize();
        return CompositeState(s.dims(), std::move(out));
    }

private:
    HermitianEigen eig_;
};

inline SpinState evolve(const SpinState& s, const HermitianOperator& h, double t) {
    return Propagator(h).evolve(s, t);
}

inline CompositeState evolve(const CompositeState& s, const HermitianOperator& h, double t) {
    return Propagator(h).evolve(s, t);
}

/// Von Neumann entropy (nats) of the reduced state on `partition`.
inline double entanglement_entropy(const CompositeState& s, std::span<const int> partition) {
    const cmat rho = partial_trace(s, partition);
    const Eigen::SelfAdjointEigenSolver<cmat> es(rho, Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (double lam : es.eigenvalues())
        if (lam > 1e-15) entropy -= lam * std::log(lam);
    return std::max(0.0, entropy);
}

inline double entanglement_entropy(const CompositeState& s, std::initializer_list<int> partition) {
    return entanglement_entropy(s, std::span<const int>(partition.begin(), partition.size()));
}

/// Variances and cross-correlations of Jx1 against the rotated component
/// Jx2 cos(phi) + Jy2 sin(phi), and the extremal variances of their sum and
/// difference over phi. Moments are centred, so for the mean-zero states
/// produced by the quadratic Hamiltonian from pole states they reduce to the
/// raw second moments.
inline CorrelationSnapshot variance_bounds(const CompositeState& s) {
    detail::require(s.subsystems() == 2, "variance_bounds: need a two-species state");
    const auto& dims = s.dims();
    const auto a = angular_momentum_ops(detail::particles_for_dim(dims[0]));
    const auto b = angular_momentum_ops(detail::particles_for_dim(dims[1]));
    const cmat x1 = embed_local(a.x.matrix(), 0, dims);
    const cmat x2 = embed_local(b.x.matrix(), 1, dims);
    const cmat y2 = embed_local(b.y.matrix(), 1, dims);
    const cvec& v = s.amplitudes();

    const cvec x1v = x1 * v;
    const cvec x2v = x2 * v;
    const cvec y2v = y2 * v;
    const double mx1 = v.dot(x1v).real();
    const double mx2 = v.dot(x2v).real();
    const double my2 = v.dot(y2v).real();

    CorrelationSnapshot c;
    c.sigma1_sq = x1v.squaredNorm() - mx1 * mx1;
    c.sigma2_sq = x2v.squaredNorm() - mx2 * mx2;
    // x1 commutes with x2 and y2, so these products are Hermitian.
    c.cxx = x1v.dot(x2v).real() - mx1 * mx2;
    c.cxy = x1v.dot(y2v).real() - mx1 * my2;
    const double amp = std::hypot(c.cxx, c.cxy);
    c.sigma_plus_sq = c.sigma1_sq + c.sigma2_sq + 2.0 * amp;
    c.sigma_minus_sq = c.sigma1_sq + c.sigma2_sq - 2.0 * amp;
    c.phi_opt = (std::abs(c.cxx) < 1e-14 && std::abs(c.cxy) < 1e-14) ? 0.0 : std::atan2(c.cxy, c.cxx);
    return c;
}

/// <j - Jz>: excitations counted from the north pole.
inline double mean_occupation(const SpinState& s) {
    double jz = 0.0;
    for (Eigen::Index k = 0; k < s.dim(); ++k) jz += std::norm(s.amplitudes()(k)) * (s.j() - k);
    return s.j() - jz;
}

} // namespace spinport
