#pragma once

// Collective-spin algebra in the Dicke basis.
//
// Basis convention: index k = j - m, so index 0 is |j, j> (the "north pole")
// and index N is |j, -j>. k is also the number of excitations counted from
// the north pole.

#include "spinport/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>
#include <vector>

namespace spinport {

inline constexpr double kNormTol = 1e-10;

struct BlochPoint {
    double theta = 0.0;
    double phi = 0.0;

    BlochPoint() = default;
    /// theta must lie in [0, pi]; phi is reduced into [0, 2pi).
    BlochPoint(double theta_, double phi_) : theta(theta_), phi(std::fmod(phi_, 2 * pi)) {
        detail::require(std::isfinite(theta_) && std::isfinite(phi_), "BlochPoint: non-finite angle");
        detail::require(theta_ >= -1e-12 && theta_ <= pi + 1e-12, "BlochPoint: theta outside [0, pi]");
        theta = std::clamp(theta_, 0.0, pi);
        if (phi < 0) phi += 2 * pi;
        if (phi >= 2 * pi) phi = 0.0;
    }

    friend bool operator==(const BlochPoint&, const BlochPoint&) = default;
};

class SpinState {
public:
    SpinState(int n_particles, cvec amplitudes) : n_(n_particles), amp_(std::move(amplitudes)) {
        detail::require(n_ >= 1, "SpinState: n_particles must be >= 1");
        detail::require(amp_.size() == n_ + 1, "SpinState: amplitude length must be n_particles + 1");
        detail::require(std::abs(amp_.squaredNorm() - 1.0) <= kNormTol, "SpinState: not normalized");
    }

    static SpinState normalized(int n_particles, cvec amplitudes) {
        const double nrm = amplitudes.norm();
        detail::require(nrm > 0.0, "SpinState: zero vector");
        return SpinState(n_particles, amplitudes / nrm);
    }

    int n_particles() const { return n_; }
    double j() const { return 0.5 * n_; }
    Eigen::Index dim() const { return amp_.size(); }
    const cvec& amplitudes() const { return amp_; }

private:
    int n_;
    cvec amp_;
};

class CompositeState {
public:
    CompositeState(std::vector<int> dims, cvec amplitudes) : dims_(std::move(dims)), amp_(std::move(amplitudes)) {
        detail::require(!dims_.empty(), "CompositeState: empty dims");
        long total = 1;
        for (int d : dims_) {
            detail::require(d >= 1, "CompositeState: dimension must be >= 1");
            total *= d;
        }
        detail::require(amp_.size() == total, "CompositeState: amplitude length != product of dims");
        detail::require(std::abs(amp_.squaredNorm() - 1.0) <= kNormTol, "CompositeState: not normalized");
    }

    const std::vector<int>& dims() const { return dims_; }
    const cvec& amplitudes() const { return amp_; }
    Eigen::Index dim() const { return amp_.size(); }
    int subsystems() const { return static_cast<int>(dims_.size()); }

private:
    std::vector<int> dims_;
    cvec amp_;
};

class HermitianOperator {
public:
    explicit HermitianOperator(cmat m) : m_(std::move(m)) {
        detail::require(m_.rows() == m_.cols(), "HermitianOperator: matrix not square");
        const double scale = std::max(1.0, detail::max_abs(m_));
        detail::require(detail::max_abs(m_ - m_.adjoint()) <= 1e-12 * scale, "HermitianOperator: not Hermitian");
    }
    const cmat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    cmat m_;
};

class UnitaryOperator {
public:
    explicit UnitaryOperator(cmat m) : m_(std::move(m)) {
        detail::require(m_.rows() == m_.cols(), "UnitaryOperator: matrix not square");
        const cmat err = m_.adjoint() * m_ - cmat::Identity(m_.rows(), m_.cols());
        detail::require(detail::max_abs(err) <= 1e-10, "UnitaryOperator: not unitary");
    }
    const cmat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    cmat m_;
};

struct SpinOperators {
    HermitianOperator x;
    HermitianOperator y;
    HermitianOperator z;
};

/// Spin-j matrices (j = N/2) in the descending-m Dicke basis.
inline SpinOperators angular_momentum_ops(int n_particles) {
    detail::require(n_particles >= 1, "angular_momentum_ops: n_particles must be >= 1");
    const int d = n_particles + 1;
    const double j = 0.5 * n_particles;
    cmat jz = cmat::Zero(d, d);
    cmat jplus = cmat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = j - k;
        jz(k, k) = m;
        if (k > 0) jplus(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1)); // J+ |m> ~ |m+1>
    }
    const cmat jminus = jplus.adjoint();
    return {HermitianOperator(0.5 * (jplus + jminus)), HermitianOperator((jplus - jminus) / (2.0 * I)),
            HermitianOperator(jz)};
}

inline double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

/// |theta, phi> = exp(-i phi Jz) exp(-i theta Jy) |j, j>, up to the global phase e^{-i j phi}.
inline SpinState coherent_state(int n_particles, const BlochPoint& p) {
    detail::require(n_particles >= 1, "coherent_state: n_particles must be >= 1");
    const double c = std::cos(0.5 * p.theta);
    const double s = std::sin(0.5 * p.theta);
    cvec amp(n_particles + 1);
    for (int k = 0; k <= n_particles; ++k) {
        const double mag = std::sqrt(binomial(n_particles, k)) * std::pow(c, n_particles - k) * std::pow(s, k);
        amp(k) = std::polar(mag, k * p.phi);
    }
    return SpinState::normalized(n_particles, amp);
}

inline SpinState dicke_state(int n_particles, int n_excitations) {
    detail::require(n_particles >= 1, "dicke_state: n_particles must be >= 1");
    detail::require(n_excitations >= 0 && n_excitations <= n_particles, "dicke_state: excitation count out of range");
    cvec amp = cvec::Zero(n_particles + 1);
    amp(n_excitations) = 1.0;
    return SpinState(n_particles, amp);
}

inline CompositeState tensor_product(std::span<const SpinState> states) {
    detail::require(states.size() >= 2, "tensor_product: need at least two states");
    std::vector<int> dims;
    cvec amp = cvec::Ones(1);
    for (const auto& s : states) {
        dims.push_back(static_cast<int>(s.dim()));
        amp = kron(amp, s.amplitudes());
    }
    return CompositeState(std::move(dims), std::move(amp));
}

inline CompositeState tensor_product(std::initializer_list<SpinState> states) {
    return tensor_product(std::span<const SpinState>(states.begin(), states.size()));
}

/// Appends one more subsystem to a composite state.
inline CompositeState tensor_product(const CompositeState& a, const SpinState& b) {
    auto dims = a.dims();
    dims.push_back(static_cast<int>(b.dim()));
    return CompositeState(std::move(dims), kron(a.amplitudes(), b.amplitudes()));
}

/// Places op on `slot`, identity elsewhere, in the CompositeState ordering.
inline cmat embed_local(const cmat& op, int slot, std::span<const int> dims) {
    detail::require(slot >= 0 && slot < static_cast<int>(dims.size()), "embed_local: slot out of range");
    detail::require(op.rows() == dims[slot] && op.cols() == dims[slot], "embed_local: dimension mismatch");
    cmat out = cmat::Identity(1, 1);
    for (int s = 0; s < static_cast<int>(dims.size()); ++s)
        out = kron(out, s == slot ? op : cmat(cmat::Identity(dims[s], dims[s])));
    return out;
}

inline HermitianOperator embed_local(const HermitianOperator& op, int slot, std::span<const int> dims) {
    return HermitianOperator(embed_local(op.matrix(), slot, dims));
}

inline UnitaryOperator embed_local(const UnitaryOperator& op, int slot, std::span<const int> dims) {
    return UnitaryOperator(embed_local(op.matrix(), slot, dims));
}

/// Reduced density matrix on `keep` (in the order given).
inline cmat partial_trace(const CompositeState& state, std::span<const int> keep) {
    detail::require(!keep.empty(), "partial_trace: keep set is empty");
    const SlotSplit split(state.dims(), keep);
    const cmat m = split.unfold(state.amplitudes());
    return m * m.adjoint();
}

inline cmat partial_trace(const CompositeState& state, std::initializer_list<int> keep) {
    return partial_trace(state, std::span<const int>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Rotations

enum class Parameterization { euler, two_axis };

struct Euler {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct TwoAxis {
    double theta_x = 0.0;
    double theta_y = 0.0;
};

inline int parameter_count(Parameterization p) { return p == Parameterization::euler ? 3 : 2; }

/// Correction-rotation parameters; every angle lies in [-pi, pi].
class UnitaryParams {
public:
    UnitaryParams() : v_(Euler{}) {}
    UnitaryParams(Euler e) : v_(e) { validate(); }
    UnitaryParams(TwoAxis t) : v_(t) { validate(); }

    static UnitaryParams identity(Parameterization p) {
        return p == Parameterization::euler ? UnitaryParams(Euler{}) : UnitaryParams(TwoAxis{});
    }

    static UnitaryParams from_vector(Parameterization p, std::span<const double> x) {
        detail::require(static_cast<int>(x.size()) == parameter_count(p), "UnitaryParams: wrong angle count");
        if (p == Parameterization::euler) return Euler{x[0], x[1], x[2]};
        return TwoAxis{x[0], x[1]};
    }

    Parameterization kind() const {
        return std::holds_alternative<Euler>(v_) ? Parameterization::euler : Parameterization::two_axis;
    }

    std::vector<double> to_vector() const {
        if (auto e = std::get_if<Euler>(&v_)) return {e->alpha, e->beta, e->gamma};
        const auto& t = std::get<TwoAxis>(v_);
        return {t.theta_x, t.theta_y};
    }

    const std::variant<Euler, TwoAxis>& variant() const { return v_; }

private:
    void validate() const {
        for (double a : to_vector())
            detail::require(std::isfinite(a) && std::abs(a) <= pi + 1e-12, "UnitaryParams: angle outside [-pi, pi]");
    }

    std::variant<Euler, TwoAxis> v_;
};

/// Matrix exponentials via Hermitian eigendecomposition of each generator.
inline UnitaryOperator rotation_unitary(const UnitaryParams& params, int n_particles) {
    const auto ops = angular_momentum_ops(n_particles);
    if (const auto* e = std::get_if<Euler>(&params.variant())) {
        const HermitianEigen ez(ops.z.matrix());
        const HermitianEigen ex(ops.x.matrix());
        return UnitaryOperator(ez.exp_minus_i(e->gamma) * ex.exp_minus_i(e->beta) * ez.exp_minus_i(e->alpha));
    }
    const auto& t = std::get<TwoAxis>(params.variant());
    const HermitianEigen gen(t.theta_x * ops.x.matrix() + t.theta_y * ops.y.matrix());
    return UnitaryOperator(gen.exp_minus_i(1.0));
}

/// Applies parameterized rotations to vectors without rebuilding matrices.
///
/// Jz is diagonal in the Dicke basis, and the two-axis generator is Jx rotated
/// about z, so exp(-i(tx Jx + ty Jy)) = Rz(phi) Rx(r) Rz(-phi) with
/// (tx, ty) = r (cos phi, sin phi). Only the Jx eigenbasis is stored.
class SpinRotator {
public:
    explicit SpinRotator(int n_particles)
        : n_(n_particles), ops_(angular_momentum_ops(n_particles)), jx_(ops_.x.matrix()) {
        m_ = ops_.z.matrix().diagonal().real();
    }

    int n_particles() const { return n_; }
    const SpinOperators& ops() const { return ops_; }

    cvec rz(double angle, const cvec& v) const {
        cvec out(v.size());
        for (Eigen::Index k = 0; k < v.size(); ++k) out(k) = std::polar(1.0, -angle * m_(k)) * v(k);
        return out;
    }

    cvec rx(double angle, const cvec& v) const { return jx_.apply_exp_minus_i(angle, v); }

    cvec apply(const Euler& e, const cvec& v) const { return rz(e.gamma, rx(e.beta, rz(e.alpha, v))); }

    cvec apply(const TwoAxis& t, const cvec& v) const {
        const double r = std::hypot(t.theta_x, t.theta_y);
        if (r == 0.0) return v;
        const double phi = std::atan2(t.theta_y, t.theta_x);
        return rz(phi, rx(r, rz(-phi, v)));
    }

    cvec apply(const UnitaryParams& p, const cvec& v) const {
        return std::visit([&](const auto& x) { return apply(x, v); }, p.variant());
    }

    SpinState apply(const UnitaryParams& p, const SpinState& s) const {
        detail::require(s.n_particles() == n_, "SpinRotator: particle number mismatch");
        return SpinState::normalized(n_, apply(p, s.amplitudes()));
    }

private:
    int n_;
    SpinOperators ops_;
    HermitianEigen jx_;
    rvec m_;
};

inline SpinState apply(const UnitaryOperator& u, const SpinState& s) {
    detail::require(u.dim() == s.dim(), "apply: dimension mismatch");
    return SpinState::normalized(s.n_particles(), u.matrix() * s.amplitudes());
}

inline double fidelity(const SpinState& target, const SpinState& candidate) {
    detail::require(target.dim() == candidate.dim(), "fidelity: dimension mismatch");
    return std::min(1.0, std::norm(target.amplitudes().dot(candidate.amplitudes())));
}

inline double expectation(const cmat& op, const cvec& v) { return v.dot(op * v).real(); }

inline double expectation(const HermitianOperator& op, const SpinState& s) {
    return expectation(op.matrix(), s.amplitudes());
}

} // namespace spinport
