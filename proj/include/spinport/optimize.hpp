#pragma once

// Learning a correction rotation: bounded local minimization of
// f(x) = -|<target| U(x) |conditional_b>|^2.

#include "spinport/spin_core.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

namespace spinport {

struct ObjectiveSpec {
    SpinState target;
    SpinState conditional_b;
    Parameterization parameterization = Parameterization::two_axis;
};

enum class GradientMode { analytic, finite_difference };

struct OptimizerSettings {
    /// Per-angle bounds; empty means [-pi, pi] for every angle.
    std::vector<std::pair<double, double>> bounds;
    /// Starting angles; empty means zeros.
    std::vector<double> x0;
    double tol_f = 1e-13;
    double tol_x = 1e-10;
    double tol_g = 1e-9;
    int max_iter = 300;
    GradientMode gradient = GradientMode::analytic;
    double fd_step = 1e-7;
    /// Extra starting points tried, in order, while the best fidelity found is
    /// still below restart_below. The x0 run always comes first.
    std::vector<std::vector<double>> restarts;
    double restart_below = 0.0;
};

struct MinimizeResult {
    rvec x;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

/// Value and gradient of -|<target|U(x)|b>|^2.
class CorrectionObjective {
public:
    CorrectionObjective(std::shared_ptr<const SpinRotator> rotator, const ObjectiveSpec& spec)
        : rot_(std::move(rotator)), target_(spec.target.amplitudes()), b_(spec.conditional_b.amplitudes()),
          kind_(spec.parameterization) {
        detail::require(spec.target.dim() == spec.conditional_b.dim(), "objective: target/conditional dimension mismatch");
        detail::require(rot_ && rot_->n_particles() + 1 == spec.target.dim(), "objective: rotator dimension mismatch");
    }

    int size() const { return parameter_count(kind_); }
    Parameterization parameterization() const { return kind_; }

    double value(const rvec& x) const {
        check(x);
        return -std::norm(target_.dot(rotate(x)));
    }

    double value_and_gradient(const rvec& x, rvec& grad) const {
        check(x);
        grad.resize(x.size());
        const auto& ops = rot_->ops();
        if (kind_ == Parameterization::euler) {
            const double alpha = x(0), beta = x(1), gamma = x(2);
            const cvec v1 = rot_->rz(alpha, b_);
            const cvec v2 = rot_->rx(beta, v1);
            const cvec v3 = rot_->rz(gamma, v2);
            const cplx a = target_.dot(v3);
            const cvec w = rot_->rz(-gamma, target_); // Rz(gamma)^dagger |t>
            const cvec w2 = rot_->rx(-beta, w);
            const cplx da_dgamma = -I * target_.dot(ops.z.matrix() * v3);
            const cplx da_dbeta = -I * w.dot(ops.x.matrix() * v2);
            const cplx da_dalpha = -I * w2.dot(ops.z.matrix() * v1);
            grad << d_neg_norm(a, da_dalpha), d_neg_norm(a, da_dbeta), d_neg_norm(a, da_dgamma);
            return -std::norm(a);
        }
        const double r = std::hypot(x(0), x(1));
        const cvec u = rot_->apply(TwoAxis{x(0), x(1)}, b_);
        const cplx a = target_.dot(u);
        if (r < 1e-8) {
            grad(0) = d_neg_norm(a, -I * target_.dot(ops.x.matrix() * u));
            grad(1) = d_neg_norm(a, -I * target_.dot(ops.y.matrix() * u));
            return -std::norm(a);
        }
        const double c = x(0) / r, s = x(1) / r;
        const cmat n_dot_j = c * ops.x.matrix() + s * ops.y.matrix();
        const cplx da_dr = -I * target_.dot(n_dot_j * u);
        const cvec jz_b = ops.z.matrix() * b_;
        const cplx da_dphi = -I * target_.dot(ops.z.matrix() * u) + I * target_.dot(rot_->apply(TwoAxis{x(0), x(1)}, jz_b));
        grad(0) = d_neg_norm(a, c * da_dr - s / r * da_dphi);
        grad(1) = d_neg_norm(a, s * da_dr + c / r * da_dphi);
        return -std::norm(a);
    }

    /// Central differences, for checking and for GradientMode::finite_difference.
    double value_and_fd_gradient(const rvec& x, rvec& grad, double h) const {
        grad.resize(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            rvec xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            grad(i) = (value(xp) - value(xm)) / (2 * h);
        }
        return value(x);
    }

private:
    void check(const rvec& x) const {
        detail::require(x.size() == size(), "objective: angle vector length does not match parameterization");
    }

    cvec rotate(const rvec& x) const {
        if (kind_ == Parameterization::euler) return rot_->apply(Euler{x(0), x(1), x(2)}, b_);
        return rot_->apply(TwoAxis{x(0), x(1)}, b_);
    }

    // d(-|a|^2) = -2 Re(conj(a) da)
    static double d_neg_norm(cplx a, cplx da) { return -2.0 * (std::conj(a) * da).real(); }

    std::shared_ptr<const SpinRotator> rot_;
    cvec target_;
    cvec b_;
    Parameterization kind_;
};

inline double objective_value(const ObjectiveSpec& spec, std::span<const double> x) {
    const CorrectionObjective obj(std::make_shared<SpinRotator>(spec.target.n_particles()), spec);
    detail::require(static_cast<int>(x.size()) == obj.size(), "objective_value: angle vector length mismatch");
    return obj.value(Eigen::Map<const rvec>(x.data(), static_cast<Eigen::Index>(x.size())));
}

/// Projected quasi-Newton (BFGS on the free variables) with an Armijo search
/// along the projected path. `fg(x, grad)` returns f(x) and fills grad.
template <class ValueAndGradient>
MinimizeResult minimize_box(ValueAndGradient&& fg, rvec x, const rvec& lo, const rvec& hi, const OptimizerSettings& st) {
    const Eigen::Index n = x.size();
    MinimizeResult res;
    x = x.cwiseMax(lo).cwiseMin(hi);
    rvec g(n);
    double f = fg(x, g);
    ++res.evaluations;
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

    auto free_mask = [&](const rvec& xx, const rvec& gg) {
        Eigen::Array<bool, Eigen::Dynamic, 1> m(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool at_lo = xx(i) <= lo(i) + 1e-14 && gg(i) > 0;
            const bool at_hi = xx(i) >= hi(i) - 1e-14 && gg(i) < 0;
            m(i) = !(at_lo || at_hi);
        }
        return m;
    };

    for (res.iterations = 0; res.iterations < st.max_iter; ++res.iterations) {
        const auto mask = free_mask(x, g);
        rvec pg = g;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!mask(i)) pg(i) = 0.0;
        if (pg.lpNorm<Eigen::Infinity>() <= st.tol_g) {
            res.converged = true;
            break;
        }

        rvec d = -(hinv * pg);
        for (Eigen::Index i = 0; i < n; ++i)
            if (!mask(i)) d(i) = 0.0;
        if (d.dot(pg) >= -1e-20) {
            hinv.setIdentity();
            d = -pg;
        }
        // Keep a single trial step within one period of the angle.
        const double dn = d.lpNorm<Eigen::Infinity>();
        if (dn > pi) d *= pi / dn;

        double step = 1.0;
        bool accepted = false;
        rvec xn(n), gn(n);
        double fn = f;
        for (int ls = 0; ls < 50; ++ls) {
            xn = (x + step * d).cwiseMax(lo).cwiseMin(hi);
            fn = fg(xn, gn);
            ++res.evaluations;
            if (fn <= f + 1e-4 * g.dot(xn - x)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No decrease available along the projected direction.
            res.converged = pg.lpNorm<Eigen::Infinity>() <= 1e3 * st.tol_g;
            break;
        }

        const rvec s = xn - x;
        const rvec y = gn - g;
        const double df = f - fn;
        x = xn;
        g = gn;
        f = fn;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm() && sy > 0) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
            hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        if (df <= st.tol_f * (1.0 + std::abs(f)) && s.lpNorm<Eigen::Infinity>() <= st.tol_x) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    res.x = x;
    res.f = f;
    return res;
}

namespace detail {

inline std::pair<rvec, rvec> bounds_for(const OptimizerSettings& st, int n) {
    rvec lo = rvec::Constant(n, -pi), hi = rvec::Constant(n, pi);
    if (!st.bounds.empty()) {
        require(static_cast<int>(st.bounds.size()) == n, "optimizer: bounds length mismatch");
        for (int i = 0; i < n; ++i) {
            require(st.bounds[i].first <= st.bounds[i].second, "optimizer: empty bound interval");
            lo(i) = st.bounds[i].first;
            hi(i) = st.bounds[i].second;
        }
    }
    return {lo, hi};
}

inline rvec start_point(const std::vector<double>& x0, int n) {
    if (x0.empty()) return rvec::Zero(n);
    require(static_cast<int>(x0.size()) == n, "optimizer: x0 length mismatch");
    return Eigen::Map<const rvec>(x0.data(), n);
}

} // namespace detail

inline MinimizeResult minimize_bounded(const CorrectionObjective& obj, const OptimizerSettings& st) {
    detail::require(st.tol_f > 0 && st.tol_x > 0 && st.max_iter > 0, "optimizer: tolerances must be positive");
    const int n = obj.size();
    const auto [lo, hi] = detail::bounds_for(st, n);
    auto fg = [&](const rvec& x, rvec& g) {
        return st.gradient == GradientMode::analytic ? obj.value_and_gradient(x, g)
                                                     : obj.value_and_fd_gradient(x, g, st.fd_step);
    };
    MinimizeResult best = minimize_box(fg, detail::start_point(st.x0, n), lo, hi, st);
    for (const auto& start : st.restarts) {
        if (-best.f >= st.restart_below) break;
        MinimizeResult r = minimize_box(fg, detail::start_point(start, n), lo, hi, st);
        r.evaluations += best.evaluations;
        if (r.f < best.f) best = r;
        else best.evaluations = r.evaluations;
    }
    return best;
}

inline MinimizeResult minimize_bounded(const ObjectiveSpec& spec, const OptimizerSettings& st) {
    return minimize_bounded(CorrectionObjective(std::make_shared<SpinRotator>(spec.target.n_particles()), spec), st);
}

inline double wrap_angle(double a) {
    const double w = std::remainder(a, 2 * pi);
    return w < -pi ? -pi : (w > pi ? pi : w);
}

struct CorrectionResult {
    UnitaryParams params;
    double fidelity = 0.0;
    bool converged = false; ///< false: best-found angles returned after max_iter
};

inline CorrectionResult optimize_correction(const CorrectionObjective& obj, const OptimizerSettings& st) {
    const MinimizeResult r = minimize_bounded(obj, st);
    std::vector<double> angles(r.x.data(), r.x.data() + r.x.size());
    for (double& a : angles) a = wrap_angle(a);
    return {UnitaryParams::from_vector(obj.parameterization(), angles), std::clamp(-r.f, 0.0, 1.0), r.converged};
}

inline CorrectionResult optimize_correction(const SpinState& target, const SpinState& conditional_b,
                                            Parameterization parameterization, std::vector<double> x0 = {},
                                            OptimizerSettings st = {}) {
    st.x0 = std::move(x0);
    const CorrectionObjective obj(std::make_shared<SpinRotator>(target.n_particles()),
                                  ObjectiveSpec{target, conditional_b, parameterization});
    return optimize_correction(obj, st);
}

} // namespace spinport
