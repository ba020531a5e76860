#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinport {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

inline double max_abs(const cmat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace detail

inline cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline cvec kron(const cvec& a, const cvec& b) {
    cvec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Eigen-decomposition of a Hermitian matrix, kept around so that functions of
/// the matrix (exponentials at many times, projectors) are cheap to form.
class HermitianEigen {
public:
    HermitianEigen() = default;
    explicit HermitianEigen(const cmat& h) {
        Eigen::SelfAdjointEigenSolver<cmat> es(h);
        if (es.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
        values_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
    }

    const rvec& values() const { return values_; }
    const cmat& vectors() const { return vectors_; }
    Eigen::Index dim() const { return values_.size(); }

    /// exp(-i t H)
    cmat exp_minus_i(double t) const {
        cvec phase = (values_ * (-t)).unaryExpr([](double a) { return std::polar(1.0, a); });
        return vectors_ * phase.asDiagonal() * vectors_.adjoint();
    }

    /// exp(-i t H) v without forming the full matrix.
    cvec apply_exp_minus_i(double t, const cvec& v) const {
        cvec w = vectors_.adjoint() * v;
        for (Eigen::Index k = 0; k < w.size(); ++k) w(k) *= std::polar(1.0, -t * values_(k));
        return vectors_ * w;
    }

private:
    rvec values_;
    cmat vectors_;
};

/// Index bookkeeping for viewing a row-major multi-subsystem amplitude vector as
/// a (selected slots) x (remaining slots) matrix.
class SlotSplit {
public:
    SlotSplit(std::span<const int> dims, std::span<const int> slots) {
        const int n = static_cast<int>(dims.size());
        std::vector<bool> chosen(n, false);
        for (int s : slots) {
            detail::require(s >= 0 && s < n, "slot index out of range");
            detail::require(!chosen[s], "duplicate slot index");
            chosen[s] = true;
        }
        std::vector<int> rest;
        for (int s = 0; s < n; ++s)
            if (!chosen[s]) rest.push_back(s);

        std::vector<long> stride(n, 1);
        for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

        auto offsets = [&](const std::vector<int>& group) {
            std::vector<long> off{0};
            for (int s : group) {
                std::vector<long> next;
                next.reserve(off.size() * dims[s]);
                for (long o : off)
                    for (int k = 0; k < dims[s]; ++k) next.push_back(o + k * stride[s]);
                off = std::move(next);
            }
            return off;
        };
        sel_ = offsets(std::vector<int>(slots.begin(), slots.end()));
        rest_ = offsets(rest);
    }

    long selected_dim() const { return static_cast<long>(sel_.size()); }
    long rest_dim() const { return static_cast<long>(rest_.size()); }

    cmat unfold(const cvec& amp) const {
        cmat m(selected_dim(), rest_dim());
        for (long r = 0; r < rest_dim(); ++r)
            for (long s = 0; s < selected_dim(); ++s) m(s, r) = amp(sel_[s] + rest_[r]);
        return m;
    }

    cvec fold(const cmat& m) const {
        cvec amp(selected_dim() * rest_dim());
        for (long r = 0; r < rest_dim(); ++r)
            for (long s = 0; s < selected_dim(); ++s) amp(sel_[s] + rest_[r]) = m(s, r);
        return amp;
    }

private:
    std::vector<long> sel_;
    std::vector<long> rest_;
};

} // namespace spinport
