#pragma once

#include "spinport/spin_core.hpp"

#include <compare>
#include <optional>
#include <string>
#include <tuple>

namespace spinport {

inline constexpr double kProbThreshold = 1e-12;

struct OutcomeLabel {
    enum class Kind { bell, joint };

    Kind kind = Kind::bell;
    int a = 1; ///< Bell index 1..4, or eigenvector index on A
    int c = 0; ///< eigenvector index on C (joint labels only)

    static OutcomeLabel bell(int index) {
        detail::require(index >= 1 && index <= 4, "OutcomeLabel: Bell index must be 1..4");
        return {Kind::bell, index, 0};
    }
    static OutcomeLabel joint(int ia, int ic) {
        detail::require(ia >= 0 && ic >= 0, "OutcomeLabel: negative index");
        return {Kind::joint, ia, ic};
    }

    std::string to_string() const {
        if (kind == Kind::bell) return "bell:" + std::to_string(a);
        return "joint:" + std::to_string(a) + ":" + std::to_string(c);
    }

    static OutcomeLabel parse(const std::string& s) {
        try {
            if (s.rfind("bell:", 0) == 0) return bell(std::stoi(s.substr(5)));
            if (s.rfind("joint:", 0) == 0) {
                const auto rest = s.substr(6);
                const auto colon = rest.find(':');
                if (colon != std::string::npos)
                    return joint(std::stoi(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1)));
            }
        } catch (const std::logic_error&) {
        }
        throw std::invalid_argument("OutcomeLabel: cannot parse '" + s + "'");
    }

    auto operator<=>(const OutcomeLabel&) const = default;
};

/// Orthonormal, complete basis of the A (x) C space; column k is labelled labels[k].
class MeasurementBasis {
public:
    MeasurementBasis(int dim_a, int dim_c, cmat vectors, std::vector<OutcomeLabel> labels)
        : dim_a_(dim_a), dim_c_(dim_c), vectors_(std::move(vectors)), labels_(std::move(labels)) {
        const long d = static_cast<long>(dim_a_) * dim_c_;
        detail::require(vectors_.rows() == d && vectors_.cols() == d, "MeasurementBasis: incomplete basis");
        detail::require(static_cast<long>(labels_.size()) == d, "MeasurementBasis: label count mismatch");
        const cmat gram = vectors_.adjoint() * vectors_ - cmat::Identity(d, d);
        detail::require(detail::max_abs(gram) <= 1e-10, "MeasurementBasis: vectors not orthonormal");
    }

    int dim_a() const { return dim_a_; }
    int dim_c() const { return dim_c_; }
    long size() const { return static_cast<long>(labels_.size()); }
    const cmat& vectors() const { return vectors_; }
    cvec vector(long k) const { return vectors_.col(k); }
    const std::vector<OutcomeLabel>& labels() const { return labels_; }

private:
    int dim_a_;
    int dim_c_;
    cmat vectors_;
    std::vector<OutcomeLabel> labels_;
};

struct OutcomeRecord {
    OutcomeLabel label;
    double probability = 0.0;
    std::optional<SpinState> conditional_b; ///< empty when probability < kProbThreshold

    bool negligible() const { return !conditional_b.has_value(); }
};

/// Bell vectors on A (x) C with index 0 = spin up.
///
/// The ordering (and the global phases on the second and third vectors)
/// are chosen so that the quadratic-Hamiltonian pair |up, down> evolved for
/// t = pi/4 reads (i/sqrt2)(-Phi2 + Phi3), and so that outcomes 1..4 line up
/// with the closed-form correction angles in protocol.hpp. Phases do not change
/// any probability or conditional state.
inline MeasurementBasis bell_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    cmat v = cmat::Zero(4, 4);
    // |00>, |01>, |10>, |11> with the A index first
    v(0, 0) = s;  v(3, 0) = -s;          // Phi1 = (|00> - |11>)/sqrt2
    v(1, 1) = I * s; v(2, 1) = -I * s;   // Phi2 = i(|01> - |10>)/sqrt2
    v(1, 2) = -s; v(2, 2) = -s;          // Phi3 = -(|01> + |10>)/sqrt2
    v(0, 3) = s;  v(3, 3) = s;           // Phi4 = (|00> + |11>)/sqrt2
    return MeasurementBasis(2, 2, v,
                            {OutcomeLabel::bell(1), OutcomeLabel::bell(2), OutcomeLabel::bell(3), OutcomeLabel::bell(4)});
}

struct Eigenbasis {
    rvec values;  ///< descending
    cmat vectors; ///< columns match values
};

/// Eigenvectors sorted by descending eigenvalue, each with its first
/// non-vanishing component made real and positive.
inline Eigenbasis observable_eigenbasis(const HermitianOperator& op) {
    const HermitianEigen eig(op.matrix());
    const Eigen::Index d = eig.dim();
    Eigenbasis out{rvec(d), cmat(d, d)};
    for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index src = d - 1 - k;
        out.values(k) = eig.values()(src);
        cvec v = eig.vectors().col(src);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (std::abs(v(i)) > 1e-10) {
                v *= std::conj(v(i)) / std::abs(v(i));
                v(i) = std::abs(v(i));
                break;
            }
        }
        out.vectors.col(k) = v;
    }
    return out;
}

enum class Observable { jx, jy, jz };

inline const HermitianOperator& select(const SpinOperators& ops, Observable o) {
    switch (o) {
    case Observable::jx: return ops.x;
    case Observable::jy: return ops.y;
    default: return ops.z;
    }
}

/// Product eigenbasis of one observable on A and one on C (default Jx on A, Jy on C).
inline MeasurementBasis ac_measurement_basis(int n_a, int n_c, Observable on_a = Observable::jx,
                                             Observable on_c = Observable::jy) {
    detail::require(n_a >= 1 && n_c >= 1, "ac_measurement_basis: particle counts must be >= 1");
    const auto ea = observable_eigenbasis(select(angular_momentum_ops(n_a), on_a));
    const auto ec = observable_eigenbasis(select(angular_momentum_ops(n_c), on_c));
    const int da = n_a + 1;
    const int dc = n_c + 1;
    cmat v(da * dc, da * dc);
    std::vector<OutcomeLabel> labels;
    labels.reserve(da * dc);
    for (int ia = 0; ia < da; ++ia)
        for (int ic = 0; ic < dc; ++ic) {
            v.col(ia * dc + ic) = kron(cvec(ea.vectors.col(ia)), cvec(ec.vectors.col(ic)));
            labels.push_back(OutcomeLabel::joint(ia, ic));
        }
    return MeasurementBasis(da, dc, v, std::move(labels));
}

namespace detail {

inline constexpr int kSlotsAC[] = {0, 2};

inline void check_abc(const CompositeState& psi, int dim_a, int dim_c) {
    require(psi.subsystems() == 3, "measurement: expected an (A, B, C) state");
    require(psi.dims()[0] == dim_a && psi.dims()[2] == dim_c, "measurement: A/C dimensions do not match basis");
}

inline OutcomeRecord make_record(const OutcomeLabel& label, const cvec& b_unnormalized, int n_b) {
    OutcomeRecord r{label, b_unnormalized.squaredNorm(), std::nullopt};
    if (r.probability >= kProbThreshold) r.conditional_b = SpinState::normalized(n_b, b_unnormalized);
    return r;
}

} // namespace detail

/// Projects A (x) C of an (A, B, C) state onto `v`; the remainder is B's conditional state.
inline OutcomeRecord project_outcome(const CompositeState& psi_abc, const cvec& v, const OutcomeLabel& label) {
    detail::require(psi_abc.subsystems() == 3, "project_outcome: expected an (A, B, C) state");
    const SlotSplit split(psi_abc.dims(), detail::kSlotsAC);
    detail::require(v.size() == split.selected_dim(), "project_outcome: basis vector dimension mismatch");
    detail::require(std::abs(v.squaredNorm() - 1.0) <= kNormTol, "project_outcome: basis vector not normalized");
    const cvec b = split.unfold(psi_abc.amplitudes()).transpose() * v.conjugate();
    return detail::make_record(label, b, psi_abc.dims()[1] - 1);
}

/// All outcomes of `basis`, in basis order (which is label order).
inline std::vector<OutcomeRecord> enumerate_outcomes(const CompositeState& psi_abc, const MeasurementBasis& basis) {
    detail::check_abc(psi_abc, basis.dim_a(), basis.dim_c());
    const SlotSplit split(psi_abc.dims(), detail::kSlotsAC);
    const cmat projected = basis.vectors().adjoint() * split.unfold(psi_abc.amplitudes());
    const int n_b = psi_abc.dims()[1] - 1;
    std::vector<OutcomeRecord> out;
    out.reserve(basis.size());
    for (long k = 0; k < basis.size(); ++k)
        out.push_back(detail::make_record(basis.labels()[k], projected.row(k).transpose(), n_b));
    return out;
}

} // namespace spinport
