#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace spinport;
using spinport::testing::max_abs;

namespace {

CompositeState ideal_abc(const SpinState& c) {
    cvec pair = cvec::Zero(4);
    pair(0) = pair(3) = 1 / std::sqrt(2.0);
    return tensor_product(CompositeState({2, 2}, pair), c);
}

double gram_error(const cmat& v) { return max_abs(v.adjoint() * v - cmat::Identity(v.cols(), v.cols())); }

} // namespace

TEST(BellBasis, OrthonormalAndLabelled) {
    const auto b = bell_basis();
    EXPECT_EQ(b.size(), 4);
    EXPECT_LT(gram_error(b.vectors()), 1e-15);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(b.labels()[k], OutcomeLabel::bell(k + 1));
}

TEST(BellBasis, IdealTeleportationOutcomesAreUniform) {
    for (const BlochPoint p : {BlochPoint(0, 0), BlochPoint(1.2, 0.4), BlochPoint(pi, 0)}) {
        const auto recs = enumerate_outcomes(ideal_abc(coherent_state(1, p)), bell_basis());
        ASSERT_EQ(recs.size(), 4u);
        for (const auto& r : recs) EXPECT_NEAR(r.probability, 0.25, 1e-12);
    }
}

TEST(ObservableEigenbasis, Examples) {
    const auto ops1 = angular_momentum_ops(1);
    const auto ez = observable_eigenbasis(angular_momentum_ops(5).z);
    EXPECT_LT(max_abs(ez.vectors - cmat::Identity(6, 6)), 1e-12);

    const auto ex = observable_eigenbasis(ops1.x);
    const double s = 1 / std::sqrt(2.0);
    EXPECT_NEAR(ex.values(0), 0.5, 1e-14);
    EXPECT_LT(std::abs(ex.vectors(0, 0) - s) + std::abs(ex.vectors(1, 0) - s), 1e-12);
    EXPECT_LT(std::abs(ex.vectors(0, 1) - s) + std::abs(ex.vectors(1, 1) + s), 1e-12);

    const auto ops = angular_momentum_ops(10);
    const auto e = observable_eigenbasis(ops.x);
    const cmat recon = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_abs(recon - ops.x.matrix()), 1e-10);
    for (int k = 0; k + 1 < 11; ++k) EXPECT_GT(e.values(k), e.values(k + 1));
    // Phase convention: first non-vanishing component is real and positive.
    for (int k = 0; k < 11; ++k) {
        int i = 0;
        while (std::abs(e.vectors(i, k)) < 1e-10) ++i;
        EXPECT_NEAR(e.vectors(i, k).imag(), 0.0, 1e-14);
        EXPECT_GT(e.vectors(i, k).real(), 0.0);
    }
}

TEST(AcMeasurementBasis, CompleteAndOrthonormal) {
    const auto b = ac_measurement_basis(10, 10);
    EXPECT_EQ(b.size(), 121);
    EXPECT_LT(gram_error(b.vectors()), 1e-10);
    EXPECT_LT(max_abs(b.vectors() * b.vectors().adjoint() - cmat::Identity(121, 121)), 1e-9);
    const auto u = ac_measurement_basis(9, 11);
    EXPECT_EQ(u.size(), 120);
    EXPECT_EQ(u.labels()[13], OutcomeLabel::joint(1, 1));
    // Label (ia, ic) is the product of the ia-th Jx vector on A and ic-th Jy vector on C.
    const auto ea = observable_eigenbasis(angular_momentum_ops(9).x);
    const auto ec = observable_eigenbasis(angular_momentum_ops(11).y);
    EXPECT_LT((u.vector(13) - kron(cvec(ea.vectors.col(1)), cvec(ec.vectors.col(1)))).norm(), 1e-14);
}

TEST(ProjectOutcome, ProductStateAndOrthogonalVector) {
    std::mt19937 rng(2);
    const auto a = spinport::testing::random_state(rng, 2), b = spinport::testing::random_state(rng, 3),
               c = spinport::testing::random_state(rng, 1);
    const auto psi = tensor_product({a, b, c});
    const cvec v = kron(a.amplitudes(), c.amplitudes());
    const auto r = project_outcome(psi, v, OutcomeLabel::joint(0, 0));
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    ASSERT_FALSE(r.negligible());
    EXPECT_NEAR(fidelity(*r.conditional_b, b), 1.0, 1e-12);

    // A vector orthogonal to a (x) c.
    cvec w = spinport::testing::random_vector(rng, 6);
    w -= v * v.dot(w);
    w.normalize();
    const auto r0 = project_outcome(psi, w, OutcomeLabel::joint(0, 1));
    EXPECT_LT(r0.probability, 1e-12);
    EXPECT_TRUE(r0.negligible());
    EXPECT_THROW(project_outcome(psi, cvec::Ones(5).normalized(), OutcomeLabel::joint(0, 0)), std::invalid_argument);
}

TEST(EnumerateOutcomes, ProbabilitiesSumToOne) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto psi = spinport::testing::random_composite(rng, {4, 3, 5});
        double total = 0.0;
        const auto recs = enumerate_outcomes(psi, ac_measurement_basis(3, 4));
        for (const auto& r : recs) {
            total += r.probability;
            if (!r.negligible()) EXPECT_NEAR(r.conditional_b->amplitudes().norm(), 1.0, 1e-10);
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_TRUE(std::is_sorted(recs.begin(), recs.end(),
                                   [](const auto& x, const auto& y) { return x.label < y.label; }));
    }
    EXPECT_THROW(enumerate_outcomes(spinport::testing::random_composite(rng, {3, 3, 3}), ac_measurement_basis(3, 4)),
                 std::invalid_argument);
}

TEST(OutcomeLabel, RoundTripAndErrors) {
    for (const auto& l : {OutcomeLabel::bell(3), OutcomeLabel::joint(4, 10)})
        EXPECT_EQ(OutcomeLabel::parse(l.to_string()), l);
    EXPECT_THROW(OutcomeLabel::parse("bell:7"), std::invalid_argument);
    EXPECT_THROW(OutcomeLabel::parse("joint:1"), std::invalid_argument);
    EXPECT_THROW(OutcomeLabel::parse("x"), std::invalid_argument);
}
