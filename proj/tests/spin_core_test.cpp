#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace spinport;
using spinport::testing::max_abs;

TEST(AngularMomentum, SpinHalfIsHalfPauli) {
    const auto ops = angular_momentum_ops(1);
    cmat sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -I, I, 0;
    sz << 1, 0, 0, -1;
    EXPECT_LT(max_abs(ops.x.matrix() - 0.5 * sx), 1e-15);
    EXPECT_LT(max_abs(ops.y.matrix() - 0.5 * sy), 1e-15);
    EXPECT_LT(max_abs(ops.z.matrix() - 0.5 * sz), 1e-15);
}

TEST(AngularMomentum, JzSpectrumForTenParticles) {
    const auto ops = angular_momentum_ops(10);
    const Eigen::SelfAdjointEigenSolver<cmat> es(ops.z.matrix());
    for (int k = 0; k <= 10; ++k) EXPECT_NEAR(es.eigenvalues()(k), -5.0 + k, 1e-12);
}

TEST(AngularMomentum, RejectsZeroParticles) { EXPECT_THROW(angular_momentum_ops(0), std::invalid_argument); }

TEST(CoherentState, Poles) {
    for (int n : {1, 4, 10}) {
        const auto north = coherent_state(n, {0.0, 1.3});
        const auto south = coherent_state(n, {pi, 0.0});
        EXPECT_NEAR(std::abs(north.amplitudes()(0)), 1.0, 1e-14);
        EXPECT_NEAR(std::abs(south.amplitudes()(n)), 1.0, 1e-14);
    }
}

TEST(CoherentState, MeanExcitation) {
    for (double theta : {0.1, 0.7, pi / 2, 2.5}) {
        const auto s = coherent_state(10, {theta, 0.4});
        double k = 0.0;
        for (int i = 0; i <= 10; ++i) k += i * std::norm(s.amplitudes()(i));
        EXPECT_NEAR(k, 10 * std::pow(std::sin(theta / 2), 2), 1e-12);
    }
}

TEST(CoherentState, IsRotatedPole) {
    // exp(-i phi Jz) exp(-i theta Jy)|j,j> with an independent Taylor exponential, up to global phase.
    const int n = 6;
    const auto ops = angular_momentum_ops(n);
    const BlochPoint p(1.1, 2.3);
    const cvec ref = spinport::testing::expm_taylor(ops.z.matrix(), p.phi) *
                     spinport::testing::expm_taylor(ops.y.matrix(), p.theta) * dicke_state(n, 0).amplitudes();
    EXPECT_NEAR(std::abs(ref.dot(coherent_state(n, p).amplitudes())), 1.0, 1e-12);
}

TEST(CoherentState, QubitBlochVector) {
    const auto ops = angular_momentum_ops(1);
    for (double theta : {0.0, 0.4, 1.2, pi / 2, 2.9, pi})
        for (double phi : {0.0, 0.8, 3.0, 5.5}) {
            const auto s = coherent_state(1, {theta, phi});
            EXPECT_NEAR(expectation(ops.x, s), 0.5 * std::sin(theta) * std::cos(phi), 1e-10);
            EXPECT_NEAR(expectation(ops.y, s), 0.5 * std::sin(theta) * std::sin(phi), 1e-10);
            EXPECT_NEAR(expectation(ops.z, s), 0.5 * std::cos(theta), 1e-10);
        }
}

TEST(CoherentState, OverlapWithNorthPole) {
    for (int n : {1, 5, 10})
        for (double theta : {0.3, 1.4, 2.2}) {
            const double f = fidelity(coherent_state(n, {0, 0}), coherent_state(n, {theta, 0.9}));
            EXPECT_NEAR(f, std::pow(std::cos(theta / 2), 2 * n), 1e-12);
        }
}

TEST(BlochPoint, WrapsPhiAndRejectsTheta) {
    EXPECT_NEAR(BlochPoint(0.5, 2 * pi + 0.25).phi, 0.25, 1e-12);
    EXPECT_NEAR(BlochPoint(0.5, -0.25).phi, 2 * pi - 0.25, 1e-12);
    EXPECT_THROW(BlochPoint(-0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(BlochPoint(3.5, 0.0), std::invalid_argument);
}

TEST(DickeState, Basics) {
    EXPECT_LT((dicke_state(7, 0).amplitudes() - coherent_state(7, {0, 0}).amplitudes()).norm(), 1e-14);
    EXPECT_EQ(dicke_state(4, 2).amplitudes()(2), cplx(1.0));
    const auto ops = angular_momentum_ops(9);
    for (int n = 0; n <= 9; ++n) EXPECT_NEAR(expectation(ops.z, dicke_state(9, n)), 4.5 - n, 1e-14);
    EXPECT_THROW(dicke_state(4, 5), std::invalid_argument);
    EXPECT_THROW(dicke_state(4, -1), std::invalid_argument);
}

TEST(TensorProduct, PolePairAndNorm) {
    const auto c = tensor_product({dicke_state(3, 0), dicke_state(3, 3)});
    EXPECT_EQ(c.dims(), (std::vector<int>{4, 4}));
    EXPECT_EQ(c.amplitudes()(0 * 4 + 3), cplx(1.0));
    std::mt19937 rng(3);
    const auto t = tensor_product({spinport::testing::random_state(rng, 10), spinport::testing::random_state(rng, 10),
                                   spinport::testing::random_state(rng, 10)});
    EXPECT_NEAR(t.amplitudes().squaredNorm(), 1.0, 1e-12);
    EXPECT_THROW(tensor_product(std::span<const SpinState>{}), std::invalid_argument);
}

TEST(EmbedLocal, Examples) {
    const int dims[] = {2, 2};
    const auto ops = angular_momentum_ops(1);
    const cmat z0 = embed_local(ops.z.matrix(), 0, dims);
    Eigen::Vector4d expect(0.5, 0.5, -0.5, -0.5);
    EXPECT_LT(max_abs(z0 - cmat(expect.cast<cplx>().asDiagonal())), 1e-15);
    EXPECT_LT(max_abs(embed_local(cmat(cmat::Identity(2, 2)), 1, dims) - cmat::Identity(4, 4)), 1e-15);
    const int dims3[] = {3, 4, 2};
    const auto a = angular_momentum_ops(2), b = angular_momentum_ops(3);
    const cmat xa = embed_local(a.x.matrix(), 0, dims3), yb = embed_local(b.y.matrix(), 1, dims3);
    EXPECT_LT(max_abs(xa * yb - yb * xa), 1e-13);
    EXPECT_THROW(embed_local(a.x.matrix(), 1, dims3), std::invalid_argument);
    EXPECT_THROW(embed_local(a.x.matrix(), 3, dims3), std::invalid_argument);
}

TEST(PartialTrace, Examples) {
    const auto prod = tensor_product({coherent_state(2, {0.4, 1.0}), coherent_state(3, {2.0, 0.2})});
    const cmat r = partial_trace(prod, {0});
    EXPECT_NEAR((r * r).trace().real(), 1.0, 1e-12);

    cvec bell = cvec::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    const cmat ra = partial_trace(CompositeState({2, 2}, bell), {0});
    EXPECT_LT(max_abs(ra - 0.5 * cmat::Identity(2, 2)), 1e-15);

    std::mt19937 rng(8);
    const auto psi = spinport::testing::random_composite(rng, {3, 2, 4});
    for (auto keep : {std::vector<int>{0}, std::vector<int>{2, 0}, std::vector<int>{1, 2}}) {
        const cmat rho = partial_trace(psi, keep);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<cmat>(rho).eigenvalues().minCoeff(), -1e-12);
    }
    // Element-by-element oracle for keep = {2}.
    const cmat rho_c = partial_trace(psi, {2});
    cmat ref = cmat::Zero(4, 4);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 4; ++c)
                for (int c2 = 0; c2 < 4; ++c2)
                    ref(c, c2) += psi.amplitudes()((a * 2 + b) * 4 + c) * std::conj(psi.amplitudes()((a * 2 + b) * 4 + c2));
    EXPECT_LT(max_abs(rho_c - ref), 1e-14);
    EXPECT_THROW(partial_trace(psi, {3}), std::invalid_argument);
    EXPECT_THROW(partial_trace(psi, std::span<const int>{}), std::invalid_argument);
}

TEST(RotationUnitary, Examples) {
    EXPECT_LT(max_abs(rotation_unitary(Euler{}, 5).matrix() - cmat::Identity(6, 6)), 1e-14);
    EXPECT_LT(max_abs(rotation_unitary(TwoAxis{}, 5).matrix() - cmat::Identity(6, 6)), 1e-14);
    const auto flipped = apply(rotation_unitary(Euler{0, pi, 0}, 1), dicke_state(1, 0));
    EXPECT_NEAR(std::abs(flipped.amplitudes()(1)), 1.0, 1e-12);
    // Two-axis rotation is a rotation by |theta| about the in-plane axis.
    const double tx = 0.7, ty = -1.1, r = std::hypot(tx, ty);
    const auto ops = angular_momentum_ops(1);
    const cmat axis = (tx * ops.x.matrix() + ty * ops.y.matrix()) / r;
    const cmat ref = std::cos(r / 2) * cmat::Identity(2, 2) - 2.0 * I * std::sin(r / 2) * axis;
    EXPECT_LT(max_abs(rotation_unitary(TwoAxis{tx, ty}, 1).matrix() - ref), 1e-12);
}

TEST(RotationUnitary, MatchesTaylorExponential) {
    const auto ops = angular_momentum_ops(7);
    using spinport::testing::expm_taylor;
    const Euler e{0.3, -2.1, 1.7};
    const cmat ref = expm_taylor(ops.z.matrix(), e.gamma) * expm_taylor(ops.x.matrix(), e.beta) *
                     expm_taylor(ops.z.matrix(), e.alpha);
    EXPECT_LT(max_abs(rotation_unitary(e, 7).matrix() - ref), 1e-11);
    const TwoAxis t{-0.4, 2.6};
    EXPECT_LT(max_abs(rotation_unitary(t, 7).matrix() -
                      expm_taylor(t.theta_x * ops.x.matrix() + t.theta_y * ops.y.matrix(), 1.0)),
              1e-11);
}

TEST(SpinRotator, AgreesWithRotationUnitary) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int n : {1, 4, 10}) {
        const SpinRotator rot(n);
        for (int trial = 0; trial < 10; ++trial) {
            const auto s = spinport::testing::random_state(rng, n);
            const UnitaryParams e = Euler{u(rng), u(rng), u(rng)};
            const UnitaryParams t = TwoAxis{u(rng), u(rng)};
            EXPECT_LT((rot.apply(e, s.amplitudes()) - rotation_unitary(e, n).matrix() * s.amplitudes()).norm(), 1e-11);
            EXPECT_LT((rot.apply(t, s.amplitudes()) - rotation_unitary(t, n).matrix() * s.amplitudes()).norm(), 1e-11);
        }
    }
}

TEST(UnitaryParams, Validation) {
    EXPECT_THROW(UnitaryParams(Euler{0, 3.2, 0}), std::invalid_argument);
    EXPECT_THROW(UnitaryParams(TwoAxis{-4, 0}), std::invalid_argument);
    const double xs[] = {0.1, 0.2};
    EXPECT_THROW(UnitaryParams::from_vector(Parameterization::euler, xs), std::invalid_argument);
    EXPECT_EQ(UnitaryParams::from_vector(Parameterization::two_axis, xs).to_vector(), (std::vector<double>{0.1, 0.2}));
}

TEST(Fidelity, Examples) {
    const auto s = coherent_state(4, {1.0, 2.0});
    EXPECT_NEAR(fidelity(s, s), 1.0, 1e-14);
    EXPECT_EQ(fidelity(dicke_state(4, 1), dicke_state(4, 3)), 0.0);
    EXPECT_THROW(fidelity(dicke_state(4, 1), dicke_state(3, 1)), std::invalid_argument);
}

TEST(States, InvariantsEnforced) {
    EXPECT_THROW(SpinState(2, cvec::Ones(3)), std::invalid_argument);
    EXPECT_THROW(SpinState(2, cvec::Zero(2)), std::invalid_argument);
    EXPECT_THROW(CompositeState({2, 2}, cvec::Zero(3)), std::invalid_argument);
    cmat nh = cmat::Zero(2, 2);
    nh(0, 1) = 1.0;
    EXPECT_THROW(HermitianOperator{nh}, std::invalid_argument);
    EXPECT_THROW(UnitaryOperator{cmat(2.0 * cmat::Identity(2, 2))}, std::invalid_argument);
}
