#include "test_util.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

using namespace spinport;

TEST(SamplingGrid, Counts) {
    EXPECT_EQ(phi_count(200, pi / 2), 400);
    EXPECT_EQ(phi_count(40, 0.0), 1);
    EXPECT_EQ(phi_count(40, pi), 1);
    const auto g = sample_bloch_grid({10});
    EXPECT_EQ(g.front().theta, 0.0);
    EXPECT_EQ(g.back().theta, pi);
    std::size_t expect = 0;
    for (int i = 0; i < 10; ++i) expect += phi_count(10, i == 9 ? pi : pi * i / 9);
    EXPECT_EQ(g.size(), expect);
    for (const auto& p : g) {
        EXPECT_GE(p.phi, 0.0);
        EXPECT_LT(p.phi, 2 * pi);
    }
    EXPECT_THROW(sample_bloch_grid({1}), std::invalid_argument);
}

TEST(PriorWeight, ValuesAndNormalization) {
    EXPECT_NEAR(prior_weight(Prior::uniform(), {1.0, 2.0}), 1 / (4 * pi), 1e-15);
    EXPECT_NEAR(prior_weight(Prior::von_mises_fisher(2.0), {0.0, 0.0}), 2 * std::exp(2.0) / (4 * pi * std::sinh(2.0)),
                1e-13);
    EXPECT_NEAR(prior_weight(Prior::von_mises_fisher(1e-12), {0.4, 0}), 1 / (4 * pi), 1e-12);
    EXPECT_TRUE(std::isfinite(prior_weight(Prior::von_mises_fisher(5000.0), {0.0, 0.0})));
    EXPECT_NEAR(prior_weight(Prior::von_mises_fisher(-3.0), {0.3, 0}),
                prior_weight(Prior::von_mises_fisher(3.0), {pi - 0.3, 0}), 1e-15);
    for (double beta : {0.5, 4.0, -20.0}) {
        const double total = 2 * pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                          [&](double t) {
                                              return prior_weight(Prior::von_mises_fisher(beta), {t, 0}) * std::sin(t);
                                          },
                                          0, pi, 15, 1e-13);
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(InputStates, RotatedDickeAndAntipode) {
    const BlochPoint p(1.1, 0.6);
    EXPECT_LT((rotated_dicke(7, 0, p).amplitudes() - coherent_state(7, p).amplitudes()).norm(), 1e-12);
    EXPECT_LT((rotated_dicke(7, 3, {0, 0}).amplitudes() - dicke_state(7, 3).amplitudes()).norm(), 1e-12);
    const auto d = rotated_dicke(6, 2, p);
    EXPECT_NEAR(d.amplitudes().norm(), 1.0, 1e-12);
    // Rotations preserve the Casimir and the distribution over |J.n|.
    const auto ops = angular_momentum_ops(6);
    const cmat j2 = ops.x.matrix() * ops.x.matrix() + ops.y.matrix() * ops.y.matrix() + ops.z.matrix() * ops.z.matrix();
    EXPECT_NEAR(expectation(j2, d.amplitudes()), 12.0, 1e-10);
    const cmat jn = std::sin(p.theta) * std::cos(p.phi) * ops.x.matrix() +
                    std::sin(p.theta) * std::sin(p.phi) * ops.y.matrix() + std::cos(p.theta) * ops.z.matrix();
    EXPECT_NEAR(expectation(jn, d.amplitudes()), 1.0, 1e-10);

    const auto a = antipode(p);
    EXPECT_NEAR(fidelity(coherent_state(5, a), coherent_state(5, p)), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(retarget_state(p, 4), coherent_state(4, p)), 1.0, 1e-14);
    EXPECT_THROW(retarget_state(p, 2, InputFamily::dicke(3)), std::invalid_argument);
}

TEST(EntangledPair, Examples) {
    EXPECT_NEAR(entanglement_entropy(prepare_entangled_pair(1, 1, pi / 4), {0}), std::log(2.0), 1e-10);
    const auto start = prepare_entangled_pair(4, 3, 0.0);
    EXPECT_NEAR(entanglement_entropy(start, {0}), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(start.amplitudes()(0 * 4 + 3)), 1.0, 1e-12);
    EXPECT_THROW(prepare_entangled_pair(2, 2, -1.0), std::invalid_argument);
}

TEST(CoupleAndMeasure, ProbabilitiesAndOutcomeCount) {
    const Scenario s = coherent_scenario(Scheme::su11, 10, 4);
    const TeleportationSetup setup(s);
    const auto recs = setup.couple_and_measure(setup.input({0.7, 1.3}));
    EXPECT_EQ(recs.size(), 121u);
    double total = 0.0;
    for (const auto& r : recs) total += r.probability;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_THROW(setup.couple_and_measure(coherent_state(9, {0, 0})), std::invalid_argument);
    // Free function agrees with the setup.
    const auto again = couple_and_measure(setup.pair(), setup.input({0.7, 1.3}), s);
    for (std::size_t k = 0; k < recs.size(); ++k) EXPECT_NEAR(again[k].probability, recs[k].probability, 1e-14);
}

TEST(BuildLibrary, QubitCaseIIsPerfect) {
    const auto b = build_library(qubit_scenario(QubitCase::I, 6));
    EXPECT_EQ(b.library.entries.size(), 4u);
    for (const auto& r : b.raw) EXPECT_GT(r.fidelity, 0.999999);
    const auto rep = evaluate_teleportation(b.library, b.library.scenario, b.inputs);
    EXPECT_GT(rep.grand_mean, 0.999);
    for (const auto& in : rep.inputs) EXPECT_GT(in.mean_fidelity, 2.0 / 3.0);
    EXPECT_EQ(rep.missing_entries, 0);
}

TEST(BuildLibrary, SingleInputLibraryReproducesOptimum) {
    Scenario s = coherent_scenario(Scheme::su11, 2, 4);
    const auto b = build_library(s, {BlochPoint(pi, 0.0)}, 1);
    auto rep = evaluate_teleportation(b.library, s, b.inputs, 1);
    attach_optimized(rep, b);
    ASSERT_EQ(rep.pairs.size(), b.raw.size());
    for (const auto& pf : rep.pairs) EXPECT_NEAR(pf.fidelity_library, pf.fidelity_optimized, 1e-9);
    for (const auto& [label, e] : b.library.entries) EXPECT_EQ(e.sample_count, 1);
}

TEST(AverageLibrary, WeightedCircularMeanPerOutcome) {
    Scenario s = coherent_scenario(Scheme::su11, 2, 4);
    const auto l = OutcomeLabel::joint(0, 0);
    std::vector<PairResult> raw;
    raw.push_back({0, {0.5, 0}, 0, l, 0.2, UnitaryParams(TwoAxis{0.1, 3.0}), 0.9, true});
    raw.push_back({1, {2.5, 0}, 0, l, 0.8, UnitaryParams(TwoAxis{0.3, -3.0}), 0.9, true});
    raw.push_back({1, {2.5, 0}, 0, OutcomeLabel::joint(1, 0), 0.8, UnitaryParams(TwoAxis{1.0, 1.0}), 0.9, true});
    const auto lib = average_library(raw, s, Prior::uniform());
    ASSERT_EQ(lib.entries.size(), 2u);
    const auto v = lib.find(l)->params.to_vector();
    EXPECT_NEAR(v[0], 0.2, 1e-12);
    EXPECT_NEAR(std::abs(v[1]), pi, 1e-12);
    EXPECT_EQ(lib.find(l)->sample_count, 2);

    const auto pw = average_library(raw, s, Prior::uniform(), true);
    const std::complex<double> z = 0.2 * std::polar(1.0, 0.1) + 0.8 * std::polar(1.0, 0.3);
    EXPECT_NEAR(pw.find(l)->params.to_vector()[0], std::arg(z), 1e-12);
    EXPECT_TRUE(pw.scenario.probability_weighted_averaging);

    // North-peaked prior pulls the mean toward the theta = 0.5 sample.
    const auto vmf = average_library(raw, s, Prior::von_mises_fisher(5.0));
    EXPECT_LT(std::abs(vmf.find(l)->params.to_vector()[0] - 0.1), 0.01);
    EXPECT_THROW(average_library(std::vector<PairResult>{}, s, Prior::uniform()), std::invalid_argument);
}

TEST(Evaluate, MissingEntriesFallBackToIdentity) {
    Scenario s = coherent_scenario(Scheme::su11, 2, 4);
    AngleLibrary empty;
    empty.scenario = s;
    const BlochPoint pts[] = {BlochPoint(pi, 0)};
    const auto rep = evaluate_teleportation(empty, s, pts, 1);
    EXPECT_EQ(rep.missing_entries, static_cast<int>(rep.pairs.size()));
    const TeleportationSetup setup(s);
    for (const auto& pf : rep.pairs) {
        EXPECT_TRUE(pf.missing_entry);
        for (const auto& r : setup.couple_and_measure(setup.input(pts[0])))
            if (r.label == pf.label) EXPECT_NEAR(pf.fidelity_library, fidelity(setup.target(pts[0]), *r.conditional_b), 1e-12);
    }
}

TEST(BuildLibrary, DeterministicAcrossThreadCounts) {
    const Scenario s = coherent_scenario(Scheme::su11, 2, 4);
    const auto a = build_library(s, 1);
    const auto b = build_library(s, 3);
    ASSERT_EQ(a.raw.size(), b.raw.size());
    for (std::size_t i = 0; i < a.raw.size(); ++i) {
        EXPECT_EQ(a.raw[i].label, b.raw[i].label);
        EXPECT_EQ(a.raw[i].fidelity, b.raw[i].fidelity);
        EXPECT_EQ(a.raw[i].params.to_vector(), b.raw[i].params.to_vector());
    }
}

TEST(BuildLibrary, NotGateIsImperfect) {
    const Scenario s = coherent_scenario(Scheme::not_gate, 2, 4);
    const auto b = build_library(s, 1);
    const auto rep = evaluate_teleportation(b.library, s, b.inputs, 1);
    EXPECT_LT(rep.grand_mean, 1.0);
    EXPECT_GT(rep.grand_mean, 0.0);
}

TEST(Evaluate, FractionsAndRegion) {
    FidelityReport rep;
    rep.inputs = {{{0.0, 0}, 1.0, 0.9}, {{1.0, 0}, 1.0, 0.2}, {{1.0, 1}, 1.0, 0.95}, {{2.0, 0}, 2.0, 0.1}};
    EXPECT_NEAR(rep.fraction_above(0.5), 2.0 / 5.0, 1e-15);
    EXPECT_NEAR(rep.fraction_above_in_region(0.5), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(rep.fraction_above_in_region(0.99), 0.0);
    rep.set_benchmark(0.5);
    EXPECT_EQ(rep.fraction_above_benchmark, rep.fraction_above(0.5));
}

TEST(RescaleIndex, NearestEigenvalue) {
    EXPECT_EQ(rescale_index(3, 10, 10), 3);
    EXPECT_EQ(rescale_index(0, 9, 10), 0);
    EXPECT_EQ(rescale_index(9, 9, 10), 10);
    EXPECT_EQ(rescale_index(11, 11, 10), 10);
    EXPECT_EQ(rescale_index(5, 10, 20), 10);
    Scenario lib = coherent_scenario(Scheme::su11, 10, 4), eval = lib;
    eval.n_a = 11;
    EXPECT_EQ(library_label(OutcomeLabel::joint(11, 4), eval, lib), OutcomeLabel::joint(10, 4));
    EXPECT_EQ(library_label(OutcomeLabel::bell(2), eval, lib), OutcomeLabel::bell(2));
}

TEST(Scenario, Validation) {
    Scenario s = coherent_scenario(Scheme::su2, 3, 4);
    EXPECT_NO_THROW(s.validate());
    EXPECT_NEAR(s.t_ac, pi / 12, 1e-15);
    s.n_a = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = qubit_scenario(QubitCase::II);
    s.n_b = 2;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = coherent_scenario(Scheme::su11, 3, 4);
    s.input = InputFamily::dicke(4);
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_THROW(coherent_scenario(Scheme::qubit_bell, 1), std::invalid_argument);
    EXPECT_EQ(favored_pole(Scheme::su2), 1);
    EXPECT_EQ(favored_pole(Scheme::su11), -1);
}
