#pragma once

// The teleportation learning loop: entangle A and B, couple A with the input
// C, measure A (x) C, learn a correction rotation for B per (input, outcome),
// fold the per-input solutions into one rotation per outcome, and evaluate the
// resulting library on a set of inputs.

#include "spinport/circular.hpp"
#include "spinport/classical_bench.hpp"
#include "spinport/dynamics.hpp"
#include "spinport/measurement.hpp"
#include "spinport/optimize.hpp"
#include "spinport/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace spinport {

enum class Scheme { qubit_bell, su11, su2, not_gate };
enum class QubitCase { I, II, III };

class Prior {
public:
    static Prior uniform() { return Prior(0.0); }
    /// beta = 0 is the uniform limit.
    static Prior von_mises_fisher(double beta) {
        detail::require(std::isfinite(beta), "Prior: beta must be finite");
        return Prior(beta);
    }

    bool is_uniform() const { return beta_ == 0.0; }
    double beta() const { return beta_; }

private:
    explicit Prior(double beta) : beta_(beta) {}
    double beta_;
};

/// beta e^{beta cos(theta)} / (4 pi sinh(beta)), evaluated without overflow.
inline double prior_weight(const Prior& prior, const BlochPoint& p) {
    const double beta = prior.beta();
    if (std::abs(beta) < 1e-10) return 1.0 / (4.0 * pi);
    const double b = std::abs(beta);
    const double c = beta > 0 ? std::cos(p.theta) : -std::cos(p.theta);
    return b * std::exp(b * (c - 1.0)) / (2.0 * pi * -std::expm1(-2.0 * b));
}

struct SamplingGrid {
    int n_theta = 40;
};

/// 2 floor(n_theta sin(theta)), clamped to at least one sample (the poles).
inline int phi_count(int n_theta, double theta) {
    const int n = 2 * static_cast<int>(std::floor(n_theta * std::sin(theta)));
    return std::max(1, n);
}

/// theta linear on [0, pi] (endpoints included), phi linear on [0, 2pi).
inline std::vector<BlochPoint> sample_bloch_grid(const SamplingGrid& grid) {
    detail::require(grid.n_theta >= 2, "SamplingGrid: n_theta must be >= 2");
    std::vector<BlochPoint> pts;
    for (int i = 0; i < grid.n_theta; ++i) {
        const double theta = (i == grid.n_theta - 1) ? pi : pi * i / (grid.n_theta - 1);
        const int n_phi = phi_count(grid.n_theta, theta);
        for (int k = 0; k < n_phi; ++k) pts.emplace_back(theta, 2 * pi * k / n_phi);
    }
    return pts;
}

inline BlochPoint antipode(const BlochPoint& p) { return BlochPoint(pi - p.theta, p.phi + pi); }

/// exp(-i phi Jz) exp(-i theta Jy) |dicke n>, with the same global-phase
/// convention as coherent_state (so n = 0 reproduces it).
inline SpinState rotated_dicke(int n_particles, int n_excitations, const BlochPoint& p) {
    const SpinState d = dicke_state(n_particles, n_excitations);
    const auto ops = angular_momentum_ops(n_particles);
    const HermitianEigen ey(ops.y.matrix());
    cvec v = ey.apply_exp_minus_i(p.theta, d.amplitudes());
    const double j = 0.5 * n_particles;
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) *= std::polar(1.0, -p.phi * (j - k) + j * p.phi);
    return SpinState::normalized(n_particles, v);
}

struct InputFamily {
    enum class Kind { coherent, rotated_dicke };
    Kind kind = Kind::coherent;
    int excitations = 0;

    static InputFamily coherent() { return {}; }
    static InputFamily dicke(int n) { return {Kind::rotated_dicke, n}; }
};

inline SpinState input_state(const InputFamily& family, int n_particles, const BlochPoint& p) {
    if (family.kind == InputFamily::Kind::coherent) return coherent_state(n_particles, p);
    return rotated_dicke(n_particles, family.excitations, p);
}

/// Same orientation on B's Bloch sphere; Dicke inputs keep their excitation
/// count, which must fit in B.
inline SpinState retarget_state(const BlochPoint& p, int n_b, const InputFamily& family = InputFamily::coherent()) {
    if (family.kind == InputFamily::Kind::rotated_dicke)
        detail::require(family.excitations <= n_b, "retarget_state: excitation count exceeds B's particle number");
    return input_state(family, n_b, p);
}

struct Scenario {
    Scheme scheme = Scheme::su11;
    QubitCase qubit_case = QubitCase::I;
    int n_a = 10;
    int n_b = 10;
    int n_c = 10;
    double t_ab = 0.094;
    double t_ac = 0.094;
    Parameterization parameterization = Parameterization::two_axis;
    Prior prior = Prior::uniform();
    SamplingGrid grid{};
    Observable measure_a = Observable::jx;
    Observable measure_c = Observable::jy;
    InputFamily input = InputFamily::coherent();
    /// Multiply the prior weight by the outcome probability when averaging.
    bool probability_weighted_averaging = false;
    OptimizerSettings optimizer{};
    /// Per-outcome starting angles; outcomes not listed start from optimizer.x0.
    std::map<OutcomeLabel, std::vector<double>> x0_by_outcome;

    void validate() const {
        detail::require(n_a >= 1 && n_b >= 1 && n_c >= 1, "Scenario: particle counts must be >= 1");
        detail::require(t_ab > 0.0 && std::isfinite(t_ab), "Scenario: t_ab must be > 0");
        if (scheme == Scheme::qubit_bell)
            detail::require(n_a == 1 && n_b == 1 && n_c == 1, "Scenario: Bell measurement needs single qubits");
        else
            detail::require(t_ac > 0.0 && std::isfinite(t_ac), "Scenario: t_ac must be > 0");
        detail::require(grid.n_theta >= 2, "Scenario: n_theta must be >= 2");
        if (input.kind == InputFamily::Kind::rotated_dicke)
            detail::require(input.excitations >= 0 && input.excitations <= std::min(n_c, n_b),
                            "Scenario: Dicke excitation count out of range");
        for (const auto& [label, x0] : x0_by_outcome)
            detail::require(static_cast<int>(x0.size()) == parameter_count(parameterization),
                            "Scenario: x0 length does not match parameterization");
    }
};

// Closed-form corrections for the ideal qubit pair, outcome k -> (alpha, beta, gamma).
inline const double kQubitExactAngles[4][3] = {
    {pi / 4, pi, -pi / 4}, {0.0, 0.0, pi / 2}, {0.0, 0.0, -pi / 2}, {-pi / 4, pi, pi / 4}};

inline const double kQubitCaseIIStart[4][3] = {
    {1.61, 1.34, -2.16}, {0.54, -0.72, -2.35}, {0.81, 0.0, -0.24}, {1.18, 3.14, -0.67}};

inline std::vector<std::vector<double>> default_restarts(Parameterization p) {
    if (p == Parameterization::two_axis) {
        const double h = pi / 2, d = 0.75 * pi / std::sqrt(2.0);
        return {{h, 0}, {-h, 0}, {0, h}, {0, -h}, {pi, 0}, {-pi, 0}, {0, pi}, {0, -pi},
                {d, d}, {-d, d}, {d, -d}, {-d, -d}};
    }
    const double h = pi / 2;
    return {{0, h, 0}, {0, -h, 0}, {0, pi, 0}, {h, h, -h}, {-h, h, h}, {h, pi, -h}, {-h, pi, h}, {h, 0, h}};
}

/// Sign of the prior concentration that peaks the prior where the target
/// coincides with B's starting pole (after the pre-rotation for SU2/NOT):
/// +1 for the north pole (theta = 0), -1 for the south pole.
inline int favored_pole(Scheme s) {
    switch (s) {
    case Scheme::su2: return 1;
    case Scheme::su11:
    case Scheme::not_gate: return -1;
    default: return 1;
    }
}

/// Single-qubit teleportation through a Bell measurement.
inline Scenario qubit_scenario(QubitCase c, int n_theta = 40) {
    Scenario s;
    s.scheme = Scheme::qubit_bell;
    s.qubit_case = c;
    s.n_a = s.n_b = s.n_c = 1;
    s.t_ab = pi / 4;
    s.t_ac = 0.0;
    s.grid.n_theta = n_theta;
    s.parameterization = c == QubitCase::III ? Parameterization::two_axis : Parameterization::euler;
    for (int k = 0; k < 4; ++k) {
        const auto label = OutcomeLabel::bell(k + 1);
        switch (c) {
        case QubitCase::I:
            s.x0_by_outcome[label] = {kQubitExactAngles[k][0] + 0.01, kQubitExactAngles[k][1] + 0.01,
                                      kQubitExactAngles[k][2] + 0.01};
            break;
        case QubitCase::II:
            s.x0_by_outcome[label] = {kQubitCaseIIStart[k][0], kQubitCaseIIStart[k][1], kQubitCaseIIStart[k][2]};
            break;
        case QubitCase::III: s.x0_by_outcome[label] = {pi / 4, pi / 2}; break;
        }
    }
    return s;
}

/// N-particle coherent-state teleportation. Defaults: t_ab = 0.094; SU(1,1)
/// couples A and C under -H_Q for 0.094, SU(2) and NOT under +H_Q for pi/(4 N_A).
inline Scenario coherent_scenario(Scheme scheme, int n, int n_theta = 40) {
    detail::require(scheme != Scheme::qubit_bell, "coherent_scenario: use qubit_scenario for Bell measurements");
    Scenario s;
    s.scheme = scheme;
    s.n_a = s.n_b = s.n_c = n;
    s.t_ab = n == 1 ? pi / 4 : 0.094;
    s.t_ac = scheme == Scheme::su11 ? 0.094 : pi / (4.0 * n);
    s.grid.n_theta = n_theta;
    s.parameterization = Parameterization::two_axis;
    s.optimizer.restarts = default_restarts(s.parameterization);
    s.optimizer.restart_below = 0.9;
    return s;
}

/// A at the north pole, B at the south pole (ground state of -Jz_A + Jz_B),
/// evolved under chi [(Jx_A + Jx_B)^2 + (Jy_A + Jy_B)^2], chi = 1.
inline CompositeState prepare_entangled_pair(int n_a, int n_b, double t_ab) {
    detail::require(t_ab >= 0.0 && std::isfinite(t_ab), "prepare_entangled_pair: time must be >= 0");
    const int dims[] = {n_a + 1, n_b + 1};
    LinearCoefficients k;
    k.species[0].z = -1.0;
    k.species[1].z = 1.0;
    const HermitianEigen hl(build_linear_hamiltonian(k, dims).matrix());
    cvec ground = hl.vectors().col(0);
    for (Eigen::Index i = 0; i < ground.size(); ++i)
        if (std::abs(ground(i)) > 1e-10) {
            ground *= std::conj(ground(i)) / std::abs(ground(i));
            break;
        }
    const CompositeState start(std::vector<int>(std::begin(dims), std::end(dims)), ground.normalized());
    return Propagator(build_quadratic_hamiltonian({1.0}, dims)).evolve(start, t_ab);
}

inline CompositeState prepare_entangled_pair(const Scenario& s) { return prepare_entangled_pair(s.n_a, s.n_b, s.t_ab); }

/// Everything about a scenario that does not depend on the input state,
/// built once and shared read-only across inputs.
class TeleportationSetup {
public:
    explicit TeleportationSetup(const Scenario& s)
        : scenario_(s), pair_(prepare_entangled_pair(s)), basis_(make_basis(s)),
          rotator_(std::make_shared<SpinRotator>(s.n_b)) {
        if (s.scheme != Scheme::qubit_bell) {
            const int dims[] = {s.n_a + 1, s.n_c + 1};
            const double sign = s.scheme == Scheme::su11 ? -1.0 : 1.0;
            const Propagator prop(build_quadratic_hamiltonian({sign}, dims));
            u_ac_ = prop.matrix(s.t_ac);
        }
        if (s.scheme == Scheme::su2 || s.scheme == Scheme::not_gate)
            pre_rotation_ = HermitianEigen(rotator_->ops().x.matrix()).exp_minus_i(pi);
    }

    const Scenario& scenario() const { return scenario_; }
    const CompositeState& pair() const { return pair_; }
    const MeasurementBasis& basis() const { return basis_; }
    const std::shared_ptr<const SpinRotator>& rotator() const { return rotator_; }

    SpinState input(const BlochPoint& p) const { return input_state(scenario_.input, scenario_.n_c, p); }

    /// What B should end up in: the input retargeted onto B's sphere, or its antipode for NOT.
    SpinState target(const BlochPoint& p) const {
        const BlochPoint q = scenario_.scheme == Scheme::not_gate ? antipode(p) : p;
        return retarget_state(q, scenario_.n_b, scenario_.input);
    }

    std::vector<OutcomeRecord> couple_and_measure(const SpinState& psi_c) const {
        return couple_and_measure(pair_, psi_c);
    }

    std::vector<OutcomeRecord> couple_and_measure(const CompositeState& psi_ab, const SpinState& psi_c) const {
        detail::require(psi_ab.subsystems() == 2 && psi_ab.dims()[0] == scenario_.n_a + 1 &&
                            psi_ab.dims()[1] == scenario_.n_b + 1 && psi_c.n_particles() == scenario_.n_c,
                        "couple_and_measure: dimensions do not match scenario");
        CompositeState abc = tensor_product(psi_ab, psi_c);
        if (u_ac_) {
            static constexpr int slots[] = {0, 2};
            const SlotSplit split(abc.dims(), slots);
            cvec amp = split.fold(*u_ac_ * split.unfold(abc.amplitudes()));
            amp.normalize();
            abc = CompositeState(abc.dims(), std::move(amp));
        }
        auto records = enumerate_outcomes(abc, basis_);
        if (pre_rotation_)
            for (auto& r : records)
                if (r.conditional_b) r.conditional_b = SpinState::normalized(scenario_.n_b, *pre_rotation_ * r.conditional_b->amplitudes());
        return records;
    }

private:
    static MeasurementBasis make_basis(const Scenario& s) {
        if (s.scheme == Scheme::qubit_bell) return bell_basis();
        return ac_measurement_basis(s.n_a, s.n_c, s.measure_a, s.measure_c);
    }

    Scenario scenario_;
    CompositeState pair_;
    MeasurementBasis basis_;
    std::shared_ptr<const SpinRotator> rotator_;
    std::optional<cmat> u_ac_;
    std::optional<cmat> pre_rotation_;
};

inline std::vector<OutcomeRecord> couple_and_measure(const CompositeState& psi_ab, const SpinState& psi_c,
                                                     const Scenario& s) {
    return TeleportationSetup(s).couple_and_measure(psi_ab, psi_c);
}

// ---------------------------------------------------------------------------
// Library

struct LibraryEntry {
    UnitaryParams params;
    int sample_count = 0;
    bool degenerate = false;
};

struct AngleLibrary {
    Scenario scenario;
    std::string build_timestamp; ///< empty unless requested; keeps output reproducible
    std::map<OutcomeLabel, LibraryEntry> entries;

    const LibraryEntry* find(const OutcomeLabel& l) const {
        auto it = entries.find(l);
        return it == entries.end() ? nullptr : &it->second;
    }
};

/// Optimized correction for one (input, outcome) pair.
struct PairResult {
    std::size_t input_index = 0;
    BlochPoint point;
    double prior_weight = 0.0;
    OutcomeLabel label;
    double probability = 0.0;
    UnitaryParams params;
    double fidelity = 0.0;
    bool converged = true;
};

struct LibraryBuild {
    AngleLibrary library;
    std::vector<BlochPoint> inputs;
    std::vector<PairResult> raw; ///< ordered by input, then outcome label
    int unconverged = 0;

    double fraction_pairs_above(double threshold) const {
        if (raw.empty()) return 0.0;
        std::size_t n = 0;
        for (const auto& r : raw) n += r.fidelity > threshold;
        return static_cast<double>(n) / raw.size();
    }
};

/// One circular mean per angle component and outcome. Weights are the prior
/// weights p(psi_i), times the outcome probability if requested.
inline AngleLibrary average_library(std::span<const PairResult> raw, const Scenario& scenario,
                                    const Prior& prior, bool probability_weighted = false) {
    detail::require(!raw.empty(), "average_library: no results to average");
    std::map<OutcomeLabel, std::vector<const PairResult*>> groups;
    for (const auto& r : raw) groups[r.label].push_back(&r);

    AngleLibrary lib;
    lib.scenario = scenario;
    lib.scenario.prior = prior;
    lib.scenario.probability_weighted_averaging = probability_weighted;
    for (const auto& [label, members] : groups) {
        const Parameterization kind = members.front()->params.kind();
        const int n = parameter_count(kind);
        std::vector<double> weights;
        std::vector<std::vector<double>> comps(n);
        for (const auto* m : members) {
            detail::require(m->params.kind() == kind, "average_library: mixed parameterizations for one outcome");
            double w = prior_weight(prior, m->point);
            if (probability_weighted) w *= m->probability;
            weights.push_back(w);
            const auto v = m->params.to_vector();
            for (int c = 0; c < n; ++c) comps[c].push_back(v[c]);
        }
        LibraryEntry e;
        e.sample_count = static_cast<int>(members.size());
        std::vector<double> mean(n);
        for (int c = 0; c < n; ++c) {
            const auto cm = weighted_circular_mean(comps[c], weights);
            mean[c] = cm.angle;
            e.degenerate = e.degenerate || cm.degenerate;
        }
        e.params = UnitaryParams::from_vector(kind, mean);
        lib.entries.emplace(label, e);
    }
    return lib;
}

inline AngleLibrary average_library(std::span<const PairResult> raw, const Scenario& scenario) {
    return average_library(raw, scenario, scenario.prior, scenario.probability_weighted_averaging);
}

inline OptimizerSettings settings_for(const Scenario& s, const OutcomeLabel& label) {
    OptimizerSettings st = s.optimizer;
    if (auto it = s.x0_by_outcome.find(label); it != s.x0_by_outcome.end()) st.x0 = it->second;
    return st;
}

/// Learns a correction for every sampled input and every non-negligible
/// outcome, then averages them into the library.
inline LibraryBuild build_library(const Scenario& s, std::vector<BlochPoint> inputs, unsigned threads = 0) {
    s.validate();
    detail::require(!inputs.empty(), "build_library: no inputs");
    const TeleportationSetup setup(s);
    LibraryBuild out;
    out.inputs = std::move(inputs);
    std::vector<std::vector<PairResult>> per_input(out.inputs.size());

    parallel_for(out.inputs.size(), [&](std::size_t i) {
        const BlochPoint p = out.inputs[i];
        const SpinState target = setup.target(p);
        const double w = prior_weight(s.prior, p);
        for (const auto& rec : setup.couple_and_measure(setup.input(p))) {
            if (rec.negligible()) continue;
            const CorrectionObjective obj(setup.rotator(), {target, *rec.conditional_b, s.parameterization});
            const auto c = optimize_correction(obj, settings_for(s, rec.label));
            per_input[i].push_back({i, p, w, rec.label, rec.probability, c.params, c.fidelity, c.converged});
        }
    }, threads);

    for (auto& v : per_input)
        for (auto& r : v) {
            out.unconverged += !r.converged;
            out.raw.push_back(std::move(r));
        }
    out.library = average_library(out.raw, s);
    return out;
}

inline LibraryBuild build_library(const Scenario& s, unsigned threads = 0) {
    s.validate();
    return build_library(s, sample_bloch_grid(s.grid), threads);
}

// ---------------------------------------------------------------------------
// Evaluation

struct PairFidelity {
    BlochPoint point;
    OutcomeLabel label;
    double probability = 0.0;
    double fidelity_optimized = std::numeric_limits<double>::quiet_NaN();
    double fidelity_library = 0.0;
    bool missing_entry = false; ///< identity correction used
};

struct InputFidelity {
    BlochPoint point;
    double prior_weight = 0.0;
    double mean_fidelity = 0.0; ///< outcome-probability weighted
};

struct FidelityReport {
    std::vector<PairFidelity> pairs;
    std::vector<InputFidelity> inputs;
    double grand_mean = 0.0; ///< prior weighted over inputs
    double benchmark = std::numeric_limits<double>::quiet_NaN();
    double fraction_above_benchmark = std::numeric_limits<double>::quiet_NaN();
    int missing_entries = 0;

    /// Prior-weighted share of inputs whose mean fidelity exceeds `value`.
    double fraction_above(double value) const {
        double above = 0.0, total = 0.0;
        for (const auto& in : inputs) {
            total += in.prior_weight;
            if (in.mean_fidelity > value) above += in.prior_weight;
        }
        return total > 0 ? above / total : 0.0;
    }

    /// As fraction_above, restricted to the theta rows that contain at least
    /// one input above `value`. Zero if there are none.
    double fraction_above_in_region(double value) const {
        std::map<double, bool> row_hit;
        for (const auto& in : inputs) row_hit[in.point.theta] |= in.mean_fidelity > value;
        double above = 0.0, total = 0.0;
        for (const auto& in : inputs) {
            if (!row_hit[in.point.theta]) continue;
            total += in.prior_weight;
            if (in.mean_fidelity > value) above += in.prior_weight;
        }
        return total > 0 ? above / total : 0.0;
    }

    void set_benchmark(double value) {
        benchmark = value;
        fraction_above_benchmark = fraction_above(value);
    }
};

/// Maps an eigen-index on a sphere of n_from particles to the index with the
/// nearest eigenvalue after rescaling onto a sphere of n_to particles.
inline int rescale_index(int index, int n_from, int n_to) {
    if (n_from == n_to) return index;
    const double m = 0.5 * n_from - index;
    const double m_to = m * static_cast<double>(n_to) / n_from;
    return std::clamp(static_cast<int>(std::lround(0.5 * n_to - m_to)), 0, n_to);
}

/// Library label for an outcome measured with possibly different A/C sizes.
inline OutcomeLabel library_label(const OutcomeLabel& measured, const Scenario& eval, const Scenario& lib) {
    if (measured.kind == OutcomeLabel::Kind::bell) return measured;
    return OutcomeLabel::joint(rescale_index(measured.a, eval.n_a, lib.n_a), rescale_index(measured.c, eval.n_c, lib.n_c));
}

/// Applies the library's rotation for each outcome and scores it against
/// the target. A, B, C sizes and the input family come from `scenario`, which
/// may differ from the scenario the library was built with.
inline FidelityReport evaluate_teleportation(const AngleLibrary& library, const Scenario& scenario,
                                             std::span<const BlochPoint> inputs, unsigned threads = 0) {
    scenario.validate();
    const TeleportationSetup setup(scenario);
    std::vector<std::vector<PairFidelity>> per_input(inputs.size());
    std::vector<InputFidelity> in_fid(inputs.size());

    parallel_for(inputs.size(), [&](std::size_t i) {
        const BlochPoint p = inputs[i];
        const SpinState target = setup.target(p);
        double acc = 0.0, ptot = 0.0;
        for (const auto& rec : setup.couple_and_measure(setup.input(p))) {
            if (rec.negligible()) continue;
            PairFidelity pf{p, rec.label, rec.probability};
            const LibraryEntry* e = library.find(library_label(rec.label, scenario, library.scenario));
            const UnitaryParams params = e ? e->params : UnitaryParams::identity(scenario.parameterization);
            pf.missing_entry = e == nullptr;
            pf.fidelity_library =
                std::min(1.0, std::norm(target.amplitudes().dot(setup.rotator()->apply(params, rec.conditional_b->amplitudes()))));
            acc += rec.probability * pf.fidelity_library;
            ptot += rec.probability;
            per_input[i].push_back(pf);
        }
        in_fid[i] = {p, prior_weight(scenario.prior, p), ptot > 0 ? acc / ptot : 0.0};
    }, threads);

    FidelityReport rep;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (auto& pf : per_input[i]) {
            rep.missing_entries += pf.missing_entry;
            rep.pairs.push_back(pf);
        }
        num += in_fid[i].prior_weight * in_fid[i].mean_fidelity;
        den += in_fid[i].prior_weight;
    }
    rep.inputs = std::move(in_fid);
    rep.grand_mean = den > 0 ? num / den : 0.0;
    return rep;
}

/// Copies per-pair optimized fidelities from a build into a report on the same inputs.
inline void attach_optimized(FidelityReport& rep, const LibraryBuild& build) {
    std::map<std::pair<std::size_t, OutcomeLabel>, double> lookup;
    for (const auto& r : build.raw) lookup[{r.input_index, r.label}] = r.fidelity;
    std::size_t input = 0;
    for (auto& pf : rep.pairs) {
        while (input < build.inputs.size() && !(build.inputs[input] == pf.point)) ++input;
        if (input == build.inputs.size()) return;
        if (auto it = lookup.find({input, pf.label}); it != lookup.end()) pf.fidelity_optimized = it->second;
    }
}

} // namespace spinport
