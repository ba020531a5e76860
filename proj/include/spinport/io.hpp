#pragma once

// Experiment configuration, library files and CSV output.
// Config and library files are JSON; CSV numbers use 12 significant digits.

#include "spinport/protocol.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spinport {

/// Invalid configuration or library contents (as opposed to I/O or numerical failures).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kLibrarySchemaVersion = 1;

namespace io_detail {

using json = nlohmann::json;

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<E, const char*> (&table)[N], const char* what) {
    for (const auto& [e, name] : table)
        if (s == name) return e;
    throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

template <class E, std::size_t N>
std::string enum_name(E e, const std::pair<E, const char*> (&table)[N]) {
    for (const auto& [v, name] : table)
        if (v == e) return name;
    return "?";
}

inline constexpr std::pair<Scheme, const char*> kSchemes[] = {
    {Scheme::qubit_bell, "qubit_bell"}, {Scheme::su11, "su11"}, {Scheme::su2, "su2"}, {Scheme::not_gate, "not"}};
inline constexpr std::pair<QubitCase, const char*> kCases[] = {
    {QubitCase::I, "I"}, {QubitCase::II, "II"}, {QubitCase::III, "III"}};
inline constexpr std::pair<Parameterization, const char*> kParams[] = {
    {Parameterization::euler, "euler"}, {Parameterization::two_axis, "two_axis"}};
inline constexpr std::pair<Observable, const char*> kObs[] = {
    {Observable::jx, "jx"}, {Observable::jy, "jy"}, {Observable::jz, "jz"}};
inline constexpr std::pair<GradientMode, const char*> kGrad[] = {
    {GradientMode::analytic, "analytic"}, {GradientMode::finite_difference, "finite_difference"}};

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class E, std::size_t N>
void read_enum(const json& j, const char* key, E& out, const std::pair<E, const char*> (&table)[N]) {
    std::string s;
    read(j, key, s);
    if (!s.empty()) out = parse_enum(s, table, key);
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (std::find_if(known.begin(), known.end(), [&](const char* n) { return k == n; }) == known.end())
            throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

} // namespace io_detail

inline std::string to_string(Scheme s) { return io_detail::enum_name(s, io_detail::kSchemes); }
inline std::string to_string(QubitCase c) { return io_detail::enum_name(c, io_detail::kCases); }
inline std::string to_string(Parameterization p) { return io_detail::enum_name(p, io_detail::kParams); }
inline Scheme parse_scheme(const std::string& s) { return io_detail::parse_enum(s, io_detail::kSchemes, "scheme"); }
inline QubitCase parse_qubit_case(const std::string& s) { return io_detail::parse_enum(s, io_detail::kCases, "case"); }

inline nlohmann::json optimizer_to_json(const OptimizerSettings& o) {
    nlohmann::json j;
    j["bounds"] = o.bounds;
    j["x0"] = o.x0;
    j["tol_f"] = o.tol_f;
    j["tol_x"] = o.tol_x;
    j["tol_g"] = o.tol_g;
    j["max_iter"] = o.max_iter;
    j["gradient"] = io_detail::enum_name(o.gradient, io_detail::kGrad);
    j["fd_step"] = o.fd_step;
    j["restarts"] = o.restarts;
    j["restart_below"] = o.restart_below;
    return j;
}

inline OptimizerSettings optimizer_from_json(const nlohmann::json& j, OptimizerSettings o = {}) {
    using namespace io_detail;
    reject_unknown(j, {"bounds", "x0", "tol_f", "tol_x", "tol_g", "max_iter", "gradient", "fd_step", "restarts",
                       "restart_below"},
                   "optimizer");
    read(j, "bounds", o.bounds);
    read(j, "x0", o.x0);
    read(j, "tol_f", o.tol_f);
    read(j, "tol_x", o.tol_x);
    read(j, "tol_g", o.tol_g);
    read(j, "max_iter", o.max_iter);
    read_enum(j, "gradient", o.gradient, kGrad);
    read(j, "fd_step", o.fd_step);
    read(j, "restarts", o.restarts);
    read(j, "restart_below", o.restart_below);
    return o;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    using namespace io_detail;
    json j;
    j["scheme"] = enum_name(s.scheme, kSchemes);
    j["qubit_case"] = enum_name(s.qubit_case, kCases);
    j["n_a"] = s.n_a;
    j["n_b"] = s.n_b;
    j["n_c"] = s.n_c;
    j["t_ab"] = s.t_ab;
    j["t_ac"] = s.t_ac;
    j["parameterization"] = enum_name(s.parameterization, kParams);
    j["prior_beta"] = s.prior.beta();
    j["n_theta"] = s.grid.n_theta;
    j["measure_a"] = enum_name(s.measure_a, kObs);
    j["measure_c"] = enum_name(s.measure_c, kObs);
    j["input"] = s.input.kind == InputFamily::Kind::coherent ? "coherent" : "dicke";
    j["dicke_excitations"] = s.input.excitations;
    j["probability_weighted_averaging"] = s.probability_weighted_averaging;
    j["optimizer"] = optimizer_to_json(s.optimizer);
    json x0 = json::object();
    for (const auto& [label, v] : s.x0_by_outcome) x0[label.to_string()] = v;
    j["x0_by_outcome"] = x0;
    return j;
}

/// Overlays the keys present in `j` on `base`, then validates.
inline Scenario scenario_from_json(const nlohmann::json& j, Scenario s = {}) {
    using namespace io_detail;
    reject_unknown(j, {"scheme", "qubit_case", "n_a", "n_b", "n_c", "t_ab", "t_ac", "parameterization", "prior_beta",
                       "n_theta", "measure_a", "measure_c", "input", "dicke_excitations",
                       "probability_weighted_averaging", "optimizer", "x0_by_outcome"},
                   "scenario");
    read_enum(j, "scheme", s.scheme, kSchemes);
    read_enum(j, "qubit_case", s.qubit_case, kCases);
    read(j, "n_a", s.n_a);
    read(j, "n_b", s.n_b);
    read(j, "n_c", s.n_c);
    read(j, "t_ab", s.t_ab);
    read(j, "t_ac", s.t_ac);
    read_enum(j, "parameterization", s.parameterization, kParams);
    if (j.contains("prior_beta")) {
        double beta = 0.0;
        read(j, "prior_beta", beta);
        if (!std::isfinite(beta)) throw ConfigError("prior_beta must be finite");
        s.prior = Prior::von_mises_fisher(beta);
    }
    read(j, "n_theta", s.grid.n_theta);
    read_enum(j, "measure_a", s.measure_a, kObs);
    read_enum(j, "measure_c", s.measure_c, kObs);
    if (j.contains("input")) {
        std::string kind;
        read(j, "input", kind);
        if (kind == "coherent") s.input = InputFamily::coherent();
        else if (kind == "dicke") s.input = InputFamily::dicke(0);
        else throw ConfigError("unknown input family '" + kind + "'");
    }
    read(j, "dicke_excitations", s.input.excitations);
    read(j, "probability_weighted_averaging", s.probability_weighted_averaging);
    if (j.contains("optimizer")) s.optimizer = optimizer_from_json(j.at("optimizer"), s.optimizer);
    if (j.contains("x0_by_outcome")) {
        const auto& m = j.at("x0_by_outcome");
        if (!m.is_object()) throw ConfigError("x0_by_outcome: expected an object");
        s.x0_by_outcome.clear();
        for (const auto& [k, v] : m.items()) {
            try {
                s.x0_by_outcome[OutcomeLabel::parse(k)] = v.get<std::vector<double>>();
            } catch (const std::exception& e) {
                throw ConfigError("x0_by_outcome: " + std::string(e.what()));
            }
        }
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

struct ExperimentConfig {
    Scenario scenario;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0; ///< reserved; nothing is random
    unsigned threads = 0;   ///< 0 = hardware concurrency
};

/// Reads a config file. Top-level keys: "scenario" (overlaid on `base`),
/// "output_dir", "seed", "threads".
inline ExperimentConfig load_config(const std::filesystem::path& path, const Scenario& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    io_detail::reject_unknown(j, {"scenario", "output_dir", "seed", "threads"}, "config");
    ExperimentConfig c;
    c.scenario = j.contains("scenario") ? scenario_from_json(j.at("scenario"), base) : base;
    std::string out;
    io_detail::read(j, "output_dir", out);
    if (!out.empty()) c.output_dir = out;
    io_detail::read(j, "seed", c.seed);
    io_detail::read(j, "threads", c.threads);
    return c;
}

// ---------------------------------------------------------------------------
// Library files

inline std::string library_to_string(const AngleLibrary& lib) {
    nlohmann::json j;
    j["schema_version"] = kLibrarySchemaVersion;
    j["build_timestamp"] = lib.build_timestamp;
    j["scenario"] = scenario_to_json(lib.scenario);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [label, e] : lib.entries) {
        nlohmann::json row;
        row["outcome"] = label.to_string();
        row["parameterization"] = to_string(e.params.kind());
        row["angles"] = e.params.to_vector();
        row["sample_count"] = e.sample_count;
        row["degenerate"] = e.degenerate;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

inline AngleLibrary library_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("library: malformed file: ") + e.what());
    }
    io_detail::reject_unknown(j, {"schema_version", "build_timestamp", "scenario", "entries"}, "library");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != kLibrarySchemaVersion)
        throw ConfigError("library: unsupported schema version");
    if (!j.contains("scenario") || !j.contains("entries") || !j["entries"].is_array())
        throw ConfigError("library: missing scenario or entries");
    AngleLibrary lib;
    io_detail::read(j, "build_timestamp", lib.build_timestamp);
    lib.scenario = scenario_from_json(j["scenario"]);
    for (const auto& row : j["entries"]) {
        io_detail::reject_unknown(row, {"outcome", "parameterization", "angles", "sample_count", "degenerate"},
                                  "library entry");
        try {
            const auto label = OutcomeLabel::parse(row.at("outcome").get<std::string>());
            const auto kind = io_detail::parse_enum(row.at("parameterization").get<std::string>(), io_detail::kParams,
                                                    "parameterization");
            LibraryEntry e;
            e.params = UnitaryParams::from_vector(kind, row.at("angles").get<std::vector<double>>());
            e.sample_count = row.at("sample_count").get<int>();
            e.degenerate = row.at("degenerate").get<bool>();
            if (e.sample_count < 0) throw ConfigError("negative sample count");
            if (!lib.entries.emplace(label, e).second) throw ConfigError("duplicate outcome " + label.to_string());
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("library entry: ") + ex.what());
        }
    }
    return lib;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void save_library(const AngleLibrary& lib, const std::filesystem::path& path) {
    write_text(path, library_to_string(lib));
}

inline AngleLibrary load_library(const std::filesystem::path& path) { return library_from_string(read_text(path)); }

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt12(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Raw per-pair rows, sorted by theta, then phi, then outcome.
inline std::string raw_csv(const FidelityReport& rep) {
    std::vector<const PairFidelity*> rows;
    for (const auto& p : rep.pairs) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(), [](const PairFidelity* a, const PairFidelity* b) {
        return std::tie(a->point.theta, a->point.phi, a->label) < std::tie(b->point.theta, b->point.phi, b->label);
    });
    std::string out = "theta,phi,outcome,probability,fidelity_optimized,fidelity_library\n";
    for (const auto* r : rows)
        out += fmt12(r->point.theta) + "," + fmt12(r->point.phi) + "," + r->label.to_string() + "," +
               fmt12(r->probability) + "," + fmt12(r->fidelity_optimized) + "," + fmt12(r->fidelity_library) + "\n";
    return out;
}

/// Per-input means, same ordering as raw_csv.
inline std::string input_csv(const FidelityReport& rep) {
    std::vector<const InputFidelity*> rows;
    for (const auto& p : rep.inputs) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(), [](const InputFidelity* a, const InputFidelity* b) {
        return std::tie(a->point.theta, a->point.phi) < std::tie(b->point.theta, b->point.phi);
    });
    std::string out = "theta,phi,prior_weight,mean_fidelity\n";
    for (const auto* r : rows)
        out += fmt12(r->point.theta) + "," + fmt12(r->point.phi) + "," + fmt12(r->prior_weight) + "," +
               fmt12(r->mean_fidelity) + "\n";
    return out;
}

inline std::string summary_csv(const FidelityReport& rep, int unconverged) {
    return "grand_mean,benchmark,fraction_above_benchmark,unconverged,missing_entries\n" + fmt12(rep.grand_mean) +
           "," + fmt12(rep.benchmark) + "," + fmt12(rep.fraction_above_benchmark) + "," +
           std::to_string(unconverged) + "," + std::to_string(rep.missing_entries) + "\n";
}

inline std::string curve_csv(const BenchmarkCurve& c, const std::string& abscissa = "mean_n",
                             const std::string& value = "fidelity") {
    std::string out = abscissa + "," + value + "\n";
    for (std::size_t i = 0; i < c.abscissa.size(); ++i) out += fmt12(c.abscissa[i]) + "," + fmt12(c.values[i]) + "\n";
    return out;
}

struct SweepRow {
    double beta = 0.0;
    double mean_n = 0.0;
    double fidelity_su11 = 0.0;
    double fidelity_su2 = 0.0;
    double fidelity_not = 0.0;
    double f_cl = 0.0;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "beta,mean_n,fidelity_su11,fidelity_su2,fidelity_not,f_cl\n";
    for (const auto& r : rows)
        out += fmt12(r.beta) + "," + fmt12(r.mean_n) + "," + fmt12(r.fidelity_su11) + "," + fmt12(r.fidelity_su2) +
               "," + fmt12(r.fidelity_not) + "," + fmt12(r.f_cl) + "\n";
    return out;
}

struct UnequalRow {
    int n_a = 0;
    int n_b = 0;
    int n_c = 0;
    double grand_mean = 0.0;
    double fraction_above_benchmark = 0.0;
};

inline std::string unequal_csv(const std::vector<UnequalRow>& rows) {
    std::string out = "n_a,n_b,n_c,grand_mean,fraction_above_benchmark\n";
    for (const auto& r : rows)
        out += std::to_string(r.n_a) + "," + std::to_string(r.n_b) + "," + std::to_string(r.n_c) + "," +
               fmt12(r.grand_mean) + "," + fmt12(r.fraction_above_benchmark) + "\n";
    return out;
}

struct DickeRow {
    int n = 0;
    double classical = 0.0;
    double grand_mean = 0.0;
    double fraction_above_classical = 0.0;
    double fraction_above_classical_in_region = 0.0;
};

inline std::string dicke_csv(const std::vector<DickeRow>& rows) {
    std::string out = "n,f_classical,grand_mean,fraction_above_classical,fraction_above_classical_in_region\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + fmt12(r.classical) + "," + fmt12(r.grand_mean) + "," +
               fmt12(r.fraction_above_classical) + "," + fmt12(r.fraction_above_classical_in_region) + "\n";
    return out;
}

} // namespace spinport
