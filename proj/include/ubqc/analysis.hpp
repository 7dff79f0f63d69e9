#pragma once

#include "ubqc/qmip.hpp"

namespace ubqc {

// One experiment's outcome: named statistics plus one verdict line per
// checked threshold. Reports are reproducible bit-exactly from
// (config, seed).
struct ExperimentReport {
    std::string name;
    int runs = 0;
    std::uint64_t seed = 0;
    nlohmann::json statistics = nlohmann::json::object();
    std::vector<std::pair<bool, std::string>> verdicts;

    bool all_pass() const {
        for (const auto& [ok, what] : verdicts)
            if (!ok) return false;
        return true;
    }
    void check(bool ok, const std::string& what) { verdicts.push_back({ok, what}); }

    nlohmann::json to_json() const;
    std::string text_summary() const;
};

// Hoeffding deviation bound for an empirical frequency over n samples at
// confidence 1 - alpha, Bonferroni-corrected over `tests` simultaneous
// comparisons.
double hoeffding_bound(int n, double alpha, int tests = 1);

struct BlindnessConfig {
    CircuitDescription circuit_a;
    CircuitDescription circuit_b;
    DelegationSpec base;      // k, assignment, code (circuit field ignored)
    int prover = 1;           // whose view is compared
    int runs = 10000;         // sessions per circuit
    int window = 3;           // joint-distribution window (consecutive messages)
    bool force_r_zero = false;
    double alpha = 0.01;
};

// Compares the prover's classical view between two equal-dimension circuits:
// per-message empirical distributions, a sliding joint window, and averaged
// single-qubit reduced density matrices at the after-input-prep checkpoint.
// Also runs the exact 16-case delta-marginal enumeration.
ExperimentReport blindness_experiment(const BlindnessConfig& cfg, std::uint64_t seed);

struct DetectionConfig {
    Strategy strategy;
    DelegationSpec base;           // identity circuit is used for classification
    std::vector<Init> inputs;      // per wire
    int runs = 10000;
    bool disable_traps = false;    // negative control: verifier ignores traps
    double tolerance = 0.03;
};

// Empirical y0 = fail rate against the exact enumeration oracle, with runs
// classified into the authentication definition's branches via the
// direct-circuit oracle.
ExperimentReport detection_experiment(const DetectionConfig& cfg, std::uint64_t seed);

// Trap-count sweep at n_C in {1,2,3}: oracle detection monotonicity and a
// log-linear fit of the undetected-alteration rate.
ExperimentReport detection_sweep(const Strategy& strategy, const DelegationSpec& base,
                                 const std::vector<int>& n_cs, int empirical_runs,
                                 std::uint64_t seed);

struct SoundnessConfig {
    QmipSpec qmip;
    std::vector<Strategy> strategies; // evaluated one at a time
    int honest_runs = 10000;
    int adversarial_runs = 2000;
    int reference_trials = 20000;
    double completeness_tolerance = 0.02;
    double soundness_slack = 0.03;
};

// Completeness: |simulated honest acceptance - direct reference| within
// tolerance. Soundness: per strategy, simulated cheating acceptance stays
// below max(reference cheating acceptance, oracle undetected rate) + slack.
ExperimentReport soundness_delta_experiment(const SoundnessConfig& cfg, std::uint64_t seed);

} // namespace ubqc
