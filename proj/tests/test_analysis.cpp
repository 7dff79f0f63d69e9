#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ubqc/analysis.hpp"
#include "ubqc/config.hpp"

using namespace ubqc;

namespace {

CircuitDescription circ(int wires, std::vector<CircuitGate> gates) {
    CircuitDescription c;
    c.num_wires = wires;
    c.gates = std::move(gates);
    return c;
}

CircuitDescription empty_prover_circuit() { return CircuitDescription{}; }

// 1-round toy: prover 1 prepares M1 = |1>, the verifier copies it onto the
// output qubit and measures. Honest acceptance 1.
QmipSpec toy_accept_always() {
    QmipSpec q;
    q.k = 2;
    q.m_sizes = {1, 0};
    q.p_sizes = {0, 0};
    QmipSpec::Round r;
    r.prover_circuits = {circ(1, {CircuitGate::x(0)}), empty_prover_circuit()};
    r.verifier_circuit = circ(2, {CircuitGate::cx(0, 1), CircuitGate::measure_z(1)});
    q.rounds = {r};
    return q;
}

// V-register-only toy: the verifier flips a coin on her private register.
// Honest acceptance 1/2; fast (single block).
QmipSpec toy_coin() {
    QmipSpec q;
    q.k = 2;
    q.m_sizes = {0, 0};
    q.p_sizes = {0, 0};
    QmipSpec::Round r;
    r.prover_circuits = {empty_prover_circuit(), empty_prover_circuit()};
    r.verifier_circuit = circ(1, {CircuitGate::h(0), CircuitGate::measure_z(0)});
    q.rounds = {r};
    return q;
}

// Two rounds: the first writes |1> into the encrypted register V held at P1,
// the second reads it back. Exercises the Lemma-1 handoff.
QmipSpec toy_two_rounds() {
    QmipSpec q;
    q.k = 2;
    q.m_sizes = {0, 0};
    q.p_sizes = {0, 0};
    QmipSpec::Round r1, r2;
    r1.prover_circuits = {empty_prover_circuit(), empty_prover_circuit()};
    r1.verifier_circuit = circ(1, {CircuitGate::x(0)});
    r2.prover_circuits = {empty_prover_circuit(), empty_prover_circuit()};
    r2.verifier_circuit = circ(1, {CircuitGate::measure_z(0)});
    q.rounds = {r1, r2};
    return q;
}

} // namespace

TEST_CASE("direct reference: always-one verifier accepts with probability 1") {
    QmipSpec q = toy_accept_always();
    CHECK(direct_qmip_reference(q, 1, 200) == doctest::Approx(1.0));
}

TEST_CASE("direct reference: coin verifier accepts near 1/2") {
    QmipSpec q = toy_coin();
    double p = direct_qmip_reference(q, 2, 10000);
    CHECK(p == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("simulated QMIP: completeness on the always-accept toy") {
    QmipSpec q = toy_accept_always();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        QmipResult r = run_qmip_simulation(q, {}, seed);
        REQUIRE_FALSE(r.any_fail);
        REQUIRE(r.accepted);
    }
}

TEST_CASE("simulated QMIP: coin acceptance tracks the reference") {
    QmipSpec q = toy_coin();
    int acc = 0;
    const int runs = 600;
    for (int i = 0; i < runs; ++i) acc += run_qmip_simulation(q, {}, 100 + i).accepted;
    double sim = static_cast<double>(acc) / runs;
    CHECK(sim == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("two-round QMIP: the encrypted register V survives the handoff") {
    QmipSpec q = toy_two_rounds();
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        QmipResult r = run_qmip_simulation(q, {}, 500 + seed);
        REQUIRE_FALSE(r.any_fail);
        REQUIRE(r.accepted); // X|0> = |1> read back a round later
    }
}

TEST_CASE("adversarial QMIP: tampering is rejected at the oracle rate") {
    QmipSpec q = toy_accept_always();
    Strategy st;
    st.variant = Strategy::Variant::PauliAttack;
    st.weight = 1;
    st.timing = Strategy::Timing::DuringUbqc;
    DetectionStats oracle = detection_oracle(st, {q.code, 2, Init::Zero, {}});

    int rejected = 0;
    const int runs = 250;
    for (int i = 0; i < runs; ++i) {
        QmipResult r = run_qmip_simulation(q, {st}, 900 + i);
        rejected += r.any_fail ? 1 : 0;
    }
    double rate = static_cast<double>(rejected) / runs;
    CHECK(rate >= oracle.p_detect - 0.1);
}

TEST_CASE("qmip spec validation") {
    QmipSpec q = toy_accept_always();
    q.rounds.back().verifier_circuit = circ(2, {CircuitGate::cx(0, 1)});
    CHECK_THROWS_AS(q.validate(), ConfigError);

    QmipSpec q2 = toy_accept_always();
    q2.m_sizes = {1};
    CHECK_THROWS_AS(q2.validate(), ConfigError);

    QmipSpec q3 = toy_accept_always();
    nlohmann::json j = q3.to_json();
    QmipSpec back = QmipSpec::from_json(j);
    CHECK(back.rounds.size() == 1);
    CHECK(back.m_sizes == std::vector<int>{1, 0});
}

TEST_CASE("blindness: identical circuits stay inside the noise bound") {
    BlindnessConfig cfg;
    cfg.circuit_a = circ(1, {CircuitGate::h(0)});
    cfg.circuit_b = circ(1, {CircuitGate::h(0)});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.runs = 600;
    ExperimentReport rep = blindness_experiment(cfg, 42);
    CHECK(rep.all_pass());
}

TEST_CASE("blindness: different gates of equal dimensions are indistinguishable") {
    BlindnessConfig cfg;
    cfg.circuit_a = circ(1, {CircuitGate::zrot(0, Angle(0)), CircuitGate::measure_z(0)});
    cfg.circuit_b = circ(1, {CircuitGate::x(0), CircuitGate::measure_z(0)});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.runs = 600;
    ExperimentReport rep = blindness_experiment(cfg, 43);
    CHECK(rep.all_pass());
}

TEST_CASE("blindness negative control: forcing r = 0 leaks the classical output") {
    BlindnessConfig cfg;
    cfg.circuit_a = circ(1, {CircuitGate::zrot(0, Angle(0)), CircuitGate::measure_z(0)});
    cfg.circuit_b = circ(1, {CircuitGate::x(0), CircuitGate::measure_z(0)});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.runs = 400;
    cfg.force_r_zero = true;
    ExperimentReport rep = blindness_experiment(cfg, 44);
    CHECK_FALSE(rep.all_pass()); // the broken variant must violate its bounds
}

TEST_CASE("blindness rejects dimension mismatches") {
    BlindnessConfig cfg;
    cfg.circuit_a = circ(1, {CircuitGate::h(0)});
    cfg.circuit_b = circ(1, {});
    cfg.base.assignment = {2};
    CHECK_THROWS_AS(blindness_experiment(cfg, 1), ConfigError);
}

TEST_CASE("detection experiment matches the oracle and classifies branches") {
    DetectionConfig cfg;
    cfg.strategy.variant = Strategy::Variant::PauliAttack;
    cfg.strategy.weight = 1;
    cfg.strategy.timing = Strategy::Timing::DuringUbqc;
    cfg.base.circuit = circ(1, {});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.inputs = {Init::Zero};
    cfg.runs = 1500;
    ExperimentReport rep = detection_experiment(cfg, 77);
    CHECK(rep.all_pass());
    CHECK(rep.statistics.at("oracle_detect").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("detection negative control: disabled traps violate the threshold") {
    DetectionConfig cfg;
    cfg.strategy.variant = Strategy::Variant::PauliAttack;
    cfg.strategy.weight = 1;
    cfg.base.circuit = circ(1, {});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.inputs = {Init::Zero};
    cfg.runs = 300;
    cfg.disable_traps = true;
    ExperimentReport rep = detection_experiment(cfg, 78);
    CHECK_FALSE(rep.all_pass()); // detection collapses to zero, off the oracle
}

TEST_CASE("detection sweep: monotone oracle and log-linear decay") {
    Strategy st;
    st.variant = Strategy::Variant::PauliAttack;
    st.weight = 1;
    DelegationSpec base;
    base.circuit = circ(1, {});
    base.k = 2;
    base.assignment = {2};
    ExperimentReport rep = detection_sweep(st, base, {1, 2, 3}, 800, 99);
    CHECK(rep.all_pass());
    CHECK(rep.statistics.at("undetected_log_linear_r2").get<double>() >= 0.9);
}

TEST_CASE("soundness experiment: completeness and strategy bounds on the coin toy") {
    SoundnessConfig cfg;
    cfg.qmip = toy_coin();
    Strategy tamper;
    tamper.variant = Strategy::Variant::PauliAttack;
    tamper.weight = 1;
    tamper.timing = Strategy::Timing::DuringUbqc;
    cfg.strategies = {tamper};
    cfg.honest_runs = 800;
    cfg.adversarial_runs = 300;
    cfg.reference_trials = 20000;
    ExperimentReport rep = soundness_delta_experiment(cfg, 123);
    CHECK(rep.all_pass());
}

TEST_CASE("reports are reproducible bit-exactly from (config, seed)") {
    DetectionConfig cfg;
    cfg.strategy.variant = Strategy::Variant::AngleTamper;
    cfg.strategy.offset = Angle(4);
    cfg.base.circuit = circ(1, {});
    cfg.base.k = 2;
    cfg.base.assignment = {2};
    cfg.inputs = {Init::Zero};
    cfg.runs = 150;
    std::string a = detection_experiment(cfg, 31).to_json().dump();
    std::string b = detection_experiment(cfg, 31).to_json().dump();
    CHECK(a == b);
    std::string c = detection_experiment(cfg, 32).to_json().dump();
    CHECK(a != c);
}

TEST_CASE("config parsing: strict schemas reject unknown fields") {
    nlohmann::json good = {
        {"k", 2},
        {"circuit", {{"wires", 1}, {"gates", nlohmann::json::array()}}},
        {"assignment", {2}},
        {"inputs", {{{"state", "plus"}}}},
        {"seed", 5},
    };
    RunConfig cfg = RunConfig::from_json(good);
    CHECK(cfg.spec.k == 2);
    CHECK(cfg.inputs[0] == Init::Plus);

    nlohmann::json bad = good;
    bad["surprise"] = true;
    CHECK_THROWS_AS(RunConfig::from_json(bad), ConfigError);

    nlohmann::json bad2 = good;
    bad2["inputs"][0]["state"] = "sideways";
    CHECK_THROWS_AS(RunConfig::from_json(bad2), ConfigError);
}
