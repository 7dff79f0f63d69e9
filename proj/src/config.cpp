#include "ubqc/config.hpp"

#include <set>

namespace ubqc {

void require_fields(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key()))
            throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

Init init_from_name(const std::string& name) {
    if (name == "zero") return Init::Zero;
    if (name == "one") return Init::One;
    if (name == "plus") return Init::Plus;
    if (name == "minus") return Init::Minus;
    if (name == "plus_i") return Init::PlusI;
    if (name == "minus_i") return Init::MinusI;
    if (name == "planar") return Init::Planar;
    throw ConfigError("unknown input state: " + name);
}

const char* init_name(Init i) {
    switch (i) {
        case Init::Zero: return "zero";
        case Init::One: return "one";
        case Init::Plus: return "plus";
        case Init::Minus: return "minus";
        case Init::PlusI: return "plus_i";
        case Init::MinusI: return "minus_i";
        case Init::Planar: return "planar";
    }
    return "?";
}

namespace {

CodeSpec code_from_json(const nlohmann::json& j) {
    require_fields(j, {"n_C"}, "code");
    CodeSpec c;
    c.n_c = j.value("n_C", 1);
    if (c.n_c < 1 || c.n_c > 5) throw ConfigError("code n_C out of desk-scale range");
    return c;
}

DelegationSpec spec_from_json(const nlohmann::json& j) {
    DelegationSpec d;
    d.circuit = CircuitDescription::from_json(j.at("circuit"));
    d.k = j.value("k", 2);
    d.assignment = j.at("assignment").get<std::vector<int>>();
    if (j.contains("code")) d.code = code_from_json(j.at("code"));
    d.validate();
    return d;
}

std::pair<std::vector<Init>, std::vector<Angle>> inputs_from_json(const nlohmann::json& j,
                                                                  int wires) {
    std::vector<Init> inits;
    std::vector<Angle> angles;
    for (const auto& e : j) {
        require_fields(e, {"state", "angle"}, "inputs[]");
        inits.push_back(init_from_name(e.at("state").get<std::string>()));
        angles.push_back(Angle(e.value("angle", 0)));
    }
    if (static_cast<int>(inits.size()) != wires)
        throw ConfigError("inputs must list one state per circuit wire");
    return {inits, angles};
}

} // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    require_fields(j, {"k", "code", "circuit", "assignment", "inputs", "seed", "strategies",
                       "max_qubits"},
                   "run config");
    RunConfig c;
    c.spec = spec_from_json(j);
    if (j.contains("inputs")) {
        std::tie(c.inputs, c.input_angles) =
            inputs_from_json(j.at("inputs"), c.spec.circuit.num_wires);
    } else {
        c.inputs.assign(c.spec.circuit.num_wires, Init::Zero);
    }
    if (j.contains("strategies"))
        for (const auto& s : j.at("strategies")) c.strategies.push_back(Strategy::from_json(s));
    c.seed = j.value("seed", 0);
    c.max_qubits = j.value("max_qubits", 22);
    return c;
}

BlindnessRunConfig BlindnessRunConfig::from_json(const nlohmann::json& j) {
    require_fields(j, {"circuit_a", "circuit_b", "k", "code", "assignment", "prover", "runs",
                       "window", "force_r_zero", "alpha", "seed"},
                   "blindness config");
    BlindnessRunConfig c;
    c.blindness.circuit_a = CircuitDescription::from_json(j.at("circuit_a"));
    c.blindness.circuit_b = CircuitDescription::from_json(j.at("circuit_b"));
    c.blindness.base.circuit = c.blindness.circuit_a;
    c.blindness.base.k = j.value("k", 2);
    c.blindness.base.assignment = j.at("assignment").get<std::vector<int>>();
    if (j.contains("code")) c.blindness.base.code = code_from_json(j.at("code"));
    c.blindness.base.validate();
    c.blindness.prover = j.value("prover", 1);
    c.blindness.runs = j.value("runs", 10000);
    c.blindness.window = j.value("window", 3);
    c.blindness.force_r_zero = j.value("force_r_zero", false);
    c.blindness.alpha = j.value("alpha", 0.01);
    c.seed = j.value("seed", 0);
    return c;
}

AuthTestConfig AuthTestConfig::from_json(const nlohmann::json& j) {
    require_fields(j, {"strategy", "k", "code", "circuit", "assignment", "inputs", "runs",
                       "disable_traps", "tolerance", "sweep", "seed"},
                   "authtest config");
    AuthTestConfig c;
    c.detection.strategy = Strategy::from_json(j.at("strategy"));
    c.detection.base = spec_from_json(j);
    if (j.contains("inputs")) {
        auto [inits, angles] = inputs_from_json(j.at("inputs"), c.detection.base.circuit.num_wires);
        c.detection.inputs = inits;
    } else {
        c.detection.inputs.assign(c.detection.base.circuit.num_wires, Init::Zero);
    }
    c.detection.runs = j.value("runs", 10000);
    c.detection.disable_traps = j.value("disable_traps", false);
    c.detection.tolerance = j.value("tolerance", 0.03);
    if (j.contains("sweep")) c.sweep = j.at("sweep").get<std::vector<int>>();
    c.seed = j.value("seed", 0);
    return c;
}

SoundnessRunConfig SoundnessRunConfig::from_json(const nlohmann::json& j) {
    require_fields(j, {"qmip", "strategies", "honest_runs", "adversarial_runs",
                       "reference_trials", "completeness_tolerance", "soundness_slack", "seed"},
                   "soundness config");
    SoundnessRunConfig c;
    c.soundness.qmip = QmipSpec::from_json(j.at("qmip"));
    if (j.contains("strategies"))
        for (const auto& s : j.at("strategies"))
            c.soundness.strategies.push_back(Strategy::from_json(s));
    c.soundness.honest_runs = j.value("honest_runs", 10000);
    c.soundness.adversarial_runs = j.value("adversarial_runs", 2000);
    c.soundness.reference_trials = j.value("reference_trials", 20000);
    c.soundness.completeness_tolerance = j.value("completeness_tolerance", 0.02);
    c.soundness.soundness_slack = j.value("soundness_slack", 0.03);
    c.seed = j.value("seed", 0);
    return c;
}

} // namespace ubqc
