// ubqcsim: run delegated-computation sessions and experiments from JSON
// configs, emit JSON transcripts and reports, and expose the compiler and
// oracles for standalone use.
//
// Exit codes: 0 = pass, 1 = error, 2 = verdict fail.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ubqc/config.hpp"
#include "ubqc/executor.hpp"

using namespace ubqc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    bool quiet = false;
    bool dump_state = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* c = cmd->add_option("--config", args.config_path, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_path, "write the JSON result here");
    cmd->add_option("--runs", args.runs, "override the config run count");
    cmd->add_flag("--quiet", args.quiet, "suppress the stdout summary");
    cmd->add_flag("--dump-state", args.dump_state,
                  "include the final amplitudes in the output (debug)");
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

void write_out(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << j.dump(1) << "\n";
}

int finish_report(const ExperimentReport& rep, const CommonArgs& args) {
    nlohmann::json j = rep.to_json();
    write_out(args.out_path, j);
    if (!args.quiet) std::cout << rep.text_summary();
    return rep.all_pass() ? kExitPass : kExitFail;
}

int cmd_run(const CommonArgs& args) {
    nlohmann::json cfg_json = load_config(args.config_path);
    RunConfig cfg = RunConfig::from_json(cfg_json);
    if (args.seed) cfg.seed = *args.seed;

    int cap = cfg.max_qubits;
    if (const char* env = std::getenv("UBQC_MAX_QUBITS")) {
        int v = std::atoi(env);
        if (v > 0) cap = v;
    }
    Session session(cfg.seed, cfg.spec.k, cap);
    SessionOutcome out = run_delegated_computation(
        session, cfg.spec, product_inputs(cfg.inputs, cfg.input_angles), cfg.strategies);

    nlohmann::json result;
    result["seed"] = cfg.seed;
    result["outcome"] = out.to_json();
    result["transcript"] = session.bus.to_json();
    auto violations = audit_transcript(session.bus);
    result["audit_violations"] = violations;
    if (args.dump_state) result["amplitudes"] = session.state.amplitudes_json();
    write_out(args.out_path, result);
    if (!args.quiet) {
        std::cout << "y0 = " << (out.y0 == Verdict::Pass ? "pass" : "fail")
                  << "  bell_pairs=" << out.bell_pairs_used
                  << "  high_watermark=" << out.qubit_high_watermark
                  << "  messages=" << session.bus.size() << "\n";
        for (auto [wire, bit] : out.y) std::cout << "y[" << wire << "] = " << bit << "\n";
    }
    if (!violations.empty()) return kExitFail;
    return out.y0 == Verdict::Pass ? kExitPass : kExitFail;
}

int cmd_blindness(const CommonArgs& args) {
    BlindnessRunConfig cfg = BlindnessRunConfig::from_json(load_config(args.config_path));
    if (args.seed) cfg.seed = *args.seed;
    if (args.runs) cfg.blindness.runs = *args.runs;
    return finish_report(blindness_experiment(cfg.blindness, cfg.seed), args);
}

int cmd_authtest(const CommonArgs& args) {
    AuthTestConfig cfg = AuthTestConfig::from_json(load_config(args.config_path));
    if (args.seed) cfg.seed = *args.seed;
    if (args.runs) cfg.detection.runs = *args.runs;
    if (!cfg.sweep.empty())
        return finish_report(detection_sweep(cfg.detection.strategy, cfg.detection.base,
                                             cfg.sweep, cfg.detection.runs, cfg.seed),
                             args);
    return finish_report(detection_experiment(cfg.detection, cfg.seed), args);
}

int cmd_soundness(const CommonArgs& args) {
    SoundnessRunConfig cfg = SoundnessRunConfig::from_json(load_config(args.config_path));
    if (args.seed) cfg.seed = *args.seed;
    if (args.runs) cfg.soundness.honest_runs = *args.runs;
    return finish_report(soundness_delta_experiment(cfg.soundness, cfg.seed), args);
}

int cmd_compile(const CommonArgs& args) {
    CircuitDescription circuit = CircuitDescription::from_json(load_config(args.config_path));
    CompiledPattern cp = compile_circuit(circuit);
    nlohmann::json j;
    j["pattern"] = cp.pattern.to_json();
    j["n"] = cp.pattern.graph.n();
    j["m"] = cp.pattern.graph.m();
    // One Bell pair per remote-prepared site.
    j["bell_pair_estimate"] = (cp.pattern.graph.n() - 1) * cp.pattern.graph.m();
    write_out(args.out_path, j);
    if (!args.quiet)
        std::cout << "n = " << cp.pattern.graph.n() << ", m = " << cp.pattern.graph.m()
                  << ", bell pairs ~ " << j["bell_pair_estimate"] << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delegated blind quantum computation simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, blind_args, auth_args, sound_args, compile_args;
    auto* run = app.add_subcommand("run", "run one delegated computation session");
    add_common(run, run_args);
    auto* blind = app.add_subcommand("blindness", "prover-view indistinguishability experiment");
    add_common(blind, blind_args);
    auto* auth = app.add_subcommand("authtest", "trap-detection experiment or n_C sweep");
    add_common(auth, auth_args);
    auto* sound = app.add_subcommand("soundness", "QMIP completeness/soundness experiment");
    add_common(sound, sound_args);
    auto* compile = app.add_subcommand("compile", "compile a circuit to a measurement pattern");
    add_common(compile, compile_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitError;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (blind->parsed()) return cmd_blindness(blind_args);
        if (auth->parsed()) return cmd_authtest(auth_args);
        if (sound->parsed()) return cmd_soundness(sound_args);
        if (compile->parsed()) return cmd_compile(compile_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
