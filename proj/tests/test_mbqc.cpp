#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ubqc/compiler.hpp"
#include "ubqc/executor.hpp"

using namespace ubqc;

namespace {

// Direct-circuit oracle: applies the gates to qsim qubits with no pattern
// machinery. Returns the state and per-wire qubits (MeasureZ wires get
// measured; their bits are returned too).
struct DirectRun {
    StateVector state{30};
    std::vector<QubitId> wire;
    std::map<int, int> classical;
};

DirectRun run_direct(const CircuitDescription& c, const std::vector<Init>& inits,
                     const std::vector<Angle>& planar, Rng& rng) {
    DirectRun d;
    for (int w = 0; w < c.num_wires; ++w)
        d.wire.push_back(d.state.alloc(inits[w], planar.empty() ? Angle(0) : planar[w]));
    for (const auto& g : c.gates) {
        switch (g.op) {
            case GateOp::H: d.state.apply_gate(Gate::H, d.wire[g.a]); break;
            case GateOp::X: d.state.apply_gate(Gate::X, d.wire[g.a]); break;
            case GateOp::Zrot: d.state.apply_zrot(d.wire[g.a], g.angle); break;
            case GateOp::CX: d.state.apply_gate(Gate::CX, d.wire[g.a], d.wire[g.b]); break;
            case GateOp::CZ: d.state.apply_gate(Gate::CZ, d.wire[g.a], d.wire[g.b]); break;
            case GateOp::MeasureZ: d.classical[g.a] = d.state.measure_z(d.wire[g.a], rng); break;
        }
    }
    return d;
}

// Executes the compiled pattern of `c` on the given per-wire inputs and
// compares the (frame-corrected) outputs against the direct oracle.
double pattern_vs_direct(const CircuitDescription& c, const std::vector<Init>& inits,
                         const std::vector<Angle>& planar, std::uint64_t seed) {
    CompiledPattern cp = compile_circuit(c);

    Rng rng(seed);
    StateVector state(30);
    std::map<int, QubitId> inputs;
    for (int w = 0; w < c.num_wires; ++w)
        inputs[cp.meta.row_of_wire[w]] =
            state.alloc(inits[w], planar.empty() ? Angle(0) : planar[w]);

    std::set<int> classical_rows;
    for (auto& [row, wire] : cp.meta.classical_row_to_wire) classical_rows.insert(row);

    PatternRun run = simulate_pattern(cp.pattern, state, inputs, classical_rows, rng);
    apply_frame(state, run);

    Rng oracle_rng(seed + 101);
    DirectRun d = run_direct(c, inits, planar, oracle_rng);

    // d.state holds exactly the unmeasured wires in wire order; line the
    // pattern outputs up against it.
    std::vector<QubitId> outs;
    for (int w = 0; w < c.num_wires; ++w) {
        if (d.classical.count(w)) continue;
        outs.push_back(run.output_row_qubit.at(cp.meta.row_of_wire[w]));
    }
    if (outs.empty()) return 1.0;
    return state.fidelity(outs, d.state);
}

CircuitDescription circ(int wires, std::vector<CircuitGate> gates, std::string name = "") {
    CircuitDescription c;
    c.num_wires = wires;
    c.gates = std::move(gates);
    c.name = std::move(name);
    return c;
}

} // namespace

TEST_CASE("smallest brickwork graph has only horizontal edges") {
    BrickworkGraph g = build_brickwork(1, 2);
    auto edges = g.edges();
    CHECK(edges.size() == 2);
    CHECK(g.has_edge({0, 1}, {1, 1}));
    CHECK(g.has_edge({0, 2}, {1, 2}));
    CHECK_FALSE(g.has_vertical(0, 1));
    CHECK_FALSE(g.has_vertical(1, 1));
}

TEST_CASE("brick rule: vertical pairs at 3,5 (odd rows) and 11,13 (even rows)") {
    BrickworkGraph g = build_brickwork(16, 4);
    // odd pairs (1,2) and (3,4): columns 3 and 5
    for (int y : {1, 3}) {
        CHECK(g.has_vertical(3, y));
        CHECK(g.has_vertical(5, y));
        CHECK_FALSE(g.has_vertical(4, y));
        CHECK_FALSE(g.has_vertical(11, y));
    }
    // even pair (2,3): columns 11 and 13
    CHECK(g.has_vertical(11, 2));
    CHECK(g.has_vertical(13, 2));
    CHECK_FALSE(g.has_vertical(3, 2));

    // (8,2): the odd-pair brick fits (5 <= 7), the even family does not exist
    BrickworkGraph g8 = build_brickwork(8, 2);
    CHECK(g8.has_vertical(3, 1));
    CHECK(g8.has_vertical(5, 1));
    int vert = 0;
    for (auto& [a, b] : g8.edges())
        if (a.x == b.x) ++vert;
    CHECK(vert == 2);
}

TEST_CASE("graph construction is deterministic and validates m") {
    auto e1 = build_brickwork(16, 4).edges();
    auto e2 = build_brickwork(16, 4).edges();
    CHECK(e1 == e2);
    CHECK_THROWS_AS(build_brickwork(8, 3), DimensionError);
}

TEST_CASE("flow deps: first column feeds X-deps, tiny graph has empty Z-deps") {
    BrickworkGraph g = build_brickwork(1, 2);
    FlowDeps d = compute_flow_deps(g);
    CHECK(d.xdeps.at({1, 1}) == std::set<Site>{{0, 1}});
    CHECK(d.xdeps.at({1, 2}) == std::set<Site>{{0, 2}});
    CHECK(d.zdeps.count({1, 1}) == 0);

    BrickworkGraph g2 = build_brickwork(16, 2);
    FlowDeps d2 = compute_flow_deps(g2);
    CHECK(d2.xdeps.at({1, 1}) == std::set<Site>{{0, 1}});
    // (2,1) is a neighbour of f(0,1)=(1,1) -> Z-dep of (2,1) on (0,1)
    CHECK(d2.zdeps.at({2, 1}).count({0, 1}) == 1);
    // vertical at column 3: f(2,1)=(3,1) has neighbour (3,2)
    CHECK(d2.zdeps.at({3, 2}).count({2, 1}) == 1);
}

TEST_CASE("actual_angle substitutions") {
    CHECK(actual_angle(Angle(1), 1, 1).eighths() == 3);
    CHECK(actual_angle(Angle(2), 1, 0).eighths() == 6);
    CHECK(actual_angle(Angle(0), 0, 0).eighths() == 0);
    // involution in sX at sZ = 0
    for (int p = 0; p < 8; ++p)
        for (int sX = 0; sX < 2; ++sX)
            CHECK(actual_angle(actual_angle(Angle(p), sX, 0), sX, 0).eighths() == p);
}

TEST_CASE("special_input_angle substitutions") {
    CHECK(special_input_angle(Angle(3), 1).eighths() == 5);
    CHECK(special_input_angle(Angle(3), 0).eighths() == 3);
    CHECK(special_input_angle(Angle(0), 1).eighths() == 0);
}

TEST_CASE("identity circuit compiles to the all-zero pattern and acts as identity") {
    CircuitDescription c = circ(2, {});
    CompiledPattern cp = compile_circuit(c);
    CHECK(cp.pattern.phi.empty());
    CHECK(cp.pattern.graph.n() == 16);
    CHECK(cp.pattern.graph.m() == 2);

    double f = pattern_vs_direct(c, {Init::Plus, Init::Plus}, {}, 1);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identity pattern preserves |+_t> for all 8 angles") {
    for (int t = 0; t < 8; ++t) {
        double f = pattern_vs_direct(circ(2, {}), {Init::Planar, Init::Plus},
                                     {Angle(t), Angle(0)}, 10 + t);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("H gadget maps |0> to |+> and |1> to |->") {
    for (Init in : {Init::Zero, Init::One}) {
        double f = pattern_vs_direct(circ(1, {CircuitGate::h(0)}), {in}, {}, 3);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("X gadget flips computational basis states") {
    for (Init in : {Init::Zero, Init::One, Init::Plus}) {
        double f = pattern_vs_direct(circ(1, {CircuitGate::x(0)}), {in}, {}, 4);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Zrot gadget: |+> to |+_t> for all 8 angles") {
    for (int t = 0; t < 8; ++t) {
        double f = pattern_vs_direct(circ(1, {CircuitGate::zrot(0, Angle(t))}), {Init::Plus},
                                     {}, 20 + t);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("CX brick matches the 4x4 unitary on all basis states") {
    for (Init a : {Init::Zero, Init::One})
        for (Init b : {Init::Zero, Init::One}) {
            double f = pattern_vs_direct(circ(2, {CircuitGate::cx(0, 1)}), {a, b}, {}, 31);
            CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
        }
    // entangling check: |+>|0> -> Bell
    double f = pattern_vs_direct(circ(2, {CircuitGate::cx(0, 1)}), {Init::Plus, Init::Zero},
                                 {}, 32);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("CX with control below target") {
    for (Init a : {Init::Zero, Init::One}) {
        double f = pattern_vs_direct(circ(2, {CircuitGate::cx(1, 0)}), {Init::One, a}, {}, 33);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
    double f = pattern_vs_direct(circ(2, {CircuitGate::cx(1, 0)}), {Init::Zero, Init::Plus},
                                 {}, 34);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("CZ brick matches on basis states and creates the graph state") {
    for (Init a : {Init::Zero, Init::One})
        for (Init b : {Init::Zero, Init::One}) {
            double f = pattern_vs_direct(circ(2, {CircuitGate::cz(0, 1)}), {a, b}, {}, 41);
            CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
        }
    double f = pattern_vs_direct(circ(2, {CircuitGate::cz(0, 1)}), {Init::Plus, Init::Plus},
                                 {}, 42);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("compiler oracle equivalence across the gate set on basis inputs") {
    std::vector<CircuitDescription> gates = {
        circ(1, {CircuitGate::h(0)}),
        circ(1, {CircuitGate::x(0)}),
        circ(1, {CircuitGate::zrot(0, Angle(3))}),
        circ(2, {CircuitGate::cx(0, 1)}),
        circ(2, {CircuitGate::cz(0, 1)}),
    };
    std::uint64_t seed = 100;
    for (const auto& c : gates) {
        int combos = 1 << c.num_wires;
        for (int bits = 0; bits < combos; ++bits) {
            std::vector<Init> inits;
            for (int w = 0; w < c.num_wires; ++w)
                inits.push_back((bits >> w) & 1 ? Init::One : Init::Zero);
            double f = pattern_vs_direct(c, inits, {}, seed++);
            CHECK(f >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("multi-gate circuit with an even-row-pair CX (routing layout)") {
    // 4 wires: CX between wires 1,2 (rows 2,3 -> even pair), plus singles.
    CircuitDescription c = circ(4, {CircuitGate::h(0), CircuitGate::cx(1, 2),
                                    CircuitGate::zrot(3, Angle(5))});
    for (int bits : {0, 5, 10}) {
        std::vector<Init> inits;
        for (int w = 0; w < 4; ++w) inits.push_back((bits >> w) & 1 ? Init::One : Init::Zero);
        double f = pattern_vs_direct(c, inits, {}, 200 + bits);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("routed CX between non-adjacent wires") {
    CircuitDescription c = circ(3, {CircuitGate::cx(0, 2)});
    for (int bits = 0; bits < 4; ++bits) {
        std::vector<Init> inits = {(bits & 1) ? Init::One : Init::Zero, Init::Plus,
                                   (bits & 2) ? Init::One : Init::Zero};
        double f = pattern_vs_direct(c, inits, {}, 300 + bits);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
    // and reversed direction across the gap
    CircuitDescription c2 = circ(3, {CircuitGate::cx(2, 0)});
    double f = pattern_vs_direct(c2, {Init::Zero, Init::Zero, Init::One}, {}, 310);
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("outcome-frame independence on a one-gate pattern") {
    // Force every measured outcome; the corrected output must not move.
    CircuitDescription c = circ(2, {CircuitGate::cx(0, 1)});
    CompiledPattern cp = compile_circuit(c);
    const int sites = cp.pattern.graph.n() * cp.pattern.graph.m();

    Rng pick(9000);
    for (int trial = 0; trial < 12; ++trial) {
        Rng rng(1);
        for (int i = 0; i < sites; ++i) rng.force_outcome(trial == 0 ? 0 : pick.flip());

        StateVector state(30);
        std::map<int, QubitId> inputs;
        inputs[cp.meta.row_of_wire[0]] = state.alloc(Init::Plus);
        inputs[cp.meta.row_of_wire[1]] = state.alloc(Init::Zero);
        PatternRun run = simulate_pattern(cp.pattern, state, inputs, {}, rng);
        apply_frame(state, run);

        Rng orng(5);
        DirectRun d = run_direct(c, {Init::Plus, Init::Zero}, {}, orng);
        double f = state.fidelity({run.output_row_qubit.at(1), run.output_row_qubit.at(2)},
                                  d.state);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("flow correctness: 100 seeded random outcome assignments agree") {
    CircuitDescription c = circ(2, {CircuitGate::h(0), CircuitGate::cx(0, 1)});
    CompiledPattern cp = compile_circuit(c);
    const int sites = cp.pattern.graph.n() * cp.pattern.graph.m();

    Rng pick(31337);
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(1);
        for (int i = 0; i < sites; ++i) rng.force_outcome(pick.flip());
        StateVector state(30);
        std::map<int, QubitId> inputs;
        inputs[cp.meta.row_of_wire[0]] = state.alloc(Init::Zero);
        inputs[cp.meta.row_of_wire[1]] = state.alloc(Init::Zero);
        PatternRun run = simulate_pattern(cp.pattern, state, inputs, {}, rng);
        apply_frame(state, run);

        Rng orng(5);
        DirectRun d = run_direct(c, {Init::Zero, Init::Zero}, {}, orng);
        double f = state.fidelity({run.output_row_qubit.at(1), run.output_row_qubit.at(2)},
                                  d.state);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("MeasureZ wires produce corrected classical bits") {
    // H then MeasureZ on |+> must read 0 deterministically (H|+> = |0>).
    CircuitDescription c = circ(1, {CircuitGate::h(0), CircuitGate::measure_z(0)});
    CompiledPattern cp = compile_circuit(c);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        StateVector state(30);
        std::map<int, QubitId> inputs;
        inputs[cp.meta.row_of_wire[0]] = state.alloc(Init::Plus);
        std::set<int> crows{cp.meta.row_of_wire[0]};
        PatternRun run = simulate_pattern(cp.pattern, state, inputs, crows, rng);
        CHECK(run.classical.at(cp.meta.row_of_wire[0]) == 0);
    }
    // X then MeasureZ on |0> reads 1.
    CircuitDescription c2 = circ(1, {CircuitGate::x(0), CircuitGate::measure_z(0)});
    CompiledPattern cp2 = compile_circuit(c2);
    Rng rng(77);
    StateVector state(30);
    std::map<int, QubitId> inputs;
    inputs[cp2.meta.row_of_wire[0]] = state.alloc(Init::Zero);
    PatternRun run = simulate_pattern(cp2.pattern, state, inputs, {cp2.meta.row_of_wire[0]}, rng);
    CHECK(run.classical.at(cp2.meta.row_of_wire[0]) == 1);
}

TEST_CASE("equal-dimension circuits compile to identical shapes") {
    CircuitDescription a = circ(2, {CircuitGate::h(0), CircuitGate::cx(0, 1)});
    CircuitDescription b = circ(2, {CircuitGate::zrot(1, Angle(7)), CircuitGate::cz(1, 0)});
    CompiledPattern ca = compile_circuit(a);
    CompiledPattern cb = compile_circuit(b);
    CHECK(ca.pattern.graph.n() == cb.pattern.graph.n());
    CHECK(ca.pattern.graph.m() == cb.pattern.graph.m());
    CHECK(ca.pattern.graph.edges() == cb.pattern.graph.edges());
}

TEST_CASE("pattern JSON round trip") {
    CircuitDescription c = circ(2, {CircuitGate::cx(0, 1)});
    CompiledPattern cp = compile_circuit(c);
    nlohmann::json j = cp.pattern.to_json();
    MeasurementPattern back = MeasurementPattern::from_json(j);
    CHECK(back.graph.n() == cp.pattern.graph.n());
    CHECK(back.phi == cp.pattern.phi);
    CHECK(back.xdeps == cp.pattern.xdeps);
    CHECK(back.zdeps == cp.pattern.zdeps);
    CHECK(back.z_basis_sites == cp.pattern.z_basis_sites);
}

TEST_CASE("circuit JSON round trip and validation") {
    CircuitDescription c = circ(3, {CircuitGate::h(0), CircuitGate::zrot(1, Angle(5)),
                                    CircuitGate::cx(0, 2), CircuitGate::measure_z(1)},
                                "probe");
    nlohmann::json j = c.to_json();
    CircuitDescription back = CircuitDescription::from_json(j);
    CHECK(back.num_wires == 3);
    CHECK(back.gates.size() == 4);
    CHECK(back.gates[1].angle.eighths() == 5);
    CHECK(back.name == "probe");

    nlohmann::json bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(CircuitDescription::from_json(bad), ConfigError);
}
