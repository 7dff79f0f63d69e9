#include "ubqc/qmip.hpp"

namespace ubqc {

void QmipSpec::validate() const {
    if (k < 2) throw ConfigError("QMIP spec needs k >= 2");
    if (static_cast<int>(m_sizes.size()) != k || static_cast<int>(p_sizes.size()) != k)
        throw ConfigError("m_sizes/p_sizes must list one entry per prover");
    if (v_qubits < 1 || v_output < 0 || v_output >= v_qubits)
        throw ConfigError("bad V register layout");
    if (rounds.empty()) throw ConfigError("at least one round required");
    int p_total = 0;
    for (int s : p_sizes) p_total += s;
    if (p_total > 0 && shared_state.num_wires != p_total)
        throw ConfigError("shared_state acts on the concatenated P registers");
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        const Round& round = rounds[r];
        if (static_cast<int>(round.prover_circuits.size()) != k)
            throw ConfigError("each round lists one prover circuit per prover");
        for (int i = 0; i < k; ++i) {
            const int wires = p_sizes[i] + m_sizes[i];
            if (wires == 0) {
                if (!round.prover_circuits[i].gates.empty())
                    throw ConfigError("prover with empty registers cannot act");
                continue;
            }
            if (round.prover_circuits[i].num_wires != wires)
                throw ConfigError("prover circuit wire count mismatch");
            round.prover_circuits[i].validate();
            for (const auto& g : round.prover_circuits[i].gates)
                if (g.op == GateOp::MeasureZ)
                    throw ConfigError("prover circuits are unitary here");
        }
        if (round.verifier_circuit.num_wires != m_total() + v_qubits)
            throw ConfigError("verifier circuit wire count mismatch");
        round.verifier_circuit.validate();
    }
    // The last verifier circuit must measure the output qubit.
    const auto& last = rounds.back().verifier_circuit;
    bool measures_output = false;
    for (const auto& g : last.gates)
        if (g.op == GateOp::MeasureZ && g.a == m_total() + v_output) measures_output = true;
    if (!measures_output)
        throw ConfigError("the final verifier circuit must MeasureZ the output qubit");
}

namespace {

void apply_circuit(StateVector& sv, const CircuitDescription& c,
                   const std::vector<QubitId>& wires, Rng& rng, std::map<int, int>* bits) {
    for (const auto& g : c.gates) {
        switch (g.op) {
            case GateOp::H: sv.apply_gate(Gate::H, wires[g.a]); break;
            case GateOp::X: sv.apply_gate(Gate::X, wires[g.a]); break;
            case GateOp::Zrot: sv.apply_zrot(wires[g.a], g.angle); break;
            case GateOp::CX: sv.apply_gate(Gate::CX, wires[g.a], wires[g.b]); break;
            case GateOp::CZ: sv.apply_gate(Gate::CZ, wires[g.a], wires[g.b]); break;
            case GateOp::MeasureZ: {
                int bit = sv.measure_z(wires[g.a], rng);
                if (bits) (*bits)[g.a] = bit;
                break;
            }
        }
    }
}

} // namespace

bool direct_qmip_once(const QmipSpec& qmip, Rng& rng) {
    StateVector sv(24);

    std::vector<std::vector<QubitId>> p_regs(qmip.k), m_regs(qmip.k);
    std::vector<QubitId> v_reg;
    std::vector<QubitId> all_p;
    for (int i = 0; i < qmip.k; ++i)
        for (int j = 0; j < qmip.p_sizes[i]; ++j) {
            p_regs[i].push_back(sv.alloc(Init::Zero));
            all_p.push_back(p_regs[i].back());
        }
    for (int i = 0; i < qmip.k; ++i)
        for (int j = 0; j < qmip.m_sizes[i]; ++j) m_regs[i].push_back(sv.alloc(Init::Zero));
    for (int j = 0; j < qmip.v_qubits; ++j) v_reg.push_back(sv.alloc(Init::Zero));

    if (!all_p.empty()) apply_circuit(sv, qmip.shared_state, all_p, rng, nullptr);

    std::map<int, int> bits;
    for (const auto& round : qmip.rounds) {
        for (int i = 0; i < qmip.k; ++i) {
            std::vector<QubitId> wires = p_regs[i];
            wires.insert(wires.end(), m_regs[i].begin(), m_regs[i].end());
            if (!wires.empty()) apply_circuit(sv, round.prover_circuits[i], wires, rng, nullptr);
        }
        std::vector<QubitId> wires;
        for (int i = 0; i < qmip.k; ++i)
            wires.insert(wires.end(), m_regs[i].begin(), m_regs[i].end());
        wires.insert(wires.end(), v_reg.begin(), v_reg.end());
        apply_circuit(sv, round.verifier_circuit, wires, rng, &bits);
    }
    return bits.at(qmip.m_total() + qmip.v_output) == 1;
}

double direct_qmip_reference(const QmipSpec& qmip, std::uint64_t seed, int trials) {
    qmip.validate();
    int accepts = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed + t);
        accepts += direct_qmip_once(qmip, rng) ? 1 : 0;
    }
    return static_cast<double>(accepts) / trials;
}

QmipResult run_qmip_simulation(const QmipSpec& qmip, std::vector<Strategy> strategies,
                               std::uint64_t seed) {
    qmip.validate();

    Session session(seed, qmip.k, Session::default_cap());
    QmipResult result;

    // Prover private registers and message registers, owned by their parties.
    std::vector<std::vector<QubitId>> p_regs(qmip.k + 1), m_regs(qmip.k + 1);
    std::vector<QubitId> all_p;
    for (int i = 1; i <= qmip.k; ++i)
        for (int j = 0; j < qmip.p_sizes[i - 1]; ++j) {
            p_regs[i].push_back(session.alloc_for(i, Init::Zero));
            all_p.push_back(p_regs[i].back());
        }
    for (int i = 1; i <= qmip.k; ++i)
        for (int j = 0; j < qmip.m_sizes[i - 1]; ++j)
            m_regs[i].push_back(session.alloc_for(i, Init::Zero));
    if (!all_p.empty()) apply_circuit(session.state, qmip.shared_state, all_p, session.rng, nullptr);

    // The register V: logical wires appended to P1's message register. In the
    // first round P1 prepares |0> qubits for them; afterwards their blocks
    // stay at P1 in encrypted and authenticated form.
    const int mT = qmip.m_total();
    const int wires_total = mT + qmip.v_qubits;
    std::map<int, Block> v_blocks; // by V index 0..v_qubits-1
    std::map<int, KeyLedger::BlockRecord> v_records;

    std::map<int, int> final_bits;
    for (std::size_t r = 0; r < qmip.rounds.size(); ++r) {
        const auto& round = qmip.rounds[r];
        const bool last = r + 1 == qmip.rounds.size();

        // Provers' turn.
        for (int i = 1; i <= qmip.k; ++i) {
            std::vector<QubitId> wires = p_regs[i];
            wires.insert(wires.end(), m_regs[i].begin(), m_regs[i].end());
            if (!wires.empty())
                apply_circuit(session.state, round.prover_circuits[i - 1], wires, session.rng,
                              nullptr);
        }

        // Verifier's turn, delegated. Wire layout: [M_1 .. M_k | V].
        DelegationSpec dspec;
        dspec.circuit = round.verifier_circuit;
        dspec.k = qmip.k;
        dspec.code = qmip.code;
        for (int i = 1; i <= qmip.k; ++i)
            for (int j = 0; j < qmip.m_sizes[i - 1]; ++j) dspec.assignment.push_back(i);
        for (int v = 0; v < qmip.v_qubits; ++v) {
            dspec.assignment.push_back(1);
            dspec.persistent_wires.push_back(mT + v);
        }

        // Fresh per-call ledger; persistent V records carry over.
        KeyLedger ledger;
        for (auto& [v, rec] : v_records) ledger.blocks[mT + v] = rec;
        session.ledger = std::move(ledger);

        DelegatedComputation dc(session, dspec, strategies);
        std::vector<QubitId> inputs(wires_total, 0);
        int w = 0;
        for (int i = 1; i <= qmip.k; ++i)
            for (QubitId q : m_regs[i]) inputs[w++] = q;
        for (int v = 0; v < qmip.v_qubits; ++v) {
            if (r == 0) {
                inputs[mT + v] = session.alloc_for(1, Init::Zero);
            } else {
                dc.adopt_block(mT + v, std::move(v_blocks.at(v)));
            }
        }

        dc.input_preparation(inputs);
        dc.ubqc_interaction();
        SessionOutcome out = dc.output_distribution();
        result.bell_pairs_used = out.bell_pairs_used;
        if (out.y0 == Verdict::Fail) {
            result.any_fail = true;
            break; // the verifier rejects on any failed call
        }

        // Collect returned message registers (decrypted at their owners).
        for (auto& [wire, q] : out.outputs) {
            if (wire >= mT) continue;
            int i = dspec.assignment[wire];
            int idx = wire;
            for (int pi = 1; pi < i; ++pi) idx -= qmip.m_sizes[pi - 1];
            m_regs[i][idx] = q;
        }
        for (auto& [wire, bit] : out.y)
            if (wire >= mT) final_bits[wire - mT] = bit;

        // Persist the V register blocks for the next round.
        v_blocks.clear();
        v_records.clear();
        if (!last) {
            for (int v = 0; v < qmip.v_qubits; ++v) {
                v_blocks[v] = dc.take_block(mT + v);
                v_records[v] = session.ledger.blocks.at(mT + v);
            }
        }
    }

    result.messages = session.bus.size();
    result.audit_violations = audit_transcript(session.bus).size();
    if (!result.any_fail) {
        result.output_bit = final_bits.count(qmip.v_output) ? final_bits.at(qmip.v_output) : 0;
        result.accepted = result.output_bit == 1;
    }
    return result;
}

nlohmann::json QmipSpec::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["v_qubits"] = v_qubits;
    j["v_output"] = v_output;
    j["m_sizes"] = m_sizes;
    j["p_sizes"] = p_sizes;
    j["shared_state"] = shared_state.to_json();
    j["code"] = {{"n_C", code.n_c}};
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& round : rounds) {
        nlohmann::json pc = nlohmann::json::array();
        for (const auto& c : round.prover_circuits) pc.push_back(c.to_json());
        jr.push_back({{"provers", pc}, {"verifier", round.verifier_circuit.to_json()}});
    }
    j["rounds"] = jr;
    return j;
}

QmipSpec QmipSpec::from_json(const nlohmann::json& j) {
    QmipSpec q;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key != "k" && key != "v_qubits" && key != "v_output" && key != "m_sizes" &&
            key != "p_sizes" && key != "shared_state" && key != "code" && key != "rounds")
            throw ConfigError("qmip JSON: unknown field '" + key + "'");
    }
    q.k = j.at("k").get<int>();
    q.v_qubits = j.value("v_qubits", 1);
    q.v_output = j.value("v_output", 0);
    q.m_sizes = j.at("m_sizes").get<std::vector<int>>();
    q.p_sizes = j.at("p_sizes").get<std::vector<int>>();
    if (j.contains("shared_state"))
        q.shared_state = CircuitDescription::from_json(j.at("shared_state"));
    else
        q.shared_state.num_wires = 1;
    if (j.contains("code")) q.code.n_c = j.at("code").value("n_C", 1);
    for (const auto& jr : j.at("rounds")) {
        QmipSpec::Round round;
        for (const auto& pc : jr.at("provers"))
            round.prover_circuits.push_back(CircuitDescription::from_json(pc));
        round.verifier_circuit = CircuitDescription::from_json(jr.at("verifier"));
        q.rounds.push_back(std::move(round));
    }
    q.validate();
    return q;
}

} // namespace ubqc
