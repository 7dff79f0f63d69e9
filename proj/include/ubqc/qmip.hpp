#pragma once

#include "ubqc/protocol.hpp"

namespace ubqc {

// Desk-scale quantum multi-prover interactive proof: alternating prover and
// verifier turns, prover turn first, the last verifier circuit measures the
// designated output qubit (wire v_output of the V register) and the verifier
// accepts on outcome 1.
struct QmipSpec {
    int k = 2;
    int v_qubits = 1;
    int v_output = 0;                 // output qubit within the V register
    std::vector<int> m_sizes;         // message register size per prover (1..k)
    std::vector<int> p_sizes;         // private register size per prover
    CircuitDescription shared_state;  // prepared on the concatenated P registers

    struct Round {
        // Per prover: circuit over wires [P_i (p_sizes[i]) | M_i (m_sizes[i])].
        std::vector<CircuitDescription> prover_circuits;
        // Circuit over wires [M_1 .. M_k | V]. In the last round it must end
        // with MeasureZ on the output V wire.
        CircuitDescription verifier_circuit;
    };
    std::vector<Round> rounds;
    CodeSpec code;

    int m_total() const {
        int t = 0;
        for (int s : m_sizes) t += s;
        return t;
    }
    void validate() const;

    nlohmann::json to_json() const;
    static QmipSpec from_json(const nlohmann::json& j);
};

struct QmipResult {
    bool accepted = false;
    bool any_fail = false;       // some delegated call returned y0 = fail
    int output_bit = 0;
    std::uint64_t bell_pairs_used = 0;
    std::size_t messages = 0;
    std::size_t audit_violations = 0;
};

// Theorem-1 construction: every verifier turn is replaced by a delegated
// computation; the register V stays with P1 in encrypted, authenticated form
// between rounds. Rejects whenever any call fails authentication.
QmipResult run_qmip_simulation(const QmipSpec& qmip, std::vector<Strategy> strategies,
                               std::uint64_t seed);

// Reference executor: runs the quantum-verifier protocol directly in the
// simulator. Returns the empirical acceptance probability over `trials`.
double direct_qmip_reference(const QmipSpec& qmip, std::uint64_t seed, int trials);

// Single direct run (used by the reference and by tests).
bool direct_qmip_once(const QmipSpec& qmip, Rng& rng);

} // namespace ubqc
