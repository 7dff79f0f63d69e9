#pragma once

#include <functional>

#include "ubqc/adversary.hpp"
#include "ubqc/compiler.hpp"
#include "ubqc/session.hpp"

namespace ubqc {

struct DelegationSpec {
    CircuitDescription circuit; // C_V
    int k = 2;
    std::vector<int> assignment; // logical qubit -> prover 1..k
    CodeSpec code;
    // Wires whose blocks already live at P1 in encrypted, authenticated form
    // and stay there afterwards (the interactive-proof register V). They are
    // neither re-prepared nor distributed; their ledger records persist.
    std::vector<int> persistent_wires;
    // Negative-control knob: pins every r_{x,y} to zero. Breaks the output
    // one-time pad on purpose; used by the blindness control experiment.
    bool force_r_zero = false;
    // Negative-control knob: the verifier ignores trap mismatches entirely.
    bool ignore_traps = false;

    void validate() const;
};

struct SessionOutcome {
    Verdict y0 = Verdict::Fail;
    std::map<int, int> y;               // classical outputs by wire
    std::map<int, QubitId> outputs;     // decrypted quantum outputs by wire (pass only)
    std::uint64_t bell_pairs_used = 0;
    int qubit_high_watermark = 0;

    nlohmann::json to_json() const;
};

// Orchestrates Protocols 1-4 for one session: input preparation, the
// authenticated two-prover UBQC interaction, and output distribution with
// trap verification. Strategies (one per prover, index 1..k) inject the
// adversary menu's deviations at their declared joints.
class DelegatedComputation {
  public:
    DelegatedComputation(Session& session, DelegationSpec spec,
                         std::vector<Strategy> strategies = {});

    // Hands an already-authenticated block (with its ledger record in the
    // session ledger) to a persistent wire before input preparation.
    void adopt_block(int wire, Block block);

    // Protocol 2. `inputs` are the logical message qubits, one per circuit
    // wire, each owned by its assigned prover (entries for persistent wires
    // are ignored).
    void input_preparation(const std::vector<QubitId>& inputs);

    // Protocol 4 steps 1-4 (the theta~ grid is drawn up front; Bell pairs are
    // provisioned lazily while walking the pattern).
    void ubqc_interaction();

    // Protocol 3. Consumes the session; returns outcome.
    SessionOutcome output_distribution();

    // Protocol 1: the composition of the three stages.
    SessionOutcome run(const std::vector<QubitId>& inputs);

    const AuthCompiledPattern& compiled() const { return auth_; }

    // After output distribution: the still-encrypted block of a persistent
    // wire (pads live in the session ledger).
    Block take_block(int wire) { return std::move(blocks_.at(wire)); }
    const std::map<int, Block>& blocks() const { return blocks_; }

  private:
    void prepare_block(int wire, QubitId q);
    void teleport_block_to(int from_prover, int to_prover, int wire);
    void roundtrip_p1_block(int wire);
    QubitId remote_prep_site(Site s);
    void apply_pauli_attack(Strategy::Timing timing);
    int prover_strategy_index(Strategy::Variant v, std::optional<Strategy::Timing> t = {}) const;

    Session& s_;
    DelegationSpec spec_;
    std::vector<Strategy> strategies_; // index 0 unused; 1..k
    AuthCompiledPattern auth_;
    std::map<int, Block> blocks_;      // by wire
    std::map<Site, int> outcomes_;     // corrected s-values
    std::map<int, int> classical_bits_; // by row (corrected)
    std::map<int, QubitId> output_qubits_; // by row (quantum rows)
    std::set<int> persistent_;
    std::set<int> adopted_;
    bool lie_done_ = false;
    bool prepared_ = false;
    bool computed_ = false;
};

// Runs the full delegated computation on freshly prepared inputs.
// `prepare_inputs` allocates one qubit per wire at the assigned prover.
using InputPrep = std::function<std::vector<QubitId>(Session&, const DelegationSpec&)>;

SessionOutcome run_delegated_computation(Session& session, const DelegationSpec& spec,
                                         const InputPrep& prepare_inputs,
                                         std::vector<Strategy> strategies = {});

InputPrep product_inputs(std::vector<Init> inits, std::vector<Angle> planar = {});

} // namespace ubqc
