#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ubqc/angle.hpp"
#include "ubqc/authcrypto.hpp"
#include "ubqc/pauli.hpp"

#include <json.hpp>

namespace ubqc {

// Dishonest prover behaviours. Each strategy is honest except for one
// declared deviation at one protocol joint.
struct Strategy {
    enum class Variant {
        Honest,
        PauliAttack,     // P1 applies Paulis to held block qubits
        AngleTamper,     // P1 shifts the measurement angle of the first site
        TeleportLie,     // a prover misreports teleport byproducts (input prep)
        SkipPermutation, // P1 ignores the pi'' instructions
        WrongBlockSwap,  // P1 swaps two outgoing blocks
    };
    enum class Timing { AfterInputPrep, DuringUbqc, BeforeOutputTeleport };

    Variant variant = Variant::Honest;
    int prover = 1;
    int weight = 1;                          // pauli_attack
    std::vector<PauliLetter> letters;        // empty = uniform draw per run
    Timing timing = Timing::DuringUbqc;
    Angle offset = Angle(1);                 // angle_tamper
    int bit_flip_mask = 1;                   // teleport_lie: 1 flips a, 2 flips b

    bool honest() const { return variant == Variant::Honest; }

    nlohmann::json to_json() const;
    static Strategy from_json(const nlohmann::json& j);
};

// Validates that the strategy makes sense for the prover it decorates
// (e.g. only P1 holds qubits during the UBQC phase).
void validate_strategy(const Strategy& s, int k);

// Exact detection statistics for one strategy, by enumeration over
// permutations, trap bases, pad keys and attack placements. Refuses configs
// beyond desk scale rather than sampling.
struct DetectionStats {
    double p_detect = 0.0;            // P(y0 = fail)
    double p_alter = 0.0;             // P(result altered)
    double p_undetected_alter = 0.0;  // P(altered and y0 = pass)
};

struct OracleConfig {
    CodeSpec code;
    int blocks = 1;
    // State of the data wire where alteration is classified (identity
    // circuit assumed): a Pauli eigenstate.
    Init data_state = Init::Zero;
    // When set, restricts attack placement to positions of this role
    // (e.g. an attack supported entirely on the data position).
    std::optional<SlotRole> fix_role;
};

DetectionStats detection_oracle(const Strategy& s, const OracleConfig& cfg);

} // namespace ubqc
