#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ubqc/angle.hpp"
#include "ubqc/brickwork.hpp"
#include "ubqc/pauli.hpp"
#include "ubqc/rng.hpp"
#include "ubqc/statevector.hpp"

#include <json.hpp>

namespace ubqc {

// Error-correcting-code stand-in. kind "trivial" is the n_C = 1 passthrough;
// "replicated" pads the code register with sentinel eigenstates so that trap
// statistics scale with n_C without real stabilizer machinery.
struct CodeSpec {
    int n_c = 1;
    int block_size() const { return 4 * n_c; }
    int trap_count() const { return 3 * n_c; }
    int sentinel_count() const { return n_c - 1; }
    int delta() const { return n_c; } // security parameter = code distance stand-in
};

struct TrapSpec {
    PauliLetter basis = PauliLetter::Z; // never I
    int eig_bit = 0;                    // 0 -> +1 eigenstate, 1 -> -1 eigenstate

    Init init() const {
        switch (basis) {
            case PauliLetter::Z: return eig_bit ? Init::One : Init::Zero;
            case PauliLetter::X: return eig_bit ? Init::Minus : Init::Plus;
            case PauliLetter::Y: return eig_bit ? Init::MinusI : Init::PlusI;
            default: break;
        }
        throw ProtocolMisuseError("trap basis cannot be I");
    }

    static TrapSpec random(Rng& rng) {
        static const PauliLetter letters[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
        return {letters[rng.below(3)], rng.flip()};
    }
};

enum class SlotRole { Data, Sentinel, Trap };

// Quantum one-time pad in the normal form Z(kZ) X^{kX}: X applied first,
// then the Z-rotation. Folding a teleport byproduct X^a Z^b on top uses
// X Z(t) = Z(-t) X.
struct PadKey {
    int kX = 0;
    Angle kZ;

    void fold_teleport(int a, int b) {
        kX ^= a;
        kZ = kZ.signed_by(a) + Angle(4 * b);
    }
    void fold_rotation(Angle theta) { kZ += theta; }
    void fold_frame(int a, int b) { fold_teleport(a, b); }
    void reset() { *this = PadKey{}; }
};

// A bijection on 0..len-1; applied[ perm[i] ] = original[i].
struct PermutationKey {
    std::vector<int> perm;

    static PermutationKey identity(int len);
    static PermutationKey random(int len, Rng& rng);
    PermutationKey compose_after(const PermutationKey& later) const; // later o this
    PermutationKey inverse() const;
    int size() const { return static_cast<int>(perm.size()); }
};

// Per-position record of one block, in physical (post-permutation) order.
struct BlockEntry {
    SlotRole role = SlotRole::Trap;
    TrapSpec trap;   // meaningful unless role == Data
    PadKey pad;
};

// One block of 4*n_C qubits carrying one logical message qubit.
struct Block {
    int owner = 0;          // prover index
    int logical_index = 0;  // which message qubit
    std::vector<QubitId> qubits; // physical order; rewritten as the block moves
};

// The verifier's private record: pads, permutations, trap table, r-bits and
// theta~ values. Nothing in here may reach a prover before the key release.
struct KeyLedger {
    struct BlockRecord {
        std::vector<BlockEntry> entries;       // physical order
        PermutationKey total_perm;             // canonical index -> physical position
        int data_position = 0;                 // physical position of the data qubit
    };

    std::map<int, BlockRecord> blocks;         // by logical wire index
    std::map<Site, Angle> theta;               // theta_{x,y} for prepared columns
    std::map<Site, int> r_bits;
    std::map<Site, int> prep_m;                // P2's remote-prep outcomes
    std::vector<std::array<int, 2>> teleport_log;
    bool keys_released = false;

    nlohmann::json export_json() const;        // post-run, tests only
};

// --- block operations -------------------------------------------------------

// Encodes logical qubit q into a fresh block inside `state`: trivial/sentinel
// code expansion, 3*n_C trap qubits in the given eigenstates, then the given
// permutation of the 4*n_C qubits. The ledger record is created.
Block encode_block(StateVector& state, QubitId q, const CodeSpec& code,
                   const std::vector<TrapSpec>& traps, const std::vector<TrapSpec>& sentinels,
                   const PermutationKey& perm, KeyLedger& ledger, int wire, int owner);

// Applies Z(theta_k) to every block qubit and folds each angle into the
// ledger pad for that position.
void pad_rotate(StateVector& state, const Block& block, const std::vector<Angle>& angles,
                KeyLedger& ledger, int wire);

void fold_teleport(KeyLedger& ledger, int wire, int position, int a, int b);

// The measurement basis the verifier announces for a trap/sentinel position,
// with the pad folded in, plus the expected outcome.
struct TrapCheck {
    bool z_basis = false;
    Angle planar_angle;
    int expected = 0;
};
TrapCheck trap_check_for(const BlockEntry& e);

enum class Verdict { Pass, Fail };

// Pass iff every trap and sentinel outcome matches the ledger's expectation.
// Missing results are treated as tampering.
Verdict verify_traps(const std::map<int, int>& results_by_position, const KeyLedger& ledger,
                     int wire);

// Inverse permutation, pad inversion (Zrot(-kZ) then X^{kX}) and trivial
// decode; returns the logical qubit, discards traps and sentinels.
QubitId decrypt_block(StateVector& state, const Block& block, KeyLedger& ledger, int wire,
                      Rng& rng);

} // namespace ubqc
