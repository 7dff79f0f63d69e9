#include "ubqc/authcrypto.hpp"

#include <algorithm>
#include <numeric>

namespace ubqc {

PermutationKey PermutationKey::identity(int len) {
    PermutationKey k;
    k.perm.resize(len);
    std::iota(k.perm.begin(), k.perm.end(), 0);
    return k;
}

PermutationKey PermutationKey::random(int len, Rng& rng) {
    PermutationKey k = identity(len);
    for (int i = len - 1; i > 0; --i)
        std::swap(k.perm[i], k.perm[rng.below(i + 1)]);
    return k;
}

PermutationKey PermutationKey::compose_after(const PermutationKey& later) const {
    PermutationKey out;
    out.perm.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out.perm[i] = later.perm[perm[i]];
    return out;
}

PermutationKey PermutationKey::inverse() const {
    PermutationKey out;
    out.perm.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out.perm[perm[i]] = static_cast<int>(i);
    return out;
}

Block encode_block(StateVector& state, QubitId q, const CodeSpec& code,
                   const std::vector<TrapSpec>& traps, const std::vector<TrapSpec>& sentinels,
                   const PermutationKey& perm, KeyLedger& ledger, int wire, int owner) {
    const int size = code.block_size();
    if (static_cast<int>(traps.size()) != code.trap_count())
        throw ProtocolMisuseError("need 3*n_C trap specs");
    if (static_cast<int>(sentinels.size()) != code.sentinel_count())
        throw ProtocolMisuseError("need n_C-1 sentinel specs");
    if (perm.size() != size) throw ProtocolMisuseError("permutation size mismatch");

    // Canonical order: data, sentinels, traps.
    std::vector<QubitId> canonical(size);
    std::vector<BlockEntry> canonical_entries(size);
    canonical[0] = q;
    canonical_entries[0].role = SlotRole::Data;
    for (int s = 0; s < code.sentinel_count(); ++s) {
        canonical[1 + s] = state.alloc(sentinels[s].init());
        canonical_entries[1 + s] = {SlotRole::Sentinel, sentinels[s], PadKey{}};
    }
    for (int t = 0; t < code.trap_count(); ++t) {
        canonical[1 + code.sentinel_count() + t] = state.alloc(traps[t].init());
        canonical_entries[1 + code.sentinel_count() + t] = {SlotRole::Trap, traps[t], PadKey{}};
    }

    Block b;
    b.owner = owner;
    b.logical_index = wire;
    b.qubits.resize(size);
    KeyLedger::BlockRecord rec;
    rec.entries.resize(size);
    rec.total_perm = perm;
    for (int i = 0; i < size; ++i) {
        b.qubits[perm.perm[i]] = canonical[i];
        rec.entries[perm.perm[i]] = canonical_entries[i];
        if (i == 0) rec.data_position = perm.perm[i];
    }
    ledger.blocks[wire] = std::move(rec);
    return b;
}

void pad_rotate(StateVector& state, const Block& block, const std::vector<Angle>& angles,
                KeyLedger& ledger, int wire) {
    if (angles.size() != block.qubits.size())
        throw ProtocolMisuseError("pad_rotate: one angle per block qubit");
    auto& rec = ledger.blocks.at(wire);
    for (std::size_t p = 0; p < angles.size(); ++p) {
        state.apply_zrot(block.qubits[p], angles[p]);
        rec.entries[p].pad.fold_rotation(angles[p]);
    }
}

void fold_teleport(KeyLedger& ledger, int wire, int position, int a, int b) {
    ledger.blocks.at(wire).entries.at(position).pad.fold_teleport(a, b);
    ledger.teleport_log.push_back({a, b});
}

TrapCheck trap_check_for(const BlockEntry& e) {
    if (e.role == SlotRole::Data) throw ProtocolMisuseError("data position has no trap check");
    TrapCheck c;
    const PadKey& pad = e.pad;
    switch (e.trap.basis) {
        case PauliLetter::Z:
            c.z_basis = true;
            c.expected = e.trap.eig_bit ^ pad.kX;
            break;
        case PauliLetter::X:
            c.planar_angle = pad.kZ;
            c.expected = e.trap.eig_bit;
            break;
        case PauliLetter::Y:
            c.planar_angle = Angle(2) + pad.kZ;
            c.expected = e.trap.eig_bit ^ pad.kX;
            break;
        default:
            throw ProtocolMisuseError("trap basis cannot be I");
    }
    return c;
}

Verdict verify_traps(const std::map<int, int>& results_by_position, const KeyLedger& ledger,
                     int wire) {
    const auto& rec = ledger.blocks.at(wire);
    for (std::size_t p = 0; p < rec.entries.size(); ++p) {
        const auto& e = rec.entries[p];
        if (e.role == SlotRole::Data) continue;
        auto it = results_by_position.find(static_cast<int>(p));
        if (it == results_by_position.end()) return Verdict::Fail; // missing = tampering
        if (it->second != trap_check_for(e).expected) return Verdict::Fail;
    }
    return Verdict::Pass;
}

QubitId decrypt_block(StateVector& state, const Block& block, KeyLedger& ledger, int wire,
                      Rng& rng) {
    if (!ledger.keys_released)
        throw ProtocolOrderError("decrypt_block called before key release");
    const auto& rec = ledger.blocks.at(wire);

    // Pad inversion on the data qubit, then decode: keep data, discard rest.
    QubitId data = block.qubits.at(rec.data_position);
    const PadKey& pad = rec.entries[rec.data_position].pad;
    state.apply_zrot(data, -pad.kZ);
    if (pad.kX) state.apply_gate(Gate::X, data);

    for (std::size_t p = 0; p < block.qubits.size(); ++p) {
        if (static_cast<int>(p) == rec.data_position) continue;
        if (state.has_qubit(block.qubits[p])) state.measure_z(block.qubits[p], rng);
    }
    return data;
}

nlohmann::json KeyLedger::export_json() const {
    nlohmann::json j;
    nlohmann::json jb = nlohmann::json::object();
    for (const auto& [wire, rec] : blocks) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : rec.entries) {
            entries.push_back({{"role", e.role == SlotRole::Data      ? "data"
                                        : e.role == SlotRole::Sentinel ? "sentinel"
                                                                       : "trap"},
                               {"basis", std::string(1, pauli_char(e.trap.basis))},
                               {"eig", e.trap.eig_bit},
                               {"kX", e.pad.kX},
                               {"kZ", e.pad.kZ.eighths()}});
        }
        jb[std::to_string(wire)] = {{"entries", entries},
                                    {"perm", rec.total_perm.perm},
                                    {"data_position", rec.data_position}};
    }
    j["blocks"] = jb;
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& [s, r] : r_bits) jr.push_back({s.x, s.y, r});
    j["r_bits"] = jr;
    nlohmann::json jt = nlohmann::json::array();
    for (const auto& [s, t] : theta) jt.push_back({s.x, s.y, t.eighths()});
    j["theta"] = jt;
    j["teleports"] = teleport_log.size();
    return j;
}

} // namespace ubqc
