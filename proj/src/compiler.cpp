#include "ubqc/compiler.hpp"

#include <algorithm>

namespace ubqc {

namespace {

// ---------------------------------------------------------------------------
// Gadget angle tables, in eighths. A measurement at pattern angle phi
// implements the wire step J(-phi) = H Z(-phi); a 16-column slot therefore
// applies sixteen J steps interleaved with the brick CZ pairs. Useful
// identities on the pi/4 lattice:
//   J(pi/2)^3 = e^{i pi/4} I                    -> triple (6,6,6) is identity
//   J(pi/2) J(pi/2) J(pi/2+g) = Z(g) (up to phase)
//   J(g+pi/2) J(pi/2) J(pi/2) = X(g) (up to phase)
// and the verified two-qubit core
//   CX = (Z(pi/2) (x) X(pi/2)) . CZ . (I (x) X(-pi/2)) . CZ.
// ---------------------------------------------------------------------------

struct SlotWriter {
    std::map<Site, Angle>& phi;
    int slot;

    int base() const { return slot * kSlotCols; }
    void set(int row, int offset, int eighths) {
        if (eighths % 8 != 0) phi[{base() + offset, row}] = Angle(eighths);
    }
    void triple(int row, int offset0, int a, int b, int c) {
        set(row, offset0, a);
        set(row, offset0 + 1, b);
        set(row, offset0 + 2, c);
    }
};

// Z(g)-rotation triple: J(pi/2) J(pi/2) J(pi/2+g) applied in that order
// means offsets (first..third) get (-(pi/2+g), -pi/2, -pi/2).
void z_triple(SlotWriter w, int row, int offset0, int g_eighths) {
    w.triple(row, offset0, -2 - g_eighths, 6, 6);
}
// X(g)-rotation triple: J(g+pi/2) J(pi/2) J(pi/2) -> (-pi/2, -pi/2, -(g+pi/2)).
void x_triple(SlotWriter w, int row, int offset0, int g_eighths) {
    w.triple(row, offset0, 6, 6, -2 - g_eighths);
}
void identity_triple(SlotWriter w, int row, int offset0) { w.triple(row, offset0, 6, 6, 6); }

void emit_single(std::map<Site, Angle>& phi, int slot, int row, GateOp op, Angle theta) {
    SlotWriter w{phi, slot};
    switch (op) {
        case GateOp::H:
            w.triple(row, 0, 6, 6, 6); // J(pi/2)^3 then 13 H's
            break;
        case GateOp::X:
            w.set(row, 1, 4); // J(pi) J(0) = X(pi)
            break;
        case GateOp::Zrot:
            w.set(row, 0, -theta.eighths());
            break;
        default:
            throw CompileError("emit_single: not a single-qubit gate");
    }
}

// Terminal basis change for classical outputs: rotate the wire content so the
// planar-0 output measurement reads it in the computational basis (data) or
// verifies the trap (traps/sentinels).
void emit_terminal_rotation(std::map<Site, Angle>& phi, int slot, int row, SlotRole role,
                            PauliLetter basis) {
    if (role == SlotRole::Data || basis == PauliLetter::Z) {
        emit_single(phi, slot, row, GateOp::H, Angle(0));
    } else if (basis == PauliLetter::Y) {
        emit_single(phi, slot, row, GateOp::Zrot, Angle(-2));
    } // X-basis: identity
}

// Two-qubit gadget on the adjacent pair (top_row, top_row+1). The brick CZ
// pair for this row pair sits at offsets (3,5) when top_row is odd and
// (11,13) when even; prefix/core/suffix regions follow it.
void emit_pair(std::map<Site, Angle>& phi, int slot, int top_row, bool control_on_top,
               bool is_cx) {
    SlotWriter w{phi, slot};
    const bool odd_pair = top_row % 2 == 1;
    const int p0 = odd_pair ? 0 : 8;   // prefix triple offsets
    const int m0 = odd_pair ? 3 : 11;  // core J steps between the CZ pair
    const int s0 = odd_pair ? 5 : 13;  // suffix triple offsets

    const int bot_row = top_row + 1;
    const int control = control_on_top ? top_row : bot_row;
    const int target = control_on_top ? bot_row : top_row;

    if (is_cx) {
        // control: Z(pi/2) prefix, identity core, identity suffix
        z_triple(w, control, p0, 2);
        identity_triple(w, control, s0);
        // target: X(pi/2) prefix, X(-pi/2) core, identity suffix
        x_triple(w, target, p0, 2);
        w.set(target, m0 + 1, 2);
        identity_triple(w, target, s0);
    } else {
        // CZ: symmetric, lattice-solved with the X-rotation side on the bottom:
        // top: Z(pi/2) prefix, identity suffix; bottom: J(pi/2)-prefix making
        // X(pi/2)H, X(-pi/2) core, all-zero suffix (an H).
        z_triple(w, top_row, p0, 2);
        identity_triple(w, top_row, s0);
        w.set(bot_row, p0, 6);
        w.set(bot_row, m0 + 1, 2);
        // suffix deliberately all zero on the bottom row
    }
}

void emit_swap(std::map<Site, Angle>& phi, int slot0, int top_row) {
    emit_pair(phi, slot0 + 0, top_row, true, true);
    emit_pair(phi, slot0 + 1, top_row, false, true);
    emit_pair(phi, slot0 + 2, top_row, true, true);
}

// Emits a (possibly routed) two-qubit gate into the budgeted slot group
// starting at slot0. Both contents are swapped towards each other (disjoint
// transpositions share a layer), the gadget runs, and the detour is undone.
void emit_routed_pair(std::map<Site, Angle>& phi, int slot0, int control_row, int target_row,
                      bool is_cx) {
    const bool control_above = control_row < target_row;
    int c = control_row;
    int t = target_row;
    // Each layer is one slot triple holding one or two disjoint swaps.
    std::vector<std::vector<int>> layers; // swap tops per layer
    while (std::abs(c - t) > 1) {
        std::vector<int> layer;
        if (control_above) {
            layer.push_back(c); // (c, c+1)
            ++c;
            if (t - c > 1) {
                layer.push_back(t - 1); // (t-1, t)
                --t;
            }
        } else {
            layer.push_back(c - 1);
            --c;
            if (c - t > 1) {
                layer.push_back(t);
                ++t;
            }
        }
        layers.push_back(std::move(layer));
    }

    int slot = slot0;
    for (const auto& layer : layers) {
        for (int top : layer) emit_swap(phi, slot, top);
        slot += 3;
    }
    emit_pair(phi, slot, std::min(c, t), /*control_on_top=*/control_above, is_cx);
    ++slot;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
        for (int top : *it) emit_swap(phi, slot, top);
        slot += 3;
    }
}

std::set<Site> ancilla_z_sites(const std::vector<int>& ancilla_rows, int slots) {
    std::set<Site> z;
    for (int row : ancilla_rows)
        for (int t = 0; t < slots; ++t) z.insert({t * kSlotCols + 8, row});
    return z;
}

} // namespace

int plain_slot_budget(int num_wires) {
    if (num_wires <= 2) return 1;
    return 6 * ((num_wires - 1) / 2) + 1; // ceil((num_wires - 2) / 2) layers
}

int auth_slot_budget(int num_blocks, int block_size) {
    if (num_blocks <= 1) return 1;
    int gap = num_blocks * block_size - 2; // rows between the extreme positions
    return 6 * ((gap + 1) / 2) + 1;
}

CompiledPattern compile_circuit(const CircuitDescription& circuit) {
    circuit.validate();

    CompileMeta meta;
    meta.num_wires = circuit.num_wires;
    meta.slot_budget = plain_slot_budget(circuit.num_wires);
    meta.slots = static_cast<int>(circuit.gates.size()) * meta.slot_budget + 1;
    const int n = meta.slots * kSlotCols;
    int m = std::max(circuit.num_wires, 2);
    if (m % 2 != 0) ++m;

    meta.row_of_wire.resize(circuit.num_wires);
    for (int w = 0; w < circuit.num_wires; ++w) meta.row_of_wire[w] = w + 1;

    std::map<Site, Angle> phi;
    int slot = 0;
    for (const auto& g : circuit.gates) {
        switch (g.op) {
            case GateOp::H:
            case GateOp::X:
            case GateOp::Zrot:
                emit_single(phi, slot, meta.row_of_wire[g.a], g.op, g.angle);
                break;
            case GateOp::CX:
            case GateOp::CZ:
                emit_routed_pair(phi, slot, meta.row_of_wire[g.a], meta.row_of_wire[g.b],
                                 g.op == GateOp::CX);
                break;
            case GateOp::MeasureZ:
                break; // identity slot; basis change happens in the terminal slot
        }
        slot += meta.slot_budget;
    }

    const int terminal = meta.slots - 1;
    for (int w : circuit.measured_wires()) {
        emit_single(phi, terminal, meta.row_of_wire[w], GateOp::H, Angle(0));
        meta.classical_wires.push_back(w);
        meta.classical_row_to_wire[meta.row_of_wire[w]] = w;
    }

    CompiledPattern out;
    out.pattern = pattern_skeleton(build_brickwork(n, m));
    out.pattern.phi = std::move(phi);
    out.meta = std::move(meta);
    return out;
}

AuthCompiledPattern build_authenticated_pattern(const AuthPatternSpec& spec,
                                                const KeyLedger& ledger) {
    spec.base.validate();
    const int B = spec.base.num_wires;
    const int R = spec.code.block_size();

    for (int j = 0; j < B; ++j)
        if (!ledger.blocks.count(j))
            throw ProtocolMisuseError("ledger is missing the block record for wire " +
                                      std::to_string(j));

    AuthMeta meta;
    meta.block_size = R;
    meta.compile.num_wires = B;
    meta.compile.slot_budget = auth_slot_budget(B, R);
    meta.compile.slots = static_cast<int>(spec.base.gates.size()) * meta.compile.slot_budget + 1;
    const int n = meta.compile.slots * kSlotCols;

    // One ancilla wire carries the regular pseudo-copy measurement sites; it
    // is re-used across the whole pattern (the Z cuts restart it).
    for (int j = 0; j < B; ++j) meta.block_base.push_back(j * R);
    meta.ancilla_rows.push_back(B * R + 1);
    int m = B * R + 1;
    if (m % 2 != 0) {
        meta.pad_row = m + 1;
        ++m;
    }

    meta.compile.row_of_wire.resize(B);
    for (int j = 0; j < B; ++j)
        meta.compile.row_of_wire[j] = meta.block_base[j] + 1 + ledger.blocks.at(j).data_position;

    meta.classical_block.assign(B, false);
    for (int w : spec.base.measured_wires()) meta.classical_block[w] = true;

    std::map<Site, Angle> phi;
    int slot = 0;
    for (const auto& g : spec.base.gates) {
        switch (g.op) {
            case GateOp::H:
            case GateOp::X:
            case GateOp::Zrot:
                emit_single(phi, slot, meta.compile.row_of_wire[g.a], g.op, g.angle);
                break;
            case GateOp::CX:
            case GateOp::CZ:
                emit_routed_pair(phi, slot, meta.compile.row_of_wire[g.a],
                                 meta.compile.row_of_wire[g.b], g.op == GateOp::CX);
                break;
            case GateOp::MeasureZ:
                break;
        }
        slot += meta.compile.slot_budget;
    }

    const int terminal = meta.compile.slots - 1;
    for (int j = 0; j < B; ++j) {
        if (!meta.classical_block[j]) continue;
        const auto& rec = ledger.blocks.at(j);
        for (int p = 0; p < R; ++p) {
            const int row = meta.block_base[j] + 1 + p;
            const auto& e = rec.entries[p];
            emit_terminal_rotation(phi, terminal, row, e.role, e.trap.basis);
            if (e.role == SlotRole::Data) {
                meta.compile.classical_row_to_wire[row] = j;
            }
        }
        meta.compile.classical_wires.push_back(j);
    }

    AuthCompiledPattern out;
    out.pattern =
        pattern_skeleton(build_brickwork(n, m), ancilla_z_sites(meta.ancilla_rows, meta.compile.slots));
    out.pattern.phi = std::move(phi);
    out.meta = std::move(meta);
    return out;
}

} // namespace ubqc
