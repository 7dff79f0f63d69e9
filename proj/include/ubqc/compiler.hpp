#pragma once

#include <optional>
#include <vector>

#include "ubqc/authcrypto.hpp"
#include "ubqc/circuit.hpp"
#include "ubqc/pattern.hpp"

namespace ubqc {

// Gate slots are 16 columns wide; a slot whose angles are all zero is the
// identity on every wire, which is what makes dimension-only padding work.
constexpr int kSlotCols = BrickworkGraph::kSlotCols;

struct CompileMeta {
    int num_wires = 0;
    int slot_budget = 1;                 // slots reserved per circuit gate
    int slots = 1;                       // total slots (incl. terminal)
    std::vector<int> row_of_wire;        // logical wire -> column-0 row
    std::vector<int> classical_wires;    // wires ending in MeasureZ
    std::map<int, int> classical_row_to_wire; // output row -> wire
};

struct CompiledPattern {
    MeasurementPattern pattern;
    CompileMeta meta;
};

// Per-gate slot budget so that (n, m) depend only on circuit dimensions.
int plain_slot_budget(int num_wires);
int auth_slot_budget(int num_blocks, int block_size);

// Compiles a circuit onto the brickwork state, one budgeted slot group per
// gate, terminal slot reserved for MeasureZ basis changes. Wire w sits on
// row w+1.
CompiledPattern compile_circuit(const CircuitDescription& circuit);

struct AuthPatternSpec {
    CircuitDescription base;
    CodeSpec code;
};

struct AuthMeta {
    CompileMeta compile;
    int block_size = 4;                  // R = 4 n_C
    std::vector<int> block_base;         // block j occupies rows base+1 .. base+R
    std::vector<int> ancilla_rows;
    std::optional<int> pad_row;
    std::vector<bool> classical_block;   // per block: wire ends in MeasureZ

    int row_to_block(int row) const {
        for (std::size_t j = 0; j < block_base.size(); ++j)
            if (row > block_base[j] && row <= block_base[j] + block_size)
                return static_cast<int>(j);
        return -1;
    }
    int block_position(int row) const { // 0-based position within its block
        int j = row_to_block(row);
        return j < 0 ? -1 : row - block_base[j] - 1;
    }
};

struct AuthCompiledPattern {
    MeasurementPattern pattern;
    AuthMeta meta;
};

// Builds the authenticated pattern: each logical wire becomes a block of
// 4 n_C rows in the ledger's permuted order, gates act on the (secret) data
// rows with swap detours budgeted at worst case, ancilla rows carry the
// regular Z-basis pseudo-copy sites, and classical-output blocks end in
// per-role terminal rotations. (n, m) depend only on the dimensions of base.
AuthCompiledPattern build_authenticated_pattern(const AuthPatternSpec& spec,
                                                const KeyLedger& ledger);

} // namespace ubqc
