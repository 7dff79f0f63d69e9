#pragma once

#include <map>
#include <set>

#include "ubqc/pattern.hpp"
#include "ubqc/statevector.hpp"

namespace ubqc {

struct PatternRun {
    std::map<Site, int> outcomes;                 // raw mid-pattern outcomes
    std::map<int, QubitId> output_row_qubit;      // surviving output qubits by row
    std::map<int, std::pair<int, int>> frame;     // row -> byproduct (X^a, Z^b)
    std::map<int, int> classical;                 // corrected bit for classical rows
};

// Local reference executor: runs the pattern column by column with the
// actual-angle corrections and a sliding measure-and-discard window (peak
// live register is m+1 qubits plus whatever else the state holds).
// Rows present in input_row_qubits start from those qubits; every other
// column-0 site starts as a fresh |+>. Rows listed in classical_rows are
// measured at the output column in the frame-corrected planar-0 basis.
PatternRun simulate_pattern(const MeasurementPattern& pat, StateVector& state,
                            const std::map<int, QubitId>& input_row_qubits,
                            const std::set<int>& classical_rows, Rng& rng);

// Applies the byproduct frame corrections (Zrot(b*pi) then X^a) to the
// surviving output qubits, consuming the frame.
void apply_frame(StateVector& state, PatternRun& run);

} // namespace ubqc
