#include "ubqc/executor.hpp"

namespace ubqc {

namespace {
int parity_over(const std::set<Site>& deps, const std::map<Site, int>& outcomes) {
    int p = 0;
    for (Site s : deps) p ^= outcomes.at(s);
    return p;
}
} // namespace

PatternRun simulate_pattern(const MeasurementPattern& pat, StateVector& state,
                            const std::map<int, QubitId>& input_row_qubits,
                            const std::set<int>& classical_rows, Rng& rng) {
    const BrickworkGraph& g = pat.graph;
    const int n = g.n();
    const int m = g.m();

    PatternRun run;
    std::map<int, QubitId> col_cur; // qubits of the column being measured
    for (int y = 1; y <= m; ++y) {
        auto it = input_row_qubits.find(y);
        col_cur[y] = it != input_row_qubits.end() ? it->second : state.alloc(Init::Plus);
    }
    // Vertical edges within column 0 would be applied here; the brick rule
    // never places any.

    for (int x = 0; x < n; ++x) {
        std::map<int, QubitId> col_next;
        for (int y = 1; y <= m; ++y) {
            QubitId q = state.alloc(Init::Plus);
            col_next[y] = q;
            state.apply_gate(Gate::CZ, col_cur[y], q);
            if (y > 1 && g.has_vertical(x + 1, y - 1))
                state.apply_gate(Gate::CZ, col_next[y - 1], q);

            Site site{x, y};
            if (pat.is_z_site(site)) {
                run.outcomes[site] = state.measure_z(col_cur[y], rng);
            } else {
                int sX = parity_over(pat.xdeps_at(site), run.outcomes);
                int sZ = parity_over(pat.zdeps_at(site), run.outcomes);
                Angle ang = actual_angle(pat.phi_at(site), sX, sZ);
                run.outcomes[site] = state.measure_planar(col_cur[y], ang, rng);
            }
        }
        col_cur = std::move(col_next);
    }

    for (int y = 1; y <= m; ++y) {
        Site out{n, y};
        int a = parity_over(pat.xdeps_at(out), run.outcomes);
        int b = parity_over(pat.zdeps_at(out), run.outcomes);
        run.frame[y] = {a, b};
        if (classical_rows.count(y)) {
            // Measuring at (-1)^a * 0 + b*pi reads the content's planar-0 bit.
            run.classical[y] = state.measure_planar(col_cur[y], actual_angle(Angle(0), a, b), rng);
        } else {
            run.output_row_qubit[y] = col_cur[y];
        }
    }
    return run;
}

void apply_frame(StateVector& state, PatternRun& run) {
    for (auto& [row, q] : run.output_row_qubit) {
        auto [a, b] = run.frame.at(row);
        if (b) state.apply_zrot(q, Angle(4));
        if (a) state.apply_gate(Gate::X, q);
        run.frame[row] = {0, 0};
    }
}

} // namespace ubqc
