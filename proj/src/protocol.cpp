#include "ubqc/protocol.hpp"

#include <algorithm>

namespace ubqc {

namespace {

template <typename T>
std::vector<T> apply_perm(const std::vector<T>& in, const PermutationKey& perm) {
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[perm.perm[i]] = in[i];
    return out;
}

void permute_ledger_block(KeyLedger::BlockRecord& rec, const PermutationKey& perm) {
    rec.entries = apply_perm(rec.entries, perm);
    rec.data_position = perm.perm[rec.data_position];
    rec.total_perm = rec.total_perm.compose_after(perm);
}

PauliLetter draw_letter(Rng& rng) {
    static const PauliLetter letters[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    return letters[rng.below(3)];
}

void apply_pauli(StateVector& sv, QubitId q, PauliLetter p) {
    switch (p) {
        case PauliLetter::X: sv.apply_gate(Gate::X, q); break;
        case PauliLetter::Y: sv.apply_gate(Gate::Y, q); break;
        case PauliLetter::Z: sv.apply_gate(Gate::Z, q); break;
        case PauliLetter::I: break;
    }
}

} // namespace

void DelegationSpec::validate() const {
    circuit.validate();
    if (k < 2) throw ConfigError("delegated computation needs k >= 2 provers");
    if (static_cast<int>(assignment.size()) != circuit.num_wires)
        throw ConfigError("every logical qubit needs a prover assignment");
    for (int p : assignment)
        if (p < 1 || p > k) throw ConfigError("assignment prover index out of range");
    for (int w : persistent_wires) {
        if (w < 0 || w >= circuit.num_wires)
            throw ConfigError("persistent wire index out of range");
        if (assignment[w] != 1)
            throw ConfigError("persistent register wires live with prover 1");
    }
}

nlohmann::json SessionOutcome::to_json() const {
    nlohmann::json j;
    j["y0"] = y0 == Verdict::Pass ? "pass" : "fail";
    nlohmann::json jy = nlohmann::json::object();
    for (auto [wire, bit] : y) jy[std::to_string(wire)] = bit;
    j["y"] = jy;
    j["bell_pairs_used"] = bell_pairs_used;
    j["qubit_high_watermark"] = qubit_high_watermark;
    return j;
}

DelegatedComputation::DelegatedComputation(Session& session, DelegationSpec spec,
                                           std::vector<Strategy> strategies)
    : s_(session), spec_(std::move(spec)) {
    spec_.validate();
    for (int w : spec_.persistent_wires) persistent_.insert(w);
    strategies_.resize(s_.k + 1);
    for (const auto& st : strategies) {
        validate_strategy(st, s_.k);
        if (!st.honest()) strategies_[st.prover] = st;
    }
}

int DelegatedComputation::prover_strategy_index(Strategy::Variant v,
                                                std::optional<Strategy::Timing> t) const {
    for (int i = 1; i <= s_.k; ++i) {
        const Strategy& st = strategies_[i];
        if (st.variant == v && (!t || st.timing == *t)) return i;
    }
    return -1;
}

// --- Protocol 2: input message preparation ----------------------------------

void DelegatedComputation::prepare_block(int wire, QubitId q) {
    const int owner = spec_.assignment[wire];
    s_.require_owner(owner, q);
    const CodeSpec& code = spec_.code;

    s_.bus.send(kVerifier, owner, MsgKind::InstructEncode, {wire, code.n_c, 0, 0});
    std::vector<TrapSpec> traps, sentinels;
    for (int t = 0; t < code.trap_count(); ++t) {
        traps.push_back(TrapSpec::random(s_.rng));
        s_.bus.send(kVerifier, owner, MsgKind::InstructTrap,
                    {wire, 1 + code.sentinel_count() + t,
                     static_cast<int>(traps.back().basis), traps.back().eig_bit});
    }
    for (int t = 0; t < code.sentinel_count(); ++t) {
        sentinels.push_back(TrapSpec::random(s_.rng));
        s_.bus.send(kVerifier, owner, MsgKind::InstructTrap,
                    {wire, 1 + t, static_cast<int>(sentinels.back().basis),
                     sentinels.back().eig_bit});
    }
    PermutationKey perm = PermutationKey::random(code.block_size(), s_.rng);
    s_.bus.send(kVerifier, owner, MsgKind::InstructPermute, {wire, 0, 0, 0});

    Block b = encode_block(s_.state, q, code, traps, sentinels, perm, s_.ledger, wire, owner);
    for (QubitId bq : b.qubits)
        if (!s_.owner.count(bq)) s_.owner[bq] = owner;
    blocks_[wire] = std::move(b);
}

void DelegatedComputation::teleport_block_to(int from_prover, int to_prover, int wire) {
    Block& b = blocks_[wire];
    const Strategy& st = strategies_[from_prover];
    const bool lies = st.variant == Strategy::Variant::TeleportLie && !lie_done_ &&
                      from_prover == st.prover;

    for (std::size_t pos = 0; pos < b.qubits.size(); ++pos) {
        auto [h_from, h_to] = s_.share_bell(from_prover, to_prover);
        auto [a, bb] = s_.teleport_from(from_prover, b.qubits[pos], h_from);
        int ra = a, rb = bb;
        if (lies && pos == 0) {
            ra ^= st.bit_flip_mask & 1;
            rb ^= (st.bit_flip_mask >> 1) & 1;
            lie_done_ = true;
        }
        s_.bus.send(from_prover, kVerifier, MsgKind::TeleportResult,
                    {wire, static_cast<int>(pos), ra, rb});
        fold_teleport(s_.ledger, wire, static_cast<int>(pos), ra, rb);
        s_.drop_owner(b.qubits[pos]);
        b.qubits[pos] = h_to;
    }
}

void DelegatedComputation::roundtrip_p1_block(int wire) {
    // Protocol 2 step 5: P1's block goes through P2 for permutation and pads.
    Block& b = blocks_[wire];
    teleport_block_to(1, 2, wire);

    PermutationKey perm = PermutationKey::random(spec_.code.block_size(), s_.rng);
    s_.bus.send(kVerifier, 2, MsgKind::InstructPermute, {wire, 1, 0, 0});
    b.qubits = apply_perm(b.qubits, perm);
    permute_ledger_block(s_.ledger.blocks.at(wire), perm);

    std::vector<Angle> pads;
    for (int p = 0; p < spec_.code.block_size(); ++p) {
        pads.push_back(Angle(s_.rng.eighths()));
        s_.bus.send(kVerifier, 2, MsgKind::InstructPad, {wire, p, pads.back().eighths(), 0});
    }
    pad_rotate(s_.state, b, pads, s_.ledger, wire);

    teleport_block_to(2, 1, wire);
}

void DelegatedComputation::adopt_block(int wire, Block block) {
    if (!persistent_.count(wire))
        throw ProtocolMisuseError("adopt_block is only for persistent wires");
    if (!s_.ledger.blocks.count(wire))
        throw ProtocolMisuseError("adopted block has no ledger record");
    blocks_[wire] = std::move(block);
    adopted_.insert(wire);
}

void DelegatedComputation::input_preparation(const std::vector<QubitId>& inputs) {
    if (prepared_) throw ProtocolOrderError("input preparation ran twice");
    if (static_cast<int>(inputs.size()) != spec_.circuit.num_wires)
        throw ProtocolMisuseError("one input qubit per circuit wire required");
    // Step 2: encode, traps, permutation; pads for every prover except P1.
    // Adopted persistent blocks arrive already encrypted and authenticated.
    for (int w = 0; w < spec_.circuit.num_wires; ++w)
        if (!adopted_.count(w)) prepare_block(w, inputs[w]);
    for (int w = 0; w < spec_.circuit.num_wires; ++w) {
        const int owner = spec_.assignment[w];
        if (owner == 1 || adopted_.count(w)) continue;
        std::vector<Angle> pads;
        for (int p = 0; p < spec_.code.block_size(); ++p) {
            pads.push_back(Angle(s_.rng.eighths()));
            s_.bus.send(kVerifier, owner, MsgKind::InstructPad,
                        {w, p, pads.back().eighths(), 0});
        }
        pad_rotate(s_.state, blocks_[w], pads, s_.ledger, w);
    }

    // Step 3: every prover except P1 teleports its register to P1.
    for (int w = 0; w < spec_.circuit.num_wires; ++w) {
        const int owner = spec_.assignment[w];
        if (owner == 1 || adopted_.count(w)) continue;
        teleport_block_to(owner, 1, w);
        blocks_[w].owner = spec_.assignment[w]; // logical owner is unchanged
    }

    // Step 4: an extra permutation, applied by P1, for blocks that came from
    // P2 (P2 knows their trap layout).
    for (int w = 0; w < spec_.circuit.num_wires; ++w) {
        if (spec_.assignment[w] != 2) continue;
        PermutationKey perm = PermutationKey::random(spec_.code.block_size(), s_.rng);
        s_.bus.send(kVerifier, 1, MsgKind::InstructPermute, {w, 2, 0, 0});
        blocks_[w].qubits = apply_perm(blocks_[w].qubits, perm);
        permute_ledger_block(s_.ledger.blocks.at(w), perm);
    }

    // Step 5: P1's own blocks round-trip through P2 (already-authenticated
    // adopted registers stay put).
    for (int w = 0; w < spec_.circuit.num_wires; ++w)
        if (spec_.assignment[w] == 1 && !adopted_.count(w)) roundtrip_p1_block(w);

    auth_ = build_authenticated_pattern({spec_.circuit, spec_.code}, s_.ledger);
    prepared_ = true;

    apply_pauli_attack(Strategy::Timing::AfterInputPrep);
}

void DelegatedComputation::apply_pauli_attack(Strategy::Timing timing) {
    int idx = prover_strategy_index(Strategy::Variant::PauliAttack, timing);
    if (idx < 0) return;
    const Strategy& st = strategies_[idx];

    // Attack positions: uniform distinct positions over the flattened block
    // qubits P1 holds.
    std::vector<std::pair<int, int>> all; // (wire, position)
    for (auto& [w, b] : blocks_)
        for (std::size_t p = 0; p < b.qubits.size(); ++p)
            all.push_back({w, static_cast<int>(p)});

    std::vector<std::pair<int, int>> chosen;
    for (int t = 0; t < st.weight && !all.empty(); ++t) {
        std::size_t at = s_.rng.below(all.size());
        chosen.push_back(all[at]);
        all.erase(all.begin() + at);
    }
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        PauliLetter letter =
            i < st.letters.size() ? st.letters[i] : draw_letter(s_.rng);
        auto [w, p] = chosen[i];
        apply_pauli(s_.state, blocks_[w].qubits[p], letter);
    }
}

// --- Protocol 4: authenticated UBQC with entangled provers ------------------

QubitId DelegatedComputation::remote_prep_site(Site site) {
    Angle theta_tilde(s_.rng.eighths());
    s_.bus.send(kVerifier, 2, MsgKind::RemotePrepInstruct,
                {site.x, site.y, theta_tilde.eighths(), 0});
    // P2's conjugate-basis projection of his Bell half leaves P1 holding
    // |+_{theta~ + m pi}> with m a fair coin (oracle-verified identity in the
    // simulator tests). Realised here without materialising the pair: the
    // outcome is sampled and the partner state allocated directly, which
    // keeps the register window at m+1 qubits. One Bell pair is consumed.
    int m = s_.rng.sample_outcome(0.5);
    s_.state.count_bell_pair();
    s_.bus.send(2, kVerifier, MsgKind::RemotePrepOutcome, {site.x, site.y, m, 0});
    s_.ledger.prep_m[site] = m;
    s_.ledger.theta[site] = theta_tilde + Angle(4 * m);
    return s_.alloc_for(1, Init::Planar, theta_tilde + Angle(4 * m));
}

void DelegatedComputation::ubqc_interaction() {
    if (!prepared_) throw ProtocolOrderError("ubqc_interaction before input preparation");
    if (computed_) throw ProtocolOrderError("ubqc_interaction ran twice");

    const MeasurementPattern& pat = auth_.pattern;
    const BrickworkGraph& g = pat.graph;
    const int n = g.n();
    const int m = g.m();

    // Row -> (wire, position) for block rows.
    std::map<int, std::pair<int, int>> block_row;
    for (int j = 0; j < spec_.circuit.num_wires; ++j)
        for (int p = 0; p < auth_.meta.block_size; ++p)
            block_row[auth_.meta.block_base[j] + 1 + p] = {j, p};

    const int tamper_idx = prover_strategy_index(Strategy::Variant::AngleTamper);
    const int pauli_idx =
        prover_strategy_index(Strategy::Variant::PauliAttack, Strategy::Timing::DuringUbqc);

    // A during-UBQC Pauli deviation fires as the interaction begins, on the
    // input qubits P1 is about to entangle.
    if (pauli_idx > 0) apply_pauli_attack(Strategy::Timing::DuringUbqc);

    // Column 0: input blocks on block rows, remote-prepared junk elsewhere.
    // The X part of an input pad conjugates through the entangling CZ and
    // leaves Z^{kX} on the column-1 neighbour; the verifier folds it into
    // that site's Z parity.
    std::map<int, QubitId> col_cur;
    std::map<int, int> input_kx;
    for (int y = 1; y <= m; ++y) {
        auto it = block_row.find(y);
        if (it != block_row.end()) {
            auto [w, p] = it->second;
            col_cur[y] = blocks_[w].qubits[p];
            input_kx[y] = s_.ledger.blocks.at(w).entries[p].pad.kX;
        } else {
            col_cur[y] = remote_prep_site({0, y});
        }
    }

    for (int x = 0; x < n; ++x) {
        std::map<int, QubitId> col_next;
        int edge_count = 0;
        for (int y = 1; y <= m; ++y) {
            QubitId q =
                x + 1 < n ? remote_prep_site({x + 1, y}) : s_.alloc_for(1, Init::Plus);
            col_next[y] = q;
            s_.state.apply_gate(Gate::CZ, col_cur[y], q);
            ++edge_count;
            if (y > 1 && g.has_vertical(x + 1, y - 1)) {
                s_.state.apply_gate(Gate::CZ, col_next[y - 1], q);
                ++edge_count;
            }

            const Site site{x, y};
            if (pat.is_z_site(site)) {
                s_.bus.send(kVerifier, 1, MsgKind::ZBasisInstruct, {x, y, 0, 0});
                int out = s_.state.measure_z(col_cur[y], s_.rng);
                s_.drop_owner(col_cur[y]);
                s_.bus.send(1, kVerifier, MsgKind::ZBasisOutcome, {x, y, out, 0});
                continue;
            }

            // Verifier computes the blinded angle.
            Angle phi_prime, theta;
            if (x == 0 && block_row.count(y)) {
                auto [w, p] = block_row[y];
                const PadKey& pad = s_.ledger.blocks.at(w).entries[p].pad;
                phi_prime = special_input_angle(pat.phi_at(site), pad.kX);
                theta = pad.kZ;
            } else {
                int sX = 0, sZ = 0;
                for (Site d : pat.xdeps_at(site)) sX ^= outcomes_.at(d);
                for (Site d : pat.zdeps_at(site)) sZ ^= outcomes_.at(d);
                if (x == 1 && input_kx.count(y)) sZ ^= input_kx.at(y);
                phi_prime = actual_angle(pat.phi_at(site), sX, sZ);
                theta = s_.ledger.theta.count(site) ? s_.ledger.theta.at(site) : Angle(0);
            }
            const int r = spec_.force_r_zero ? 0 : s_.rng.flip();
            s_.ledger.r_bits[site] = r;
            Angle delta = phi_prime + theta + Angle(4 * r);
            s_.bus.send(kVerifier, 1, MsgKind::DeltaInstruct, {x, y, delta.eighths(), 0});

            // P1's turn: declared deviations, then the measurement.
            Angle measured = delta;
            if (tamper_idx > 0 && x == 0 && y == 1)
                measured = delta + strategies_[tamper_idx].offset;
            int s_raw = s_.state.measure_planar(col_cur[y], measured, s_.rng);
            s_.drop_owner(col_cur[y]);
            s_.bus.send(1, kVerifier, MsgKind::MeasureOutcome, {x, y, s_raw, 0});
            outcomes_[site] = s_raw ^ r;
        }
        s_.bus.send(kVerifier, 1, MsgKind::EntangleInstruct, {x + 1, edge_count, 0, 0});
        col_cur = std::move(col_next);
    }

    // Output column: classical rows (and junk rows) are measured in the
    // (X,Y) plane with r-padding; quantum rows stay with P1, their pads
    // replaced by the byproduct frame.
    for (int y = 1; y <= m; ++y) {
        const Site out{n, y};
        int a = 0, b = 0;
        for (Site d : pat.xdeps_at(out)) a ^= outcomes_.at(d);
        for (Site d : pat.zdeps_at(out)) b ^= outcomes_.at(d);

        auto itb = block_row.find(y);
        const bool classical =
            itb != block_row.end() && auth_.meta.classical_block[itb->second.first];
        if (itb != block_row.end() && !classical) {
            auto [w, p] = *&itb->second;
            PadKey& pad = s_.ledger.blocks.at(w).entries[p].pad;
            pad = PadKey{};
            pad.fold_frame(a, b);
            blocks_[w].qubits[p] = col_cur[y];
            output_qubits_[y] = col_cur[y];
            continue;
        }
        const int r = spec_.force_r_zero ? 0 : s_.rng.flip();
        s_.ledger.r_bits[out] = r;
        Angle delta = actual_angle(Angle(0), a, b) + Angle(4 * r);
        s_.bus.send(kVerifier, 1, MsgKind::DeltaInstruct, {n, y, delta.eighths(), 0});
        int s_raw = s_.state.measure_planar(col_cur[y], delta, s_.rng);
        s_.drop_owner(col_cur[y]);
        s_.bus.send(1, kVerifier, MsgKind::MeasureOutcome, {n, y, s_raw, 0});
        if (classical) classical_bits_[y] = s_raw ^ r;
    }
    computed_ = true;
}

// --- Protocol 3: output distribution and verification ------------------------

SessionOutcome DelegatedComputation::output_distribution() {
    if (!computed_) throw ProtocolOrderError("output_distribution before the computation");

    apply_pauli_attack(Strategy::Timing::BeforeOutputTeleport);

    const int skip_idx = prover_strategy_index(Strategy::Variant::SkipPermutation);
    const int swap_idx = prover_strategy_index(Strategy::Variant::WrongBlockSwap);

    // Quantum blocks by wire order; persistent registers remain with P1 in
    // encrypted form and are neither verified nor released here.
    std::vector<int> quantum_wires;
    for (int w = 0; w < spec_.circuit.num_wires; ++w)
        if (!auth_.meta.classical_block[w] && !persistent_.count(w))
            quantum_wires.push_back(w);

    if (swap_idx > 0 && quantum_wires.size() >= 2)
        std::swap(blocks_[quantum_wires[0]].qubits, blocks_[quantum_wires[1]].qubits);

    // Step 1: pi'' then teleport to owners (P1's own blocks stay).
    for (int w : quantum_wires) {
        const int owner = spec_.assignment[w];
        if (owner == 1) continue;
        PermutationKey perm = PermutationKey::random(spec_.code.block_size(), s_.rng);
        s_.bus.send(kVerifier, 1, MsgKind::InstructPermute, {w, 3, 0, 0});
        permute_ledger_block(s_.ledger.blocks.at(w), perm);
        if (skip_idx <= 0) blocks_[w].qubits = apply_perm(blocks_[w].qubits, perm);
        for (std::size_t p = 0; p < blocks_[w].qubits.size(); ++p)
            s_.bus.send(kVerifier, 1, MsgKind::OutputTeleportInstruct,
                        {w, static_cast<int>(p), owner, 0});
        teleport_block_to(1, owner, w);
    }

    // Steps 2-4: trap measurements and the verdict. Persistent quantum
    // registers stay untouched at P1 (their traps ride on); classical checks
    // are verifier-side and always run.
    Verdict y0 = Verdict::Pass;
    for (int w = 0; w < spec_.circuit.num_wires; ++w) {
        const auto& rec = s_.ledger.blocks.at(w);
        if (persistent_.count(w) && !auth_.meta.classical_block[w]) continue;
        if (auth_.meta.classical_block[w]) {
            for (int p = 0; p < spec_.code.block_size(); ++p) {
                if (rec.entries[p].role == SlotRole::Data) continue;
                int row = auth_.meta.block_base[w] + 1 + p;
                auto it = classical_bits_.find(row);
                if (it == classical_bits_.end() ||
                    it->second != rec.entries[p].trap.eig_bit)
                    y0 = Verdict::Fail;
            }
            continue;
        }
        const int owner = spec_.assignment[w];
        std::map<int, int> results;
        for (int p = 0; p < spec_.code.block_size(); ++p) {
            if (rec.entries[p].role == SlotRole::Data) continue;
            TrapCheck check = trap_check_for(rec.entries[p]);
            s_.bus.send(kVerifier, owner, MsgKind::TrapBasisAnnounce,
                        {w, p, check.z_basis ? 1 : 0,
                         check.z_basis ? 0 : check.planar_angle.eighths()});
            QubitId q = blocks_[w].qubits[p];
            s_.require_owner(owner, q);
            int out = check.z_basis ? s_.state.measure_z(q, s_.rng)
                                    : s_.state.measure_planar(q, check.planar_angle, s_.rng);
            s_.drop_owner(q);
            s_.bus.send(owner, kVerifier, MsgKind::TrapResult, {w, p, out, 0});
            results[p] = out;
        }
        if (verify_traps(results, s_.ledger, w) != Verdict::Pass) y0 = Verdict::Fail;
    }

    if (spec_.ignore_traps) y0 = Verdict::Pass;
    for (int i = 1; i <= s_.k; ++i)
        s_.bus.send(kVerifier, i, MsgKind::VerdictAnnounce, {y0 == Verdict::Pass ? 1 : 0});

    SessionOutcome outcome;
    outcome.y0 = y0;
    for (auto& [row, bit] : classical_bits_) {
        auto it = auth_.meta.compile.classical_row_to_wire.find(row);
        if (it != auth_.meta.compile.classical_row_to_wire.end()) outcome.y[it->second] = bit;
    }

    // Step 5: key release and decryption.
    if (y0 == Verdict::Pass) {
        s_.ledger.keys_released = true;
        for (int w : quantum_wires) {
            const int owner = spec_.assignment[w];
            const auto& rec = s_.ledger.blocks.at(w);
            for (int p = 0; p < spec_.code.block_size(); ++p)
                s_.bus.send(kVerifier, owner, MsgKind::KeyRelease,
                            {w, p, rec.entries[p].pad.kX, rec.entries[p].pad.kZ.eighths()});
            for (int c = 0; c < spec_.code.block_size(); ++c)
                s_.bus.send(kVerifier, owner, MsgKind::PermRelease,
                            {w, c, rec.total_perm.perm[c], 0});
            for (QubitId q : blocks_[w].qubits)
                if (s_.owner.count(q) && s_.owner.at(q) != owner)
                    throw ProtocolMisuseError("block not at its owner at decrypt time");
            QubitId data = decrypt_block(s_.state, blocks_[w], s_.ledger, w, s_.rng);
            for (QubitId q : blocks_[w].qubits)
                if (q != data) s_.drop_owner(q);
            outcome.outputs[w] = data;
        }
    }

    outcome.bell_pairs_used = s_.state.bell_pairs_made();
    outcome.qubit_high_watermark = s_.state.high_watermark();
    return outcome;
}

SessionOutcome DelegatedComputation::run(const std::vector<QubitId>& inputs) {
    input_preparation(inputs);
    ubqc_interaction();
    return output_distribution();
}

SessionOutcome run_delegated_computation(Session& session, const DelegationSpec& spec,
                                         const InputPrep& prepare_inputs,
                                         std::vector<Strategy> strategies) {
    DelegatedComputation dc(session, spec, std::move(strategies));
    std::vector<QubitId> inputs = prepare_inputs(session, spec);
    return dc.run(inputs);
}

InputPrep product_inputs(std::vector<Init> inits, std::vector<Angle> planar) {
    return [inits = std::move(inits), planar = std::move(planar)](
               Session& s, const DelegationSpec& spec) {
        std::vector<QubitId> qs;
        for (int w = 0; w < spec.circuit.num_wires; ++w) {
            Init init = w < static_cast<int>(inits.size()) ? inits[w] : Init::Plus;
            Angle a = w < static_cast<int>(planar.size()) ? planar[w] : Angle(0);
            qs.push_back(s.alloc_for(spec.assignment[w], init, a));
        }
        return qs;
    };
}

} // namespace ubqc
