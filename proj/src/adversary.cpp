#include "ubqc/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>

namespace ubqc {

namespace {

using Cx = std::complex<double>;
using V2 = std::array<Cx, 2>;
using M2 = std::array<Cx, 4>; // row-major 2x2

const double kInv2 = 1.0 / std::sqrt(2.0);

V2 apply_m(const M2& m, const V2& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}
Cx inner(const V2& a, const V2& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

M2 pauli_matrix(PauliLetter p) {
    switch (p) {
        case PauliLetter::I: return {1, 0, 0, 1};
        case PauliLetter::X: return {0, 1, 1, 0};
        case PauliLetter::Y: return {0, Cx(0, -1), Cx(0, 1), 0};
        case PauliLetter::Z: return {1, 0, 0, -1};
    }
    return {1, 0, 0, 1};
}

M2 zrot_matrix(Angle a) { return {1, 0, 0, a.phase()}; }

V2 trap_vector(const TrapSpec& t) {
    switch (t.init()) {
        case Init::Zero: return {1, 0};
        case Init::One: return {0, 1};
        case Init::Plus: return {kInv2, kInv2};
        case Init::Minus: return {kInv2, -kInv2};
        case Init::PlusI: return {kInv2, Cx(0, kInv2)};
        case Init::MinusI: return {kInv2, Cx(0, -kInv2)};
        default: return {1, 0};
    }
}

V2 init_vector(Init i) {
    TrapSpec t;
    switch (i) {
        case Init::Zero: t = {PauliLetter::Z, 0}; break;
        case Init::One: t = {PauliLetter::Z, 1}; break;
        case Init::Plus: t = {PauliLetter::X, 0}; break;
        case Init::Minus: t = {PauliLetter::X, 1}; break;
        case Init::PlusI: t = {PauliLetter::Y, 0}; break;
        case Init::MinusI: t = {PauliLetter::Y, 1}; break;
        default: throw ProtocolMisuseError("oracle needs a Pauli-eigenstate data state");
    }
    return trap_vector(t);
}

V2 pad_state(const V2& v, int kX, Angle kZ) {
    V2 out = v;
    if (kX) out = apply_m(pauli_matrix(PauliLetter::X), out);
    return apply_m(zrot_matrix(kZ), out);
}

// Probability that the attack A flips the padded eigenstate's check:
// 1 - |<u|A|u>|^2 with u = Z(kZ) X^{kX} |t>.
double flip_prob(const TrapSpec& t, int kX, Angle kZ, const M2& attack) {
    V2 u = pad_state(trap_vector(t), kX, kZ);
    return 1.0 - std::norm(inner(u, apply_m(attack, u)));
}

// Survives-as-the-same-state probability for the data wire.
bool alters_data(Init data, int kX, Angle kZ, const M2& attack) {
    V2 u = pad_state(init_vector(data), kX, kZ);
    return std::norm(inner(u, apply_m(attack, u))) < 1.0 - 1e-9;
}

const std::array<TrapSpec, 6> kSixTraps = {
    TrapSpec{PauliLetter::X, 0}, TrapSpec{PauliLetter::X, 1}, TrapSpec{PauliLetter::Y, 0},
    TrapSpec{PauliLetter::Y, 1}, TrapSpec{PauliLetter::Z, 0}, TrapSpec{PauliLetter::Z, 1}};

// Pad support depends on when the attack lands: before the computation the
// Z pads are uniform on the pi/4 lattice; after it only the byproduct frame
// and teleport folds remain, so kZ is uniform on {0, pi}.
const std::vector<int> kPadFull = {0, 1, 2, 3, 4, 5, 6, 7};
const std::vector<int> kPadFrame = {0, 4};

// Expected flip probability at a checked (trap/sentinel) position under
// uniform trap bases and the given pad support.
double checked_flip_expectation(const M2& attack, const std::vector<int>& kz_support) {
    double acc = 0.0;
    int cells = 0;
    for (const TrapSpec& t : kSixTraps)
        for (int kX = 0; kX < 2; ++kX)
            for (int kZ : kz_support) {
                acc += flip_prob(t, kX, Angle(kZ), attack);
                ++cells;
            }
    return acc / cells;
}

double data_alter_expectation(Init data, const M2& attack, const std::vector<int>& kz_support) {
    double acc = 0.0;
    int cells = 0;
    for (int kX = 0; kX < 2; ++kX)
        for (int kZ : kz_support) {
            acc += alters_data(data, kX, Angle(kZ), attack) ? 1.0 : 0.0;
            ++cells;
        }
    return acc / cells;
}

// Detection statistics for an attack applying the operators `ops` to
// `weight` distinct uniform block positions. Uniform letters are expanded by
// the caller. Canonical layout: position 0 data, 1..n_C-1 sentinels, rest
// traps; a uniform permutation makes position tuples exchangeable, so
// enumerating tuples of the canonical layout is exact.
DetectionStats pauli_stats(const OracleConfig& cfg, const std::vector<M2>& ops,
                           const std::vector<int>& kz_support) {
    const int size = cfg.code.block_size() * cfg.blocks;
    const int weight = static_cast<int>(ops.size());
    if (size > 24) throw ConfigError("oracle config too large (positions > 24)");

    auto role_of = [&](int pos) {
        int within = pos % cfg.code.block_size();
        if (within == 0) return SlotRole::Data;
        if (within < cfg.code.n_c) return SlotRole::Sentinel;
        return SlotRole::Trap;
    };

    std::vector<int> tuple(weight);
    DetectionStats st;
    double total = 0.0;

    // Enumerate ordered tuples of distinct positions.
    std::vector<int> idx(weight, 0);
    std::function<void(int, double)> rec = [&](int depth, double weight_so_far) {
        if (depth == weight) {
            // Per-cell expectations, positions independent given the tuple.
            double p_no_flip = 1.0;
            double p_alter = 0.0;
            for (int i = 0; i < weight; ++i) {
                if (role_of(tuple[i]) == SlotRole::Data) {
                    p_alter = data_alter_expectation(cfg.data_state, ops[i], kz_support);
                } else {
                    p_no_flip *= 1.0 - checked_flip_expectation(ops[i], kz_support);
                }
            }
            st.p_detect += weight_so_far * (1.0 - p_no_flip);
            st.p_alter += weight_so_far * p_alter;
            st.p_undetected_alter += weight_so_far * p_alter * p_no_flip;
            total += weight_so_far;
            return;
        }
        for (int pos = 0; pos < size; ++pos) {
            bool used = false;
            for (int i = 0; i < depth; ++i) used |= tuple[i] == pos;
            if (used) continue;
            if (cfg.fix_role && role_of(pos) != *cfg.fix_role) continue;
            tuple[depth] = pos;
            rec(depth + 1, weight_so_far);
        }
    };
    rec(0, 1.0);

    st.p_detect /= total;
    st.p_alter /= total;
    st.p_undetected_alter /= total;
    return st;
}

// Pass probability of one closed all-checked cycle of length L under a
// skipped permutation: check i announces entry i's folded basis but measures
// qubit i+1. Exact enumeration over trap states and pads (member 0's pad is
// fixed; only differences matter).
double closed_cycle_pass(int L) {
    std::vector<int> state_idx(L, 0), kx(L, 0), kz(L, 0);
    double acc = 0.0;
    long long cells = 0;

    // enumerate states (6^L), pads of members 1..L-1 (16^(L-1))
    std::function<void(int)> rec = [&](int depth) {
        if (depth == L) {
            std::function<void(int)> pads = [&](int d) {
                if (d == L) {
                    double match = 1.0;
                    for (int i = 0; i < L; ++i) {
                        const TrapSpec& exp_t = kSixTraps[state_idx[i]];
                        const TrapSpec& act_t = kSixTraps[state_idx[(i + 1) % L]];
                        int akx = kx[(i + 1) % L];
                        Angle akz(kz[(i + 1) % L]);
                        V2 actual = pad_state(trap_vector(act_t), akx, akz);
                        // expected-basis state = the padded expected trap
                        V2 expected = pad_state(trap_vector(exp_t), kx[i], Angle(kz[i]));
                        match *= std::norm(inner(expected, actual));
                    }
                    acc += match;
                    ++cells;
                    return;
                }
                for (kx[d] = 0; kx[d] < 2; ++kx[d])
                    for (int kzv : kPadFrame) {
                        kz[d] = kzv;
                        pads(d + 1);
                    }
            };
            kx[0] = 0;
            kz[0] = 0;
            pads(1);
            return;
        }
        for (state_idx[depth] = 0; state_idx[depth] < 6; ++state_idx[depth]) rec(depth + 1);
    };
    rec(0);
    return acc / static_cast<double>(cells);
}

std::vector<std::vector<int>> cycles_of(const std::vector<int>& perm) {
    std::vector<std::vector<int>> cycles;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start]) continue;
        std::vector<int> cyc;
        int cur = static_cast<int>(start);
        while (!seen[cur]) {
            seen[cur] = true;
            cyc.push_back(cur);
            cur = perm[cur];
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

DetectionStats skip_permutation_stats(const OracleConfig& cfg) {
    const int size = cfg.code.block_size();
    if (size > 6) throw ConfigError("misplacement oracle limited to single small blocks");

    // Cache closed-cycle pass probabilities by length.
    std::map<int, double> cycle_cache;
    auto cycle_pass = [&](int L) {
        auto it = cycle_cache.find(L);
        if (it == cycle_cache.end()) it = cycle_cache.emplace(L, closed_cycle_pass(L)).first;
        return it->second;
    };

    std::vector<int> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    DetectionStats st;
    int count = 0;

    // Enumerate pi'' (all permutations) x the uniform data position.
    do {
        for (int data_pos = 0; data_pos < size; ++data_pos) {
            double pass = 1.0;
            bool altered = perm[data_pos] != data_pos;
            for (const auto& cyc : cycles_of(perm)) {
                if (cyc.size() == 1) continue;
                bool has_data = false;
                for (int p : cyc) has_data |= p == data_pos;
                if (has_data)
                    pass *= std::pow(0.5, static_cast<double>(cyc.size() - 1));
                else
                    pass *= cycle_pass(static_cast<int>(cyc.size()));
            }
            st.p_detect += 1.0 - pass;
            st.p_alter += altered ? 1.0 : 0.0;
            st.p_undetected_alter += altered ? pass : 0.0;
            ++count;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    st.p_detect /= count;
    st.p_alter /= count;
    st.p_undetected_alter /= count;
    return st;
}

DetectionStats wrong_block_swap_stats(const OracleConfig& cfg) {
    const int size = cfg.code.block_size();
    if (size > 6) throw ConfigError("swap oracle limited to small blocks");
    if (cfg.blocks < 2) throw ConfigError("wrong_block_swap needs two blocks");

    // Swapping two blocks pairs entry i of one block with qubit i of the
    // other: per index i either a closed trap/trap 2-cycle or, where a data
    // position sits, a broken chain with one 1/2-check per non-data side.
    const double e2 = closed_cycle_pass(2);
    DetectionStats st;
    int count = 0;
    for (int d1 = 0; d1 < size; ++d1)
        for (int d2 = 0; d2 < size; ++d2) {
            double pass = 1.0;
            for (int i = 0; i < size; ++i) {
                bool a_data = i == d1;
                bool b_data = i == d2;
                if (a_data && b_data) continue;
                if (a_data || b_data)
                    pass *= 0.5;
                else
                    pass *= e2;
            }
            st.p_detect += 1.0 - pass;
            st.p_alter += 1.0;
            st.p_undetected_alter += pass;
            ++count;
        }
    st.p_detect /= count;
    st.p_alter /= count;
    st.p_undetected_alter /= count;
    return st;
}

} // namespace

void validate_strategy(const Strategy& s, int k) {
    if (s.prover < 1 || s.prover > k)
        throw ConfigError("strategy prover index out of range");
    switch (s.variant) {
        case Strategy::Variant::Honest:
            break;
        case Strategy::Variant::PauliAttack:
        case Strategy::Variant::AngleTamper:
        case Strategy::Variant::SkipPermutation:
        case Strategy::Variant::WrongBlockSwap:
            // Only P1 holds the blocks at these joints.
            if (s.prover != 1)
                throw ConfigError("this deviation is only available to prover 1");
            break;
        case Strategy::Variant::TeleportLie:
            if (s.prover == 1)
                throw ConfigError("teleport_lie applies to the input-prep teleport of "
                                  "provers other than P1");
            break;
    }
    if (s.variant == Strategy::Variant::PauliAttack && s.weight < 1)
        throw ConfigError("pauli_attack weight must be >= 1");
}

DetectionStats detection_oracle(const Strategy& s, const OracleConfig& cfg) {
    switch (s.variant) {
        case Strategy::Variant::Honest:
            return {};
        case Strategy::Variant::PauliAttack: {
            // Uniform letters average over the three non-identity Paulis; a
            // given letter list is used verbatim.
            const std::vector<int>& support =
                s.timing == Strategy::Timing::BeforeOutputTeleport ? kPadFrame : kPadFull;
            if (!s.letters.empty()) {
                std::vector<M2> ops;
                for (int i = 0; i < s.weight; ++i)
                    ops.push_back(pauli_matrix(
                        s.letters[std::min<std::size_t>(i, s.letters.size() - 1)]));
                return pauli_stats(cfg, ops, support);
            }
            const PauliLetter all[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
            DetectionStats acc;
            int combos = 0;
            std::vector<int> pick(s.weight, 0);
            std::function<void(int)> rec = [&](int depth) {
                if (depth == s.weight) {
                    std::vector<M2> ops;
                    for (int i : pick) ops.push_back(pauli_matrix(all[i]));
                    DetectionStats one = pauli_stats(cfg, ops, support);
                    acc.p_detect += one.p_detect;
                    acc.p_alter += one.p_alter;
                    acc.p_undetected_alter += one.p_undetected_alter;
                    ++combos;
                    return;
                }
                for (pick[depth] = 0; pick[depth] < 3; ++pick[depth]) rec(depth + 1);
            };
            rec(0);
            acc.p_detect /= combos;
            acc.p_alter /= combos;
            acc.p_undetected_alter /= combos;
            return acc;
        }
        case Strategy::Variant::AngleTamper: {
            // A delta shift at one site acts as a Z(offset) content error on
            // the wire that owns the attacked row (uniform block position).
            return pauli_stats(cfg, {zrot_matrix(s.offset)}, kPadFull);
        }
        case Strategy::Variant::TeleportLie: {
            PauliLetter p = s.bit_flip_mask == 1   ? PauliLetter::X
                            : s.bit_flip_mask == 2 ? PauliLetter::Z
                                                   : PauliLetter::Y;
            return pauli_stats(cfg, {pauli_matrix(p)}, kPadFull);
        }
        case Strategy::Variant::SkipPermutation:
            return skip_permutation_stats(cfg);
        case Strategy::Variant::WrongBlockSwap:
            return wrong_block_swap_stats(cfg);
    }
    return {};
}

nlohmann::json Strategy::to_json() const {
    nlohmann::json j;
    const char* names[] = {"honest",       "pauli_attack",     "angle_tamper",
                           "teleport_lie", "skip_permutation", "wrong_block_swap"};
    j["variant"] = names[static_cast<int>(variant)];
    j["prover"] = prover;
    if (variant == Variant::PauliAttack) {
        j["weight"] = weight;
        if (letters.empty()) {
            j["letters"] = "uniform";
        } else {
            std::string ls;
            for (PauliLetter p : letters) ls += pauli_char(p);
            j["letters"] = ls;
        }
        const char* times[] = {"after_input_prep", "during_ubqc", "before_output_teleport"};
        j["timing"] = times[static_cast<int>(timing)];
    }
    if (variant == Variant::AngleTamper) j["offset"] = offset.eighths();
    if (variant == Variant::TeleportLie) j["bit_flip_mask"] = bit_flip_mask;
    return j;
}

Strategy Strategy::from_json(const nlohmann::json& j) {
    Strategy s;
    std::string v = j.at("variant").get<std::string>();
    if (v == "honest") s.variant = Variant::Honest;
    else if (v == "pauli_attack") s.variant = Variant::PauliAttack;
    else if (v == "angle_tamper") s.variant = Variant::AngleTamper;
    else if (v == "teleport_lie") s.variant = Variant::TeleportLie;
    else if (v == "skip_permutation") s.variant = Variant::SkipPermutation;
    else if (v == "wrong_block_swap") s.variant = Variant::WrongBlockSwap;
    else throw ConfigError("unknown strategy variant: " + v);

    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "variant" && k != "prover" && k != "weight" && k != "letters" &&
            k != "timing" && k != "offset" && k != "bit_flip_mask")
            throw ConfigError("strategy JSON: unknown field '" + k + "'");
    }
    if (j.contains("prover")) s.prover = j.at("prover").get<int>();
    if (j.contains("weight")) s.weight = j.at("weight").get<int>();
    if (j.contains("letters") && j.at("letters").is_string() &&
        j.at("letters").get<std::string>() != "uniform")
        for (char c : j.at("letters").get<std::string>()) s.letters.push_back(pauli_from_char(c));
    if (j.contains("timing")) {
        std::string t = j.at("timing").get<std::string>();
        if (t == "after_input_prep") s.timing = Timing::AfterInputPrep;
        else if (t == "during_ubqc") s.timing = Timing::DuringUbqc;
        else if (t == "before_output_teleport") s.timing = Timing::BeforeOutputTeleport;
        else throw ConfigError("unknown timing: " + t);
    }
    if (j.contains("offset")) s.offset = Angle(j.at("offset").get<int>());
    if (j.contains("bit_flip_mask")) s.bit_flip_mask = j.at("bit_flip_mask").get<int>();
    return s;
}

} // namespace ubqc
