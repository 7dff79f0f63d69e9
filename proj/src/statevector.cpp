#include "ubqc/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ubqc {

namespace {
constexpr double kNormTol = 1e-10;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
} // namespace

StateVector::StateVector(int max_qubits) : max_qubits_(max_qubits) {
    amps_.assign(1, Amplitude(1.0, 0.0));
}

int StateVector::require(QubitId q) const {
    auto it = pos_.find(q);
    if (it == pos_.end())
        throw UnknownQubitError("qubit " + std::to_string(q) + " is not in the register");
    return it->second;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::renormalize(double norm_sq) {
    const double n = std::sqrt(norm_sq);
    if (std::abs(n - 1.0) > kNormTol)
        throw ProtocolMisuseError("state norm drifted: " + std::to_string(n));
    if (std::abs(n - 1.0) < 1e-14) return; // already tight
    const double inv = 1.0 / n;
    for (auto& a : amps_) a *= inv;
}

QubitId StateVector::alloc(Init init, Angle planar_angle) {
    if (num_qubits() + 1 > max_qubits_)
        throw CapacityError("register would exceed " + std::to_string(max_qubits_) + " qubits");

    Amplitude c0, c1;
    switch (init) {
        case Init::Zero:   c0 = 1.0; c1 = 0.0; break;
        case Init::One:    c0 = 0.0; c1 = 1.0; break;
        case Init::Plus:   c0 = kInvSqrt2; c1 = kInvSqrt2; break;
        case Init::Minus:  c0 = kInvSqrt2; c1 = -kInvSqrt2; break;
        case Init::PlusI:  c0 = kInvSqrt2; c1 = Amplitude(0.0, kInvSqrt2); break;
        case Init::MinusI: c0 = kInvSqrt2; c1 = Amplitude(0.0, -kInvSqrt2); break;
        case Init::Planar: c0 = kInvSqrt2; c1 = planar_angle.phase() * kInvSqrt2; break;
    }

    const std::size_t old_dim = amps_.size();
    amps_.resize(old_dim * 2);
    for (std::size_t i = 0; i < old_dim; ++i) {
        amps_[i + old_dim] = amps_[i] * c1;
        amps_[i] *= c0;
    }

    QubitId id = next_id_++;
    pos_[id] = num_qubits();
    order_.push_back(id);
    high_watermark_ = std::max(high_watermark_, num_qubits());
    return id;
}

void StateVector::apply_gate(Gate g, QubitId a) {
    const int p = require(a);
    const std::uint64_t mask = 1ull << p;
    const std::size_t dim = amps_.size();

    switch (g) {
        case Gate::X:
            for (std::size_t i = 0; i < dim; ++i)
                if (!(i & mask)) std::swap(amps_[i], amps_[i | mask]);
            break;
        case Gate::Y:
            for (std::size_t i = 0; i < dim; ++i)
                if (!(i & mask)) {
                    Amplitude lo = amps_[i], hi = amps_[i | mask];
                    amps_[i] = Amplitude(0, -1) * hi;
                    amps_[i | mask] = Amplitude(0, 1) * lo;
                }
            break;
        case Gate::Z:
            for (std::size_t i = 0; i < dim; ++i)
                if (i & mask) amps_[i] = -amps_[i];
            break;
        case Gate::H:
            for (std::size_t i = 0; i < dim; ++i)
                if (!(i & mask)) {
                    Amplitude lo = amps_[i], hi = amps_[i | mask];
                    amps_[i] = (lo + hi) * kInvSqrt2;
                    amps_[i | mask] = (lo - hi) * kInvSqrt2;
                }
            break;
        default:
            throw ProtocolMisuseError("gate arity mismatch: need one target");
    }
}

void StateVector::apply_zrot(QubitId q, Angle theta) {
    const int p = require(q);
    const std::uint64_t mask = 1ull << p;
    const Amplitude ph = theta.phase();
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (i & mask) amps_[i] *= ph;
}

void StateVector::apply_gate(Gate g, QubitId a, QubitId b) {
    const int pa = require(a);
    const int pb = require(b);
    if (pa == pb) throw ProtocolMisuseError("two-qubit gate needs distinct targets");
    const std::uint64_t ma = 1ull << pa;
    const std::uint64_t mb = 1ull << pb;
    const std::size_t dim = amps_.size();

    switch (g) {
        case Gate::CZ:
            for (std::size_t i = 0; i < dim; ++i)
                if ((i & ma) && (i & mb)) amps_[i] = -amps_[i];
            break;
        case Gate::CX:
            for (std::size_t i = 0; i < dim; ++i)
                if ((i & ma) && !(i & mb)) std::swap(amps_[i], amps_[i | mb]);
            break;
        default:
            throw ProtocolMisuseError("gate arity mismatch: need two targets");
    }
}

void StateVector::erase_bell_record(QubitId q) {
    auto it = bell_partner_.find(q);
    if (it != bell_partner_.end()) {
        bell_partner_.erase(it->second);
        bell_partner_.erase(q);
    }
}

int StateVector::measure_z(QubitId q, Rng& rng) {
    const int p = require(q);
    const std::uint64_t mask = 1ull << p;

    double p0 = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (!(i & mask)) p0 += std::norm(amps_[i]);

    const int outcome = rng.sample_outcome(p0);
    const double pr = outcome == 0 ? p0 : 1.0 - p0;
    const double scale = 1.0 / std::sqrt(pr);

    // Collapse and compact in one pass.
    const std::uint64_t low = mask - 1;
    const std::size_t half = amps_.size() / 2;
    scratch_.resize(half);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        std::uint64_t src = ((i & ~low) << 1) | (i & low) | (outcome ? mask : 0);
        scratch_[i] = amps_[src] * scale;
        norm_sq += std::norm(scratch_[i]);
    }
    amps_.swap(scratch_);

    erase_bell_record(q);
    order_.erase(order_.begin() + p);
    pos_.erase(q);
    for (int t = p; t < num_qubits(); ++t) pos_[order_[t]] = t;
    renormalize(norm_sq);
    return outcome;
}

int StateVector::measure_planar(QubitId q, Angle angle, Rng& rng) {
    const int p = require(q);
    const std::uint64_t mask = 1ull << p;

    // Canonical half-plane: sample against the basis at angle mod pi, then
    // relabel. This keeps paired seeded runs bit-stable under a pi shift.
    const int flip_label = angle.eighths() >= 4 ? 1 : 0;
    const Angle canon(angle.eighths() % 4);
    const Amplitude conj_ph = std::conj(canon.phase());

    const std::size_t half = amps_.size() / 2;
    const std::uint64_t low = mask - 1;
    double p0 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        std::uint64_t i_lo = ((i & ~low) << 1) | (i & low);
        p0 += std::norm((amps_[i_lo] + conj_ph * amps_[i_lo | mask]) * kInvSqrt2);
    }

    int canon_outcome;
    if (rng.has_forced()) {
        // Forced values pin the final (relabelled) outcome.
        canon_outcome = rng.take_forced() ^ flip_label;
    } else {
        canon_outcome = rng.uniform() < p0 ? 0 : 1;
    }
    const double pr = canon_outcome == 0 ? p0 : 1.0 - p0;
    if (pr < 1e-9)
        throw ProtocolMisuseError("forced planar outcome has zero probability");
    const double scale = 1.0 / std::sqrt(2.0 * pr);
    const Amplitude branch_ph = canon_outcome == 0 ? conj_ph : -conj_ph;

    scratch_.resize(half);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        std::uint64_t i_lo = ((i & ~low) << 1) | (i & low);
        scratch_[i] = (amps_[i_lo] + branch_ph * amps_[i_lo | mask]) * scale;
        norm_sq += std::norm(scratch_[i]);
    }

    erase_bell_record(q);
    order_.erase(order_.begin() + p);
    pos_.erase(q);
    for (int t = p; t < num_qubits(); ++t) pos_[order_[t]] = t;
    amps_.swap(scratch_);
    renormalize(norm_sq);
    return canon_outcome ^ flip_label;
}

std::pair<QubitId, QubitId> StateVector::make_bell_pair() {
    if (num_qubits() + 2 > max_qubits_)
        throw CapacityError("no capacity for a Bell pair");

    const std::size_t old_dim = amps_.size();
    amps_.resize(old_dim * 4, Amplitude(0.0));
    for (std::size_t i = 0; i < old_dim; ++i) {
        Amplitude v = amps_[i] * kInvSqrt2;
        amps_[i] = v;
        amps_[i + 3 * old_dim] = v; // both new bits set
    }

    QubitId q1 = next_id_++;
    QubitId q2 = next_id_++;
    pos_[q1] = num_qubits();
    order_.push_back(q1);
    pos_[q2] = num_qubits();
    order_.push_back(q2);
    high_watermark_ = std::max(high_watermark_, num_qubits());

    bell_partner_[q1] = q2;
    bell_partner_[q2] = q1;
    ++bell_pairs_made_;
    return {q1, q2};
}

QubitId StateVector::bell_partner(QubitId half) const {
    auto it = bell_partner_.find(half);
    if (it == bell_partner_.end())
        throw ProtocolMisuseError("qubit " + std::to_string(half) + " is not half of a live Bell pair");
    return it->second;
}

std::pair<int, int> StateVector::teleport(QubitId src, QubitId bell_half, Rng& rng) {
    require(src);
    if (!is_bell_half(bell_half))
        throw ProtocolMisuseError("teleport target is not half of a live Bell pair");

    apply_gate(Gate::CX, src, bell_half);
    apply_gate(Gate::H, src);
    int a = measure_z(bell_half, rng); // X byproduct
    int b = measure_z(src, rng);       // Z byproduct
    return {a, b};
}

double StateVector::fidelity(const std::vector<QubitId>& qubits, const StateVector& reference) const {
    const int k = static_cast<int>(qubits.size());
    if (reference.num_qubits() != k)
        throw DimensionError("fidelity: reference register size mismatch");

    std::vector<int> ps(k);
    for (int t = 0; t < k; ++t) ps[t] = require(qubits[t]);

    const int n = num_qubits();
    std::vector<int> rest;
    for (int p = 0; p < n; ++p)
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) rest.push_back(p);

    // F = sum over rest-basis j of |<ref (x) e_j | psi>|^2
    double f = 0.0;
    const std::size_t ref_dim = reference.amps_.size();
    for (std::uint64_t j = 0; j < (1ull << rest.size()); ++j) {
        std::uint64_t base = 0;
        for (std::size_t t = 0; t < rest.size(); ++t)
            if (j & (1ull << t)) base |= 1ull << rest[t];
        Amplitude c = 0.0;
        for (std::uint64_t r = 0; r < ref_dim; ++r) {
            std::uint64_t idx = base;
            for (int t = 0; t < k; ++t)
                if (r & (1ull << t)) idx |= 1ull << ps[t];
            c += std::conj(reference.amps_[r]) * amps_[idx];
        }
        f += std::norm(c);
    }
    return f;
}

std::array<Amplitude, 4> StateVector::reduced_single(QubitId q) const {
    const int p = require(q);
    const std::uint64_t mask = 1ull << p;
    std::array<Amplitude, 4> rho{Amplitude(0), Amplitude(0), Amplitude(0), Amplitude(0)};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) continue;
        Amplitude a0 = amps_[i];
        Amplitude a1 = amps_[i | mask];
        rho[0] += a0 * std::conj(a0);
        rho[1] += a0 * std::conj(a1);
        rho[2] += a1 * std::conj(a0);
        rho[3] += a1 * std::conj(a1);
    }
    return rho;
}

} // namespace ubqc
