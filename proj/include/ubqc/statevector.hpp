#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ubqc/angle.hpp"
#include "ubqc/errors.hpp"
#include "ubqc/rng.hpp"

#include <json.hpp>

namespace ubqc {

using QubitId = std::uint64_t;
using Amplitude = std::complex<double>;

enum class Init { Zero, One, Plus, Minus, PlusI, MinusI, Planar };

enum class Gate { X, Y, Z, H, Zrot, CZ, CX };

// Pure state of a dynamically sized qubit register. Qubit ids are opaque and
// never reused; measured qubits are discarded and the register shrinks.
// Tensor position p of a qubit means bit p of the amplitude index
// (little-endian). The register is confined to one session.
class StateVector {
  public:
    explicit StateVector(int max_qubits = kDefaultMaxQubits);

    int num_qubits() const { return static_cast<int>(order_.size()); }
    int max_qubits() const { return max_qubits_; }
    void set_max_qubits(int cap) { max_qubits_ = cap; }
    std::uint64_t bell_pairs_made() const { return bell_pairs_made_; }
    int high_watermark() const { return high_watermark_; }

    bool has_qubit(QubitId q) const { return pos_.count(q) != 0; }

    QubitId alloc(Init init, Angle planar_angle = Angle(0));

    void apply_gate(Gate g, QubitId a);
    void apply_gate(Gate g, QubitId a, QubitId b);      // CZ, CX (control a, target b)
    void apply_zrot(QubitId q, Angle theta);

    int measure_z(QubitId q, Rng& rng);
    // Projects onto |+_angle> (outcome 0) / |-_angle> (outcome 1), then
    // discards q. Sampling is canonicalised on the half-plane angle mod pi so
    // a pi shift of the basis flips the outcome bit under the same seed.
    int measure_planar(QubitId q, Angle angle, Rng& rng);

    std::pair<QubitId, QubitId> make_bell_pair();

    // Accounts for a Bell pair consumed without being materialised (the
    // remote-preparation shortcut).
    void count_bell_pair() { ++bell_pairs_made_; }

    // Bell-measures (src, bell_half); afterwards the partner qubit of
    // bell_half holds X^a Z^b |psi>. Both inputs are consumed.
    std::pair<int, int> teleport(QubitId src, QubitId bell_half, Rng& rng);

    QubitId bell_partner(QubitId half) const;
    bool is_bell_half(QubitId q) const { return bell_partner_.count(q) != 0; }

    // |<reference|psi_reduced>|^2, where qubits[t] of this state lines up with
    // tensor position t of `reference`. Works whether or not the listed qubits
    // are entangled with the rest (the rest is traced out).
    double fidelity(const std::vector<QubitId>& qubits, const StateVector& reference) const;

    // Reduced density matrix of a single qubit, row-major 2x2.
    std::array<Amplitude, 4> reduced_single(QubitId q) const;

    double norm() const;
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    int position_of(QubitId q) const { return require(q); }

    // Debug dump: amplitudes as an array of [re, im] pairs.
    nlohmann::json amplitudes_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& a : amps_) j.push_back({a.real(), a.imag()});
        return j;
    }

    static constexpr int kDefaultMaxQubits = 22;

  private:
    int require(QubitId q) const;
    void renormalize(double norm_sq);
    void erase_bell_record(QubitId q);

    std::vector<Amplitude> amps_;
    std::vector<Amplitude> scratch_; // reused collapse buffer
    std::vector<QubitId> order_;     // order_[p] = qubit at tensor position p
    std::map<QubitId, int> pos_;
    std::map<QubitId, QubitId> bell_partner_;
    QubitId next_id_ = 1;
    int max_qubits_;
    std::uint64_t bell_pairs_made_ = 0;
    int high_watermark_ = 0;
};

} // namespace ubqc
