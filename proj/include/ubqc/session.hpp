#pragma once

#include <cstdlib>

#include "ubqc/authcrypto.hpp"
#include "ubqc/bus.hpp"
#include "ubqc/rng.hpp"
#include "ubqc/statevector.hpp"

namespace ubqc {

// One protocol session: the shared quantum carrier, the deterministic
// randomness stream, the classical bus and the verifier's private ledger.
// Quantum locality is enforced through the ownership map: a party may only
// operate on qubits it owns, and teleportation is the only transfer.
struct Session {
    explicit Session(std::uint64_t seed, int provers, int max_qubits = default_cap())
        : state(max_qubits), rng(seed), k(provers) {}

    StateVector state;
    Rng rng;
    Bus bus;
    KeyLedger ledger;
    int k;
    std::map<QubitId, int> owner;

    QubitId alloc_for(int party, Init init, Angle planar = Angle(0)) {
        QubitId q = state.alloc(init, planar);
        owner[q] = party;
        return q;
    }

    void require_owner(int party, QubitId q) const {
        auto it = owner.find(q);
        if (it == owner.end() || it->second != party)
            throw ProtocolMisuseError("party " + std::to_string(party) +
                                      " does not own qubit " + std::to_string(q));
    }

    // Shares |Phi+> between two parties; first half to pa, second to pb.
    std::pair<QubitId, QubitId> share_bell(int pa, int pb) {
        auto [qa, qb] = state.make_bell_pair();
        owner[qa] = pa;
        owner[qb] = pb;
        return {qa, qb};
    }

    // Teleports `src` (owned by `from`) through `bell_half` (owned by `from`);
    // the partner qubit changes hands implicitly (it already sits with its
    // owner). Returns byproducts.
    std::pair<int, int> teleport_from(int from, QubitId src, QubitId bell_half) {
        require_owner(from, src);
        require_owner(from, bell_half);
        return state.teleport(src, bell_half, rng);
    }

    void drop_owner(QubitId q) { owner.erase(q); }

    static int default_cap() {
        if (const char* env = std::getenv("UBQC_MAX_QUBITS")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        return StateVector::kDefaultMaxQubits;
    }
};

} // namespace ubqc
