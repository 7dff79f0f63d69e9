#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ubqc/errors.hpp"

#include <json.hpp>

namespace ubqc {

// Party 0 is the verifier; provers are 1..k.
constexpr int kVerifier = 0;

enum class MsgKind {
    InstructEncode,     // V -> Pi: encode wire args[0] with code n_C args[1]
    InstructTrap,       // V -> Pi: trap spec (wire, canonical slot, basis, eig)
    InstructPermute,    // V -> Pi: apply permutation id args[1] to block args[0]
    InstructPad,        // V -> Pi: Z-rotate block args[0] position args[1] by args[2]
    TeleportResult,     // Pi -> V: byproducts (a, b) for block args[0] position args[1]
    RemotePrepInstruct, // V -> P2: measure the (x,y) Bell half at theta~ args[2]
    RemotePrepOutcome,  // P2 -> V: outcome m for site (x,y)
    EntangleInstruct,   // V -> P1: entangle column args[0] (args[1] edges)
    DeltaInstruct,      // V -> P1: measure site (x,y) at delta args[2]
    MeasureOutcome,     // P1 -> V: outcome s for site (x,y)
    ZBasisInstruct,     // V -> P1: measure site (x,y) in Z
    ZBasisOutcome,      // P1 -> V
    OutputTeleportInstruct, // V -> P1: send block args[0] position args[1] to prover args[2]
    TrapBasisAnnounce,  // V -> Pi: measure block args[0] position args[1]; z-basis flag args[2], angle args[3]
    TrapResult,         // Pi -> V: block args[0] position args[1] outcome args[2]
    VerdictAnnounce,    // V -> Pi: y0 (1 = pass)
    KeyRelease,         // V -> Pi: pad keys for block args[0] position args[1]: kX args[2], kZ args[3]
    PermRelease,        // V -> Pi: block args[0]: canonical slot args[1] -> position args[2]
};

const char* msg_kind_name(MsgKind k);

struct Message {
    int seq = 0;
    int from = 0;
    int to = 0;
    MsgKind kind;
    std::array<int, 4> args{0, 0, 0, 0};
};

// Synchronous ordered in-memory message log. Every message must involve the
// verifier: the provers have no channel to each other.
class Bus {
  public:
    void send(int from, int to, MsgKind kind, std::array<int, 4> args = {0, 0, 0, 0}) {
        if (from != kVerifier && to != kVerifier)
            throw ProtocolMisuseError("prover-to-prover message blocked by the bus");
        log_.push_back({next_seq_++, from, to, kind, args});
    }

    const std::vector<Message>& log() const { return log_; }
    std::size_t size() const { return log_.size(); }

    nlohmann::json to_json() const;

    // Messages received by one party, in order.
    std::vector<Message> received_by(int party) const;

  private:
    std::vector<Message> log_;
    int next_seq_ = 0;
};

// Transcript audits used by the channel-discipline and key-secrecy
// invariants. Returns a list of violations (empty = clean).
std::vector<std::string> audit_transcript(const Bus& bus);

} // namespace ubqc
