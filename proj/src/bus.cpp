#include "ubqc/bus.hpp"

namespace ubqc {

const char* msg_kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::InstructEncode: return "instruct_encode";
        case MsgKind::InstructTrap: return "instruct_trap";
        case MsgKind::InstructPermute: return "instruct_permute";
        case MsgKind::InstructPad: return "instruct_pad";
        case MsgKind::TeleportResult: return "teleport_result";
        case MsgKind::RemotePrepInstruct: return "remote_prep_instruct";
        case MsgKind::RemotePrepOutcome: return "remote_prep_outcome";
        case MsgKind::EntangleInstruct: return "entangle_instruct";
        case MsgKind::DeltaInstruct: return "delta_instruct";
        case MsgKind::MeasureOutcome: return "measure_outcome";
        case MsgKind::ZBasisInstruct: return "z_basis_instruct";
        case MsgKind::ZBasisOutcome: return "z_basis_outcome";
        case MsgKind::OutputTeleportInstruct: return "output_teleport_instruct";
        case MsgKind::TrapBasisAnnounce: return "trap_basis_announce";
        case MsgKind::TrapResult: return "trap_result";
        case MsgKind::VerdictAnnounce: return "verdict_announce";
        case MsgKind::KeyRelease: return "key_release";
        case MsgKind::PermRelease: return "perm_release";
    }
    return "?";
}

nlohmann::json Bus::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& msg : log_) {
        j.push_back({{"seq", msg.seq},
                     {"from", msg.from},
                     {"to", msg.to},
                     {"kind", msg_kind_name(msg.kind)},
                     {"args", msg.args}});
    }
    return j;
}

std::vector<Message> Bus::received_by(int party) const {
    std::vector<Message> out;
    for (const auto& msg : log_)
        if (msg.to == party) out.push_back(msg);
    return out;
}

std::vector<std::string> audit_transcript(const Bus& bus) {
    std::vector<std::string> violations;
    bool verdict_seen = false;
    bool verdict_pass = false;
    for (const auto& msg : bus.log()) {
        if (msg.from != kVerifier && msg.to != kVerifier)
            violations.push_back("prover-to-prover message at seq " + std::to_string(msg.seq));
        if (msg.kind == MsgKind::VerdictAnnounce) {
            verdict_seen = true;
            verdict_pass = msg.args[0] == 1;
        }
        if (msg.kind == MsgKind::KeyRelease || msg.kind == MsgKind::PermRelease) {
            if (!verdict_seen)
                violations.push_back("key material released before the verdict at seq " +
                                     std::to_string(msg.seq));
            else if (!verdict_pass)
                violations.push_back("key material released after a fail verdict at seq " +
                                     std::to_string(msg.seq));
        }
    }
    return violations;
}

} // namespace ubqc
