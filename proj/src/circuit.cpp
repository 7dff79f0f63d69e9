#include "ubqc/circuit.hpp"

#include <set>

namespace ubqc {

const char* gate_op_name(GateOp op) {
    switch (op) {
        case GateOp::H: return "H";
        case GateOp::Zrot: return "Zrot";
        case GateOp::X: return "X";
        case GateOp::CX: return "CX";
        case GateOp::CZ: return "CZ";
        case GateOp::MeasureZ: return "MeasureZ";
    }
    return "?";
}

GateOp gate_op_from_name(const std::string& s) {
    if (s == "H") return GateOp::H;
    if (s == "Zrot") return GateOp::Zrot;
    if (s == "X") return GateOp::X;
    if (s == "CX") return GateOp::CX;
    if (s == "CZ") return GateOp::CZ;
    if (s == "MeasureZ") return GateOp::MeasureZ;
    throw ConfigError("unsupported gate op: " + s);
}

void CircuitDescription::validate() const {
    if (num_wires == 0 && gates.empty()) return; // empty-register placeholder
    if (num_wires < 1) throw ConfigError("circuit needs at least one wire");
    std::set<int> measured;
    for (const auto& g : gates) {
        if (g.a < 0 || g.a >= num_wires || (g.two_qubit() && (g.b < 0 || g.b >= num_wires)))
            throw ConfigError("gate wire index out of range");
        if (g.two_qubit() && g.a == g.b)
            throw ConfigError("two-qubit gate needs distinct wires");
        if (measured.count(g.a) || (g.two_qubit() && measured.count(g.b)))
            throw ConfigError("gate acts on a wire after its terminal MeasureZ");
        if (g.op == GateOp::MeasureZ) {
            if (measured.count(g.a)) throw ConfigError("wire measured twice");
            measured.insert(g.a);
        }
    }
}

std::vector<int> CircuitDescription::measured_wires() const {
    std::vector<int> out;
    for (const auto& g : gates)
        if (g.op == GateOp::MeasureZ) out.push_back(g.a);
    return out;
}

nlohmann::json CircuitDescription::to_json() const {
    nlohmann::json jg = nlohmann::json::array();
    for (const auto& g : gates) {
        nlohmann::json e;
        e["op"] = gate_op_name(g.op);
        if (g.two_qubit())
            e["targets"] = {g.a, g.b};
        else
            e["targets"] = {g.a};
        if (g.op == GateOp::Zrot) e["angle"] = g.angle.eighths();
        jg.push_back(e);
    }
    nlohmann::json j;
    j["wires"] = num_wires;
    j["gates"] = jg;
    if (!name.empty()) j["name"] = name;
    return j;
}

CircuitDescription CircuitDescription::from_json(const nlohmann::json& j) {
    CircuitDescription c;
    if (!j.is_object() || !j.contains("wires") || !j.contains("gates"))
        throw ConfigError("circuit JSON needs {wires, gates}");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "wires" && it.key() != "gates" && it.key() != "name")
            throw ConfigError("circuit JSON: unknown field '" + it.key() + "'");
    c.num_wires = j.at("wires").get<int>();
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    for (const auto& e : j.at("gates")) {
        CircuitGate g;
        g.op = gate_op_from_name(e.at("op").get<std::string>());
        auto t = e.at("targets");
        g.a = t.at(0).get<int>();
        if (g.two_qubit()) g.b = t.at(1).get<int>();
        if (e.contains("angle")) g.angle = Angle(e.at("angle").get<int>());
        c.gates.push_back(g);
    }
    c.validate();
    return c;
}

} // namespace ubqc
