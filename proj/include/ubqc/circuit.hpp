#pragma once

#include <string>
#include <vector>

#include "ubqc/angle.hpp"
#include "ubqc/errors.hpp"

#include <json.hpp>

namespace ubqc {

enum class GateOp { H, Zrot, X, CX, CZ, MeasureZ };

struct CircuitGate {
    GateOp op;
    int a = 0;          // wire (or control for CX/CZ)
    int b = 0;          // target for CX/CZ
    Angle angle;        // Zrot only

    static CircuitGate h(int w) { return {GateOp::H, w, 0, Angle(0)}; }
    static CircuitGate x(int w) { return {GateOp::X, w, 0, Angle(0)}; }
    static CircuitGate zrot(int w, Angle t) { return {GateOp::Zrot, w, 0, t}; }
    static CircuitGate cx(int c, int t) { return {GateOp::CX, c, t, Angle(0)}; }
    static CircuitGate cz(int c, int t) { return {GateOp::CZ, c, t, Angle(0)}; }
    static CircuitGate measure_z(int w) { return {GateOp::MeasureZ, w, 0, Angle(0)}; }

    bool two_qubit() const { return op == GateOp::CX || op == GateOp::CZ; }
};

// Classical description of the delegated circuit (C_V). Wire indices start
// at 0; at most one MeasureZ per wire and it must be terminal for that wire.
struct CircuitDescription {
    int num_wires = 0;
    std::vector<CircuitGate> gates;
    std::string name;

    void validate() const;
    // Wires that end in a MeasureZ (classical outputs).
    std::vector<int> measured_wires() const;

    nlohmann::json to_json() const;
    static CircuitDescription from_json(const nlohmann::json& j);
};

const char* gate_op_name(GateOp op);
GateOp gate_op_from_name(const std::string& s);

} // namespace ubqc
