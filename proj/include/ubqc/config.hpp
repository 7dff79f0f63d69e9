#pragma once

#include <optional>
#include <string>

#include "ubqc/analysis.hpp"

namespace ubqc {

// Command config files, schema-validated before any execution; unknown
// fields are rejected.

struct RunConfig {
    DelegationSpec spec;
    std::vector<Init> inputs;
    std::vector<Angle> input_angles;
    std::vector<Strategy> strategies;
    std::uint64_t seed = 0;
    int max_qubits = 22;

    static RunConfig from_json(const nlohmann::json& j);
};

struct BlindnessRunConfig {
    BlindnessConfig blindness;
    std::uint64_t seed = 0;
    static BlindnessRunConfig from_json(const nlohmann::json& j);
};

struct AuthTestConfig {
    DetectionConfig detection;
    std::vector<int> sweep; // n_C values; empty = single-config experiment
    std::uint64_t seed = 0;
    static AuthTestConfig from_json(const nlohmann::json& j);
};

struct SoundnessRunConfig {
    SoundnessConfig soundness;
    std::uint64_t seed = 0;
    static SoundnessRunConfig from_json(const nlohmann::json& j);
};

Init init_from_name(const std::string& name);
const char* init_name(Init i);

void require_fields(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where);

} // namespace ubqc
