#pragma once

// The whole-hand description: five chains, coupling rules, tendon routes,
// actuator allocation and drive-module parameters, plus JSON (de)serialization.

#include <string>
#include <vector>

#include "handsim/actuation.hpp"
#include "handsim/chain.hpp"
#include "handsim/tendon.hpp"

namespace handsim {

// Canonical finger order used everywhere (serialization, reports).
inline const std::vector<std::string>& finger_names() {
    static const std::vector<std::string> names = {"thumb", "index", "middle",
                                                   "ring", "little"};
    return names;
}

struct HandSpec {
    int version = 1;
    std::vector<std::string> notes;
    double spring_torque_Nmm = 5.0;  // distal-phalanx return spring (constant)

    std::vector<DHChain> fingers;  // in finger_names() order
    std::vector<CouplingRule> couplings;
    std::vector<TendonRoute> tendon_routes;
    ActuatorAllocation allocation;
    MotorModuleSpec motor_module;
    SmaModuleSpec sma_module;

    const DHChain& finger(const std::string& name) const;  // throws ValidationError
    const CouplingRule* coupling_for(const std::string& finger_name) const;
    std::vector<const TendonRoute*> routes_for(const std::string& finger_name) const;
    const TendonRoute& route(const std::string& route_name) const;

    std::size_t total_dof() const;

    // Structural validation (row ranges, finger census, coupling indices,
    // route references, kind/actuator consistency, geometry validity over
    // each crossed joint's range). Throws ValidationError.
    void validate() const;

    bool operator==(const HandSpec&) const = default;
};

// The built-in hand description. Deterministic: bit-identical across calls.
HandSpec default_hand_spec();

// JSON text <-> HandSpec. load_spec validates; both throw ParseError on
// malformed documents and ValidationError on invariant violations.
HandSpec load_spec(const std::string& json_text);
std::string save_spec(const HandSpec& spec);

HandSpec load_spec_file(const std::string& path);
void save_spec_file(const HandSpec& spec, const std::string& path);

}  // namespace handsim
