#pragma once

// The two drive-module families and the hybrid flex/extend sequencing:
// a screw-nut DC motor module pulls the flexors, an SMA wire module pulls
// the extensors and lateral tendons once energized.

#include <string>
#include <utility>
#include <vector>

#include "handsim/chain.hpp"
#include "handsim/tendon.hpp"

namespace handsim {

struct MotorModuleSpec {
    double rated_voltage_V = 12.0;
    double rated_current_A = 0.18;
    double rated_speed_rpm = 100.0;
    double rated_torque_kg_cm = 1.5;
    double screw_pitch_mm = 0.7;
    double stroke_mm = 20.0;
    double rated_force_N = 400.0;
    double linear_speed_mm_s = 1.17;
    double mass_g = 40.0;

    // linear speed must agree with rpm * pitch / 60 within 1%
    void validate() const;

    bool operator==(const MotorModuleSpec&) const = default;
};

struct SmaModuleSpec {
    double max_displacement_mm = 18.0;
    double max_force_N = 784.0;
    double transition_temperature_C = 90.0;
    double density_g_cm3 = 6.45;
    double specific_heat_J_kgK = 837.0;
    double thermal_conductivity_W_mK = 18.0;
    // non-tabulated wire/electrical parameters, configurable:
    double wire_diameter_mm = 0.5;
    double wire_length_mm = 300.0;
    double resistance_ohm_per_m = 12.2;
    double convection_W_m2K = 0.0;  // 0 = adiabatic bound

    void validate() const;
    void validate_command(double displacement_mm, double force_N) const;

    bool operator==(const SmaModuleSpec&) const = default;
};

enum class ActuatorKind { Sma, Motor };

struct ActuatorUnit {
    std::string id;
    ActuatorKind kind = ActuatorKind::Motor;

    bool operator==(const ActuatorUnit&) const = default;
};

// Route -> unit assignment lives on TendonRoute::actuator; this holds the
// unit table. One unit may drive several routes (the lateral pairs do).
struct ActuatorAllocation {
    std::vector<ActuatorUnit> units;

    int count(ActuatorKind kind) const;
    int total() const { return static_cast<int>(units.size()); }
    const ActuatorUnit* find(const std::string& id) const;

    bool operator==(const ActuatorAllocation&) const = default;
};

enum class DrivePhase { Idle, Flexing, Holding, Extending };
enum class DriveCommand { Flex, Extend, Hold, Release };

struct FingerDriveState {
    DrivePhase phase = DrivePhase::Idle;
    double motor_position_mm = 0.0;  // along the screw stroke
    bool sma_powered = false;        // true only while extending
    double elapsed_s = 0.0;
};

const char* to_string(DrivePhase phase);
DriveCommand parse_command(const std::string& word);  // throws ParseError

// Invert route_excursion along the proportional flexion path (every crossed
// joint moves from its rest angle toward its max in lockstep). Returns the
// angle set whose excursion from rest equals reel_in_mm.
JointAngles motor_position_to_angle(const DHChain& chain, const TendonRoute& route,
                                    const JointAngles& rest_deg, double reel_in_mm);

struct StrokeReport {
    double required_mm = 0.0;
    double available_mm = 0.0;
    bool sufficient = false;
};

// required = route excursion from the zero pose to full flexion.
StrokeReport stroke_sufficiency(const DHChain& chain, const TendonRoute& route,
                                const MotorModuleSpec& motor);

// Constant-speed reel-in sampled at dt; the exact completion time
// min(stroke, required)/linear_speed is always the final sample.
std::vector<std::pair<double, JointAngles>> flexion_trajectory(
    const DHChain& chain, const TendonRoute& route, const MotorModuleSpec& motor,
    const JointAngles& rest_deg, double dt_s);

// Lumped-capacitance heating time to the transition temperature. With the
// default zero convection this is the adiabatic bound m c dT / (I^2 R).
double sma_heating_time(const SmaModuleSpec& spec, double current_A,
                        double ambient_C);

// One deterministic sequencer step. All commands are accepted in all
// phases; physically meaningless ones are no-ops.
FingerDriveState step_sequencer(const FingerDriveState& state, DriveCommand command,
                                double dt_s, const MotorModuleSpec& motor);

}  // namespace handsim
