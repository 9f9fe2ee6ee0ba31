#include "handsim/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "handsim/errors.hpp"

namespace handsim {

void MotorModuleSpec::validate() const {
    if (!(stroke_mm > 0) || !(linear_speed_mm_s > 0) || !(screw_pitch_mm > 0) ||
        !(rated_speed_rpm > 0) || !(rated_force_N > 0))
        throw ValidationError("motor module: stroke, speeds, pitch and force must be positive");
    const double derived = rated_speed_rpm * screw_pitch_mm / 60.0;
    if (std::abs(linear_speed_mm_s - derived) > 0.01 * derived)
        throw ValidationError("motor module: linear speed disagrees with rpm * pitch / 60 by more than 1%");
}

void SmaModuleSpec::validate() const {
    if (!(max_displacement_mm > 0) || !(max_force_N > 0))
        throw ValidationError("sma module: displacement and force limits must be positive");
    if (!(density_g_cm3 > 0) || !(specific_heat_J_kgK > 0) || !(wire_diameter_mm > 0) ||
        !(wire_length_mm > 0) || !(resistance_ohm_per_m > 0) || convection_W_m2K < 0)
        throw ValidationError("sma module: material and wire parameters must be positive");
}

void SmaModuleSpec::validate_command(double displacement_mm, double force_N) const {
    if (displacement_mm < 0 || displacement_mm > max_displacement_mm)
        throw ValidationError("sma command: displacement outside [0, " +
                              std::to_string(max_displacement_mm) + "] mm");
    if (force_N < 0 || force_N > max_force_N)
        throw ValidationError("sma command: force outside [0, " +
                              std::to_string(max_force_N) + "] N");
}

int ActuatorAllocation::count(ActuatorKind kind) const {
    int n = 0;
    for (const auto& u : units)
        if (u.kind == kind) ++n;
    return n;
}

const ActuatorUnit* ActuatorAllocation::find(const std::string& id) const {
    for (const auto& u : units)
        if (u.id == id) return &u;
    return nullptr;
}

const char* to_string(DrivePhase phase) {
    switch (phase) {
        case DrivePhase::Idle: return "IDLE";
        case DrivePhase::Flexing: return "FLEXING";
        case DrivePhase::Holding: return "HOLDING";
        case DrivePhase::Extending: return "EXTENDING";
    }
    return "?";
}

DriveCommand parse_command(const std::string& word) {
    if (word == "FLEX") return DriveCommand::Flex;
    if (word == "EXTEND") return DriveCommand::Extend;
    if (word == "HOLD") return DriveCommand::Hold;
    if (word == "RELEASE") return DriveCommand::Release;
    throw ParseError("unknown drive command '" + word + "'");
}

namespace {

// Proportional flexion path: every crossed joint interpolates from its rest
// angle toward its max; everything else stays put.
JointAngles path_point(const DHChain& chain, const TendonRoute& route,
                       const JointAngles& rest_deg, double s) {
    JointAngles a = rest_deg;
    for (const TendonCrossing& c : route.crossings) {
        const std::size_t j = static_cast<std::size_t>(c.joint - 1);
        a[j] = rest_deg[j] + s * (chain.rows[j].theta_max_deg - rest_deg[j]);
    }
    return a;
}

}  // namespace

JointAngles motor_position_to_angle(const DHChain& chain, const TendonRoute& route,
                                    const JointAngles& rest_deg, double reel_in_mm) {
    if (route.kind != TendonKind::Flexor)
        throw ValidationError("motor_position_to_angle: route '" + route.name +
                              "' is not a flexor");
    if (rest_deg.size() != chain.rows.size())
        throw ValidationError("motor_position_to_angle: angle count does not match chain");
    if (reel_in_mm < 0)
        throw ValidationError("motor_position_to_angle: reel-in must be non-negative");
    validate_angles(chain, rest_deg);

    const double total = route_excursion(chain, route, rest_deg,
                                         path_point(chain, route, rest_deg, 1.0));
    if (reel_in_mm > total + 1e-9)
        throw ValidationError("motor_position_to_angle: reel-in " +
                              std::to_string(reel_in_mm) + " mm exceeds available excursion " +
                              std::to_string(total) + " mm");
    if (reel_in_mm <= 0) return rest_deg;
    if (reel_in_mm >= total) return path_point(chain, route, rest_deg, 1.0);

    // Excursion grows monotonically along the path; plain bisection on s.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double e = route_excursion(chain, route, rest_deg,
                                         path_point(chain, route, rest_deg, mid));
        if (std::abs(e - reel_in_mm) < 1e-9) { lo = hi = mid; break; }
        if (e < reel_in_mm) lo = mid; else hi = mid;
    }
    return path_point(chain, route, rest_deg, 0.5 * (lo + hi));
}

StrokeReport stroke_sufficiency(const DHChain& chain, const TendonRoute& route,
                                const MotorModuleSpec& motor) {
    motor.validate();
    JointAngles zero(chain.rows.size(), 0.0);
    for (std::size_t i = 0; i < chain.rows.size(); ++i)
        zero[i] = chain.rows[i].clamp(0.0);
    StrokeReport r;
    r.required_mm = route_excursion(chain, route, zero, path_point(chain, route, zero, 1.0));
    r.available_mm = motor.stroke_mm;
    r.sufficient = r.required_mm <= r.available_mm;
    return r;
}

std::vector<std::pair<double, JointAngles>> flexion_trajectory(
    const DHChain& chain, const TendonRoute& route, const MotorModuleSpec& motor,
    const JointAngles& rest_deg, double dt_s) {
    if (!(dt_s > 0)) throw ValidationError("flexion_trajectory: dt must be positive");
    motor.validate();
    const StrokeReport stroke = stroke_sufficiency(chain, route, motor);
    const double travel = std::min(motor.stroke_mm, stroke.required_mm);
    const double total_time = travel / motor.linear_speed_mm_s;

    std::vector<std::pair<double, JointAngles>> out;
    for (double t = 0.0; t < total_time; t += dt_s) {
        out.emplace_back(t, motor_position_to_angle(chain, route, rest_deg,
                                                    motor.linear_speed_mm_s * t));
    }
    out.emplace_back(total_time,
                     motor_position_to_angle(chain, route, rest_deg, travel));
    return out;
}

double sma_heating_time(const SmaModuleSpec& spec, double current_A, double ambient_C) {
    spec.validate();
    if (!(current_A > 0)) throw ValidationError("sma_heating_time: current must be positive");
    const double dT = spec.transition_temperature_C - ambient_C;
    if (dT <= 0) return 0.0;  // already at or above transition

    const double radius_m = spec.wire_diameter_mm * 1e-3 / 2.0;
    const double length_m = spec.wire_length_mm * 1e-3;
    const double volume_m3 = kPi * radius_m * radius_m * length_m;
    const double mass_kg = spec.density_g_cm3 * 1000.0 * volume_m3;  // g/cm^3 = 1000 kg/m^3
    const double mc = mass_kg * spec.specific_heat_J_kgK;
    const double R = spec.resistance_ohm_per_m * length_m;
    const double power_W = current_A * current_A * R;

    if (spec.convection_W_m2K <= 0.0) return mc * dT / power_W;

    // Lumped model with convective loss over the lateral surface:
    // T(t) = ambient + (P/hA)(1 - exp(-hA t / mc))
    const double hA = spec.convection_W_m2K * 2.0 * kPi * radius_m * length_m;
    const double steady_dT = power_W / hA;
    if (steady_dT <= dT)
        throw ValidationError("sma_heating_time: power insufficient to reach the transition temperature");
    return -(mc / hA) * std::log(1.0 - dT / steady_dT);
}

FingerDriveState step_sequencer(const FingerDriveState& state, DriveCommand command,
                                double dt_s, const MotorModuleSpec& motor) {
    if (!(dt_s > 0)) throw ValidationError("step_sequencer: dt must be positive");
    motor.validate();

    FingerDriveState next = state;
    next.elapsed_s = state.elapsed_s + dt_s;
    const double step = motor.linear_speed_mm_s * dt_s;

    switch (command) {
        case DriveCommand::Flex:
            next.sma_powered = false;
            next.motor_position_mm = std::min(state.motor_position_mm + step, motor.stroke_mm);
            next.phase = (next.motor_position_mm >= motor.stroke_mm) ? DrivePhase::Holding
                                                                     : DrivePhase::Flexing;
            break;
        case DriveCommand::Extend:
            next.motor_position_mm = std::max(state.motor_position_mm - step, 0.0);
            if (next.motor_position_mm <= 0.0) {
                next.sma_powered = false;  // switched off to dissipate heat
                next.phase = DrivePhase::Idle;
            } else {
                next.sma_powered = true;
                next.phase = DrivePhase::Extending;
            }
            break;
        case DriveCommand::Hold:
            next.sma_powered = false;
            next.phase = DrivePhase::Holding;  // screw is self-locking
            break;
        case DriveCommand::Release:
            next.sma_powered = false;
            next.phase = DrivePhase::Idle;  // de-energized, position self-locked
            break;
    }
    return next;
}

}  // namespace handsim
