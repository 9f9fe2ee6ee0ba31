#include "handsim/hand_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "handsim/errors.hpp"

namespace handsim {

using ordered_json = nlohmann::ordered_json;

void DHRow::validate() const {
    if (name.empty()) throw ValidationError("chain row without a joint name");
    if (!(theta_min_deg <= theta_max_deg))
        throw ValidationError("joint '" + name + "': theta_min > theta_max");
    if (!(a_mm >= 0) || !std::isfinite(a_mm))
        throw ValidationError("joint '" + name + "': link length must be >= 0");
    if (!std::isfinite(d_mm))
        throw ValidationError("joint '" + name + "': link offset must be finite");
    if (!std::isfinite(alpha_prev_deg))
        throw ValidationError("joint '" + name + "': twist must be finite");
}

double DHChain::reach_mm() const {
    double sum = 0.0;
    for (const auto& r : rows) sum += r.a_mm + std::abs(r.d_mm);
    return sum;
}

std::size_t DHChain::row_index(const std::string& joint_name) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].name == joint_name) return i;
    throw ValidationError("finger '" + name + "' has no joint named '" + joint_name + "'");
}

void DHChain::validate() const {
    if (name.empty()) throw ValidationError("chain without a finger name");
    if (rows.empty()) throw ValidationError("finger '" + name + "' has no joints");
    for (const auto& r : rows) r.validate();
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i].name == rows[j].name)
                throw ValidationError("finger '" + name + "' repeats joint name '" +
                                      rows[i].name + "'");
}

void CouplingRule::validate() const {
    if (driver_joint == driven_joint)
        throw ValidationError("coupling: driver and driven joint must differ");
    if (driver_joint < 1 || driven_joint < 1)
        throw ValidationError("coupling: joint numbers are 1-based");
    if (!(ratio > 0) || !std::isfinite(ratio))
        throw ValidationError("coupling: ratio must be positive and finite");
}

JointAngles clamp_to_limits(const DHChain& chain, const JointAngles& angles_deg) {
    if (angles_deg.size() != chain.rows.size())
        throw ValidationError("clamp_to_limits: expected " +
                              std::to_string(chain.rows.size()) + " angles for finger '" +
                              chain.name + "', got " + std::to_string(angles_deg.size()));
    JointAngles out = angles_deg;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = chain.rows[i].clamp(out[i]);
    return out;
}

void validate_angles(const DHChain& chain, const JointAngles& angles_deg, double tol_deg) {
    if (angles_deg.size() != chain.rows.size())
        throw ValidationError("expected " + std::to_string(chain.rows.size()) +
                              " angles for finger '" + chain.name + "', got " +
                              std::to_string(angles_deg.size()));
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const DHRow& r = chain.rows[i];
        if (!std::isfinite(angles_deg[i]))
            throw ValidationError("joint '" + r.name + "': angle is not finite");
        if (!r.contains(angles_deg[i], tol_deg)) {
            std::ostringstream msg;
            msg << "joint '" << r.name << "' angle " << angles_deg[i]
                << " deg outside [" << r.theta_min_deg << ", " << r.theta_max_deg << "]";
            throw ValidationError(msg.str());
        }
    }
}

const DHChain& HandSpec::finger(const std::string& name) const {
    for (const auto& f : fingers)
        if (f.name == name) return f;
    throw ValidationError("unknown finger '" + name + "'");
}

const CouplingRule* HandSpec::coupling_for(const std::string& finger_name) const {
    for (const auto& c : couplings)
        if (c.finger == finger_name) return &c;
    return nullptr;
}

std::vector<const TendonRoute*> HandSpec::routes_for(const std::string& finger_name) const {
    std::vector<const TendonRoute*> out;
    for (const auto& r : tendon_routes)
        if (r.finger == finger_name) out.push_back(&r);
    return out;
}

const TendonRoute& HandSpec::route(const std::string& route_name) const {
    for (const auto& r : tendon_routes)
        if (r.name == route_name) return r;
    throw ValidationError("unknown tendon route '" + route_name + "'");
}

std::size_t HandSpec::total_dof() const {
    std::size_t n = 0;
    for (const auto& f : fingers) n += f.dof();
    return n;
}

void HandSpec::validate() const {
    if (version < 1) throw ValidationError("meta.version must be >= 1");
    if (fingers.size() != finger_names().size())
        throw ValidationError("expected 5 fingers, got " + std::to_string(fingers.size()));
    for (std::size_t i = 0; i < fingers.size(); ++i) {
        if (fingers[i].name != finger_names()[i])
            throw ValidationError("expected 5 fingers in order thumb/index/middle/ring/little; slot " +
                                  std::to_string(i) + " holds '" + fingers[i].name + "'");
        fingers[i].validate();
    }
    motor_module.validate();
    sma_module.validate();
    if (!(spring_torque_Nmm >= 0))
        throw ValidationError("spring torque must be non-negative");

    for (const auto& c : couplings) {
        c.validate();
        const DHChain& f = finger(c.finger);
        if (c.driver_joint > static_cast<int>(f.dof()) ||
            c.driven_joint > static_cast<int>(f.dof()))
            throw ValidationError("coupling for '" + c.finger + "' references a joint outside the chain");
    }

    for (std::size_t i = 0; i < tendon_routes.size(); ++i)
        for (std::size_t j = i + 1; j < tendon_routes.size(); ++j)
            if (tendon_routes[i].name == tendon_routes[j].name)
                throw ValidationError("duplicate tendon route name '" + tendon_routes[i].name + "'");

    for (const auto& r : tendon_routes) {
        const DHChain& f = finger(r.finger);
        if (r.crossings.empty())
            throw ValidationError("route '" + r.name + "' has no crossings");
        for (const auto& c : r.crossings) {
            if (c.joint < 1 || c.joint > static_cast<int>(f.dof()))
                throw ValidationError("route '" + r.name + "' crosses joint " +
                                      std::to_string(c.joint) + " outside finger '" + r.finger + "'");
            if (c.sign != 1 && c.sign != -1)
                throw ValidationError("route '" + r.name + "': crossing sign must be +1 or -1");
            if (!(c.efficiency > 0) || c.efficiency > 1)
                throw ValidationError("route '" + r.name + "': efficiency must be in (0, 1]");
            const DHRow& row = f.rows[static_cast<std::size_t>(c.joint - 1)];
            try {
                c.geometry.validate_over_range(row.theta_min_deg, row.theta_max_deg);
            } catch (const ValidationError& e) {
                throw ValidationError("route '" + r.name + "': " + e.what());
            }
        }
        const ActuatorUnit* unit = allocation.find(r.actuator);
        if (!unit)
            throw ValidationError("route '" + r.name + "' references unknown actuator '" +
                                  r.actuator + "'");
        const bool needs_motor = r.kind == TendonKind::Flexor;
        if (needs_motor && unit->kind != ActuatorKind::Motor)
            throw ValidationError("flexor route '" + r.name + "' must map to a motor unit");
        if (!needs_motor && unit->kind != ActuatorKind::Sma)
            throw ValidationError("route '" + r.name + "' (extensor/lateral) must map to an SMA unit");
    }

    for (std::size_t i = 0; i < allocation.units.size(); ++i) {
        if (allocation.units[i].id.empty())
            throw ValidationError("actuator unit with empty id");
        for (std::size_t j = i + 1; j < allocation.units.size(); ++j)
            if (allocation.units[i].id == allocation.units[j].id)
                throw ValidationError("duplicate actuator id '" + allocation.units[i].id + "'");
    }

    // Route census per non-thumb finger: 3 flexor + 2 extensor + 2 lateral,
    // with the lateral pair antagonistic on the same joint.
    for (const auto& fname : finger_names()) {
        if (fname == "thumb") continue;
        int flexor = 0, extensor = 0;
        std::vector<const TendonRoute*> lateral;
        for (const TendonRoute* r : routes_for(fname)) {
            if (r->kind == TendonKind::Flexor) ++flexor;
            else if (r->kind == TendonKind::Extensor) ++extensor;
            else lateral.push_back(r);
        }
        if (flexor != 3 || extensor != 2 || lateral.size() != 2)
            throw ValidationError("finger '" + fname +
                                  "' must carry 3 flexor, 2 extensor and 2 lateral routes");
        if (lateral[0]->crossings.size() != 1 || lateral[1]->crossings.size() != 1 ||
            lateral[0]->crossings[0].joint != lateral[1]->crossings[0].joint ||
            lateral[0]->crossings[0].sign + lateral[1]->crossings[0].sign != 0)
            throw ValidationError("finger '" + fname +
                                  "': lateral routes must form an antagonistic pair on one joint");
    }
}

namespace {

DHRow make_row(std::string name, double alpha, double a, double lo, double hi) {
    DHRow r;
    r.name = std::move(name);
    r.alpha_prev_deg = alpha;
    r.a_mm = a;
    r.d_mm = 0.0;
    r.theta_min_deg = lo;
    r.theta_max_deg = hi;
    return r;
}

DHChain universal_chain(const std::string& name, double proximal_mm) {
    DHChain c;
    c.name = name;
    c.rows = {make_row("mcp_lateral", 0.0, 0.0, -15.0, 15.0),
              make_row("mcp_flexion", 90.0, proximal_mm, 0.0, 90.0),
              make_row("pip", 0.0, 29.0, 0.0, 110.0),
              make_row("dip", 0.0, 23.5, 0.0, 90.0)};
    return c;
}

DHChain thumb_chain() {
    DHChain c;
    c.name = "thumb";
    c.rows = {make_row("cmc_abduction", 0.0, 0.0, 0.0, 53.0),
              make_row("cmc_rotation", 0.0, 0.0, 0.0, 17.0),
              make_row("cmc_flexion", 90.0, 40.0, 0.0, 107.0),
              make_row("mcp", 0.0, 32.0, 0.0, 90.0),
              make_row("ip", 0.0, 25.0, 0.0, 90.0)};
    return c;
}

TendonRoute make_route(std::string name, TendonKind kind, std::string finger,
                       int joint, int sign, const JointTendonGeometry& geom,
                       std::string actuator) {
    TendonRoute r;
    r.name = std::move(name);
    r.kind = kind;
    r.finger = std::move(finger);
    r.crossings = {TendonCrossing{joint, geom, sign, 1.0}};
    r.actuator = std::move(actuator);
    return r;
}

}  // namespace

HandSpec default_hand_spec() {
    HandSpec spec;
    spec.version = 1;
    spec.notes = {
        "Joint ranges follow the published hand; thumb link lengths (40, 32, 25 mm), the "
        "little-finger proximal length (38 mm), the thumb cmc_rotation range and the thumb "
        "mcp/ip ranges are editable defaults, not measured values.",
        "Tendon geometry is the common template calibrated so the pip flexor excursion over "
        "0..110 deg equals 16.86 mm; all crossings share it.",
        "Each flexor crosses only the joint at its insertion level; edit crossings for "
        "shared multi-joint routing.",
        "The actuator table is a reconstruction consistent with the 17 SMA / 15 motor totals; "
        "edit actuators.units and route assignments to match hardware.",
        "Per-finger base frames default to identity; palm splay is not modeled."};
    spec.spring_torque_Nmm = 5.0;

    spec.fingers = {thumb_chain(), universal_chain("index", 47.0),
                    universal_chain("middle", 47.0), universal_chain("ring", 47.0),
                    universal_chain("little", 38.0)};

    for (const auto& f : {"index", "middle", "ring", "little"})
        spec.couplings.push_back(CouplingRule{f, 3, 4, 2.0 / 3.0});

    const JointTendonGeometry geom =
        calibrate_geometry(16.86, 0.0, 110.0, JointTendonGeometry{});

    for (const auto& f : {std::string("index"), std::string("middle"),
                          std::string("ring"), std::string("little")}) {
        spec.tendon_routes.push_back(make_route(f + "_flexor_mcp", TendonKind::Flexor, f, 2, 1, geom, "m_" + f + "_mcp"));
        spec.tendon_routes.push_back(make_route(f + "_flexor_pip", TendonKind::Flexor, f, 3, 1, geom, "m_" + f + "_pip"));
        spec.tendon_routes.push_back(make_route(f + "_flexor_dip", TendonKind::Flexor, f, 4, 1, geom, "m_" + f + "_dip"));
        spec.tendon_routes.push_back(make_route(f + "_extensor_mcp", TendonKind::Extensor, f, 2, -1, geom, "s_" + f + "_extensor_mcp"));
        spec.tendon_routes.push_back(make_route(f + "_extensor_pip", TendonKind::Extensor, f, 3, -1, geom, "s_" + f + "_extensor_pip"));
        spec.tendon_routes.push_back(make_route(f + "_lateral_radial", TendonKind::Lateral, f, 1, 1, geom, "s_" + f + "_lateral"));
        spec.tendon_routes.push_back(make_route(f + "_lateral_ulnar", TendonKind::Lateral, f, 1, -1, geom, "s_" + f + "_lateral"));
    }
    spec.tendon_routes.push_back(make_route("thumb_flexor_cmc", TendonKind::Flexor, "thumb", 3, 1, geom, "m_thumb_cmc"));
    spec.tendon_routes.push_back(make_route("thumb_flexor_mcp", TendonKind::Flexor, "thumb", 4, 1, geom, "m_thumb_mcp"));
    spec.tendon_routes.push_back(make_route("thumb_flexor_ip", TendonKind::Flexor, "thumb", 5, 1, geom, "m_thumb_ip"));
    spec.tendon_routes.push_back(make_route("thumb_extensor_cmc", TendonKind::Extensor, "thumb", 3, -1, geom, "s_thumb_extensor_cmc"));
    spec.tendon_routes.push_back(make_route("thumb_extensor_mcp", TendonKind::Extensor, "thumb", 4, -1, geom, "s_thumb_extensor_mcp"));
    spec.tendon_routes.push_back(make_route("thumb_extensor_ip", TendonKind::Extensor, "thumb", 5, -1, geom, "s_thumb_extensor_ip"));
    spec.tendon_routes.push_back(make_route("thumb_lateral_radial", TendonKind::Lateral, "thumb", 1, 1, geom, "s_thumb_lateral_radial"));
    spec.tendon_routes.push_back(make_route("thumb_lateral_ulnar", TendonKind::Lateral, "thumb", 1, -1, geom, "s_thumb_lateral_ulnar"));

    for (const auto& f : {"thumb", "index", "middle", "ring", "little"}) {
        const std::string fs(f);
        if (fs == "thumb") {
            for (const auto* m : {"m_thumb_cmc", "m_thumb_mcp", "m_thumb_ip"})
                spec.allocation.units.push_back({m, ActuatorKind::Motor});
            for (const auto* s : {"s_thumb_extensor_cmc", "s_thumb_extensor_mcp",
                                  "s_thumb_extensor_ip", "s_thumb_lateral_radial",
                                  "s_thumb_lateral_ulnar"})
                spec.allocation.units.push_back({s, ActuatorKind::Sma});
        } else {
            for (const auto* j : {"mcp", "pip", "dip"})
                spec.allocation.units.push_back({"m_" + fs + "_" + j, ActuatorKind::Motor});
            spec.allocation.units.push_back({"s_" + fs + "_extensor_mcp", ActuatorKind::Sma});
            spec.allocation.units.push_back({"s_" + fs + "_extensor_pip", ActuatorKind::Sma});
            spec.allocation.units.push_back({"s_" + fs + "_lateral", ActuatorKind::Sma});
        }
    }

    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

const char* kind_name(TendonKind k) {
    switch (k) {
        case TendonKind::Flexor: return "flexor";
        case TendonKind::Extensor: return "extensor";
        case TendonKind::Lateral: return "lateral";
    }
    return "?";
}

TendonKind parse_kind(const std::string& s) {
    if (s == "flexor") return TendonKind::Flexor;
    if (s == "extensor") return TendonKind::Extensor;
    if (s == "lateral") return TendonKind::Lateral;
    throw ValidationError("unknown tendon kind '" + s + "'");
}

ordered_json geometry_to_json(const JointTendonGeometry& g) {
    return ordered_json{{"L1_mm", g.L1_mm}, {"L2_mm", g.L2_mm}, {"d1_mm", g.d1_mm},
                        {"d2_mm", g.d2_mm}, {"R1_mm", g.R1_mm}, {"R2_mm", g.R2_mm}};
}

JointTendonGeometry geometry_from_json(const ordered_json& j) {
    JointTendonGeometry g;
    g.L1_mm = j.at("L1_mm").get<double>();
    g.L2_mm = j.at("L2_mm").get<double>();
    g.d1_mm = j.at("d1_mm").get<double>();
    g.d2_mm = j.at("d2_mm").get<double>();
    g.R1_mm = j.at("R1_mm").get<double>();
    g.R2_mm = j.at("R2_mm").get<double>();
    return g;
}

}  // namespace

std::string save_spec(const HandSpec& spec) {
    ordered_json j;
    j["meta"] = ordered_json{{"version", spec.version},
                             {"notes", spec.notes},
                             {"spring_torque_Nmm", spec.spring_torque_Nmm}};
    ordered_json fingers = ordered_json::object();
    for (const auto& f : spec.fingers) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : f.rows)
            rows.push_back(ordered_json{{"name", r.name},
                                        {"alpha_prev_deg", r.alpha_prev_deg},
                                        {"a_mm", r.a_mm},
                                        {"d_mm", r.d_mm},
                                        {"theta_min_deg", r.theta_min_deg},
                                        {"theta_max_deg", r.theta_max_deg}});
        fingers[f.name] = ordered_json{{"rows", rows},
                                       {"base_xyz_mm", f.base_xyz_mm},
                                       {"base_rpy_deg", f.base_rpy_deg}};
    }
    j["fingers"] = fingers;

    ordered_json couplings = ordered_json::array();
    for (const auto& c : spec.couplings)
        couplings.push_back(ordered_json{{"finger", c.finger},
                                         {"driver_joint", c.driver_joint},
                                         {"driven_joint", c.driven_joint},
                                         {"ratio", c.ratio}});
    j["couplings"] = couplings;

    ordered_json routes = ordered_json::array();
    for (const auto& r : spec.tendon_routes) {
        ordered_json crossings = ordered_json::array();
        for (const auto& c : r.crossings)
            crossings.push_back(ordered_json{{"joint", c.joint},
                                             {"sign", c.sign},
                                             {"efficiency", c.efficiency},
                                             {"geometry", geometry_to_json(c.geometry)}});
        routes.push_back(ordered_json{{"name", r.name},
                                      {"kind", kind_name(r.kind)},
                                      {"finger", r.finger},
                                      {"crossings", crossings},
                                      {"actuator", r.actuator},
                                      {"material", r.material}});
    }
    j["tendon_routes"] = routes;

    ordered_json units = ordered_json::array();
    for (const auto& u : spec.allocation.units)
        units.push_back(ordered_json{
            {"id", u.id}, {"kind", u.kind == ActuatorKind::Motor ? "motor" : "sma"}});
    const MotorModuleSpec& m = spec.motor_module;
    const SmaModuleSpec& s = spec.sma_module;
    j["actuators"] = ordered_json{
        {"motor_module",
         ordered_json{{"rated_voltage_V", m.rated_voltage_V},
                      {"rated_current_A", m.rated_current_A},
                      {"rated_speed_rpm", m.rated_speed_rpm},
                      {"rated_torque_kg_cm", m.rated_torque_kg_cm},
                      {"screw_pitch_mm", m.screw_pitch_mm},
                      {"stroke_mm", m.stroke_mm},
                      {"rated_force_N", m.rated_force_N},
                      {"linear_speed_mm_s", m.linear_speed_mm_s},
                      {"mass_g", m.mass_g}}},
        {"sma_module",
         ordered_json{{"max_displacement_mm", s.max_displacement_mm},
                      {"max_force_N", s.max_force_N},
                      {"transition_temperature_C", s.transition_temperature_C},
                      {"density_g_cm3", s.density_g_cm3},
                      {"specific_heat_J_kgK", s.specific_heat_J_kgK},
                      {"thermal_conductivity_W_mK", s.thermal_conductivity_W_mK},
                      {"wire_diameter_mm", s.wire_diameter_mm},
                      {"wire_length_mm", s.wire_length_mm},
                      {"resistance_ohm_per_m", s.resistance_ohm_per_m},
                      {"convection_W_m2K", s.convection_W_m2K}}},
        {"units", units}};
    return j.dump(2) + "\n";
}

HandSpec load_spec(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec file is not valid JSON: ") + e.what());
    }

    HandSpec spec;
    try {
        const auto& meta = j.at("meta");
        spec.version = meta.at("version").get<int>();
        if (meta.contains("notes")) spec.notes = meta.at("notes").get<std::vector<std::string>>();
        if (meta.contains("spring_torque_Nmm"))
            spec.spring_torque_Nmm = meta.at("spring_torque_Nmm").get<double>();

        for (const auto& [fname, fj] : j.at("fingers").items()) {
            DHChain c;
            c.name = fname;
            for (const auto& rj : fj.at("rows")) {
                DHRow r;
                r.name = rj.at("name").get<std::string>();
                r.alpha_prev_deg = rj.at("alpha_prev_deg").get<double>();
                r.a_mm = rj.at("a_mm").get<double>();
                r.d_mm = rj.at("d_mm").get<double>();
                r.theta_min_deg = rj.at("theta_min_deg").get<double>();
                r.theta_max_deg = rj.at("theta_max_deg").get<double>();
                c.rows.push_back(r);
            }
            if (fj.contains("base_xyz_mm"))
                c.base_xyz_mm = fj.at("base_xyz_mm").get<std::array<double, 3>>();
            if (fj.contains("base_rpy_deg"))
                c.base_rpy_deg = fj.at("base_rpy_deg").get<std::array<double, 3>>();
            spec.fingers.push_back(std::move(c));
        }
        // canonical order regardless of document order
        std::stable_sort(spec.fingers.begin(), spec.fingers.end(),
                         [](const DHChain& a, const DHChain& b) {
                             auto rank = [](const std::string& n) {
                                 const auto& names = finger_names();
                                 for (std::size_t i = 0; i < names.size(); ++i)
                                     if (names[i] == n) return i;
                                 return names.size();
                             };
                             return rank(a.name) < rank(b.name);
                         });

        for (const auto& cj : j.at("couplings")) {
            CouplingRule c;
            c.finger = cj.at("finger").get<std::string>();
            c.driver_joint = cj.at("driver_joint").get<int>();
            c.driven_joint = cj.at("driven_joint").get<int>();
            c.ratio = cj.at("ratio").get<double>();
            spec.couplings.push_back(c);
        }

        for (const auto& rj : j.at("tendon_routes")) {
            TendonRoute r;
            r.name = rj.at("name").get<std::string>();
            r.kind = parse_kind(rj.at("kind").get<std::string>());
            r.finger = rj.at("finger").get<std::string>();
            for (const auto& cj : rj.at("crossings")) {
                TendonCrossing c;
                c.joint = cj.at("joint").get<int>();
                c.sign = cj.at("sign").get<int>();
                if (cj.contains("efficiency")) c.efficiency = cj.at("efficiency").get<double>();
                c.geometry = geometry_from_json(cj.at("geometry"));
                r.crossings.push_back(c);
            }
            r.actuator = rj.at("actuator").get<std::string>();
            if (rj.contains("material")) r.material = rj.at("material").get<std::string>();
            spec.tendon_routes.push_back(std::move(r));
        }

        const auto& act = j.at("actuators");
        const auto& mm = act.at("motor_module");
        MotorModuleSpec& m = spec.motor_module;
        m.rated_voltage_V = mm.at("rated_voltage_V").get<double>();
        m.rated_current_A = mm.at("rated_current_A").get<double>();
        m.rated_speed_rpm = mm.at("rated_speed_rpm").get<double>();
        m.rated_torque_kg_cm = mm.at("rated_torque_kg_cm").get<double>();
        m.screw_pitch_mm = mm.at("screw_pitch_mm").get<double>();
        m.stroke_mm = mm.at("stroke_mm").get<double>();
        m.rated_force_N = mm.at("rated_force_N").get<double>();
        m.linear_speed_mm_s = mm.at("linear_speed_mm_s").get<double>();
        m.mass_g = mm.at("mass_g").get<double>();
        const auto& sm = act.at("sma_module");
        SmaModuleSpec& s = spec.sma_module;
        s.max_displacement_mm = sm.at("max_displacement_mm").get<double>();
        s.max_force_N = sm.at("max_force_N").get<double>();
        s.transition_temperature_C = sm.at("transition_temperature_C").get<double>();
        s.density_g_cm3 = sm.at("density_g_cm3").get<double>();
        s.specific_heat_J_kgK = sm.at("specific_heat_J_kgK").get<double>();
        s.thermal_conductivity_W_mK = sm.at("thermal_conductivity_W_mK").get<double>();
        s.wire_diameter_mm = sm.at("wire_diameter_mm").get<double>();
        s.wire_length_mm = sm.at("wire_length_mm").get<double>();
        s.resistance_ohm_per_m = sm.at("resistance_ohm_per_m").get<double>();
        s.convection_W_m2K = sm.at("convection_W_m2K").get<double>();
        for (const auto& uj : act.at("units")) {
            ActuatorUnit u;
            u.id = uj.at("id").get<std::string>();
            const std::string kind = uj.at("kind").get<std::string>();
            if (kind == "motor") u.kind = ActuatorKind::Motor;
            else if (kind == "sma") u.kind = ActuatorKind::Sma;
            else throw ValidationError("unknown actuator kind '" + kind + "'");
            spec.allocation.units.push_back(std::move(u));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec file structure error: ") + e.what());
    }

    spec.validate();
    return spec;
}

HandSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

void save_spec_file(const HandSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write spec file '" + path + "'");
    out << save_spec(spec);
}

}  // namespace handsim
