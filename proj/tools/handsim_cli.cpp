// handsim command-line interface: forward/inverse kinematics, tendon
// profiles, drive-sequence simulation and model checks, all emitting
// deterministic text so runs can be diffed and golden-tested.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "handsim/actuation.hpp"
#include "handsim/errors.hpp"
#include "handsim/hand_model.hpp"
#include "handsim/kinematics.hpp"
#include "handsim/posture.hpp"
#include "handsim/tendon.hpp"

namespace {

using namespace handsim;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    // avoid the "-0.000000" vs "0.000000" coin flip in golden outputs
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream& stream() { return file ? *file : std::cout; }
    void open(const std::string& path) {
        if (path.empty() || path == "-") return;
        file = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file) throw ParseError("cannot open output file '" + path + "'");
    }
};

std::string joined(const std::vector<double>& values, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += fmt(values[i]);
    }
    return out;
}

// Composite flexion route: the concatenation of a finger's flexor
// crossings, so one motor position maps to a whole-finger flexion pose.
TendonRoute composite_flexor(const HandSpec& spec, const std::string& finger) {
    TendonRoute route;
    route.name = finger + "_flexors_combined";
    route.kind = TendonKind::Flexor;
    route.finger = finger;
    for (const TendonRoute* r : spec.routes_for(finger))
        if (r->kind == TendonKind::Flexor)
            for (const auto& c : r->crossings) route.crossings.push_back(c);
    if (route.crossings.empty())
        throw ValidationError("finger '" + finger + "' has no flexor routes");
    std::sort(route.crossings.begin(), route.crossings.end(),
              [](const TendonCrossing& a, const TendonCrossing& b) { return a.joint < b.joint; });
    return route;
}

int cmd_fk(const HandSpec& spec, Output& out, const std::string& finger,
           const std::vector<double>& deg, const std::string& format) {
    const DHChain& chain = spec.finger(finger);
    const Pose pose = forward_kinematics(chain, deg);
    const std::string sep = format == "csv" ? "," : " ";
    out.stream() << joined({pose.p[0], pose.p[1], pose.p[2]}, sep) << "\n";
    out.stream() << "rotation:\n";
    for (int r = 0; r < 3; ++r)
        out.stream() << joined({pose.R[r][0], pose.R[r][1], pose.R[r][2]}, sep) << "\n";
    return 0;
}

int cmd_ik(const HandSpec& spec, Output& out, const std::string& finger,
           const std::vector<double>& mm, const std::string& format) {
    const JointAngles a = finger_ik(spec, finger, {mm[0], mm[1], mm[2]});
    out.stream() << joined(a, format == "csv" ? "," : " ") << "\n";
    return 0;
}

int cmd_tendon_profile(const HandSpec& spec, Output& out, const std::string& finger,
                       const std::string& joint, double step) {
    if (!(step > 0)) throw ValidationError("tendon-profile: step must be positive");
    const DHChain& chain = spec.finger(finger);
    const std::size_t row = chain.row_index(joint);  // throws on bad name

    const JointTendonGeometry* geom = nullptr;
    for (const TendonRoute* r : spec.routes_for(finger)) {
        for (const auto& c : r->crossings)
            if (c.joint == static_cast<int>(row + 1) &&
                (geom == nullptr || r->kind == TendonKind::Flexor) && c.sign > 0)
                geom = &c.geometry;
        if (geom && r->kind == TendonKind::Flexor) break;
    }
    if (!geom) {
        for (const TendonRoute* r : spec.routes_for(finger))
            for (const auto& c : r->crossings)
                if (c.joint == static_cast<int>(row + 1)) geom = &c.geometry;
    }
    if (!geom)
        throw ValidationError("no tendon route crosses joint '" + joint + "' of finger '" +
                              finger + "'");

    out.stream() << "theta_deg,l_mm,h_mm\n";
    const DHRow& r = chain.rows[row];
    double theta = r.theta_min_deg;
    while (theta < r.theta_max_deg - 1e-12) {
        out.stream() << fmt(theta) << "," << fmt(tendon_length(*geom, theta)) << ","
                     << fmt(moment_arm(*geom, theta)) << "\n";
        theta += step;
    }
    out.stream() << fmt(r.theta_max_deg) << "," << fmt(tendon_length(*geom, r.theta_max_deg))
                 << "," << fmt(moment_arm(*geom, r.theta_max_deg)) << "\n";
    return 0;
}

int cmd_workspace(const HandSpec& spec, Output& out, const std::string& finger, int steps) {
    const DHChain& chain = spec.finger(finger);
    const CouplingRule* c = spec.coupling_for(finger);
    if (!c)
        throw ValidationError("workspace: finger '" + finger + "' has no coupling rule");
    out.stream() << "x_mm,y_mm,z_mm\n";
    for (const FingertipPoint& p : sample_workspace(chain, *c, steps))
        out.stream() << fmt(p.x) << "," << fmt(p.y) << "," << fmt(p.z) << "\n";
    return 0;
}

struct ScriptEvent {
    double t = 0;
    DriveCommand command = DriveCommand::Hold;
};

std::vector<ScriptEvent> parse_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open command script '" + path + "'");
    std::vector<ScriptEvent> events;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t;
        std::string word;
        if (!(ls >> t)) {
            std::string probe;
            if (std::istringstream(line) >> probe)  // non-blank garbage
                throw ParseError("script line " + std::to_string(lineno) +
                                 ": expected '<time> <FLEX|EXTEND|HOLD|RELEASE>'");
            continue;  // blank or comment-only line
        }
        if (!(ls >> word) || t < 0)
            throw ParseError("script line " + std::to_string(lineno) +
                             ": expected '<time> <FLEX|EXTEND|HOLD|RELEASE>'");
        std::string extra;
        if (ls >> extra)
            throw ParseError("script line " + std::to_string(lineno) + ": trailing text '" +
                             extra + "'");
        try {
            events.push_back({t, parse_command(word)});
        } catch (const ParseError& e) {
            throw ParseError("script line " + std::to_string(lineno) + ": " + e.what());
        }
        if (events.size() > 1 && events[events.size() - 2].t > t)
            throw ParseError("script line " + std::to_string(lineno) +
                             ": command times must be non-decreasing");
    }
    if (events.empty()) throw ParseError("command script '" + path + "' has no commands");
    return events;
}

int cmd_simulate(const HandSpec& spec, Output& out, const std::string& finger,
                 const std::string& script_path, double dt) {
    if (!(dt > 0)) throw ValidationError("simulate: dt must be positive");
    const std::vector<ScriptEvent> events = parse_script(script_path);
    const DHChain& chain = spec.finger(finger);
    const TendonRoute route = composite_flexor(spec, finger);
    const MotorModuleSpec& motor = spec.motor_module;
    const JointAngles rest = clamp_to_limits(chain, JointAngles(chain.rows.size(), 0.0));

    out.stream() << "t_s";
    for (std::size_t i = 0; i < chain.rows.size(); ++i)
        out.stream() << ",theta" << (i + 1) << "_deg";
    out.stream() << ",motor_position_mm,sma_powered\n";

    FingerDriveState state;
    std::size_t next_event = 0;
    DriveCommand active = DriveCommand::Hold;
    const double t_end_cap = events.back().t + 120.0;
    double t = 0.0;
    auto emit = [&](double time, const FingerDriveState& s) {
        // cap the mapped reel-in at the route's capacity; the screw can
        // keep travelling after the finger is fully flexed
        const StrokeReport cap = stroke_sufficiency(chain, route, motor);
        const double reel = std::min(s.motor_position_mm, cap.required_mm);
        const JointAngles a = motor_position_to_angle(chain, route, rest, reel);
        out.stream() << fmt(time);
        for (double v : a) out.stream() << "," << fmt(v);
        out.stream() << "," << fmt(s.motor_position_mm) << "," << (s.sma_powered ? 1 : 0)
                     << "\n";
    };
    emit(0.0, state);
    while (t < t_end_cap) {
        while (next_event < events.size() && events[next_event].t <= t + 1e-12)
            active = events[next_event++].command;
        const FingerDriveState next = step_sequencer(state, active, dt, motor);
        t += dt;
        emit(t, next);
        const bool settled = next_event >= events.size() &&
                             std::abs(next.motor_position_mm - state.motor_position_mm) == 0.0 &&
                             !next.sma_powered;
        state = next;
        if (settled && t > events.back().t) break;
    }
    return 0;
}

int cmd_check(const HandSpec& spec, Output& out, const std::string& what,
              double tolerance_mm, const std::string& format) {
    std::ostream& os = out.stream();
    if (what == "allocation") {
        const int sma = spec.allocation.count(ActuatorKind::Sma);
        const int motor = spec.allocation.count(ActuatorKind::Motor);
        const int total = spec.allocation.total();
        const bool ok = total == 32 && sma == 17 && motor == 15;
        os << total << " actuators: " << sma << " SMA, " << motor << " motor - "
           << (ok ? "OK" : "MISMATCH (expected 32 = 17 SMA + 15 motor)") << "\n";
        return ok ? 0 : 1;
    }
    if (what == "gestures") {
        const std::vector<Gesture> lib = builtin_gesture_library(spec);
        int feasible = 0;
        std::string first_failure;
        for (const Gesture& g : lib) {
            const GestureVerdict v = check_gesture(spec, g);
            if (format == "csv")
                os << g.name << "," << (v.feasible ? "feasible" : v.violations.front().what)
                   << "\n";
            if (v.feasible) {
                ++feasible;
            } else if (first_failure.empty()) {
                first_failure = g.name + ": " + v.violations.front().what;
            }
        }
        os << feasible << "/" << lib.size() << " feasible\n";
        if (!first_failure.empty()) os << "first failure: " << first_failure << "\n";
        return feasible == static_cast<int>(lib.size()) ? 0 : 1;
    }
    if (what == "kapandji") {
        const KapandjiResult r = kapandji_score(spec, tolerance_mm);
        for (const auto& t : r.targets)
            os << t.index << "," << (t.reached ? "reached" : "missed") << ","
               << fmt(t.residual_mm) << "," << t.description << "\n";
        os << "score: " << r.score << "/10 (tolerance " << fmt(tolerance_mm) << " mm)\n";
        return 0;  // informational: the simulated score is reported, not asserted
    }
    if (what == "grasps") {
        const auto schlesinger = schlesinger_classes(spec);
        const auto cutkosky = cutkosky_classes(spec);
        int failures = 0;
        auto run = [&](const GraspClass& gc) {
            if (!gc.demonstrated) {
                os << "skip," << gc.name << ",untested\n";
                return;
            }
            try {
                const GraspResult r = generate_grasp(spec, gc);
                os << "ok," << gc.name << ",aperture_mm=" << fmt(r.aperture_mm)
                   << ",error_mm=" << fmt(r.aperture_error_mm) << "\n";
            } catch (const std::exception& e) {
                ++failures;
                os << "fail," << gc.name << "," << e.what() << "\n";
            }
        };
        for (const auto& gc : schlesinger) run(gc);
        for (const auto& gc : cutkosky) run(gc);
        int demonstrated = 0;
        for (const auto& gc : schlesinger)
            if (gc.demonstrated) ++demonstrated;
        os << "Schlesinger " << demonstrated << "/" << schlesinger.size()
           << " demonstrated (hook untested), Cutkosky " << cutkosky.size() << "/16\n";
        const bool ok = failures == 0 && schlesinger.size() == 6 && cutkosky.size() == 9;
        return ok ? 0 : 1;
    }
    throw ValidationError("check: unknown suite '" + what +
                          "' (gestures|kapandji|grasps|allocation)");
}

}  // namespace

struct RunConfig {
    std::string spec_path;
    std::string output_path;
    std::string format = "text";
    unsigned seed = 0;  // reserved: every exposed operation is deterministic
};

int main(int argc, char** argv) {
    CLI::App app{"tendon-driven dexterous hand simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--spec", cfg.spec_path, "hand spec file (default: built-in model)");
    app.add_option("--output", cfg.output_path, "output file (default: stdout)");
    app.add_option("--format", cfg.format, "text|csv")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--seed", cfg.seed,
                   "seed for randomized sweeps (current subcommands are deterministic)");

    auto* fk = app.add_subcommand("fk", "fingertip pose from joint angles");
    std::string fk_finger = "index";
    std::vector<double> fk_deg;
    fk->add_option("--finger", fk_finger, "finger name");
    fk->add_option("--deg", fk_deg, "joint angles in degrees")->required()->expected(-1);

    auto* ik = app.add_subcommand(
        "ik", "joint angles from a fingertip target (multiple flexion solutions "
              "resolve to the least-flexed posture)");
    std::string ik_finger = "index";
    std::vector<double> ik_mm;
    ik->add_option("--finger", ik_finger, "finger name");
    ik->add_option("--mm", ik_mm, "target x y z in mm")->required()->expected(3);

    auto* profile = app.add_subcommand("tendon-profile", "tendon length/moment-arm table");
    std::string pr_finger = "index", pr_joint = "pip";
    double pr_step = 1.0;
    profile->add_option("--finger", pr_finger, "finger name");
    profile->add_option("--joint", pr_joint, "joint name, e.g. pip");
    profile->add_option("--step", pr_step, "theta step in degrees");

    auto* ws = app.add_subcommand("workspace", "fingertip workspace point grid");
    std::string ws_finger = "index";
    int ws_steps = 10;
    ws->add_option("--finger", ws_finger, "finger name");
    ws->add_option("--steps", ws_steps, "grid nodes per axis (>= 2)");

    auto* sim = app.add_subcommand("simulate", "run a drive command script");
    std::string sim_finger = "index", sim_script;
    double sim_dt = 0.001;
    sim->add_option("--finger", sim_finger, "finger name");
    sim->add_option("--script", sim_script, "command script path")->required();
    sim->add_option("--dt", sim_dt, "time step in seconds");

    auto* check = app.add_subcommand("check", "run a model check suite");
    std::string check_what;
    double check_tol = 5.0;
    check->add_option("what", check_what, "gestures|kapandji|grasps|allocation")->required();
    check->add_option("--tolerance", check_tol, "kapandji tolerance in mm");

    auto* dump = app.add_subcommand("spec-dump", "write the active spec (or gesture library)");
    bool dump_gestures = false;
    dump->add_flag("--gestures", dump_gestures, "dump the built-in gesture library instead");

    // let --spec/--output/--format appear after the subcommand too
    for (CLI::App* sub : {fk, ik, profile, ws, sim, check, dump}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const HandSpec spec =
            cfg.spec_path.empty() ? default_hand_spec() : load_spec_file(cfg.spec_path);
        Output out;
        out.open(cfg.output_path);

        if (fk->parsed()) return cmd_fk(spec, out, fk_finger, fk_deg, cfg.format);
        if (ik->parsed()) return cmd_ik(spec, out, ik_finger, ik_mm, cfg.format);
        if (profile->parsed()) return cmd_tendon_profile(spec, out, pr_finger, pr_joint, pr_step);
        if (ws->parsed()) return cmd_workspace(spec, out, ws_finger, ws_steps);
        if (sim->parsed()) return cmd_simulate(spec, out, sim_finger, sim_script, sim_dt);
        if (check->parsed()) return cmd_check(spec, out, check_what, check_tol, cfg.format);
        if (dump->parsed()) {
            out.stream() << (dump_gestures ? save_gestures(builtin_gesture_library(spec))
                                           : save_spec(spec));
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnreachableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
