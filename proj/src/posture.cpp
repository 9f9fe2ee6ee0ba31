#include "handsim/posture.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "handsim/errors.hpp"

namespace handsim {

using ordered_json = nlohmann::ordered_json;

namespace {

Pose base_pose(const DHChain& chain) {
    const double r = deg_to_rad(chain.base_rpy_deg[0]);
    const double p = deg_to_rad(chain.base_rpy_deg[1]);
    const double y = deg_to_rad(chain.base_rpy_deg[2]);
    const double cr = std::cos(r), sr = std::sin(r);
    const double cp = std::cos(p), sp = std::sin(p);
    const double cy = std::cos(y), sy = std::sin(y);
    Pose T;
    // Rz(yaw) * Ry(pitch) * Rx(roll)
    T.R = {{{cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr},
            {sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr},
            {-sp, cp * sr, cp * cr}}};
    T.p = {chain.base_xyz_mm[0], chain.base_xyz_mm[1], chain.base_xyz_mm[2]};
    return T;
}

std::array<double, 3> to_local(const Pose& base, const std::array<double, 3>& p_hand) {
    // base is a rigid transform; invert as R^T (p - t)
    std::array<double, 3> d{p_hand[0] - base.p[0], p_hand[1] - base.p[1],
                            p_hand[2] - base.p[2]};
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        out[i] = base.R[0][i] * d[0] + base.R[1][i] * d[1] + base.R[2][i] * d[2];
    return out;
}

double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::hypot(std::hypot(a[0] - b[0], a[1] - b[1]), a[2] - b[2]);
}

// View of a chain with zero-length filler rows removed: row 0 (lateral) plus
// every row with a > 0. The default thumb reduces to the universal 4-joint
// structure this way, with its cmc_rotation row parked at 0.
struct ReducedChain {
    DHChain chain;
    std::vector<std::size_t> row_map;  // reduced row -> original row
};

ReducedChain reduce_for_ik(const DHChain& full) {
    ReducedChain out;
    out.chain.name = full.name;
    out.chain.base_xyz_mm = full.base_xyz_mm;
    out.chain.base_rpy_deg = full.base_rpy_deg;
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
        if (i == 0 || full.rows[i].a_mm > 0.0) {
            out.chain.rows.push_back(full.rows[i]);
            out.row_map.push_back(i);
        }
    }
    return out;
}

JointAngles expand_from_reduced(const DHChain& full, const ReducedChain& red,
                                const JointAngles& reduced_angles) {
    JointAngles out(full.rows.size(), 0.0);
    for (std::size_t i = 0; i < full.rows.size(); ++i) out[i] = full.rows[i].clamp(0.0);
    for (std::size_t i = 0; i < red.row_map.size(); ++i)
        out[red.row_map[i]] = reduced_angles[i];
    return out;
}

// Closest reachable point on the coupled grid, used when IK reports the
// target unreachable. Coarse scan plus a few local refinement passes.
double closest_reach_mm(const DHChain& chain, const CouplingRule& coupling,
                        const std::array<double, 3>& target) {
    const DHRow& r1 = chain.rows[0];
    const DHRow& r2 = chain.rows[1];
    const DHRow& r3 = chain.rows[2];
    auto probe = [&](double t1, double t2, double t3) {
        JointAngles a = {r1.clamp(t1), r2.clamp(t2), r3.clamp(t3), 0.0};
        a = apply_coupling(chain, coupling, a);
        const FingertipPoint p = fingertip(chain, a);
        return dist({p.x, p.y, p.z}, target);
    };
    const int n = 24;
    double best = 1e300, b1 = 0, b2 = 0, b3 = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k) {
                const double t1 = r1.theta_min_deg + (r1.theta_max_deg - r1.theta_min_deg) * i / n;
                const double t2 = r2.theta_min_deg + (r2.theta_max_deg - r2.theta_min_deg) * j / n;
                const double t3 = r3.theta_min_deg + (r3.theta_max_deg - r3.theta_min_deg) * k / n;
                const double d = probe(t1, t2, t3);
                if (d < best) { best = d; b1 = t1; b2 = t2; b3 = t3; }
            }
    double step1 = (r1.theta_max_deg - r1.theta_min_deg) / n;
    double step2 = (r2.theta_max_deg - r2.theta_min_deg) / n;
    double step3 = (r3.theta_max_deg - r3.theta_min_deg) / n;
    for (int round = 0; round < 12; ++round) {
        bool improved = false;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                for (int dk = -1; dk <= 1; ++dk) {
                    const double d = probe(b1 + di * step1, b2 + dj * step2, b3 + dk * step3);
                    if (d < best) {
                        best = d;
                        b1 = r1.clamp(b1 + di * step1);
                        b2 = r2.clamp(b2 + dj * step2);
                        b3 = r3.clamp(b3 + dk * step3);
                        improved = true;
                    }
                }
        if (!improved) { step1 *= 0.5; step2 *= 0.5; step3 *= 0.5; }
    }
    return best;
}

CouplingRule default_reduced_coupling(const HandSpec& spec, const std::string& finger) {
    if (const CouplingRule* c = spec.coupling_for(finger)) return *c;
    // thumb (or any uncoupled finger): couple the last two reduced joints at
    // the default ratio so the 3-coordinate target stays exactly determined
    return CouplingRule{finger, 3, 4, 2.0 / 3.0};
}

// Thumb IK toward a hand-frame point; returns the residual and, if solved,
// the full-chain angles.
double thumb_reach(const HandSpec& spec, const std::array<double, 3>& point_hand,
                   JointAngles* solved_full) {
    const DHChain& thumb = spec.finger("thumb");
    const ReducedChain red = reduce_for_ik(thumb);
    const CouplingRule rule = default_reduced_coupling(spec, "thumb");
    const std::array<double, 3> local = to_local(base_pose(thumb), point_hand);
    try {
        const JointAngles a =
            inverse_kinematics(red.chain, {local[0], local[1], local[2]}, rule);
        if (solved_full) *solved_full = expand_from_reduced(thumb, red, a);
        const FingertipPoint p = fingertip(red.chain, a);
        return dist({p.x, p.y, p.z}, local);
    } catch (const UnreachableError&) {
    } catch (const SingularityError&) {
    }
    return closest_reach_mm(red.chain, rule, local);
}

}  // namespace

GestureVerdict check_gesture(const HandSpec& spec, const Gesture& gesture) {
    GestureVerdict verdict;
    for (const auto& [fname, angles] : gesture.targets) {
        const DHChain& chain = spec.finger(fname);  // throws on unknown finger
        if (angles.size() != chain.rows.size())
            throw ValidationError("gesture '" + gesture.name + "': finger '" + fname +
                                  "' expects " + std::to_string(chain.rows.size()) + " angles");
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const DHRow& r = chain.rows[i];
            if (!r.contains(angles[i])) {
                std::ostringstream what;
                what << r.name << " " << angles[i] << " deg exceeds ["
                     << r.theta_min_deg << ", " << r.theta_max_deg << "]";
                verdict.violations.push_back({fname, r.name, what.str()});
            }
        }
        if (const CouplingRule* c = spec.coupling_for(fname)) {
            const double driver = angles[static_cast<std::size_t>(c->driver_joint - 1)];
            const double driven = angles[static_cast<std::size_t>(c->driven_joint - 1)];
            const double expected = c->ratio * driver;
            if (std::abs(driven - expected) > 0.5) {
                std::ostringstream what;
                what << chain.rows[static_cast<std::size_t>(c->driven_joint - 1)].name << " "
                     << driven << " deg violates coupling (expected " << expected << ")";
                verdict.violations.push_back(
                    {fname, chain.rows[static_cast<std::size_t>(c->driven_joint - 1)].name,
                     what.str()});
            }
        }
    }
    verdict.feasible = verdict.violations.empty();
    return verdict;
}

namespace {

JointAngles symbolic_state(const DHChain& chain, const CouplingRule* coupling, double s) {
    // s = 0 extended, 1 flexed, 0.5 half; lateral joints stay at (clamped) 0
    JointAngles a(chain.rows.size(), 0.0);
    for (std::size_t i = 0; i < chain.rows.size(); ++i) {
        const DHRow& r = chain.rows[i];
        const bool flexion = r.alpha_prev_deg > 45.0 ||
                             (i > 0 && chain.rows[i - 1].a_mm > 0.0) ||
                             (i > 0 && r.a_mm > 0.0);
        a[i] = flexion ? r.clamp(s * r.theta_max_deg) : r.clamp(0.0);
    }
    if (coupling) {
        const std::size_t driver = static_cast<std::size_t>(coupling->driver_joint - 1);
        const std::size_t driven = static_cast<std::size_t>(coupling->driven_joint - 1);
        a[driven] = chain.rows[driven].clamp(coupling->ratio * a[driver]);
    }
    return a;
}

std::vector<std::array<double, 3>> posed_landmarks(const HandSpec& spec,
                                                   const std::string& fname, double s) {
    const DHChain& chain = spec.finger(fname);
    const JointAngles a = symbolic_state(chain, spec.coupling_for(fname), s);
    const Pose base = base_pose(chain);
    std::vector<std::array<double, 3>> pts;
    for (const auto& p : joint_positions(chain, a)) pts.push_back(base.apply(p));
    return pts;
}

std::array<double, 3> midpoint(const std::array<double, 3>& a,
                               const std::array<double, 3>& b) {
    return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

}  // namespace

KapandjiResult kapandji_score(const HandSpec& spec, double tolerance_mm) {
    if (std::isnan(tolerance_mm) || tolerance_mm < 0)
        throw ValidationError("kapandji_score: tolerance must be non-negative");

    // Landmark indices into joint_positions(): for the universal finger
    // [chain origin, mcp (a=0 repeat), pip, dip, tip].
    KapandjiResult result;
    std::vector<KapandjiTargetReport> targets;

    const auto index_half = posed_landmarks(spec, "index", 0.5);
    const auto middle_half = posed_landmarks(spec, "middle", 0.5);
    const auto ring_half = posed_landmarks(spec, "ring", 0.5);
    const auto little_half = posed_landmarks(spec, "little", 0.5);
    const auto little_flexed = posed_landmarks(spec, "little", 1.0);
    const auto little_open = posed_landmarks(spec, "little", 0.0);
    const Pose little_base = base_pose(spec.finger("little"));

    targets.push_back({1, "index proximal phalanx (half-flexed)",
                       midpoint(index_half[1], index_half[2]), 0, false});
    targets.push_back({2, "index middle phalanx (half-flexed)",
                       midpoint(index_half[2], index_half[3]), 0, false});
    targets.push_back({3, "index fingertip (half-flexed)", index_half.back(), 0, false});
    targets.push_back({4, "middle fingertip (half-flexed)", middle_half.back(), 0, false});
    targets.push_back({5, "ring fingertip (half-flexed)", ring_half.back(), 0, false});
    targets.push_back({6, "little fingertip (half-flexed)", little_half.back(), 0, false});
    targets.push_back({7, "little dip crease (flexed)", little_flexed[3], 0, false});
    targets.push_back({8, "little pip crease (flexed)", little_flexed[2], 0, false});
    targets.push_back({9, "little mcp crease", little_open[1], 0, false});
    targets.push_back({10, "distal palmar crease (proxy)",
                       little_base.apply({-15.0, 0.0, 0.0}), 0, false});

    for (auto& t : targets) {
        t.residual_mm = thumb_reach(spec, t.point_mm, nullptr);
        t.reached = t.residual_mm <= tolerance_mm;
        if (t.reached) ++result.score;
    }
    result.targets = std::move(targets);
    return result;
}

std::vector<Gesture> builtin_gesture_library(const HandSpec& spec) {
    std::vector<Gesture> out;
    const auto& names = finger_names();
    const char letter[5] = {'T', 'I', 'M', 'R', 'L'};
    for (int mask = 0; mask < 32; ++mask) {
        Gesture g;
        std::string ext;
        for (int i = 0; i < 5; ++i) {
            const bool extended = (mask >> (4 - i)) & 1;
            if (extended) ext.push_back(letter[i]);
            const DHChain& chain = spec.finger(names[static_cast<std::size_t>(i)]);
            g.targets[names[static_cast<std::size_t>(i)]] =
                symbolic_state(chain, spec.coupling_for(chain.name), extended ? 0.0 : 1.0);
        }
        g.name = ext.empty() ? "ext_none" : ("ext_" + ext);
        g.provenance = "combinatorial five-finger set, entry " + std::to_string(mask + 1) + " of 32";
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

Gesture open_hand_gesture(const HandSpec& spec, const std::string& name) {
    Gesture g;
    g.name = name;
    for (const auto& f : spec.fingers)
        g.targets[f.name] = symbolic_state(f, spec.coupling_for(f.name), 0.0);
    return g;
}

void set_thumb(Gesture& g, const HandSpec& spec, const JointAngles& angles) {
    g.targets["thumb"] = clamp_to_limits(spec.finger("thumb"), angles);
}

// Thumb pose meeting the index fingertip at fraction s of the index
// flexion path; keeps pinch closure reachable by construction.
JointAngles opposition_thumb(const HandSpec& spec, double s_meet) {
    const DHChain& index = spec.finger("index");
    const CouplingRule* c = spec.coupling_for("index");
    const JointAngles a = symbolic_state(index, c, s_meet);
    const Pose base = base_pose(index);
    const FingertipPoint tip = fingertip(index, a);
    JointAngles thumb;
    const double res = thumb_reach(spec, base.apply({tip.x, tip.y, tip.z}), &thumb);
    if (thumb.empty() || res > 1.0)
        throw ValidationError("grasp template: thumb opposition point unreachable");
    return thumb;
}

GraspClass make_class(const HandSpec& spec, Taxonomy tax, const std::string& name,
                      GraspObject::Shape shape, double size_mm,
                      const JointAngles& thumb, double finger_s,
                      std::vector<std::string> closing, bool demonstrated = true) {
    GraspClass gc;
    gc.taxonomy = tax;
    gc.name = name;
    gc.object = {shape, size_mm};
    gc.closing_fingers = std::move(closing);
    gc.demonstrated = demonstrated;
    gc.template_gesture = open_hand_gesture(spec, name + "_template");
    gc.template_gesture.provenance = "grasp-class template";
    for (const auto& f : {"index", "middle", "ring", "little"}) {
        const bool closes = std::find(gc.closing_fingers.begin(), gc.closing_fingers.end(),
                                      std::string(f)) != gc.closing_fingers.end();
        const DHChain& chain = spec.finger(f);
        gc.template_gesture.targets[f] =
            symbolic_state(chain, spec.coupling_for(f), closes ? finger_s : 1.0);
    }
    set_thumb(gc.template_gesture, spec, thumb);
    return gc;
}

}  // namespace

std::vector<GraspClass> schlesinger_classes(const HandSpec& spec) {
    // The thumb opposes a point on the index flexion path, so every aperture
    // between fully open and closed is crossable during the search.
    const JointAngles oppose = opposition_thumb(spec, 0.6);
    std::vector<GraspClass> out;
    out.push_back(make_class(spec, Taxonomy::Schlesinger, "cylindrical",
                             GraspObject::Shape::Cylinder, 65.0, oppose, 0.5,
                             {"index", "middle", "ring", "little"}));
    out.push_back(make_class(spec, Taxonomy::Schlesinger, "spherical",
                             GraspObject::Shape::Sphere, 65.0, oppose, 0.5,
                             {"index", "middle", "ring", "little"}));
    out.push_back(make_class(spec, Taxonomy::Schlesinger, "three_finger_pinch",
                             GraspObject::Shape::Sphere, 15.0, oppose, 0.6,
                             {"index", "middle"}));
    out.push_back(make_class(spec, Taxonomy::Schlesinger, "side_pinch",
                             GraspObject::Shape::Slab, 5.0, oppose, 0.6, {"index"}));
    out.push_back(make_class(spec, Taxonomy::Schlesinger, "two_finger_pinch",
                             GraspObject::Shape::None, 0.0, oppose, 0.6, {"index"}));
    GraspClass hook = make_class(spec, Taxonomy::Schlesinger, "hook",
                                 GraspObject::Shape::None, 0.0,
                                 clamp_to_limits(spec.finger("thumb"), {0, 0, 0, 0, 0}),
                                 0.7, {}, false);  // not demonstrated
    out.push_back(hook);
    return out;
}

std::vector<GraspClass> cutkosky_classes(const HandSpec& spec) {
    const JointAngles oppose = opposition_thumb(spec, 0.6);
    const std::vector<std::string> all = {"index", "middle", "ring", "little"};
    std::vector<GraspClass> out;
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "large_diameter",
                             GraspObject::Shape::Cylinder, 65.0, oppose, 0.5, all));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "small_diameter",
                             GraspObject::Shape::Cylinder, 25.0, oppose, 0.7, all));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "medium_wrap",
                             GraspObject::Shape::Cylinder, 45.0, oppose, 0.6, all));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "power_sphere",
                             GraspObject::Shape::Sphere, 60.0, oppose, 0.5, all));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "precision_sphere",
                             GraspObject::Shape::Sphere, 30.0, oppose, 0.5,
                             {"index", "middle"}));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "precision_disk",
                             GraspObject::Shape::Cylinder, 50.0, oppose, 0.4,
                             {"index", "middle"}));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "tripod",
                             GraspObject::Shape::Sphere, 20.0, oppose, 0.6,
                             {"index", "middle"}));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "thumb_2_finger",
                             GraspObject::Shape::Slab, 10.0, oppose, 0.6,
                             {"index", "middle"}));
    out.push_back(make_class(spec, Taxonomy::Cutkosky, "lateral_pinch",
                             GraspObject::Shape::Slab, 5.0, oppose, 0.6, {"index"}));
    return out;
}

GraspResult generate_grasp(const HandSpec& spec, const GraspClass& grasp_class) {
    if (grasp_class.object.shape != GraspObject::Shape::None &&
        !(grasp_class.object.size_mm > 0))
        throw ValidationError("generate_grasp: object size must be positive");

    GraspResult result;
    result.posture = grasp_class.template_gesture;
    result.posture.name = grasp_class.name;
    result.posture.provenance = "generated grasp posture";

    const std::array<double, 3> thumb_tip =
        hand_frame_tip(spec, "thumb", result.posture.targets.at("thumb"));
    const double target = grasp_class.object.size_mm;

    double worst_aperture = dist(
        thumb_tip, hand_frame_tip(spec, "index", result.posture.targets.at("index")));
    double worst_error = 0.0;

    for (const std::string& fname : grasp_class.closing_fingers) {
        const DHChain& chain = spec.finger(fname);
        const CouplingRule* coupling = spec.coupling_for(fname);
        const double lateral = result.posture.targets.at(fname).empty()
                                   ? 0.0
                                   : result.posture.targets.at(fname)[0];
        auto at = [&](double s) {
            JointAngles a = symbolic_state(chain, coupling, s);
            a[0] = chain.rows[0].clamp(lateral);
            return a;
        };
        auto aperture = [&](double s) {
            return dist(thumb_tip, hand_frame_tip(spec, fname, at(s)));
        };

        if (aperture(0.0) + 1.0 < target)
            throw UnreachableError("generate_grasp: object of " + std::to_string(target) +
                                   " mm too large for '" + fname + "' (open aperture " +
                                   std::to_string(aperture(0.0)) + " mm)");

        // First crossing of the target aperture along the flexion path;
        // if the curve only touches it, refine around the closest sample.
        const int n = 400;
        double s_hit = -1.0;
        double best_s = 0.0, best_err = std::abs(aperture(0.0) - target);
        double prev = aperture(0.0) - target;
        for (int i = 1; i <= n; ++i) {
            const double s = static_cast<double>(i) / n;
            const double f = aperture(s) - target;
            if (std::abs(f) < best_err) { best_err = std::abs(f); best_s = s; }
            if ((prev > 0) != (f > 0)) {
                double lo = static_cast<double>(i - 1) / n, hi = s;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((aperture(lo) - target > 0) == (aperture(mid) - target > 0))
                        lo = mid;
                    else
                        hi = mid;
                }
                s_hit = 0.5 * (lo + hi);
                break;
            }
            prev = f;
        }
        if (s_hit < 0) {
            // local ternary refinement around the closest sample
            double lo = std::max(0.0, best_s - 1.0 / n), hi = std::min(1.0, best_s + 1.0 / n);
            for (int it = 0; it < 60; ++it) {
                const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                if (std::abs(aperture(m1) - target) < std::abs(aperture(m2) - target))
                    hi = m2;
                else
                    lo = m1;
            }
            s_hit = 0.5 * (lo + hi);
            if (std::abs(aperture(s_hit) - target) > 1.0)
                throw UnreachableError("generate_grasp: object of " + std::to_string(target) +
                                       " mm too small for '" + fname +
                                       "' (closest aperture " +
                                       std::to_string(aperture(s_hit)) + " mm)");
        }
        result.posture.targets[fname] = at(s_hit);
        const double final_aperture = aperture(s_hit);
        worst_aperture = final_aperture;
        worst_error = std::max(worst_error, std::abs(final_aperture - target));
    }

    result.aperture_mm = worst_aperture;
    result.aperture_error_mm = worst_error;
    return result;
}

std::array<double, 3> hand_frame_tip(const HandSpec& spec, const std::string& finger,
                                     const JointAngles& angles_deg) {
    const DHChain& chain = spec.finger(finger);
    const FingertipPoint p = fingertip(chain, angles_deg);
    return base_pose(chain).apply({p.x, p.y, p.z});
}

JointAngles finger_ik(const HandSpec& spec, const std::string& finger,
                      const FingertipPoint& target_hand_mm) {
    const DHChain& chain = spec.finger(finger);
    const ReducedChain red = reduce_for_ik(chain);
    const CouplingRule rule = default_reduced_coupling(spec, finger);
    const std::array<double, 3> local = to_local(
        base_pose(chain), {target_hand_mm.x, target_hand_mm.y, target_hand_mm.z});
    const JointAngles a = inverse_kinematics(red.chain, {local[0], local[1], local[2]}, rule);
    return expand_from_reduced(chain, red, a);
}

std::string save_gestures(const std::vector<Gesture>& gestures) {
    ordered_json j;
    j["meta"] = ordered_json{{"version", 1}};
    ordered_json arr = ordered_json::array();
    for (const auto& g : gestures) {
        ordered_json targets = ordered_json::object();
        for (const auto& fname : finger_names()) {
            auto it = g.targets.find(fname);
            if (it != g.targets.end()) targets[fname] = it->second;
        }
        arr.push_back(ordered_json{
            {"name", g.name}, {"provenance", g.provenance}, {"targets", targets}});
    }
    j["gestures"] = arr;
    return j.dump(2) + "\n";
}

std::vector<Gesture> load_gestures(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gesture file is not valid JSON: ") + e.what());
    }
    std::vector<Gesture> out;
    try {
        for (const auto& gj : j.at("gestures")) {
            Gesture g;
            g.name = gj.at("name").get<std::string>();
            if (gj.contains("provenance")) g.provenance = gj.at("provenance").get<std::string>();
            for (const auto& [fname, angles] : gj.at("targets").items())
                g.targets[fname] = angles.get<JointAngles>();
            out.push_back(std::move(g));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gesture file structure error: ") + e.what());
    }
    return out;
}

}  // namespace handsim
