#pragma once

// Gesture feasibility, the 10-point thumb-opposition score and grasp-class
// posture generation on top of the kinematic model.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "handsim/hand_model.hpp"
#include "handsim/kinematics.hpp"

namespace handsim {

struct Gesture {
    std::string name;
    std::map<std::string, JointAngles> targets;  // finger -> angles (deg)
    std::string provenance;

    bool operator==(const Gesture&) const = default;
};

struct GestureViolation {
    std::string finger;
    std::string joint;
    std::string what;  // human-readable, names value and bound
};

struct GestureVerdict {
    bool feasible = true;
    std::vector<GestureViolation> violations;
};

// Feasible iff every target angle is within limits and every coupled pair
// satisfies theta_driven = k * theta_driver within 0.5 degrees.
GestureVerdict check_gesture(const HandSpec& spec, const Gesture& gesture);

struct KapandjiTargetReport {
    int index = 0;  // 1..10
    std::string description;
    std::array<double, 3> point_mm{0, 0, 0};  // hand frame
    double residual_mm = 0.0;
    bool reached = false;
};

struct KapandjiResult {
    int score = 0;  // 0..10
    std::vector<KapandjiTargetReport> targets;
};

// Thumb IK toward each of the 10 landmark points; one point per residual
// within tolerance. Unreachable targets score 0 with the best residual found.
KapandjiResult kapandji_score(const HandSpec& spec, double tolerance_mm);

enum class Taxonomy { Schlesinger, Cutkosky };

struct GraspObject {
    enum class Shape { None, Cylinder, Sphere, Slab };
    Shape shape = Shape::None;
    double size_mm = 0.0;  // diameter (cylinder/sphere) or thickness (slab)
};

struct GraspClass {
    Taxonomy taxonomy = Taxonomy::Schlesinger;
    std::string name;
    GraspObject object;
    Gesture template_gesture;
    std::vector<std::string> closing_fingers;  // searched against the thumb tip
    bool demonstrated = true;
};

std::vector<GraspClass> schlesinger_classes(const HandSpec& spec);  // 6 entries
std::vector<GraspClass> cutkosky_classes(const HandSpec& spec);     // 9 entries

struct GraspResult {
    Gesture posture;
    double aperture_mm = 0.0;        // worst per-finger aperture reached
    double aperture_error_mm = 0.0;  // |aperture - object size|, <= 1 on success
};

// Instantiate the class template and close each participating finger along
// its proportional flexion path until the tip-to-thumb-tip distance matches
// the object size within 1 mm. Throws UnreachableError when the object is
// outside the aperture range.
GraspResult generate_grasp(const HandSpec& spec, const GraspClass& grasp_class);

// The 32 extended/flexed finger-state combinations, every entry feasible.
std::vector<Gesture> builtin_gesture_library(const HandSpec& spec);

// Gesture library file format (same JSON dialect as the hand spec file).
std::string save_gestures(const std::vector<Gesture>& gestures);
std::vector<Gesture> load_gestures(const std::string& json_text);

// Fingertip position in the hand frame for a posed finger (base applied).
std::array<double, 3> hand_frame_tip(const HandSpec& spec, const std::string& finger,
                                     const JointAngles& angles_deg);

// Coupled IK against a hand-frame target for any finger. Zero-length filler
// rows (the thumb's cmc_rotation) are parked at 0 and the finger's coupling
// rule (default 2/3 on the last pair when absent) closes the system.
JointAngles finger_ik(const HandSpec& spec, const std::string& finger,
                      const FingertipPoint& target_hand_mm);

}  // namespace handsim
