#pragma once

// Forward/inverse kinematics for the side-swinging 4-joint finger chain:
// one lateral joint at the base, three parallel flexion joints behind it.
// Positions are mm in the chain's own frame 0 unless stated otherwise.

#include <array>
#include <vector>

#include "handsim/chain.hpp"

namespace handsim {

struct Pose {
    std::array<std::array<double, 3>, 3> R{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::array<double, 3> p{0.0, 0.0, 0.0};

    static Pose identity() { return Pose{}; }
    Pose operator*(const Pose& rhs) const;
    std::array<double, 3> apply(const std::array<double, 3>& v) const;
};

struct FingertipPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Single-link homogeneous transform for one D-H row at joint angle theta.
Pose joint_transform(const DHRow& row, double theta_deg);

// Product of joint_transform over the rows, in row order. Validates limits.
Pose forward_kinematics(const DHChain& chain, const JointAngles& angles_deg);

// Position block of forward_kinematics.
FingertipPoint fingertip(const DHChain& chain, const JointAngles& angles_deg);

// Frame origins after each row (joint/crease landmarks); last entry is the tip.
std::vector<std::array<double, 3>> joint_positions(const DHChain& chain,
                                                   const JointAngles& angles_deg);

// Set the driven angle to ratio * driver angle, clamped into the driven
// joint's range; all other entries unchanged.
JointAngles apply_coupling(const DHChain& chain, const CouplingRule& rule,
                           const JointAngles& angles_deg);

// Coupled inverse kinematics: the lateral angle comes from the fingertip
// azimuth, the driver flexion angle from a bracketed root of the coupled
// distance equation, the remaining flexion angle from Newton iteration on
// the radial equation. Throws UnreachableError / SingularityError.
JointAngles inverse_kinematics(const DHChain& chain, const FingertipPoint& target,
                               const CouplingRule& coupling);

// Deterministic endpoint-inclusive grid over (theta1, theta2, theta3) with
// the driven joint coupled; grid_steps nodes per axis, grid_steps^3 points
// in row-major order. sample_workspace runs the OpenMP kernel (output order
// is identical to the serial reference).
std::vector<FingertipPoint> sample_workspace(const DHChain& chain,
                                             const CouplingRule& coupling,
                                             int grid_steps);
std::vector<FingertipPoint> sample_workspace_serial(const DHChain& chain,
                                                    const CouplingRule& coupling,
                                                    int grid_steps);

}  // namespace handsim
