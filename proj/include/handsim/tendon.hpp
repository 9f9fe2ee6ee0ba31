#pragma once

// Tendon transmission at a joint, modeled as the law-of-cosines triangle
// between the two attachment points on either side of the joint axis:
// wrap angle  alpha(theta) = pi - theta - atan(d2/R2) - atan(d1/R1)
// length      l = sqrt(L1^2 + L2^2 - 2 L1 L2 cos(alpha))
// moment arm  h = L1 L2 sin(alpha) / l

#include <array>
#include <string>
#include <vector>

#include "handsim/chain.hpp"

namespace handsim {

struct JointTendonGeometry {
    double L1_mm = 12.0, L2_mm = 12.0;
    double d1_mm = 2.0, d2_mm = 2.0;
    double R1_mm = 6.0, R2_mm = 6.0;

    double wrap_angle_rad(double theta_deg) const;
    void validate() const;  // positivity only; range validity is per-joint
    // Throws ValidationError if alpha leaves (0, pi) anywhere on the range.
    void validate_over_range(double theta_min_deg, double theta_max_deg) const;

    bool operator==(const JointTendonGeometry&) const = default;
};

enum class TendonKind { Flexor, Extensor, Lateral };

struct TendonCrossing {
    int joint = 1;  // 1-based row number in the finger's chain
    JointTendonGeometry geometry;
    int sign = 1;  // +1 shortens as theta grows, -1 pays out
    double efficiency = 1.0;  // multiplicative tension efficiency (friction hook)

    bool operator==(const TendonCrossing&) const = default;
};

struct TendonRoute {
    std::string name;
    TendonKind kind = TendonKind::Flexor;
    std::string finger;
    std::vector<TendonCrossing> crossings;
    std::string actuator;  // actuator unit id
    std::string material = "12-braid line, 0.55 mm diameter, 40 kgf nominal";

    bool operator==(const TendonRoute&) const = default;
};

double tendon_length(const JointTendonGeometry& geom, double theta_deg);
double moment_arm(const JointTendonGeometry& geom, double theta_deg);

// l(from) - l(to); positive when the tendon shortens (actuator reels in).
double excursion(const JointTendonGeometry& geom, double theta_from_deg,
                 double theta_to_deg);

// Signed sum of per-crossing excursions between two angle sets of the
// route's finger chain.
double route_excursion(const DHChain& chain, const TendonRoute& route,
                       const JointAngles& from_deg, const JointAngles& to_deg);

// torque = tension * moment_arm. Tension must be non-negative.
double joint_torque(const JointTendonGeometry& geom, double theta_deg,
                    double tension_N);

struct FingertipForceReport {
    std::array<double, 3> force_N{0.0, 0.0, 0.0};
    double residual_Nmm = 0.0;   // ||J^T F - tau||
    double condition = 0.0;      // cond(J), sqrt of the JJ^T eigenvalue ratio
    bool singular = false;       // condition above 1e8 (reported, not thrown)
};

// Solve J(theta)^T F = tau for the translational fingertip force. J is a
// central-difference Jacobian (step 1e-5 rad, mm per radian); the solve is
// least-squares with a rank-aware pseudo-inverse of J J^T.
FingertipForceReport fingertip_force(const DHChain& chain, const JointAngles& angles_deg,
                                     const std::vector<double>& joint_torques_Nmm);

// Scale L1 and L2 by a common factor so the excursion over the range equals
// target_excursion_mm (1-D root find, tolerance 1e-6 mm on the excursion).
JointTendonGeometry calibrate_geometry(double target_excursion_mm,
                                       double theta_from_deg, double theta_to_deg,
                                       const JointTendonGeometry& tmpl);

}  // namespace handsim
