#pragma once

// Kinematic chain description: D-H rows, joint limits and the DIP<-PIP
// coupling rule. Angles are degrees at every interface, lengths are mm.

#include <array>
#include <string>
#include <vector>

namespace handsim {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Joint angles in degrees, one entry per chain row.
using JointAngles = std::vector<double>;

struct DHRow {
    std::string name;            // joint name, e.g. "mcp_flexion"
    double alpha_prev_deg = 0.0; // link twist to the previous axis
    double a_mm = 0.0;           // link length
    double d_mm = 0.0;           // link offset
    double theta_min_deg = 0.0;
    double theta_max_deg = 0.0;

    bool contains(double theta_deg, double tol_deg = 1e-9) const {
        return theta_deg >= theta_min_deg - tol_deg && theta_deg <= theta_max_deg + tol_deg;
    }
    double clamp(double theta_deg) const {
        if (theta_deg < theta_min_deg) return theta_min_deg;
        if (theta_deg > theta_max_deg) return theta_max_deg;
        return theta_deg;
    }
    void validate() const;  // throws ValidationError

    bool operator==(const DHRow&) const = default;
};

struct DHChain {
    std::string name;  // finger name
    std::vector<DHRow> rows;
    std::array<double, 3> base_xyz_mm{0.0, 0.0, 0.0};
    std::array<double, 3> base_rpy_deg{0.0, 0.0, 0.0};

    std::size_t dof() const { return rows.size(); }

    // Upper bound on fingertip distance from the chain origin (all d are 0
    // in this hand, so the sum of link lengths bounds the reach).
    double reach_mm() const;

    // Index of a row by joint name; throws ValidationError if unknown.
    std::size_t row_index(const std::string& joint_name) const;

    void validate() const;

    bool operator==(const DHChain&) const = default;
};

// theta_driven = ratio * theta_driver for one finger; joints are 1-based
// row numbers so they read like the theta_1..theta_n notation.
struct CouplingRule {
    std::string finger;
    int driver_joint = 3;
    int driven_joint = 4;
    double ratio = 2.0 / 3.0;

    void validate() const;

    bool operator==(const CouplingRule&) const = default;
};

// Clamp every angle into its row's range. Idempotent.
JointAngles clamp_to_limits(const DHChain& chain, const JointAngles& angles_deg);

// Throws ValidationError naming the first out-of-limit joint and its bound.
void validate_angles(const DHChain& chain, const JointAngles& angles_deg,
                     double tol_deg = 1e-9);

}  // namespace handsim
