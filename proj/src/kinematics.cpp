#include "handsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "handsim/errors.hpp"

namespace handsim {

Pose Pose::operator*(const Pose& rhs) const {
    Pose out;
    for (int i = 0; i < 3; ++i) {
        out.p[i] = p[i];
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += R[i][k] * rhs.R[k][j];
            out.R[i][j] = s;
        }
        for (int k = 0; k < 3; ++k) out.p[i] += R[i][k] * rhs.p[k];
    }
    return out;
}

std::array<double, 3> Pose::apply(const std::array<double, 3>& v) const {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = p[i];
        for (int k = 0; k < 3; ++k) out[i] += R[i][k] * v[k];
    }
    return out;
}

// T = Rx(-alpha_prev) * Rz(theta) * Tx(a) * Tz(d). The x-rotation sign is
// the convention under which the 4-row product reproduces the closed-form
// fingertip coordinates (flexion drives the tip toward negative z).
Pose joint_transform(const DHRow& row, double theta_deg) {
    if (!std::isfinite(theta_deg))
        throw ValidationError("joint_transform: theta is not finite");
    const double al = deg_to_rad(row.alpha_prev_deg);
    const double th = deg_to_rad(theta_deg);
    const double ca = std::cos(al), sa = std::sin(al);
    const double ct = std::cos(th), st = std::sin(th);
    Pose T;
    T.R = {{{ct, -st, 0.0}, {ca * st, ca * ct, sa}, {-sa * st, -sa * ct, ca}}};
    T.p = {row.a_mm * ct, ca * row.a_mm * st + sa * row.d_mm,
           -sa * row.a_mm * st + ca * row.d_mm};
    return T;
}

Pose forward_kinematics(const DHChain& chain, const JointAngles& angles_deg) {
    validate_angles(chain, angles_deg);
    Pose T = Pose::identity();
    for (std::size_t i = 0; i < chain.rows.size(); ++i)
        T = T * joint_transform(chain.rows[i], angles_deg[i]);
    return T;
}

FingertipPoint fingertip(const DHChain& chain, const JointAngles& angles_deg) {
    const Pose T = forward_kinematics(chain, angles_deg);
    return {T.p[0], T.p[1], T.p[2]};
}

std::vector<std::array<double, 3>> joint_positions(const DHChain& chain,
                                                   const JointAngles& angles_deg) {
    validate_angles(chain, angles_deg);
    std::vector<std::array<double, 3>> out;
    out.reserve(chain.rows.size() + 1);
    Pose T = Pose::identity();
    out.push_back(T.p);
    for (std::size_t i = 0; i < chain.rows.size(); ++i) {
        T = T * joint_transform(chain.rows[i], angles_deg[i]);
        out.push_back(T.p);
    }
    return out;
}

JointAngles apply_coupling(const DHChain& chain, const CouplingRule& rule,
                           const JointAngles& angles_deg) {
    rule.validate();
    if (angles_deg.size() != chain.rows.size())
        throw ValidationError("apply_coupling: angle count does not match chain");
    const std::size_t driver = static_cast<std::size_t>(rule.driver_joint - 1);
    const std::size_t driven = static_cast<std::size_t>(rule.driven_joint - 1);
    if (driver >= chain.rows.size() || driven >= chain.rows.size())
        throw ValidationError("apply_coupling: joint index outside chain");
    JointAngles out = angles_deg;
    out[driven] = chain.rows[driven].clamp(rule.ratio * angles_deg[driver]);
    return out;
}

namespace {

// The coupled IK works on the universal structure: row 1 lateral (alpha 0,
// a 0), rows 2..4 parallel flexions (alpha 90, 0, 0), all offsets zero.
void require_universal_structure(const DHChain& chain) {
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    bool ok = chain.rows.size() == 4 && near(chain.rows[0].alpha_prev_deg, 0.0) &&
              near(chain.rows[0].a_mm, 0.0) && near(chain.rows[1].alpha_prev_deg, 90.0) &&
              near(chain.rows[2].alpha_prev_deg, 0.0) && near(chain.rows[3].alpha_prev_deg, 0.0);
    for (const auto& r : chain.rows) ok = ok && near(r.d_mm, 0.0);
    ok = ok && chain.rows[1].a_mm > 0 && chain.rows[2].a_mm > 0 && chain.rows[3].a_mm > 0;
    if (!ok)
        throw ValidationError("inverse_kinematics: chain '" + chain.name +
                              "' does not have the universal 4-joint structure");
}

// Distance equation for the coupled chain: with theta4 = k*theta3,
//   |p|^2 = a2^2+a3^2+a4^2 + 2 a2 a3 cos(th3) + 2 a2 a4 cos((1+k) th3)
//                                             + 2 a3 a4 cos(k th3)
// rearranged into the spec's normalized form g(th3) = rhs.
struct DistanceEq {
    double a2, a3, a4, k, rhs;
    double operator()(double th3_rad) const {
        return std::cos(k * th3_rad) / a2 + std::cos((1.0 + k) * th3_rad) / a3 +
               std::cos(th3_rad) / a4 - rhs;
    }
    double deriv(double th3_rad) const {
        return -k * std::sin(k * th3_rad) / a2 -
               (1.0 + k) * std::sin((1.0 + k) * th3_rad) / a3 - std::sin(th3_rad) / a4;
    }
};

constexpr int kMaxIter = 200;
constexpr double kResidualTol = 1e-10;

// Bisection to bracket, Newton to polish.
double refine_root(const DistanceEq& eq, double lo, double hi) {
    double flo = eq(lo);
    for (int i = 0; i < kMaxIter && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eq(mid);
        if (std::abs(fm) < kResidualTol) { lo = hi = mid; break; }
        if ((flo < 0) == (fm < 0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < kMaxIter; ++i) {
        const double f = eq(x);
        if (std::abs(f) < kResidualTol) break;
        const double df = eq.deriv(x);
        if (df == 0.0) break;
        const double next = x - f / df;
        if (next < lo - 1e-9 || next > hi + 1e-9) break;  // keep the bracket
        x = next;
    }
    return x;
}

// All roots of g on [lo, hi], ascending (fine scan + bisection).
std::vector<double> scan_roots(const DistanceEq& eq, double lo, double hi) {
    std::vector<double> roots;
    const int n = 512;
    double prev_x = lo, prev_f = eq(lo);
    if (std::abs(prev_f) < kResidualTol) roots.push_back(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double f = eq(x);
        if (std::abs(f) < kResidualTol) {
            roots.push_back(x);
        } else if ((prev_f < 0) != (f < 0)) {
            roots.push_back(refine_root(eq, prev_x, x));
        }
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

}  // namespace

JointAngles inverse_kinematics(const DHChain& chain, const FingertipPoint& target,
                               const CouplingRule& coupling) {
    require_universal_structure(chain);
    coupling.validate();
    if (coupling.driver_joint != 3 || coupling.driven_joint != 4)
        throw ValidationError("inverse_kinematics: coupling must drive joint 4 from joint 3");

    const double a2 = chain.rows[1].a_mm;
    const double a3 = chain.rows[2].a_mm;
    const double a4 = chain.rows[3].a_mm;
    const double k = coupling.ratio;

    const double t = std::hypot(target.x, target.y);
    if (t < 1e-12)
        throw SingularityError("inverse_kinematics: lateral angle indeterminate at x = y = 0");

    const double rho2 = t * t + target.z * target.z;
    if (std::sqrt(rho2) > chain.reach_mm() + 1e-9)
        throw UnreachableError("inverse_kinematics: target beyond reach of " +
                               std::to_string(chain.reach_mm()) + " mm");

    // Lateral angle from the azimuth. A fingertip with negative planar
    // radius (deep flexion past vertical) shows up as an azimuth flipped by
    // 180 degrees; in that branch the radial equation is solved against -t.
    const DHRow& lateral = chain.rows[0];
    const double azimuth_deg = rad_to_deg(std::atan2(target.y, target.x));
    double theta1_deg, t_signed;
    if (lateral.contains(azimuth_deg)) {
        theta1_deg = azimuth_deg;
        t_signed = t;
    } else {
        const double flipped = azimuth_deg > 0 ? azimuth_deg - 180.0 : azimuth_deg + 180.0;
        if (!lateral.contains(flipped))
            throw UnreachableError("inverse_kinematics: azimuth " +
                                   std::to_string(azimuth_deg) +
                                   " deg outside the lateral joint range");
        theta1_deg = flipped;
        t_signed = -t;
    }

    DistanceEq eq{a2, a3, a4, k,
                  (rho2 - a2 * a2 - a3 * a3 - a4 * a4) / (2.0 * a2 * a3 * a4)};
    const double lo = deg_to_rad(chain.rows[2].theta_min_deg);
    const double hi = deg_to_rad(chain.rows[2].theta_max_deg);
    const std::vector<double> roots = scan_roots(eq, lo, hi);
    if (roots.empty())
        throw UnreachableError("inverse_kinematics: no flexion solution in range for the target");

    // Try roots ascending (least-flexed posture first) and return the first
    // one whose remaining angles land inside the limits.
    std::string last_reason = "no valid flexion root";
    for (double th3 : roots) {
        const double th4 = k * th3;
        if (!chain.rows[3].contains(rad_to_deg(th4))) {
            last_reason = "coupled joint 4 out of range";
            continue;
        }
        // Radial equation at fixed th3/th4:
        //   A cos(th2) - B sin(th2) = t_signed, A sin(th2) + B cos(th2) = -z
        const double A = a2 + a3 * std::cos(th3) + a4 * std::cos(th3 + th4);
        const double B = a3 * std::sin(th3) + a4 * std::sin(th3 + th4);
        const double den = A * A + B * B;
        if (den < 1e-18) {
            last_reason = "degenerate flexion geometry";
            continue;
        }
        double th2 = std::atan2(-A * target.z - B * t_signed, A * t_signed - B * target.z);

        // Newton on the radial residual f(th2) = A cos - B sin - t_signed,
        // seeded at the closed-form estimate; bisection fallback if Newton
        // leaves the joint-2 bracket.
        auto f = [&](double x) { return A * std::cos(x) - B * std::sin(x) - t_signed; };
        auto df = [&](double x) { return -A * std::sin(x) - B * std::cos(x); };
        const double b_lo = deg_to_rad(chain.rows[1].theta_min_deg);
        const double b_hi = deg_to_rad(chain.rows[1].theta_max_deg);
        bool ok = false;
        double x = th2;
        for (int i = 0; i < kMaxIter; ++i) {
            const double fx = f(x);
            if (std::abs(fx) < kResidualTol) { ok = true; break; }
            const double dfx = df(x);
            if (dfx == 0.0) break;
            x -= fx / dfx;
            if (x < b_lo - 0.2 || x > b_hi + 0.2) break;
        }
        if (!ok) {
            double blo = b_lo, bhi = b_hi, flo = f(blo), fhi = f(bhi);
            if ((flo < 0) != (fhi < 0)) {
                for (int i = 0; i < kMaxIter; ++i) {
                    x = 0.5 * (blo + bhi);
                    const double fm = f(x);
                    if (std::abs(fm) < kResidualTol) break;
                    if ((flo < 0) == (fm < 0)) { blo = x; flo = fm; } else { bhi = x; }
                }
                ok = std::abs(f(x)) < 1e-8;
            }
        }
        if (!ok) {
            last_reason = "joint-2 radial equation has no root in range";
            continue;
        }
        th2 = x;
        if (!chain.rows[1].contains(rad_to_deg(th2))) {
            last_reason = "joint 2 out of range";
            continue;
        }
        JointAngles solution = {theta1_deg, rad_to_deg(th2), rad_to_deg(th3),
                                rad_to_deg(th4)};
        for (std::size_t i = 0; i < 4; ++i)
            solution[i] = chain.rows[i].clamp(solution[i]);  // shave 1e-12 spill
        const FingertipPoint p = fingertip(chain, solution);
        const double err = std::hypot(std::hypot(p.x - target.x, p.y - target.y),
                                      p.z - target.z);
        if (err <= 1e-6) return solution;
        last_reason = "residual above tolerance (" + std::to_string(err) + " mm)";
    }
    throw UnreachableError("inverse_kinematics: " + last_reason);
}

namespace {

std::vector<FingertipPoint> sample_workspace_impl(const DHChain& chain,
                                                  const CouplingRule& coupling,
                                                  int grid_steps,
                                                  [[maybe_unused]] bool parallel) {
    if (grid_steps < 2)
        throw ValidationError("sample_workspace: grid_steps must be at least 2");
    if (chain.rows.size() != 4)
        throw ValidationError("sample_workspace: expects the universal 4-joint chain");
    const int n = grid_steps;
    auto node = [&](const DHRow& row, int i) {
        return row.theta_min_deg +
               (row.theta_max_deg - row.theta_min_deg) * i / (n - 1);
    };
    std::vector<FingertipPoint> points(static_cast<std::size_t>(n) * n * n);
    const long total = static_cast<long>(n) * n * n;

#pragma omp parallel for schedule(static) if (parallel)
    for (long flat = 0; flat < total; ++flat) {
        const int i1 = static_cast<int>(flat / (n * n));
        const int i2 = static_cast<int>((flat / n) % n);
        const int i3 = static_cast<int>(flat % n);
        JointAngles angles = {node(chain.rows[0], i1), node(chain.rows[1], i2),
                              node(chain.rows[2], i3), 0.0};
        angles = apply_coupling(chain, coupling, angles);
        points[static_cast<std::size_t>(flat)] = fingertip(chain, angles);
    }
    return points;
}

}  // namespace

std::vector<FingertipPoint> sample_workspace(const DHChain& chain,
                                             const CouplingRule& coupling,
                                             int grid_steps) {
    return sample_workspace_impl(chain, coupling, grid_steps, true);
}

std::vector<FingertipPoint> sample_workspace_serial(const DHChain& chain,
                                                    const CouplingRule& coupling,
                                                    int grid_steps) {
    return sample_workspace_impl(chain, coupling, grid_steps, false);
}

}  // namespace handsim
