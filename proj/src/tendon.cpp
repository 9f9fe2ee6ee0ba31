#include "handsim/tendon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "handsim/errors.hpp"
#include "handsim/kinematics.hpp"

namespace handsim {

double JointTendonGeometry::wrap_angle_rad(double theta_deg) const {
    return kPi - deg_to_rad(theta_deg) - std::atan(d2_mm / R2_mm) -
           std::atan(d1_mm / R1_mm);
}

void JointTendonGeometry::validate() const {
    const double v[6] = {L1_mm, L2_mm, d1_mm, d2_mm, R1_mm, R2_mm};
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x))
            throw ValidationError("tendon geometry: all six lengths must be positive");
}

void JointTendonGeometry::validate_over_range(double theta_min_deg,
                                              double theta_max_deg) const {
    validate();
    // alpha is linear in theta, so checking the endpoints covers the range
    for (double th : {theta_min_deg, theta_max_deg}) {
        const double a = wrap_angle_rad(th);
        if (!(a > 0.0 && a < kPi))
            throw ValidationError("tendon geometry: wrap angle leaves (0, pi) at theta = " +
                                  std::to_string(th) + " deg");
    }
}

namespace {

double checked_wrap_angle(const JointTendonGeometry& geom, double theta_deg) {
    geom.validate();
    const double a = geom.wrap_angle_rad(theta_deg);
    if (!(a > 0.0 && a < kPi))
        throw ValidationError("tendon geometry invalid at theta = " +
                              std::to_string(theta_deg) + " deg (wrap angle outside (0, pi))");
    return a;
}

}  // namespace

double tendon_length(const JointTendonGeometry& geom, double theta_deg) {
    const double a = checked_wrap_angle(geom, theta_deg);
    return std::sqrt(geom.L1_mm * geom.L1_mm + geom.L2_mm * geom.L2_mm -
                     2.0 * geom.L1_mm * geom.L2_mm * std::cos(a));
}

double moment_arm(const JointTendonGeometry& geom, double theta_deg) {
    const double a = checked_wrap_angle(geom, theta_deg);
    return geom.L1_mm * geom.L2_mm * std::sin(a) / tendon_length(geom, theta_deg);
}

double excursion(const JointTendonGeometry& geom, double theta_from_deg,
                 double theta_to_deg) {
    return tendon_length(geom, theta_from_deg) - tendon_length(geom, theta_to_deg);
}

double route_excursion(const DHChain& chain, const TendonRoute& route,
                       const JointAngles& from_deg, const JointAngles& to_deg) {
    if (from_deg.size() != chain.rows.size() || to_deg.size() != chain.rows.size())
        throw ValidationError("route_excursion: angle count does not match chain '" +
                              chain.name + "'");
    double sum = 0.0;
    for (const TendonCrossing& c : route.crossings) {
        const std::size_t j = static_cast<std::size_t>(c.joint - 1);
        if (c.joint < 1 || j >= chain.rows.size())
            throw ValidationError("route '" + route.name + "': crossing joint " +
                                  std::to_string(c.joint) + " outside chain");
        try {
            sum += c.sign * excursion(c.geometry, from_deg[j], to_deg[j]);
        } catch (const ValidationError& e) {
            throw ValidationError("route '" + route.name + "' at joint " +
                                  chain.rows[j].name + ": " + e.what());
        }
    }
    return sum;
}

double joint_torque(const JointTendonGeometry& geom, double theta_deg,
                    double tension_N) {
    if (tension_N < 0.0)
        throw ValidationError("joint_torque: tension must be non-negative");
    return tension_N * moment_arm(geom, theta_deg);
}

namespace {

// 3x3 symmetric eigendecomposition by cyclic Jacobi rotations. Enough for
// the J J^T normal matrix; returns eigenvalues ascending with eigenvectors
// in the columns of V.
void jacobi_eigen(std::array<std::array<double, 3>, 3> m,
                  std::array<double, 3>& eig,
                  std::array<std::array<double, 3>, 3>& V) {
    V = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(m[p][q]) < 1e-300) continue;
                const double theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = V[k][p], vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eig = {m[0][0], m[1][1], m[2][2]};
    // sort ascending, carrying columns along
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (eig[j] < eig[i]) {
                std::swap(eig[i], eig[j]);
                for (int k = 0; k < 3; ++k) std::swap(V[k][i], V[k][j]);
            }
}

}  // namespace

FingertipForceReport fingertip_force(const DHChain& chain, const JointAngles& angles_deg,
                                     const std::vector<double>& joint_torques_Nmm) {
    validate_angles(chain, angles_deg);
    const std::size_t n = chain.rows.size();
    if (joint_torques_Nmm.size() != n)
        throw ValidationError("fingertip_force: one torque per joint required");
    for (double tau : joint_torques_Nmm)
        if (!std::isfinite(tau))
            throw ValidationError("fingertip_force: torques must be finite");

    // Central-difference Jacobian in mm per radian; angle limits are ignored
    // for the +-1e-5 rad probe so postures at a bound still differentiate.
    const double h_rad = 1e-5;
    const double h_deg = rad_to_deg(h_rad);
    auto tip_at = [&](const JointAngles& a) {
        Pose T = Pose::identity();
        for (std::size_t i = 0; i < n; ++i)
            T = T * joint_transform(chain.rows[i], a[i]);
        return T.p;
    };
    std::vector<std::array<double, 3>> J(n);  // J[j] = dp/dtheta_j
    for (std::size_t j = 0; j < n; ++j) {
        JointAngles plus = angles_deg, minus = angles_deg;
        plus[j] += h_deg;
        minus[j] -= h_deg;
        const auto pp = tip_at(plus), pm = tip_at(minus);
        for (int i = 0; i < 3; ++i) J[j][i] = (pp[i] - pm[i]) / (2.0 * h_rad);
    }

    // Normal equations (J J^T) F = J tau with a rank-aware pseudo-inverse;
    // singular poses report the minimal-norm force and set the flag.
    std::array<std::array<double, 3>, 3> M{};
    std::array<double, 3> b{0, 0, 0};
    for (std::size_t j = 0; j < n; ++j) {
        for (int r = 0; r < 3; ++r) {
            b[r] += J[j][r] * joint_torques_Nmm[j];
            for (int c = 0; c < 3; ++c) M[r][c] += J[j][r] * J[j][c];
        }
    }
    std::array<double, 3> eig{};
    std::array<std::array<double, 3>, 3> V{};
    jacobi_eigen(M, eig, V);

    FingertipForceReport report;
    const double lmax = std::max(eig[2], 0.0);
    const double lmin = std::max(eig[0], 0.0);
    report.condition = (lmin <= lmax * 1e-300) ? std::numeric_limits<double>::infinity()
                                               : std::sqrt(lmax / lmin);
    report.singular = !(report.condition < 1e8);

    const double cutoff = lmax * 1e-12;
    for (int m = 0; m < 3; ++m) {
        if (eig[m] <= cutoff) continue;
        double vb = 0.0;
        for (int r = 0; r < 3; ++r) vb += V[r][m] * b[r];
        for (int r = 0; r < 3; ++r) report.force_N[r] += V[r][m] * vb / eig[m];
    }

    double res2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double jt = 0.0;
        for (int r = 0; r < 3; ++r) jt += J[j][r] * report.force_N[r];
        res2 += (jt - joint_torques_Nmm[j]) * (jt - joint_torques_Nmm[j]);
    }
    report.residual_Nmm = std::sqrt(res2);
    return report;
}

JointTendonGeometry calibrate_geometry(double target_excursion_mm,
                                       double theta_from_deg, double theta_to_deg,
                                       const JointTendonGeometry& tmpl) {
    if (!(target_excursion_mm > 0.0))
        throw ValidationError("calibrate_geometry: target excursion must be positive");
    tmpl.validate();

    auto scaled = [&](double s) {
        JointTendonGeometry g = tmpl;
        g.L1_mm *= s;
        g.L2_mm *= s;
        return g;
    };
    auto f = [&](double s) {
        return excursion(scaled(s), theta_from_deg, theta_to_deg) - target_excursion_mm;
    };

    const double base = excursion(tmpl, theta_from_deg, theta_to_deg);
    if (!(base > 0.0))
        throw ValidationError("calibrate_geometry: template excursion is not positive over the range");

    // The wrap angle does not depend on L1/L2, so the excursion is linear in
    // the common scale: the seed lands on the root and the bisection only
    // matters for edited geometry models.
    double lo = 0.5 * target_excursion_mm / base;
    double hi = 2.0 * target_excursion_mm / base;
    double flo = f(lo), fhi = f(hi);
    if ((flo < 0) == (fhi < 0))
        throw ValidationError("calibrate_geometry: no positive scale reaches the target");
    double s = target_excursion_mm / base;
    for (int i = 0; i < 200; ++i) {
        const double fs = f(s);
        if (std::abs(fs) < 1e-9) break;
        if ((flo < 0) == (fs < 0)) { lo = s; flo = fs; } else { hi = s; fhi = fs; }
        s = 0.5 * (lo + hi);
    }
    JointTendonGeometry out = scaled(s);
    if (std::abs(excursion(out, theta_from_deg, theta_to_deg) - target_excursion_mm) > 1e-6)
        throw ValidationError("calibrate_geometry: failed to reach the target excursion");
    return out;
}

}  // namespace handsim
