#include <doctest.h>

#include <cmath>
#include <string>

#include "handsim/errors.hpp"
#include "handsim/hand_model.hpp"
#include "handsim/kinematics.hpp"
#include "handsim/tendon.hpp"
#include "oracles.hpp"

using namespace handsim;

namespace {

const HandSpec& spec() {
    static const HandSpec s = default_hand_spec();
    return s;
}

JointTendonGeometry calibrated() {
    return calibrate_geometry(16.86, 0.0, 110.0, JointTendonGeometry{});
}

// theta at which the wrap angle hits a given value (alpha is linear in theta)
double theta_for_alpha(const JointTendonGeometry& g, double alpha_rad) {
    return rad_to_deg(kPi - alpha_rad - std::atan(g.d2_mm / g.R2_mm) -
                      std::atan(g.d1_mm / g.R1_mm));
}

}  // namespace

TEST_CASE("tendon_length closed-form anchors") {
    const JointTendonGeometry g;  // template 12/12/2/2/6/6

    SUBCASE("right angle: l = sqrt(L1^2 + L2^2)") {
        const double th = theta_for_alpha(g, kPi / 2.0);
        CHECK(tendon_length(g, th) ==
              doctest::Approx(std::sqrt(g.L1_mm * g.L1_mm + g.L2_mm * g.L2_mm)).epsilon(1e-12));
    }
    SUBCASE("collinear limit: l -> L1 + L2 and h -> 0") {
        JointTendonGeometry flat = g;
        flat.d1_mm = flat.d2_mm = 1e-9;  // wrap angle ~ pi at theta = 0
        CHECK(tendon_length(flat, 0.0) == doctest::Approx(flat.L1_mm + flat.L2_mm).epsilon(1e-9));
        CHECK(moment_arm(flat, 0.0) == doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("invalid wrap angle raises") {
        CHECK_THROWS_AS((void)tendon_length(g, -60.0), ValidationError);
    }
    SUBCASE("non-positive geometry rejected") {
        JointTendonGeometry bad = g;
        bad.R1_mm = 0.0;
        CHECK_THROWS_AS((void)tendon_length(bad, 10.0), ValidationError);
    }
}

TEST_CASE("calibrated geometry reproduces the 16.86 mm excursion") {
    const JointTendonGeometry g = calibrated();
    CHECK(excursion(g, 0.0, 110.0) == doctest::Approx(16.86).epsilon(1e-9));
    // retained in the shipped default routes
    const TendonRoute& route = spec().route("index_flexor_pip");
    CHECK(excursion(route.crossings[0].geometry, 0.0, 110.0) ==
          doctest::Approx(16.86).epsilon(1e-9));
}

TEST_CASE("calibrate_geometry contract") {
    const JointTendonGeometry tmpl;
    SUBCASE("fixed point: calibrating to the template's own excursion changes nothing") {
        const double own = excursion(tmpl, 0.0, 110.0);
        const JointTendonGeometry g = calibrate_geometry(own, 0.0, 110.0, tmpl);
        CHECK(g.L1_mm == doctest::Approx(tmpl.L1_mm).epsilon(1e-9));
        CHECK(g.L2_mm == doctest::Approx(tmpl.L2_mm).epsilon(1e-9));
    }
    SUBCASE("homogeneity: doubling the target doubles L1 and L2") {
        const JointTendonGeometry one = calibrate_geometry(10.0, 0.0, 110.0, tmpl);
        const JointTendonGeometry two = calibrate_geometry(20.0, 0.0, 110.0, tmpl);
        CHECK(two.L1_mm == doctest::Approx(2.0 * one.L1_mm).epsilon(1e-7));
        CHECK(two.L2_mm == doctest::Approx(2.0 * one.L2_mm).epsilon(1e-7));
    }
    SUBCASE("non-positive target rejected") {
        CHECK_THROWS_AS((void)calibrate_geometry(-1.0, 0.0, 110.0, tmpl), ValidationError);
    }
}

TEST_CASE("length decreases and moment arm increases with flexion") {
    const JointTendonGeometry g = calibrated();
    double prev_l = tendon_length(g, 0.0);
    for (int th = 1; th <= 110; ++th) {
        const double l = tendon_length(g, th);
        CHECK(l < prev_l);
        prev_l = l;
    }
    double prev_h = moment_arm(g, 0.0);
    for (int th = 1; th <= 90; ++th) {
        const double h = moment_arm(g, th);
        CHECK(h > prev_h);
        prev_h = h;
    }
    // sin(alpha) = 1 midpoint: h = L1 L2 / sqrt(L1^2 + L2^2)
    const double th_mid = theta_for_alpha(g, kPi / 2.0);
    CHECK(moment_arm(g, th_mid) ==
          doctest::Approx(g.L1_mm * g.L2_mm /
                          std::sqrt(g.L1_mm * g.L1_mm + g.L2_mm * g.L2_mm)).epsilon(1e-12));
}

TEST_CASE("excursion identities") {
    const JointTendonGeometry g = calibrated();
    CHECK(excursion(g, 42.0, 42.0) == 0.0);
    CHECK(excursion(g, 0.0, 55.0) + excursion(g, 55.0, 110.0) ==
          doctest::Approx(excursion(g, 0.0, 110.0)).epsilon(1e-12));
    oracle::DetRng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0, 110), b = rng.uniform(0, 110);
        CHECK(excursion(g, a, b) == doctest::Approx(-excursion(g, b, a)).epsilon(1e-12));
    }
}

TEST_CASE("route_excursion") {
    const HandSpec& s = spec();
    const DHChain& chain = s.finger("index");

    SUBCASE("single-crossing route equals the plain excursion") {
        const TendonRoute& route = s.route("index_flexor_pip");
        const JointAngles from = {0, 0, 0, 0}, to = {0, 0, 110, 0};
        CHECK(route_excursion(chain, route, from, to) ==
              doctest::Approx(excursion(route.crossings[0].geometry, 0, 110)).epsilon(1e-12));
    }
    SUBCASE("antagonistic lateral pair: equal magnitude, opposite sign") {
        const TendonRoute& radial = s.route("index_lateral_radial");
        const TendonRoute& ulnar = s.route("index_lateral_ulnar");
        const JointAngles from = {-15, 0, 0, 0}, to = {15, 0, 0, 0};
        const double er = route_excursion(chain, radial, from, to);
        const double eu = route_excursion(chain, ulnar, from, to);
        CHECK(er == doctest::Approx(-eu).epsilon(1e-12));
        CHECK(std::abs(er) > 0.1);
    }
    SUBCASE("multi-crossing route equals the per-joint brute-force sum") {
        TendonRoute full;  // flexor across all three flexion joints
        full.name = "full";
        full.kind = TendonKind::Flexor;
        full.finger = "index";
        const JointTendonGeometry g = calibrated();
        full.crossings = {{2, g, 1, 1.0}, {3, g, 1, 1.0}, {4, g, 1, 1.0}};
        const JointAngles from = {0, 0, 0, 0}, to = {0, 90, 110, 90};
        const double direct = route_excursion(chain, full, from, to);
        const double brute = excursion(g, 0, 90) + excursion(g, 0, 110) + excursion(g, 0, 90);
        CHECK(direct == doctest::Approx(brute).epsilon(1e-12));
    }
    SUBCASE("additive over concatenated angle paths") {
        const TendonRoute& route = s.route("index_flexor_mcp");
        const JointAngles a = {0, 0, 0, 0}, b = {0, 40, 0, 0}, c = {0, 85, 0, 0};
        CHECK(route_excursion(chain, route, a, b) + route_excursion(chain, route, b, c) ==
              doctest::Approx(route_excursion(chain, route, a, c)).epsilon(1e-12));
    }
    SUBCASE("geometry errors name the offending joint") {
        TendonRoute bad = s.route("index_flexor_pip");
        bad.crossings[0].geometry.d1_mm = 1e9;  // wrap angle leaves (0, pi)
        try {
            (void)route_excursion(chain, bad, {0, 0, 0, 0}, {0, 0, 110, 0});
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("pip") != std::string::npos);
        }
    }
}

TEST_CASE("joint_torque") {
    const JointTendonGeometry g = calibrated();
    CHECK(joint_torque(g, 30.0, 0.0) == 0.0);
    const double th_mid = theta_for_alpha(g, kPi / 2.0);
    CHECK(joint_torque(g, th_mid, 400.0) ==
          doctest::Approx(400.0 * g.L1_mm * g.L2_mm /
                          std::sqrt(g.L1_mm * g.L1_mm + g.L2_mm * g.L2_mm)).epsilon(1e-12));
    CHECK(joint_torque(g, 90.0, 250.0) > joint_torque(g, 0.0, 250.0));
    oracle::DetRng rng(17);
    for (int i = 0; i < 50; ++i) {
        const double th = rng.uniform(0, 110), T = rng.uniform(0, 400);
        CHECK(joint_torque(g, th, 2.0 * T) == doctest::Approx(2.0 * joint_torque(g, th, T)));
    }
    CHECK_THROWS_AS((void)joint_torque(g, 10.0, -1.0), ValidationError);
}

TEST_CASE("fingertip_force") {
    const HandSpec& s = spec();
    const DHChain& chain = s.finger("index");

    SUBCASE("zero torques give zero force") {
        const auto r = fingertip_force(chain, {5, 30, 40, 20}, {0, 0, 0, 0});
        CHECK(oracle::dist3(r.force_N, {0, 0, 0}) == 0.0);
        CHECK(r.residual_Nmm == 0.0);
    }
    SUBCASE("straight finger, torques from a pure perpendicular tip force") {
        // tau consistent with F = (0,0,-1) N: tau_mcp = 99.5 N mm, so the
        // recovered |F| equals tau_mcp / 99.5 (the single-joint lever view).
        const std::vector<double> tau = {0.0, 99.5, 52.5, 23.5};
        const auto r = fingertip_force(chain, {0, 0, 0, 0}, tau);
        CHECK(r.singular);  // straight pose: the x direction is unobservable
        CHECK(oracle::dist3(r.force_N, {0, 0, -1}) < 1e-6);
        CHECK(std::abs(std::hypot(std::hypot(r.force_N[0], r.force_N[1]), r.force_N[2]) -
                       tau[1] / 99.5) < 1e-6);
        CHECK(r.residual_Nmm < 1e-6);
    }
    SUBCASE("virtual-work consistency at a mid-flexion posture") {
        const JointAngles a = {5, 40, 60, 40};
        // build a consistent torque vector from a known force
        const std::array<double, 3> f_true = {1.2, -0.4, 2.0};
        const double h = 1e-5;
        std::vector<double> tau(4);
        for (int j = 0; j < 4; ++j) {
            JointAngles plus = a, minus = a;
            plus[j] += rad_to_deg(h);
            minus[j] -= rad_to_deg(h);
            const FingertipPoint pp = fingertip(chain, plus), pm = fingertip(chain, minus);
            tau[j] = ((pp.x - pm.x) * f_true[0] + (pp.y - pm.y) * f_true[1] +
                      (pp.z - pm.z) * f_true[2]) /
                     (2 * h);
        }
        const auto r = fingertip_force(chain, a, tau);
        CHECK(oracle::dist3(r.force_N, f_true) < 1e-6);

        // perturb along the torque signs (no cancellation in the work sum)
        // and compare tau . dtheta against F . dx
        oracle::DetRng rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> dth(4);
            for (int j = 0; j < 4; ++j)
                dth[j] = rng.uniform(0.2e-4, 1e-4) * (tau[j] >= 0 ? 1.0 : -1.0);
            JointAngles moved = a;
            for (int j = 0; j < 4; ++j) moved[j] += rad_to_deg(dth[j]);
            const FingertipPoint p0 = fingertip(chain, a), p1 = fingertip(chain, moved);
            double work_tau = 0;
            for (int j = 0; j < 4; ++j) work_tau += tau[j] * dth[j];
            const double work_f = r.force_N[0] * (p1.x - p0.x) + r.force_N[1] * (p1.y - p0.y) +
                                  r.force_N[2] * (p1.z - p0.z);
            CHECK(std::abs(work_tau - work_f) / std::abs(work_tau) < 1e-3);
        }
    }
    SUBCASE("torque arity enforced") {
        CHECK_THROWS_AS((void)fingertip_force(chain, {0, 0, 0, 0}, {1, 2}), ValidationError);
    }
}
