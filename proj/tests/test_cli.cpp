#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "handsim/hand_model.hpp"
#include "oracles.hpp"

#ifndef HANDSIM_CLI_PATH
#error "HANDSIM_CLI_PATH must point at the built CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "handsim_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("out_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(HANDSIM_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    return r;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("cli fk") {
    CHECK(first_line(run("fk --finger index --deg 0 0 0 0").out) ==
          "99.500000 0.000000 0.000000");
    CHECK(first_line(run("fk --finger index --deg 0 90 0 0").out) ==
          "0.000000 0.000000 -99.500000");
    CHECK(run("fk --finger index --deg 0 0 0 0").exit_code == 0);

    SUBCASE("matches the scalar closed form away from the axes") {
        const RunResult r = run("fk --finger index --deg 15 30 45 30");
        std::istringstream ls(first_line(r.out));
        double x, y, z;
        ls >> x >> y >> z;
        const auto expect = oracle::closed_form_tip(handsim::default_hand_spec().finger("index"),
                                                    {15, 30, 45, 30});
        CHECK(std::abs(x - expect[0]) < 1e-6);
        CHECK(std::abs(y - expect[1]) < 1e-6);
        CHECK(std::abs(z - expect[2]) < 1e-6);
    }
    SUBCASE("out-of-limit angles exit 2 and name the joint") {
        const RunResult r = run("fk --finger index --deg 0 95 0 0");
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("mcp_flexion") != std::string::npos);
    }
    SUBCASE("unknown finger exits 2") {
        CHECK(run("fk --finger pinky --deg 0 0 0 0").exit_code == 2);
    }
}

TEST_CASE("cli ik") {
    SUBCASE("straight pose") {
        const RunResult r = run("ik --finger index --mm 99.5 0 0");
        CHECK(r.exit_code == 0);
        CHECK(first_line(r.out) == "0.000000 0.000000 0.000000 0.000000");
    }
    SUBCASE("round-trips an fk output") {
        const RunResult r = run("ik --finger index --mm " +
                                first_line(run("fk --finger index --deg 10 40 60 40").out));
        CHECK(r.exit_code == 0);
        // the target went through 6-decimal text, so compare numerically
        std::istringstream ls(first_line(r.out));
        double a1, a2, a3, a4;
        ls >> a1 >> a2 >> a3 >> a4;
        CHECK(a1 == doctest::Approx(10.0).epsilon(1e-5));
        CHECK(a2 == doctest::Approx(40.0).epsilon(1e-5));
        CHECK(a3 == doctest::Approx(60.0).epsilon(1e-5));
        CHECK(a4 == doctest::Approx(40.0).epsilon(1e-5));
    }
    SUBCASE("unreachable target exits 3") {
        CHECK(run("ik --finger index --mm 200 0 0").exit_code == 3);
    }
    SUBCASE("the x = y = 0 axis exits 4") {
        CHECK(run("ik --finger index --mm 0 0 -80").exit_code == 4);
    }
}

TEST_CASE("cli tendon-profile") {
    const RunResult r = run("tendon-profile --finger index --joint pip --step 1");
    CHECK(r.exit_code == 0);

    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "theta_deg,l_mm,h_mm");
    double first_l = 0, last_l = 0, prev_h = -1;
    double theta = 0;
    bool monotone_h = true;
    int rows = 0;
    while (std::getline(lines, line)) {
        double l, h;
        char c;
        std::istringstream ls(line);
        ls >> theta >> c >> l >> c >> h;
        if (rows == 0) first_l = l;
        last_l = l;
        if (theta <= 90.0) {
            if (h <= prev_h) monotone_h = false;
            prev_h = h;
        }
        ++rows;
    }
    CHECK(rows == 111);  // 0..110 inclusive at 1 degree
    CHECK(first_l - last_l == doctest::Approx(16.86).epsilon(1e-6));
    CHECK(monotone_h);

    SUBCASE("byte-identical across runs") {
        const RunResult again = run("tendon-profile --finger index --joint pip --step 1");
        CHECK(again.out == r.out);
    }
    SUBCASE("a step wider than the range leaves exactly two rows") {
        const RunResult wide = run("tendon-profile --finger index --joint pip --step 500");
        int n = 0;
        std::istringstream ws(wide.out);
        while (std::getline(ws, line)) ++n;
        CHECK(n == 3);  // header + first + last
    }
    SUBCASE("bad joint name exits 2") {
        CHECK(run("tendon-profile --finger index --joint elbow").exit_code == 2);
    }
}

TEST_CASE("cli simulate") {
    const fs::path script = work_dir() / "flex.txt";
    {
        std::ofstream s(script);
        s << "# reel in from rest\n0 FLEX\n";
    }
    const RunResult r = run("simulate --finger index --script " + script.string() + " --dt 0.01");
    CHECK(r.exit_code == 0);

    std::istringstream lines(r.out);
    std::string header, line, last;
    std::getline(lines, header);
    CHECK(header ==
          "t_s,theta1_deg,theta2_deg,theta3_deg,theta4_deg,motor_position_mm,sma_powered");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) last = line;
        ++rows;
    }
    // full 20 mm stroke at 1.17 mm/s finishes just past 17.09 s
    double t_final = 0, pos_final = 0;
    {
        std::istringstream ls(last);
        char c;
        double th1, th2, th3, th4;
        int sma;
        ls >> t_final >> c >> th1 >> c >> th2 >> c >> th3 >> c >> th4 >> c >> pos_final >> c >> sma;
        CHECK(sma == 0);
    }
    CHECK(std::abs(t_final - 20.0 / 1.17) < 0.02);
    CHECK(pos_final == doctest::Approx(20.0));

    SUBCASE("flex then extend: sma powered only during extension rows") {
        const fs::path script2 = work_dir() / "flex_extend.txt";
        {
            std::ofstream s(script2);
            s << "0 FLEX\n5 EXTEND\n";
        }
        const RunResult fe =
            run("simulate --finger index --script " + script2.string() + " --dt 0.01");
        CHECK(fe.exit_code == 0);
        std::istringstream ls(fe.out);
        std::string row;
        std::getline(ls, row);  // header
        bool any_sma = false;
        while (std::getline(ls, row)) {
            const auto comma = row.rfind(',');
            const bool sma = row.substr(comma + 1) == "1";
            std::istringstream rs(row);
            double t;
            rs >> t;
            if (sma) {
                any_sma = true;
                CHECK(t > 5.0);  // only after the EXTEND command
            }
        }
        CHECK(any_sma);
    }
    SUBCASE("script syntax errors exit 5 with the line number") {
        const fs::path bad = work_dir() / "bad.txt";
        {
            std::ofstream s(bad);
            s << "0 FLEX\n1 WIGGLE\n";
        }
        const RunResult br = run("simulate --finger index --script " + bad.string());
        CHECK(br.exit_code == 5);
        CHECK(br.out.find("line 2") != std::string::npos);
    }
}

TEST_CASE("cli check") {
    SUBCASE("allocation") {
        const RunResult r = run("check allocation");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("32 actuators: 17 SMA, 15 motor") != std::string::npos);
        CHECK(r.out.find("OK") != std::string::npos);
    }
    SUBCASE("gestures") {
        const RunResult r = run("check gestures");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("32/32 feasible") != std::string::npos);
    }
    SUBCASE("grasps") {
        const RunResult r = run("check grasps");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("Schlesinger 5/6 demonstrated (hook untested), Cutkosky 9/16") !=
              std::string::npos);
    }
    SUBCASE("kapandji is informational") {
        const RunResult r = run("check kapandji --tolerance 5");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("score: ") != std::string::npos);
        CHECK(r.out.find("/10") != std::string::npos);
    }
}

TEST_CASE("cli spec round-trip through a file") {
    const fs::path dumped = work_dir() / "spec.json";
    CHECK(run("spec-dump --output " + dumped.string()).exit_code == 0);
    const RunResult r = run("--spec " + dumped.string() + " fk --finger index --deg 0 0 0 0");
    CHECK(r.exit_code == 0);
    CHECK(first_line(r.out) == "99.500000 0.000000 0.000000");

    SUBCASE("append junk and get exit 5") {
        std::ofstream(dumped, std::ios::app) << "}{";
        CHECK(run("--spec " + dumped.string() + " fk --finger index --deg 0 0 0 0").exit_code ==
              5);
    }
    SUBCASE("missing spec file exits 5") {
        CHECK(run("--spec /nonexistent.json fk --finger index --deg 0 0 0 0").exit_code == 5);
    }
}

TEST_CASE("cli workspace export is deterministic") {
    const RunResult a = run("workspace --finger index --steps 5");
    const RunResult b = run("workspace --finger index --steps 5");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    int rows = 0;
    std::istringstream ls(a.out);
    std::string line;
    while (std::getline(ls, line)) ++rows;
    CHECK(rows == 126);  // header + 5^3
}
