#include <doctest.h>

#include <algorithm>
#include <string>

#include "handsim/errors.hpp"
#include "handsim/hand_model.hpp"

using namespace handsim;

TEST_CASE("default spec matches the published dimensions") {
    const HandSpec spec = default_hand_spec();

    const DHChain& index = spec.finger("index");
    REQUIRE(index.rows.size() == 4);
    CHECK(index.rows[1].a_mm == doctest::Approx(47.0));
    CHECK(index.rows[2].a_mm == doctest::Approx(29.0));
    CHECK(index.rows[3].a_mm == doctest::Approx(23.5));
    CHECK(index.rows[0].theta_min_deg == -15.0);
    CHECK(index.rows[0].theta_max_deg == 15.0);
    CHECK(index.rows[1].theta_max_deg == 90.0);
    CHECK(index.rows[2].theta_max_deg == 110.0);
    CHECK(index.rows[3].theta_max_deg == 90.0);
    CHECK(index.rows[1].alpha_prev_deg == 90.0);

    CHECK(spec.finger("middle") .rows == index.rows);
    CHECK(spec.finger("ring").rows == index.rows);
    CHECK(spec.finger("little").rows[1].a_mm == doctest::Approx(38.0));

    const DHChain& thumb = spec.finger("thumb");
    CHECK(thumb.row_index("cmc_abduction") == 0);
    CHECK(thumb.rows[thumb.row_index("cmc_abduction")].theta_max_deg == 53.0);
    CHECK(thumb.rows[thumb.row_index("cmc_flexion")].theta_max_deg == 107.0);

    CHECK(spec.total_dof() == 21);

    CHECK(spec.allocation.total() == 32);
    CHECK(spec.allocation.count(ActuatorKind::Sma) == 17);
    CHECK(spec.allocation.count(ActuatorKind::Motor) == 15);
}

TEST_CASE("default spec is deterministic") {
    CHECK(default_hand_spec() == default_hand_spec());
    CHECK(save_spec(default_hand_spec()) == save_spec(default_hand_spec()));
}

TEST_CASE("coupling rules: k = 2/3 on the last row of each non-thumb finger") {
    const HandSpec spec = default_hand_spec();
    CHECK(spec.couplings.size() == 4);
    for (const CouplingRule& c : spec.couplings) {
        CHECK(c.finger != "thumb");
        CHECK(c.ratio == doctest::Approx(2.0 / 3.0));
        CHECK(c.driven_joint == static_cast<int>(spec.finger(c.finger).dof()));
    }
    CHECK(spec.coupling_for("thumb") == nullptr);
}

TEST_CASE("universal finger carries 7 routes (3 flexor, 2 extensor, 2 lateral)") {
    const HandSpec spec = default_hand_spec();
    for (const char* f : {"index", "middle", "ring", "little"}) {
        int flexor = 0, extensor = 0, lateral = 0;
        for (const TendonRoute* r : spec.routes_for(f)) {
            if (r->kind == TendonKind::Flexor) ++flexor;
            if (r->kind == TendonKind::Extensor) ++extensor;
            if (r->kind == TendonKind::Lateral) ++lateral;
        }
        CHECK(flexor == 3);
        CHECK(extensor == 2);
        CHECK(lateral == 2);
    }
}

TEST_CASE("save/load round-trip preserves the spec exactly") {
    const HandSpec spec = default_hand_spec();
    const HandSpec back = load_spec(save_spec(spec));
    CHECK(back == spec);
    // and bytes are stable through a second trip
    CHECK(save_spec(back) == save_spec(spec));
}

TEST_CASE("shipped data/default_hand.json is the built-in model") {
    const HandSpec shipped = load_spec_file(std::string(HANDSIM_DATA_DIR) + "/default_hand.json");
    CHECK(shipped == default_hand_spec());
}

TEST_CASE("load_spec rejects malformed and invalid documents") {
    CHECK_THROWS_AS(load_spec("{ not json"), ParseError);
    CHECK_THROWS_AS(load_spec("{}"), ParseError);  // missing top-level keys

    const HandSpec spec = default_hand_spec();

    SUBCASE("inverted joint range") {
        HandSpec bad = spec;
        bad.fingers[1].rows[2].theta_min_deg = 120.0;  // above the 110 max
        CHECK_THROWS_AS(load_spec(save_spec(bad)), ValidationError);
        try {
            load_spec(save_spec(bad));
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("theta_min > theta_max") != std::string::npos);
        }
    }
    SUBCASE("missing finger") {
        HandSpec bad = spec;
        bad.fingers.pop_back();
        bad.couplings.pop_back();
        bad.tendon_routes.erase(
            std::remove_if(bad.tendon_routes.begin(), bad.tendon_routes.end(),
                           [](const TendonRoute& r) { return r.finger == "little"; }),
            bad.tendon_routes.end());
        try {
            load_spec(save_spec(bad));
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("expected 5 fingers") != std::string::npos);
        }
    }
    SUBCASE("flexor mapped to an SMA unit") {
        HandSpec bad = spec;
        for (auto& r : bad.tendon_routes)
            if (r.name == "index_flexor_pip") r.actuator = "s_index_lateral";
        CHECK_THROWS_AS(load_spec(save_spec(bad)), ValidationError);
    }
}

TEST_CASE("clamp_to_limits") {
    const HandSpec spec = default_hand_spec();
    const DHChain& chain = spec.finger("index");

    CHECK(clamp_to_limits(chain, {0, 45, 55, 45}) == JointAngles{0, 45, 55, 45});
    CHECK(clamp_to_limits(chain, {20, 100, 120, 95}) == JointAngles{15, 90, 110, 90});
    CHECK(clamp_to_limits(chain, {-20, -5, -1, -1}) == JointAngles{-15, 0, 0, 0});
    CHECK_THROWS_AS(clamp_to_limits(chain, {0, 0}), ValidationError);

    SUBCASE("idempotent on random inputs") {
        for (int i = 0; i < 50; ++i) {
            JointAngles wild = {-40.0 + 2.3 * i, 130.0 - 5.1 * i, 3.7 * i - 20.0,
                                200.0 - 9.0 * i};
            const JointAngles once = clamp_to_limits(chain, wild);
            CHECK(clamp_to_limits(chain, once) == once);
        }
    }
}
