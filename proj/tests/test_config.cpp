// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <set>
#include <stdexcept>

#include "risbeam/config.hpp"
#include "risbeam/rng.hpp"

using namespace risbeam;

TEST_SUITE_BEGIN("config");

TEST_CASE("dbm conversion matches its closed form") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
}

TEST_CASE("dbm round trip is tight") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-120.0, 50.0);
        CHECK(watts_to_dbm(dbm_to_watts(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("noise power over the bandwidth") {
    CHECK(noise_power_dbm(251.1886e6) == doctest::Approx(-90.0).epsilon(1e-3));
    CHECK(noise_power_dbm(1.0) == doctest::Approx(-174.0).epsilon(1e-12));
    CHECK(noise_power_dbm(1e9) == doctest::Approx(-84.0).epsilon(1e-12));
    CHECK_THROWS_AS(noise_power_dbm(0.0), std::invalid_argument);
}

TEST_CASE("distance-dependent path loss") {
    CHECK(path_loss_db(100.4988) == doctest::Approx(-74.0475).epsilon(1e-3));
    CHECK(path_loss_db(1.0) == doctest::Approx(-30.0).epsilon(1e-12));
    CHECK(path_loss_db(10.0) == doctest::Approx(-52.0).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(0.0), std::invalid_argument);
}

TEST_CASE("geometry distances") {
    SystemConfig cfg;
    const LinkGeometry geo = derive_geometry(cfg);
    CHECK(geo.d_bs_ris_m == doctest::Approx(100.4988).epsilon(1e-6));
    CHECK(geo.d_ris_user_m == doctest::Approx(100.4988).epsilon(1e-6));

    // symmetric in its endpoints
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const std::array<double, 2> a{rng.uniform(-100, 100), rng.uniform(-100, 100)};
        const std::array<double, 2> b{rng.uniform(-100, 100), rng.uniform(-100, 100)};
        CHECK(planar_distance(a, b) == planar_distance(b, a));
    }
    CHECK(planar_distance({5, 5}, {5, 5}) == 0.0);
}

TEST_CASE("validation rejects each invariant violation with a distinct error") {
    const auto message_of = [](SystemConfig cfg) -> std::string {
        try {
            cfg.validate();
            return "";
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
    };

    SystemConfig ok;
    CHECK_NOTHROW(ok.validate());

    std::set<std::string> messages;
    const auto expect_distinct = [&](SystemConfig cfg) {
        const std::string msg = message_of(cfg);
        CHECK(!msg.empty());
        CHECK(messages.insert(msg).second); // not seen before
    };

    SystemConfig c = ok;
    c.nt_w = 0;
    expect_distinct(c);

    c = ok;
    c.nr_h = -1;
    expect_distinct(c);

    c = ok;
    c.nris_w = 0;
    expect_distinct(c);

    c = ok;
    c.n_rf = 3; // 64 % 3 != 0
    expect_distinct(c);

    c = ok;
    c.n_rf = 32; // M = 2... make M odd instead
    c.nt_w = 6;
    c.nt_h = 6; // N_t = 36, N_RF = 4 -> M = 9 odd
    c.n_rf = 4;
    expect_distinct(c);

    c = ok;
    c.n_paths_br = 0;
    expect_distinct(c);

    c = ok;
    c.n_paths_ru = 0;
    expect_distinct(c);

    c = ok;
    c.pt_dbm = std::numeric_limits<double>::infinity();
    expect_distinct(c);

    c = ok;
    c.b_low = 0;
    expect_distinct(c);

    c = ok;
    c.b_high = 1; // not > b_low
    expect_distinct(c);

    c = ok;
    c.b_ris = 0;
    expect_distinct(c);

    c = ok;
    c.epsilon = 0.0;
    expect_distinct(c);

    c = ok;
    c.trials = 0;
    expect_distinct(c);

    c = ok;
    c.element_spacing_wavelengths = 0.0;
    expect_distinct(c);
}

TEST_CASE("config json parsing") {
    SUBCASE("partial override keeps defaults") {
        const SystemConfig cfg = parse_config(R"({"pt_dbm": 20.0, "n_rf": 2, "nt_w": 4, "nt_h": 4})");
        CHECK(cfg.pt_dbm == 20.0);
        CHECK(cfg.n_rf == 2);
        CHECK(cfg.nt() == 16);
        CHECK(cfg.nris() == 64); // default untouched
    }
    SUBCASE("unknown keys are an error") {
        CHECK_THROWS_AS(parse_config(R"({"pt_dbpm": 20.0})"), std::invalid_argument);
    }
    SUBCASE("b_ris accepts INFINITE and integers") {
        CHECK(!parse_config(R"({"b_ris": "INFINITE"})").b_ris.has_value());
        CHECK(parse_config(R"({"b_ris": 3})").b_ris == 3);
        CHECK_THROWS_AS(parse_config(R"({"b_ris": "LOTS"})"), std::invalid_argument);
    }
    SUBCASE("coordinates") {
        const SystemConfig cfg = parse_config(R"({"ris_xy": [50.0, 5.0]})");
        CHECK(cfg.ris_xy[0] == 50.0);
        CHECK(cfg.ris_xy[1] == 5.0);
    }
    SUBCASE("round trip through the serializer") {
        SystemConfig cfg;
        cfg.pt_dbm = 12.5;
        cfg.b_ris = 3;
        const SystemConfig back = parse_config(config_to_json(cfg));
        CHECK(back.pt_dbm == cfg.pt_dbm);
        CHECK(back.b_ris == cfg.b_ris);
        CHECK(back.seed == cfg.seed);
    }
}

TEST_CASE("environment seed override") {
    SystemConfig cfg;
    cfg.seed = 42;

    setenv("RISBEAM_SEED", "777", 1);
    CHECK(apply_env_seed(cfg).seed == 777);

    setenv("RISBEAM_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(apply_env_seed(cfg), std::invalid_argument);

    unsetenv("RISBEAM_SEED");
    CHECK(apply_env_seed(cfg).seed == 42);
}

TEST_CASE("child streams are reproducible and distinct") {
    CHECK(child_seed(1, 0) == child_seed(1, 0));
    CHECK(child_seed(1, 0) != child_seed(1, 1));
    CHECK(child_seed(1, 0) != child_seed(2, 0));

    Rng a(child_seed(99, 4));
    Rng b(child_seed(99, 4));
    for (int i = 0; i < 16; ++i)
        CHECK(a.raw() == b.raw());
}

TEST_SUITE_END();
