// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "risbeam/channel.hpp"
#include "test_helpers.hpp"

using namespace risbeam;

namespace {

SystemConfig small_config() {
    SystemConfig cfg;
    cfg.nt_w = 4;
    cfg.nt_h = 4;
    cfg.nr_w = 2;
    cfg.nr_h = 2;
    cfg.nris_w = 4;
    cfg.nris_h = 4;
    cfg.n_rf = 4;
    return cfg;
}

} // namespace

TEST_SUITE_BEGIN("channel");

TEST_CASE("steering vector closed forms") {
    SUBCASE("phase terms vanish at azimuth 0, elevation pi/2") {
        const arma::cx_vec a = upa_steering(0.0, M_PI / 2, 2, 2, 0.5);
        for (arma::uword i = 0; i < 4; ++i) {
            CHECK(a(i).real() == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(std::abs(a(i).imag()) < 1e-12);
        }
    }
    SUBCASE("half-wavelength endfire pair alternates sign") {
        const arma::cx_vec a = upa_steering(M_PI / 2, M_PI / 2, 2, 1, 0.5);
        const double s = 1.0 / std::sqrt(2.0);
        CHECK(a(0).real() == doctest::Approx(s).epsilon(1e-12));
        CHECK(a(1).real() == doctest::Approx(-s).epsilon(1e-12));
        CHECK(std::abs(a(0).imag()) < 1e-12);
        CHECK(std::abs(a(1).imag()) < 1e-12);
    }
}

TEST_CASE("steering vectors have unit norm") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const int w = 1 + static_cast<int>(rng.uniform() * 6);
        const int h = 1 + static_cast<int>(rng.uniform() * 6);
        const arma::cx_vec a = upa_steering(rng.uniform(-M_PI, M_PI),
                                            rng.uniform(-M_PI / 2, M_PI / 2), w, h,
                                            rng.uniform(0.1, 1.0));
        CHECK(arma::norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-path synthesis has constant entry magnitude sqrt(A)") {
    PathSet p;
    p.gains = arma::cx_vec{std::complex<double>(1.0, 0.0)};
    p.azimuth_dep = arma::vec{0.7};
    p.elev_dep = arma::vec{-0.3};
    p.azimuth_arr = arma::vec{-1.2};
    p.elev_arr = arma::vec{0.4};

    const double loss_db = -74.0475;
    const double amp = std::sqrt(db_to_linear(loss_db));
    const arma::cx_mat m = synth_channel_matrix(p, 4, 4, 4, 4, 0.5, loss_db);
    for (arma::uword r = 0; r < m.n_rows; ++r)
        for (arma::uword c = 0; c < m.n_cols; ++c)
            CHECK(std::abs(m(r, c)) == doctest::Approx(amp).epsilon(1e-9));

    // with azimuth 0 and elevation at the band edge the phase terms die and
    // the matrix is entrywise constant
    p.azimuth_dep = arma::vec{0.0};
    p.elev_dep = arma::vec{-M_PI / 2};
    p.azimuth_arr = arma::vec{0.0};
    p.elev_arr = arma::vec{-M_PI / 2};
    const arma::cx_mat flat = synth_channel_matrix(p, 4, 4, 4, 4, 0.5, loss_db);
    for (arma::uword r = 0; r < flat.n_rows; ++r)
        for (arma::uword c = 0; c < flat.n_cols; ++c)
            CHECK(std::abs(flat(r, c) - flat(0, 0)) < 1e-9 * amp);
    CHECK(std::abs(flat(0, 0)) == doctest::Approx(amp).epsilon(1e-9));
}

TEST_CASE("expected Frobenius energy matches N_rx * N_tx * A") {
    // Monte Carlo oracle: E||M||_F^2 = N_t * N_RIS * A_linear
    SystemConfig cfg = small_config();
    const double a_lin = db_to_linear(path_loss_db(derive_geometry(cfg).d_bs_ris_m));
    const double expected = cfg.nt() * cfg.nris() * a_lin;

    Rng rng(2024);
    double acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization chan = draw_channel(cfg, rng);
        acc += std::pow(arma::norm(chan.bs_ris, "fro"), 2);
    }
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("channel rank is bounded by the path count") {
    SystemConfig cfg = small_config();
    cfg.n_paths_br = 2;
    cfg.n_paths_ru = 3;
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const ChannelRealization chan = draw_channel(cfg, rng);
        const arma::vec sm = arma::svd(chan.bs_ris);
        const arma::vec sg = arma::svd(chan.ris_user);
        CHECK(arma::rank(chan.bs_ris, 1e-9 * sm(0)) <= cfg.n_paths_br);
        CHECK(arma::rank(chan.ris_user, 1e-9 * sg(0)) <= cfg.n_paths_ru);
    }
}

TEST_CASE("same seed gives a bit-identical realization") {
    const SystemConfig cfg = small_config();
    Rng r1(child_seed(cfg.seed, 3));
    Rng r2(child_seed(cfg.seed, 3));
    const ChannelRealization a = draw_channel(cfg, r1);
    const ChannelRealization b = draw_channel(cfg, r2);

    REQUIRE(a.bs_ris.n_elem == b.bs_ris.n_elem);
    for (arma::uword i = 0; i < a.bs_ris.n_elem; ++i)
        CHECK(a.bs_ris(i) == b.bs_ris(i));
    for (arma::uword i = 0; i < a.ris_user.n_elem; ++i)
        CHECK(a.ris_user(i) == b.ris_user(i));
}

TEST_CASE("angles respect the stated intervals") {
    Rng rng(17);
    const PathSet p = draw_paths(64, rng);
    CHECK_NOTHROW(p.validate());
    CHECK(p.azimuth_dep.max() < M_PI);
    CHECK(p.azimuth_dep.min() >= -M_PI);
    CHECK(p.elev_arr.max() < M_PI / 2);
    CHECK(p.elev_arr.min() >= -M_PI / 2);
}

TEST_CASE("empty path set is rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(draw_paths(0, rng), std::invalid_argument);

    SystemConfig cfg = small_config();
    cfg.n_paths_br = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("fixture dump round trip") {
    const SystemConfig cfg = small_config();
    Rng rng(9);
    const ChannelRealization chan = draw_channel(cfg, rng);
    const ChannelRealization back = channel_from_json(channel_to_json(chan));

    CHECK(back.a_br_db == chan.a_br_db);
    CHECK(back.a_ru_db == chan.a_ru_db);
    REQUIRE(back.bs_ris.n_rows == chan.bs_ris.n_rows);
    REQUIRE(back.bs_ris.n_cols == chan.bs_ris.n_cols);
    for (arma::uword i = 0; i < chan.bs_ris.n_elem; ++i)
        CHECK(back.bs_ris(i) == chan.bs_ris(i));
    for (arma::uword i = 0; i < chan.ris_user.n_elem; ++i)
        CHECK(back.ris_user(i) == chan.ris_user(i));
}

TEST_SUITE_END();
