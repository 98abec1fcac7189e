// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "risbeam/metrics.hpp"
#include "risbeam/passive.hpp"
#include "test_helpers.hpp"

using namespace risbeam;
using namespace risbeam::testing;

namespace {

// rank-1 alignment optimum: max over unit-modulus phi of phi^H (r r^H) phi
// is (sum_i |r_i|)^2, attained at phi_i = exp(j(arg r_i + const)).
double rank1_optimum(const arma::cx_vec& r) {
    double s = 0.0;
    for (arma::uword i = 0; i < r.n_elem; ++i)
        s += std::abs(r(i));
    return s * s;
}

std::vector<SubArrayDesign> random_subarrays(int count, arma::uword m_size, Rng& rng) {
    const QuantizerSet qh(4), ql(1);
    std::vector<SubArrayDesign> subs;
    for (int i = 0; i < count; ++i) {
        SubArrayDesign d;
        d.weights = random_feasible_subarray(m_size, qh, ql, rng);
        subs.push_back(d);
    }
    return subs;
}

} // namespace

TEST_SUITE_BEGIN("passive");

TEST_CASE("quadratic form equals the partial effective-channel energy") {
    Rng rng(303);
    const arma::uword n_ris = 6, m_size = 2;
    for (int j = 1; j <= 3; ++j) {
        const arma::cx_mat g = random_matrix(3, n_ris, rng);
        const arma::cx_mat m = random_matrix(n_ris, m_size * 3, rng);
        const auto subs = random_subarrays(j, m_size, rng);
        const arma::cx_mat r = ris_coupling_matrix(g, m, subs);

        const arma::cx_vec phi = random_unit_modulus(n_ris, rng);
        const double quad = std::real(arma::cdot(phi, r * phi));

        // direct evaluation: || G diag(phi) M Fbar ||_F^2 with Fbar the
        // zero-padded block columns
        arma::cx_mat fbar(m.n_cols, j, arma::fill::zeros);
        for (int i = 0; i < j; ++i)
            fbar.submat(i * m_size, i, (i + 1) * m_size - 1, i) = subs[i].weights;
        const double direct =
            std::pow(arma::norm(g * arma::diagmat(phi) * m * fbar, "fro"), 2);
        CHECK(quad == doctest::Approx(direct).epsilon(1e-9));

        // block-trace oracle: sum_i phi^H diag(v_i)^H G^H G diag(v_i) phi
        std::complex<double> acc(0, 0);
        const arma::cx_mat gram = g.t() * g;
        for (int i = 0; i < j; ++i) {
            const arma::cx_vec v = m.cols(i * m_size, (i + 1) * m_size - 1) * subs[i].weights;
            for (arma::uword a = 0; a < n_ris; ++a)
                for (arma::uword b = 0; b < n_ris; ++b)
                    acc += std::conj(phi(a)) * std::conj(v(a)) * gram(a, b) * v(b) * phi(b);
        }
        CHECK(quad == doctest::Approx(acc.real()).epsilon(1e-9));
    }

    SUBCASE("all-scalar case") {
        Rng r2(7);
        const arma::cx_mat g = random_matrix(1, 1, r2);
        const arma::cx_mat m = random_matrix(1, 1, r2);
        SubArrayDesign d;
        d.weights = arma::cx_vec{std::complex<double>(1.0, 0.0)};
        const arma::cx_mat r = ris_coupling_matrix(g, m, {d});
        const double expected = std::norm(g(0, 0)) * std::norm(m(0, 0));
        CHECK(r(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("bound objective") {
    Rng rng(404);

    SUBCASE("zero matrix gives zero bound") {
        const PassivePhaseVector phi = uniform_phases(4);
        CHECK(bound_objective(phi, arma::cx_mat(4, 4, arma::fill::zeros), 2.0, 0.5, 3) == 0.0);
    }
    SUBCASE("scalar case ignores the phase") {
        const arma::cx_mat r = random_psd(1, rng);
        PassivePhaseVector a = uniform_phases(1);
        PassivePhaseVector b;
        b.phi = arma::cx_vec{std::polar(1.0, 2.1)};
        CHECK(bound_objective(a, r, 1.0, 1.0, 1) ==
              doctest::Approx(bound_objective(b, r, 1.0, 1.0, 1)).epsilon(1e-12));
    }
    SUBCASE("bound dominates the stage rate") {
        // Jensen direction, exact whenever the stage has at most N_r streams
        for (int trial = 0; trial < 30; ++trial) {
            const arma::uword n_ris = 5, m_size = 2;
            const int j = 2; // N_r = 3 >= j
            const arma::cx_mat g = random_matrix(3, n_ris, rng);
            const arma::cx_mat m = random_matrix(n_ris, m_size * 2, rng);
            const auto subs = random_subarrays(j, m_size, rng);
            const arma::cx_mat r = ris_coupling_matrix(g, m, subs);
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(n_ris, rng);

            arma::cx_mat fbar(m.n_cols, j, arma::fill::zeros);
            for (int i = 0; i < j; ++i)
                fbar.submat(i * m_size, i, (i + 1) * m_size - 1, i) = subs[i].weights;
            const arma::cx_mat a = g * arma::diagmat(phi.phi) * m * fbar;

            const double pt = 2.0, sigma2 = 0.7;
            // stage rate log2 det(I + pt/(sigma2 j) A A^H)
            arma::cx_mat s(a.n_rows, a.n_rows, arma::fill::eye);
            s += (pt / (sigma2 * j)) * a * a.t();
            const double stage_rate = std::log2(std::abs(arma::det(s)));
            const double bound = bound_objective(phi, r, pt, sigma2, j);
            CHECK(bound >= stage_rate - 1e-9 * std::abs(stage_rate));
        }
    }
}

TEST_CASE("riemannian gradient tangency") {
    Rng rng(505);
    PassivePhaseVector phi;
    phi.phi = random_unit_modulus(8, rng);

    SUBCASE("radial input projects to zero") {
        const arma::cx_vec g = 2.5 * phi.phi;
        CHECK(arma::norm(riemannian_gradient(phi, g)) < 1e-12);
    }
    SUBCASE("tangent input is unchanged") {
        const arma::cx_vec g = std::complex<double>(0, 1) * phi.phi;
        CHECK(arma::norm(riemannian_gradient(phi, g) - g) < 1e-12);
    }
    SUBCASE("projection output is tangent") {
        for (int trial = 0; trial < 30; ++trial) {
            const arma::cx_vec g = random_matrix(8, 1, rng);
            const arma::cx_vec z = riemannian_gradient(phi, g);
            for (arma::uword i = 0; i < 8; ++i)
                CHECK(std::abs((z(i) * std::conj(phi.phi(i))).real()) < 1e-12);
        }
    }
}

TEST_CASE("ccm step") {
    Rng rng(606);
    const CcmSettings settings;

    SUBCASE("isotropic matrix leaves the phases alone") {
        PassivePhaseVector phi;
        phi.phi = random_unit_modulus(6, rng);
        const arma::cx_mat r = 3.0 * arma::cx_mat(6, 6, arma::fill::eye);
        const CcmStepResult res = ccm_step(phi, r, 1.0, 1.0, 1, settings);
        CHECK(!res.accepted);
        CHECK(res.grad_norm < 1e-12);
        CHECK(arma::norm(res.phi.phi - phi.phi) == 0.0);
    }
    SUBCASE("accepted steps stay on the manifold and ascend") {
        for (int trial = 0; trial < 20; ++trial) {
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(6, rng);
            const arma::cx_mat r = random_psd(6, rng);
            const double before = bound_objective(phi, r, 1.0, 1.0, 1);
            const CcmStepResult res = ccm_step(phi, r, 1.0, 1.0, 1, settings);
            if (res.accepted) {
                CHECK(res.phi.modulus_error() < 1e-12);
                CHECK(res.objective >= before);
            }
        }
    }
}

TEST_CASE("phase optimization") {
    Rng rng(707);
    const CcmSettings settings;

    SUBCASE("aligned rank-1 start returns immediately") {
        arma::cx_vec r_vec = random_matrix(8, 1, rng);
        const arma::cx_mat r = r_vec * r_vec.t();
        PassivePhaseVector phi;
        phi.phi.set_size(8);
        for (arma::uword i = 0; i < 8; ++i)
            phi.phi(i) = std::polar(1.0, std::arg(r_vec(i)));

        std::vector<CcmTraceEntry> trace;
        const PassivePhaseVector out = optimize_phases(phi, r, 1.0, 1.0, 1, settings, &trace);
        CHECK(std::real(arma::cdot(out.phi, r * out.phi)) ==
              doctest::Approx(rank1_optimum(r_vec)).epsilon(1e-9));
        CHECK(trace.size() <= 2);
    }
    SUBCASE("objective trace is monotone") {
        for (int trial = 0; trial < 10; ++trial) {
            const arma::cx_mat r = random_psd(8, rng);
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(8, rng);
            std::vector<CcmTraceEntry> trace;
            optimize_phases(phi, r, 1.0, 1.0, 1, settings, &trace);
            for (size_t i = 1; i < trace.size(); ++i)
                CHECK(trace[i].objective >= trace[i - 1].objective - 1e-12);
        }
    }
    SUBCASE("rank-1 instances reach the analytic optimum") {
        CcmSettings tight;
        tight.max_iters = 5000;
        tight.epsilon = 1e-10;
        for (int trial = 0; trial < 20; ++trial) {
            arma::cx_vec r_vec = random_matrix(16, 1, rng);
            r_vec /= arma::norm(r_vec);
            const arma::cx_mat r = r_vec * r_vec.t();
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(16, rng);
            const PassivePhaseVector out = optimize_phases(phi, r, 1.0, 1.0, 1, tight);
            const double achieved = std::real(arma::cdot(out.phi, r * out.phi));
            CHECK(achieved == doctest::Approx(rank1_optimum(r_vec)).epsilon(1e-4));
        }
    }
    SUBCASE("two-element grid search oracle") {
        CcmSettings tight;
        tight.max_iters = 5000;
        tight.epsilon = 1e-10;
        for (int trial = 0; trial < 10; ++trial) {
            const arma::cx_mat r = random_psd(2, rng);
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(2, rng);
            const PassivePhaseVector out = optimize_phases(phi, r, 1.0, 1.0, 1, tight);
            const double achieved = std::real(arma::cdot(out.phi, r * out.phi));

            // global phase fixed at phi_1 = 1, fine grid over the second phase
            double best = 0.0;
            const int steps = 512;
            for (int k = 0; k < steps; ++k) {
                arma::cx_vec cand(2);
                cand(0) = 1.0;
                cand(1) = std::polar(1.0, 2.0 * M_PI * k / steps);
                best = std::max(best, std::real(arma::cdot(cand, r * cand)));
            }
            CHECK(achieved >= best - 1e-3 * best);
            CHECK(achieved <= best + 1e-3 * best);
        }
    }
    SUBCASE("scaling the matrix keeps the achieved optimum") {
        for (int trial = 0; trial < 10; ++trial) {
            arma::cx_vec r_vec = random_matrix(4, 1, rng);
            r_vec /= arma::norm(r_vec);
            const arma::cx_mat r = r_vec * r_vec.t();

            CcmSettings tight;
            tight.epsilon = 1e-13;
            tight.max_iters = 5000;
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(4, rng);
            const PassivePhaseVector out = optimize_phases(phi, 50.0 * r, 1.0, 1.0, 1, tight);
            const double achieved = std::real(arma::cdot(out.phi, r * out.phi));
            CHECK(achieved == doctest::Approx(rank1_optimum(r_vec)).epsilon(1e-6));
        }
    }
}

TEST_CASE("discrete projection") {
    SUBCASE("grid phases are unchanged") {
        PassivePhaseVector phi;
        phi.phi = arma::cx_vec{std::polar(1.0, 0.0), std::polar(1.0, M_PI / 2),
                               std::polar(1.0, M_PI)};
        const PassivePhaseVector out = project_discrete(phi, 2);
        for (arma::uword i = 0; i < 3; ++i)
            CHECK(std::abs(out.phi(i) - phi.phi(i)) < 1e-12);
    }
    SUBCASE("one-bit projection of 0.6 pi lands on pi") {
        PassivePhaseVector phi;
        phi.phi = arma::cx_vec{std::polar(1.0, 0.6 * M_PI)};
        const PassivePhaseVector out = project_discrete(phi, 1);
        CHECK(std::arg(out.phi(0)) == doctest::Approx(M_PI).epsilon(1e-12));
    }
    SUBCASE("projection error is at most half the grid spacing") {
        Rng rng(808);
        for (int bits = 1; bits <= 4; ++bits) {
            PassivePhaseVector phi;
            phi.phi = random_unit_modulus(32, rng);
            const PassivePhaseVector out = project_discrete(phi, bits);
            CHECK(out.modulus_error() < 1e-12);
            for (arma::uword i = 0; i < 32; ++i)
                CHECK(circular_distance(std::arg(phi.phi(i)), std::arg(out.phi(i))) <=
                      M_PI / std::pow(2.0, bits) + 1e-12);
        }
    }
}

TEST_SUITE_END();
