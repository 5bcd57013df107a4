#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "l2w/io.hpp"
#include "l2w/thresholds.hpp"
#include "oracles.hpp"

using namespace l2w;

TEST_CASE("T0 from the Fejer mean of exp(i cos)") {
    const auto r = build_T0(64);
    CHECK(r.N0 == 64);
    CHECK(r.retries == 0);
    CHECK(r.T0.degree() == 64);
    CHECK(r.T0.is_conjugate_symmetric(1e-14));
    CHECK(r.sup <= 1.0 + 1e-12);
    CHECK(r.l2 >= 0.5);

    // Independent: the coefficients of cos(cos t) are real Bessel values i^n J_n(1) folded onto the real part.
    for (long n = -8; n <= 8; ++n) {
        const double fej = 1.0 - static_cast<double>(std::abs(n)) / 65.0;
        const double bessel = std::cyl_bessel_j(static_cast<double>(std::abs(n)), 1.0);
        const double re = (std::abs(n) % 2 == 0) ? ((std::abs(n) / 2) % 2 ? -bessel : bessel) : 0.0;
        CHECK(std::abs(r.T0[n] - Complex{fej * re * r.scale}) < 1e-12);
    }
    CHECK_THROWS_AS(build_T0(2), std::invalid_argument);
}

TEST_CASE("gap selection") {
    const auto w = power_weight(2.0);
    const std::size_t N0 = 4;
    const auto g = select_gaps(w, 3, N0);
    // Direct scan: smallest n above the previous gap plus 2 N0 with lambda_n >= (j+1)^4.
    std::vector<std::size_t> want;
    std::size_t prev = 0;
    for (std::size_t j = 1; j <= 3; ++j) {
        std::size_t n = std::max(j == 1 ? 0 : prev + 2 * N0, 2 * N0) + 1;
        while (std::pow(1.0 + static_cast<double>(n), 2) < std::pow(static_cast<double>(j + 1), 4)) ++n;
        want.push_back(n);
        prev = n;
    }
    CHECK(g == want);
    CHECK(g == std::vector<std::size_t>{9, 18, 27});

    CHECK_THROWS_AS(select_gaps(constant_weight(), 3, N0, 1000), PremiseError);
    const auto lin = select_gaps(power_weight(1.0), 20, 64);
    for (std::size_t j = 0; j < lin.size(); ++j) {
        CHECK(static_cast<double>(lin[j] + 1) >= std::pow(static_cast<double>(j + 2), 4));
        if (j) CHECK(lin[j] - lin[j - 1] >= 128);
    }
}

TEST_CASE("divergent continuous witness") {
    const auto w = power_weight(1.0);
    const auto one = build_divergent_continuous(w, 1, 64);
    REQUIRE(one.weighted_partial_sums.size() == 1);
    // Block energy: lambda_{n_1}^{-1} sum_m |T0(m)|^2 lambda_{n_1 + m}.
    const std::size_t n1 = one.gaps[0];
    double e = 0;
    for (long m = -64; m <= 64; ++m)
        e += std::norm(one.t0.T0[m]) * (1.0 + static_cast<double>(n1) + static_cast<double>(m)) / (1.0 + static_cast<double>(n1));
    CHECK(one.weighted_partial_sums[0] == doctest::Approx(e).epsilon(1e-12));
    CHECK(one.weighted_partial_sums[0] >= 0.25);

    const auto r = build_divergent_continuous(w, 20, 64);
    CHECK(r.disjoint);
    REQUIRE(r.weighted_partial_sums.size() == 20);
    for (std::size_t j = 0; j < 20; ++j) CHECK(r.weighted_partial_sums[j] >= static_cast<double>(j + 1) / 4.0);
    CHECK(r.sup_f <= r.mtest_partial_sums.back() + 1e-12);
    CHECK(r.sup_f > 0);
    // Supports of the blocks do not meet.
    for (std::size_t j = 1; j < 20; ++j) CHECK(r.gaps[j] - 64 > r.gaps[j - 1] + 64);
    double mt = 0;
    for (auto n : r.gaps) mt += 1.0 / std::sqrt(1.0 + static_cast<double>(n));
    CHECK(r.mtest_partial_sums.back() == doctest::Approx(mt).epsilon(1e-12));
    CHECK(r.mtest_last_quarter == doctest::Approx(r.mtest_partial_sums[19] - r.mtest_partial_sums[14]).epsilon(1e-12));
    // Direct sup of the assembled polynomial on a coarse subgrid never exceeds the reported grid sup.
    for (std::size_t i = 0; i < 64; ++i) {
        const double t = kTwoPi * static_cast<double>(i * (r.grid / 64)) / static_cast<double>(r.grid);
        CHECK(std::abs(oracle::eval(r.partial_f, t)) <= r.sup_f + 1e-9);
    }
}

TEST_CASE("Phi functions") {
    const auto id = phi_builtin("identity");
    CHECK(id(0.25) == 0.25);
    CHECK_THROWS_AS(id(1e-320), std::underflow_error);
    CHECK(phi_builtin("power:2")(0.5) == doctest::Approx(0.25));
    CHECK(phi_builtin("xlog")(1.0) == doctest::Approx(1.0 / std::log(std::exp(1.0) + 1.0)));
    CHECK_THROWS_AS(phi_builtin("nope"), std::invalid_argument);
    CHECK_THROWS_AS(phi_builtin("power:-1"), std::invalid_argument);

    const auto p = std::filesystem::temp_directory_path() / "l2w_phi_table.csv";
    io::write_atomic(p, "x,phi\n1e-6,1e-12\n1,1\n");
    const auto t = phi_from_table(p);
    CHECK(t(1e-3) == doctest::Approx(1e-6).epsilon(1e-9));
    std::filesystem::remove(p);
}

TEST_CASE("iistrong weights for identity Phi") {
    const auto s = build_iistrong_weights(phi_builtin("identity"), default_eps_schedule(4), 4);
    CHECK(s.N == std::vector<std::size_t>{1, 9, 137, 2185, 34953});
    // N_{k+1} - N_k = 2^(4k+3) and lambda_{N_k} = 4^(2k+1) for eps_k = 2^-k, k from 0.
    for (std::size_t k = 0; k < s.N.size(); ++k) {
        if (k) CHECK(s.N[k] - s.N[k - 1] == (std::size_t{1} << (4 * (k - 1) + 3)));
        CHECK(s.lambda(s.N[k]) == std::ldexp(1.0, static_cast<int>(4 * k + 2)));
    }
    CHECK(s.lambda(1) == 4.0);
    CHECK(s.increasing);
    CHECK(s.knots_exact);
    CHECK(s.gap_condition);
    CHECK(s.max_second_difference < 1e-15);
    for (double b : s.stage_block_sums) CHECK(b >= 0.5);
    for (std::size_t n = 1; n + 1 < 3000; ++n) CHECK(s.lambda(n) <= s.lambda(n + 1));

    // Affine in 1/lambda between knots.
    const double a = iistrong_inverse_lambda(s.eps, s.N, 137), b = iistrong_inverse_lambda(s.eps, s.N, 2185);
    CHECK(iistrong_inverse_lambda(s.eps, s.N, 1161) == doctest::Approx((a + b) / 2).epsilon(1e-14));

    const auto tail = iistrong_tail_sup_check(s, 50, 1);
    CHECK(tail.passes);
    CHECK(tail.violations == 0);
    CHECK(tail.checks > 0);
    CHECK(tail.max_ratio <= 1.0);
}

TEST_CASE("iistrong stretch and validation") {
    const auto a = build_iistrong_weights(phi_builtin("identity"), default_eps_schedule(3), 3, 2);
    CHECK(a.N == std::vector<std::size_t>{1, 17, 273, 4369});
    CHECK(a.stretch == 2);
    CHECK_THROWS_AS(build_iistrong_weights(phi_builtin("identity"), default_eps_schedule(2), 3), std::invalid_argument);
    CHECK_THROWS_AS(build_iistrong_weights(phi_builtin("identity"), {1.0, 1.0, 0.5}, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_iistrong_weights(phi_builtin("identity"), default_eps_schedule(2), 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_iistrong_weights(phi_builtin("power:400"), default_eps_schedule(4), 4), std::underflow_error);
    CHECK_THROWS_AS(build_iistrong_weights(phi_builtin("power:100"), default_eps_schedule(4), 4), std::overflow_error);
}

TEST_CASE("hypothesis test") {
    const std::size_t G = 1024;
    const auto c = km_hypothesis_test(CoeffVector::constant(1.0), 4, 0.5, 0.1, G, 1e-7);
    CHECK(c.cond1_value == 1.0);
    CHECK(c.cond2_value == 0.0);
    CHECK(c.cond2_vacuous);
    CHECK(c.pass1);
    CHECK(c.pass2);
    CHECK(c.support_gap == 0.0);

    // 0.5 + 0.5 cos vanishes only at pi, one grid step from the nearest support point.
    CoeffVector s(1);
    s.at(0) = 0.5;
    s.at(1) = s.at(-1) = 0.25;
    const auto r = km_hypothesis_test(s, 0, 0.3, 0.3, G, 1e-7);
    CHECK(r.cond1_value == 0.25);
    CHECK_FALSE(r.pass1);
    CHECK(r.cond2_value == 0.25);
    CHECK(r.pass2);
    CHECK(r.support_gap == doctest::Approx(1.0 / G));

    const auto z = km_hypothesis_test(CoeffVector(2), 1, 0.1, 0.1, G, 1e-7);
    CHECK(z.support_empty);
    CHECK(z.support_gap == 0.5);
}
