#include <doctest.h>

#include <cmath>
#include <random>

#include "l2w/baire.hpp"
#include "oracles.hpp"

using namespace l2w;

namespace {

CompactSet points(std::size_t G, std::initializer_list<std::size_t> idx) {
    std::vector<std::uint8_t> m(G, 0);
    for (auto i : idx) m[i] = 1;
    return CompactSet::from_mask(m);
}

// Brute-force Hausdorff sum on the half-grid of a mask pair.
double hausdorff_oracle(const CompactSet& E, const CompactSet& K) {
    const std::size_t G = E.grid();
    const auto me = E.mask(), mk = K.mask();
    auto dist = [&](double x, const std::vector<std::uint8_t>& m) {
        double d = 1.0;
        for (std::size_t j = 0; j < G; ++j)
            if (m[j]) {
                double t = std::abs(x - static_cast<double>(j)) / static_cast<double>(G);
                d = std::min(d, std::min(t, 1.0 - t));
            }
        return d;
    };
    // Sample points of a set: its grid points and half-grid points between adjacent members.
    auto excess = [&](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
        double e = 0;
        for (std::size_t j = 0; j < G; ++j) {
            if (!a[j]) continue;
            e = std::max(e, dist(static_cast<double>(j), b));
            if (a[(j + 1) % G]) e = std::max(e, dist(static_cast<double>(j) + 0.5, b));
        }
        return e;
    };
    return excess(me, mk) + excess(mk, me);
}

}  // namespace

TEST_CASE("hausdorff distance examples") {
    const std::size_t G = 64;
    const auto full = CompactSet::full(G);
    CHECK(hausdorff_distance(full, full) == 0.0);
    CHECK(hausdorff_distance(points(G, {0}), points(G, {32})) == doctest::Approx(1.0));
    CHECK(hausdorff_distance(points(G, {0}), points(G, {0, 16})) == doctest::Approx(0.25));
    CHECK(excess(points(G, {0}), points(G, {0, 16})) == 0.0);
    CHECK(hausdorff_distance(full, points(G, {0})) == doctest::Approx(0.5));
    CHECK_THROWS_AS(hausdorff_distance(CompactSet::empty(G), full), std::invalid_argument);

    std::mt19937_64 rng(7);
    std::bernoulli_distribution coin(0.2);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::uint8_t> a(G), b(G);
        for (std::size_t i = 0; i < G; ++i) a[i] = coin(rng), b[i] = coin(rng);
        a[rng() % G] = 1;
        b[rng() % G] = 1;
        const auto E = CompactSet::from_mask(a), K = CompactSet::from_mask(b);
        CHECK(hausdorff_distance(E, K) == doctest::Approx(hausdorff_oracle(E, K)).epsilon(1e-12));
        CHECK(hausdorff_distance(E, K) == hausdorff_distance(K, E));
    }
}

TEST_CASE("pair metric") {
    const std::size_t G = 256;
    const auto w = power_weight(0.5);
    CoeffVector f(2);
    f.at(0) = 1.0;
    f.at(1) = f.at(-1) = 0.25;
    const auto p = make_pair_state(f, CompactSet::full(G), G);
    CHECK(pair_metric(p, p, w) == 0.0);

    CoeffVector g(1);
    g.at(1) = g.at(-1) = 0.5;
    const auto q = make_pair_state(g, CompactSet::full(G), G);
    const auto r = make_pair_state(CoeffVector(0), CompactSet::full(G), G);
    CHECK(pair_metric(q, r, w) == doctest::Approx(std::sqrt(0.25 * std::sqrt(2.0) * 2)));

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, G - 1);
    for (int t = 0; t < 30; ++t) {
        std::vector<PairState> s;
        for (int i = 0; i < 3; ++i) {
            auto c = oracle::random_coeffs(6, rng, true);
            std::vector<std::uint8_t> m(G, 0);
            for (int j = 0; j < 5; ++j) m[pick(rng)] = 1;
            s.push_back(make_pair_state(c, CompactSet::from_mask(m), G));
        }
        const double ab = pair_metric(s[0], s[1], w), bc = pair_metric(s[1], s[2], w), ac = pair_metric(s[0], s[2], w);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab == doctest::Approx(pair_metric(s[1], s[0], w)));
    }
}

TEST_CASE("prepare") {
    const auto one = CoeffVector::constant(1.0);
    const auto p = prepare(one, 0.1, 64);
    CHECK(p[0].real() == doctest::Approx(0.95));
    CHECK(p.degree() == 0);

    std::mt19937_64 rng(3);
    auto f = oracle::random_coeffs(200, rng, true);
    const auto q = prepare(f, 0.0, 16);
    CHECK(q.degree() <= 16);
    CHECK(q[0] == f[0]);
    // Fejer means converge in l2 for a fixed polynomial.
    double prev = 1e300;
    for (std::size_t K : {50u, 200u, 2000u, 20000u}) {
        const double e = weighted_norm(prepare(f, 0.0, K) - f, constant_weight()).value;
        CHECK(e < prev);
        prev = e;
    }
    CHECK(prev < 0.01 * weighted_norm(f, constant_weight()).value);
}

TEST_CASE("numerical support") {
    const std::size_t G = 128;
    CHECK(numerical_support(CoeffVector(3), G, 1e-7).is_empty());
    CHECK(numerical_support(CoeffVector::constant(1.0), G, 1e-7).is_full());
    CoeffVector c(1);
    c.at(0) = 0.5;
    c.at(1) = c.at(-1) = 0.25;  // 0.5 + 0.5 cos: zero only at pi
    const auto s = numerical_support(c, G, 1e-7);
    CHECK(s.point_count() == G - 1);
    CHECK_FALSE(s.contains(G / 2));
}

TEST_CASE("deletion steps") {
    const std::size_t G = 4096;
    const auto w = constant_weight();
    const auto zero = make_pair_state(CoeffVector(0), CompactSet::full(G), G);
    const auto [z, zr] = deletion_step(zero, 100, 0.25, w, G);
    CHECK(zr.support_ok);
    CHECK(z.f.effective_degree(0.0) == 0);
    CHECK(zr.norm_increment == 0.0);
    CHECK(zr.deleted.count > 0);
    CHECK_FALSE(z.E.contains(100));

    const auto one = make_pair_state(CoeffVector::constant(1.0), CompactSet::full(G), G);
    const auto [o, orec] = deletion_step(one, 0, 0.25, w, G);
    CHECK(orec.support_ok);
    CHECK(o.f[0].real() == 1.0);
    CHECK(orec.mean_after == 1.0);
    CHECK(o.E.subset_of(one.E));
    for (std::size_t i = 0; i < orec.deleted.count; ++i) {
        const std::size_t x = (orec.deleted.start + i) % G;
        CHECK_FALSE(o.E.contains(x));
        CHECK(std::abs(o.samples[x]) <= 1e-7);
    }
    CHECK(orec.norm_increment <= 0.25 + 1e-12);

    double prev = 1e300;
    for (double eps : {0.4, 0.2, 0.1}) {
        const auto [s, rec] = deletion_step(one, 0, eps, w, G);
        CHECK(rec.norm_increment < prev);
        CHECK(rec.norm_increment <= eps + 1e-12);
        prev = rec.norm_increment;
    }
}

TEST_CASE("run_baire with no points leaves the prepared state") {
    const std::size_t G = 1024;
    const auto r = run_baire(CoeffVector::constant(1.0), CompactSet::full(G), {}, {}, power_weight(0.5), G);
    CHECK_FALSE(r.failure);
    CHECK(r.trace.steps.empty());
    CHECK(r.state.E.is_full());
    CHECK(r.state.f[0] == Complex{1.0});
    const auto c = check_baire(r, 1.0, 0, {}, G);
    CHECK(c.all_pass());
    CHECK_THROWS_AS(run_baire(CoeffVector::constant(1.0), CompactSet::full(G), {1}, {}, power_weight(0.5), G),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_baire(CoeffVector::constant(1.0), CompactSet::full(G), {1}, {0.0}, power_weight(0.5), G),
                    std::invalid_argument);
}

TEST_CASE("ten-step run for lambda = (1+n)^(1/2)") {
    const std::size_t G = 16384, K = 10;
    const auto w = power_weight(0.5);
    std::vector<double> budgets;
    for (std::size_t k = 1; k <= K; ++k) budgets.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    const auto pts = equally_spaced_points(K, G);
    REQUIRE(pts.size() == K);
    for (std::size_t k = 0; k < K; ++k) CHECK(pts[k] == (k * G + K / 2) / K);

    const auto r = run_baire(CoeffVector::constant(1.0), CompactSet::full(G), pts, budgets, w, G);
    // Steps 1-3 fit their budgets; step 4 needs an increment below 1/16, under the Cauchy-Schwarz floor.
    REQUIRE(r.failure);
    CHECK(r.failure->step == 3);
    CHECK(std::sqrt(tail_energy_lower_bound(w, G / 4)) > budgets[3]);
    REQUIRE(r.trace.steps.size() == 3);
    REQUIRE(r.trace.snapshots.size() == 4);

    for (std::size_t k = 0; k < 3; ++k) {
        const auto& s = r.trace.steps[k];
        CHECK(s.d_increment <= budgets[k]);
        CHECK(s.support_ok);
        CHECK(std::abs(s.mean_after - s.mean_before) <= s.norm_increment);
    }
    // Exact for the first step from a constant; later steps drift by the cross term of a non-constant f.
    CHECK(r.trace.steps[0].mean_after == 1.0);
    const auto inc = recompute_increments(r.trace, w);
    REQUIRE(inc.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(inc[k] - r.trace.steps[k].d_increment) <= 1e-10);

    for (std::size_t k = 0; k + 1 < r.trace.snapshots.size(); ++k) {
        const auto& a = r.trace.snapshots[k];
        const auto& b = r.trace.snapshots[k + 1];
        CHECK(b.E.subset_of(a.E));
        // Every deleted point has an open neighborhood outside E_{k+1} and f_{k+1} is negligible there.
        const auto& d = r.trace.steps[k].deleted;
        REQUIRE(d.count >= 1);
        for (std::size_t i = 0; i < d.count; ++i) {
            const std::size_t x = (d.start + i) % G;
            CHECK_FALSE(b.E.contains(x));
            CHECK(std::abs(b.samples[x]) <= 1e-7);
        }
        CHECK(b.E.contains((d.start + G - 1) % G) == a.E.contains((d.start + G - 1) % G));
    }

    const auto c = check_baire(r, 1.0, K, budgets, G);
    CHECK_FALSE(c.complete);
    CHECK(c.steps_done == 3);
    CHECK(c.support_avoids_arcs);
    CHECK(c.mean_drift > 0);
    CHECK(c.mean_drift < 1e-3);
    CHECK(c.nested);
    CHECK(c.within_budget);
    CHECK_FALSE(c.all_pass());
}

TEST_CASE("mean drift of a step equals the cross term") {
    const std::size_t G = 4096;
    const auto w = constant_weight();
    CoeffVector f(2);
    f.at(0) = 1.0;
    f.at(1) = f.at(-1) = 0.2;
    f.at(2) = f.at(-2) = -0.1;
    const auto p = make_pair_state(f, CompactSet::full(G), G);
    LocalizerOptions lo;
    lo.max_degree = 512;
    const auto loc = build_localizer(w, 0.25, G, lo);
    const std::size_t a = 300;
    const auto [q, rec] = apply_localizer(p, a, loc, w, G);
    const auto psi_a = rotate_grid(loc.psi, a, G);
    Complex cross{0.0};
    for (long n = -2; n <= 2; ++n)
        if (n != 0) cross += f[n] * psi_a[-n];
    CHECK(rec.mean_after - rec.mean_before == doctest::Approx(cross.real()).epsilon(1e-9));
    CHECK(std::abs(cross.imag()) < 1e-14);
    CHECK(cross.real() != 0.0);
}
