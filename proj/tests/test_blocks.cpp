#include <doctest.h>

#include <cmath>

#include "l2w/blocks.hpp"
#include "oracles.hpp"

using namespace l2w;

namespace {

Block bare_block(CoeffVector poly, double eta, unsigned M, unsigned S) {
    Block b;
    b.eta = eta;
    b.M = M;
    b.S = S;
    b.poly = std::move(poly);
    b.grid = 64;
    return b;
}

}  // namespace

TEST_CASE("block for eta = 1/16, M = 1, S = 4 on a 4096 grid") {
    const auto b = build_block(1.0 / 16, 1, 4, 4096);
    const auto r = verify_block(b, 1e-6, 1e-9);
    CHECK(r.accepted);
    CHECK(b.poly[0] == Complex{0.0});
    CHECK(b.poly.is_conjugate_symmetric(1e-12));
    CHECK(r.floor_meas >= -0.25 - 1e-9);
    CHECK(r.top_meas <= 1.0 + 1e-6);
    CHECK(r.flat_radius_meas > 0);
    CHECK(std::isfinite(r.A_meas));

    // Independent evaluation of the polynomial on the verification grid.
    const std::size_t G = r.grid;
    double lo = 1e300, hi = -1e300;
    std::vector<double> vals(G);
    for (std::size_t k = 0; k < G; ++k) {
        const Complex v = oracle::eval(b.poly, kTwoPi * static_cast<double>(k) / static_cast<double>(G));
        CHECK(std::abs(v.imag()) < 1e-12);
        vals[k] = v.real();
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
    }
    CHECK(std::abs(lo - r.floor_meas) < 1e-12);
    CHECK(std::abs(hi - r.top_meas) < 1e-12);
    std::size_t k = 0;
    while (k + 1 < G / 2 && std::abs(vals[k + 1] - 1.0) <= 1e-6 && std::abs(vals[G - k - 1] - 1.0) <= 1e-6) ++k;
    CHECK(r.flat_radius_meas == doctest::Approx(kTwoPi * static_cast<double>(k) / static_cast<double>(G)));

    // Envelope constant recomputed from its definition.
    double A = 0;
    for (long n = 1; n <= static_cast<long>(b.poly.degree()); ++n) {
        const double x = b.eta * static_cast<double>(n);
        A = std::max(A, std::abs(b.poly[n]) / (b.eta * std::min(x, 1.0 / x)));
    }
    CHECK(r.A_meas == doctest::Approx(A).epsilon(1e-12));
}

TEST_CASE("verify_block rejects degenerate polynomials") {
    const auto z = verify_block(bare_block(CoeffVector(3), 1.0 / 16, 1, 4), 1e-6, 1e-9);
    CHECK_FALSE(z.accepted);
    CHECK(z.floor_meas == 0.0);
    CHECK(z.flat_radius_meas == 0.0);

    CoeffVector cosine(1);
    cosine.at(1) = cosine.at(-1) = 0.5;
    for (unsigned S : {2u, 4u, 16u}) {
        const auto r = verify_block(bare_block(cosine, 1.0 / 16, 1, S), 1e-6, 1e-9);
        CHECK(r.mean_zero);
        CHECK(r.floor_meas == doctest::Approx(-1.0));
        CHECK_FALSE(r.accepted);
    }
}

TEST_CASE("build_block preconditions") {
    CHECK_THROWS_AS(build_block(0.5, 1, 4, 4096), std::invalid_argument);
    CHECK_THROWS_AS(build_block(0.0, 1, 4, 4096), std::invalid_argument);
    CHECK_THROWS_AS(build_block(1.0 / 16, 1, 4, 512), std::invalid_argument);
    CHECK_THROWS_AS(build_block(1.0 / 16, 1, 4, 3000), std::invalid_argument);
}

TEST_CASE("sweep: contract, envelope, monotonicity in M and stability in eta") {
    const double etas[] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    double A[3][3][3];
    for (int i = 0; i < 3; ++i)
        for (unsigned M = 1; M <= 3; ++M)
            for (int s = 0; s < 3; ++s) {
                const unsigned S = 4u << s;
                const auto b = build_block(etas[i], M, S, 8192);
                const auto r = verify_block(b, 1e-6, 1e-9);
                CAPTURE(etas[i]);
                CAPTURE(M);
                CAPTURE(S);
                REQUIRE(r.accepted);
                CHECK(b.poly[0] == Complex{0.0});
                CHECK(r.floor_meas >= -1.0 / S - 1e-9);
                CHECK(r.flat_radius_meas >= 0.05 * etas[i]);
                CHECK(r.A_meas < 1e6);
                for (long n = 1; n <= static_cast<long>(b.poly.degree()); ++n) {
                    const double x = etas[i] * static_cast<double>(n);
                    const double env = etas[i] * r.A_meas * std::min(std::pow(x, M), std::pow(x, -static_cast<double>(M)));
                    CHECK(std::abs(b.poly[n]) <= env * (1 + 1e-12));
                }
                A[i][M - 1][s] = r.A_meas;
            }
    for (int i = 0; i < 3; ++i)
        for (int s = 0; s < 3; ++s) {
            CHECK(A[i][0][s] <= A[i][1][s]);
            CHECK(A[i][1][s] <= A[i][2][s]);
        }
    for (int i = 0; i + 1 < 3; ++i)
        for (int m = 0; m < 3; ++m)
            for (int s = 0; s < 3; ++s) {
                const double q = A[i + 1][m][s] / A[i][m][s];
                CHECK(q <= 4.0);
                CHECK(q >= 0.25);
            }
}

TEST_CASE("fejer peak profile") {
    BlockShape sh;
    sh.profile = BlockProfile::fejer_peak;
    const auto b = make_block(1.0 / 8, 2, 8, 2000, sh);
    CHECK(b.poly[0] == Complex{0.0});
    const auto r = verify_block(b, 1e-6, 1e-9, 0.0);
    CHECK(r.floor_meas >= -1.0 / 8 - 1e-9);
    CHECK(r.top_meas <= 1.0 + 1e-6);
    CHECK(b.poly.degree() <= 2000);
}

TEST_CASE("flat_half_width") {
    const auto g = GridFunction::from_function(64, [](double t) { return Complex{std::abs(std::sin(t)) < 0.3 ? 1.0 : 0.0}; });
    const long k = flat_half_width(g, 1.0, 1e-9);
    CHECK(k == 3);  // sin(2 pi 4/64) > 0.3 > sin(2 pi 3/64)
    const auto h = GridFunction::from_function(64, [](double) { return Complex{0.0}; });
    CHECK(flat_half_width(h, 1.0, 1e-9) == -1);
}
