// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "l2w/baire.hpp"
#include "l2w/blocks.hpp"
#include "l2w/fourier.hpp"
#include "l2w/kernels.hpp"
#include "l2w/localizer.hpp"
#include "l2w/sidon.hpp"
#include "l2w/thresholds.hpp"
#include "l2w/weights.hpp"

using namespace l2w;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

CoeffVector random_poly(std::size_t N, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CoeffVector c(N);
    for (long n = -static_cast<long>(N); n <= static_cast<long>(N); ++n) c.at(n) = Complex{g(rng), g(rng)};
    return c;
}

double rel_diff(const CoeffVector& a, const CoeffVector& b) {
    double num = 0, den = 0;
    const long N = static_cast<long>(std::max(a.degree(), b.degree()));
    for (long n = -N; n <= N; ++n) {
        num = std::max(num, std::abs(a[n] - b[n]));
        den = std::max(den, std::abs(b[n]));
    }
    return den > 0 ? num / den : num;
}

void fourier(Verdict& v) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    double worst = 0;
    for (std::size_t G = 4; G <= (1u << 14); G *= 2) {
        // Arbitrary samples through the raw transform pair.
        std::vector<Complex> x(G), y;
        for (auto& s : x) s = Complex{g(rng), g(rng)};
        y = x;
        kernels::fft(y, -1, Exec::serial);
        kernels::fft(y, +1, Exec::serial);
        double num = 0, den = 0;
        for (std::size_t k = 0; k < G; ++k) {
            num = std::max(num, std::abs(y[k] / static_cast<double>(G) - x[k]));
            den = std::max(den, std::abs(x[k]));
        }
        worst = std::max(worst, num / den);
        // Band-limited samples through dft/idft.
        const auto c = random_poly(G / 2 - 1, rng);
        worst = std::max(worst, rel_diff(dft(idft(c, G)), c));
    }
    v.detail << "roundtrip max rel " << worst;
    v.require(worst <= 1e-10, "roundtrip <= 1e-10");

    double conv = 0;
    std::uniform_int_distribution<std::size_t> deg(0, 64);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_poly(deg(rng), rng), b = random_poly(deg(rng), rng);
        conv = std::max(conv, rel_diff(pointwise_product(a, b), grid_product(a, b)));
    }
    v.detail << "; convolution vs grid max rel " << conv;
    v.require(conv <= 1e-10, "convolution <= 1e-10");
}

void weights(Verdict& v) {
    for (double gm : {0.25, 0.5, 1.0}) {
        const auto w = power_weight(gm);
        const std::size_t cap = 100000;
        const double C = doubling_constant(w, cap).C_est;
        const auto M = estimate_M(w, cap).M_est;
        const unsigned Mt = M.value_or(0) + 1;
        const auto a = verify_lemma_double(w, Mt, cap), b = verify_lemma_double(w, Mt, 2 * cap);
        const bool stable = std::abs(a.K_b - b.K_b) <= 0.01 * a.K_b && std::abs(a.K_c - b.K_c) <= 0.01 * a.K_c;
        v.detail << "gamma " << gm << ": C " << C << " M " << M.value_or(0) << " K_b " << a.K_b << " K_c " << a.K_c << "; ";
        v.require(C <= std::pow(2.0, gm) + 1e-12, "doubling constant");
        v.require(M && *M == 1, "M_est = 1");
        v.require(a.passes && std::isfinite(a.K_b) && std::isfinite(a.K_c) && stable, "lemma constants finite and stable");
    }
}

void blocks(Verdict& v) {
    const double etas[] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    double A[3][3][3];
    double worst_ratio = 1;
    for (int i = 0; i < 3; ++i)
        for (unsigned M = 1; M <= 3; ++M)
            for (int s = 0; s < 3; ++s) {
                const unsigned S = 4u << s;
                Block b;
                try {
                    b = build_block(etas[i], M, S, 8192);
                } catch (const std::exception& e) {
                    v.require(false, std::string("build ") + e.what());
                    continue;
                }
                const auto r = verify_block(b, 1e-6, 1e-9);
                v.require(b.poly[0] == Complex{0.0}, "mean zero");
                v.require(r.floor_meas >= -1.0 / S - 1e-9, "floor");
                v.require(r.flat_radius_meas > 0, "flat radius");
                v.require(std::isfinite(r.A_meas), "finite A");
                A[i][M - 1][s] = r.A_meas;
            }
    for (int i = 0; i + 1 < 3; ++i)
        for (int m = 0; m < 3; ++m)
            for (int s = 0; s < 3; ++s) {
                const double q = A[i + 1][m][s] / A[i][m][s];
                worst_ratio = std::max({worst_ratio, q, 1 / q});
            }
    v.detail << "27 blocks at G=8192, worst A ratio under eta halving " << worst_ratio;
    v.require(worst_ratio <= 4.0, "A stable within x4");
}

void localizer(Verdict& v) {
    const auto w = power_weight(0.5);
    double prev = 1.0;
    for (double eps : {0.4, 0.2, 0.1}) {
        Localizer l;
        try {
            l = build_localizer(w, eps, 16384);
        } catch (const std::exception& e) {
            v.require(false, std::string("eps ") + std::to_string(eps) + ": " + e.what());
            continue;
        }
        const auto& r = l.report;
        v.detail << "eps " << eps << ": tail " << r.weighted_tail << " arc " << r.arc_length << " min " << r.grid_min << " max "
                 << r.grid_max << "; ";
        v.require(l.psi[0] == Complex{1.0}, "mean exactly 1");
        v.require(r.grid_min >= -1e-9, "grid min");
        v.require(r.grid_max <= 1 + eps + 1e-9, "grid max");
        v.require(r.arc_half_points >= 0 && r.arc_residual <= 1e-7, "arc residual");
        v.require(r.weighted_tail <= eps * eps, "weighted tail");
        v.require(r.coeff_sup <= eps + 1e-9, "coefficient sup");
        v.require(r.all_pass(), "all properties");
        v.require(r.arc_length < prev, "arcs strictly decrease");
        prev = r.arc_length;
    }
}

void baire(Verdict& v) {
    const std::size_t G = 16384, K = 10;
    const auto w = power_weight(0.5);
    std::vector<double> budgets;
    for (std::size_t k = 1; k <= K; ++k) budgets.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    const auto r = run_baire(CoeffVector::constant(1.0), CompactSet::full(G), equally_spaced_points(K, G), budgets, w, G);
    const auto c = check_baire(r, 1.0, K, budgets, G);
    v.detail << "steps " << c.steps_done << "/" << K << " distance " << c.total_distance << " budget " << c.budget_sum
             << " mean drift " << c.mean_drift;
    if (r.failure)
        v.detail << "; stopped at step " << r.failure->step + 1 << ", increment floor at localizer degree " << G / 4 << " is "
                 << std::sqrt(tail_energy_lower_bound(w, G / 4)) << " vs budget " << budgets[r.failure->step];
    v.require(c.complete, "all 10 steps");
    v.require(c.support_avoids_arcs, "support avoids arcs");
    v.require(c.mean_ok, "mean to 1e-9");
    v.require(c.within_budget, "distance within budgets");
    v.require(c.nested, "nested");
}

void appendix(Verdict& v) {
    const auto r = build_divergent_continuous(power_weight(1.0), 20, 64);
    double worst = 1e300;
    for (std::size_t j = 0; j < r.weighted_partial_sums.size(); ++j)
        worst = std::min(worst, r.weighted_partial_sums[j] - static_cast<double>(j + 1) / 4.0);
    v.detail << "min energy margin " << worst << " M-test spread " << r.mtest_last_quarter << " T0 sup " << r.t0.sup << " l2 "
             << r.t0.l2;
    v.require(worst >= -1e-9, "energy >= J'/4");
    v.require(r.mtest_last_quarter <= 1e-6, "M-test Cauchy <= 1e-6");
    v.require(r.t0.sup <= 1.0 && r.t0.l2 >= 0.5, "T0 norms");
}

void iistrong(Verdict& v) {
    const auto s = build_iistrong_weights(phi_builtin("identity"), default_eps_schedule(6), 6);
    double min_block = 1e300;
    for (double b : s.stage_block_sums) min_block = std::min(min_block, b);
    const auto t = iistrong_tail_sup_check(s, 50, 1);
    v.detail << "N_7 " << s.N.back() << " min block " << min_block << " second diff " << s.max_second_difference << " tail checks "
             << t.checks << " violations " << t.violations;
    v.require(s.increasing, "increasing");
    v.require(s.knots_exact, "knots exact");
    v.require(min_block >= 0.5 - 1e-12, "block sums");
    v.require(s.max_second_difference <= 1e-14, "second differences");
    v.require(t.passes, "tail sup");
}

void sidon(Verdict& v) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long long> pick(1, 200);
    std::size_t compared = 0;
    for (std::size_t k = 1; k <= 12; ++k)
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<long long> g;
            while (g.size() < k) {
                const long long x = pick(rng);
                if (std::find(g.begin(), g.end(), x) == g.end()) g.push_back(x);
            }
            const auto dist = representation_distribution(g);
            std::uint64_t mass = 0;
            for (const auto& [n, c] : dist) mass += c;
            v.require(mass == pow3(k), "total mass");
            for (std::size_t i = 0; i < dist.size(); i += std::max<std::size_t>(1, dist.size() / 20)) {
                const long long n = dist[i].first;
                v.require(count_by_enumeration(n, g) == count_by_meet_in_middle(n, g), "methods agree");
                v.require(count_by_enumeration(n, g) == dist[i].second, "distribution agrees");
                ++compared;
            }
        }
    std::vector<long long> lac, iv;
    for (int i = 0; i <= 10; ++i) lac.push_back(1LL << i);
    for (long long i = 1; i <= 12; ++i) iv.push_back(i);
    const auto a = pisier_profile(lac, 0.5), b = pisier_profile(iv, 0.5);
    v.detail << compared << " counts compared; lacunary sup " << a.sup_count << " <= " << a.bound << ", interval sup " << b.sup_count
             << " > " << b.bound;
    v.require(a.passes && !b.passes, "profile separation");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<void(Verdict&)> run;
    };
    const std::vector<Criterion> all = {
        {"1 fourier core", 10, fourier}, {"2 weights", 5, weights},        {"3 blocks", 60, blocks},
        {"4 localizer", 120, localizer}, {"5 baire", 600, baire},          {"6 appendix", 30, appendix},
        {"7 iistrong", 10, iistrong},    {"8 sidon", 30, sidon},
    };
    int failed = 0;
    for (const auto& c : all) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        v.require(s < c.budget_s, "runtime");
        std::printf("%s %s (%.2f s < %.0f s): %s\n", v.pass ? "PASS" : "FAIL", c.name, s, c.budget_s, v.detail.str().c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed ? 1 : 0;
}
