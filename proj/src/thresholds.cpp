#include "l2w/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <random>
#include <stdexcept>

#include "l2w/baire.hpp"
#include "l2w/compact_set.hpp"
#include "l2w/io.hpp"

namespace l2w {

T0Result build_T0(std::size_t K, std::size_t G) {
    if (K < 4) throw std::invalid_argument("build_T0: K must be >= 4");
    const auto h = GridFunction::from_function(G, [](double th) { return std::polar(1.0, std::cos(th)); });
    const auto hc = dft(h);
    T0Result r;
    r.grid = G;
    for (unsigned attempt = 0; attempt <= 3; ++attempt, K *= 2) {
        if (2 * K + 2 > G) break;
        CoeffVector t = fejer_mean(hc, K);
        t.symmetrize();  // coefficients of the real part
        const auto tg = idft(t, G);
        const double sup = tg.sup_abs();
        r.scale = 1.0 / std::max(1.0, sup);
        t *= r.scale;
        const auto ts = idft(t, G);
        r.T0 = t;
        r.N0 = K;
        r.sup = ts.sup_abs();
        r.l2 = ts.l2_norm();
        r.retries = attempt;
        if (r.l2 >= 0.5) return r;
    }
    throw VerificationError("build_T0: L2 norm " + std::to_string(r.l2) + " < 1/2 after retries");
}

std::vector<std::size_t> select_gaps(const WeightSequence& w, std::size_t J, std::size_t N0, std::size_t cap) {
    std::vector<std::size_t> gaps;
    std::size_t prev = 0;
    for (std::size_t j = 1; j <= J; ++j) {
        const std::size_t lower = std::max(j == 1 ? 0 : prev + 2 * N0, 2 * N0);
        const double need = std::pow(static_cast<double>(j + 1), 4);
        std::size_t n = lower + 1;
        while (true) {
            if (n > cap || (w.last_index() && n > *w.last_index()))
                throw PremiseError("unboundedness of lambda (lambda_n -> infinity)",
                                   "no n <= " + std::to_string(n - 1) + " with lambda_n >= " + io::format_double(need) +
                                       " for block " + std::to_string(j));
            if (w(n) >= need) break;
            ++n;
        }
        gaps.push_back(n);
        prev = n;
    }
    for (std::size_t j = 1; j < gaps.size(); ++j)
        if (gaps[j] - gaps[j - 1] < 2 * N0) throw std::logic_error("select_gaps: gap constraint violated");
    return gaps;
}

ThresholdWitness build_divergent_continuous(const WeightSequence& w, std::size_t J, std::size_t K, bool evaluate_sup) {
    ThresholdWitness r;
    r.t0 = build_T0(K);
    const std::size_t N0 = r.t0.N0;
    r.gaps = select_gaps(w, J, N0);
    r.disjoint = true;
    for (std::size_t j = 1; j < J; ++j)
        if (r.gaps[j] - N0 <= r.gaps[j - 1] + N0) r.disjoint = false;
    if (!r.disjoint) throw std::logic_error("build_divergent_continuous: block supports overlap");

    const std::size_t D = r.gaps.back() + N0;
    r.partial_f = CoeffVector(D);
    const auto lam = w.values(D);
    const long n0 = static_cast<long>(N0);
    double energy = 0, mtest = 0;
    for (std::size_t j = 0; j < J; ++j) {
        const double c = 1.0 / std::sqrt(lam[r.gaps[j]]);
        const long nj = static_cast<long>(r.gaps[j]);
        double block = 0;
        for (long m = -n0; m <= n0; ++m) {
            const Complex v = c * r.t0.T0[m];
            r.partial_f.at(nj + m) = v;
            block += std::norm(v) * lam[static_cast<std::size_t>(nj + m)];
        }
        energy += block;
        mtest += c;
        r.weighted_partial_sums.push_back(energy);
        r.mtest_partial_sums.push_back(mtest);
    }
    const std::size_t quarter = (J + 3) / 4;
    r.mtest_last_quarter = J > quarter ? mtest - r.mtest_partial_sums[J - quarter - 1] : mtest;
    if (evaluate_sup) {
        r.grid = grid_for_degree(D);
        r.sup_f = idft(r.partial_f, r.grid).sup_abs();
    }
    return r;
}

double PhiFunction::operator()(double x) const {
    const double v = f(x);
    if (!(v >= 1e-300) || !std::isfinite(v))
        throw std::underflow_error("Phi '" + name + "' evaluated to " + io::format_double(v) + " at x=" + io::format_double(x) +
                                   " (below 1e-300)");
    return v;
}

PhiFunction phi_builtin(const std::string& spec) {
    if (spec == "identity") return {"identity", [](double x) { return x; }};
    if (spec == "xlog") return {"x/log(e+1/x)", [](double x) { return x / std::log(std::exp(1.0) + 1.0 / x); }};
    if (spec.rfind("power:", 0) == 0) {
        const double p = std::stod(spec.substr(6));
        if (!(p > 0)) throw std::invalid_argument("Phi power must be positive");
        return {"x^" + io::format_double(p), [p](double x) { return std::pow(x, p); }};
    }
    throw std::invalid_argument("unknown Phi '" + spec + "' (expected identity, power:<p>, xlog)");
}

PhiFunction phi_from_table(const std::filesystem::path& p) {
    std::istringstream in(io::read_text(p));
    std::string line;
    std::getline(in, line);
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = line.find(',');
        if (c == std::string::npos) throw std::runtime_error(p.string() + ": expected x,phi rows");
        const double x = std::stod(line.substr(0, c)), v = std::stod(line.substr(c + 1));
        if (!(x > 0 && v > 0)) throw std::runtime_error(p.string() + ": table values must be positive");
        rows.emplace_back(std::log(x), std::log(v));
    }
    if (rows.size() < 2) throw std::runtime_error(p.string() + ": need at least two rows");
    std::sort(rows.begin(), rows.end());
    return {p.filename().string(), [rows](double x) {
                const double lx = std::log(x);
                std::size_t i = 1;
                while (i + 1 < rows.size() && rows[i].first < lx) ++i;
                const auto [x0, y0] = rows[i - 1];
                const auto [x1, y1] = rows[i];
                return std::exp(y0 + (y1 - y0) * (lx - x0) / (x1 - x0));
            }};
}

namespace {

std::size_t stage_of(const std::vector<std::size_t>& N, std::size_t n) {
    // Largest k with N[k] <= n, clamped to the last full stage.
    const auto it = std::upper_bound(N.begin(), N.end(), n);
    std::size_t k = static_cast<std::size_t>(it - N.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, N.size() - 2);
}

double knot_inverse(const std::vector<double>& eps, std::size_t k) {
    // 1/lambda_{N_k} = eps_k^2 / 4^k, with k counted from 1.
    return eps[k] * eps[k] / std::ldexp(1.0, 2 * static_cast<int>(k + 1));
}

}  // namespace

double iistrong_inverse_lambda(const std::vector<double>& eps, const std::vector<std::size_t>& N, std::size_t n) {
    if (n <= N.front()) return knot_inverse(eps, 0);
    if (n >= N.back()) return knot_inverse(eps, N.size() - 1);
    const std::size_t k = stage_of(N, n);
    const double a = knot_inverse(eps, k), b = knot_inverse(eps, k + 1);
    const double t = static_cast<double>(n - N[k]) / static_cast<double>(N[k + 1] - N[k]);
    return a + (b - a) * t;
}

double iistrong_lambda(const std::vector<double>& eps, const std::vector<std::size_t>& N, std::size_t n) {
    const auto knot = [&](std::size_t k) { return std::ldexp(1.0, 2 * static_cast<int>(k + 1)) / (eps[k] * eps[k]); };
    if (n <= N.front()) return knot(0);
    if (n >= N.back()) return knot(N.size() - 1);
    for (std::size_t k = 0; k < N.size(); ++k)
        if (n == N[k]) return knot(k);
    return 1.0 / iistrong_inverse_lambda(eps, N, n);
}

std::vector<double> default_eps_schedule(std::size_t K_stages) {
    std::vector<double> e;
    for (std::size_t k = 0; k <= K_stages; ++k) e.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    return e;
}

IiStrongSpec build_iistrong_weights(const PhiFunction& phi, const std::vector<double>& eps_schedule, std::size_t K_stages,
                                    std::size_t stretch) {
    if (K_stages < 1) throw std::invalid_argument("iistrong: need at least one stage");
    if (stretch < 1) throw std::invalid_argument("iistrong: stretch must be >= 1");
    if (eps_schedule.size() < K_stages + 1) throw std::invalid_argument("iistrong: eps schedule needs K+1 entries");
    std::vector<double> eps(eps_schedule.begin(), eps_schedule.begin() + static_cast<std::ptrdiff_t>(K_stages + 1));
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0 && eps[k] <= 1)) throw std::invalid_argument("iistrong: eps must lie in (0, 1]");
        if (k && !(eps[k] < eps[k - 1])) throw std::invalid_argument("iistrong: eps schedule must be strictly decreasing");
    }
    IiStrongSpec s{phi, eps, {1}, stretch, constant_weight(1.0), {}, 0, false, false, false};
    s.gap_condition = true;
    for (std::size_t k = 0; k < K_stages; ++k) {
        const double x = eps[k] * eps[k] / std::ldexp(1.0, 2 * static_cast<int>(k + 1) + 1);
        double v;
        try {
            v = phi(x);
        } catch (const std::underflow_error& e) {
            throw std::underflow_error("stage " + std::to_string(k + 1) + ": " + e.what());
        }
        const double gap = std::ceil(1.0 / v);
        if (gap > 1e15) throw std::overflow_error("stage " + std::to_string(k + 1) + ": N gap " + io::format_double(gap) + " too large");
        const std::size_t d = stretch * static_cast<std::size_t>(gap);
        s.N.push_back(s.N.back() + d);
        if (static_cast<double>(d) * v < 1.0) s.gap_condition = false;
    }

    const auto E = s.eps;
    const auto N = s.N;
    s.lambda = WeightSequence("iistrong[" + phi.name + "]", [E, N](std::size_t n) { return iistrong_lambda(E, N, n); });

    s.knots_exact = true;
    for (std::size_t k = 0; k < N.size(); ++k)
        if (s.lambda(N[k]) != std::ldexp(1.0, 2 * static_cast<int>(k + 1)) / (E[k] * E[k])) s.knots_exact = false;

    s.increasing = true;
    double prev = iistrong_lambda(E, N, N.front());
    for (std::size_t n = N.front() + 1; n <= N.back(); ++n) {
        const double cur = iistrong_lambda(E, N, n);
        if (!(cur > prev)) {
            s.increasing = false;
            break;
        }
        prev = cur;
    }

    for (std::size_t k = 0; k + 1 < N.size(); ++k) {
        const std::size_t mid = (N[k] + N[k + 1]) / 2;
        double sum = 0;
        for (std::size_t n = N[k]; n <= mid; ++n) sum += phi(iistrong_inverse_lambda(E, N, n));
        s.stage_block_sums.push_back(sum);
        for (std::size_t n = N[k] + 1; n + 1 <= N[k + 1]; ++n) {
            const double d2 = iistrong_inverse_lambda(E, N, n + 1) - 2 * iistrong_inverse_lambda(E, N, n) +
                              iistrong_inverse_lambda(E, N, n - 1);
            s.max_second_difference = std::max(s.max_second_difference, std::abs(d2));
        }
    }
    return s;
}

TailSupReport iistrong_tail_sup_check(const IiStrongSpec& s, std::size_t samples, std::uint64_t seed, std::size_t support) {
    TailSupReport r;
    r.samples = samples;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    // Log-uniform frequencies so every stage boundary has mass on both sides.
    std::uniform_real_distribution<double> logn(0.0, std::log(2.0 * static_cast<double>(s.N.back()) + 2.0));
    std::bernoulli_distribution neg;
    for (std::size_t t = 0; t < samples; ++t) {
        std::map<long, Complex> c;  // repeated frequencies add up
        double norm2 = 0;
        for (std::size_t i = 0; i < support; ++i) {
            const long n = static_cast<long>(std::floor(std::exp(logn(rng))));
            const Complex v{gauss(rng), gauss(rng)};
            c[neg(rng) ? -n : n] += v;
        }
        for (const auto& [n, v] : c) norm2 += std::norm(v) * iistrong_lambda(s.eps, s.N, static_cast<std::size_t>(std::abs(n)));
        const double scale = 1.0 / std::sqrt(norm2);
        norm2 = 0;
        for (auto& [n, v] : c) {
            v *= scale;
            norm2 += std::norm(v) * iistrong_lambda(s.eps, s.N, static_cast<std::size_t>(std::abs(n)));
        }
        for (std::size_t k = 1; k < s.N.size(); ++k) {
            const double lam = iistrong_lambda(s.eps, s.N, s.N[k]);
            for (const auto& [n, v] : c) {
                if (static_cast<std::size_t>(std::abs(n)) <= s.N[k]) continue;
                ++r.checks;
                if (std::norm(v) * lam > norm2) ++r.violations;
                r.max_ratio = std::max(r.max_ratio, std::abs(v) * std::sqrt(lam / norm2));
            }
        }
    }
    r.passes = r.violations == 0 && r.checks > 0;
    return r;
}

KMTestResult km_hypothesis_test(const CoeffVector& S, std::size_t N, double gamma, double eps, std::size_t G, double tau_supp) {
    KMTestResult r;
    r.N = N;
    r.gamma = gamma;
    r.eps = eps;
    const long D = static_cast<long>(S.degree()), Nl = static_cast<long>(N);
    for (long n = -std::min(D, Nl); n <= std::min(D, Nl); ++n) r.cond1_value += std::norm(S[n]);
    r.cond2_vacuous = S.degree() <= N;
    for (long n = Nl + 1; n <= D; ++n) r.cond2_value = std::max({r.cond2_value, std::abs(S[n]), std::abs(S[-n])});
    r.pass1 = r.cond1_value >= gamma;
    r.pass2 = r.cond2_value <= eps;
    const auto supp = numerical_support(S, G, tau_supp);
    if (supp.is_empty()) {
        r.support_empty = true;
        r.support_gap = 0.5;
    } else {
        r.support_gap = excess(CompactSet::full(G), supp);
    }
    return r;
}

}  // namespace l2w
