#include "l2w/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace l2w {

namespace {

// ceil/floor that treat values within 1e-9 of an integer as that integer.
long snap(double x) { return std::lround(x); }
bool near_int(double x) { return std::abs(x - std::round(x)) < 1e-9; }

std::size_t smallest_at_least(double x) { return static_cast<std::size_t>(near_int(x) ? snap(x) : std::ceil(x)); }
std::size_t smallest_above(double x) { return static_cast<std::size_t>(near_int(x) ? snap(x) + 1 : std::floor(x) + 1); }

}  // namespace

LocalizerParams choose_S(const WeightSequence& w, double epsilon, std::size_t scan_cap, std::optional<unsigned> M) {
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("choose_S: epsilon must lie in (0, 1)");
    LocalizerParams p;
    p.epsilon = epsilon;
    p.j_first = std::max<std::size_t>(1, smallest_at_least(1.0 / epsilon));
    const std::size_t S_min = smallest_above(2.0 / epsilon);
    const double need = 1.0 / epsilon;
    double L = 0;
    std::size_t S = p.j_first;
    for (;; ++S) {
        if (S > scan_cap || (w.last_index() && S > *w.last_index()))
            throw PremiseError("divergence hypothesis (sum 1/lambda_n = infinity)",
                               "partial sum from j=" + std::to_string(p.j_first) + " reached only " + std::to_string(L) +
                                   " < 1/eps = " + std::to_string(need) + " by n=" + std::to_string(S - 1));
        L += 1.0 / w(S);
        if (S >= S_min && L >= need * (1 - 1e-12)) break;
    }
    p.S = S;
    p.j_last = S;
    p.L_value = L;
    if (M) {
        p.M = *M;
    } else {
        std::size_t cap = std::max<std::size_t>(4096, 4 * S);
        if (w.last_index()) cap = std::min(cap, *w.last_index());
        const auto reg = estimate_M(w, std::max<std::size_t>(cap, 2));
        if (!reg.M_est) throw PremiseError("polynomial growth of lambda", reg.diagnostic);
        p.M = *reg.M_est + 2;
    }
    return p;
}

std::vector<BlockShape> default_ladder() {
    std::vector<BlockShape> out;
    const double plateau[][2] = {{0.85, 10}, {0.5, 10}, {0.3, 10}, {0.2, 10}, {0.1, 10}, {0.1, 8}, {0.1, 6}};
    for (auto [w, e] : plateau) {
        BlockShape s;
        s.width_ratio = w;
        s.edge_ratio = e;
        out.push_back(s);
    }
    for (double m : {30.0, 60.0, 120.0}) {
        BlockShape s;
        s.profile = BlockProfile::fejer_peak;
        s.peak_degree_ratio = m;
        out.push_back(s);
    }
    return out;
}

double tail_energy_lower_bound(const WeightSequence& w, std::size_t D) {
    const auto lam = w.values(D);
    double s = 0;
    for (std::size_t n = D; n >= 1; --n) s += 2.0 / lam[n];
    return s > 0 ? 1.0 / s : 0.0;
}

CoeffVector assemble_localizer(const WeightSequence& w, const LocalizerParams& p, const BlockShape& shape0,
                               std::size_t max_degree) {
    BlockShape shape = shape0;
    if (shape.profile == BlockProfile::plateau) shape.min_width = shape.edge_ratio * 7.5 / static_cast<double>(max_degree - 1);
    const std::size_t count = p.j_last - p.j_first + 1;
    std::vector<Block> blocks(count);
    std::vector<std::string> errors(count);
    const long long cnt = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) if (default_exec() == Exec::parallel)
    for (long long i = 0; i < cnt; ++i) {
        const double eta = 1.0 / static_cast<double>(p.j_first + static_cast<std::size_t>(i));
        try {
            blocks[i] = make_block(std::min(eta, 0.5), p.M, static_cast<unsigned>(p.S), max_degree, shape);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < count; ++i)
        if (!errors[i].empty()) throw std::domain_error("block j=" + std::to_string(p.j_first + i) + ": " + errors[i]);

    std::size_t D = 0;
    for (auto& b : blocks) D = std::max(D, b.poly.degree());
    // Weighted sum in fixed j order; psi^(0) is set to 1 separately, so it is exact.
    std::vector<double> acc(D + 1, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double wj = 1.0 / (p.L_value * w(p.j_first + i));
        const auto& g = blocks[i].poly;
        for (std::size_t n = 1; n <= g.degree(); ++n) acc[n] += wj * g[static_cast<long>(n)].real();
    }
    CoeffVector psi(D);
    psi.at(0) = 1.0;
    for (std::size_t n = 1; n <= D; ++n) {
        psi.at(static_cast<long>(n)) = -acc[n];
        psi.at(-static_cast<long>(n)) = -acc[n];
    }
    return psi;
}

std::vector<std::string> LocalizerReport::failures() const {
    std::vector<std::string> f;
    if (!pass_range) f.push_back("range (i): 0 <= psi <= 1+eps");
    if (!pass_arc) f.push_back("deleted arc (ii): |psi| <= tau_supp near 0");
    if (!pass_mean) f.push_back("mean (iii): psi^(0) = 1");
    if (!pass_coeff) f.push_back("coefficient sup (iv): |psi^(n)| <= eps");
    if (!pass_decay) f.push_back("decay (iv): fitted slope <= -M + 0.5");
    if (!pass_tail) f.push_back("weighted tail (v): sum |psi^(n)|^2 lambda_n <= eps^2");
    return f;
}

LocalizerReport verify_localizer(const CoeffVector& psi, double epsilon, unsigned M, std::size_t G, const WeightSequence& w,
                                 const Tolerances& tol) {
    LocalizerReport r;
    r.epsilon = epsilon;
    const std::size_t D = psi.degree();
    const auto g = idft(psi, G);
    r.grid_min = g.min_real();
    r.grid_max = g.max_real();
    r.pass_range = r.grid_min >= -tol.floor && r.grid_max <= 1.0 + epsilon + tol.floor;

    r.arc_half_points = flat_half_width(g, 0.0, tol.support);
    if (r.arc_half_points >= 0) {
        const long k = r.arc_half_points;
        r.arc_length = 2.0 * static_cast<double>(k + 1) / static_cast<double>(G);
        for (long i = -k; i <= k; ++i) r.arc_residual = std::max(r.arc_residual, std::abs(g[static_cast<std::size_t>((i + static_cast<long>(G)) % static_cast<long>(G))]));
        r.pass_arc = true;
    }

    r.mean = psi[0].real();
    r.pass_mean = psi[0] == Complex{1.0};

    double top_abs = 0;
    for (std::size_t n = 1; n <= D; ++n) {
        const long k = static_cast<long>(n);
        r.coeff_sup = std::max({r.coeff_sup, std::abs(psi[k]), std::abs(psi[-k])});
    }
    r.pass_coeff = r.coeff_sup <= epsilon + tol.floor;

    // Decay: least-squares slope of log(running max from the right) over the top octave.
    top_abs = r.coeff_sup;
    std::size_t ntop = 0;
    for (std::size_t n = D; n >= 1; --n)
        if (std::abs(psi[static_cast<long>(n)]) > 1e-13 * std::max(top_abs, 1e-300)) {
            ntop = n;
            break;
        }
    r.decay_top = ntop;
    if (ntop >= 16) {
        std::vector<double> env(ntop + 1, 0.0);
        double run = 0;
        for (std::size_t n = ntop; n >= 1; --n) {
            run = std::max(run, std::abs(psi[static_cast<long>(n)]));
            env[n] = run;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
        for (std::size_t n = ntop / 2; n <= ntop; ++n) {
            if (env[n] <= 0) continue;
            const double x = std::log(static_cast<double>(n)), y = std::log(env[n]);
            sx += x, sy += y, sxx += x * x, sxy += x * y, cnt += 1;
        }
        r.decay_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        r.pass_decay = r.decay_slope <= -static_cast<double>(M) + 0.5;
    } else {
        r.pass_decay = true;  // too few modes to fit; bounded support is trivially fast decay
    }

    r.weighted_tail = weighted_norm_nonzero(psi, w).partial_sums.back();
    r.pass_tail = r.weighted_tail <= epsilon * epsilon;
    return r;
}

LocalizerReport verify_localizer(const Localizer& l, const WeightSequence& w, const Tolerances& tol) {
    return verify_localizer(l.psi, l.requested_eps, l.params.M, l.grid, w, tol);
}

Localizer build_localizer(const WeightSequence& w, double epsilon, std::size_t G, const LocalizerOptions& opts) {
    if (!is_pow2(G)) throw std::invalid_argument("localizer: grid size must be a power of two");
    std::size_t D = G / 2 - 1;
    if (opts.max_degree) D = std::min(D, *opts.max_degree);
    const auto ladder = opts.ladder.empty() ? default_ladder() : opts.ladder;

    // Premise failures (divergence, polynomial growth) take precedence over resolution limits.
    choose_S(w, epsilon, opts.scan_cap, opts.M);
    const double lb = tail_energy_lower_bound(w, D);
    if (epsilon * epsilon < lb)
        throw LocalizerError("weighted tail (v) unattainable at degree " + std::to_string(D) + ": any psi with psi(0)=0, mean 1 has tail >= " +
                                 std::to_string(lb) + " > eps^2 = " + std::to_string(epsilon * epsilon),
                             std::nullopt);

    std::optional<LocalizerReport> best;
    std::string last_reason = "no ladder level built";
    for (unsigned h = 0; h <= opts.max_halvings; ++h) {
        const double eps_w = epsilon / std::pow(2.0, h);
        const auto params = choose_S(w, eps_w, opts.scan_cap, opts.M);
        if (2 * params.S > D) {
            last_reason = "resolution: S=" + std::to_string(params.S) + " blocks need degree > " + std::to_string(D);
            break;
        }
        for (std::size_t lvl = 0; lvl < ladder.size(); ++lvl) {
            CoeffVector psi;
            try {
                psi = assemble_localizer(w, params, ladder[lvl], D);
            } catch (const std::domain_error& e) {
                last_reason = e.what();
                continue;
            }
            auto rep = verify_localizer(psi, epsilon, params.M, G, w, opts.tol);
            if (rep.all_pass()) {
                Localizer l;
                l.params = params;
                l.requested_eps = epsilon;
                l.halvings = h;
                l.ladder_level = lvl;
                l.shape = ladder[lvl];
                l.grid = G;
                l.psi = std::move(psi);
                l.report = rep;
                return l;
            }
            if (!best || rep.weighted_tail < best->weighted_tail) best = rep;
            last_reason = rep.failures().front();
        }
    }
    throw LocalizerError("localizer for eps=" + std::to_string(epsilon) + " not found within " + std::to_string(opts.max_halvings) +
                             " halvings: " + last_reason,
                         best);
}

}  // namespace l2w
