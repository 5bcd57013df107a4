#include "l2w/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "l2w/baire.hpp"
#include "l2w/blocks.hpp"
#include "l2w/compact_set.hpp"
#include "l2w/fourier.hpp"
#include "l2w/io.hpp"
#include "l2w/localizer.hpp"
#include "l2w/sidon.hpp"
#include "l2w/thresholds.hpp"
#include "l2w/weights.hpp"

namespace l2w::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

struct Globals {
    std::string out_dir;
    std::uint64_t seed = 0;
    bool parallel = false;
    Tolerances tol;
};

// Result of one subcommand: the JSON report plus any failed checks.
struct Outcome {
    std::string name;  // report file stem
    json config = json::object();
    json report = json::object();
    json failures = json::array();
    std::vector<std::string> files;

    void fail(const std::string& check, const std::string& hypothesis, const std::string& detail) {
        failures.push_back({{"check", check}, {"hypothesis", hypothesis}, {"detail", detail}});
    }
    void expect(bool ok, const std::string& check, const std::string& hypothesis, const std::string& detail) {
        if (!ok) fail(check, hypothesis, detail);
    }
};

std::string num(double v) { return io::format_double(v); }

json tolerances_json(const Tolerances& t) {
    return {{"flat", t.flat},       {"floor", t.floor},   {"support", t.support}, {"fft_roundtrip", t.fft_roundtrip},
            {"mean", t.mean},       {"budget", t.budget}, {"sym", t.sym}};
}

void write_json(const fs::path& p, const json& j) { io::write_atomic(p, j.dump(2) + "\n"); }

// Two-column gnuplot data.
void write_dat(const fs::path& p, const std::string& header, const std::vector<std::pair<double, double>>& rows) {
    std::string s = "# " + header + "\n";
    for (const auto& [x, y] : rows) s += num(x) + " " + num(y) + "\n";
    io::write_atomic(p, s);
}

struct WeightOpts {
    double gamma = 0.5;
    std::string file;
};

void add_weight_options(CLI::App* app, WeightOpts& w, double default_gamma) {
    w.gamma = default_gamma;
    app->add_option("--gamma", w.gamma, "exponent of the power weight (1+n)^gamma")->capture_default_str();
    app->add_option("--weights", w.file, "CSV `n,value` weight table (overrides --gamma)");
}

WeightSequence make_weight(const WeightOpts& w) { return w.file.empty() ? power_weight(w.gamma) : load_weights_csv(w.file); }

json weight_config(const WeightOpts& w) {
    if (!w.file.empty()) return {{"weights_file", w.file}};
    return {{"gamma", w.gamma}};
}

json arcs_json(const CompactSet& s) {
    json a = json::array();
    for (const auto& [b, e] : s.index_pairs()) a.push_back({b, e});
    return a;
}

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> out;
    std::string tok;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(line);
        while (ls >> tok) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw std::invalid_argument("not an integer: '" + tok + "'");
            out.push_back(v);
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// ---------------------------------------------------------------- weights

void weights_check(const Globals& g, Outcome& o, const WeightOpts& wo, std::size_t cap, std::optional<unsigned> M_opt,
                   double target) {
    o.name = "weights";
    o.config = weight_config(wo);
    o.config["cap"] = cap;
    o.config["target"] = target;
    const auto w = make_weight(wo);

    const auto dbl = doubling_constant(w, cap);
    json d = {{"C_est", dbl.C_est}, {"range_checked", dbl.range_checked}, {"violations", dbl.violations.size()}};
    if (wo.file.empty()) {
        const double bound = std::pow(2.0, std::abs(wo.gamma));
        d["bound"] = bound;
        o.expect(dbl.C_est <= bound + 1e-12, "doubling_constant", "doubling condition lambda_k ~ lambda_n for n <= k <= 2n",
                 "C_est " + num(dbl.C_est) + " > 2^|gamma| + 1e-12");
    }
    o.report["doubling"] = d;

    const auto reg = estimate_M(w, cap);
    o.report["M_est"] = reg.M_est ? json(*reg.M_est) : json(nullptr);
    if (!reg.M_est) {
        o.fail("estimate_M", "polynomial growth of lambda (lambda_n (1+n)^-M non-increasing)", reg.diagnostic);
    } else {
        const unsigned M = M_opt.value_or(*reg.M_est + 1);
        o.config["M"] = M;
        const auto lem = verify_lemma_double(w, M, cap);
        o.report["lemma"] = {{"M", lem.M},
                             {"cap", lem.cap},
                             {"tail_end", lem.tail_end},
                             {"K_b", lem.K_b},
                             {"argmax_b", lem.argmax_b},
                             {"K_c", lem.K_c},
                             {"argmax_c", lem.argmax_c},
                             {"tail_truncation_bound", lem.tail_truncation_bound},
                             {"counterexamples_b", lem.counterexamples_b},
                             {"counterexamples_c", lem.counterexamples_c},
                             {"passes", lem.passes}};
        o.expect(lem.passes, "verify_lemma_double", "regularity sums bounded by n^M/lambda_n and 1/(n^M lambda_n)",
                 "K_b " + num(lem.K_b) + ", K_c " + num(lem.K_c));
    }

    const auto div = check_divergence(w, target, cap);
    o.report["divergence"] = {{"target", div.target},
                              {"N_hit", div.N_hit ? json(*div.N_hit) : json(nullptr)},
                              {"partial_sum_at_cap", div.partial_sum_at_cap},
                              {"cap", div.cap},
                              {"witnessed", div.N_hit.has_value()}};

    std::vector<std::pair<double, double>> rows;
    const auto lam = w.values(cap);
    for (std::size_t n = 0; n <= cap; ++n) rows.emplace_back(static_cast<double>(n), lam[n]);
    write_dat(fs::path(g.out_dir) / "weights.dat", "n lambda_n", rows);
    o.files.push_back("weights.dat");
}

// ---------------------------------------------------------------- block

void block_build(const Globals& g, Outcome& o, double eta, unsigned M, unsigned S, std::size_t G, const std::string& profile,
                 double delta_min) {
    o.name = "block";
    o.config = {{"eta", eta}, {"M", M}, {"S", S}, {"grid", G}, {"profile", profile}, {"delta_min", delta_min}};
    BlockShape shape;
    if (profile == "fejer") shape.profile = BlockProfile::fejer_peak;
    else if (profile != "plateau") throw std::invalid_argument("--profile must be plateau or fejer");

    BlockReport rep;
    std::optional<Block> b;
    try {
        b = build_block(eta, M, S, G, shape, g.tol, delta_min);
        rep = verify_block(*b, g.tol.flat, g.tol.floor, delta_min);
    } catch (const BlockConstructionError& e) {
        rep = e.report;
        o.fail("verify_block", "block contract (mean zero, flat near 0, floor >= -1/S)", e.what());
    }
    o.report = {{"flat_radius", rep.flat_radius_meas}, {"floor", rep.floor_meas}, {"floor_bound", -1.0 / S},
                {"top", rep.top_meas},                 {"A_meas", rep.A_meas},    {"mean_zero", rep.mean_zero},
                {"grid", rep.grid},                    {"accepted", rep.accepted}, {"reasons", rep.reasons}};
    if (b) {
        o.report["degree"] = b->poly.degree();
        o.report["rho"] = b->rho;
        o.report["a"] = b->a;
        o.report["mean"] = b->poly[0].real();
        write_coeff_csv(fs::path(g.out_dir) / "block_coeffs.csv", b->poly);
        o.files.push_back("block_coeffs.csv");
        const auto gr = idft(b->poly, rep.grid ? rep.grid : G);
        std::vector<std::pair<double, double>> rows;
        const std::size_t step = std::max<std::size_t>(1, gr.size() / 4096);
        for (std::size_t k = 0; k < gr.size(); k += step)
            rows.emplace_back(static_cast<double>(k) / static_cast<double>(gr.size()), gr[k].real());
        write_dat(fs::path(g.out_dir) / "block.dat", "turns g", rows);
        o.files.push_back("block.dat");
        o.expect(rep.accepted, "verify_block", "block contract (mean zero, flat near 0, floor >= -1/S)",
                 rep.reasons.empty() ? "" : rep.reasons.front());
    }
}

// ---------------------------------------------------------------- localizer

json localizer_report_json(const LocalizerReport& r) {
    return {{"epsilon", r.epsilon},         {"grid_min", r.grid_min},     {"grid_max", r.grid_max},
            {"arc_half_points", r.arc_half_points}, {"arc_length", r.arc_length}, {"arc_residual", r.arc_residual},
            {"mean", r.mean},               {"coeff_sup", r.coeff_sup},   {"decay_slope", r.decay_slope},
            {"decay_top", r.decay_top},     {"weighted_tail", r.weighted_tail},
            {"pass", {{"range", r.pass_range}, {"arc", r.pass_arc}, {"mean", r.pass_mean}, {"coeff", r.pass_coeff},
                      {"decay", r.pass_decay}, {"tail", r.pass_tail}}}};
}

void localizer_build(const Globals& g, Outcome& o, const WeightOpts& wo, double eps, std::size_t G,
                     std::optional<std::size_t> max_degree, std::optional<unsigned> M) {
    o.name = "localizer";
    o.config = weight_config(wo);
    o.config["eps"] = eps;
    o.config["grid"] = G;
    if (max_degree) o.config["max_degree"] = *max_degree;
    const auto w = make_weight(wo);
    LocalizerOptions lo;
    lo.tol = g.tol;
    lo.max_degree = max_degree;
    lo.M = M;
    try {
        const auto loc = build_localizer(w, eps, G, lo);
        o.report = {{"params", {{"epsilon", loc.params.epsilon}, {"M", loc.params.M}, {"S", loc.params.S},
                                {"L_value", loc.params.L_value}, {"j_first", loc.params.j_first}, {"j_last", loc.params.j_last}}},
                    {"halvings", loc.halvings},
                    {"ladder_level", loc.ladder_level},
                    {"degree", loc.psi.degree()},
                    {"report", localizer_report_json(loc.report)}};
        for (const auto& f : loc.report.failures()) o.fail(f, "localizer properties", f);
        write_coeff_csv(fs::path(g.out_dir) / "psi.csv", loc.psi);
        o.files.push_back("psi.csv");
        const auto gr = idft(loc.psi, G);
        std::vector<std::pair<double, double>> rows;
        const std::size_t step = std::max<std::size_t>(1, G / 4096);
        for (std::size_t k = 0; k < G; k += step) rows.emplace_back(static_cast<double>(k) / static_cast<double>(G), gr[k].real());
        write_dat(fs::path(g.out_dir) / "psi.dat", "turns psi", rows);
        o.files.push_back("psi.dat");
    } catch (const LocalizerError& e) {
        if (e.best_report) o.report["best_report"] = localizer_report_json(*e.best_report);
        o.fail("build_localizer", "localizer properties at the working grid", e.what());
    }
}

// ---------------------------------------------------------------- baire

void baire_run(const Globals& g, Outcome& o, const WeightOpts& wo, std::size_t steps, std::size_t G, double geom,
               double eps_init, double delta, const std::string& input, std::size_t N_work) {
    o.name = "baire";
    o.config = weight_config(wo);
    o.config["steps"] = steps;
    o.config["grid"] = G;
    o.config["budget_geom"] = geom;
    o.config["eps_init"] = eps_init;
    o.config["delta"] = delta;
    if (!input.empty()) o.config["input"] = input;
    if (!(geom > 0 && geom < 1)) throw std::invalid_argument("--budget-geom must lie in (0, 1)");
    if (steps == 0) throw std::invalid_argument("--steps must be positive");
    if (!is_pow2(G)) throw std::invalid_argument("--grid must be a power of two");

    const auto w = make_weight(wo);
    const CoeffVector f0 = input.empty() ? CoeffVector::constant(1.0) : read_coeff_csv(input);
    std::vector<double> budgets;
    for (std::size_t k = 1; k <= steps; ++k) budgets.push_back(std::pow(geom, static_cast<double>(k)));
    const auto points = equally_spaced_points(steps, G);

    BaireOptions bo;
    bo.eps_init = eps_init;
    bo.delta = delta;
    bo.tol = g.tol;
    bo.N_work = N_work;
    const double initial_mean = prepare(f0, delta, bo.K_fejer)[0].real();
    const auto res = run_baire(f0, CompactSet::full(G), points, budgets, w, G, bo);
    const auto chk = check_baire(res, initial_mean, steps, budgets, G, g.tol);

    json trace = json::array();
    for (const auto& s : res.trace.steps)
        trace.push_back({{"point", s.point},
                         {"epsilon", s.epsilon},
                         {"d_increment", s.d_increment},
                         {"hausdorff_increment", s.hausdorff_increment},
                         {"norm_increment", s.norm_increment},
                         {"truncation_energy", s.truncation_energy},
                         {"deleted_arc", {s.deleted.start, s.deleted.end(G)}},
                         {"psi_degree", s.psi_degree},
                         {"f_degree", s.f_degree},
                         {"ladder_level", s.ladder_level},
                         {"mean_before", s.mean_before},
                         {"mean_after", s.mean_after},
                         {"f_min", s.f_min},
                         {"f_max", s.f_max},
                         {"support_ok", s.support_ok}});
    json tj = {{"grid", G}, {"points", points}, {"budgets", budgets}, {"steps", trace}};
    if (res.failure) tj["failure"] = {{"step", res.failure->step + 1}, {"reason", res.failure->reason}, {"attempts", res.failure->attempts}};
    write_json(fs::path(g.out_dir) / "trace.json", tj);
    write_coeff_csv(fs::path(g.out_dir) / "f_final.csv", res.state.f);
    write_json(fs::path(g.out_dir) / "support.json", arcs_json(numerical_support(res.state.f, G, g.tol.support)));
    std::vector<std::pair<double, double>> inc;
    for (std::size_t k = 0; k < res.trace.steps.size(); ++k)
        inc.emplace_back(static_cast<double>(k + 1), res.trace.steps[k].d_increment);
    write_dat(fs::path(g.out_dir) / "increments.dat", "step d_increment", inc);
    o.files.insert(o.files.end(), {"trace.json", "f_final.csv", "support.json", "increments.dat"});

    o.report = {{"steps_planned", chk.steps_planned}, {"steps_done", chk.steps_done},
                {"complete", chk.complete},           {"support_avoids_arcs", chk.support_avoids_arcs},
                {"mean_initial", initial_mean},       {"mean_final", res.state.f[0].real()},
                {"mean_drift", chk.mean_drift},       {"total_distance", chk.total_distance},
                {"budget_sum", chk.budget_sum},       {"nested", chk.nested},
                {"final_set", arcs_json(res.state.E)}};
    if (res.failure)
        o.fail("run_baire", "per-step budget d_lambda increment <= 2^-k (localizer tail <= eps^2)", res.failure->reason);
    o.expect(chk.support_avoids_arcs, "support", "numerical support avoids the deleted arcs",
             "tau_supp " + num(g.tol.support));
    o.expect(chk.mean_ok, "mean", "mean preservation f^(0)", "drift " + num(chk.mean_drift) + " > " + num(g.tol.mean));
    o.expect(chk.within_budget, "budget", "total distance <= sum of budgets",
             num(chk.total_distance) + " > " + num(chk.budget_sum));
    o.expect(chk.nested, "nested", "E_k nested and supp f_k inside E_k", "");
}

// ---------------------------------------------------------------- appendix

void appendix_divergence(const Globals& g, Outcome& o, const WeightOpts& wo, std::size_t J, std::size_t K, double mtest_tol,
                         bool write_coeffs) {
    o.name = "appendix";
    o.config = weight_config(wo);
    o.config["blocks"] = J;
    o.config["K"] = K;
    o.config["mtest_tol"] = mtest_tol;
    if (J == 0) throw std::invalid_argument("--blocks must be positive");
    const auto w = make_weight(wo);
    const auto r = build_divergent_continuous(w, J, K);

    o.report = {{"T0", {{"N0", r.t0.N0}, {"grid", r.t0.grid}, {"sup", r.t0.sup}, {"l2", r.t0.l2}, {"scale", r.t0.scale},
                        {"retries", r.t0.retries}}},
                {"gaps", r.gaps},
                {"gap_rule", "lambda_{n_j} >= (j+1)^4"},
                {"disjoint", r.disjoint},
                {"weighted_partial_sums", r.weighted_partial_sums},
                {"mtest_partial_sums", r.mtest_partial_sums},
                {"mtest_last_quarter", r.mtest_last_quarter},
                {"sup_f", r.sup_f},
                {"sup_grid", r.grid}};
    o.expect(r.t0.sup <= 1.0, "T0_sup", "||T0||_inf <= 1", num(r.t0.sup));
    o.expect(r.t0.l2 >= 0.5, "T0_l2", "||T0||_2 >= 1/2", num(r.t0.l2));
    for (std::size_t j = 0; j < J; ++j)
        o.expect(r.weighted_partial_sums[j] >= static_cast<double>(j + 1) / 4.0 - 1e-9, "energy_block_" + std::to_string(j + 1),
                 "weighted energy >= J'/4 per block", num(r.weighted_partial_sums[j]));
    o.expect(r.sup_f <= r.mtest_partial_sums.back() + g.tol.floor, "sup_bound", "sup |f_J| <= sum 1/sqrt(lambda_{n_j})",
             num(r.sup_f));
    o.expect(r.mtest_last_quarter <= mtest_tol, "mtest_cauchy", "M-test partial sums Cauchy over the last quarter",
             "spread " + num(r.mtest_last_quarter) + " > " + num(mtest_tol));

    std::vector<std::pair<double, double>> rows;
    for (std::size_t j = 0; j < J; ++j) rows.emplace_back(static_cast<double>(j + 1), r.weighted_partial_sums[j]);
    write_dat(fs::path(g.out_dir) / "energy.dat", "J weighted_partial_sum", rows);
    o.files.push_back("energy.dat");
    if (write_coeffs) {
        write_coeff_csv(fs::path(g.out_dir) / "partial_f.csv", r.partial_f);
        o.files.push_back("partial_f.csv");
    }
}

// ---------------------------------------------------------------- iistrong

void iistrong_build(const Globals& g, Outcome& o, const std::string& phi_spec, const std::string& phi_table, std::size_t K,
                    std::size_t stretch, const std::string& eps_list, std::size_t samples) {
    o.name = "iistrong";
    o.config = {{"phi", phi_table.empty() ? phi_spec : phi_table}, {"stages", K}, {"stretch", stretch}, {"samples", samples},
                {"seed", g.seed}};
    const PhiFunction phi = phi_table.empty() ? phi_builtin(phi_spec) : phi_from_table(phi_table);
    const auto eps = eps_list.empty() ? default_eps_schedule(K) : parse_double_list(eps_list);
    o.config["eps"] = eps;
    const auto s = build_iistrong_weights(phi, eps, K, stretch);

    json knots = json::array();
    std::string csv = "k,N_k,eps_k,lambda_N_k\n";
    for (std::size_t k = 0; k < s.N.size(); ++k) {
        const double lam = s.lambda(s.N[k]);
        knots.push_back({{"k", k + 1}, {"N", s.N[k]}, {"eps", s.eps[k]}, {"lambda", lam}});
        csv += std::to_string(k + 1) + "," + std::to_string(s.N[k]) + "," + num(s.eps[k]) + "," + num(lam) + "\n";
    }
    io::write_atomic(fs::path(g.out_dir) / "knots.csv", csv);
    std::vector<std::pair<double, double>> rows;
    for (std::size_t k = 0; k + 1 < s.N.size(); ++k)
        for (std::size_t i = 0; i < 16; ++i) {
            const std::size_t n = s.N[k] + (s.N[k + 1] - s.N[k]) * i / 16;
            rows.emplace_back(static_cast<double>(n), 1.0 / s.lambda(n));
        }
    rows.emplace_back(static_cast<double>(s.N.back()), 1.0 / s.lambda(s.N.back()));
    write_dat(fs::path(g.out_dir) / "inverse_lambda.dat", "n 1/lambda_n", rows);
    o.files.insert(o.files.end(), {"knots.csv", "inverse_lambda.dat"});

    const auto tail = iistrong_tail_sup_check(s, samples, g.seed);
    o.report = {{"phi", s.phi.name},
                {"knots", knots},
                {"increasing", s.increasing},
                {"knots_exact", s.knots_exact},
                {"gap_condition", s.gap_condition},
                {"stage_block_sums", s.stage_block_sums},
                {"max_second_difference", s.max_second_difference},
                {"tail_sup", {{"samples", tail.samples}, {"checks", tail.checks}, {"violations", tail.violations},
                              {"max_ratio", tail.max_ratio}}}};
    o.expect(s.increasing, "increasing", "lambda increasing", "");
    o.expect(s.knots_exact, "knots", "lambda_{N_k} = 2^{2k}/eps_k^2", "");
    o.expect(s.gap_condition, "gap", "(N_{k+1}-N_k) Phi(eps_k^2 2^{-2k-1}) >= 1", "");
    for (std::size_t k = 0; k < s.stage_block_sums.size(); ++k)
        o.expect(s.stage_block_sums[k] >= 0.5 - 1e-12, "block_sum_stage_" + std::to_string(k + 1),
                 "stage divergence block sum >= 1/2", num(s.stage_block_sums[k]));
    o.expect(s.max_second_difference <= 1e-14, "affine", "1/lambda affine within stages", num(s.max_second_difference));
    if (samples) o.expect(tail.passes, "tail_sup", "sup_{|n|>N_{k+1}} |S(n)| <= lambda_{N_{k+1}}^{-1/2}", num(tail.max_ratio));
}

// ---------------------------------------------------------------- km

void km_test(const Globals& g, Outcome& o, const std::string& input, std::size_t N, double gamma, double eps, std::size_t G,
             std::optional<double> tau) {
    o.name = "km";
    o.config = {{"input", input}, {"n", N}, {"gamma", gamma}, {"eps", eps}};
    const auto S = read_coeff_csv(input);
    if (G == 0) G = std::max<std::size_t>(4096, grid_for_degree(S.degree()));
    o.config["grid"] = G;
    const double t = tau.value_or(g.tol.support);
    o.config["tau_supp"] = t;
    const auto r = km_hypothesis_test(S, N, gamma, eps, G, t);
    o.report = {{"cond1_value", r.cond1_value}, {"cond2_value", r.cond2_value}, {"cond2_vacuous", r.cond2_vacuous},
                {"support_gap", r.support_gap}, {"support_empty", r.support_empty}, {"pass1", r.pass1},
                {"pass2", r.pass2}};
    o.expect(r.pass1, "cond1", "sum_{|n|<=N} |S(n)|^2 >= gamma", num(r.cond1_value));
    o.expect(r.pass2, "cond2", "sup_{|n|>N} |S(n)| <= eps", num(r.cond2_value));
}

// ---------------------------------------------------------------- sidon

std::vector<long long> gamma_set(const std::string& set, const std::string& file) {
    if (set.empty() == file.empty()) throw std::invalid_argument("give exactly one of --set and --set-file");
    return parse_int_list(set.empty() ? io::read_text(file) : set);
}

void sidon_count(const Globals&, Outcome& o, const std::vector<long long>& G, long long n, double gamma) {
    o.name = "sidon_count";
    o.config = {{"set", G}, {"n", n}, {"gamma", gamma}};
    const auto r = count_representations(n, G, gamma);
    o.report = {{"n", r.n}, {"size", G.size()}, {"count", r.count}, {"patterns", pow3(G.size())}, {"bound", r.bound},
                {"method", G.size() <= kSidonEnumerationCap ? "enumeration" : "meet-in-the-middle"}};
}

void sidon_profile(const Globals& g, Outcome& o, const std::vector<long long>& G, double gamma) {
    o.name = "sidon_profile";
    o.config = {{"set", G}, {"gamma", gamma}};
    const auto p = pisier_profile(G, gamma);
    o.report = {{"size", p.size},         {"sup_count", p.sup_count},     {"argmax", p.argmax},
                {"bound", p.bound},       {"passes", p.passes},           {"total_mass", p.total_mass},
                {"total_exact", p.total_exact}, {"symmetric", p.symmetric}};
    o.expect(p.passes, "pisier_bound", "sup_n R(n, Gamma) <= 3^(gamma |Gamma|)",
             std::to_string(p.sup_count) + " > " + num(p.bound));
    o.expect(p.total_exact, "total_mass", "sum_n R(n) = 3^|Gamma|", std::to_string(p.total_mass));
    o.expect(p.symmetric, "symmetry", "R(n) = R(-n)", "");
    std::vector<std::pair<double, double>> rows;
    for (const auto& [n, c] : representation_distribution(G)) rows.emplace_back(static_cast<double>(n), static_cast<double>(c));
    write_dat(fs::path(g.out_dir) / "sidon_distribution.dat", "n R(n)", rows);
    o.files.push_back("sidon_distribution.dat");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical companion for supports of functions in weighted l2 spaces", "l2w"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    const char* env = std::getenv("L2W_OUTPUT_DIR");
    g.out_dir = env && *env ? env : ".";
    app.add_option("--out", g.out_dir, "output directory (default $L2W_OUTPUT_DIR or .)");
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
    app.add_flag("--parallel", g.parallel, "use the OpenMP kernels");
    app.add_option("--tol-flat", g.tol.flat)->capture_default_str();
    app.add_option("--tol-floor", g.tol.floor)->capture_default_str();
    app.add_option("--tol-support", g.tol.support)->capture_default_str();
    app.add_option("--tol-mean", g.tol.mean)->capture_default_str();
    app.add_option("--tol-budget", g.tol.budget)->capture_default_str();

    Outcome o;
    std::function<void()> action;

    // weights check
    auto* weights = app.add_subcommand("weights", "weight sequence diagnostics")->require_subcommand(1);
    auto* wcheck = weights->add_subcommand("check", "doubling constant, M estimate, regularity sums, divergence");
    WeightOpts w_wo;
    std::size_t w_cap = 10000;
    std::optional<unsigned> w_M;
    double w_target = 10.0;
    add_weight_options(wcheck, w_wo, 0.5);
    wcheck->add_option("--cap", w_cap)->capture_default_str();
    wcheck->add_option("--M", w_M, "regularity exponent (default M_est + 1)");
    wcheck->add_option("--target", w_target, "divergence target for sum 1/lambda_n")->capture_default_str();
    wcheck->callback([&] { action = [&] { weights_check(g, o, w_wo, w_cap, w_M, w_target); }; });

    // block build
    auto* block = app.add_subcommand("block", "building blocks")->require_subcommand(1);
    auto* bbuild = block->add_subcommand("build", "build and verify one block");
    double b_eta = 1.0 / 16;
    unsigned b_M = 2, b_S = 8;
    std::size_t b_G = 8192;
    std::string b_profile = "plateau";
    double b_delta = 0.05;
    bbuild->add_option("--eta", b_eta)->capture_default_str();
    bbuild->add_option("--M", b_M)->capture_default_str();
    bbuild->add_option("--S", b_S)->capture_default_str();
    bbuild->add_option("--grid", b_G)->capture_default_str();
    bbuild->add_option("--profile", b_profile, "plateau or fejer")->capture_default_str();
    bbuild->add_option("--delta-min", b_delta)->capture_default_str();
    bbuild->callback([&] { action = [&] { block_build(g, o, b_eta, b_M, b_S, b_G, b_profile, b_delta); }; });

    // localizer build
    auto* localizer = app.add_subcommand("localizer", "localizers")->require_subcommand(1);
    auto* lbuild = localizer->add_subcommand("build", "build and verify a localizer");
    WeightOpts l_wo;
    double l_eps = 0.1;
    std::size_t l_G = 16384;
    std::optional<std::size_t> l_deg;
    std::optional<unsigned> l_M;
    add_weight_options(lbuild, l_wo, 0.5);
    lbuild->add_option("--eps", l_eps)->capture_default_str();
    lbuild->add_option("--grid", l_G)->capture_default_str();
    lbuild->add_option("--max-degree", l_deg);
    lbuild->add_option("--M", l_M);
    lbuild->callback([&] { action = [&] { localizer_build(g, o, l_wo, l_eps, l_G, l_deg, l_M); }; });

    // baire run
    auto* baire = app.add_subcommand("baire", "iterated deletion")->require_subcommand(1);
    auto* brun = baire->add_subcommand("run", "deletion steps at equally spaced points");
    WeightOpts r_wo;
    std::size_t r_steps = 10, r_G = 16384, r_Nwork = 0;
    double r_geom = 0.5, r_eps = 0.2, r_delta = 0.0;
    std::string r_input;
    add_weight_options(brun, r_wo, 0.5);
    brun->add_option("--steps", r_steps)->capture_default_str();
    brun->add_option("--grid", r_G)->capture_default_str();
    brun->add_option("--budget-geom", r_geom, "budgets r^k, k = 1..steps")->capture_default_str();
    brun->add_option("--eps-init", r_eps)->capture_default_str();
    brun->add_option("--delta", r_delta)->capture_default_str();
    brun->add_option("--input", r_input, "initial coefficients CSV (default constant 1)");
    brun->add_option("--n-work", r_Nwork, "working degree (default grid/4)");
    brun->callback([&] { action = [&] { baire_run(g, o, r_wo, r_steps, r_G, r_geom, r_eps, r_delta, r_input, r_Nwork); }; });

    // appendix divergence
    auto* appendix = app.add_subcommand("appendix", "continuous function with divergent weighted norm")->require_subcommand(1);
    auto* adiv = appendix->add_subcommand("divergence", "build the lacunary block sum");
    WeightOpts a_wo;
    std::size_t a_J = 20, a_K = 64;
    double a_mtol = 1e-6;
    bool a_coeffs = false;
    add_weight_options(adiv, a_wo, 1.0);
    adiv->add_option("--blocks", a_J)->capture_default_str();
    adiv->add_option("--K", a_K, "Fejer degree of T0")->capture_default_str();
    adiv->add_option("--mtest-tol", a_mtol)->capture_default_str();
    adiv->add_flag("--write-coeffs", a_coeffs, "also write partial_f.csv");
    adiv->callback([&] { action = [&] { appendix_divergence(g, o, a_wo, a_J, a_K, a_mtol, a_coeffs); }; });

    // iistrong build
    auto* iistrong = app.add_subcommand("iistrong", "weights defeating a given Phi")->require_subcommand(1);
    auto* ibuild = iistrong->add_subcommand("build", "construct the stage schedule and interpolated weight");
    std::string i_phi = "identity", i_table, i_eps;
    std::size_t i_K = 6, i_stretch = 1, i_samples = 50;
    ibuild->add_option("--phi", i_phi, "identity, power:<p> or xlog")->capture_default_str();
    ibuild->add_option("--phi-table", i_table, "CSV `x,phi` table");
    ibuild->add_option("--stages", i_K)->capture_default_str();
    ibuild->add_option("--stretch", i_stretch)->capture_default_str();
    ibuild->add_option("--eps", i_eps, "comma-separated schedule eps_1 > ... > eps_{K+1}");
    ibuild->add_option("--samples", i_samples, "random unit-ball vectors for the tail-sup check")->capture_default_str();
    ibuild->callback([&] { action = [&] { iistrong_build(g, o, i_phi, i_table, i_K, i_stretch, i_eps, i_samples); }; });

    // km test
    auto* km = app.add_subcommand("km", "support-density hypotheses")->require_subcommand(1);
    auto* ktest = km->add_subcommand("test", "evaluate both conditions and the support gap");
    std::string k_input;
    std::size_t k_N = 0, k_G = 0;
    double k_gamma = 0, k_eps = 0;
    std::optional<double> k_tau;
    ktest->add_option("--input", k_input)->required();
    ktest->add_option("--n", k_N)->required();
    ktest->add_option("--gamma", k_gamma)->required();
    ktest->add_option("--eps", k_eps)->required();
    ktest->add_option("--grid", k_G, "default: fits the input degree, at least 4096");
    ktest->add_option("--tau", k_tau, "support threshold (default --tol-support)");
    ktest->callback([&] { action = [&] { km_test(g, o, k_input, k_N, k_gamma, k_eps, k_G, k_tau); }; });

    // sidon
    auto* sidon = app.add_subcommand("sidon", "representation counts")->require_subcommand(1);
    auto* scount = sidon->add_subcommand("count", "R(n, Gamma)");
    auto* sprof = sidon->add_subcommand("profile", "sup_n R(n, Gamma) against 3^(gamma |Gamma|)");
    std::string s_set, s_file;
    long long s_n = 0;
    double s_gamma = 0;
    for (auto* sc : {scount, sprof}) {
        sc->add_option("--set", s_set, "comma-separated elements");
        sc->add_option("--set-file", s_file, "file of integers");
    }
    scount->add_option("--n", s_n)->required();
    scount->add_option("--gamma", s_gamma)->capture_default_str();
    sprof->add_option("--gamma", s_gamma)->required();
    scount->callback([&] { action = [&] { sidon_count(g, o, gamma_set(s_set, s_file), s_n, s_gamma); }; });
    sprof->callback([&] { action = [&] { sidon_profile(g, o, gamma_set(s_set, s_file), s_gamma); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (!action) return 2;

    set_default_exec(g.parallel ? Exec::parallel : Exec::serial);

    int code = 0;
    json status;
    auto report_error = [&](int c, const std::string& kind, const std::string& msg, const std::string& premise = {}) {
        code = c;
        status = {{"error", kind}, {"detail", msg}};
        if (!premise.empty()) status["premise"] = premise;
        err << "l2w: " << (premise.empty() ? kind : "premise failed (" + premise + ")") << ": " << msg << "\n";
    };
    try {
        fs::create_directories(g.out_dir);
        action();
    } catch (const PremiseError& e) {
        report_error(1, "premise", e.what(), e.premise());
    } catch (const VerificationError& e) {
        report_error(1, "verification", e.what());
    } catch (const std::domain_error& e) {
        report_error(1, "verification", e.what());
    } catch (const std::out_of_range& e) {
        report_error(1, "premise", e.what(), "weight sequence defined on the scanned range");
    } catch (const std::underflow_error& e) {
        report_error(1, "verification", e.what(), "Phi evaluated above 1e-300");
    } catch (const std::invalid_argument& e) {
        report_error(2, "usage", e.what());
    } catch (const std::length_error& e) {
        report_error(2, "usage", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        report_error(1, "io", e.what());
    } catch (const std::exception& e) {
        report_error(1, "failure", e.what());
    }
    if (code == 2) return 2;

    if (code == 0 && !o.failures.empty()) {
        code = 1;
        for (const auto& f : o.failures)
            err << "l2w: check '" << f["check"].get<std::string>() << "' failed (" << f["hypothesis"].get<std::string>()
                << "): " << f["detail"].get<std::string>() << "\n";
    }
    const std::string stem = o.name.empty() ? "report" : o.name;
    json report = {{"subcommand", stem}, {"passed", code == 0}, {"config", o.config}, {"results", o.report}, {"failures", o.failures}};
    if (!status.is_null()) report["status"] = status;

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    json manifest = {{"tool", "l2w"},
                     {"version", kVersion},
                     {"arguments", args},
                     {"subcommand", stem},
                     {"config", o.config},
                     {"seed", g.seed},
                     {"parallel", g.parallel},
                     {"tolerances", tolerances_json(g.tol)},
                     {"files", o.files},
                     {"report", stem + ".json"},
                     {"exit_code", code}};
    try {
        write_json(fs::path(g.out_dir) / (stem + ".json"), report);
        write_json(fs::path(g.out_dir) / "manifest.json", manifest);
    } catch (const std::exception& e) {
        err << "l2w: io: " << e.what() << "\n";
        return 1;
    }
    out << report.dump(2) << "\n";
    return code;
}

}  // namespace l2w::cli
