// Command-line front end: state checks, family scans, recurrence traces and
// advantage-distillation runs, as JSON or CSV.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "skd/ccq.hpp"
#include "skd/criteria.hpp"
#include "skd/errors.hpp"
#include "skd/recurrence.hpp"
#include "skd/serialize.hpp"
#include "skd/shielded.hpp"

namespace {

using skd::json;

struct GlobalOptions {
    std::string out;
    std::string format;  // "", "json" or "csv"; empty means command default
    std::uint64_t seed = 12345;
    int max_dim = skd::kDefaultMaxDim;
    double tolerance = skd::kStrictTol;
};

// Probe offset for cross-checking a closed-form threshold against the exact
// condition just below and just above it.
constexpr double kThresholdProbe = 1e-3;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw skd::validation_error("cannot open spec file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw skd::validation_error("invalid JSON in '" + path + "': " + e.what());
    }
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::path target(g.out);
    if (target.is_relative()) {
        if (const char* base = std::getenv("SKD_OUT_DIR")) target = std::filesystem::path(base) / target;
    }
    std::ofstream out(target);
    if (!out) throw skd::validation_error("cannot open output file '" + target.string() + "'");
    out << text;
}

std::string bool_cell(bool b) { return b ? "true" : "false"; }

// Grid from either an explicit comma list or min/max/step. Either way the
// result must be nonempty.
std::vector<double> build_grid(const std::string& list, std::optional<double> lo,
                               std::optional<double> hi, std::optional<double> step,
                               const std::string& what) {
    std::vector<double> grid;
    if (!list.empty()) {
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                grid.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw skd::validation_error(what + " list: '" + item + "' is not a number");
            }
        }
    } else if (lo && hi && step) {
        if (*step <= 0.0) throw skd::validation_error(what + " step must be positive");
        for (double x = *lo; x <= *hi + 1e-12; x += *step) grid.push_back(x);
    }
    if (grid.empty()) throw skd::validation_error(what + " grid is empty");
    return grid;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

std::vector<std::string> verdict_cells(const skd::Verdict& v) {
    return {bool_cell(v.entangled),
            skd::fmt_sig(v.entangled_margin),
            bool_cell(v.recurrence_ok),
            skd::fmt_sig(v.recurrence_margin),
            bool_cell(v.ad_ok),
            skd::fmt_sig(v.ad_margin),
            v.ppt_evaluated ? bool_cell(v.ppt) : "skipped",
            v.ppt_evaluated ? skd::fmt_sig(v.ppt_margin) : ""};
}

const std::vector<std::string> kVerdictHeader = {
    "entangled", "entangled_margin", "recurrence_ok", "recurrence_margin",
    "ad_ok",     "ad_margin",        "ppt",           "ppt_margin"};

int run_check(const GlobalOptions& g, const std::string& spec_path) {
    const skd::ShieldedState s = skd::parse_state_spec(load_json_file(spec_path), g.max_dim);
    const skd::KeySpectrum k = skd::key_spectrum(s);
    const skd::Verdict v = skd::full_verdict(s, g.max_dim, g.tolerance);
    if (g.format == "csv") {
        std::vector<std::string> header = {"lambda1", "lambda2", "lambda3", "lambda4"};
        header.insert(header.end(), kVerdictHeader.begin(), kVerdictHeader.end());
        std::vector<std::string> cells;
        for (double l : k.lambda) cells.push_back(skd::fmt_sig(l));
        const auto vc = verdict_cells(v);
        cells.insert(cells.end(), vc.begin(), vc.end());
        emit(g, csv_line(header) + csv_line(cells));
    } else {
        json out{{"spectrum", skd::spectrum_to_json(k)}, {"verdict", skd::verdict_to_json(v)}};
        emit(g, out.dump(2) + "\n");
    }
    return 0;
}

int run_scan_horodecki(const GlobalOptions& g, int d, int l, const std::vector<double>& ps,
                       double eps) {
    for (double p : ps)
        if (p <= 0.0 || p >= 0.5)
            throw skd::validation_error("p grid value " + skd::fmt_sig(p) + " outside (0, 1/2)");
    const skd::HorodeckiThresholds th = skd::thresholds_horodecki(l);
    const double bound = skd::horodecki_ppt_bound(d, l);
    const double eps_star = skd::horodecki_eps_star(l);

    std::vector<std::string> header = {"p"};
    header.insert(header.end(), kVerdictHeader.begin(), kVerdictHeader.end());
    header.insert(header.end(), {"p1", "p2", "ppt_bound", "eps_star"});

    std::string csv = csv_line(header);
    json rows = json::array();
    for (double p : ps) {
        skd::ShieldedState s = skd::horodecki_family(p, d, l, g.max_dim);
        if (eps > 0.0) s = skd::add_white_noise(s, eps);
        const skd::Verdict v = skd::full_verdict(s, g.max_dim, g.tolerance);
        std::vector<std::string> cells = {skd::fmt_sig(p)};
        const auto vc = verdict_cells(v);
        cells.insert(cells.end(), vc.begin(), vc.end());
        cells.insert(cells.end(), {skd::fmt_sig(th.p1), skd::fmt_sig(th.p2), skd::fmt_sig(bound),
                                   skd::fmt_sig(eps_star)});
        csv += csv_line(cells);
        json row = skd::verdict_to_json(v);
        row["p"] = p;
        row["p1"] = th.p1;
        row["p2"] = th.p2;
        row["ppt_bound"] = bound;
        row["eps_star"] = eps_star;
        rows.push_back(std::move(row));
    }
    if (g.format == "json")
        emit(g, json{{"rows", std::move(rows)}}.dump(2) + "\n");
    else
        emit(g, csv);
    return 0;
}

int run_scan_4x4(const GlobalOptions& g, const std::vector<double>& q1s) {
    for (double q1 : q1s)
        if (q1 < 0.0 || q1 > 1.0)
            throw skd::validation_error("q1 grid value " + skd::fmt_sig(q1) + " outside [0, 1]");
    std::vector<std::string> header = {"q1", "q2"};
    header.insert(header.end(), kVerdictHeader.begin(), kVerdictHeader.end());

    std::string csv = csv_line(header);
    json rows = json::array();
    for (double q1 : q1s) {
        const skd::ShieldedState s = skd::example_4x4(q1, 1.0 - q1);
        const skd::Verdict v = skd::full_verdict(s, g.max_dim, g.tolerance);
        std::vector<std::string> cells = {skd::fmt_sig(q1), skd::fmt_sig(1.0 - q1)};
        const auto vc = verdict_cells(v);
        cells.insert(cells.end(), vc.begin(), vc.end());
        csv += csv_line(cells);
        json row = skd::verdict_to_json(v);
        row["q1"] = q1;
        row["q2"] = 1.0 - q1;
        rows.push_back(std::move(row));
    }
    if (g.format == "json")
        emit(g, json{{"rows", std::move(rows)}}.dump(2) + "\n");
    else
        emit(g, csv);
    return 0;
}

int run_recurrence(const GlobalOptions& g, const std::string& spec_path, int rounds) {
    const skd::ShieldedState s = skd::parse_state_spec(load_json_file(spec_path), g.max_dim);
    const skd::RecurrenceTrace trace = skd::iterate(s, rounds, g.max_dim);
    const skd::ShieldNorms norms = skd::shield_norms(s);

    std::string csv =
        csv_line({"round", "effective_m", "r_explicit", "success_prob", "r_closed_form"});
    json rows = json::array();
    for (int i = 0; i < trace.rounds_completed; ++i) {
        const long long m = trace.effective_m[static_cast<size_t>(i)];
        const double closed = skd::closed_form_r(norms, m);
        csv += csv_line({std::to_string(i + 1), std::to_string(m),
                         skd::fmt_sig(trace.r[static_cast<size_t>(i)]),
                         skd::fmt_sig(trace.success_prob[static_cast<size_t>(i)]),
                         skd::fmt_sig(closed)});
        rows.push_back(json{{"round", i + 1},
                            {"effective_m", m},
                            {"r_explicit", trace.r[static_cast<size_t>(i)]},
                            {"success_prob", trace.success_prob[static_cast<size_t>(i)]},
                            {"r_closed_form", closed}});
    }
    if (trace.truncated)
        csv += "# truncated: round " + std::to_string(trace.rounds_completed + 1) +
               " exceeds dimension limit " + std::to_string(g.max_dim) + "\n";
    if (g.format == "json")
        emit(g, json{{"rows", std::move(rows)}, {"truncated", trace.truncated}}.dump(2) + "\n");
    else
        emit(g, csv);
    return 0;
}

int run_noise_scan(const GlobalOptions& g, int l, const std::vector<double>& epss) {
    for (double e : epss)
        if (e < 0.0 || e >= 1.0)
            throw skd::validation_error("eps grid value " + skd::fmt_sig(e) + " outside [0, 1)");
    const double p2 = skd::thresholds_horodecki(l).p2;
    const double eps_star = skd::horodecki_eps_star(l);

    // The closed-form threshold probe and the bisected exact threshold use
    // the d = 2 family; the norms entering both are d-independent.
    const int d = 2;
    std::string csv = csv_line({"eps", "p2", "eps_star", "p_min_formula", "ad_below_formula",
                                "ad_above_formula", "p_min_exact"});
    json rows = json::array();
    for (double eps : epss) {
        const std::optional<double> pf = skd::noise_threshold_horodecki(l, eps);
        const std::optional<double> pe = skd::noise_threshold_bisect(d, l, eps);
        std::string below, above;
        if (pf) {
            const double lo = *pf - kThresholdProbe;
            const double hi = *pf + kThresholdProbe;
            if (lo > 0.0)
                below = bool_cell(
                    skd::ad_condition(skd::add_white_noise(skd::horodecki_family(lo, d, l), eps))
                        .ok);
            if (hi < 0.5)
                above = bool_cell(
                    skd::ad_condition(skd::add_white_noise(skd::horodecki_family(hi, d, l), eps))
                        .ok);
        }
        csv += csv_line({skd::fmt_sig(eps), skd::fmt_sig(p2), skd::fmt_sig(eps_star),
                         pf ? skd::fmt_sig(*pf) : "", below, above,
                         pe ? skd::fmt_sig(*pe) : ""});
        json row{{"eps", eps}, {"p2", p2}, {"eps_star", eps_star}};
        row["p_min_formula"] = pf ? json(*pf) : json(nullptr);
        row["ad_below_formula"] = below.empty() ? json(nullptr) : json(below == "true");
        row["ad_above_formula"] = above.empty() ? json(nullptr) : json(above == "true");
        row["p_min_exact"] = pe ? json(*pe) : json(nullptr);
        rows.push_back(std::move(row));
    }
    if (g.format == "json")
        emit(g, json{{"rows", std::move(rows)}}.dump(2) + "\n");
    else
        emit(g, csv);
    return 0;
}

int run_ad_sim(const GlobalOptions& g, const std::string& spec_path, int block_size,
               long long trials) {
    const skd::ShieldedState s = skd::parse_state_spec(load_json_file(spec_path), g.max_dim);
    const skd::CcqDescriptor c = skd::ccq_from_spectrum(skd::key_spectrum(s));
    const skd::AdBlockStats analytic = skd::ad_block_stats(c, block_size);
    const skd::AdBlockStats empirical = skd::ad_monte_carlo(c, block_size, trials, g.seed);
    const skd::ConditionResult sec = skd::ad_security_check(c, g.tolerance);

    if (g.format == "csv") {
        std::string csv = csv_line({"quantity", "analytic", "empirical", "stderr"});
        csv += csv_line({"accept_prob", skd::fmt_sig(analytic.accept_prob),
                         skd::fmt_sig(empirical.accept_prob), skd::fmt_sig(empirical.accept_stderr)});
        csv += csv_line({"post_error", skd::fmt_sig(analytic.post_error),
                         skd::fmt_sig(empirical.post_error), skd::fmt_sig(empirical.error_stderr)});
        csv += csv_line({"eve_overlap_effective", skd::fmt_sig(analytic.eve_overlap_effective),
                         "", ""});
        csv += csv_line({"security_margin", skd::fmt_sig(sec.margin), "", ""});
        emit(g, csv);
    } else {
        json out{{"ccq", skd::ccq_to_json(c)},
                 {"analytic", skd::ad_stats_to_json(analytic)},
                 {"empirical", skd::ad_stats_to_json(empirical)},
                 {"security", json{{"ok", sec.ok}, {"margin", sec.margin}}},
                 {"seed", g.seed}};
        emit(g, out.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distillability laboratory for shielded two-qubit states"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--out", g.out, "Write output to this file instead of stdout");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "Seed for stochastic commands");
    app.add_option("--max-dim", g.max_dim, "Largest matrix dimension to materialize")
        ->check(CLI::PositiveNumber);
    app.add_option("--tolerance", g.tolerance, "Margin for strict inequalities")
        ->check(CLI::PositiveNumber);

    std::string spec_path;
    int d = 2, l = 1, rounds = 1, block_size = 2;
    long long trials = 100000;
    double eps = 0.0;
    std::string p_list, q1_list, eps_list;
    std::optional<double> p_min, p_max, p_step, q1_min, q1_max, q1_step, e_min, e_max, e_step;

    CLI::App* check = app.add_subcommand("check", "Spectrum and verdict for one state spec");
    check->add_option("spec", spec_path, "State spec JSON file")->required();

    CLI::App* scan_h = app.add_subcommand("scan-horodecki", "Verdict scan over the p grid");
    scan_h->add_option("--d", d, "Local dimension of each shield factor")->check(CLI::Range(2, 64));
    scan_h->add_option("--l", l, "Number of shield factors")->check(CLI::PositiveNumber);
    scan_h->add_option("--p-list", p_list, "Comma-separated p values");
    scan_h->add_option("--p-min", p_min, "Grid start");
    scan_h->add_option("--p-max", p_max, "Grid end (inclusive)");
    scan_h->add_option("--p-step", p_step, "Grid step");
    scan_h->add_option("--eps", eps, "Shield white noise applied to every state");

    CLI::App* scan_4 = app.add_subcommand("scan-4x4", "Verdict scan of the two-parameter state");
    scan_4->add_option("--q1-list", q1_list, "Comma-separated q1 values");
    scan_4->add_option("--q1-min", q1_min, "Grid start");
    scan_4->add_option("--q1-max", q1_max, "Grid end (inclusive)");
    scan_4->add_option("--q1-step", q1_step, "Grid step");

    CLI::App* rec = app.add_subcommand("recurrence", "Explicit rounds next to the closed form");
    rec->add_option("spec", spec_path, "State spec JSON file")->required();
    rec->add_option("--rounds", rounds, "Number of doubling rounds");

    CLI::App* noise = app.add_subcommand("noise-scan", "Noisy thresholds over an eps grid");
    noise->add_option("--l", l, "Number of shield factors")->check(CLI::PositiveNumber);
    noise->add_option("--eps-list", eps_list, "Comma-separated eps values");
    noise->add_option("--eps-min", e_min, "Grid start");
    noise->add_option("--eps-max", e_max, "Grid end (inclusive)");
    noise->add_option("--eps-step", e_step, "Grid step");

    CLI::App* sim = app.add_subcommand("ad-sim", "Advantage distillation, analytic and sampled");
    sim->add_option("spec", spec_path, "State spec JSON file")->required();
    sim->add_option("--block-size", block_size, "Outcomes per block");
    sim->add_option("--trials", trials, "Monte Carlo blocks");

    // Global options may appear after the subcommand name.
    for (CLI::App* sub : {check, scan_h, scan_4, rec, noise, sim}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return run_check(g, spec_path);
        if (scan_h->parsed())
            return run_scan_horodecki(g, d, l, build_grid(p_list, p_min, p_max, p_step, "p"), eps);
        if (scan_4->parsed())
            return run_scan_4x4(g, build_grid(q1_list, q1_min, q1_max, q1_step, "q1"));
        if (rec->parsed()) return run_recurrence(g, spec_path, rounds);
        if (noise->parsed())
            return run_noise_scan(g, l, build_grid(eps_list, e_min, e_max, e_step, "eps"));
        if (sim->parsed()) return run_ad_sim(g, spec_path, block_size, trials);
    } catch (const skd::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const skd::resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
