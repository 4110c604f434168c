// Release gate: every acceptance criterion runs here, one line per criterion.
// Exit status is nonzero as soon as any line reports FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "skd/ccq.hpp"
#include "skd/criteria.hpp"
#include "skd/operators.hpp"
#include "skd/random.hpp"
#include "skd/recurrence.hpp"
#include "skd/serialize.hpp"
#include "skd/shielded.hpp"

using namespace skd;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

std::string num(double x) { return fmt_sig(x, 6); }

bool run_criterion(int id, const std::string& name, double time_limit,
                   const std::function<void(Outcome&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() -
                                                                  t0)
            .count();
    if (time_limit > 0.0 && secs > time_limit)
        o.fail("took " + num(secs) + "s, limit " + num(time_limit) + "s");
    std::printf("C%-2d %-52s %s (%.2fs)%s%s\n", id, name.c_str(), o.ok ? "PASS" : "FAIL", secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
    return o.ok;
}

// Sign flip of a monotone boolean over p, located by bisection.
double flip_point(const std::function<bool(double)>& cond, double lo, double hi) {
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cond(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

void c1_norm_closed_form(Outcome& o) {
    for (int d : {2, 3})
        for (int l : {1, 2, 3})
            for (double p : {0.1, 0.25, 0.4}) {
                const ShieldedState s = horodecki_family(p, d, l);
                const double got = trace_norm(s.sigma(0) - s.sigma(1));
                const double want = 2.0 * p * (1.0 - std::pow(2.0, -l));
                if (std::abs(got - want) > 1e-10)
                    o.fail("d=" + std::to_string(d) + " l=" + std::to_string(l) + " p=" + num(p) +
                           ": " + num(got) + " vs " + num(want));
            }
}

void c2_thresholds(Outcome& o) {
    const HorodeckiThresholds t1 = thresholds_horodecki(1);
    const HorodeckiThresholds t2 = thresholds_horodecki(2);
    if (std::abs(t1.p1 - 1.0 / 3.0) > 1e-12 || std::abs(t1.p2 - 2.0 / 5.0) > 1e-12)
        o.fail("l=1 closed form: " + num(t1.p1) + ", " + num(t1.p2));
    if (std::abs(t2.p1 - 2.0 / 7.0) > 1e-12 || std::abs(t2.p2 - 8.0 / 25.0) > 1e-12)
        o.fail("l=2 closed form: " + num(t2.p1) + ", " + num(t2.p2));

    for (int l : {1, 2}) {
        const HorodeckiThresholds th = thresholds_horodecki(l);
        const double ent_flip = flip_point(
            [l](double p) { return entanglement_condition(horodecki_family(p, 2, l)).ok; }, 0.26,
            0.45);
        const double ad_flip = flip_point(
            [l](double p) { return ad_condition(horodecki_family(p, 2, l)).ok; }, 0.26, 0.45);
        if (std::abs(ent_flip - th.p1) > 1e-6)
            o.fail("l=" + std::to_string(l) + " entanglement flips at " + num(ent_flip));
        if (std::abs(ad_flip - th.p2) > 1e-6)
            o.fail("l=" + std::to_string(l) + " ad flips at " + num(ad_flip));
    }
}

void c3_ppt_boundary(Outcome& o) {
    const std::vector<std::pair<int, int>> grids = {{2, 1}, {3, 1}, {2, 2}};
    for (const auto& [d, l] : grids)
        for (int i = 0; i < 9; ++i) {
            const double p = 0.03 + 0.05 * i;
            const PptCheck c = ppt_analytic_check(p, d, l);
            if (c.numeric != c.analytic)
                o.fail("d=" + std::to_string(d) + " l=" + std::to_string(l) + " p=" + num(p) +
                       ": numeric " + (c.numeric ? "PPT" : "NPT") + ", analytic " +
                       (c.analytic ? "PPT" : "NPT"));
        }

    const double root = flip_point(
        [](double p) { return ppt_analytic_check(p, 2, 1).min_eigenvalue < 0.0; }, 0.30, 0.37);
    if (std::abs(root - 1.0 / 3.0) > 1e-8)
        o.fail("(2,1) eigenvalue crossing at " + num(root));
}

void c4_recurrence(Outcome& o) {
    const ShieldedState ortho = example_4x4(0.6, 0.4);
    const ShieldNorms n_ortho = shield_norms(ortho);
    const RecurrenceTrace trace = iterate(ortho, 2);
    if (trace.rounds_completed != 2) {
        o.fail("completed " + std::to_string(trace.rounds_completed) + " rounds of 2");
        return;
    }
    if (std::abs(trace.r[0] - closed_form_r(n_ortho, 2)) > 1e-9)
        o.fail("round 1 r " + num(trace.r[0]) + " vs closed " + num(closed_form_r(n_ortho, 2)));
    if (std::abs(trace.r[1] - closed_form_r(n_ortho, 4)) > 1e-9)
        o.fail("round 2 r " + num(trace.r[1]) + " vs closed " + num(closed_form_r(n_ortho, 4)));

    // The rising sequence saturates at exactly 1/2 in double precision, so
    // strict growth is only required before saturation.
    const ShieldNorms n_h = shield_norms(horodecki_family(0.3, 2, 1));
    double prev_up = 0.0, prev_down = 1.0;
    for (int k = 1; k <= 10; ++k) {
        const long long m = 1LL << k;
        const double up = closed_form_r(n_ortho, m);
        const double down = closed_form_r(n_h, m);
        if (up < prev_up) o.fail("orthogonal r decreases at m=" + std::to_string(m));
        if (down > prev_down) o.fail("family r increases at m=" + std::to_string(m));
        prev_up = up;
        prev_down = down;
    }
    if (closed_form_r(n_ortho, 2) >= closed_form_r(n_ortho, 16))
        o.fail("orthogonal r flat between m=2 and m=16");
    if (closed_form_r(n_h, 2) <= closed_form_r(n_h, 16))
        o.fail("family r flat between m=2 and m=16");
    if (std::abs(prev_up - 0.5) > 1e-6) o.fail("orthogonal r limit " + num(prev_up));
    if (prev_down > 1e-6) o.fail("family r limit " + num(prev_down));
}

void c5_condition_hierarchy(Outcome& o) {
    Rng rng(515151);
    int rec_hits = 0, ad_hits = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::pair<int, int> dims =
            (trial % 3 == 0) ? std::pair<int, int>{2, 2}
                             : (trial % 3 == 1 ? std::pair<int, int>{2, 1}
                                               : std::pair<int, int>{3, 1});
        const ShieldedState s = random_shielded_state(rng, dims, trial % 2 == 0);
        const bool rec = recurrence_condition(s).ok;
        const bool ad = ad_condition(s).ok;
        const bool ent = entanglement_condition(s).ok;
        rec_hits += rec;
        ad_hits += ad;
        if (rec && !ad) {
            o.fail("recurrence without ad at trial " + std::to_string(trial));
            return;
        }
        if (ad && !ent) {
            o.fail("ad without entanglement at trial " + std::to_string(trial));
            return;
        }
    }
    if (rec_hits == 0) o.fail("recurrence condition never fired");
    if (ad_hits == 0) o.fail("ad condition never fired");
}

void c6_twisting_invariance(Outcome& o) {
    Rng rng(626262);
    double worst_p = 0.0, worst_d = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::pair<int, int> dims = (trial % 2 == 0) ? std::pair<int, int>{2, 1}
                                                          : std::pair<int, int>{2, 2};
        const ShieldedState s = random_shielded_state(rng, dims, false);
        const int ds = s.shield_dim();
        const HermitianOperator rho = assemble_density(s);
        const HermitianOperator twisted = apply_twisting(rho, random_twisting(ds, rng), ds);
        const CcqDescriptor c0 = ccq_from_full_state(rho, ds);
        const CcqDescriptor c1 = ccq_from_full_state(twisted, ds);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                worst_p = std::max(worst_p,
                                   std::abs(c0.p[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                                            c1.p[static_cast<size_t>(i)][static_cast<size_t>(j)]));
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                worst_d = std::max(worst_d, std::abs(eve_trace_distance(c0, a, b) -
                                                     eve_trace_distance(c1, a, b)));
    }
    if (worst_p > 1e-9) o.fail("probability deviation " + num(worst_p));
    if (worst_d > 1e-9) o.fail("Eve distance deviation " + num(worst_d));
}

void c7_ad_equivalence(Outcome& o) {
    Rng rng(737373);
    int checked_flags = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::pair<int, int> dims = (trial % 2 == 0) ? std::pair<int, int>{2, 1}
                                                          : std::pair<int, int>{2, 2};
        const ShieldedState s = random_shielded_state(rng, dims, false);
        const ConditionResult norm_form = ad_condition(s);
        const KeySpectrum k = key_spectrum(s);
        const ConditionResult lambda_form = ad_condition_lambda(k);
        const CcqDescriptor c = ccq_from_spectrum(k);
        const ConditionResult security = ad_security_check(c);
        const double agree2 = c.agreement() * c.agreement();

        if (std::abs(norm_form.margin - lambda_form.margin) > 1e-12) {
            o.fail("norm vs lambda margin gap " +
                   num(std::abs(norm_form.margin - lambda_form.margin)));
            return;
        }
        if (std::abs(security.margin * agree2 - lambda_form.margin) > 1e-12) {
            o.fail("security margin mapping gap " +
                   num(std::abs(security.margin * agree2 - lambda_form.margin)));
            return;
        }
        if (std::abs(lambda_form.margin) > 1e-8) {
            ++checked_flags;
            if (norm_form.ok != lambda_form.ok || lambda_form.ok != security.ok) {
                o.fail("verdicts disagree at trial " + std::to_string(trial));
                return;
            }
        }
    }
    if (checked_flags < 9000) o.fail("only " + std::to_string(checked_flags) + " decisive flags");
}

void c8_orthogonal_example(Outcome& o) {
    for (double q1 : {0.45, 0.55, 0.75}) {
        const ShieldedState s = example_4x4(q1, 1.0 - q1);
        const double cross = trace_product(s.sigma(0), s.sigma(1));
        if (std::abs(cross) > 1e-12) o.fail("q1=" + num(q1) + " cross trace " + num(cross));
        const bool want = q1 > 1.0 - q1;
        const Verdict v = full_verdict(s);
        if (v.entangled != want || v.recurrence_ok != want || v.ad_ok != want)
            o.fail("q1=" + num(q1) + " verdicts " + (v.entangled ? "T" : "F") +
                   (v.recurrence_ok ? "T" : "F") + (v.ad_ok ? "T" : "F") + " want all " +
                   (want ? "T" : "F"));
    }
}

void c9_noise(Outcome& o) {
    Rng rng(909090);
    for (int trial = 0; trial < 100; ++trial) {
        const ShieldedState s = random_shielded_state(rng, {2, 1}, trial % 2 == 0);
        const NoiseConditionResult n = noise_condition(s, 0.0);
        const ConditionResult ad = ad_condition(s);
        if (n.exact != ad.ok || std::abs(n.exact_margin - ad.margin) > 1e-12) {
            o.fail("eps=0 mismatch at trial " + std::to_string(trial));
            return;
        }
    }

    int sufficient_hits = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ShieldedState s = random_shielded_state(rng, {2, 1}, trial % 2 == 0);
        const double u = rng.uniform();
        const double eps = 0.3 * u * u * u;
        const NoiseConditionResult n = noise_condition(s, eps);
        if (n.paper_sufficient) {
            ++sufficient_hits;
            if (!n.exact) {
                o.fail("sufficient without exact at trial " + std::to_string(trial));
                return;
            }
        }
    }
    if (sufficient_hits < 20)
        o.fail("sufficient condition fired only " + std::to_string(sufficient_hits) + " times");

    // Quadratic-root oracle for the l=2 cutoff of the closed-form threshold.
    const double p2 = 8.0 / 25.0;
    const double star = ((1.0 + p2) - std::sqrt((1.0 + p2) * (1.0 + p2) - p2 * p2)) / p2;
    if (std::abs(star - 0.1232) > 1e-3) o.fail("oracle root " + num(star) + " far from 0.1232");
    if (std::abs(horodecki_eps_star(2) - star) > 1e-12)
        o.fail("eps_star " + num(horodecki_eps_star(2)) + " vs oracle " + num(star));
    if (!noise_threshold_horodecki(2, star - 1e-3).has_value())
        o.fail("formula already empty below the cutoff");
    if (noise_threshold_horodecki(2, star + 1e-3).has_value())
        o.fail("formula still returns a threshold above the cutoff");
}

void c10_monte_carlo(Outcome& o) {
    const CcqDescriptor c = ccq_from_spectrum(KeySpectrum{{0.45, 0.15, 0.2, 0.2}});
    const long long trials = 100000;
    const std::uint64_t seed = 20240817;
    for (int n : {2, 4, 8}) {
        const double pa = std::pow(0.6, n) + std::pow(0.4, n);
        const double pe = std::pow(0.4, n) / pa;
        const AdBlockStats emp = ad_monte_carlo(c, n, trials, seed);
        const double se_accept = std::sqrt(pa * (1.0 - pa) / static_cast<double>(trials));
        const double se_error = std::sqrt(pe * (1.0 - pe) / (pa * static_cast<double>(trials)));
        if (std::abs(emp.accept_prob - pa) > 3.0 * se_accept)
            o.fail("N=" + std::to_string(n) + " accept " + num(emp.accept_prob) + " vs " + num(pa));
        if (std::abs(emp.post_error - pe) > 3.0 * se_error)
            o.fail("N=" + std::to_string(n) + " error " + num(emp.post_error) + " vs " + num(pe));
        const AdBlockStats again = ad_monte_carlo(c, n, trials, seed);
        if (ad_stats_to_json(emp).dump() != ad_stats_to_json(again).dump())
            o.fail("N=" + std::to_string(n) + " rerun output differs");
    }
}

}  // namespace

int main() {
    int failures = 0;
    failures += !run_criterion(1, "family norm closed form", 10.0, c1_norm_closed_form);
    failures += !run_criterion(2, "entanglement and ad thresholds", 0.0, c2_thresholds);
    failures += !run_criterion(3, "ppt boundary", 60.0, c3_ppt_boundary);
    failures += !run_criterion(4, "recurrence closed form and limits", 0.0, c4_recurrence);
    failures += !run_criterion(5, "condition hierarchy on random states", 0.0,
                               c5_condition_hierarchy);
    failures += !run_criterion(6, "twisting invariance of ccq data", 0.0, c6_twisting_invariance);
    failures += !run_criterion(7, "ad condition equivalence", 0.0, c7_ad_equivalence);
    failures += !run_criterion(8, "orthogonal 4x4 example", 0.0, c8_orthogonal_example);
    failures += !run_criterion(9, "noise reduction and thresholds", 0.0, c9_noise);
    failures += !run_criterion(10, "monte carlo reproduction", 30.0, c10_monte_carlo);

    if (failures == 0) {
        std::printf("all criteria pass\n");
        return 0;
    }
    std::printf("%d criteria failing\n", failures);
    return 1;
}
