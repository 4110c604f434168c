#pragma once

#include <optional>

#include "skd/shielded.hpp"

namespace skd {

struct KeySpectrum;

/// Outcome of a strict-inequality test together with the signed slack that
/// decided it. ok holds exactly when margin > tol.
struct ConditionResult {
    bool ok;
    double margin;
};

/// Entanglement of the shielded state: ||sigma_1 - sigma_2|| > ||sigma_3 + sigma_4||.
ConditionResult entanglement_condition(const ShieldedState& s, double tol = kStrictTol);

/// Exact recurrence-distillability: entangled and trace(sigma_1 sigma_2) = 0,
/// tested relative to trace(sigma_1) trace(sigma_2). The margin reports
/// trace(sigma_1 sigma_2); smaller is better.
ConditionResult recurrence_condition(const ShieldedState& s, double tol = kStrictTol);

/// One-way advantage distillation:
/// ||sigma_1 - sigma_2||^2 > ||sigma_3 + sigma_4|| * ||sigma_1 + sigma_2||.
ConditionResult ad_condition(const ShieldedState& s, double tol = kStrictTol);

/// Same condition written in the key spectrum:
/// (lambda_1 - lambda_2)^2 > (lambda_3 + lambda_4)(lambda_1 + lambda_2).
ConditionResult ad_condition_lambda(const KeySpectrum& k, double tol = kStrictTol);

struct HorodeckiThresholds {
    double p1;  // entanglement sets in above this
    double p2;  // advantage distillation sets in above this
};

/// Closed-form thresholds p_j = 1/2 * ((1 - 2^-l)^j + 1)^-1 of the
/// l-factor family. Both tend to 1/4 from above as l grows.
HorodeckiThresholds thresholds_horodecki(int l);

struct NoiseConditionResult {
    bool exact;              // ad_condition on the noisy state itself
    bool paper_sufficient;   // noiseless margin beats eps/(1-eps)^2
    double exact_margin;
    double sufficient_margin;
};

/// Advantage distillation under shield white noise, decided two ways: the
/// exact condition on add_white_noise(s, eps) and the closed-form sufficient
/// condition on the noiseless norms. The sufficient test never accepts a
/// state the exact one rejects.
NoiseConditionResult noise_condition(const ShieldedState& s, double eps,
                                     double tol = kStrictTol);

/// Closed-form noisy threshold for the l-factor family,
///   p_min = (p2/2) (1 + sqrt(1 - (2/p2) eps/(1-eps)^2)),
/// or nothing once the discriminant turns negative. See horodecki_eps_star
/// for where that happens. Note the formula understates the threshold the
/// exact noisy condition gives; scans report both.
std::optional<double> noise_threshold_horodecki(int l, double eps);

/// Noise level where the discriminant above vanishes: the root of
/// eps = (p2/2)(1-eps)^2 in (0, 1).
double horodecki_eps_star(int l);

/// Empirical noisy threshold: bisection of the exact noisy condition over p.
/// Returns nothing when no p in (0, 1/2) satisfies it.
std::optional<double> noise_threshold_bisect(int d, int l, double eps,
                                             double p_tol = 1e-9);

/// Combined report. ppt_evaluated goes false, with ppt fields zeroed, when
/// the assembled dimension exceeds max_dim; the other criteria never need
/// the assembled state.
struct Verdict {
    bool entangled;
    double entangled_margin;
    bool recurrence_ok;
    double recurrence_margin;
    bool ad_ok;
    double ad_margin;
    bool ppt_evaluated;
    bool ppt;
    double ppt_margin;
};

Verdict full_verdict(const ShieldedState& s, int max_dim = kDefaultMaxDim,
                     double tol = kStrictTol);

}  // namespace skd
