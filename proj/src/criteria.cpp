#include "skd/criteria.hpp"

#include <cmath>

namespace skd {

ConditionResult entanglement_condition(const ShieldedState& s, double tol) {
    const ShieldNorms n = shield_norms(s);
    const double margin = n.diff12 - n.sum34;
    return ConditionResult{margin > tol, margin};
}

ConditionResult recurrence_condition(const ShieldedState& s, double tol) {
    const double cross = trace_product(s.sigma(0), s.sigma(1));
    // Orthogonality is judged relative to the block sizes so the verdict does
    // not depend on overall normalization of the pair.
    const bool orthogonal = cross <= tol * s.sigma(0).trace() * s.sigma(1).trace();
    const bool entangled = entanglement_condition(s, tol).ok;
    return ConditionResult{orthogonal && entangled, cross};
}

ConditionResult ad_condition(const ShieldedState& s, double tol) {
    const ShieldNorms n = shield_norms(s);
    const double margin = n.diff12 * n.diff12 - n.sum34 * n.sum12;
    return ConditionResult{margin > tol, margin};
}

ConditionResult ad_condition_lambda(const KeySpectrum& k, double tol) {
    const auto& l = k.lambda;
    const double diff = l[0] - l[1];
    const double margin = diff * diff - (l[2] + l[3]) * (l[0] + l[1]);
    return ConditionResult{margin > tol, margin};
}

HorodeckiThresholds thresholds_horodecki(int l) {
    if (l < 1) throw validation_error("thresholds_horodecki: l must be at least 1");
    const double base = 1.0 - std::pow(2.0, -l);
    return HorodeckiThresholds{0.5 / (base + 1.0), 0.5 / (base * base + 1.0)};
}

NoiseConditionResult noise_condition(const ShieldedState& s, double eps, double tol) {
    if (eps < 0.0 || eps >= 1.0)
        throw validation_error("noise_condition: eps must lie in [0, 1)");
    const ConditionResult exact = ad_condition(add_white_noise(s, eps), tol);
    const ShieldNorms n = shield_norms(s);
    const double penalty = eps / ((1.0 - eps) * (1.0 - eps));
    const double suff_margin = n.diff12 * n.diff12 - n.sum34 * n.sum12 - penalty;
    return NoiseConditionResult{exact.ok, suff_margin > tol, exact.margin, suff_margin};
}

std::optional<double> noise_threshold_horodecki(int l, double eps) {
    if (eps < 0.0 || eps >= 1.0)
        throw validation_error("noise_threshold_horodecki: eps must lie in [0, 1)");
    const double p2 = thresholds_horodecki(l).p2;
    const double disc = 1.0 - (2.0 / p2) * eps / ((1.0 - eps) * (1.0 - eps));
    if (disc < 0.0) return std::nullopt;
    return 0.5 * p2 * (1.0 + std::sqrt(disc));
}

double horodecki_eps_star(int l) {
    // eps = q (1-eps)^2 with q = p2/2: the smaller root of
    // q eps^2 - (2q+1) eps + q = 0 lies in (0, 1).
    const double q = 0.5 * thresholds_horodecki(l).p2;
    const double b = 2.0 * q + 1.0;
    return (b - std::sqrt(b * b - 4.0 * q * q)) / (2.0 * q);
}

std::optional<double> noise_threshold_bisect(int d, int l, double eps, double p_tol) {
    if (eps < 0.0 || eps >= 1.0)
        throw validation_error("noise_threshold_bisect: eps must lie in [0, 1)");
    const auto noisy_ad = [&](double p) {
        return ad_condition(add_white_noise(horodecki_family(p, d, l), eps)).ok;
    };
    double hi = 0.5 - 1e-12;
    if (!noisy_ad(hi)) return std::nullopt;
    double lo = 1e-12;
    if (noisy_ad(lo)) return lo;
    while (hi - lo > p_tol) {
        const double mid = 0.5 * (lo + hi);
        (noisy_ad(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Verdict full_verdict(const ShieldedState& s, int max_dim, double tol) {
    Verdict v{};
    const ConditionResult ent = entanglement_condition(s, tol);
    const ConditionResult rec = recurrence_condition(s, tol);
    const ConditionResult ad = ad_condition(s, tol);
    v.entangled = ent.ok;
    v.entangled_margin = ent.margin;
    v.recurrence_ok = rec.ok;
    v.recurrence_margin = rec.margin;
    v.ad_ok = ad.ok;
    v.ad_margin = ad.margin;

    const auto [da, db] = s.shield_dims();
    if (4L * da * db <= max_dim) {
        const HermitianOperator rho = assemble_density(s, max_dim);
        const HermitianOperator cut = permute_systems(rho, {2, 2, da, db}, {0, 2, 1, 3});
        const PptResult res = is_ppt(cut, {2 * da, 2 * db});
        v.ppt_evaluated = true;
        v.ppt = res.ppt;
        v.ppt_margin = res.min_eigenvalue;
    }
    return v;
}

}  // namespace skd
