#include "skd/shielded.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace skd {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw validation_error(what);
}

// l-fold Kronecker power on interleaved pair factors, then regrouped so all
// Alice factors precede all Bob factors.
HermitianOperator grouped_power(const HermitianOperator& pair_op, int d, int l, int max_dim) {
    HermitianOperator acc = pair_op;
    for (int k = 1; k < l; ++k) acc = tensor(acc, pair_op, max_dim);
    if (l == 1) return acc;
    std::vector<int> dims(static_cast<size_t>(2 * l), d);
    std::vector<int> perm;
    perm.reserve(dims.size());
    for (int k = 0; k < l; ++k) perm.push_back(2 * k);      // Alice halves
    for (int k = 0; k < l; ++k) perm.push_back(2 * k + 1);  // Bob halves
    return permute_systems(acc, dims, perm);
}

}  // namespace

ShieldedState ShieldedState::create(std::array<HermitianOperator, 4> sigma,
                                    std::pair<int, int> shield_dims, double tol) {
    require(shield_dims.first >= 1 && shield_dims.second >= 1,
            "ShieldedState: shield dimensions must be positive");
    const int ds = shield_dims.first * shield_dims.second;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto& s = sigma[static_cast<size_t>(i)];
        require(s.dim() == ds, "ShieldedState: sigma_" + std::to_string(i + 1) +
                                   " dimension does not match the shield");
        if (min_eigenvalue(s) < -tol)
            throw validation_error("ShieldedState: sigma_" + std::to_string(i + 1) +
                                   " is not positive semidefinite");
        total += s.trace();
    }
    require(std::abs(total - 1.0) <= tol,
            "ShieldedState: shield traces sum to " + std::to_string(total) + ", expected 1");
    return ShieldedState(std::move(sigma), shield_dims);
}

ShieldNorms shield_norms(const ShieldedState& s) {
    return ShieldNorms{trace_norm(s.sigma(0) + s.sigma(1)), trace_norm(s.sigma(0) - s.sigma(1)),
                       trace_norm(s.sigma(2) + s.sigma(3)), trace_norm(s.sigma(2) - s.sigma(3))};
}

KeySpectrum key_spectrum(const ShieldedState& s) {
    const ShieldNorms n = shield_norms(s);
    std::array<double, 4> lam = {0.5 * (n.sum12 + n.diff12), 0.5 * (n.sum12 - n.diff12),
                                 0.5 * (n.sum34 + n.diff34), 0.5 * (n.sum34 - n.diff34)};
    // The subtracted entries sit above -kPsdTol by the triangle inequality;
    // clip the rounding residue.
    for (double& x : lam)
        if (x < 0.0) x = 0.0;
    return KeySpectrum{lam};
}

HermitianOperator assemble_density(const ShieldedState& s, int max_dim) {
    const auto& bells = bell_basis();
    const int ds = s.shield_dim();
    if (4L * ds > max_dim)
        throw resource_error("assemble_density: dimension " + std::to_string(4L * ds) +
                             " exceeds limit " + std::to_string(max_dim));
    Matrix acc = Matrix::Zero(4L * ds, 4L * ds);
    for (int i = 0; i < 4; ++i) {
        const HermitianOperator term =
            tensor(projector(bells[static_cast<size_t>(i)]), s.sigma(i), max_dim);
        acc += term.entries();
    }
    return HermitianOperator(std::move(acc));
}

HermitianOperator key_off_diagonal_block(const ShieldedState& s) {
    return 0.5 * (s.sigma(0) - s.sigma(1));
}

ShieldedState horodecki_family(double p, int d, int l, int max_dim) {
    require(p > 0.0 && p < 0.5, "horodecki_family: p must lie in (0, 1/2)");
    require(d >= 2, "horodecki_family: d must be at least 2");
    require(l >= 1, "horodecki_family: l must be at least 1");
    double dim_check = 1.0;
    for (int k = 0; k < 2 * l; ++k) {
        dim_check *= d;
        if (dim_check > max_dim)
            throw resource_error("horodecki_family: shield dimension d^(2l) exceeds limit " +
                                 std::to_string(max_dim));
    }

    const auto [rho_s, rho_a] = sym_antisym_projectors(d);
    const HermitianOperator mix = 0.5 * (rho_s + rho_a);
    const HermitianOperator mix_l = grouped_power(mix, d, l, max_dim);
    const HermitianOperator sym_l = grouped_power(rho_s, d, l, max_dim);

    int half = 1;
    for (int k = 0; k < l; ++k) half *= d;
    std::array<HermitianOperator, 4> sigma{p * mix_l, p * sym_l, (0.5 - p) * sym_l,
                                           (0.5 - p) * sym_l};
    return ShieldedState::create(std::move(sigma), {half, half});
}

ShieldedState example_4x4(double q1, double q2) {
    require(q1 >= 0.0 && q2 >= 0.0, "example_4x4: weights must be nonnegative");
    require(std::abs(q1 + q2 - 1.0) <= 1e-12, "example_4x4: q1 + q2 must equal 1");

    const auto& bells = bell_basis();
    Vector e00 = Vector::Zero(4), e11 = Vector::Zero(4);
    e00(0) = 1.0;
    e11(3) = 1.0;

    const double root2 = std::sqrt(2.0);
    Vector chi_p(4), chi_m(4);
    chi_p.setZero();
    chi_m.setZero();
    chi_p(0) = 0.5 * std::sqrt(2.0 + root2);
    chi_p(3) = 0.5 * std::sqrt(2.0 - root2);
    chi_m(0) = 0.5 * std::sqrt(2.0 - root2);
    chi_m(3) = -0.5 * std::sqrt(2.0 + root2);

    std::array<HermitianOperator, 4> sigma{
        0.25 * q1 * (projector(KetVector(e00)) + projector(bells[2])),
        0.25 * q1 * (projector(KetVector(e11)) + projector(bells[3])),
        0.5 * q2 * projector(KetVector(chi_p)), 0.5 * q2 * projector(KetVector(chi_m))};
    return ShieldedState::create(std::move(sigma), {2, 2});
}

ShieldedState add_white_noise(const ShieldedState& s, double eps) {
    require(eps >= 0.0 && eps <= 1.0, "add_white_noise: eps must lie in [0, 1]");
    const int ds = s.shield_dim();
    const HermitianOperator bias = (0.25 * eps / ds) * HermitianOperator::identity(ds);
    std::array<HermitianOperator, 4> sigma{
        (1.0 - eps) * s.sigma(0) + bias, (1.0 - eps) * s.sigma(1) + bias,
        (1.0 - eps) * s.sigma(2) + bias, (1.0 - eps) * s.sigma(3) + bias};
    return ShieldedState::create(std::move(sigma), s.shield_dims());
}

double horodecki_ppt_bound(int d, int l) {
    if (d < 2 || l < 1) throw validation_error("horodecki_ppt_bound: need d >= 2, l >= 1");
    const double ratio = std::pow(static_cast<double>(d) / (d - 1), l);
    return std::min(1.0 / 3.0, 1.0 / (1.0 + ratio));
}

PptCheck ppt_analytic_check(double p, int d, int l, int max_dim) {
    const ShieldedState s = horodecki_family(p, d, l, max_dim);
    const HermitianOperator rho = assemble_density(s, max_dim);
    const auto [da, db] = s.shield_dims();
    // A B A' B'  ->  A A' B B', then transpose Bob's half.
    const HermitianOperator cut =
        permute_systems(rho, {2, 2, da, db}, {0, 2, 1, 3});
    const PptResult res = is_ppt(cut, {2 * da, 2 * db});
    const double bound = horodecki_ppt_bound(d, l);
    return PptCheck{res.ppt, p <= bound + 1e-12, res.min_eigenvalue, bound};
}

}  // namespace skd
