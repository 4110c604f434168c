#pragma once

#include <array>
#include <utility>

#include "skd/operators.hpp"

namespace skd {

/// Four-block state on key (x) shield: rho = sum_i P_i (x) sigma_i with P_i
/// the Bell projectors on the two key qubits. The sigma_i are unnormalized
/// positive operators on A' (x) B' whose traces sum to one. Shield factors
/// are stored grouped, Alice part first: indices run over A' then B'.
class ShieldedState {
public:
    static ShieldedState create(std::array<HermitianOperator, 4> sigma,
                                std::pair<int, int> shield_dims, double tol = kPsdTol);

    /// Zero-based: sigma(0) pairs with the Bell projector bell_basis()[0].
    const HermitianOperator& sigma(int i) const { return sigma_.at(static_cast<size_t>(i)); }
    std::pair<int, int> shield_dims() const { return dims_; }
    int shield_dim() const { return dims_.first * dims_.second; }

private:
    ShieldedState(std::array<HermitianOperator, 4> sigma, std::pair<int, int> dims)
        : sigma_(std::move(sigma)), dims_(dims) {}

    std::array<HermitianOperator, 4> sigma_;
    std::pair<int, int> dims_;
};

/// Trace norms of the four block combinations every distillability criterion
/// is written in. sum12 and sum34 equal the corresponding trace sums.
struct ShieldNorms {
    double sum12;   // || sigma_1 + sigma_2 ||
    double diff12;  // || sigma_1 - sigma_2 ||
    double sum34;   // || sigma_3 + sigma_4 ||
    double diff34;  // || sigma_3 - sigma_4 ||
};

ShieldNorms shield_norms(const ShieldedState& s);

/// Spectrum of the key part after untwisting: lambda_1/2 from the first
/// block pair, lambda_3/4 from the second. Sums to one; each pair descends.
struct KeySpectrum {
    std::array<double, 4> lambda;
};

KeySpectrum key_spectrum(const ShieldedState& s);

/// Full density operator on key (x) shield, ordered A, B, A', B'.
HermitianOperator assemble_density(const ShieldedState& s, int max_dim = kDefaultMaxDim);

/// Shield block of <00| rho |11>, equal to (sigma_1 - sigma_2)/2.
HermitianOperator key_off_diagonal_block(const ShieldedState& s);

/// Family with l shield factors built from the normalized symmetric and
/// antisymmetric projectors on C^d (x) C^d:
///   sigma_1 = p ((rho_s + rho_a)/2)^(x l),  sigma_2 = p rho_s^(x l),
///   sigma_3 = sigma_4 = (1/2 - p) rho_s^(x l).
/// The last pair must sit on rho_s factors: with any other choice the psi
/// blocks of the partial transpose keep an uncancelled component on the
/// maximally entangled direction and no p is PPT, while this choice is PPT
/// exactly up to horodecki_ppt_bound. Requires p in (0, 1/2), d >= 2, l >= 1.
ShieldedState horodecki_family(double p, int d, int l, int max_dim = kDefaultMaxDim);

/// Two-parameter state on a 2 (x) 2 shield: the first block pair splits over
/// orthogonal supports {|00>, |01>+|10>} and {|11>, |01>-|10>}, the second
/// over a conjugate pair of superpositions of |00> and |11>. Requires
/// q1, q2 >= 0 and q1 + q2 = 1.
ShieldedState example_4x4(double q1, double q2);

/// White noise on the shield: sigma_i -> (1-eps) sigma_i + eps/4 * 1/d_sh.
/// Equivalent to mixing the assembled state with the maximally mixed one.
ShieldedState add_white_noise(const ShieldedState& s, double eps);

double horodecki_ppt_bound(int d, int l);

struct PptCheck {
    bool numeric;
    bool analytic;
    double min_eigenvalue;  // of the partial transpose across AA'|BB'
    double analytic_bound;  // largest p that keeps the family PPT
};

/// Numeric partial-transpose test of the assembled family state across the
/// AA'|BB' cut, next to the closed-form rule p <= min(1/3, ppt bound).
PptCheck ppt_analytic_check(double p, int d, int l, int max_dim = kDefaultMaxDim);

}  // namespace skd
