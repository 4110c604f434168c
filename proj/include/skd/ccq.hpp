#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "skd/operators.hpp"
#include "skd/shielded.hpp"

namespace skd {

/// Classical-classical-quantum state left after both parties measure their
/// key qubit in the computational basis and Eve keeps a purifying system.
/// p[i][j] is the probability of outcome pair (i, j); eve_overlap is the
/// fidelity of Eve's conditional states for the two agreeing outcomes.
struct CcqDescriptor {
    std::array<std::array<double, 2>, 2> p;
    double eve_overlap;

    /// Spectrum route: pure conditional states in a four-dimensional
    /// environment basis, outcome order 00, 01, 10, 11. Zero vector for
    /// outcomes of probability zero.
    std::optional<std::array<Vector, 4>> eve_kets;

    /// Full-state route: conditional density operators on the purifying
    /// system, same outcome order. Zero matrix for probability zero.
    std::optional<std::array<Matrix, 4>> eve_states;

    double agreement() const { return p[0][0] + p[1][1]; }
    double disagreement() const { return p[0][1] + p[1][0]; }
};

/// Controlled shield rotation sum_ij |ij><ij| (x) U_ij. Unitarity of each
/// block is validated where the rotation is applied.
struct TwistingSpec {
    std::array<Matrix, 4> u;  // outcome order 00, 01, 10, 11
};

/// Statistics of repetition-coded advantage distillation on blocks of N
/// outcome pairs: Alice announces her key XORed with a fresh random bit,
/// Bob accepts only blocks that decode consistently.
struct AdBlockStats {
    int block_size;
    double accept_prob;
    double post_error;
    double eve_overlap_effective;  // eve_overlap^N, reported for orientation
    bool empirical;
    long long trials;
    long long accepted;
    double accept_stderr;
    double error_stderr;
};

/// Purification of the Bell-diagonal key part, sum_i sqrt(lambda_i)
/// |bell_i> (x) |i>, on a 4 (x) 4 space.
KetVector purify(const KeySpectrum& k);

/// Measurement statistics and Eve geometry straight from the key spectrum.
/// Rejects spectra with lambda_1 + lambda_2 = 0 (no agreeing outcomes).
CcqDescriptor ccq_from_spectrum(const KeySpectrum& k);

/// Same data from an arbitrary state on key (x) shield via a canonical
/// purification (eigendecomposition, environment dimension 4 * shield_dim).
/// The shield is traced into Eve's conditional states.
CcqDescriptor ccq_from_full_state(const HermitianOperator& rho, int shield_dim);

/// Core of the full-state route: psi has one row per physical basis vector
/// (key major, shield minor) and one column per environment basis vector.
CcqDescriptor ccq_from_purification(const Matrix& psi, int shield_dim);

HermitianOperator apply_twisting(const HermitianOperator& rho, const TwistingSpec& t,
                                 int shield_dim);

AdBlockStats ad_block_stats(const CcqDescriptor& c, int block_size);

/// Simulates the block protocol literally with seeded draws. Trials are
/// processed in fixed-size chunks whose seeds derive from `seed` by
/// splitmix64, and chunk results merge by addition, so any execution order
/// reproduces the same totals.
AdBlockStats ad_monte_carlo(const CcqDescriptor& c, int block_size, long long trials,
                            std::uint64_t seed);

struct ConditionResult;

/// Security side of advantage distillation on the ccq data:
/// eve_overlap^2 > disagreement/agreement.
ConditionResult ad_security_check(const CcqDescriptor& c, double tol = kStrictTol);

/// Half trace norm of the difference of two density operators.
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const Matrix& rho, const Matrix& sigma);

/// Distance and fidelity between Eve's conditional states for two outcomes
/// (0..3 in the order 00, 01, 10, 11). Requires full-state Eve data.
double eve_trace_distance(const CcqDescriptor& c, int a, int b);
double eve_fidelity(const CcqDescriptor& c, int a, int b);

}  // namespace skd
