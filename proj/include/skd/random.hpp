#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "skd/operators.hpp"

namespace skd {

class ShieldedState;
struct KeySpectrum;
struct TwistingSpec;

/// Deterministic source for all stochastic sampling. Equal seeds give equal
/// draw sequences on every platform mt19937_64 runs on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uni_(engine_); }
    double normal() { return gauss_(engine_); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Stateless mixing function used to derive independent chunk seeds from a
/// base seed; identical to the splitmix64 output function.
std::uint64_t splitmix64(std::uint64_t x);

/// Entries drawn i.i.d. from the standard complex Gaussian.
Matrix ginibre_matrix(int n, Rng& rng);

HermitianOperator random_hermitian(int n, Rng& rng);

/// G G^dag for a Ginibre G; almost surely positive definite.
HermitianOperator random_psd(int n, Rng& rng);

/// Haar-distributed unitary via QR of a Ginibre matrix with the standard
/// phase correction of the R diagonal.
Matrix haar_unitary(int n, Rng& rng);

/// Random probability 4-vector restricted to the ordering a valid key
/// spectrum requires (first pair and second pair each descending).
KeySpectrum random_key_spectrum(Rng& rng);

/// Random shielded state with the given shield dimensions. With
/// `orthogonal_12` the first two shield operators are compressed onto
/// complementary subspaces, so their product traces to exactly zero.
ShieldedState random_shielded_state(Rng& rng, std::pair<int, int> shield_dims,
                                    bool orthogonal_12);

/// Four independent Haar unitaries of the given shield dimension.
TwistingSpec random_twisting(int shield_dim, Rng& rng);

}  // namespace skd
