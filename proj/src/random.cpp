#include "skd/random.hpp"

#include <cmath>

#include "skd/ccq.hpp"
#include "skd/shielded.hpp"

namespace skd {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Matrix ginibre_matrix(int n, Rng& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    return g;
}

HermitianOperator random_hermitian(int n, Rng& rng) {
    Matrix g = ginibre_matrix(n, rng);
    return HermitianOperator(0.5 * (g + g.adjoint().eval()));
}

HermitianOperator random_psd(int n, Rng& rng) {
    Matrix g = ginibre_matrix(n, rng);
    return HermitianOperator(g * g.adjoint());
}

Matrix haar_unitary(int n, Rng& rng) {
    Matrix g = ginibre_matrix(n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        Complex d = r(k, k);
        const double a = std::abs(d);
        q.col(k) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

KeySpectrum random_key_spectrum(Rng& rng) {
    std::array<double, 4> w{};
    double sum = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.uniform());
        sum += x;
    }
    for (double& x : w) x /= sum;
    if (w[0] < w[1]) std::swap(w[0], w[1]);
    if (w[2] < w[3]) std::swap(w[2], w[3]);
    return KeySpectrum{w};
}

ShieldedState random_shielded_state(Rng& rng, std::pair<int, int> shield_dims,
                                    bool orthogonal_12) {
    const int ds = shield_dims.first * shield_dims.second;
    Matrix s1 = random_psd(ds, rng).entries();
    Matrix s2 = random_psd(ds, rng).entries();
    Matrix s3 = random_psd(ds, rng).entries();
    Matrix s4 = random_psd(ds, rng).entries();

    if (orthogonal_12 && ds >= 2) {
        // Compress the first pair onto complementary ranges of a Haar frame.
        const int rank = 1 + static_cast<int>(rng.uniform() * (ds - 1));
        const Matrix u = haar_unitary(ds, rng);
        const Matrix pa = u.leftCols(rank) * u.leftCols(rank).adjoint();
        const Matrix pb = Matrix::Identity(ds, ds) - pa;
        s1 = (pa * s1 * pa).eval();
        s2 = (pb * s2 * pb).eval();
    }

    // Spread the weight of the second pair so both entangled and separable
    // regions get sampled.
    const double shrink = 0.05 + 1.45 * rng.uniform();
    s3 *= shrink;
    s4 *= shrink;

    const double total =
        (s1.trace() + s2.trace() + s3.trace() + s4.trace()).real();
    std::array<HermitianOperator, 4> sigma{
        HermitianOperator(s1 / total), HermitianOperator(s2 / total),
        HermitianOperator(s3 / total), HermitianOperator(s4 / total)};
    return ShieldedState::create(std::move(sigma), shield_dims);
}

TwistingSpec random_twisting(int shield_dim, Rng& rng) {
    return TwistingSpec{{haar_unitary(shield_dim, rng), haar_unitary(shield_dim, rng),
                         haar_unitary(shield_dim, rng), haar_unitary(shield_dim, rng)}};
}

}  // namespace skd
