#include "skd/ccq.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "skd/criteria.hpp"
#include "skd/random.hpp"

namespace skd {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw validation_error(what);
}

void check_spectrum(const KeySpectrum& k) {
    double sum = 0.0;
    for (double x : k.lambda) {
        require(x >= -kPsdTol, "KeySpectrum: negative weight");
        sum += x;
    }
    require(std::abs(sum - 1.0) <= kHermTol, "KeySpectrum: weights sum to " +
                                                 std::to_string(sum) + ", expected 1");
    require(k.lambda[0] >= k.lambda[1] - kPsdTol && k.lambda[2] >= k.lambda[3] - kPsdTol,
            "KeySpectrum: pairs must be ordered descending");
}

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

// Number of trials a single chunk covers; the merge over chunks is a plain
// sum of counters, so any grouping of chunks reproduces the same totals.
constexpr long long kChunkTrials = 1 << 14;

std::uint64_t chunk_seed(std::uint64_t seed, long long chunk) {
    return splitmix64(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(chunk + 1)));
}

}  // namespace

KetVector purify(const KeySpectrum& k) {
    check_spectrum(k);
    const auto& bells = bell_basis();
    Vector psi = Vector::Zero(16);
    for (int i = 0; i < 4; ++i) {
        const double w = std::sqrt(std::max(k.lambda[static_cast<size_t>(i)], 0.0));
        const Vector& phi = bells[static_cast<size_t>(i)].amplitudes();
        for (int key = 0; key < 4; ++key) psi(key * 4 + i) += w * phi(key);
    }
    psi /= psi.norm();
    return KetVector(std::move(psi));
}

CcqDescriptor ccq_from_spectrum(const KeySpectrum& k) {
    check_spectrum(k);
    const double l1 = k.lambda[0], l2 = k.lambda[1], l3 = k.lambda[2], l4 = k.lambda[3];
    const double agree = l1 + l2;
    const double differ = l3 + l4;
    require(agree > 0.0, "ccq_from_spectrum: lambda_1 + lambda_2 = 0, no agreeing outcomes");

    CcqDescriptor c{};
    c.p[0][0] = c.p[1][1] = 0.5 * agree;
    c.p[0][1] = c.p[1][0] = 0.5 * differ;
    c.eve_overlap = (l1 - l2) / agree;

    std::array<Vector, 4> kets;
    for (auto& v : kets) v = Vector::Zero(4);
    const double sa = std::sqrt(agree);
    kets[0](0) = std::sqrt(l1) / sa;
    kets[0](1) = std::sqrt(std::max(l2, 0.0)) / sa;
    kets[3](0) = std::sqrt(l1) / sa;
    kets[3](1) = -std::sqrt(std::max(l2, 0.0)) / sa;
    if (differ > 0.0) {
        const double sd = std::sqrt(differ);
        kets[1](2) = std::sqrt(std::max(l3, 0.0)) / sd;
        kets[1](3) = std::sqrt(std::max(l4, 0.0)) / sd;
        kets[2](2) = std::sqrt(std::max(l3, 0.0)) / sd;
        kets[2](3) = -std::sqrt(std::max(l4, 0.0)) / sd;
    }
    c.eve_kets = std::move(kets);
    return c;
}

CcqDescriptor ccq_from_purification(const Matrix& psi, int shield_dim) {
    require(shield_dim >= 1, "ccq_from_purification: shield_dim must be positive");
    require(psi.rows() == 4L * shield_dim,
            "ccq_from_purification: rows must equal 4 * shield_dim");
    require(psi.cols() >= 1, "ccq_from_purification: environment must be nonempty");
    require(std::abs(psi.squaredNorm() - 1.0) <= kHermTol,
            "ccq_from_purification: vector is not normalized");

    CcqDescriptor c{};
    std::array<Matrix, 4> states;
    std::array<double, 4> prob{};
    for (int block = 0; block < 4; ++block) {
        const Matrix a = psi.middleRows(static_cast<long>(block) * shield_dim, shield_dim);
        prob[static_cast<size_t>(block)] = a.squaredNorm();
        // Environment reduction of <block|psi>: rho_E(e, e') = sum_s A(s,e) A*(s,e').
        states[static_cast<size_t>(block)] =
            (prob[static_cast<size_t>(block)] > 0.0)
                ? Matrix((a.transpose() * a.conjugate()) / prob[static_cast<size_t>(block)])
                : Matrix(Matrix::Zero(psi.cols(), psi.cols()));
    }
    c.p[0][0] = prob[0];
    c.p[0][1] = prob[1];
    c.p[1][0] = prob[2];
    c.p[1][1] = prob[3];
    require(c.agreement() > 0.0, "ccq_from_purification: no agreeing outcomes");
    c.eve_overlap = fidelity(states[0], states[3]);
    c.eve_states = std::move(states);
    return c;
}

CcqDescriptor ccq_from_full_state(const HermitianOperator& rho, int shield_dim) {
    require(shield_dim >= 1, "ccq_from_full_state: shield_dim must be positive");
    require(rho.dim() == 4 * shield_dim,
            "ccq_from_full_state: dimension must equal 4 * shield_dim");
    require(std::abs(rho.trace() - 1.0) <= kHermTol, "ccq_from_full_state: trace must be 1");

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
    if (es.eigenvalues().minCoeff() < -kPsdTol)
        throw validation_error("ccq_from_full_state: input is not positive semidefinite");

    // Canonical purification: environment basis indexed by eigenvectors.
    const long n = rho.dim();
    Matrix psi(n, n);
    for (long k = 0; k < n; ++k)
        psi.col(k) = std::sqrt(std::max(es.eigenvalues()(k), 0.0)) * es.eigenvectors().col(k);
    return ccq_from_purification(psi, shield_dim);
}

HermitianOperator apply_twisting(const HermitianOperator& rho, const TwistingSpec& t,
                                 int shield_dim) {
    require(shield_dim >= 1, "apply_twisting: shield_dim must be positive");
    require(rho.dim() == 4 * shield_dim, "apply_twisting: dimension must equal 4 * shield_dim");
    for (int i = 0; i < 4; ++i) {
        const Matrix& u = t.u[static_cast<size_t>(i)];
        require(u.rows() == shield_dim && u.cols() == shield_dim,
                "apply_twisting: block " + std::to_string(i) + " has wrong dimension");
        const double dev =
            (u.adjoint() * u - Matrix::Identity(shield_dim, shield_dim)).cwiseAbs().maxCoeff();
        if (dev > kHermTol)
            throw validation_error("apply_twisting: block " + std::to_string(i) +
                                   " deviates from unitary by " + std::to_string(dev));
    }
    Matrix out(rho.dim(), rho.dim());
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j)
            out.block(i * shield_dim, j * shield_dim, shield_dim, shield_dim) =
                t.u[static_cast<size_t>(i)] *
                rho.entries().block(i * shield_dim, j * shield_dim, shield_dim, shield_dim) *
                t.u[static_cast<size_t>(j)].adjoint();
    return HermitianOperator(std::move(out));
}

AdBlockStats ad_block_stats(const CcqDescriptor& c, int block_size) {
    require(block_size >= 1, "ad_block_stats: block size must be at least 1");
    require(std::abs(c.agreement() + c.disagreement() - 1.0) <= kHermTol,
            "ad_block_stats: outcome probabilities must sum to 1");
    const double a = c.agreement();
    const double d = c.disagreement();
    const double an = std::pow(a, block_size);
    const double dn = std::pow(d, block_size);
    AdBlockStats stats{};
    stats.block_size = block_size;
    stats.accept_prob = an + dn;
    stats.post_error = (stats.accept_prob > 0.0) ? dn / stats.accept_prob : 0.0;
    stats.eve_overlap_effective = std::pow(c.eve_overlap, block_size);
    return stats;
}

AdBlockStats ad_monte_carlo(const CcqDescriptor& c, int block_size, long long trials,
                            std::uint64_t seed) {
    require(block_size >= 1, "ad_monte_carlo: block size must be at least 1");
    require(trials >= 1, "ad_monte_carlo: trials must be at least 1");
    const double cum01 = c.p[0][0] + c.p[0][1];
    const double cum10 = cum01 + c.p[1][0];

    long long accepted = 0;
    long long errors = 0;
    for (long long chunk = 0; chunk * kChunkTrials < trials; ++chunk) {
        Rng rng(chunk_seed(seed, chunk));
        const long long limit = std::min(kChunkTrials, trials - chunk * kChunkTrials);
        for (long long t = 0; t < limit; ++t) {
            const int secret = (rng.bits() & 1ull) ? 1 : 0;
            bool all_equal = true;
            int first_y = 0;
            for (int i = 0; i < block_size; ++i) {
                const double u = rng.uniform();
                const int alice = (u < cum10) ? (u < cum01 ? 0 : 1) : 1;
                const int bob = (u < cum01) ? (u < c.p[0][0] ? 0 : 1)
                                            : (u < cum10 ? 0 : 1);
                const int announced = secret ^ alice;
                const int y = bob ^ announced;
                if (i == 0)
                    first_y = y;
                else if (y != first_y)
                    all_equal = false;
            }
            if (all_equal) {
                ++accepted;
                if (first_y != secret) ++errors;
            }
        }
    }

    AdBlockStats stats = ad_block_stats(c, block_size);
    stats.empirical = true;
    stats.trials = trials;
    stats.accepted = accepted;
    stats.accept_prob = static_cast<double>(accepted) / static_cast<double>(trials);
    stats.post_error =
        (accepted > 0) ? static_cast<double>(errors) / static_cast<double>(accepted) : 0.0;
    stats.accept_stderr =
        std::sqrt(stats.accept_prob * (1.0 - stats.accept_prob) / static_cast<double>(trials));
    stats.error_stderr =
        (accepted > 0)
            ? std::sqrt(stats.post_error * (1.0 - stats.post_error) / static_cast<double>(accepted))
            : 0.0;
    return stats;
}

ConditionResult ad_security_check(const CcqDescriptor& c, double tol) {
    require(c.agreement() > 0.0, "ad_security_check: agreement probability is zero");
    const double margin =
        c.eve_overlap * c.eve_overlap - c.disagreement() / c.agreement();
    return ConditionResult{margin > tol, margin};
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw validation_error("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho - sigma) + 0.5 * (rho - sigma).adjoint(),
                                             Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw validation_error("fidelity: dimension mismatch");
    const Matrix root = psd_sqrt(0.5 * (rho + rho.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(root * (0.5 * (sigma + sigma.adjoint())) * root,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double eve_trace_distance(const CcqDescriptor& c, int a, int b) {
    require(c.eve_states.has_value(), "eve_trace_distance: no Eve states recorded");
    require(a >= 0 && a < 4 && b >= 0 && b < 4, "eve_trace_distance: outcome index out of range");
    return trace_distance((*c.eve_states)[static_cast<size_t>(a)],
                          (*c.eve_states)[static_cast<size_t>(b)]);
}

double eve_fidelity(const CcqDescriptor& c, int a, int b) {
    require(c.eve_states.has_value(), "eve_fidelity: no Eve states recorded");
    require(a >= 0 && a < 4 && b >= 0 && b < 4, "eve_fidelity: outcome index out of range");
    return fidelity((*c.eve_states)[static_cast<size_t>(a)],
                    (*c.eve_states)[static_cast<size_t>(b)]);
}

}  // namespace skd
