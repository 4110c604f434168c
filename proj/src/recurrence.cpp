#include "skd/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skd {

double off_diagonal_r(const ShieldedState& s) {
    return trace_norm(key_off_diagonal_block(s));
}

double closed_form_r(const ShieldNorms& n, long long m) {
    if (m < 1) throw validation_error("closed_form_r: m must be at least 1");
    const double top = std::max(n.sum12, n.sum34);
    if (top <= 0.0) return 0.0;
    // Powers of ratios <= 1 keep the quotient finite for any m.
    const double xb = std::pow(n.diff12 / top, static_cast<double>(m));
    const double xa = std::pow(n.sum12 / top, static_cast<double>(m));
    const double xc = std::pow(n.sum34 / top, static_cast<double>(m));
    return xb / (2.0 * (xa + xc));
}

RecurrenceTrace closed_form_sequence(const ShieldedState& s, int m_max) {
    if (m_max < 1) throw validation_error("closed_form_sequence: m_max must be at least 1");
    const ShieldNorms n = shield_norms(s);
    RecurrenceTrace trace;
    trace.effective_m.reserve(static_cast<size_t>(m_max));
    trace.r.reserve(static_cast<size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        trace.effective_m.push_back(m);
        trace.r.push_back(closed_form_r(n, m));
    }
    return trace;
}

RoundResult explicit_round(const ShieldedState& s, int max_dim) {
    const auto [da, db] = s.shield_dims();
    const long ds = static_cast<long>(da) * db;
    const long out_dim = 4L * ds * ds;
    if (out_dim > max_dim)
        throw resource_error("explicit_round: output dimension " + std::to_string(out_dim) +
                             " exceeds limit " + std::to_string(max_dim));

    const HermitianOperator assembled = assemble_density(s, max_dim);
    const Matrix& rho = assembled.entries();

    // Entry of the post-selected two-copy state, with the transversal CNOTs
    // folded into the second-copy index (k2 -> k2 XOR k1 on the two key
    // bits) and the measured key pair of copy two fixed to the equal
    // outcomes 00 and 11 (block indices 0 and 3) and traced.
    Matrix out(out_dim, out_dim);
    for (long i = 0; i < out_dim; ++i) {
        const long k1 = i / (ds * ds);
        const long s1 = (i / ds) % ds;
        const long s2 = i % ds;
        for (long j = 0; j < out_dim; ++j) {
            const long k1p = j / (ds * ds);
            const long s1p = (j / ds) % ds;
            const long s2p = j % ds;
            Complex acc = 0.0;
            for (long meas : {0L, 3L}) {
                acc += rho(k1 * ds + s1, k1p * ds + s1p) *
                       rho((meas ^ k1) * ds + s2, (meas ^ k1p) * ds + s2p);
            }
            out(i, j) = acc;
        }
    }

    const double success = out.trace().real();
    out /= success;

    // Refactor into shielded form: contract each Bell projector over the
    // surviving key pair, then regroup the doubled shield so both Alice
    // factors precede both Bob factors.
    const auto& bells = bell_basis();
    std::array<HermitianOperator, 4> sigma_out = [&] {
        std::array<Matrix, 4> blocks;
        for (int b = 0; b < 4; ++b) {
            const Vector& phi = bells[static_cast<size_t>(b)].amplitudes();
            Matrix acc = Matrix::Zero(ds * ds, ds * ds);
            for (long k = 0; k < 4; ++k)
                for (long kp = 0; kp < 4; ++kp) {
                    const Complex w = std::conj(phi(k)) * phi(kp);
                    if (w != 0.0)
                        acc += w * out.block(k * ds * ds, kp * ds * ds, ds * ds, ds * ds);
                }
            blocks[static_cast<size_t>(b)] = std::move(acc);
        }
        const std::vector<int> dims{da, db, da, db};
        const std::vector<int> perm{0, 2, 1, 3};
        return std::array<HermitianOperator, 4>{
            permute_systems(HermitianOperator(blocks[0]), dims, perm),
            permute_systems(HermitianOperator(blocks[1]), dims, perm),
            permute_systems(HermitianOperator(blocks[2]), dims, perm),
            permute_systems(HermitianOperator(blocks[3]), dims, perm)};
    }();

    // The round must reproduce the Bell-block form exactly; anything left
    // outside those blocks means the mechanics above are broken.
    Matrix residue = out;
    for (int b = 0; b < 4; ++b) {
        const Vector& phi = bells[static_cast<size_t>(b)].amplitudes();
        const Matrix sig = permute_systems(sigma_out[static_cast<size_t>(b)],
                                           {da, da, db, db}, {0, 2, 1, 3})
                               .entries();
        for (long k = 0; k < 4; ++k)
            for (long kp = 0; kp < 4; ++kp) {
                const Complex w = phi(k) * std::conj(phi(kp));
                if (w != 0.0) residue.block(k * ds * ds, kp * ds * ds, ds * ds, ds * ds) -= w * sig;
            }
    }
    if (residue.cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error("explicit_round: survivor is not Bell-block-diagonal");

    ShieldedState next =
        ShieldedState::create(std::move(sigma_out), {da * da, db * db});
    return RoundResult{std::move(next), success};
}

RecurrenceTrace iterate(const ShieldedState& s, int rounds, int max_dim) {
    if (rounds < 1) throw validation_error("iterate: rounds must be at least 1");
    RecurrenceTrace trace;
    ShieldedState current = s;
    long long m = 1;
    for (int k = 0; k < rounds; ++k) {
        try {
            RoundResult res = explicit_round(current, max_dim);
            current = std::move(res.state);
            m *= 2;
            trace.effective_m.push_back(m);
            trace.r.push_back(off_diagonal_r(current));
            trace.success_prob.push_back(res.success_prob);
            trace.rounds_completed = k + 1;
        } catch (const resource_error&) {
            trace.truncated = true;
            break;
        }
    }
    return trace;
}

bool converges_to_private(const ShieldedState& s, double tol, long long m_max) {
    if (tol <= 0.0) throw validation_error("converges_to_private: tol must be positive");
    if (m_max < 1) throw validation_error("converges_to_private: m_max must be at least 1");
    const ShieldNorms n = shield_norms(s);
    const double top = std::max(n.sum12, n.sum34);
    if (top <= 0.0) return false;
    const double rb = n.diff12 / top;
    const double ra = n.sum12 / top;
    const double rc = n.sum34 / top;
    double xb = 1.0, xa = 1.0, xc = 1.0;
    for (long long m = 1; m <= m_max; ++m) {
        xb *= rb;
        xa *= ra;
        xc *= rc;
        const double r = xb / (2.0 * (xa + xc));
        if (r >= 0.5 - tol) return true;
        if (xb < 1e-15) break;  // the numerator only shrinks from here
    }
    return false;
}

}  // namespace skd
