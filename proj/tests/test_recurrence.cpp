#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "skd/random.hpp"
#include "skd/recurrence.hpp"
#include "skd/shielded.hpp"

using namespace skd;

namespace {

// Fully materialized round, kept deliberately dumb: build rho (x) rho,
// conjugate by the transversal-CNOT index permutation, keep the two equal
// measured key outcomes of copy two, trace them out. Returns the survivor on
// (key, shield_1, shield_2) unnormalized; writes its trace to `success`.
Matrix materialized_survivor(const ShieldedState& s, double& success) {
    const Matrix rho = assemble_density(s).entries();
    const long ds = s.shield_dim();
    const long one = 4 * ds;
    const long two = one * one;
    Matrix big(two, two);
    for (long i = 0; i < two; ++i)
        for (long j = 0; j < two; ++j) big(i, j) = rho(i / one, j / one) * rho(i % one, j % one);

    // (k1, s1, k2, s2) -> (k1, s1, k2 XOR k1, s2); XOR acts on both key bits.
    std::vector<long> map(static_cast<size_t>(two));
    for (long i = 0; i < two; ++i) {
        const long k1 = i / (ds * one);
        const long s1 = (i / one) % ds;
        const long k2 = (i % one) / ds;
        const long s2 = i % ds;
        map[static_cast<size_t>(i)] = ((k1 * ds + s1) * 4 + (k2 ^ k1)) * ds + s2;
    }
    Matrix rotated(two, two);
    for (long i = 0; i < two; ++i)
        for (long j = 0; j < two; ++j)
            rotated(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]) = big(i, j);

    const long n = 4 * ds * ds;
    Matrix surv = Matrix::Zero(n, n);
    for (long meas : {0L, 3L})
        for (long i = 0; i < n; ++i) {
            const long k1 = i / (ds * ds);
            const long s1 = (i / ds) % ds;
            const long s2 = i % ds;
            const long bi = ((k1 * ds + s1) * 4 + meas) * ds + s2;
            for (long j = 0; j < n; ++j) {
                const long k1p = j / (ds * ds);
                const long s1p = (j / ds) % ds;
                const long s2p = j % ds;
                const long bj = ((k1p * ds + s1p) * 4 + meas) * ds + s2p;
                surv(i, j) += rotated(bi, bj);
            }
        }
    success = surv.trace().real();
    return surv;
}

// Pair-product map of one round on the shield blocks, regrouped so both
// Alice factors lead. An algebraic route independent of matrix mechanics.
std::array<HermitianOperator, 4> pair_product_blocks(const ShieldedState& s) {
    const auto [da, db] = s.shield_dims();
    const std::vector<int> dims{da, db, da, db};
    const std::vector<int> perm{0, 2, 1, 3};
    auto grouped = [&](const HermitianOperator& x) {
        return permute_systems(x, dims, perm);
    };
    const auto& g1 = s.sigma(0);
    const auto& g2 = s.sigma(1);
    const auto& g3 = s.sigma(2);
    const auto& g4 = s.sigma(3);
    const int big = 4 * da * da * db * db;
    return {grouped(tensor(g1, g1, big) + tensor(g2, g2, big)),
            grouped(tensor(g1, g2, big) + tensor(g2, g1, big)),
            grouped(tensor(g3, g3, big) + tensor(g4, g4, big)),
            grouped(tensor(g3, g4, big) + tensor(g4, g3, big))};
}

void check_round_against_oracles(const ShieldedState& s) {
    const auto [da, db] = s.shield_dims();
    const RoundResult round = explicit_round(s);

    double success = 0.0;
    const Matrix surv = materialized_survivor(s, success);
    CHECK(round.success_prob == doctest::Approx(success).epsilon(1e-12));

    // Survivor comes out on (key, A'1 B'1, A'2 B'2); the round's state stores
    // the shield regrouped as (A'1 A'2)(B'1 B'2).
    const HermitianOperator regrouped = permute_systems(
        HermitianOperator(surv), {4, da, db, da, db}, {0, 1, 3, 2, 4});
    const Matrix direct = assemble_density(round.state).entries();
    CHECK((regrouped.entries() / success - direct).cwiseAbs().maxCoeff() < 1e-10);

    const auto blocks = pair_product_blocks(s);
    for (int i = 0; i < 4; ++i) {
        const Matrix expect = blocks[static_cast<size_t>(i)].entries() / success;
        CHECK((round.state.sigma(i).entries() - expect).cwiseAbs().maxCoeff() < 1e-11);
    }
}

}  // namespace

TEST_CASE("off-diagonal coefficient of reference states") {
    CHECK(off_diagonal_r(example_4x4(0.6, 0.4)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(off_diagonal_r(horodecki_family(0.3, 2, 1)) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("closed-form sequence values") {
    const ShieldNorms n = shield_norms(example_4x4(0.6, 0.4));
    CHECK(closed_form_r(n, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(closed_form_r(n, 2) == doctest::Approx(0.36 / 1.04).epsilon(1e-12));
    CHECK(closed_form_r(n, 4) == doctest::Approx(0.1296 / 0.3104).epsilon(1e-12));
    CHECK(closed_form_r(n, 100) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(closed_form_r(n, 100000) == doctest::Approx(0.5).epsilon(1e-12));

    const ShieldNorms h = shield_norms(horodecki_family(0.3, 2, 1));
    CHECK(closed_form_r(h, 1) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(closed_form_r(h, 50) < 1e-14);

    CHECK_THROWS_AS(closed_form_r(n, 0), validation_error);
}

TEST_CASE("closed-form sequence stays within bounds and tracks the helper") {
    const ShieldedState s = example_4x4(0.55, 0.45);
    const RecurrenceTrace t = closed_form_sequence(s, 64);
    REQUIRE(t.effective_m.size() == 64);
    REQUIRE(t.r.size() == 64);
    const ShieldNorms n = shield_norms(s);
    for (size_t i = 0; i < t.r.size(); ++i) {
        CHECK(t.effective_m[i] == static_cast<long long>(i + 1));
        CHECK(t.r[i] == doctest::Approx(closed_form_r(n, t.effective_m[i])).epsilon(1e-13));
        CHECK(t.r[i] >= -1e-10);
        CHECK(t.r[i] <= 0.5 + 1e-10);
    }
    CHECK_THROWS_AS(closed_form_sequence(s, 0), validation_error);
}

TEST_CASE("sequence monotone on the reference families") {
    // Orthogonal first pair with entanglement: climbs toward 1/2.
    const RecurrenceTrace up = closed_form_sequence(example_4x4(0.6, 0.4), 50);
    for (size_t i = 1; i < up.r.size(); ++i) CHECK(up.r[i] > up.r[i - 1]);
    CHECK(up.r.back() == doctest::Approx(0.5).epsilon(1e-4));

    // Overlapping first pair: decays toward zero.
    const RecurrenceTrace down = closed_form_sequence(horodecki_family(0.3, 2, 1), 50);
    for (size_t i = 1; i < down.r.size(); ++i) CHECK(down.r[i] < down.r[i - 1]);
    CHECK(down.r.back() < 1e-14);

    // Balanced weights freeze the sequence at 1/4.
    const RecurrenceTrace flat = closed_form_sequence(example_4x4(0.5, 0.5), 10);
    for (double r : flat.r) CHECK(r == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("explicit round against materialized and algebraic oracles") {
    check_round_against_oracles(example_4x4(0.6, 0.4));
    check_round_against_oracles(example_4x4(0.45, 0.55));
    check_round_against_oracles(horodecki_family(0.35, 2, 1));

    Rng rng(777);
    check_round_against_oracles(random_shielded_state(rng, {2, 1}, false));
    check_round_against_oracles(random_shielded_state(rng, {2, 1}, true));
    check_round_against_oracles(random_shielded_state(rng, {2, 2}, false));
}

TEST_CASE("explicit round on the two-parameter state") {
    const ShieldedState s = example_4x4(0.6, 0.4);
    const RoundResult r = explicit_round(s);
    CHECK(r.success_prob == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(r.state.shield_dims() == std::pair<int, int>{4, 4});

    const ShieldNorms n = shield_norms(r.state);
    CHECK(n.sum12 == doctest::Approx(0.36 / 0.52).epsilon(1e-11));
    CHECK(n.diff12 == doctest::Approx(0.36 / 0.52).epsilon(1e-11));
    CHECK(n.sum34 == doctest::Approx(0.16 / 0.52).epsilon(1e-11));

    // One round doubles the consumed copies: r matches the closed form at m=2.
    CHECK(off_diagonal_r(r.state) ==
          doctest::Approx(closed_form_r(shield_norms(s), 2)).epsilon(1e-11));

    // Orthogonality of the first pair survives the round.
    CHECK(trace_product(r.state.sigma(0), r.state.sigma(1)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(explicit_round(s, 60), resource_error);
}

TEST_CASE("round success probability is the squared-sum rule on random states") {
    Rng rng(31337);
    for (int trial = 0; trial < 4; ++trial) {
        const ShieldedState s = random_shielded_state(rng, {2, 1}, trial % 2 == 0);
        const ShieldNorms n = shield_norms(s);
        const RoundResult r = explicit_round(s);
        CHECK(r.success_prob ==
              doctest::Approx(n.sum12 * n.sum12 + n.sum34 * n.sum34).epsilon(1e-10));
        CHECK(off_diagonal_r(r.state) ==
              doctest::Approx(closed_form_r(n, 2)).epsilon(1e-10));
    }
}

TEST_CASE("iterated rounds follow the doubling closed form until the budget ends") {
    const ShieldedState s = example_4x4(0.6, 0.4);
    const ShieldNorms n = shield_norms(s);
    const RecurrenceTrace t = iterate(s, 2);
    REQUIRE(t.rounds_completed == 2);
    CHECK_FALSE(t.truncated);
    REQUIRE(t.effective_m.size() == 2);
    CHECK(t.effective_m[0] == 2);
    CHECK(t.effective_m[1] == 4);
    CHECK(t.r[0] == doctest::Approx(closed_form_r(n, 2)).epsilon(1e-10));
    CHECK(t.r[1] == doctest::Approx(closed_form_r(n, 4)).epsilon(1e-10));
    CHECK(t.success_prob[0] == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(t.success_prob[1] == doctest::Approx(0.1552 / 0.2704).epsilon(1e-10));

    // The third round would need dimension 4 * 256^2.
    const RecurrenceTrace cut = iterate(s, 3);
    CHECK(cut.truncated);
    CHECK(cut.rounds_completed == 2);

    CHECK_THROWS_AS(iterate(s, 0), validation_error);
}

TEST_CASE("convergence detection") {
    CHECK(converges_to_private(example_4x4(0.6, 0.4)));
    CHECK(converges_to_private(example_4x4(1.0, 0.0)));
    CHECK_FALSE(converges_to_private(example_4x4(0.5, 0.5)));
    CHECK_FALSE(converges_to_private(example_4x4(0.4, 0.6)));
    CHECK_FALSE(converges_to_private(horodecki_family(0.3, 2, 1)));
    CHECK_FALSE(converges_to_private(horodecki_family(0.45, 2, 1)));

    // Tiny m budget stops short of the target.
    CHECK_FALSE(converges_to_private(example_4x4(0.55, 0.45), 1e-6, 10));
    CHECK(converges_to_private(example_4x4(0.55, 0.45), 1e-6, 1000));

    CHECK_THROWS_AS(converges_to_private(example_4x4(0.6, 0.4), 0.0, 10), validation_error);
    CHECK_THROWS_AS(converges_to_private(example_4x4(0.6, 0.4), 1e-3, 0), validation_error);
}
