#pragma once

#include <vector>

#include "skd/shielded.hpp"

namespace skd {

/// Record of the key off-diagonal coefficient r over protocol progress.
/// Entry i refers to an effective number of consumed copies effective_m[i];
/// explicit simulation fills success_prob per round, the closed form leaves
/// it empty. When a round would exceed the dimension budget the trace stops
/// early with `truncated` set.
struct RecurrenceTrace {
    std::vector<long long> effective_m;
    std::vector<double> r;
    std::vector<double> success_prob;
    bool truncated = false;
    int rounds_completed = 0;
};

/// r of the state itself: trace norm of <00| rho |11> = ||sigma_1 - sigma_2|| / 2.
double off_diagonal_r(const ShieldedState& s);

/// Closed-form r_m = ||s1-s2||^m / (2 ||s1+s2||^m + 2 ||s3+s4||^m),
/// evaluated through ratio powers so large m stays finite.
double closed_form_r(const ShieldNorms& n, long long m);

/// r_m for m = 1..m_max.
RecurrenceTrace closed_form_sequence(const ShieldedState& s, int m_max);

struct RoundResult {
    ShieldedState state;
    double success_prob;
};

/// One recurrence round by direct matrix mechanics: two copies of the
/// assembled state, transversal CNOTs from copy one onto copy two on both
/// sides, computational measurement of copy two's key qubits, post-selection
/// on equal outcomes (both branches kept), copy two's key traced out. The
/// survivor is refactored into shielded form; a key block off the Bell
/// diagonal above 1e-9 aborts, since the round must preserve the form.
RoundResult explicit_round(const ShieldedState& s, int max_dim = kDefaultMaxDim);

/// `rounds` explicit rounds, each feeding two copies of its predecessor, so
/// entry k covers 2^(k+1) original copies. Requires rounds >= 1.
RecurrenceTrace iterate(const ShieldedState& s, int rounds, int max_dim = kDefaultMaxDim);

/// Whether the closed-form sequence reaches 1/2 - tol by m_max copies.
bool converges_to_private(const ShieldedState& s, double tol = 1e-3,
                          long long m_max = 10000);

}  // namespace skd
