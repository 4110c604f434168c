#pragma once

#include <json.hpp>

#include <string>

#include "skd/ccq.hpp"
#include "skd/criteria.hpp"
#include "skd/shielded.hpp"

namespace skd {

// Field order is fixed (ordered_json) so equal inputs serialize to equal
// bytes; command output relies on that for reproducibility.
using json = nlohmann::ordered_json;

/// {"dim": n, "entries": [[[re, im], ...], ...]} row-major.
json matrix_to_json(const HermitianOperator& a);

/// Inverse of matrix_to_json. `field` names the source location in errors.
HermitianOperator matrix_from_json(const json& j, const std::string& field);

/// State description as consumed by parse_state_spec, family "explicit".
json state_to_json(const ShieldedState& s);

/// Builds a shielded state from a JSON description. Families:
///   {"family": "horodecki", "p": .., "d": .., "l": ..}
///   {"family": "example4x4", "q1": .., "q2": ..}
///   {"family": "explicit", "sigma": [M1..M4], "shield_dims": [dA, dB]}
/// An optional "noise_eps" applies shield white noise afterwards. Errors
/// name the offending field.
ShieldedState parse_state_spec(const json& j, int max_dim = kDefaultMaxDim);

json spectrum_to_json(const KeySpectrum& k);
json verdict_to_json(const Verdict& v);
json ccq_to_json(const CcqDescriptor& c);
json ad_stats_to_json(const AdBlockStats& s);

/// Shortest decimal form at the given significance; used for CSV cells.
std::string fmt_sig(double x, int digits = 12);

}  // namespace skd
