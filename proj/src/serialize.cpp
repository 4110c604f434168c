#include "skd/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace skd {

namespace {

const json& get_field(const json& j, const std::string& name) {
    if (!j.is_object() || !j.contains(name))
        throw validation_error("field '" + name + "': missing");
    return j.at(name);
}

double get_number(const json& j, const std::string& name) {
    const json& f = get_field(j, name);
    if (!f.is_number()) throw validation_error("field '" + name + "': expected a number");
    return f.get<double>();
}

int get_int(const json& j, const std::string& name) {
    const json& f = get_field(j, name);
    if (!f.is_number_integer()) throw validation_error("field '" + name + "': expected an integer");
    return f.get<int>();
}

std::string get_string(const json& j, const std::string& name) {
    const json& f = get_field(j, name);
    if (!f.is_string()) throw validation_error("field '" + name + "': expected a string");
    return f.get<std::string>();
}

}  // namespace

json matrix_to_json(const HermitianOperator& a) {
    json rows = json::array();
    for (int i = 0; i < a.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < a.dim(); ++j) {
            const Complex z = a.entries()(i, j);
            row.push_back(json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return json{{"dim", a.dim()}, {"entries", std::move(rows)}};
}

HermitianOperator matrix_from_json(const json& j, const std::string& field) {
    const int n = [&] {
        try {
            return get_int(j, "dim");
        } catch (const validation_error& e) {
            throw validation_error("field '" + field + "': " + e.what());
        }
    }();
    if (n < 1) throw validation_error("field '" + field + ".dim': must be positive");
    const json& rows = get_field(j, "entries");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw validation_error("field '" + field + ".entries': expected " + std::to_string(n) +
                               " rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows.at(static_cast<size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw validation_error("field '" + field + ".entries[" + std::to_string(i) +
                                   "]': expected " + std::to_string(n) + " pairs");
        for (int k = 0; k < n; ++k) {
            const json& cell = row.at(static_cast<size_t>(k));
            if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
                !cell.at(1).is_number())
                throw validation_error("field '" + field + ".entries[" + std::to_string(i) + "][" +
                                       std::to_string(k) + "]': expected [re, im]");
            m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    try {
        return HermitianOperator(std::move(m));
    } catch (const validation_error& e) {
        throw validation_error("field '" + field + "': " + e.what());
    }
}

json state_to_json(const ShieldedState& s) {
    json sigma = json::array();
    for (int i = 0; i < 4; ++i) sigma.push_back(matrix_to_json(s.sigma(i)));
    return json{{"family", "explicit"},
                {"sigma", std::move(sigma)},
                {"shield_dims", json::array({s.shield_dims().first, s.shield_dims().second})}};
}

ShieldedState parse_state_spec(const json& j, int max_dim) {
    const std::string family = get_string(j, "family");
    auto build = [&]() -> ShieldedState {
        if (family == "horodecki")
            return horodecki_family(get_number(j, "p"), get_int(j, "d"), get_int(j, "l"), max_dim);
        if (family == "example4x4")
            return example_4x4(get_number(j, "q1"), get_number(j, "q2"));
        if (family == "explicit") {
            const json& sig = get_field(j, "sigma");
            if (!sig.is_array() || sig.size() != 4)
                throw validation_error("field 'sigma': expected an array of 4 matrices");
            const json& dims = get_field(j, "shield_dims");
            if (!dims.is_array() || dims.size() != 2 || !dims.at(0).is_number_integer() ||
                !dims.at(1).is_number_integer())
                throw validation_error("field 'shield_dims': expected [dA, dB]");
            std::array<HermitianOperator, 4> sigma{
                matrix_from_json(sig.at(0), "sigma[0]"), matrix_from_json(sig.at(1), "sigma[1]"),
                matrix_from_json(sig.at(2), "sigma[2]"), matrix_from_json(sig.at(3), "sigma[3]")};
            const int da = dims.at(0).get<int>();
            const int db = dims.at(1).get<int>();
            if (static_cast<long>(da) * db > max_dim)
                throw resource_error("field 'shield_dims': dimension exceeds limit " +
                                     std::to_string(max_dim));
            return ShieldedState::create(std::move(sigma), {da, db});
        }
        throw validation_error("field 'family': unknown family '" + family + "'");
    };
    ShieldedState s = build();
    if (j.is_object() && j.contains("noise_eps")) {
        if (!j.at("noise_eps").is_number())
            throw validation_error("field 'noise_eps': expected a number");
        s = add_white_noise(s, j.at("noise_eps").get<double>());
    }
    return s;
}

json spectrum_to_json(const KeySpectrum& k) {
    return json{{"lambda", json::array({k.lambda[0], k.lambda[1], k.lambda[2], k.lambda[3]})}};
}

json verdict_to_json(const Verdict& v) {
    json out{{"entangled", v.entangled},
             {"entangled_margin", v.entangled_margin},
             {"recurrence_ok", v.recurrence_ok},
             {"recurrence_margin", v.recurrence_margin},
             {"ad_ok", v.ad_ok},
             {"ad_margin", v.ad_margin}};
    if (v.ppt_evaluated) {
        out["ppt"] = v.ppt;
        out["ppt_margin"] = v.ppt_margin;
    } else {
        out["ppt"] = nullptr;
        out["ppt_margin"] = nullptr;
    }
    return out;
}

json ccq_to_json(const CcqDescriptor& c) {
    return json{{"p", json::array({json::array({c.p[0][0], c.p[0][1]}),
                                   json::array({c.p[1][0], c.p[1][1]})})},
                {"eve_overlap", c.eve_overlap}};
}

json ad_stats_to_json(const AdBlockStats& s) {
    json out{{"block_size", s.block_size},
             {"accept_prob", s.accept_prob},
             {"post_error", s.post_error},
             {"eve_overlap_effective", s.eve_overlap_effective}};
    if (s.empirical) {
        out["trials"] = s.trials;
        out["accepted"] = s.accepted;
        out["accept_stderr"] = s.accept_stderr;
        out["error_stderr"] = s.error_stderr;
    }
    return out;
}

std::string fmt_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return std::string(buf);
}

}  // namespace skd
