#pragma once

// JSON input and output. Exact values travel as strings "p/q"; integer
// inputs may also be plain JSON numbers.

#include "coszero/bounds.hpp"
#include "coszero/harness.hpp"
#include "coszero/periodic.hpp"
#include "coszero/zeros.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) {
        // only exactly integral floats are accepted
        const double d = j.get<double>();
        if (d != std::floor(d) || std::abs(d) > 9e15) throw std::invalid_argument("non-integral number; write it as a string \"p/q\"");
        return Rational(static_cast<long>(d));
    }
    throw std::invalid_argument("expected a rational (string or integer)");
}

inline RationalVector rationals_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array");
    RationalVector out;
    for (const auto& x : j) out.push_back(rational_from_json(x));
    return out;
}

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const RationalVector& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

/// {"coeffs": [C_0, C_1, ...]} or {"set": [a, ...]}.
inline CosinePolynomial polynomial_from_json(const Json& j) {
    if (j.contains("coeffs")) return CosinePolynomial(rationals_from_json(j.at("coeffs")));
    if (j.contains("set")) {
        std::vector<long> A;
        for (const auto& a : j.at("set")) {
            if (!a.is_number_integer() || a.get<long>() < 0) throw std::invalid_argument("set elements must be non-negative integers");
            A.push_back(a.get<long>());
        }
        return CosinePolynomial::from_set(A);
    }
    throw std::invalid_argument("expected {\"coeffs\": [...]} or {\"set\": [...]}");
}

inline Json polynomial_to_json(const CosinePolynomial& f) { return Json{{"coeffs", to_json(f.coeffs())}}; }

/// {"sequence": [...]}, or a polynomial whose coefficients C_0..C_n are used.
inline RationalVector sequence_from_json(const Json& j) {
    if (j.contains("sequence")) return rationals_from_json(j.at("sequence"));
    return polynomial_from_json(j).coeffs();
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

inline Json zero_certificate_to_json(const CosinePolynomial& f, const ZeroCertificate& c) {
    return Json{{"schema", kSchema},
                {"degree", f.degree()},
                {"method", to_string(c.method)},
                {"exact", c.exact()},
                {"distinct_zeros", c.distinct_zero_count},
                {"sign_changes", 2 * c.sign_changes()},
                {"zero_at_0", c.multiplicity_at_zero > 0},
                {"zero_at_pi", c.multiplicity_at_pi > 0}};
}

inline Json fast_count_to_json(const CosinePolynomial& f, const FastZeroCount& c) {
    return Json{{"schema", kSchema},
                {"degree", f.degree()},
                {"method", "fast-grid"},
                {"exact", false},
                {"distinct_zeros_lower_bound", c.lower_bound},
                {"sign_changes", 2 * c.sign_changes},
                {"grid", c.m},
                {"roundoff_bound", c.roundoff_bound},
                {"ambiguous_points", c.ambiguous_points},
                {"reevaluated_points", c.reevaluated_points}};
}

inline Json decomposition_to_json(const PeriodicDecomposition& d) {
    Json comps = Json::array();
    for (const auto& c : d.components) comps.push_back(Json{{"period", c.period}, {"pattern", to_json(c.pattern)}});
    return Json{{"schema", kSchema},
                {"range", Json::array({d.lo, d.hi})},
                {"components", comps},
                {"rank", d.rank},
                {"period_bound", d.period_bound},
                {"bound_ok", d.bound_ok},
                {"flagged_periods", d.flagged_periods},
                {"certification", d.certification},
                {"warning", d.warning}};
}

inline PeriodicDecomposition decomposition_from_json(const Json& j) {
    PeriodicDecomposition d;
    const auto& r = j.at("range");
    d.lo = r.at(0).get<long>();
    d.hi = r.at(1).get<long>();
    for (const auto& c : j.at("components")) {
        PeriodicComponent pc;
        pc.period = c.at("period").get<long>();
        pc.pattern = rationals_from_json(c.at("pattern"));
        if (pc.period < 1 || static_cast<long>(pc.pattern.size()) != pc.period)
            throw std::invalid_argument("component pattern length must equal its period");
        d.components.push_back(std::move(pc));
    }
    if (j.contains("rank")) d.rank = j.at("rank").get<long>();
    if (j.contains("certification")) d.certification = j.at("certification").get<std::string>();
    return d;
}

/// Decimal rendering of an exact rational, for reports.
inline std::string decimal(const Rational& q, int digits = 30) {
    Mpfr x(bound_precision());
    x.set(q, MPFR_RNDN);
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x.get());
    return buf.data();
}

struct BoundReport {
    std::string bound_name;
    Json inputs = Json::object();
    std::string bound_value;   // decimal
    double bound_double = 0;   // rounded down
    std::optional<double> measured;
    std::string tolerance;
    bool satisfied = true;
    std::string note;
};

inline Json to_json(const BoundReport& b) {
    Json j{{"schema", kSchema},
           {"bound_name", b.bound_name},
           {"inputs", b.inputs},
           {"bound_value", b.bound_value},
           {"bound_value_double", b.bound_double},
           {"precision_bits", bound_precision()}};
    if (b.measured) {
        j["measured_value"] = *b.measured;
        j["tolerance"] = b.tolerance;
        j["satisfied"] = b.satisfied;
    } else {
        j["measured_value"] = nullptr;
        j["satisfied"] = nullptr;
    }
    j["note"] = b.note;
    return j;
}

inline Json to_json(const SuiteResult& r) {
    return Json{{"name", r.name},     {"passed", r.passed},
                {"cases", r.cases},   {"detail", r.detail},
                {"counterexample", r.counterexample.empty() ? Json(nullptr) : Json::parse(r.counterexample)}};
}

/// Seconds are left out so that equal seeds give identical bytes.
inline Json to_json(const SuiteReport& rep) {
    Json suites = Json::array();
    for (const auto& s : rep.suites) suites.push_back(to_json(s));
    return Json{{"schema", kSchema}, {"seed", rep.seed}, {"scale", rep.scale}, {"passed", rep.passed}, {"suites", suites}};
}

inline Json to_json(const SearchState& s, const SearchOptions& opt) {
    Json j{{"schema", kSchema},
           {"N", opt.N},
           {"strategy", to_string(opt.strategy)},
           {"seed", s.seed},
           {"iterations", s.iteration},
           {"universe", s.universe},
           {"objective", s.objective_exact ? "exact" : "fast"},
           {"accepted_moves", s.accepted},
           {"current", Json{{"set", s.A}, {"zeros", s.zeros}}},
           {"best", Json{{"set", s.best}, {"zeros", s.best_zeros}}}};
    j["exact_recount"] = s.exact_recount ? Json(*s.exact_recount) : Json(nullptr);
    return j;
}

inline std::string search_plot_data(const SearchState& s) {
    std::string out = "# iteration best_zeros\n";
    for (std::size_t i = 0; i < s.best_trace.size(); ++i) out += std::to_string(i + 1) + " " + std::to_string(s.best_trace[i]) + "\n";
    return out;
}

}  // namespace coszero
