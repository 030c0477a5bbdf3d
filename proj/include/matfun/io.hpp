#ifndef MATFUN_IO_HPP
#define MATFUN_IO_HPP

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "critical.hpp"
#include "error.hpp"
#include "jordan.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"
#include "solver.hpp"

namespace matfun {

using nlohmann::json;

// --- backend descriptors ---

inline json backend_to_json(const Backend& bk) {
    switch (bk.kind()) {
        case BackendKind::PrimeField: return {{"kind", "Fq"}, {"p", bk.p()}, {"m", 1}};
        case BackendKind::ExtField: {
            json mod = json::array();
            for (auto c : bk.modulus()) mod.push_back(c);
            return {{"kind", "Fq"}, {"p", bk.p()}, {"m", bk.ext_degree()}, {"modulus", mod}};
        }
        case BackendKind::Rational: return {{"kind", "Q"}};
        case BackendKind::NumberField: {
            json mp = json::array();
            for (const auto& c : bk.minpoly()) {
                std::ostringstream os;
                os << c;
                mp.push_back(os.str());
            }
            return {{"kind", "NF"}, {"minpoly", mp}};
        }
        case BackendKind::ComplexFloat: return {{"kind", "C"}, {"eps", bk.eps()}};
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad rational literal: " + s);
    }
}

inline Backend backend_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "Fq") {
        std::uint64_t p = j.at("p").get<std::uint64_t>();
        unsigned m = j.value("m", 1u);
        if (m == 1) return Backend::prime_field(p);
        if (j.contains("modulus")) {
            detail::FpPoly mod;
            for (const auto& c : j.at("modulus")) mod.push_back(c.get<std::uint64_t>());
            return Backend::ext_field(p, m, std::move(mod));
        }
        return Backend::finite_field(p, m);
    }
    if (kind == "Q") return Backend::rationals();
    if (kind == "NF") {
        detail::QPoly mp;
        for (const auto& c : j.at("minpoly")) mp.push_back(parse_rational(c.get<std::string>()));
        return Backend::number_field(std::move(mp));
    }
    if (kind == "C") return Backend::complex_floats(j.value("eps", 1e-8));
    throw Error(ErrorCode::ParseError, "unknown backend kind: " + kind);
}

// compact descriptors: "Q", "C", "C:1e-10", "F5", "F2^4", or a JSON object
inline Backend backend_from_string(const std::string& s, double default_eps = 1e-8) {
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty backend descriptor");
    if (s.front() == '{') {
        json j = json::parse(s, nullptr, true);
        return backend_from_json(j);
    }
    if (s == "Q") return Backend::rationals();
    if (s == "C") return Backend::complex_floats(default_eps);
    if (s.rfind("C:", 0) == 0) return Backend::complex_floats(std::stod(s.substr(2)));
    if (s.front() == 'F') {
        auto caret = s.find('^');
        try {
            if (caret == std::string::npos) return Backend::prime_field(std::stoull(s.substr(1)));
            std::uint64_t p = std::stoull(s.substr(1, caret - 1));
            unsigned m = static_cast<unsigned>(std::stoul(s.substr(caret + 1)));
            return Backend::finite_field(p, m);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad finite field descriptor: " + s);
        }
    }
    throw Error(ErrorCode::ParseError, "unknown backend descriptor: " + s);
}

// --- elements ---

inline json element_to_json(const FieldElement& a) {
    if (a.backend().kind() == BackendKind::ComplexFloat)
        return json::array({a.complex().real(), a.complex().imag()});
    return to_string(a);
}

inline FieldElement element_from_string(const Backend& bk, const std::string& s) {
    switch (bk.kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField:
        case BackendKind::NumberField: {
            // comma-separated coefficient list (single entry for prime fields)
            std::vector<std::string> parts;
            std::string cur;
            for (char c : s) {
                if (c == ',') {
                    parts.push_back(cur);
                    cur.clear();
                } else if (!std::isspace(static_cast<unsigned char>(c))) {
                    cur += c;
                }
            }
            parts.push_back(cur);
            if (bk.kind() == BackendKind::PrimeField) {
                if (parts.size() != 1) throw Error(ErrorCode::ParseError, "prime field element is one residue");
                Rational r = parse_rational(parts[0]);
                return bk.from_rational(r);
            }
            if (bk.kind() == BackendKind::ExtField) {
                detail::FpPoly c;
                for (const auto& p : parts) c.push_back(std::stoull(p) % bk.p());
                detail::fp_trim(c);
                if (c.size() > bk.ext_degree()) throw Error(ErrorCode::ParseError, "too many coefficients");
                return FieldElement(bk, std::move(c));
            }
            detail::QPoly c;
            for (const auto& p : parts) c.push_back(parse_rational(p));
            detail::q_trim(c);
            if (c.size() > bk.ext_degree()) throw Error(ErrorCode::ParseError, "too many coefficients");
            return FieldElement(bk, std::move(c));
        }
        case BackendKind::Rational: return bk.from_rational(parse_rational(s));
        case BackendKind::ComplexFloat: return FieldElement(bk, Complex(std::stod(s), 0));
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement element_from_json(const Backend& bk, const json& j) {
    if (j.is_string()) return element_from_string(bk, j.get<std::string>());
    if (j.is_number_integer()) return bk.from_int(j.get<long long>());
    if (j.is_number_float()) {
        if (bk.kind() != BackendKind::ComplexFloat)
            throw Error(ErrorCode::ParseError, "float literal on an exact backend; use a string");
        return FieldElement(bk, Complex(j.get<double>(), 0));
    }
    if (j.is_array() && j.size() == 2 && bk.kind() == BackendKind::ComplexFloat)
        return FieldElement(bk, Complex(j[0].get<double>(), j[1].get<double>()));
    throw Error(ErrorCode::ParseError, "cannot parse element: " + j.dump());
}

// --- polynomials ---

inline json poly_to_json(const Polynomial& f) {
    json coeffs = json::array();
    for (const auto& c : f.coeffs()) coeffs.push_back(element_to_json(c));
    return {{"backend", backend_to_json(f.backend())}, {"coeffs", coeffs}};
}

inline Polynomial poly_from_json(const json& j) {
    Backend bk = backend_from_json(j.at("backend"));
    std::vector<FieldElement> c;
    for (const auto& x : j.at("coeffs")) c.push_back(element_from_json(bk, x));
    return Polynomial(bk, std::move(c));
}

// inline grammar: sums of terms "c", "c x", "c x^k" with integer or rational
// coefficients and variable x, e.g. "x^3 - 3x" or "1/2x^2 + 3"
inline Polynomial poly_from_text(const Backend& bk, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial");
    std::vector<std::pair<Rational, std::size_t>> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::string num;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) num += s[i++];
        if (i < s.size() && s[i] == '*') ++i;
        Rational coef = num.empty() ? Rational(1) : parse_rational(num);
        std::size_t expn = 0;
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            ++i;
            expn = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e += s[i++];
                if (e.empty()) throw Error(ErrorCode::ParseError, "missing exponent at position " + std::to_string(i));
                expn = std::stoul(e);
            }
        } else if (num.empty()) {
            throw Error(ErrorCode::ParseError, "unexpected character at position " + std::to_string(i));
        }
        if (sign < 0) coef = -coef;
        terms.emplace_back(coef, expn);
    }
    std::size_t maxdeg = 0;
    for (const auto& [c, e] : terms) maxdeg = std::max(maxdeg, e);
    std::vector<FieldElement> coeffs(maxdeg + 1, bk.zero());
    for (const auto& [c, e] : terms) coeffs[e] = add(coeffs[e], bk.from_rational(c));
    return Polynomial(bk, std::move(coeffs));
}

// --- matrices ---

inline json matrix_to_json(const SquareMatrix& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(element_to_json(a.at(i, j)));
        rows.push_back(row);
    }
    return {{"backend", backend_to_json(a.backend())}, {"n", a.dim()}, {"rows", rows}};
}

inline SquareMatrix matrix_from_rows_json(const Backend& bk, const json& rows) {
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::ParseError, "matrix rows must be a non-empty array");
    std::size_t n = rows.size();
    std::vector<FieldElement> entries;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n) throw Error(ErrorCode::ParseError, "matrix must be square");
        for (const auto& x : row) entries.push_back(element_from_json(bk, x));
    }
    return SquareMatrix(bk, n, std::move(entries));
}

inline SquareMatrix matrix_from_json(const json& j) {
    if (j.is_array()) throw Error(ErrorCode::ParseError, "matrix object needs a backend; use matrix_from_rows_json");
    Backend bk = backend_from_json(j.at("backend"));
    return matrix_from_rows_json(bk, j.at("rows"));
}

// --- analysis and solver reports ---

inline json critical_set_to_json(const CriticalSet& cs) {
    json j;
    switch (cs.kind) {
        case CriticalKind::Empty: j["kind"] = "empty"; break;
        case CriticalKind::AllValues: j["kind"] = "all"; break;
        case CriticalKind::Finite: {
            j["kind"] = "finite";
            json vals = json::array();
            for (const auto& v : cs.values) {
                json witness = json::array();
                for (const auto& w : v.witness)
                    witness.push_back({{"root", element_to_json(w.root)},
                                       {"multiplicity", w.multiplicity},
                                       {"fprime", element_to_json(w.fprime_value)}});
                vals.push_back({{"t", element_to_json(v.t)},
                                {"field", backend_to_json(v.field)},
                                {"witness", witness}});
            }
            j["values"] = vals;
            break;
        }
    }
    if (!cs.ambiguous.empty()) {
        json amb = json::array();
        for (const auto& a : cs.ambiguous) amb.push_back(element_to_json(a));
        j["ambiguous"] = amb;
    }
    if (!cs.notes.empty()) j["notes"] = cs.notes;
    if (cs.exactness_downgraded) j["exactness_downgraded"] = true;
    return j;
}

inline json certificate_to_json(const CriticalBlockCertificate& c) {
    json fiber = json::array();
    for (const auto& w : c.fiber)
        fiber.push_back({{"root", element_to_json(w.root)},
                         {"multiplicity", w.multiplicity},
                         {"fprime", element_to_json(w.fprime_value)}});
    return {{"t", element_to_json(c.t)},
            {"field", backend_to_json(c.t.backend())},
            {"blocksize", c.blocksize},
            {"fiber", fiber}};
}

inline CriticalBlockCertificate certificate_from_json(const json& j) {
    Backend field = backend_from_json(j.at("field"));
    FieldElement t = element_from_json(field, j.at("t"));
    std::vector<WitnessRoot> fiber;
    for (const auto& w : j.at("fiber")) {
        FieldElement root = element_from_json(field, w.at("root"));
        FieldElement fpv = element_from_json(field, w.at("fprime"));
        fiber.push_back({root, w.at("multiplicity").get<unsigned>(), fpv});
    }
    return {t, j.at("blocksize").get<std::size_t>(), std::move(fiber)};
}

inline json solve_outcome_to_json(const SolveOutcome& o) {
    json j;
    switch (o.kind) {
        case SolveKind::Preimage: {
            j["kind"] = "preimage";
            j["X"] = matrix_to_json(*o.preimage);
            json us = json::array();
            for (const auto& u : o.block_witnesses) us.push_back(element_to_json(u));
            j["block_witnesses"] = us;
            break;
        }
        case SolveKind::NoPreimage:
            j["kind"] = "no_preimage";
            j["certificate"] = certificate_to_json(*o.certificate);
            break;
        case SolveKind::NotInDomain: {
            j["kind"] = "not_in_domain";
            json off = json::array();
            for (const auto& v : o.offending) off.push_back(element_to_json(v));
            j["offending_eigenvalues"] = off;
            break;
        }
        case SolveKind::Undetermined:
            j["kind"] = "undetermined";
            j["reason"] = o.reason;
            break;
    }
    return j;
}

inline json jordan_to_json(const JordanDecomposition& d) {
    json blocks = json::array();
    for (const auto& b : d.blocks)
        blocks.push_back({{"eigenvalue", element_to_json(b.eigenvalue)}, {"size", b.size}});
    return {{"blocks", blocks}, {"transform", matrix_to_json(d.transform)}, {"field", backend_to_json(d.field)}};
}

inline json oracle_report_to_json(const OracleReport& r) {
    json j = {{"found", r.found},
              {"tested", r.tested},
              {"extensions_tried", r.extensions_tried},
              {"search_space", r.search_space}};
    if (r.witness) j["X"] = matrix_to_json(*r.witness);
    return j;
}

inline json oracle_critical_to_json(const OracleCriticalReport& r) {
    json j = {{"all_values", r.all_values}, {"candidates_tested", r.candidates_tested}};
    json vals = json::array();
    for (const auto& v : r.values) vals.push_back(element_to_json(v));
    j["values"] = vals;
    j["field"] = backend_to_json(r.field);
    return j;
}

}  // namespace matfun

#endif
