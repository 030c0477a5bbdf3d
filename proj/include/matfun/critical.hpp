#ifndef MATFUN_CRITICAL_HPP
#define MATFUN_CRITICAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace matfun {

enum class CriticalKind { Empty, Finite, AllValues };
enum class Criticality { Critical, NotCritical, NumericallyAmbiguous };

struct WitnessRoot {
    FieldElement root;          // fiber root u with f(u) = t
    unsigned multiplicity;
    FieldElement fprime_value;  // f'(u), zero for a genuine witness
};

struct CriticalValue {
    FieldElement t;
    Backend field;  // field of definition of t
    std::vector<WitnessRoot> witness;
};

struct CriticalSet {
    CriticalKind kind = CriticalKind::Empty;
    std::vector<CriticalValue> values;
    std::vector<FieldElement> ambiguous;  // numeric backend: values inside the tolerance band
    std::vector<std::string> notes;
    bool exactness_downgraded = false;
};

struct CriticalityResult {
    Criticality verdict;
    std::vector<WitnessRoot> witness;
};

namespace detail {

// lift f into the backend of t when t lives in an extension
inline Polynomial lift_to(const Polynomial& f, const Backend& target) {
    if (f.backend() == target) return f;
    return embed(f, make_embedding(f.backend(), target));
}

inline std::vector<WitnessRoot> fiber_witness(const Polynomial& f, const Polynomial& fp, const FieldElement& t,
                                              unsigned ext_bound) {
    std::vector<WitnessRoot> w;
    Polynomial ft = f - Polynomial::constant(t);
    if (ft.is_zero() || ft.is_constant()) return w;
    try {
        RootMultiset rs = roots(ft, ext_bound);
        for (const auto& e : rs.entries) {
            FieldElement fpv = fp.is_zero() ? e.field.zero() : eval(lift_to(fp, e.field), e.root);
            w.push_back({e.root, e.multiplicity, fpv});
        }
    } catch (const Error&) {
        // witness is best effort; criticality itself is decided by gcd peeling
    }
    return w;
}

}  // namespace detail

// t is a critical value of f iff the whole fiber f^{-1}(t) lies in Z(f').
// Exact backends decide by gcd peeling; the numeric backend uses a two-sided
// distance band around Z(f').
inline CriticalityResult is_critical_value(const Polynomial& f_in, const FieldElement& t) {
    const Backend& tb = t.backend();
    Polynomial f = detail::lift_to(f_in, tb);
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "criticality of the zero polynomial");
    if (f.is_constant()) {
        // constant c: f' = 0 and the sole value c is critical
        bool crit = eval(f, tb.zero()) == t;
        return {crit ? Criticality::Critical : Criticality::NotCritical, {}};
    }
    Polynomial fp = derivative(f);
    if (tb.kind() == BackendKind::ComplexFloat) {
        const double eps = tb.eps();
        Polynomial ft = f - Polynomial::constant(t);
        RootMultiset fiber = roots(ft);
        std::vector<Complex> zeros;
        if (!fp.is_constant())
            for (const auto& e : roots(fp).entries) zeros.push_back(e.root.complex());
        bool all_close = true, some_far = false;
        std::vector<WitnessRoot> w;
        for (const auto& e : fiber.entries) {
            double dist = std::numeric_limits<double>::infinity();
            for (const auto& z : zeros) dist = std::min(dist, std::abs(e.root.complex() - z));
            double scale = std::max(1.0, std::abs(e.root.complex()));
            if (dist > eps * scale) all_close = false;
            if (dist > 10 * eps * scale) some_far = true;
            w.push_back({e.root, e.multiplicity, eval(fp, e.root)});
        }
        if (all_close) return {Criticality::Critical, std::move(w)};
        if (some_far) return {Criticality::NotCritical, std::move(w)};
        return {Criticality::NumericallyAmbiguous, std::move(w)};
    }
    if (fp.is_zero()) {
        // Z(f') is everything; any t with a nonempty fiber is critical, and
        // deg f >= 1 guarantees one over the closure
        return {Criticality::Critical, detail::fiber_witness(f, fp, t, static_cast<unsigned>(f.degree()))};
    }
    Polynomial ft = f - Polynomial::constant(t);
    bool crit = divides_power(ft, fp, f.degree());
    std::vector<WitnessRoot> w;
    if (tb.kind() != BackendKind::NumberField)
        w = detail::fiber_witness(f, fp, t, static_cast<unsigned>(f.degree()));
    return {crit ? Criticality::Critical : Criticality::NotCritical, std::move(w)};
}

namespace detail {

inline CriticalSet critical_values_finite(const Polynomial& f) {
    const Backend& bk = f.backend();
    CriticalSet out;
    Polynomial fp = derivative(f);
    if (fp.is_constant()) {
        out.kind = CriticalKind::Empty;
        return out;
    }
    RootMultiset zeros = roots(fp, static_cast<unsigned>(fp.degree()));
    if (zeros.entries.empty()) {
        out.kind = CriticalKind::Empty;
        return out;
    }
    unsigned l = 1;
    for (const auto& e : zeros.entries) l = std::lcm(l, e.field.ext_degree() / bk.ext_degree());
    auto [big, phi] = extend(bk, l);
    Polynomial fbig = embed(f, phi);
    std::vector<FieldElement> candidates;
    for (const auto& e : zeros.entries) {
        Embedding lift = make_embedding(e.field, big);
        FieldElement t = eval(fbig, lift(e.root));
        if (std::none_of(candidates.begin(), candidates.end(), [&](const FieldElement& x) { return x == t; }))
            candidates.push_back(t);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) { return canonical_less(x, y); });
    for (const auto& t : candidates) {
        CriticalityResult r = is_critical_value(fbig, t);
        if (r.verdict == Criticality::Critical) out.values.push_back({t, big, std::move(r.witness)});
    }
    out.kind = out.values.empty() ? CriticalKind::Empty : CriticalKind::Finite;
    return out;
}

inline bool reconstruct_rational(double x, Rational& out, double tol = 1e-7, long long max_den = 1000000) {
    // continued fraction expansion
    double v = x;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int i = 0; i < 40; ++i) {
        double fl = std::floor(v);
        if (fl > 9e17 || fl < -9e17) return false;
        long long a = static_cast<long long>(fl);
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = v - fl;
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    if (q1 == 0) return false;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) > tol * std::max(1.0, std::abs(x))) return false;
    out = Rational(p1, q1);
    return true;
}

inline Polynomial to_complex_poly(const Polynomial& f, const Backend& cbk) {
    std::vector<FieldElement> c;
    for (const auto& x : f.coeffs()) c.push_back(cbk.from_rational(x.rational()));
    return Polynomial(cbk, std::move(c));
}

inline CriticalSet critical_values_rational(const Polynomial& f) {
    const Backend& bk = f.backend();
    CriticalSet out;
    Polynomial r = critical_resultant(f);
    if (r.is_constant()) {
        out.kind = CriticalKind::Empty;
        return out;
    }
    // squarefree part (characteristic zero)
    Polynomial s = monic(exact_div(r, gcd(r, derivative(r))));
    // rational candidates
    RootMultiset ratroots = roots(s);
    for (const auto& e : ratroots.entries) {
        CriticalityResult cr = is_critical_value(f, e.root);
        if (cr.verdict == Criticality::Critical) out.values.push_back({e.root, bk, std::move(cr.witness)});
        Polynomial lin(bk, {neg(e.root), bk.one()});
        s = exact_div(s, lin);
    }
    // irreducible factors of bounded degree carry candidates into number fields
    while (!s.is_constant()) {
        Polynomial factor(bk);
        if (s.degree() <= 3) {
            factor = monic(s);  // no rational roots remain, so degree 2 or 3 is irreducible
        } else {
            // pair numeric roots into a quadratic factor and certify by exact division
            Backend cbk = Backend::complex_floats();
            RootMultiset nroots = roots(to_complex_poly(s, cbk));
            bool found = false;
            for (std::size_t i = 0; i < nroots.entries.size() && !found; ++i)
                for (std::size_t j = i + 1; j < nroots.entries.size() && !found; ++j) {
                    Complex r1 = nroots.entries[i].root.complex(), r2 = nroots.entries[j].root.complex();
                    Complex sum = r1 + r2, prod = r1 * r2;
                    if (std::abs(sum.imag()) > 1e-7 || std::abs(prod.imag()) > 1e-7) continue;
                    Rational qs, qp;
                    if (!reconstruct_rational(sum.real(), qs) || !reconstruct_rational(prod.real(), qp)) continue;
                    Polynomial cand(bk, {bk.from_rational(qp), neg(bk.from_rational(qs)), bk.one()});
                    auto [quot, rem_] = divmod(s, cand);
                    if (rem_.is_zero()) {
                        factor = cand;
                        found = true;
                    }
                }
            if (!found) {
                // honest fallback: test leftover candidates numerically
                out.exactness_downgraded = true;
                out.notes.push_back("candidates from an unfactored resultant part were tested numerically");
                Backend cbk2 = Backend::complex_floats();
                Polynomial fc = to_complex_poly(f, cbk2);
                for (const auto& e : roots(to_complex_poly(s, cbk2)).entries) {
                    CriticalityResult cr = is_critical_value(fc, e.root);
                    if (cr.verdict == Criticality::Critical)
                        out.values.push_back({e.root, cbk2, std::move(cr.witness)});
                    else if (cr.verdict == Criticality::NumericallyAmbiguous)
                        out.ambiguous.push_back(e.root);
                }
                break;
            }
        }
        // number-field candidate: t is the class of T modulo the factor
        detail::QPoly mp;
        for (const auto& c : factor.coeffs()) mp.push_back(c.rational());
        Backend nf = Backend::number_field(mp);
        FieldElement t(nf, detail::QPoly{Rational(0), Rational(1)});
        CriticalityResult cr = is_critical_value(f, t);
        if (cr.verdict == Criticality::Critical) out.values.push_back({t, nf, std::move(cr.witness)});
        s = exact_div(s, factor);
    }
    out.kind = out.values.empty() ? CriticalKind::Empty : CriticalKind::Finite;
    return out;
}

inline CriticalSet critical_values_numeric(const Polynomial& f) {
    CriticalSet out;
    Polynomial fp = derivative(f);
    if (fp.is_constant()) {
        out.kind = CriticalKind::Empty;
        return out;
    }
    std::vector<FieldElement> candidates;
    for (const auto& e : roots(fp).entries) {
        FieldElement t = eval(f, e.root);
        if (std::none_of(candidates.begin(), candidates.end(), [&](const FieldElement& x) { return x == t; }))
            candidates.push_back(t);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) { return canonical_less(x, y); });
    for (const auto& t : candidates) {
        CriticalityResult cr = is_critical_value(f, t);
        if (cr.verdict == Criticality::Critical)
            out.values.push_back({t, f.backend(), std::move(cr.witness)});
        else if (cr.verdict == Criticality::NumericallyAmbiguous)
            out.ambiguous.push_back(t);
    }
    out.kind = out.values.empty() ? CriticalKind::Empty : CriticalKind::Finite;
    return out;
}

}  // namespace detail

inline CriticalSet critical_values(const Polynomial& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "critical values of the zero polynomial");
    if (f.is_constant()) {
        CriticalSet out;
        out.kind = CriticalKind::AllValues;
        out.notes.push_back("constant polynomial: image of M_n(f) is a single scalar matrix");
        return out;
    }
    Polynomial fp = derivative(f);
    if (fp.is_zero()) {
        CriticalSet out;
        out.kind = CriticalKind::AllValues;
        out.notes.push_back("f' = 0: Z(f') is the whole field, every attained value is critical");
        return out;
    }
    switch (f.backend().kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField: return detail::critical_values_finite(f);
        case BackendKind::Rational: return detail::critical_values_rational(f);
        case BackendKind::ComplexFloat: return detail::critical_values_numeric(f);
        case BackendKind::NumberField:
            throw Error(ErrorCode::UnsupportedBackend, "run the criterion from Q; number fields host candidates only");
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

// surjectivity verdict, independent of the matrix dimension n >= 2
inline bool is_surjective(const CriticalSet& cs) {
    return cs.kind == CriticalKind::Empty && cs.ambiguous.empty();
}

inline bool is_surjective(const Polynomial& f) { return is_surjective(critical_values(f)); }

}  // namespace matfun

#endif
