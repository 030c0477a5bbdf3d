#ifndef MATFUN_POLYNOMIAL_HPP
#define MATFUN_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace matfun {

// Dense univariate polynomial over one backend. Coefficient i is the
// coefficient of X^i; trailing zeros are trimmed, the zero polynomial has an
// empty coefficient list.
class Polynomial {
   public:
    explicit Polynomial(Backend bk) : bk_(std::move(bk)) {}

    Polynomial(Backend bk, std::vector<FieldElement> coeffs) : bk_(std::move(bk)), c_(std::move(coeffs)) {
        for (const auto& x : c_)
            if (x.backend() != bk_) throw Error(ErrorCode::BackendMismatch, "coefficient from wrong backend");
        trim();
    }

    static Polynomial from_ints(const Backend& bk, const std::vector<long long>& a) {
        std::vector<FieldElement> c;
        c.reserve(a.size());
        for (auto v : a) c.push_back(bk.from_int(v));
        return Polynomial(bk, std::move(c));
    }

    static Polynomial constant(const FieldElement& a) { return Polynomial(a.backend(), {a}); }

    // X^k
    static Polynomial monomial(const Backend& bk, std::size_t k, const FieldElement& lead) {
        std::vector<FieldElement> c(k + 1, bk.zero());
        c[k] = lead;
        return Polynomial(bk, std::move(c));
    }

    const Backend& backend() const { return bk_; }
    const std::vector<FieldElement>& coeffs() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    std::size_t degree() const {
        if (c_.empty()) throw Error(ErrorCode::ZeroPolynomial, "degree of the zero polynomial");
        return c_.size() - 1;
    }

    FieldElement coeff(std::size_t i) const { return i < c_.size() ? c_[i] : bk_.zero(); }
    FieldElement leading() const {
        if (c_.empty()) throw Error(ErrorCode::ZeroPolynomial, "leading coefficient of zero");
        return c_.back();
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.bk_ != b.bk_) throw Error(ErrorCode::BackendMismatch, "comparing polynomials over different backends");
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        detail_same(a, b);
        std::vector<FieldElement> r(std::max(a.c_.size(), b.c_.size()), a.bk_.zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = add(a.coeff(i), b.coeff(i));
        return Polynomial(a.bk_, std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        detail_same(a, b);
        std::vector<FieldElement> r(std::max(a.c_.size(), b.c_.size()), a.bk_.zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = sub(a.coeff(i), b.coeff(i));
        return Polynomial(a.bk_, std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<FieldElement> r = a.c_;
        for (auto& x : r) x = neg(x);
        return Polynomial(a.bk_, std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        detail_same(a, b);
        if (a.is_zero() || b.is_zero()) return Polynomial(a.bk_);
        std::vector<FieldElement> r(a.c_.size() + b.c_.size() - 1, a.bk_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = add(r[i + j], mul(a.c_[i], b.c_[j]));
        }
        return Polynomial(a.bk_, std::move(r));
    }
    friend Polynomial operator*(const FieldElement& s, const Polynomial& a) {
        std::vector<FieldElement> r = a.c_;
        for (auto& x : r) x = mul(s, x);
        return Polynomial(a.bk_, std::move(r));
    }

   private:
    static void detail_same(const Polynomial& a, const Polynomial& b) {
        if (a.bk_ != b.bk_) throw Error(ErrorCode::BackendMismatch, "polynomials over different backends");
    }

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    Backend bk_;
    std::vector<FieldElement> c_;
};

inline Polynomial monic(const Polynomial& f) {
    if (f.is_zero()) return f;
    return inv(f.leading()) * f;
}

inline FieldElement eval(const Polynomial& f, const FieldElement& x) {
    if (x.backend() != f.backend()) throw Error(ErrorCode::BackendMismatch, "eval point from wrong backend");
    FieldElement r = f.backend().zero();
    const auto& c = f.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) r = add(mul(r, x), c[i]);
    return r;
}

inline Polynomial derivative(const Polynomial& f) {
    const Backend& bk = f.backend();
    if (f.is_zero() || f.is_constant()) return Polynomial(bk);
    std::vector<FieldElement> r;
    r.reserve(f.coeffs().size() - 1);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i)
        r.push_back(mul(bk.from_integer(BigInt(i)), f.coeffs()[i]));
    return Polynomial(bk, std::move(r));
}

// quotient and remainder over a field
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    const Backend& bk = a.backend();
    Polynomial q(bk), r = a;
    FieldElement lcinv = inv(b.leading());
    while (!r.is_zero() && r.coeffs().size() >= b.coeffs().size()) {
        std::size_t shift = r.coeffs().size() - b.coeffs().size();
        FieldElement c = mul(r.leading(), lcinv);
        Polynomial t = Polynomial::monomial(bk, shift, c);
        q = q + t;
        r = r - t * b;
    }
    return {q, r};
}

inline Polynomial rem(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

// division known to be exact; throws if a remainder survives (exact backends)
inline Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
    auto [q, r] = divmod(a, b);
    if (a.backend().is_exact() && !r.is_zero())
        throw Error(ErrorCode::InvalidArgument, "division is not exact");
    return q;
}

inline Polynomial gcd(const Polynomial& f, const Polynomial& g) {
    if (f.backend().kind() == BackendKind::ComplexFloat)
        throw Error(ErrorCode::UnsupportedBackend, "gcd needs an exact backend");
    Polynomial a = f, b = g;
    while (!b.is_zero()) {
        Polynomial r = rem(a, b);
        a = b;
        b = r;
    }
    return monic(a);
}

// true iff every root of g (over the algebraic closure) is a root of h,
// equivalently g | h^{deg g}; decided by gcd peeling without expanding powers
inline bool divides_power(const Polynomial& g, const Polynomial& h, std::size_t /*N*/ = 0) {
    if (!g.backend().is_exact())
        throw Error(ErrorCode::UnsupportedBackend, "divides_power needs an exact backend");
    if (g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "divides_power with zero g");
    Polynomial cur = g;
    while (!cur.is_constant()) {
        Polynomial d = gcd(cur, h);
        if (d.is_constant()) return false;
        cur = exact_div(cur, d);
    }
    return true;
}

inline Polynomial embed(const Polynomial& f, const Embedding& phi) {
    std::vector<FieldElement> c;
    c.reserve(f.coeffs().size());
    for (const auto& x : f.coeffs()) c.push_back(phi(x));
    return Polynomial(phi.to(), std::move(c));
}

// --- determinant of a matrix of polynomials (division-free subset expansion) ---

inline Polynomial det_poly_matrix(const std::vector<std::vector<Polynomial>>& a) {
    const std::size_t n = a.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
    const Backend& bk = a[0][0].backend();
    if (n > 16) throw Error(ErrorCode::InvalidArgument, "polynomial determinant limited to n <= 16");
    const std::uint32_t full = (std::uint32_t(1) << n) - 1;
    std::vector<std::optional<Polynomial>> d(full + 1);
    d[0] = Polynomial::constant(bk.one());
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (!d[mask].has_value()) continue;
        if (d[mask]->is_zero()) continue;
        std::size_t row = static_cast<std::size_t>(__builtin_popcount(mask));
        for (std::size_t col = 0; col < n; ++col) {
            if (mask & (std::uint32_t(1) << col)) continue;
            if (a[row][col].is_zero()) continue;
            std::uint32_t below = mask & ((std::uint32_t(1) << col) - 1);
            bool negate = (__builtin_popcount(below) + row) % 2 != 0;
            Polynomial term = a[row][col] * (*d[mask]);
            if (negate) term = -term;
            std::uint32_t nm = mask | (std::uint32_t(1) << col);
            if (!d[nm].has_value())
                d[nm] = std::move(term);
            else
                d[nm] = *d[nm] + term;
        }
    }
    return d[full].value_or(Polynomial(bk));
}

// Res_x(f(x) - T, f'(x)) as a polynomial in T; its roots are the candidate
// critical values f(zeta) over the zeros zeta of f'.
inline Polynomial critical_resultant(const Polynomial& f) {
    const Backend& bk = f.backend();
    Polynomial fp = derivative(f);
    if (fp.is_zero()) throw Error(ErrorCode::DerivativeZero, "f' = 0; caller must branch on AllValues");
    if (f.is_constant()) throw Error(ErrorCode::DegreeZero, "critical_resultant needs deg f >= 1");
    const std::size_t da = f.degree();
    const std::size_t db = fp.degree();
    auto const_poly = [&](const FieldElement& v) { return Polynomial::constant(v); };
    if (db == 0) {
        // Res(A, b0) = b0^da
        FieldElement r = bk.one();
        for (std::size_t i = 0; i < da; ++i) r = mul(r, fp.coeff(0));
        return Polynomial::constant(r);
    }
    // coefficients of f(x) - T in x, as elements of k[T]
    std::vector<Polynomial> ac;
    for (std::size_t i = 0; i <= da; ++i) {
        if (i == 0)
            ac.push_back(Polynomial(bk, {f.coeff(0), neg(bk.one())}));
        else
            ac.push_back(const_poly(f.coeff(i)));
    }
    const std::size_t n = da + db;
    std::vector<std::vector<Polynomial>> s(n, std::vector<Polynomial>(n, Polynomial(bk)));
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t i = 0; i <= da; ++i) s[r][r + i] = ac[da - i];
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t i = 0; i <= db; ++i) s[db + r][r + i] = const_poly(fp.coeff(db - i));
    return det_poly_matrix(s);
}

// --- root finding ---

struct RootRecord {
    FieldElement root;
    unsigned multiplicity;
    Backend field;  // field of definition in which the root was located
};

struct RootMultiset {
    std::vector<RootRecord> entries;
    bool complete = false;  // true when sum of multiplicities == deg f

    unsigned total() const {
        unsigned t = 0;
        for (const auto& e : entries) t += e.multiplicity;
        return t;
    }
};

namespace detail {

// multiplicity of root z in f, dividing out (x - z); returns remaining quotient
inline unsigned strip_root(Polynomial& f, const FieldElement& z) {
    unsigned mult = 0;
    const Backend& bk = f.backend();
    Polynomial lin(bk, {neg(z), bk.one()});
    while (!f.is_zero() && !f.is_constant()) {
        auto [q, r] = divmod(f, lin);
        if (!r.is_zero()) break;
        f = q;
        ++mult;
    }
    return mult;
}

inline RootMultiset roots_finite(const Polynomial& f, unsigned ext_bound) {
    const Backend& base = f.backend();
    RootMultiset out;
    const std::size_t deg = f.degree();
    for (unsigned e = 1; e <= ext_bound; ++e) {
        long double qe = 1;
        for (unsigned i = 0; i < base.ext_degree() * e; ++i) {
            qe *= static_cast<long double>(base.p());
            if (qe > static_cast<long double>(kMaxScanField))
                throw Error(ErrorCode::FieldTooLarge, "root scan exceeds the 2^20 cap");
        }
        auto [E, phi] = extend(base, e);
        Polynomial g = embed(f, phi);
        std::uint64_t q = E.field_size();
        for (std::uint64_t idx = 0; idx < q && !g.is_constant(); ++idx) {
            FieldElement z = E.element_from_index(idx);
            if (!eval(g, z).is_zero()) continue;
            // skip roots already reported from a smaller field
            bool seen = false;
            for (unsigned d = 1; d < e && !seen; ++d)
                if (e % d == 0 && in_subfield(z, base.ext_degree() * d)) seen = true;
            if (seen) continue;
            unsigned mult = strip_root(g, z);
            out.entries.push_back({z, mult, E});
        }
        if (out.total() == deg) break;
    }
    out.complete = out.total() == deg;
    return out;
}

inline std::vector<BigInt> divisors_bounded(BigInt n) {
    // trial factorization; an unfactored cofactor is treated as prime
    std::vector<std::pair<BigInt, unsigned>> fac;
    n = abs(n);
    for (BigInt d = 2; d * d <= n && d <= 1000000; ++d) {
        if (n % d == 0) {
            unsigned e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            fac.emplace_back(d, e);
        }
    }
    if (n > 1) fac.emplace_back(n, 1);
    std::vector<BigInt> divs = {BigInt(1)};
    for (const auto& [prime, e] : fac) {
        std::size_t sz = divs.size();
        BigInt pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= prime;
            for (std::size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
            if (divs.size() > 100000) throw Error(ErrorCode::FieldTooLarge, "too many divisor candidates");
        }
    }
    return divs;
}

inline RootMultiset roots_rational(const Polynomial& f) {
    const Backend& bk = f.backend();
    RootMultiset out;
    Polynomial g = f;
    const std::size_t deg = f.degree();
    // factor out x^k
    std::size_t k = 0;
    while (k < g.coeffs().size() && g.coeffs()[k].is_zero()) ++k;
    if (k > 0) {
        out.entries.push_back({bk.zero(), static_cast<unsigned>(k), bk});
        std::vector<FieldElement> c(g.coeffs().begin() + static_cast<std::ptrdiff_t>(k), g.coeffs().end());
        g = Polynomial(bk, std::move(c));
    }
    if (!g.is_constant()) {
        // scale to integer coefficients
        BigInt den_lcm = 1;
        for (const auto& c : g.coeffs()) den_lcm = lcm(den_lcm, denominator(c.rational()));
        std::vector<BigInt> ic;
        for (const auto& c : g.coeffs()) ic.push_back(numerator(c.rational()) * (den_lcm / denominator(c.rational())));
        auto p_divs = divisors_bounded(ic.front());
        auto q_divs = divisors_bounded(ic.back());
        std::vector<Rational> candidates;
        for (const auto& pn : p_divs)
            for (const auto& qn : q_divs) {
                candidates.push_back(Rational(pn, qn));
                candidates.push_back(Rational(-pn, qn));
            }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (const auto& cand : candidates) {
            if (g.is_constant()) break;
            FieldElement z = bk.from_rational(cand);
            if (!eval(g, z).is_zero()) continue;
            unsigned mult = strip_root(g, z);
            if (mult > 0) out.entries.push_back({z, mult, bk});
        }
    }
    out.complete = out.total() == deg;
    return out;
}

inline RootMultiset roots_complex(const Polynomial& f, std::size_t max_iter = 200) {
    const Backend& bk = f.backend();
    const double eps = bk.eps();
    std::vector<Complex> a;
    for (const auto& c : f.coeffs()) a.push_back(c.complex());
    const std::size_t d = a.size() - 1;
    RootMultiset out;
    if (d == 0) {
        out.complete = true;
        return out;
    }
    // Aberth-Ehrlich simultaneous iteration, initial points on a circle
    double radius = 0;
    for (std::size_t i = 0; i < d; ++i) radius = std::max(radius, std::abs(a[i] / a[d]));
    radius = 1 + radius;
    std::vector<Complex> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        double ang = 2 * M_PI * static_cast<double>(k) / static_cast<double>(d) + 0.4;
        z[k] = radius * Complex(std::cos(ang), std::sin(ang));
    }
    auto horner = [&](Complex x, Complex& px, Complex& dpx) {
        px = a[d];
        dpx = 0;
        for (std::size_t i = d; i-- > 0;) {
            dpx = dpx * x + px;
            px = px * x + a[i];
        }
    };
    bool converged = false;
    for (std::size_t it = 0; it < max_iter && !converged; ++it) {
        converged = true;
        for (std::size_t k = 0; k < d; ++k) {
            Complex px, dpx;
            horner(z[k], px, dpx);
            Complex nk = dpx == Complex(0) ? Complex(0) : px / dpx;
            Complex s = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) s += Complex(1) / (z[k] - z[j]);
            Complex w = nk / (Complex(1) - nk * s);
            z[k] -= w;
            if (std::abs(w) > 1e-14 * (1 + std::abs(z[k]))) converged = false;
        }
    }
    // residual certificate
    double norm = 0;
    for (const auto& c : a) norm += std::abs(c);
    for (std::size_t k = 0; k < d; ++k) {
        Complex px, dpx;
        horner(z[k], px, dpx);
        double scale = std::pow(std::max(1.0, std::abs(z[k])), static_cast<double>(d));
        if (std::abs(px) > eps * norm * scale)
            throw Error(ErrorCode::NoConvergence, "root iteration did not certify a residual");
    }
    // cluster at radius sqrt(eps) to recover multiplicities
    const double cluster_r = std::sqrt(eps) * std::max(1.0, radius);
    std::vector<bool> used(d, false);
    for (std::size_t k = 0; k < d; ++k) {
        if (used[k]) continue;
        std::vector<std::size_t> group = {k};
        used[k] = true;
        for (std::size_t j = k + 1; j < d; ++j) {
            if (used[j]) continue;
            if (std::abs(z[j] - z[k]) <= cluster_r) {
                group.push_back(j);
                used[j] = true;
            }
        }
        Complex mean = 0;
        for (auto g : group) mean += z[g];
        mean /= static_cast<double>(group.size());
        out.entries.push_back({FieldElement(bk, mean), static_cast<unsigned>(group.size()), bk});
    }
    out.complete = true;
    return out;
}

}  // namespace detail

// All roots of f found in extensions up to relative degree ext_bound (finite
// fields), rational roots (rational backend), or all complex roots (numeric).
inline RootMultiset roots(const Polynomial& f, unsigned ext_bound = 1) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
    if (f.is_constant()) throw Error(ErrorCode::DegreeZero, "roots of a constant polynomial");
    switch (f.backend().kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField: return detail::roots_finite(f, ext_bound);
        case BackendKind::Rational: return detail::roots_rational(f);
        case BackendKind::ComplexFloat: return detail::roots_complex(f);
        case BackendKind::NumberField:
            throw Error(ErrorCode::UnsupportedBackend, "root finding over number fields is not provided");
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

}  // namespace matfun

#endif
