#ifndef MATFUN_SCALAR_HPP
#define MATFUN_SCALAR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace matfun {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

enum class BackendKind { PrimeField, ExtField, Rational, NumberField, ComplexFloat };

// Largest finite field we are willing to enumerate element by element.
inline constexpr std::uint64_t kMaxScanField = std::uint64_t(1) << 20;

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// --- small F_p[x] kit on vector<uint64_t>, coefficients low degree first ---

using FpPoly = std::vector<std::uint64_t>;

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int fp_deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(r);
    return r;
}

inline std::uint64_t fp_inv_scalar(std::uint64_t a, std::uint64_t p) {
    // extended Euclid in Z
    std::int64_t t = 0, newt = 1, r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a % p);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw Error(ErrorCode::DivisionByZero, "non-invertible residue");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

// a mod b, b nonzero
inline FpPoly fp_rem(FpPoly a, const FpPoly& b, std::uint64_t p) {
    fp_trim(a);
    const std::uint64_t lcinv = fp_inv_scalar(b.back(), p);
    while (fp_deg(a) >= fp_deg(b)) {
        std::uint64_t c = (a.back() * lcinv) % p;
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::uint64_t sub = (c * b[i]) % p;
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        fp_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        std::uint64_t inv = fp_inv_scalar(a.back(), p);
        for (auto& c : a) c = (c * inv) % p;
    }
    return a;
}

inline bool fp_is_irreducible(const FpPoly& f, std::uint64_t p) {
    int d = fp_deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    // trial division by all monic polynomials of degree 1..d/2
    for (int e = 1; 2 * e <= d; ++e) {
        std::uint64_t count = 1;
        for (int i = 0; i < e; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            FpPoly g(e + 1, 0);
            std::uint64_t t = idx;
            for (int i = 0; i < e; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[e] = 1;
            if (fp_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

// Lexicographically least monic irreducible of degree m over F_p,
// coefficient tuples (c_0,...,c_{m-1}) compared with c_0 most significant.
inline FpPoly least_irreducible(std::uint64_t p, unsigned m) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        FpPoly f(m + 1, 0);
        std::uint64_t t = idx;
        for (unsigned i = 0; i < m; ++i) {
            f[m - 1 - i] = t % p;  // last coefficient varies fastest
            t /= p;
        }
        f[m] = 1;
        if (fp_is_irreducible(f, p)) return f;
    }
    throw Error(ErrorCode::FieldTooLarge, "no irreducible modulus found");
}

// --- small Q[x] kit on vector<Rational>, low degree first ---

using QPoly = std::vector<Rational>;

inline void q_trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline QPoly q_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    q_trim(r);
    return r;
}

inline QPoly q_rem(QPoly a, const QPoly& b) {
    q_trim(a);
    while (!a.empty() && a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        q_trim(a);
    }
    return a;
}

// inverse of a modulo m (m monic, irreducible) via extended Euclid
inline QPoly q_modinv(QPoly a, QPoly m) {
    q_trim(a);
    q_trim(m);
    if (a.empty()) throw Error(ErrorCode::DivisionByZero, "number field inverse of zero");
    QPoly r0 = m, r1 = a;
    QPoly s0 = {}, s1 = {Rational(1)};
    while (!r1.empty()) {
        // quotient of r0 by r1
        QPoly q;
        QPoly rem = r0;
        q_trim(rem);
        while (!rem.empty() && rem.size() >= r1.size()) {
            Rational c = rem.back() / r1.back();
            std::size_t shift = rem.size() - r1.size();
            if (q.size() < shift + 1) q.resize(shift + 1, Rational(0));
            q[shift] += c;
            for (std::size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
            q_trim(rem);
        }
        QPoly s2 = s0;
        QPoly qs = q_mul(q, s1);
        if (s2.size() < qs.size()) s2.resize(qs.size(), Rational(0));
        for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        q_trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 = gcd, a unit since m irreducible and a != 0 mod m
    if (r0.size() != 1) throw Error(ErrorCode::DivisionByZero, "non-invertible number field element");
    Rational inv = Rational(1) / r0[0];
    for (auto& c : s0) c *= inv;
    q_trim(s0);
    return q_rem(std::move(s0), m);
}

}  // namespace detail

struct BackendData {
    BackendKind kind;
    std::uint64_t p = 0;
    unsigned m = 1;
    detail::FpPoly modulus;           // ExtField: monic of degree m
    detail::QPoly minpoly;            // NumberField: monic irreducible over Q
    double eps = 1e-8;

    friend bool operator==(const BackendData& a, const BackendData& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case BackendKind::PrimeField: return a.p == b.p;
            case BackendKind::ExtField: return a.p == b.p && a.m == b.m && a.modulus == b.modulus;
            case BackendKind::Rational: return true;
            case BackendKind::NumberField: return a.minpoly == b.minpoly;
            case BackendKind::ComplexFloat: return a.eps == b.eps;
        }
        return false;
    }
};

class FieldElement;

class Backend {
   public:
    Backend() = default;

    static Backend prime_field(std::uint64_t p) {
        if (!detail::is_prime_u64(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
        if (p > (std::uint64_t(1) << 31)) throw Error(ErrorCode::FieldTooLarge, "prime too large");
        BackendData d;
        d.kind = BackendKind::PrimeField;
        d.p = p;
        d.m = 1;
        return Backend(std::move(d));
    }

    // canonical modulus (lexicographically least monic irreducible)
    static Backend finite_field(std::uint64_t p, unsigned m) {
        if (m == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
        if (m == 1) return prime_field(p);
        if (!detail::is_prime_u64(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
        check_size(p, m);
        BackendData d;
        d.kind = BackendKind::ExtField;
        d.p = p;
        d.m = m;
        d.modulus = detail::least_irreducible(p, m);
        return Backend(std::move(d));
    }

    static Backend ext_field(std::uint64_t p, unsigned m, detail::FpPoly modulus) {
        if (!detail::is_prime_u64(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
        if (m < 2) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 2");
        check_size(p, m);
        detail::fp_trim(modulus);
        if (detail::fp_deg(modulus) != static_cast<int>(m) || modulus.back() != 1 ||
            !detail::fp_is_irreducible(modulus, p))
            throw Error(ErrorCode::InvalidArgument, "modulus must be monic irreducible of degree m");
        BackendData d;
        d.kind = BackendKind::ExtField;
        d.p = p;
        d.m = m;
        d.modulus = std::move(modulus);
        return Backend(std::move(d));
    }

    static Backend rationals() {
        BackendData d;
        d.kind = BackendKind::Rational;
        return Backend(std::move(d));
    }

    static Backend number_field(detail::QPoly minpoly) {
        detail::q_trim(minpoly);
        if (minpoly.size() < 3) throw Error(ErrorCode::InvalidArgument, "minimal polynomial must have degree >= 2");
        // normalize monic
        Rational lc = minpoly.back();
        for (auto& c : minpoly) c /= lc;
        BackendData d;
        d.kind = BackendKind::NumberField;
        d.m = static_cast<unsigned>(minpoly.size() - 1);
        d.minpoly = std::move(minpoly);
        return Backend(std::move(d));
    }

    static Backend complex_floats(double eps = 1e-8) {
        if (!(eps > 0 && eps <= 1e-4)) throw Error(ErrorCode::InvalidArgument, "eps must be in (0, 1e-4]");
        BackendData d;
        d.kind = BackendKind::ComplexFloat;
        d.eps = eps;
        return Backend(std::move(d));
    }

    BackendKind kind() const { return d_->kind; }
    std::uint64_t p() const { return d_->p; }
    unsigned ext_degree() const { return d_->m; }
    const detail::FpPoly& modulus() const { return d_->modulus; }
    const detail::QPoly& minpoly() const { return d_->minpoly; }
    double eps() const { return d_->eps; }

    bool is_finite() const { return d_->kind == BackendKind::PrimeField || d_->kind == BackendKind::ExtField; }
    bool is_exact() const { return d_->kind != BackendKind::ComplexFloat; }

    std::uint64_t characteristic() const { return is_finite() ? d_->p : 0; }

    std::uint64_t field_size() const {
        if (!is_finite()) throw Error(ErrorCode::UnsupportedBackend, "infinite backend has no size");
        std::uint64_t q = 1;
        for (unsigned i = 0; i < d_->m; ++i) q *= d_->p;
        return q;
    }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_int(long long v) const;
    FieldElement from_integer(const BigInt& v) const;
    FieldElement from_rational(const Rational& v) const;
    FieldElement element_from_index(std::uint64_t idx) const;  // finite fields
    FieldElement generator() const;                            // ExtField: the class of x

    friend bool operator==(const Backend& a, const Backend& b) { return *a.d_ == *b.d_; }
    friend bool operator!=(const Backend& a, const Backend& b) { return !(a == b); }

   private:
    explicit Backend(BackendData d) : d_(std::make_shared<const BackendData>(std::move(d))) {}

    static void check_size(std::uint64_t p, unsigned m) {
        long double q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= static_cast<long double>(p);
            if (q > static_cast<long double>(kMaxScanField))
                throw Error(ErrorCode::FieldTooLarge, "field exceeds the 2^20 scan cap");
        }
    }

    std::shared_ptr<const BackendData> d_;
};

class FieldElement {
   public:
    using Payload = std::variant<std::uint64_t, detail::FpPoly, Rational, detail::QPoly, Complex>;

    FieldElement() = default;
    FieldElement(Backend bk, Payload v) : bk_(std::move(bk)), v_(std::move(v)) {}

    const Backend& backend() const { return bk_; }
    const Payload& payload() const { return v_; }

    std::uint64_t residue() const { return std::get<std::uint64_t>(v_); }
    const detail::FpPoly& ext_coeffs() const { return std::get<detail::FpPoly>(v_); }
    const Rational& rational() const { return std::get<Rational>(v_); }
    const detail::QPoly& nf_coeffs() const { return std::get<detail::QPoly>(v_); }
    Complex complex() const { return std::get<Complex>(v_); }

    bool is_zero() const {
        switch (bk_.kind()) {
            case BackendKind::PrimeField: return residue() == 0;
            case BackendKind::ExtField: return ext_coeffs().empty();
            case BackendKind::Rational: return rational() == 0;
            case BackendKind::NumberField: return nf_coeffs().empty();
            case BackendKind::ComplexFloat: return std::abs(complex()) <= bk_.eps();
        }
        return false;
    }

    bool is_one() const;

    // |x| as a double; only meaningful for numeric pivoting / diagnostics
    double abs_approx() const {
        switch (bk_.kind()) {
            case BackendKind::ComplexFloat: return std::abs(complex());
            case BackendKind::Rational: return std::abs(rational().convert_to<double>());
            default: return is_zero() ? 0.0 : 1.0;
        }
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        if (a.bk_ != b.bk_) throw Error(ErrorCode::BackendMismatch, "comparing elements of different backends");
        if (a.bk_.kind() == BackendKind::ComplexFloat) {
            double tol = a.bk_.eps() * std::max({1.0, std::abs(a.complex()), std::abs(b.complex())});
            return std::abs(a.complex() - b.complex()) <= tol;
        }
        return a.v_ == b.v_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

   private:
    Backend bk_;
    Payload v_;
};

inline FieldElement Backend::zero() const {
    switch (kind()) {
        case BackendKind::PrimeField: return FieldElement(*this, std::uint64_t(0));
        case BackendKind::ExtField: return FieldElement(*this, detail::FpPoly{});
        case BackendKind::Rational: return FieldElement(*this, Rational(0));
        case BackendKind::NumberField: return FieldElement(*this, detail::QPoly{});
        case BackendKind::ComplexFloat: return FieldElement(*this, Complex(0, 0));
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement Backend::from_integer(const BigInt& v) const {
    switch (kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField: {
            BigInt r = v % BigInt(d_->p);
            if (r < 0) r += d_->p;
            std::uint64_t u = r.convert_to<std::uint64_t>();
            if (kind() == BackendKind::PrimeField) return FieldElement(*this, u);
            detail::FpPoly c;
            if (u != 0) c.push_back(u);
            return FieldElement(*this, std::move(c));
        }
        case BackendKind::Rational: return FieldElement(*this, Rational(v));
        case BackendKind::NumberField: {
            detail::QPoly c;
            if (v != 0) c.push_back(Rational(v));
            return FieldElement(*this, std::move(c));
        }
        case BackendKind::ComplexFloat: return FieldElement(*this, Complex(v.convert_to<double>(), 0));
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement Backend::from_int(long long v) const { return from_integer(BigInt(v)); }
inline FieldElement Backend::one() const { return from_int(1); }

FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement inv(const FieldElement& a);

inline FieldElement Backend::from_rational(const Rational& v) const {
    switch (kind()) {
        case BackendKind::Rational: return FieldElement(*this, v);
        case BackendKind::NumberField: {
            detail::QPoly c;
            if (v != 0) c.push_back(v);
            return FieldElement(*this, std::move(c));
        }
        case BackendKind::ComplexFloat: return FieldElement(*this, Complex(v.convert_to<double>(), 0));
        default:
            // num * den^{-1} in characteristic p
            return mul(from_integer(numerator(v)), inv(from_integer(denominator(v))));
    }
}

inline bool FieldElement::is_one() const { return *this == bk_.one(); }

// --- arithmetic ---

namespace detail {
inline void require_same(const FieldElement& a, const FieldElement& b) {
    if (a.backend() != b.backend()) throw Error(ErrorCode::BackendMismatch, "operands from different backends");
}
}  // namespace detail

inline FieldElement add(const FieldElement& a, const FieldElement& b) {
    detail::require_same(a, b);
    const Backend& bk = a.backend();
    switch (bk.kind()) {
        case BackendKind::PrimeField: return FieldElement(bk, (a.residue() + b.residue()) % bk.p());
        case BackendKind::ExtField: {
            detail::FpPoly r = a.ext_coeffs();
            const auto& y = b.ext_coeffs();
            if (r.size() < y.size()) r.resize(y.size(), 0);
            for (std::size_t i = 0; i < y.size(); ++i) r[i] = (r[i] + y[i]) % bk.p();
            detail::fp_trim(r);
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::Rational: return FieldElement(bk, a.rational() + b.rational());
        case BackendKind::NumberField: {
            detail::QPoly r = a.nf_coeffs();
            const auto& y = b.nf_coeffs();
            if (r.size() < y.size()) r.resize(y.size(), Rational(0));
            for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
            detail::q_trim(r);
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::ComplexFloat: return FieldElement(bk, a.complex() + b.complex());
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement neg(const FieldElement& a) {
    const Backend& bk = a.backend();
    switch (bk.kind()) {
        case BackendKind::PrimeField: return FieldElement(bk, a.residue() == 0 ? 0 : bk.p() - a.residue());
        case BackendKind::ExtField: {
            detail::FpPoly r = a.ext_coeffs();
            for (auto& c : r) c = c == 0 ? 0 : bk.p() - c;
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::Rational: return FieldElement(bk, -a.rational());
        case BackendKind::NumberField: {
            detail::QPoly r = a.nf_coeffs();
            for (auto& c : r) c = -c;
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::ComplexFloat: return FieldElement(bk, -a.complex());
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement sub(const FieldElement& a, const FieldElement& b) { return add(a, neg(b)); }

inline FieldElement mul(const FieldElement& a, const FieldElement& b) {
    detail::require_same(a, b);
    const Backend& bk = a.backend();
    switch (bk.kind()) {
        case BackendKind::PrimeField: return FieldElement(bk, (a.residue() * b.residue()) % bk.p());
        case BackendKind::ExtField: {
            detail::FpPoly r = detail::fp_mul(a.ext_coeffs(), b.ext_coeffs(), bk.p());
            r = detail::fp_rem(std::move(r), bk.modulus(), bk.p());
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::Rational: return FieldElement(bk, a.rational() * b.rational());
        case BackendKind::NumberField: {
            detail::QPoly r = detail::q_mul(a.nf_coeffs(), b.nf_coeffs());
            r = detail::q_rem(std::move(r), bk.minpoly());
            return FieldElement(bk, std::move(r));
        }
        case BackendKind::ComplexFloat: return FieldElement(bk, a.complex() * b.complex());
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement inv(const FieldElement& a) {
    const Backend& bk = a.backend();
    if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    switch (bk.kind()) {
        case BackendKind::PrimeField: return FieldElement(bk, detail::fp_inv_scalar(a.residue(), bk.p()));
        case BackendKind::ExtField: {
            // extended Euclid in F_p[x] modulo the field modulus
            const std::uint64_t p = bk.p();
            detail::FpPoly r0 = bk.modulus(), r1 = a.ext_coeffs();
            detail::FpPoly s0 = {}, s1 = {1};
            while (!r1.empty()) {
                // quotient of r0 by r1
                detail::FpPoly rem = r0, q;
                const std::uint64_t lcinv = detail::fp_inv_scalar(r1.back(), p);
                while (detail::fp_deg(rem) >= detail::fp_deg(r1)) {
                    std::uint64_t c = (rem.back() * lcinv) % p;
                    std::size_t shift = rem.size() - r1.size();
                    if (q.size() < shift + 1) q.resize(shift + 1, 0);
                    q[shift] = (q[shift] + c) % p;
                    for (std::size_t i = 0; i < r1.size(); ++i) {
                        std::uint64_t s = (c * r1[i]) % p;
                        rem[shift + i] = (rem[shift + i] + p - s) % p;
                    }
                    detail::fp_trim(rem);
                    if (rem.empty()) break;
                }
                detail::FpPoly s2 = s0;
                detail::FpPoly qs = detail::fp_mul(q, s1, p);
                if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
                for (std::size_t i = 0; i < qs.size(); ++i) s2[i] = (s2[i] + p - qs[i]) % p;
                detail::fp_trim(s2);
                r0 = std::move(r1);
                r1 = std::move(rem);
                s0 = std::move(s1);
                s1 = std::move(s2);
            }
            // r0 is a nonzero constant gcd
            std::uint64_t c = detail::fp_inv_scalar(r0[0], p);
            for (auto& x : s0) x = (x * c) % p;
            detail::fp_trim(s0);
            s0 = detail::fp_rem(std::move(s0), bk.modulus(), p);
            return FieldElement(bk, std::move(s0));
        }
        case BackendKind::Rational: return FieldElement(bk, Rational(1) / a.rational());
        case BackendKind::NumberField:
            return FieldElement(bk, detail::q_modinv(a.nf_coeffs(), bk.minpoly()));
        case BackendKind::ComplexFloat: return FieldElement(bk, Complex(1, 0) / a.complex());
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

inline FieldElement div(const FieldElement& a, const FieldElement& b) { return mul(a, inv(b)); }

inline FieldElement pow(const FieldElement& a, BigInt e) {
    FieldElement base = a;
    if (e < 0) {
        base = inv(base);
        e = -e;
    }
    FieldElement r = a.backend().one();
    while (e > 0) {
        if ((e & 1) != 0) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return mul(a, b); }
inline FieldElement operator/(const FieldElement& a, const FieldElement& b) { return div(a, b); }
inline FieldElement operator-(const FieldElement& a) { return neg(a); }

// --- canonical element encoding (indices, ordering, display) ---

inline FieldElement Backend::element_from_index(std::uint64_t idx) const {
    switch (kind()) {
        case BackendKind::PrimeField:
            if (idx >= d_->p) throw Error(ErrorCode::InvalidArgument, "index out of range");
            return FieldElement(*this, idx);
        case BackendKind::ExtField: {
            detail::FpPoly c;
            std::uint64_t t = idx;
            for (unsigned i = 0; i < d_->m && t > 0; ++i) {
                c.push_back(t % d_->p);
                t /= d_->p;
            }
            if (t > 0) throw Error(ErrorCode::InvalidArgument, "index out of range");
            detail::fp_trim(c);
            return FieldElement(*this, std::move(c));
        }
        default: throw Error(ErrorCode::UnsupportedBackend, "element indexing needs a finite field");
    }
}

inline FieldElement Backend::generator() const {
    if (kind() != BackendKind::ExtField)
        throw Error(ErrorCode::UnsupportedBackend, "generator only defined for extension fields");
    return FieldElement(*this, detail::FpPoly{0, 1});
}

inline std::uint64_t index_of(const FieldElement& a) {
    switch (a.backend().kind()) {
        case BackendKind::PrimeField: return a.residue();
        case BackendKind::ExtField: {
            std::uint64_t idx = 0, w = 1;
            for (auto c : a.ext_coeffs()) {
                idx += c * w;
                w *= a.backend().p();
            }
            return idx;
        }
        default: throw Error(ErrorCode::UnsupportedBackend, "element indexing needs a finite field");
    }
}

// Total order used for deterministic root selection and canonical block order.
// Finite fields: index order. Rationals: by (denominator, |numerator|, sign)
// so 0 < 1 < -1 < 2 < ... < 1/2 < ... Complex: lexicographic (re, im).
inline bool canonical_less(const FieldElement& a, const FieldElement& b) {
    detail::require_same(a, b);
    auto rat_key_less = [](const Rational& x, const Rational& y) {
        BigInt dx = denominator(x), dy = denominator(y);
        if (dx != dy) return dx < dy;
        BigInt nx = abs(numerator(x)), ny = abs(numerator(y));
        if (nx != ny) return nx < ny;
        return numerator(x) > numerator(y);  // positive before negative
    };
    switch (a.backend().kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField: return index_of(a) < index_of(b);
        case BackendKind::Rational: return rat_key_less(a.rational(), b.rational());
        case BackendKind::NumberField: {
            const auto &x = a.nf_coeffs(), &y = b.nf_coeffs();
            std::size_t n = std::max(x.size(), y.size());
            for (std::size_t i = 0; i < n; ++i) {
                Rational xi = i < x.size() ? x[i] : Rational(0);
                Rational yi = i < y.size() ? y[i] : Rational(0);
                if (xi != yi) return rat_key_less(xi, yi);
            }
            return false;
        }
        case BackendKind::ComplexFloat: {
            Complex x = a.complex(), y = b.complex();
            if (x.real() != y.real()) return x.real() < y.real();
            return x.imag() < y.imag();
        }
    }
    return false;
}

inline std::string to_string(const FieldElement& a) {
    std::ostringstream os;
    switch (a.backend().kind()) {
        case BackendKind::PrimeField: os << a.residue(); break;
        case BackendKind::ExtField: {
            const auto& c = a.ext_coeffs();
            if (c.empty()) {
                os << "0";
                break;
            }
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) os << ",";
                os << c[i];
            }
            break;
        }
        case BackendKind::Rational: os << a.rational(); break;
        case BackendKind::NumberField: {
            const auto& c = a.nf_coeffs();
            if (c.empty()) {
                os << "0";
                break;
            }
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) os << ",";
                os << c[i];
            }
            break;
        }
        case BackendKind::ComplexFloat: {
            os.precision(17);
            os << a.complex().real() << (a.complex().imag() < 0 ? "" : "+") << a.complex().imag() << "i";
            break;
        }
    }
    return os.str();
}

// --- embeddings and extension towers ---

// Ring embedding of one finite field (or Q) into an extension; determined by
// the image of the source generator, chosen as the least root of the source
// modulus in the target.
class Embedding {
   public:
    Embedding(Backend from, Backend to, FieldElement gen_image)
        : from_(std::move(from)), to_(std::move(to)), gen_image_(std::move(gen_image)) {}

    const Backend& from() const { return from_; }
    const Backend& to() const { return to_; }

    FieldElement operator()(const FieldElement& a) const {
        if (a.backend() != from_) throw Error(ErrorCode::BackendMismatch, "element not in embedding source");
        switch (from_.kind()) {
            case BackendKind::PrimeField: return to_.from_int(static_cast<long long>(a.residue()));
            case BackendKind::ExtField: {
                // Horner in the image of the generator
                FieldElement r = to_.zero();
                const auto& c = a.ext_coeffs();
                for (std::size_t i = c.size(); i-- > 0;)
                    r = add(mul(r, gen_image_), to_.from_int(static_cast<long long>(c[i])));
                return r;
            }
            case BackendKind::Rational: return to_.from_rational(a.rational());
            default:
                if (from_ == to_) return a;  // identity on ComplexFloat / NumberField
                throw Error(ErrorCode::UnsupportedBackend, "unsupported embedding source");
        }
    }

   private:
    Backend from_, to_;
    FieldElement gen_image_;
};

// embedding F_{p^a} -> F_{p^b} with a | b (also identity and prime-field sources)
inline Embedding make_embedding(const Backend& from, const Backend& to) {
    if (from == to) {
        FieldElement g = from.kind() == BackendKind::ExtField ? from.generator() : from.zero();
        return Embedding(from, to, g);
    }
    if (from.kind() == BackendKind::Rational &&
        (to.kind() == BackendKind::NumberField || to.kind() == BackendKind::ComplexFloat ||
         to.kind() == BackendKind::Rational))
        return Embedding(from, to, to.zero());
    if (!from.is_finite() || !to.is_finite() || from.p() != to.p() || to.ext_degree() % from.ext_degree() != 0)
        throw Error(ErrorCode::UnsupportedBackend, "no embedding between these backends");
    if (from.kind() == BackendKind::PrimeField) return Embedding(from, to, to.zero());
    // least root of the source modulus in the target field
    const auto& mod = from.modulus();
    std::uint64_t q = to.field_size();
    for (std::uint64_t i = 0; i < q; ++i) {
        FieldElement z = to.element_from_index(i);
        FieldElement acc = to.zero();
        for (std::size_t j = mod.size(); j-- > 0;)
            acc = add(mul(acc, z), to.from_int(static_cast<long long>(mod[j])));
        if (acc.is_zero()) return Embedding(from, to, z);
    }
    throw Error(ErrorCode::InvalidArgument, "source modulus has no root in target field");
}

// F_{p^{m}} extended by relative degree k, together with the embedding
inline std::pair<Backend, Embedding> extend(const Backend& base, unsigned k) {
    if (!base.is_finite())
        throw Error(ErrorCode::UnsupportedBackend, "extend is defined for finite fields only");
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "relative degree must be >= 1");
    unsigned m = base.ext_degree() * k;
    Backend big = Backend::finite_field(base.p(), m);
    return {big, make_embedding(base, big)};
}

// does z lie in the subfield of index-d Frobenius fixed points over F_p? (z^{p^d} == z)
inline bool in_subfield(const FieldElement& z, unsigned d) {
    BigInt e = 1;
    for (unsigned i = 0; i < d; ++i) e *= z.backend().p();
    return pow(z, e) == z;
}

}  // namespace matfun

#endif
