#ifndef MATFUN_ORACLE_HPP
#define MATFUN_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"
#include "solver.hpp"

namespace matfun {

// enumeration cap for the image search: q^(n*n) <= 2^26
inline constexpr double kOracleLogCap = 26.0;
// largest field the critical-value oracle scans directly
inline constexpr std::uint64_t kOracleFieldCap = 1 << 10;

struct OracleCriticalReport {
    bool all_values = false;
    std::vector<FieldElement> values;  // in `field`
    Backend field;                     // the scan field F_{q^m}
    std::uint64_t candidates_tested = 0;
};

struct OracleReport {
    bool found = false;
    std::optional<SquareMatrix> witness;
    std::uint64_t tested = 0;
    unsigned extensions_tried = 0;
    std::string search_space;
};

namespace detail {

// add/mul tables for one finite field, cached per (p, m)
struct FieldTables {
    std::uint32_t q;
    std::vector<std::uint16_t> addt, mult;

    std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return addt[std::size_t(a) * q + b]; }
    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mult[std::size_t(a) * q + b]; }
};

inline std::shared_ptr<const FieldTables> field_tables(const Backend& bk) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const FieldTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(bk.p(), bk.ext_degree());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::uint64_t q = bk.field_size();
    if (q > (1u << 12)) throw Error(ErrorCode::SearchSpaceTooLarge, "field too large for lookup tables");
    auto t = std::make_shared<FieldTables>();
    t->q = static_cast<std::uint32_t>(q);
    t->addt.resize(q * q);
    t->mult.resize(q * q);
    std::vector<FieldElement> elems;
    elems.reserve(q);
    for (std::uint64_t i = 0; i < q; ++i) elems.push_back(bk.element_from_index(i));
    for (std::uint64_t i = 0; i < q; ++i)
        for (std::uint64_t j = 0; j < q; ++j) {
            t->addt[i * q + j] = static_cast<std::uint16_t>(index_of(add(elems[i], elems[j])));
            t->mult[i * q + j] = static_cast<std::uint16_t>(index_of(mul(elems[i], elems[j])));
        }
    cache[key] = t;
    return t;
}

}  // namespace detail

// Definition replay of the critical-value condition over the scan field
// F_{q^m}: candidates are t = f(u) with u in the scan field and f'(u) = 0;
// the fiber of t is gathered pointwise and tested against Z(f').
inline OracleCriticalReport oracle_critical_values(const Polynomial& f, unsigned ext_bound) {
    const Backend& base = f.backend();
    if (!base.is_finite()) throw Error(ErrorCode::UnsupportedBackend, "the oracle scans finite fields");
    if (f.is_zero() || f.is_constant()) throw Error(ErrorCode::DegreeZero, "oracle needs deg f >= 1");
    if (f.degree() > 6) throw Error(ErrorCode::SearchSpaceTooLarge, "oracle limited to deg f <= 6");

    unsigned m_abs = base.ext_degree() * ext_bound;
    long double qm = 1;
    for (unsigned i = 0; i < m_abs; ++i) qm *= static_cast<long double>(base.p());
    if (qm > static_cast<long double>(kOracleFieldCap))
        throw Error(ErrorCode::SearchSpaceTooLarge, "scan field exceeds the 2^10 cap");

    auto [big, phi] = extend(base, ext_bound);
    Polynomial fb = embed(f, phi);
    Polynomial fpb = derivative(fb);
    OracleCriticalReport rep;
    rep.field = big;
    if (fpb.is_zero()) {
        rep.all_values = true;
        return rep;
    }
    const std::uint64_t q = big.field_size();
    std::vector<FieldElement> elems;
    elems.reserve(q);
    for (std::uint64_t i = 0; i < q; ++i) elems.push_back(big.element_from_index(i));

    // roots of f' outside the scan field exist only when some degree <= deg f'
    // does not divide m; then a partially scanned fiber cannot be classified
    bool fprime_splits_here = true;
    if (!fpb.is_constant())
        for (unsigned d = 1; d <= fpb.degree(); ++d)
            if (ext_bound % d != 0) fprime_splits_here = false;

    std::vector<FieldElement> candidates;
    for (std::uint64_t i = 0; i < q; ++i) {
        if (!eval(fpb, elems[i]).is_zero()) continue;
        FieldElement t = eval(fb, elems[i]);
        if (std::none_of(candidates.begin(), candidates.end(), [&](const FieldElement& x) { return x == t; }))
            candidates.push_back(t);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) { return canonical_less(x, y); });

    for (const auto& t : candidates) {
        ++rep.candidates_tested;
        Polynomial g = fb - Polynomial::constant(t);
        bool critical = true;
        for (std::uint64_t i = 0; i < q && !g.is_constant(); ++i) {
            unsigned mult = detail::strip_root(g, elems[i]);
            if (mult > 0 && !eval(fpb, elems[i]).is_zero()) {
                critical = false;
                break;
            }
        }
        if (critical && !g.is_constant()) {
            // residual fiber points live outside the scan field
            if (fprime_splits_here)
                critical = false;  // Z(f') lies inside the scan field, so they escape it
            else
                throw Error(ErrorCode::SearchSpaceTooLarge,
                            "fiber leaves the scan field; pick ext-bound divisible by all degrees <= deg f'");
        }
        if (critical) rep.values.push_back(t);
    }
    return rep;
}

// Exhaustive search for X with f(X) = A over M_n(F_{q^e}), e = 1..ext_bound.
// Enumeration is row-major with entries in canonical index order, so the first
// hit is a reproducible witness.
inline OracleReport oracle_image_search(const Polynomial& f, const SquareMatrix& a, unsigned ext_bound) {
    const Backend& base = a.backend();
    if (!base.is_finite()) throw Error(ErrorCode::UnsupportedBackend, "the oracle scans finite fields");
    if (f.backend() != base) throw Error(ErrorCode::BackendMismatch, "polynomial and matrix backends differ");
    if (f.is_zero() || f.is_constant()) throw Error(ErrorCode::DegreeZero, "oracle needs deg f >= 1");
    const std::size_t n = a.dim();
    OracleReport rep;

    for (unsigned e = 1; e <= ext_bound; ++e) {
        auto [big, phi] = extend(base, e);
        const std::uint64_t q = big.field_size();
        double bits = static_cast<double>(n * n) * std::log2(static_cast<double>(q));
        if (bits > kOracleLogCap) {
            if (e == 1) throw Error(ErrorCode::SearchSpaceTooLarge, "enumeration exceeds the 2^26 cap");
            break;
        }
        ++rep.extensions_tried;
        rep.search_space += (rep.search_space.empty() ? "" : ", ") + std::string("M_") + std::to_string(n) +
                            "(F_" + std::to_string(q) + ")";
        auto tables = detail::field_tables(big);

        std::vector<std::uint16_t> target(n * n);
        SquareMatrix abig = embed(a, phi);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                target[i * n + j] = static_cast<std::uint16_t>(index_of(abig.at(i, j)));
        Polynomial fbig = embed(f, phi);
        std::vector<std::uint16_t> coeff;
        for (const auto& c : fbig.coeffs()) coeff.push_back(static_cast<std::uint16_t>(index_of(c)));
        const std::size_t deg = coeff.size() - 1;

        std::vector<std::uint16_t> x(n * n, 0), h(n * n), tmp(n * n);
        const std::uint16_t qm1 = static_cast<std::uint16_t>(q - 1);
        while (true) {
            ++rep.tested;
            // Horner: h = c_d * X + ... evaluated in matrices
            for (std::size_t i = 0; i < n * n; ++i) h[i] = 0;
            for (std::size_t i = 0; i < n; ++i) h[i * n + i] = coeff[deg];
            for (std::size_t k = deg; k-- > 0;) {
                // tmp = h * x
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        std::uint16_t s = 0;
                        for (std::size_t l = 0; l < n; ++l)
                            s = tables->add(s, tables->mul(h[i * n + l], x[l * n + j]));
                        tmp[i * n + j] = s;
                    }
                h = tmp;
                for (std::size_t i = 0; i < n; ++i) h[i * n + i] = tables->add(h[i * n + i], coeff[k]);
            }
            if (h == target) {
                std::vector<FieldElement> entries;
                for (auto idx : x) entries.push_back(big.element_from_index(idx));
                SquareMatrix wit(big, n, std::move(entries));
                // replay through the generic evaluator before reporting
                if (mat_eval_poly(fbig, wit) != abig)
                    throw Error(ErrorCode::InvalidArgument, "oracle verification failed");
                rep.found = true;
                rep.witness = std::move(wit);
                return rep;
            }
            // odometer: last entry fastest
            std::size_t pos = n * n;
            bool overflow = true;
            while (pos > 0) {
                --pos;
                if (x[pos] == qm1) {
                    x[pos] = 0;
                } else {
                    ++x[pos];
                    overflow = false;
                    break;
                }
            }
            if (overflow) break;
        }
    }
    return rep;
}

}  // namespace matfun

#endif
