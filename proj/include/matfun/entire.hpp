#ifndef MATFUN_ENTIRE_HPP
#define MATFUN_ENTIRE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "jordan.hpp"
#include "matrix.hpp"
#include "solver.hpp"

namespace matfun {

// Catalog member with closed-form derivatives, image description, critical
// set, and a principal-branch fiber solver. The critical sets are classical:
// exp has none (f' = f never vanishes), sin and cos have exactly {1, -1}.
struct EntireFunction {
    std::string name;
    std::function<Complex(Complex)> value;
    std::function<Complex(Complex, unsigned)> deriv;  // f^{(k)}, k >= 0
    std::optional<Complex> omitted;                   // p_f when the image misses one point
    std::vector<Complex> critical_set;                // at most 2 values
    std::function<Complex(Complex)> principal_preimage;
};

struct DomainVerdict {
    bool in_domain;
    std::vector<FieldElement> offending;
};

inline EntireFunction catalog(const std::string& name) {
    if (name == "exp") {
        EntireFunction f;
        f.name = "exp";
        f.value = [](Complex z) { return std::exp(z); };
        f.deriv = [](Complex z, unsigned) { return std::exp(z); };
        f.omitted = Complex(0, 0);
        f.critical_set = {};
        f.principal_preimage = [](Complex t) { return std::log(t); };
        return f;
    }
    if (name == "sin") {
        EntireFunction f;
        f.name = "sin";
        f.value = [](Complex z) { return std::sin(z); };
        f.deriv = [](Complex z, unsigned k) {
            switch (k % 4) {
                case 0: return std::sin(z);
                case 1: return std::cos(z);
                case 2: return -std::sin(z);
                default: return -std::cos(z);
            }
        };
        f.critical_set = {Complex(1, 0), Complex(-1, 0)};
        f.principal_preimage = [](Complex t) { return std::asin(t); };
        return f;
    }
    if (name == "cos") {
        EntireFunction f;
        f.name = "cos";
        f.value = [](Complex z) { return std::cos(z); };
        f.deriv = [](Complex z, unsigned k) {
            switch (k % 4) {
                case 0: return std::cos(z);
                case 1: return -std::sin(z);
                case 2: return -std::cos(z);
                default: return std::sin(z);
            }
        };
        f.critical_set = {Complex(1, 0), Complex(-1, 0)};
        f.principal_preimage = [](Complex t) { return std::acos(t); };
        return f;
    }
    throw Error(ErrorCode::UnknownFunction, "catalog covers exp, sin, cos");
}

namespace detail {

inline void require_numeric(const Backend& bk) {
    if (bk.kind() != BackendKind::ComplexFloat)
        throw Error(ErrorCode::UnsupportedBackend, "entire functions act on the numeric backend");
}

// upper-triangular Toeplitz block with entries f^{(d)}(lambda)/d!
inline SquareMatrix entire_block(const EntireFunction& fn, const Backend& bk, Complex lambda, std::size_t r) {
    SquareMatrix out(bk, r);
    double fact = 1;
    for (std::size_t d = 0; d < r; ++d) {
        if (d > 0) fact *= static_cast<double>(d);
        Complex v = fn.deriv(lambda, static_cast<unsigned>(d)) / fact;
        for (std::size_t i = 0; i + d < r; ++i) out.at(i, i + d) = FieldElement(bk, v);
    }
    return out;
}

}  // namespace detail

// f(A) through the Jordan form and the derivative formula for each block
inline SquareMatrix eval_entire(const EntireFunction& fn, const SquareMatrix& a) {
    detail::require_numeric(a.backend());
    JordanDecomposition dec = jordan_form(a);
    const Backend& bk = dec.field;
    SquareMatrix diag(bk, a.dim());
    std::size_t off = 0;
    for (const auto& b : dec.blocks) {
        SquareMatrix blk = detail::entire_block(fn, bk, b.eigenvalue.complex(), b.size);
        for (std::size_t i = 0; i < b.size; ++i)
            for (std::size_t j = 0; j < b.size; ++j) diag.at(off + i, off + j) = blk.at(i, j);
        off += b.size;
    }
    double tol = bk.eps() * static_cast<double>(a.dim()) * std::max(1.0, a.frobenius_approx());
    return dec.transform * diag * inverse(dec.transform, tol);
}

// truncated Taylor evaluation; the independent route used for cross-checks
inline SquareMatrix eval_entire_taylor(const EntireFunction& fn, const SquareMatrix& a) {
    detail::require_numeric(a.backend());
    const Backend& bk = a.backend();
    double norm = std::max(1.0, a.frobenius_approx());
    // smallest K with norm^K / K! <= eps, capped at 60
    std::size_t terms = 1;
    double bound = 1;
    while (terms < 60) {
        bound *= norm / static_cast<double>(terms);
        if (bound <= bk.eps()) break;
        ++terms;
    }
    SquareMatrix sum(bk, a.dim());
    SquareMatrix power = SquareMatrix::identity(bk, a.dim());
    double fact = 1;
    for (std::size_t k = 0; k <= terms; ++k) {
        if (k > 0) {
            fact *= static_cast<double>(k);
            power = power * a;
        }
        Complex coeff = fn.deriv(Complex(0, 0), static_cast<unsigned>(k)) / fact;
        if (coeff != Complex(0, 0)) {
            SquareMatrix term = FieldElement(bk, coeff) * power;
            sum = sum + term;
        }
    }
    return sum;
}

inline DomainVerdict in_domain(const EntireFunction& fn, const SquareMatrix& a) {
    detail::require_numeric(a.backend());
    DomainVerdict v{true, {}};
    if (!fn.omitted) return v;
    JordanDecomposition dec = jordan_form(a);
    for (const auto& b : dec.blocks) {
        double scale = std::max(1.0, std::abs(b.eigenvalue.complex()));
        if (std::abs(b.eigenvalue.complex() - *fn.omitted) <= a.backend().eps() * scale) {
            v.in_domain = false;
            v.offending.push_back(b.eigenvalue);
        }
    }
    return v;
}

// entire-function solver: mirrors the polynomial block machinery with the
// catalog's principal-branch fiber solver.
inline SolveOutcome solve_entire(const EntireFunction& fn, const SquareMatrix& a) {
    detail::require_numeric(a.backend());
    const Backend& bk = a.backend();
    const double eps = bk.eps();
    JordanDecomposition dec = jordan_form(a);

    DomainVerdict dv{true, {}};
    if (fn.omitted) {
        for (const auto& b : dec.blocks) {
            double scale = std::max(1.0, std::abs(b.eigenvalue.complex()));
            if (std::abs(b.eigenvalue.complex() - *fn.omitted) <= eps * scale) {
                dv.in_domain = false;
                dv.offending.push_back(b.eigenvalue);
            }
        }
    }
    if (!dv.in_domain) return SolveOutcome::not_in_domain(std::move(dv.offending));

    // eigenvalues carry the Jordan clustering error, so the criticality test
    // runs at that radius rather than at eps
    double radius = static_cast<double>(a.dim()) * std::sqrt(eps) * std::max(1.0, a.frobenius_approx());
    auto is_critical = [&](Complex t) {
        for (const auto& c : fn.critical_set)
            if (std::abs(t - c) <= radius) return true;
        return false;
    };
    bool has_critical = false;
    for (const auto& b : dec.blocks) {
        if (b.size < 2 || !is_critical(b.eigenvalue.complex())) continue;
        if (dec.blocks.size() == 1) {
            Complex u = fn.principal_preimage(b.eigenvalue.complex());
            std::vector<WitnessRoot> fiber = {{FieldElement(bk, u), 1, FieldElement(bk, fn.deriv(u, 1))}};
            return SolveOutcome::obstruction({b.eigenvalue, b.size, std::move(fiber)});
        }
        has_critical = true;
    }
    if (has_critical)
        return SolveOutcome::undetermined(
            "critical eigenvalue on a multi-block matrix: the criterion does not decide membership here");

    SquareMatrix diag(bk, a.dim());
    std::vector<FieldElement> witnesses;
    std::size_t off = 0;
    double tol = eps * static_cast<double>(a.dim()) * std::max(1.0, a.frobenius_approx());
    for (const auto& b : dec.blocks) {
        Complex u = fn.principal_preimage(b.eigenvalue.complex());
        witnesses.emplace_back(bk, u);
        SquareMatrix xb(bk, b.size);
        if (b.size == 1) {
            xb.at(0, 0) = FieldElement(bk, u);
        } else {
            if (std::abs(fn.deriv(u, 1)) <= eps)
                return SolveOutcome::undetermined("principal fiber point has a vanishing derivative");
            SquareMatrix ju = SquareMatrix::jordan_block(FieldElement(bk, u), b.size);
            SquareMatrix fju = detail::entire_block(fn, bk, u, b.size);
            JordanDecomposition bd = jordan_form(fju);
            if (bd.blocks.size() != 1 || bd.blocks[0].size != b.size)
                throw Error(ErrorCode::NumericallyDefective, "block image did not reduce to a single Jordan block");
            SquareMatrix q = bd.transform;
            xb = inverse(q, eps * static_cast<double>(b.size)) * ju * q;
        }
        for (std::size_t i = 0; i < b.size; ++i)
            for (std::size_t j = 0; j < b.size; ++j) diag.at(off + i, off + j) = xb.at(i, j);
        off += b.size;
    }
    SquareMatrix x = dec.transform * diag * inverse(dec.transform, tol);
    return SolveOutcome::found(std::move(x), std::move(witnesses));
}

}  // namespace matfun

#endif
