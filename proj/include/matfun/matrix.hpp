#ifndef MATFUN_MATRIX_HPP
#define MATFUN_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "error.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace matfun {

class SquareMatrix {
   public:
    SquareMatrix(Backend bk, std::size_t n) : bk_(std::move(bk)), n_(n), e_(n * n, bk_.zero()) {
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
    }

    SquareMatrix(Backend bk, std::size_t n, std::vector<FieldElement> entries)
        : bk_(std::move(bk)), n_(n), e_(std::move(entries)) {
        if (n == 0 || e_.size() != n * n) throw Error(ErrorCode::InvalidArgument, "bad matrix shape");
        for (const auto& x : e_)
            if (x.backend() != bk_) throw Error(ErrorCode::BackendMismatch, "entry from wrong backend");
    }

    static SquareMatrix identity(const Backend& bk, std::size_t n) {
        SquareMatrix m(bk, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = bk.one();
        return m;
    }

    static SquareMatrix from_ints(const Backend& bk, const std::vector<std::vector<long long>>& rows) {
        std::size_t n = rows.size();
        std::vector<FieldElement> e;
        for (const auto& r : rows) {
            if (r.size() != n) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
            for (auto v : r) e.push_back(bk.from_int(v));
        }
        return SquareMatrix(bk, n, std::move(e));
    }

    // r x r Jordan block with the given eigenvalue
    static SquareMatrix jordan_block(const FieldElement& lambda, std::size_t r) {
        SquareMatrix m(lambda.backend(), r);
        for (std::size_t i = 0; i < r; ++i) {
            m.at(i, i) = lambda;
            if (i + 1 < r) m.at(i, i + 1) = lambda.backend().one();
        }
        return m;
    }

    const Backend& backend() const { return bk_; }
    std::size_t dim() const { return n_; }

    FieldElement& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const FieldElement& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
        if (a.bk_ != b.bk_ || a.n_ != b.n_) return false;
        for (std::size_t i = 0; i < a.e_.size(); ++i)
            if (a.e_[i] != b.e_[i]) return false;
        return true;
    }
    friend bool operator!=(const SquareMatrix& a, const SquareMatrix& b) { return !(a == b); }

    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        check_shapes(a, b);
        SquareMatrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = add(r.e_[i], b.e_[i]);
        return r;
    }
    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        check_shapes(a, b);
        SquareMatrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = sub(r.e_[i], b.e_[i]);
        return r;
    }
    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        check_shapes(a, b);
        SquareMatrix r(a.bk_, a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                const FieldElement& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < a.n_; ++j) r.at(i, j) = add(r.at(i, j), mul(aik, b.at(k, j)));
            }
        return r;
    }
    friend SquareMatrix operator*(const FieldElement& s, const SquareMatrix& a) {
        SquareMatrix r = a;
        for (auto& x : r.e_) x = mul(s, x);
        return r;
    }

    double frobenius_approx() const {
        double s = 0;
        for (const auto& x : e_) {
            double v = x.abs_approx();
            s += v * v;
        }
        return std::sqrt(s);
    }

   private:
    static void check_shapes(const SquareMatrix& a, const SquareMatrix& b) {
        if (a.bk_ != b.bk_) throw Error(ErrorCode::BackendMismatch, "matrices over different backends");
        if (a.n_ != b.n_) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    }

    Backend bk_;
    std::size_t n_;
    std::vector<FieldElement> e_;
};

inline SquareMatrix embed(const SquareMatrix& a, const Embedding& phi) {
    SquareMatrix r(phi.to(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) r.at(i, j) = phi(a.at(i, j));
    return r;
}

// Horner evaluation of f at a matrix argument
inline SquareMatrix mat_eval_poly(const Polynomial& f, const SquareMatrix& a) {
    if (f.backend() != a.backend()) throw Error(ErrorCode::BackendMismatch, "polynomial and matrix backends differ");
    const Backend& bk = a.backend();
    SquareMatrix r(bk, a.dim());
    if (f.is_zero()) return r;
    const auto& c = f.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        r = r * a;
        for (std::size_t d = 0; d < a.dim(); ++d) r.at(d, d) = add(r.at(d, d), c[i]);
    }
    return r;
}

namespace detail {

// binomial coefficient reduced into the backend; Lucas' theorem in char p
inline FieldElement binomial_in(const Backend& bk, std::uint64_t m, std::uint64_t d) {
    if (d > m) return bk.zero();
    std::uint64_t p = bk.characteristic();
    if (p != 0) {
        std::uint64_t r = 1;
        std::uint64_t mm = m, dd = d;
        while (dd > 0 || mm > 0) {
            std::uint64_t mi = mm % p, di = dd % p;
            if (di > mi) return bk.zero();
            // C(mi, di) mod p with mi, di < p
            std::uint64_t num = 1, den = 1;
            for (std::uint64_t i = 0; i < di; ++i) {
                num = (num * ((mi - i) % p)) % p;
                den = (den * ((i + 1) % p)) % p;
            }
            r = (r * ((num * fp_inv_scalar(den, p)) % p)) % p;
            mm /= p;
            dd /= p;
        }
        return bk.from_integer(BigInt(r));
    }
    BigInt c = 1;
    for (std::uint64_t i = 0; i < d; ++i) {
        c *= BigInt(m - i);
        c /= BigInt(i + 1);
    }
    return bk.from_integer(c);
}

}  // namespace detail

// f(J_r(lambda)) in closed form: upper-triangular Toeplitz with offset-d entry
// sum_m a_m C(m,d) lambda^{m-d}; the offset-1 entry is f'(lambda) in every
// characteristic.
inline SquareMatrix jordan_block_eval(const Polynomial& f, const FieldElement& lambda, std::size_t r) {
    const Backend& bk = lambda.backend();
    if (!f.is_zero() && f.backend() != bk)
        throw Error(ErrorCode::BackendMismatch, "polynomial and eigenvalue backends differ");
    SquareMatrix out(bk, r);
    if (f.is_zero()) return out;
    const auto& a = f.coeffs();
    for (std::size_t d = 0; d < r; ++d) {
        FieldElement entry = bk.zero();
        for (std::size_t m = d; m < a.size(); ++m) {
            FieldElement term = mul(a[m], detail::binomial_in(bk, m, d));
            term = mul(term, pow(lambda, BigInt(m - d)));
            entry = add(entry, term);
        }
        for (std::size_t i = 0; i + d < r; ++i) out.at(i, i + d) = entry;
    }
    return out;
}

// --- Gaussian elimination over any backend ---
// tol == 0 means exact zero tests; numeric callers pass eps * n * norm.

namespace detail {

inline bool near_zero(const FieldElement& x, double tol) {
    if (x.backend().kind() == BackendKind::ComplexFloat && tol > 0) return x.abs_approx() <= tol;
    return x.is_zero();
}

// row echelon reduction of an arbitrary rows x cols matrix in place;
// returns pivot column per pivot row
inline std::vector<std::size_t> row_echelon(std::vector<std::vector<FieldElement>>& m, double tol) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // pick pivot: largest magnitude for numeric, first nonzero otherwise
        std::size_t best = rows;
        double best_mag = -1;
        for (std::size_t i = r; i < rows; ++i) {
            if (near_zero(m[i][c], tol)) continue;
            if (tol > 0) {
                double mag = m[i][c].abs_approx();
                if (mag > best_mag) {
                    best_mag = mag;
                    best = i;
                }
            } else {
                best = i;
                break;
            }
        }
        if (best == rows) continue;
        std::swap(m[r], m[best]);
        FieldElement pinv = inv(m[r][c]);
        for (std::size_t j = c; j < cols; ++j) m[r][j] = mul(pinv, m[r][j]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || near_zero(m[i][c], 0)) continue;
            FieldElement factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] = sub(m[i][j], mul(factor, m[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(const SquareMatrix& a, double tol = 0) {
    std::vector<std::vector<FieldElement>> m(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m[i].push_back(a.at(i, j));
    return detail::row_echelon(m, tol).size();
}

// rank of a matrix given by columns (each a length-n vector)
inline std::size_t rank_of_columns(const std::vector<std::vector<FieldElement>>& cols, double tol = 0) {
    if (cols.empty()) return 0;
    std::size_t n = cols[0].size();
    std::vector<std::vector<FieldElement>> m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& col : cols) m[i].push_back(col[i]);
    return detail::row_echelon(m, tol).size();
}

inline SquareMatrix inverse(const SquareMatrix& a, double tol = 0) {
    const std::size_t n = a.dim();
    std::vector<std::vector<FieldElement>> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i].push_back(a.at(i, j));
        for (std::size_t j = 0; j < n; ++j)
            m[i].push_back(i == j ? a.backend().one() : a.backend().zero());
    }
    auto pivots = detail::row_echelon(m, tol);
    if (pivots.size() != n || pivots.back() >= n)
        throw Error(ErrorCode::DivisionByZero, "matrix is singular");
    SquareMatrix r(a.backend(), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = m[i][n + j];
    return r;
}

// basis of the right nullspace, as column vectors
inline std::vector<std::vector<FieldElement>> nullspace_basis(const SquareMatrix& a, double tol = 0) {
    const std::size_t n = a.dim();
    const Backend& bk = a.backend();
    std::vector<std::vector<FieldElement>> m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i].push_back(a.at(i, j));
    auto pivots = detail::row_echelon(m, tol);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<FieldElement>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<FieldElement> v(n, bk.zero());
        v[free] = bk.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = neg(m[r][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<FieldElement> mat_vec(const SquareMatrix& a, const std::vector<FieldElement>& v) {
    std::vector<FieldElement> r(a.dim(), a.backend().zero());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) r[i] = add(r[i], mul(a.at(i, j), v[j]));
    return r;
}

// characteristic polynomial det(xI - A), monic, via the division-free
// polynomial determinant
inline Polynomial char_poly(const SquareMatrix& a) {
    const Backend& bk = a.backend();
    const std::size_t n = a.dim();
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial(bk)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                m[i][j] = Polynomial(bk, {neg(a.at(i, j)), bk.one()});
            else if (!a.at(i, j).is_zero())
                m[i][j] = Polynomial::constant(neg(a.at(i, j)));
        }
    return det_poly_matrix(m);
}

// dim ker(A - lambda I); the number of Jordan blocks at lambda
inline std::size_t block_count(const SquareMatrix& a, const FieldElement& lambda, double tol = 0) {
    SquareMatrix m = a;
    for (std::size_t i = 0; i < a.dim(); ++i) m.at(i, i) = sub(m.at(i, i), lambda);
    return a.dim() - rank(m, tol);
}

}  // namespace matfun

#endif
