#ifndef MATFUN_JORDAN_HPP
#define MATFUN_JORDAN_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace matfun {

struct JordanBlock {
    FieldElement eigenvalue;
    std::size_t size;
};

struct JordanDecomposition {
    std::vector<JordanBlock> blocks;  // canonical order: eigenvalue encoding, then size descending
    SquareMatrix transform;           // P with A = P J P^{-1} (over `field`)
    Backend field;                    // field of definition, possibly an extension of the input backend

    SquareMatrix jordan_matrix() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.size;
        SquareMatrix j(field, n);
        std::size_t off = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.size; ++i) {
                j.at(off + i, off + i) = b.eigenvalue;
                if (i + 1 < b.size) j.at(off + i, off + i + 1) = field.one();
            }
            off += b.size;
        }
        return j;
    }
};

namespace detail {

struct Eigenvalue {
    FieldElement value;       // in the decomposition field
    std::size_t multiplicity;
};

// distinct eigenvalues of A together with the (possibly extended) field that
// contains them and A embedded there
inline std::pair<std::vector<Eigenvalue>, SquareMatrix> eigenvalues_split(const SquareMatrix& a) {
    const Backend& bk = a.backend();
    const std::size_t n = a.dim();
    Polynomial cp = char_poly(a);
    switch (bk.kind()) {
        case BackendKind::PrimeField:
        case BackendKind::ExtField: {
            RootMultiset rs = roots(cp, static_cast<unsigned>(n));
            if (!rs.complete)
                throw Error(ErrorCode::EigenvaluesNotSplit, "eigenvalues not found within the extension bound");
            unsigned l = 1;
            for (const auto& e : rs.entries)
                l = std::lcm(l, e.field.ext_degree() / bk.ext_degree());
            auto [big, phi] = extend(bk, l);
            std::vector<Eigenvalue> ev;
            for (const auto& e : rs.entries) {
                Embedding lift = make_embedding(e.field, big);
                ev.push_back({lift(e.root), e.multiplicity});
            }
            return {std::move(ev), embed(a, phi)};
        }
        case BackendKind::Rational: {
            RootMultiset rs = roots(cp);
            if (!rs.complete)
                throw Error(ErrorCode::EigenvaluesNotSplit, "irrational eigenvalues; use the numeric backend");
            std::vector<Eigenvalue> ev;
            for (const auto& e : rs.entries) ev.push_back({e.root, e.multiplicity});
            return {std::move(ev), a};
        }
        case BackendKind::ComplexFloat: {
            RootMultiset rs = roots(cp);
            // merge eigenvalues within n * sqrt(eps) * ||A|| before rank decisions
            double radius = static_cast<double>(n) * std::sqrt(bk.eps()) * std::max(1.0, a.frobenius_approx());
            std::vector<Eigenvalue> ev;
            for (const auto& e : rs.entries) {
                bool merged = false;
                for (auto& x : ev) {
                    if (std::abs(x.value.complex() - e.root.complex()) <= radius) {
                        // weighted mean keeps the cluster representative stable
                        double wa = static_cast<double>(x.multiplicity), wb = static_cast<double>(e.multiplicity);
                        Complex mean = (x.value.complex() * wa + e.root.complex() * wb) / (wa + wb);
                        x.value = FieldElement(bk, mean);
                        x.multiplicity += e.multiplicity;
                        merged = true;
                        break;
                    }
                }
                if (!merged) ev.push_back({e.root, e.multiplicity});
            }
            return {std::move(ev), a};
        }
        case BackendKind::NumberField:
            throw Error(ErrorCode::UnsupportedBackend, "no Jordan forms over number fields");
    }
    throw Error(ErrorCode::InvalidArgument, "bad backend");
}

}  // namespace detail

// Jordan normal form A = P J P^{-1}. Block structure per eigenvalue comes from
// the Weyr sequence w_k = dim ker(A - lambda I)^k; the transform from
// generalized eigenvector chains.
inline JordanDecomposition jordan_form(const SquareMatrix& a_in) {
    auto [eigs, a] = detail::eigenvalues_split(a_in);
    const Backend& bk = a.backend();
    const std::size_t n = a.dim();
    const bool numeric = bk.kind() == BackendKind::ComplexFloat;
    const double tol = numeric ? bk.eps() * static_cast<double>(n) * std::max(1.0, a.frobenius_approx()) : 0.0;
    // rank decisions must absorb the eigenvalue error, which for defective
    // blocks is only O(sqrt(eps)); the clustering radius sets the scale
    const double rank_scale = numeric ? std::sqrt(bk.eps()) * static_cast<double>(n) : 0.0;

    std::sort(eigs.begin(), eigs.end(),
              [](const detail::Eigenvalue& x, const detail::Eigenvalue& y) { return canonical_less(x.value, y.value); });

    std::vector<JordanBlock> blocks;
    std::vector<std::vector<FieldElement>> columns;  // of P, in block order

    for (const auto& eig : eigs) {
        SquareMatrix m = a;
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = sub(m.at(i, i), eig.value);

        // Weyr sequence until it saturates at the algebraic multiplicity
        std::vector<std::size_t> w = {0};
        std::vector<SquareMatrix> mpow = {SquareMatrix::identity(bk, n)};
        std::size_t smax = 0;
        auto rank_tol = [&](const SquareMatrix& x) {
            return numeric ? rank_scale * std::max(1.0, x.frobenius_approx()) : 0.0;
        };
        while (true) {
            mpow.push_back(mpow.back() * m);
            std::size_t wk = n - rank(mpow.back(), rank_tol(mpow.back()));
            if (wk == w.back()) break;
            w.push_back(wk);
            ++smax;
            if (wk >= eig.multiplicity) break;
        }
        if (w.back() != eig.multiplicity)
            throw Error(numeric ? ErrorCode::NumericallyDefective : ErrorCode::EigenvaluesNotSplit,
                        "Weyr sequence does not saturate the algebraic multiplicity");

        std::vector<std::vector<std::vector<FieldElement>>> kerbasis(smax + 1);
        for (std::size_t k = 1; k <= smax; ++k) kerbasis[k] = nullspace_basis(mpow[k], rank_tol(mpow[k]));

        // chains: (top vector, length)
        std::vector<std::pair<std::vector<FieldElement>, std::size_t>> chains;
        for (std::size_t s = smax; s >= 1; --s) {
            std::size_t blocks_ge_s = w[s] - w[s - 1];
            std::size_t have = 0;
            for (const auto& ch : chains)
                if (ch.second > s) ++have;
            std::size_t need = blocks_ge_s - have;

            std::vector<std::vector<FieldElement>> context = s >= 2 ? kerbasis[s - 1]
                                                                    : std::vector<std::vector<FieldElement>>{};
            for (const auto& ch : chains) {
                if (ch.second <= s) continue;
                // the height-s vector of a longer chain: M^{len-s} top
                std::vector<FieldElement> v = ch.first;
                for (std::size_t k = 0; k < ch.second - s; ++k) v = mat_vec(m, v);
                context.push_back(std::move(v));
            }
            std::size_t base_rank = rank_of_columns(context, rank_scale);
            for (const auto& cand : kerbasis[s]) {
                if (need == 0) break;
                context.push_back(cand);
                std::size_t r = rank_of_columns(context, rank_scale);
                if (r > base_rank) {
                    base_rank = r;
                    chains.emplace_back(cand, s);
                    --need;
                } else {
                    context.pop_back();
                }
            }
            if (need != 0)
                throw Error(numeric ? ErrorCode::NumericallyDefective : ErrorCode::InvalidArgument,
                            "chain construction failed");
            if (s == 1) break;
        }

        // longer chains first matches the canonical size-descending order
        std::stable_sort(chains.begin(), chains.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        for (const auto& [top, len] : chains) {
            blocks.push_back({eig.value, len});
            std::vector<std::vector<FieldElement>> chain_vecs(len);
            chain_vecs[len - 1] = top;
            for (std::size_t k = len - 1; k >= 1; --k) chain_vecs[k - 1] = mat_vec(m, chain_vecs[k]);
            for (auto& v : chain_vecs) columns.push_back(std::move(v));
        }
    }

    SquareMatrix p(bk, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) p.at(i, j) = columns[j][i];

    JordanDecomposition dec{std::move(blocks), p, bk};
    // reconstruction check
    SquareMatrix recon = p * dec.jordan_matrix() * inverse(p, tol);
    if (!numeric) {
        if (recon != a) throw Error(ErrorCode::InvalidArgument, "reconstruction failed");
    } else {
        double err = (recon - a).frobenius_approx();
        if (err > std::sqrt(bk.eps()) * static_cast<double>(n) * std::max(1.0, a.frobenius_approx()))
            throw Error(ErrorCode::NumericallyDefective, "reconstruction residual too large");
    }
    return dec;
}

}  // namespace matfun

#endif
