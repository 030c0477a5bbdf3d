#ifndef MATFUN_SOLVER_HPP
#define MATFUN_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "critical.hpp"
#include "error.hpp"
#include "jordan.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace matfun {

enum class SolveKind { Preimage, NoPreimage, NotInDomain, Undetermined };

// replayable obstruction: a single Jordan block target J_n(t) whose whole
// fiber sits inside Z(f')
struct CriticalBlockCertificate {
    FieldElement t;
    std::size_t blocksize;
    std::vector<WitnessRoot> fiber;
};

struct SolveOutcome {
    SolveKind kind;
    std::optional<SquareMatrix> preimage;
    std::vector<FieldElement> block_witnesses;  // chosen fiber root u per block
    std::optional<CriticalBlockCertificate> certificate;
    std::vector<FieldElement> offending;  // NotInDomain: eigenvalues outside the image
    std::string reason;

    static SolveOutcome found(SquareMatrix x, std::vector<FieldElement> us) {
        return {SolveKind::Preimage, std::move(x), std::move(us), std::nullopt, {}, {}};
    }
    static SolveOutcome obstruction(CriticalBlockCertificate c) {
        return {SolveKind::NoPreimage, std::nullopt, {}, std::move(c), {}, {}};
    }
    static SolveOutcome not_in_domain(std::vector<FieldElement> bad) {
        return {SolveKind::NotInDomain, std::nullopt, {}, std::nullopt, std::move(bad), {}};
    }
    static SolveOutcome undetermined(std::string why) {
        return {SolveKind::Undetermined, std::nullopt, {}, std::nullopt, {}, std::move(why)};
    }
};

struct VerifyResult {
    bool pass;
    double residual;  // Frobenius norm of f(X) - A (0 for exact backends on pass)
};

inline VerifyResult verify(const Polynomial& f, const SquareMatrix& x, const SquareMatrix& a_in) {
    const Backend& bk = x.backend();
    Polynomial fl = detail::lift_to(f, bk);
    SquareMatrix a = a_in.backend() == bk ? a_in : embed(a_in, make_embedding(a_in.backend(), bk));
    SquareMatrix fx = mat_eval_poly(fl, x);
    if (bk.kind() != BackendKind::ComplexFloat) {
        bool eq = fx == a;
        return {eq, eq ? 0.0 : (fx - a).frobenius_approx()};
    }
    double res = (fx - a).frobenius_approx();
    double bound = bk.eps() * static_cast<double>(a.dim()) * std::max(1.0, a.frobenius_approx());
    return {res <= bound, res};
}

namespace detail {

struct FiberPoint {
    FieldElement u;
    Backend field;
    FieldElement fprime;  // f'(u) in `field`
};

inline std::vector<FiberPoint> fiber_points(const Polynomial& f, const FieldElement& t) {
    Polynomial fl = lift_to(f, t.backend());
    Polynomial ft = fl - Polynomial::constant(t);
    Polynomial fp = derivative(fl);
    std::vector<FiberPoint> pts;
    if (ft.is_zero() || ft.is_constant()) return pts;
    RootMultiset rs = roots(ft, static_cast<unsigned>(ft.degree()));
    for (const auto& e : rs.entries) {
        FieldElement fpv = fp.is_zero() ? e.field.zero() : eval(lift_to(fp, e.field), e.root);
        pts.push_back({e.root, e.field, fpv});
    }
    return pts;
}

// deterministic root choice: least canonical encoding (exact backends),
// largest |f'(u)| for conditioning (numeric)
inline const FiberPoint* choose_root(const std::vector<FiberPoint>& pts, bool require_noncritical, bool numeric) {
    const FiberPoint* best = nullptr;
    for (const auto& p : pts) {
        if (require_noncritical && p.fprime.is_zero()) continue;
        if (!best) {
            best = &p;
            continue;
        }
        if (numeric) {
            if (p.fprime.abs_approx() > best->fprime.abs_approx()) best = &p;
        } else {
            // prefer smaller fields, then least canonical encoding
            if (p.field.ext_degree() < best->field.ext_degree())
                best = &p;
            else if (p.field.ext_degree() == best->field.ext_degree() && p.field == best->field &&
                     canonical_less(p.u, best->u))
                best = &p;
        }
    }
    return best;
}

}  // namespace detail

// Preimage of the single Jordan block J_r(t); complete decision for
// single-block targets.
inline SolveOutcome solve_block(const Polynomial& f, const FieldElement& t, std::size_t r) {
    if (f.is_zero() || f.is_constant()) throw Error(ErrorCode::DegreeZero, "solve needs deg f >= 1");
    const Backend& tb = t.backend();
    const bool numeric = tb.kind() == BackendKind::ComplexFloat;
    auto pts = detail::fiber_points(f, t);
    if (pts.empty()) {
        if (tb.kind() == BackendKind::Rational)
            return SolveOutcome::undetermined("fiber has no rational points; rerun on the numeric backend");
        throw Error(ErrorCode::EigenvaluesNotSplit, "no fiber point found");
    }
    if (r == 1) {
        const auto* p = detail::choose_root(pts, false, numeric);
        SquareMatrix x(p->field, 1);
        x.at(0, 0) = p->u;
        return SolveOutcome::found(std::move(x), {p->u});
    }
    const auto* p = detail::choose_root(pts, true, numeric);
    if (!p) {
        // every fiber point is a zero of f': the single-block obstruction
        std::vector<WitnessRoot> fiber;
        for (const auto& q : pts) fiber.push_back({q.u, 1, q.fprime});
        return SolveOutcome::obstruction({t, r, std::move(fiber)});
    }
    if (numeric) {
        CriticalityResult cr = is_critical_value(f, t);
        if (cr.verdict == Criticality::Critical) return SolveOutcome::obstruction({t, r, std::move(cr.witness)});
        if (cr.verdict == Criticality::NumericallyAmbiguous)
            return SolveOutcome::undetermined("criticality of the target eigenvalue is numerically ambiguous");
    }
    // f(J_r(u)) is similar to J_r(t); conjugating the similarity back gives an
    // exact preimage of the block
    Polynomial fl = detail::lift_to(f, p->field);
    SquareMatrix ju = SquareMatrix::jordan_block(p->u, r);
    SquareMatrix fju = jordan_block_eval(fl, p->u, r);
    JordanDecomposition dec = jordan_form(fju);
    if (dec.blocks.size() != 1 || dec.blocks[0].size != r)
        throw Error(ErrorCode::InvalidArgument, "block image did not reduce to a single Jordan block");
    const Backend& xb = dec.field;
    Embedding lift = make_embedding(p->field, xb);
    SquareMatrix q = dec.transform;
    double tol = numeric ? xb.eps() * static_cast<double>(r) : 0.0;
    SquareMatrix x = inverse(q, tol) * embed(ju, lift) * q;
    return SolveOutcome::found(std::move(x), {p->u});
}

// Full decision procedure for f(X) = A over one backend: blockwise assembly
// for non-critical spectra, obstruction certificates for critical single
// blocks, an honest Undetermined verdict elsewhere.
inline SolveOutcome solve(const Polynomial& f, const SquareMatrix& a) {
    if (f.is_zero() || f.is_constant()) throw Error(ErrorCode::DegreeZero, "solve needs deg f >= 1");
    JordanDecomposition dec = jordan_form(a);
    const Backend& e0 = dec.field;
    Polynomial f0 = detail::lift_to(f, e0);
    const bool numeric = e0.kind() == BackendKind::ComplexFloat;

    // classify blocks of size >= 2 by criticality of their eigenvalue; numeric
    // eigenvalues are only determined to the Jordan clustering radius, so the
    // two-sided band runs at that scale, not at eps
    auto classify = [&](const FieldElement& t) -> Criticality {
        if (!numeric) return is_critical_value(f0, t).verdict;
        double radius = static_cast<double>(a.dim()) * std::sqrt(e0.eps()) * std::max(1.0, a.frobenius_approx());
        CriticalSet cs = critical_values(f0);
        double d = std::numeric_limits<double>::infinity();
        for (const auto& v : cs.values) d = std::min(d, std::abs(v.t.complex() - t.complex()));
        for (const auto& v : cs.ambiguous) d = std::min(d, std::abs(v.complex() - t.complex()));
        if (cs.kind == CriticalKind::AllValues || d <= radius) return Criticality::Critical;
        if (d >= 10 * radius) return Criticality::NotCritical;
        return Criticality::NumericallyAmbiguous;
    };
    bool has_critical = false, has_ambiguous = false;
    for (const auto& b : dec.blocks) {
        if (b.size < 2) continue;
        Criticality verdict = classify(b.eigenvalue);
        if (verdict == Criticality::Critical) {
            if (dec.blocks.size() == 1) {
                CriticalityResult cr = is_critical_value(f0, b.eigenvalue);
                return SolveOutcome::obstruction({b.eigenvalue, b.size, std::move(cr.witness)});
            }
            has_critical = true;
        } else if (verdict == Criticality::NumericallyAmbiguous) {
            has_ambiguous = true;
        }
    }
    if (has_critical)
        return SolveOutcome::undetermined(
            "critical eigenvalue on a multi-block matrix: the criterion does not decide membership here");
    if (has_ambiguous)
        return SolveOutcome::undetermined("criticality of an eigenvalue is numerically ambiguous");

    // per-block preimages
    std::vector<SolveOutcome> parts;
    for (const auto& b : dec.blocks) {
        SolveOutcome part = solve_block(f0, b.eigenvalue, b.size);
        if (part.kind == SolveKind::Undetermined) return part;
        if (part.kind != SolveKind::Preimage)
            throw Error(ErrorCode::InvalidArgument, "unexpected per-block failure on a non-critical eigenvalue");
        parts.push_back(std::move(part));
    }

    // common field for the assembly
    Backend big = e0;
    if (e0.is_finite()) {
        unsigned l = e0.ext_degree();
        for (const auto& part : parts) l = std::lcm(l, part.preimage->backend().ext_degree());
        big = Backend::finite_field(e0.p(), l);
    }
    Embedding lift_p = make_embedding(e0, big);
    SquareMatrix p = embed(dec.transform, lift_p);
    SquareMatrix diag(big, a.dim());
    std::vector<FieldElement> witnesses;
    std::size_t off = 0;
    for (const auto& part : parts) {
        const SquareMatrix& xi_raw = *part.preimage;
        Embedding lift_x = make_embedding(xi_raw.backend(), big);
        SquareMatrix xi = embed(xi_raw, lift_x);
        for (std::size_t i = 0; i < xi.dim(); ++i)
            for (std::size_t j = 0; j < xi.dim(); ++j) diag.at(off + i, off + j) = xi.at(i, j);
        witnesses.push_back(lift_x(part.block_witnesses[0]));
        off += xi.dim();
    }
    double tol = numeric ? big.eps() * static_cast<double>(a.dim()) * std::max(1.0, a.frobenius_approx()) : 0.0;
    SquareMatrix x = p * diag * inverse(p, tol);
    SolveOutcome out = SolveOutcome::found(std::move(x), std::move(witnesses));
    if (!numeric) {
        VerifyResult v = verify(f, *out.preimage, a);
        if (!v.pass) throw Error(ErrorCode::InvalidArgument, "assembled preimage failed exact verification");
    }
    return out;
}

// machine-checkable replay of a critical-block certificate
inline bool replay_certificate(const Polynomial& f, const CriticalBlockCertificate& cert) {
    if (cert.blocksize < 2) return false;
    Polynomial fl = detail::lift_to(f, cert.t.backend());
    CriticalityResult cr = is_critical_value(fl, cert.t);
    if (cr.verdict != Criticality::Critical) return false;
    for (const auto& w : cert.fiber) {
        Polynomial fw = detail::lift_to(f, w.root.backend());
        FieldElement t_in = make_embedding(cert.t.backend(), w.root.backend())(cert.t);
        if (eval(fw, w.root) != t_in) return false;
        if (!eval(derivative(fw), w.root).is_zero()) return false;
    }
    return true;
}

}  // namespace matfun

#endif
