// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <matfun/matfun.hpp>

using namespace matfun;

namespace {

struct Gate {
    int failures = 0;

    void criterion(int number, const std::string& title, const std::function<bool()>& body) {
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string note;
        try {
            ok = body();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << (ok ? "PASS" : "FAIL") << " " << number << ": " << title << " [" << ms.count() << " ms]"
                  << note << "\n";
        if (!ok) ++failures;
    }
};

bool expect(bool cond, const char* what) {
    if (!cond) std::cout << "  failed: " << what << "\n";
    return cond;
}

SquareMatrix random_invertible(const Backend& bk, std::size_t n, std::mt19937& rng) {
    while (true) {
        SquareMatrix p(bk, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p.at(i, j) = bk.element_from_index(rng() % bk.field_size());
        if (rank(p) == n) return p;
    }
}

SquareMatrix random_complex(const Backend& c, std::size_t n, std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-1, 1);
    SquareMatrix a(c, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = FieldElement(c, scale * Complex(dist(rng), dist(rng)));
    return a;
}

// all monic polynomials of degree 1..maxdeg over F_p
std::vector<Polynomial> all_monic(const Backend& k, std::size_t maxdeg) {
    std::vector<Polynomial> out;
    std::uint64_t p = k.field_size();
    for (std::size_t d = 1; d <= maxdeg; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<FieldElement> c;
            std::uint64_t t = code;
            for (std::size_t i = 0; i < d; ++i) {
                c.push_back(k.element_from_index(t % p));
                t /= p;
            }
            c.push_back(k.one());
            out.emplace_back(k, std::move(c));
        }
    }
    return out;
}

bool criterion1() {
    Backend Q = Backend::rationals();
    Polynomial sq = Polynomial::from_ints(Q, {0, 0, 1});
    CriticalSet cs = critical_values(sq);
    if (!expect(cs.kind == CriticalKind::Finite && cs.values.size() == 1 && cs.values[0].t == Q.zero(),
                "critical set of x^2 over Q is {0}"))
        return false;
    if (!expect(!is_surjective(cs), "x^2 is not surjective")) return false;
    SolveOutcome o = solve(sq, SquareMatrix::from_ints(Q, {{0, 1}, {0, 0}}));
    if (!expect(o.kind == SolveKind::NoPreimage, "J_2(0) has no square root")) return false;
    return expect(replay_certificate(sq, *o.certificate), "certificate replays");
}

bool criterion2() {
    Backend F2 = Backend::prime_field(2);
    Polynomial f = Polynomial::from_ints(F2, {0, 1, 1});  // x^2 + x
    CriticalSet cs = critical_values(f);
    if (!expect(cs.kind == CriticalKind::Empty && is_surjective(cs), "x^2+x is surjective over F_2")) return false;
    for (std::uint64_t code = 0; code < 16; ++code) {
        SquareMatrix a(F2, 2);
        for (std::size_t e = 0; e < 4; ++e) a.at(e / 2, e % 2) = F2.element_from_index((code >> e) & 1);
        SolveOutcome o = solve(f, a);
        if (!expect(o.kind == SolveKind::Preimage, "every 2x2 matrix over F_2 has a preimage")) return false;
        if (!expect(verify(f, *o.preimage, a).pass, "preimage verifies")) return false;
        if (!expect(o.preimage->backend().field_size() <= 16, "entries stay within F_16")) return false;
    }
    return true;
}

bool criterion3() {
    struct Family {
        Polynomial f;
        unsigned oracle_bound;
    };
    std::vector<Family> fams = {
        {Polynomial::from_ints(Backend::prime_field(2), {0, 1, 0, 0, 1}), 6},   // x^4+x, p | d
        {Polynomial::from_ints(Backend::prime_field(3), {0, 0, 0, 1, 1}), 6},   // x^4+x^3, p | d-1
        {Polynomial::from_ints(Backend::prime_field(5), {0, -3, 0, 1}), 2}};    // x^3-3x, gcd case
    for (const auto& fam : fams) {
        CriticalSet cs = critical_values(fam.f);
        if (!expect(is_surjective(cs), "family member is surjective")) return false;
        OracleCriticalReport rep = oracle_critical_values(fam.f, fam.oracle_bound);
        if (!expect(!rep.all_values && rep.values.empty(), "oracle agrees the critical set is empty")) return false;
    }
    return true;
}

bool criterion4() {
    std::mt19937 rng(101);
    std::vector<Backend> fields = {Backend::prime_field(2), Backend::prime_field(5), Backend::finite_field(3, 2)};
    for (int trial = 0; trial < 400; ++trial) {
        const Backend& k = fields[trial % fields.size()];
        std::size_t d = 1 + rng() % 8;
        std::vector<FieldElement> c;
        for (std::size_t i = 0; i <= d; ++i) c.push_back(k.element_from_index(rng() % k.field_size()));
        Polynomial f(k, std::move(c));
        FieldElement lam = k.element_from_index(rng() % k.field_size());
        std::size_t r = 1 + rng() % 6;
        if (!expect(jordan_block_eval(f, lam, r) == mat_eval_poly(f, SquareMatrix::jordan_block(lam, r)),
                    "Toeplitz closed form equals Horner"))
            return false;
    }
    Backend Q = Backend::rationals();
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 1 + rng() % 8;
        std::vector<FieldElement> c;
        for (std::size_t i = 0; i <= d; ++i)
            c.push_back(Q.from_rational(Rational(int(rng() % 9) - 4, int(rng() % 3) + 1)));
        Polynomial f(Q, std::move(c));
        if (f.is_zero()) continue;
        FieldElement lam = Q.from_rational(Rational(int(rng() % 9) - 4, int(rng() % 3) + 1));
        std::size_t r = 1 + rng() % 6;
        if (!expect(jordan_block_eval(f, lam, r) == mat_eval_poly(f, SquareMatrix::jordan_block(lam, r)),
                    "Toeplitz closed form equals Horner over Q"))
            return false;
    }
    return true;
}

bool criterion5() {
    std::mt19937 rng(103);
    std::vector<Backend> fields = {Backend::prime_field(3), Backend::prime_field(7), Backend::finite_field(2, 2)};
    int done = 0;
    while (done < 200) {
        const Backend& k = fields[done % fields.size()];
        std::size_t d = 1 + rng() % 5;
        std::vector<FieldElement> c;
        for (std::size_t i = 0; i <= d; ++i) c.push_back(k.element_from_index(rng() % k.field_size()));
        Polynomial f(k, std::move(c));
        if (f.is_zero() || f.is_constant()) continue;
        FieldElement u = k.element_from_index(rng() % k.field_size());
        std::size_t r = 2 + rng() % 4;
        SquareMatrix img = mat_eval_poly(f, SquareMatrix::jordan_block(u, r));
        bool splits = block_count(img, eval(f, u)) >= 2;
        if (!expect(splits == eval(derivative(f), u).is_zero(), "block-splitting equivalence")) return false;
        ++done;
    }
    return true;
}

bool criterion6() {
    std::mt19937 rng(107);
    Backend F5 = Backend::prime_field(5);
    int done = 0;
    while (done < 100) {
        std::size_t d = 2 + rng() % 3;
        std::vector<FieldElement> cf;
        for (std::size_t i = 0; i < d; ++i) cf.push_back(F5.element_from_index(rng() % 5));
        cf.push_back(F5.one());
        Polynomial f(F5, cf);
        // assemble a Jordan structure whose eigenvalues t = f(u), f'(u) != 0
        // are non-critical by construction
        std::size_t n = 2 + rng() % 3;
        SquareMatrix j(F5, n);
        std::size_t off = 0;
        bool ok = true;
        while (off < n) {
            FieldElement u = F5.element_from_index(rng() % 5);
            if (eval(derivative(f), u).is_zero()) {
                ok = false;
                break;
            }
            std::size_t sz = 1 + rng() % (n - off);
            FieldElement t = eval(f, u);
            for (std::size_t i = 0; i < sz; ++i) {
                j.at(off + i, off + i) = t;
                if (i + 1 < sz) j.at(off + i, off + i + 1) = F5.one();
            }
            off += sz;
        }
        if (!ok) continue;
        SquareMatrix p = random_invertible(F5, n, rng);
        SquareMatrix a = p * j * inverse(p);
        SolveOutcome o = solve(f, a);
        if (!expect(o.kind == SolveKind::Preimage, "solve finds a preimage on non-critical spectra")) return false;
        if (!expect(verify(f, *o.preimage, a).pass, "preimage verifies exactly")) return false;
        ++done;
    }
    // numeric leg: x^3 - 3x on random 3x3 complex matrices
    Backend C = Backend::complex_floats(1e-10);
    Polynomial f = Polynomial::from_ints(C, {0, -3, 0, 1});
    for (int trial = 0; trial < 20; ++trial) {
        SquareMatrix a = random_complex(C, 3, rng);
        SolveOutcome o = solve(f, a);
        if (!expect(o.kind == SolveKind::Preimage, "numeric solve finds a preimage")) return false;
        if (!expect(verify(f, *o.preimage, a).residual <= 1e-6, "numeric residual within 1e-6")) return false;
    }
    return true;
}

bool criterion7() {
    for (std::uint64_t p : {2ull, 3ull}) {
        Backend k = Backend::prime_field(p);
        for (const Polynomial& f : all_monic(k, 4)) {
            Polynomial fp = derivative(f);
            CriticalSet cs = critical_values(f);
            OracleCriticalReport rep = oracle_critical_values(f, 6);
            if (fp.is_zero()) {
                if (!expect(cs.kind == CriticalKind::AllValues && rep.all_values, "f'=0 cases agree")) return false;
                continue;
            }
            if (!expect((cs.kind == CriticalKind::Finite) == !rep.values.empty(), "emptiness agrees")) return false;
            if (cs.kind != CriticalKind::Finite) continue;
            if (!expect(cs.values.size() == rep.values.size(), "critical set sizes agree")) return false;
            for (const auto& v : cs.values) {
                FieldElement lifted = make_embedding(v.field, rep.field)(v.t);
                bool present = false;
                for (const auto& w : rep.values)
                    if (w == lifted) present = true;
                if (!expect(present, "criterion value appears in the oracle set")) return false;
                // critical single block J_2(t): solver refuses, oracle exhausts
                if (f.degree() < 2) continue;
                SolveOutcome o = solve_block(detail::lift_to(f, v.field), v.t, 2);
                if (!expect(o.kind == SolveKind::NoPreimage, "solve_block refuses the critical block")) return false;
                OracleReport search = oracle_image_search(detail::lift_to(f, v.field),
                                                          SquareMatrix::jordan_block(v.t, 2), 2);
                if (!expect(!search.found, "oracle exhausts without a preimage")) return false;
            }
        }
    }
    return true;
}

bool criterion8() {
    Backend F3 = Backend::prime_field(3);
    Polynomial sq = Polynomial::from_ints(F3, {0, 0, 1});
    SquareMatrix a(F3, 4);
    a.at(0, 1) = F3.one();
    a.at(2, 3) = F3.one();  // J_2(0) + J_2(0)
    SolveOutcome o = solve(sq, a);
    if (!expect(o.kind == SolveKind::Undetermined, "criterion does not decide the gray zone")) return false;
    OracleReport rep = oracle_image_search(sq, a, 1);
    if (!expect(rep.found, "oracle finds a square root")) return false;
    return expect(mat_eval_poly(sq, *rep.witness) == a, "oracle witness verifies");
}

bool criterion9() {
    Backend C = Backend::complex_floats(1e-10);
    EntireFunction expf = catalog("exp");
    std::mt19937 rng(109);
    int done = 0;
    while (done < 20) {
        std::size_t n = 2 + rng() % 3;
        SquareMatrix a = random_complex(C, n, rng);
        if (!in_domain(expf, a).in_domain) continue;
        SolveOutcome o = solve_entire(expf, a);
        if (!expect(o.kind == SolveKind::Preimage, "exp-solve succeeds on invertible targets")) return false;
        double res = (eval_entire(expf, *o.preimage) - a).frobenius_approx();
        if (!expect(res <= 1e-6 * std::max(1.0, a.frobenius_approx()), "exp round-trip residual within 1e-6"))
            return false;
        ++done;
    }
    SquareMatrix sing(C, 2);
    sing.at(1, 1) = C.one();
    if (!expect(solve_entire(expf, sing).kind == SolveKind::NotInDomain, "exp of a singular target is NotInDomain"))
        return false;
    for (int t : {1, -1}) {
        SquareMatrix jb(C, 2);
        jb.at(0, 0) = C.from_int(t);
        jb.at(0, 1) = C.one();
        jb.at(1, 1) = C.from_int(t);
        if (!expect(solve_entire(catalog("sin"), jb).kind == SolveKind::NoPreimage,
                    "sin-solve refuses J_2(+-1)"))
            return false;
    }
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + rng() % 3;
        SquareMatrix a = random_complex(C, n, rng, 0.9);
        SquareMatrix s = eval_entire(catalog("sin"), a);
        SquareMatrix c = eval_entire(catalog("cos"), a);
        if (!expect((s * s + c * c - SquareMatrix::identity(C, n)).frobenius_approx() <= 1e-8,
                    "sin^2 + cos^2 = I within 1e-8"))
            return false;
    }
    return true;
}

bool criterion10() {
    Backend Q = Backend::rationals();
    Polynomial sq = Polynomial::from_ints(Q, {0, 0, 1});
    SquareMatrix a = SquareMatrix::from_ints(Q, {{1, 1}, {0, 1}});
    SolveOutcome o = solve(sq, a);
    if (!expect(o.kind == SolveKind::Preimage, "worked example solves")) return false;
    SquareMatrix expected(Q, 2, {Q.one(), Q.from_rational(Rational(1, 2)), Q.zero(), Q.one()});
    if (!expect(*o.preimage == expected, "preimage is exactly [[1,1/2],[0,1]]")) return false;
    if (!expect(o.block_witnesses.size() == 1 && o.block_witnesses[0] == Q.one(), "canonical root choice u=1"))
        return false;
    return expect(mat_eval_poly(sq, *o.preimage) == a, "verified by exact squaring");
}

}  // namespace

int main() {
    Gate gate;
    gate.criterion(1, "quadratic obstruction over Q", criterion1);
    gate.criterion(2, "char-2 quadratic surjectivity on all of M_2(F_2)", criterion2);
    gate.criterion(3, "char-p surjective families with oracle agreement", criterion3);
    gate.criterion(4, "Toeplitz closed form vs Horner, 500 random triples", criterion4);
    gate.criterion(5, "block-splitting equivalence, 200 random triples", criterion5);
    gate.criterion(6, "round-trip solve on non-critical spectra, exact and numeric", criterion6);
    gate.criterion(7, "oracle concordance for all monic f, deg <= 4, over F_2 and F_3", criterion7);
    gate.criterion(8, "gray zone: solver Undetermined, oracle Found", criterion8);
    gate.criterion(9, "entire catalog: exp round-trip, domain, sin obstructions, Pythagoras", criterion9);
    gate.criterion(10, "verbatim worked example [[1,1/2],[0,1]]", criterion10);
    if (gate.failures) {
        std::cout << gate.failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
