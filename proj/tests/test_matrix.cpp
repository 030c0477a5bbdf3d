#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <matfun/jordan.hpp>
#include <matfun/matrix.hpp>

using namespace matfun;

namespace {

Polynomial random_poly(const Backend& bk, std::mt19937& rng, std::size_t maxdeg) {
    std::size_t d = 1 + rng() % maxdeg;
    std::vector<FieldElement> c;
    for (std::size_t i = 0; i <= d; ++i) c.push_back(bk.element_from_index(rng() % bk.field_size()));
    return Polynomial(bk, std::move(c));
}

SquareMatrix random_invertible(const Backend& bk, std::size_t n, std::mt19937& rng) {
    while (true) {
        SquareMatrix p(bk, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p.at(i, j) = bk.element_from_index(rng() % bk.field_size());
        if (rank(p) == n) return p;
    }
}

}  // namespace

TEST_CASE("mat_eval_poly examples") {
    Backend Q = Backend::rationals();
    SquareMatrix swap = SquareMatrix::from_ints(Q, {{0, 1}, {1, 0}});
    CHECK(mat_eval_poly(Polynomial::from_ints(Q, {1, 0, 1}), swap) ==
          SquareMatrix::from_ints(Q, {{2, 0}, {0, 2}}));
    CHECK(mat_eval_poly(Polynomial(Q), swap) == SquareMatrix(Q, 2));
    SquareMatrix x(Q, 2);
    x.at(0, 0) = Q.one();
    x.at(0, 1) = Q.from_rational(Rational(1, 2));
    x.at(1, 1) = Q.one();
    CHECK(mat_eval_poly(Polynomial::from_ints(Q, {0, 0, 1}), x) == SquareMatrix::from_ints(Q, {{1, 1}, {0, 1}}));
}

TEST_CASE("jordan_block_eval closed form") {
    Backend Q = Backend::rationals();
    Polynomial sq = Polynomial::from_ints(Q, {0, 0, 1});
    FieldElement lam = Q.from_int(5);
    SquareMatrix b2 = jordan_block_eval(sq, lam, 2);
    CHECK(b2 == SquareMatrix::from_ints(Q, {{25, 10}, {0, 25}}));
    SquareMatrix b3 = jordan_block_eval(sq, lam, 3);
    CHECK(b3 == SquareMatrix::from_ints(Q, {{25, 10, 1}, {0, 25, 10}, {0, 0, 25}}));
    // constant polynomial gives c*I
    SquareMatrix c = jordan_block_eval(Polynomial::from_ints(Q, {7}), lam, 3);
    CHECK(c == Q.from_int(7) * SquareMatrix::identity(Q, 3));
}

TEST_CASE("offset-1 entry of f(J_r(lambda)) is f'(lambda) in every characteristic") {
    std::mt19937 rng(31);
    for (const Backend& k : {Backend::prime_field(2), Backend::prime_field(5), Backend::finite_field(3, 2)}) {
        for (int trial = 0; trial < 20; ++trial) {
            Polynomial f = random_poly(k, rng, 7);
            FieldElement lam = k.element_from_index(rng() % k.field_size());
            SquareMatrix b = jordan_block_eval(f, lam, 3);
            CHECK(b.at(0, 1) == eval(derivative(f), lam));
            CHECK(b.at(1, 2) == eval(derivative(f), lam));
        }
    }
}

TEST_CASE("Toeplitz closed form equals Horner on the block") {
    std::mt19937 rng(37);
    for (const Backend& k : {Backend::prime_field(2), Backend::prime_field(7), Backend::finite_field(2, 2)}) {
        for (int trial = 0; trial < 30; ++trial) {
            Polynomial f = random_poly(k, rng, 8);
            FieldElement lam = k.element_from_index(rng() % k.field_size());
            std::size_t r = 1 + rng() % 6;
            CHECK(jordan_block_eval(f, lam, r) == mat_eval_poly(f, SquareMatrix::jordan_block(lam, r)));
        }
    }
    Backend Q = Backend::rationals();
    std::mt19937 rq(41);
    for (int trial = 0; trial < 30; ++trial) {
        Polynomial f = Polynomial::from_ints(
            Q, {int(rq() % 9) - 4, int(rq() % 9) - 4, int(rq() % 9) - 4, int(rq() % 9) - 4, 1});
        FieldElement lam = Q.from_rational(Rational(int(rq() % 9) - 4, int(rq() % 3) + 1));
        std::size_t r = 1 + rq() % 6;
        CHECK(jordan_block_eval(f, lam, r) == mat_eval_poly(f, SquareMatrix::jordan_block(lam, r)));
    }
}

TEST_CASE("jordan_form examples") {
    Backend Q = Backend::rationals();
    JordanDecomposition d1 = jordan_form(SquareMatrix::from_ints(Q, {{2, 0}, {0, 3}}));
    REQUIRE(d1.blocks.size() == 2);
    CHECK(d1.blocks[0].eigenvalue == Q.from_int(2));
    CHECK(d1.blocks[1].eigenvalue == Q.from_int(3));

    JordanDecomposition d2 = jordan_form(SquareMatrix::from_ints(Q, {{0, 1}, {0, 0}}));
    REQUIRE(d2.blocks.size() == 1);
    CHECK(d2.blocks[0].size == 2);
    CHECK(d2.blocks[0].eigenvalue.is_zero());

    JordanDecomposition d3 = jordan_form(SquareMatrix::from_ints(Q, {{5, 4}, {-4, -3}}));
    REQUIRE(d3.blocks.size() == 1);
    CHECK(d3.blocks[0].size == 2);
    CHECK(d3.blocks[0].eigenvalue == Q.one());
}

TEST_CASE("jordan_form reconstructs A = P J P^-1 exactly") {
    std::mt19937 rng(43);
    Backend F5 = Backend::prime_field(5);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + rng() % 3;
        SquareMatrix a(F5, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) = F5.element_from_index(rng() % 5);
        JordanDecomposition dec = jordan_form(a);
        SquareMatrix al = embed(a, make_embedding(F5, dec.field));
        CHECK(dec.transform * dec.jordan_matrix() * inverse(dec.transform) == al);
    }
}

TEST_CASE("jordan_form recovers a planted block structure under similarity") {
    std::mt19937 rng(47);
    Backend F3 = Backend::prime_field(3);
    for (int trial = 0; trial < 25; ++trial) {
        // plant blocks (0,2),(1,1),(2,1) in random order via a random similarity
        SquareMatrix j(F3, 4);
        j.at(0, 0) = F3.zero();
        j.at(0, 1) = F3.one();
        j.at(1, 1) = F3.zero();
        j.at(2, 2) = F3.one();
        j.at(3, 3) = F3.from_int(2);
        SquareMatrix p = random_invertible(F3, 4, rng);
        JordanDecomposition dec = jordan_form(p * j * inverse(p));
        REQUIRE(dec.blocks.size() == 3);
        CHECK(dec.blocks[0].eigenvalue == F3.zero());
        CHECK(dec.blocks[0].size == 2);
        CHECK(dec.blocks[1].eigenvalue == F3.one());
        CHECK(dec.blocks[2].eigenvalue == F3.from_int(2));
    }
}

TEST_CASE("jordan_form finds eigenvalues in extension fields") {
    Backend F2 = Backend::prime_field(2);
    // companion matrix of x^2 + x + 1: eigenvalues in F_4
    SquareMatrix a = SquareMatrix::from_ints(F2, {{0, 1}, {1, 1}});
    JordanDecomposition dec = jordan_form(a);
    CHECK(dec.field.field_size() == 4);
    REQUIRE(dec.blocks.size() == 2);
    SquareMatrix al = embed(a, make_embedding(F2, dec.field));
    CHECK(dec.transform * dec.jordan_matrix() * inverse(dec.transform) == al);
}

TEST_CASE("rational matrices with irrational eigenvalues are refused") {
    Backend Q = Backend::rationals();
    CHECK_THROWS_AS(jordan_form(SquareMatrix::from_ints(Q, {{0, 2}, {1, 0}})), Error);
}

TEST_CASE("block_count examples") {
    Backend Q = Backend::rationals();
    CHECK(block_count(SquareMatrix::identity(Q, 2), Q.one()) == 2);
    CHECK(block_count(SquareMatrix::from_ints(Q, {{0, 1}, {0, 0}}), Q.zero()) == 1);
    CHECK(block_count(SquareMatrix::from_ints(Q, {{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}), Q.zero()) == 2);
    CHECK(block_count(SquareMatrix::identity(Q, 2), Q.from_int(9)) == 0);
}

TEST_CASE("f(J_r(u)) splits iff f'(u) = 0") {
    std::mt19937 rng(53);
    Backend F5 = Backend::prime_field(5);
    for (int trial = 0; trial < 60; ++trial) {
        Polynomial f = random_poly(F5, rng, 5);
        if (f.is_constant()) continue;
        FieldElement u = F5.element_from_index(rng() % 5);
        std::size_t r = 2 + rng() % 4;
        SquareMatrix img = mat_eval_poly(f, SquareMatrix::jordan_block(u, r));
        bool splits = block_count(img, eval(f, u)) >= 2;
        CHECK(splits == eval(derivative(f), u).is_zero());
    }
}

TEST_CASE("numeric jordan_form reconstructs within tolerance") {
    Backend C = Backend::complex_floats(1e-8);
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> dist(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 2 + rng() % 3;
        SquareMatrix a(C, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) = FieldElement(C, Complex(dist(rng), dist(rng)));
        JordanDecomposition dec = jordan_form(a);
        double tol = 1e-6 * std::max(1.0, a.frobenius_approx());
        SquareMatrix recon = dec.transform * dec.jordan_matrix() * inverse(dec.transform, 1e-12);
        CHECK((recon - a).frobenius_approx() <= tol);
    }
}

TEST_CASE("numeric jordan_form detects a defective block") {
    Backend C = Backend::complex_floats(1e-8);
    SquareMatrix n2(C, 2);
    n2.at(0, 1) = C.one();
    JordanDecomposition dec = jordan_form(n2);
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].size == 2);
}
