#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <matfun/scalar.hpp>

using namespace matfun;

TEST_CASE("prime field arithmetic") {
    Backend F5 = Backend::prime_field(5);
    CHECK(inv(F5.from_int(2)) == F5.from_int(3));
    CHECK(mul(F5.from_int(2), F5.from_int(3)) == F5.from_int(1));
    CHECK(add(F5.from_int(4), F5.from_int(3)) == F5.from_int(2));
    CHECK(neg(F5.from_int(2)) == F5.from_int(3));
    CHECK(pow(F5.from_int(2), 4) == F5.from_int(1));
}

TEST_CASE("rational arithmetic") {
    Backend Q = Backend::rationals();
    FieldElement half = Q.from_rational(Rational(1, 2));
    FieldElement third = Q.from_rational(Rational(1, 3));
    CHECK(add(half, third) == Q.from_rational(Rational(5, 6)));
    CHECK(mul(half, Q.from_int(2)) == Q.one());
    CHECK(inv(Q.from_rational(Rational(3, 7))) == Q.from_rational(Rational(7, 3)));
}

TEST_CASE("F_4 multiplication reduces mod x^2+x+1") {
    auto [F4, phi] = extend(Backend::prime_field(2), 2);
    CHECK(F4.modulus() == detail::FpPoly({1, 1, 1}));
    // x * x = x + 1
    FieldElement x = F4.element_from_index(2);  // coeffs (0,1)
    FieldElement xp1 = F4.element_from_index(3);
    CHECK(mul(x, x) == xp1);
}

TEST_CASE("extend degree 1 is the identity") {
    auto [F3, phi] = extend(Backend::prime_field(3), 1);
    CHECK(F3 == Backend::prime_field(3));
    for (int i = 0; i < 3; ++i) CHECK(phi(F3.from_int(i)) == F3.from_int(i));
}

TEST_CASE("F_4 into F_16 embedding preserves arithmetic on all pairs") {
    auto [F4, into4] = extend(Backend::prime_field(2), 2);
    auto [F16, into16] = extend(F4, 2);
    CHECK(F16.field_size() == 16);
    for (std::uint64_t i = 0; i < 4; ++i)
        for (std::uint64_t j = 0; j < 4; ++j) {
            FieldElement a = F4.element_from_index(i), b = F4.element_from_index(j);
            CHECK(into16(add(a, b)) == add(into16(a), into16(b)));
            CHECK(into16(mul(a, b)) == mul(into16(a), into16(b)));
        }
}

TEST_CASE("double embedding equals direct embedding pointwise") {
    Backend F3 = Backend::prime_field(3);
    auto [F9, e1] = extend(F3, 2);
    auto [F81, e2] = extend(F9, 2);
    Embedding direct = make_embedding(F3, F81);
    for (std::uint64_t i = 0; i < 3; ++i) {
        FieldElement a = F3.element_from_index(i);
        CHECK(e2(e1(a)) == direct(a));
    }
    // and from the middle field
    Embedding mid = make_embedding(F9, F81);
    for (std::uint64_t i = 0; i < 9; ++i) {
        FieldElement a = F9.element_from_index(i);
        CHECK(e2(a) == mid(a));
    }
}

TEST_CASE("field axioms hold on random triples") {
    std::mt19937 rng(7);
    std::vector<Backend> fields = {Backend::prime_field(7), Backend::finite_field(2, 3), Backend::rationals()};
    for (const Backend& k : fields) {
        for (int trial = 0; trial < 50; ++trial) {
            auto rnd = [&]() {
                if (k.is_finite()) return k.element_from_index(rng() % k.field_size());
                return k.from_rational(Rational(int(rng() % 19) - 9, int(rng() % 8) + 1));
            };
            FieldElement a = rnd(), b = rnd(), c = rnd();
            CHECK(add(add(a, b), c) == add(a, add(b, c)));
            CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
            CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
            if (!a.is_zero()) CHECK(mul(a, inv(a)) == k.one());
        }
    }
}

TEST_CASE("complex equality is reflexive and symmetric with relative tolerance") {
    Backend C = Backend::complex_floats(1e-8);
    FieldElement a(C, Complex(1.0, 0.0));
    FieldElement b(C, Complex(1.0 + 5e-9, 0.0));
    FieldElement c(C, Complex(1.0 + 5e-7, 0.0));
    CHECK(a == a);
    CHECK(a == b);
    CHECK(b == a);
    CHECK_FALSE(a == c);
    // large magnitudes scale the tolerance
    FieldElement big1(C, Complex(1e12, 0));
    FieldElement big2(C, Complex(1e12 + 1, 0));
    CHECK(big1 == big2);
}

TEST_CASE("error conditions") {
    Backend F5 = Backend::prime_field(5);
    Backend F7 = Backend::prime_field(7);
    CHECK_THROWS_AS(inv(F5.zero()), Error);
    CHECK_THROWS_AS(add(F5.one(), F7.one()), Error);
    CHECK_THROWS_AS(Backend::prime_field(4), Error);
    CHECK_THROWS_AS(Backend::complex_floats(1e-3), Error);  // eps must be <= 1e-4
}

TEST_CASE("canonical index round-trips") {
    for (const Backend& k : {Backend::prime_field(5), Backend::finite_field(3, 2)}) {
        for (std::uint64_t i = 0; i < k.field_size(); ++i) CHECK(index_of(k.element_from_index(i)) == i);
    }
}

TEST_CASE("canonical order prefers small denominators then magnitude") {
    Backend Q = Backend::rationals();
    CHECK(canonical_less(Q.from_int(1), Q.from_int(-1)));
    CHECK(canonical_less(Q.from_int(0), Q.from_int(1)));
    CHECK(canonical_less(Q.from_int(2), Q.from_rational(Rational(1, 2))));
}
