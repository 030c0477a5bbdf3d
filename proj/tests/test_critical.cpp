#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <matfun/critical.hpp>

using namespace matfun;

TEST_CASE("is_critical_value examples") {
    Backend Q = Backend::rationals();
    Polynomial sq = Polynomial::from_ints(Q, {0, 0, 1});
    CHECK(is_critical_value(sq, Q.zero()).verdict == Criticality::Critical);
    CHECK(is_critical_value(sq, Q.one()).verdict == Criticality::NotCritical);

    Polynomial dep = Polynomial::from_ints(Q, {0, -3, 0, 1});  // x^3 - 3x
    CHECK(is_critical_value(dep, Q.from_int(2)).verdict == Criticality::NotCritical);

    // x^5 over F_5: f' = 0, every value is critical
    Backend F5 = Backend::prime_field(5);
    Polynomial frob = Polynomial::from_ints(F5, {0, 0, 0, 0, 0, 1});
    for (int t = 0; t < 5; ++t) CHECK(is_critical_value(frob, F5.from_int(t)).verdict == Criticality::Critical);
}

TEST_CASE("critical witness roots satisfy f(u)=t and f'(u)=0") {
    Backend Q = Backend::rationals();
    Polynomial f = Polynomial::from_ints(Q, {0, 0, 1});
    CriticalSet cs = critical_values(f);
    REQUIRE(cs.kind == CriticalKind::Finite);
    for (const auto& v : cs.values) {
        REQUIRE(!v.witness.empty());
        for (const auto& w : v.witness) {
            Polynomial fw = detail::lift_to(f, w.root.backend());
            FieldElement t_in = make_embedding(v.t.backend(), w.root.backend())(v.t);
            CHECK(eval(fw, w.root) == t_in);
            CHECK(eval(derivative(fw), w.root).is_zero());
        }
    }
}

TEST_CASE("quadratic critical value is c - b^2/4a in char 0") {
    Backend Q = Backend::rationals();
    // 2x^2 + 3x + 1: critical value 1 - 9/8 = -1/8
    CriticalSet cs = critical_values(Polynomial::from_ints(Q, {1, 3, 2}));
    REQUIRE(cs.kind == CriticalKind::Finite);
    REQUIRE(cs.values.size() == 1);
    CHECK(cs.values[0].t == Q.from_rational(Rational(-1, 8)));
}

TEST_CASE("x^2+x over F_2 has no critical values") {
    Backend F2 = Backend::prime_field(2);
    CriticalSet cs = critical_values(Polynomial::from_ints(F2, {0, 1, 1}));
    CHECK(cs.kind == CriticalKind::Empty);
    CHECK(is_surjective(cs));
}

TEST_CASE("x^3 - 3x over Q has no critical values") {
    Backend Q = Backend::rationals();
    CriticalSet cs = critical_values(Polynomial::from_ints(Q, {0, -3, 0, 1}));
    CHECK(cs.kind == CriticalKind::Empty);
}

TEST_CASE("is_surjective verdicts") {
    Backend Q = Backend::rationals();
    Backend F2 = Backend::prime_field(2);
    CHECK(is_surjective(Polynomial::from_ints(Q, {7, 2})));                 // degree 1
    CHECK(is_surjective(Polynomial::from_ints(F2, {0, 1, 0, 0, 1})));      // x^4 + x
    CHECK_FALSE(is_surjective(Polynomial::from_ints(Q, {0, 0, 1})));       // x^2
}

TEST_CASE("z^d - dz over Q is surjective for d in {3,5}") {
    Backend Q = Backend::rationals();
    CHECK(is_surjective(Polynomial::from_ints(Q, {0, -3, 0, 1})));
    CHECK(is_surjective(Polynomial::from_ints(Q, {0, -5, 0, 0, 0, 1})));
}

TEST_CASE("char-p families from the surjectivity examples") {
    CHECK(is_surjective(Polynomial::from_ints(Backend::prime_field(2), {0, 1, 0, 0, 1})));  // x^4+x, p | d
    CHECK(is_surjective(Polynomial::from_ints(Backend::prime_field(3), {0, 0, 0, 1, 1})));  // x^4+x^3, p | d-1
    CHECK(is_surjective(Polynomial::from_ints(Backend::prime_field(5), {0, -3, 0, 1})));    // x^3-3x, gcd case
}

TEST_CASE("scaling invariance of the critical set") {
    std::mt19937 rng(29);
    Backend F7 = Backend::prime_field(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t d = 2 + rng() % 3;
        std::vector<FieldElement> cf;
        for (std::size_t i = 0; i < d; ++i) cf.push_back(F7.element_from_index(rng() % 7));
        cf.push_back(F7.element_from_index(1 + rng() % 6));
        Polynomial f(F7, cf);
        FieldElement c = F7.element_from_index(1 + rng() % 6);
        CriticalSet a = critical_values(f);
        CriticalSet b = critical_values(Polynomial::constant(c) * f);
        REQUIRE(a.kind == b.kind);
        if (a.kind == CriticalKind::Finite) {
            REQUIRE(a.values.size() == b.values.size());
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                Embedding lift = make_embedding(F7, a.values[i].field);
                FieldElement scaled = mul(lift(c), a.values[i].t);
                bool present = false;
                for (const auto& v : b.values)
                    if (v.field == a.values[i].field && v.t == scaled) present = true;
                CHECK(present);
            }
        }
    }
}

TEST_CASE("constant polynomial reports AllValues with a remark") {
    Backend Q = Backend::rationals();
    CriticalSet cs = critical_values(Polynomial::from_ints(Q, {4}));
    CHECK(cs.kind == CriticalKind::AllValues);
    CHECK(!cs.notes.empty());
    // the sole value is critical, others are not
    CHECK(is_critical_value(Polynomial::from_ints(Q, {4}), Q.from_int(4)).verdict == Criticality::Critical);
    CHECK(is_critical_value(Polynomial::from_ints(Q, {4}), Q.from_int(5)).verdict == Criticality::NotCritical);
}

TEST_CASE("x^p over F_p reports AllValues") {
    Backend F3 = Backend::prime_field(3);
    CriticalSet cs = critical_values(Polynomial::from_ints(F3, {0, 0, 0, 1}));
    CHECK(cs.kind == CriticalKind::AllValues);
    CHECK_FALSE(is_surjective(cs));
}

TEST_CASE("critical values in extension fields are found") {
    // f = x^3 - 3x over F_7: Z(f') = {1,-1} -> candidates f(1)=-2=5, f(-1)=2;
    // fiber of 5 is (x-1)^2(x+2) and f'(-2)=9=2 != 0, so not critical
    Backend F7 = Backend::prime_field(7);
    CriticalSet cs = critical_values(Polynomial::from_ints(F7, {0, -3, 0, 1}));
    CHECK(cs.kind == CriticalKind::Empty);
    // f = x^2 over F_7: critical value 0
    CriticalSet sq = critical_values(Polynomial::from_ints(F7, {0, 0, 1}));
    REQUIRE(sq.kind == CriticalKind::Finite);
    REQUIRE(sq.values.size() == 1);
    CHECK(sq.values[0].t == F7.zero());
}

TEST_CASE("numeric criticality with the two-sided band") {
    Backend C = Backend::complex_floats(1e-8);
    Polynomial sq = Polynomial::from_ints(C, {0, 0, 1});
    CHECK(is_critical_value(sq, C.zero()).verdict == Criticality::Critical);
    CHECK(is_critical_value(sq, C.one()).verdict == Criticality::NotCritical);
    CriticalSet cs = critical_values(sq);
    REQUIRE(cs.kind == CriticalKind::Finite);
    REQUIRE(cs.values.size() == 1);
    CHECK(std::abs(cs.values[0].t.complex()) < 1e-7);
}

TEST_CASE("rational criterion handles irrational candidates exactly") {
    Backend Q = Backend::rationals();
    // f = x^3 - 3x^2 + 5: f' = 3x(x-2); candidates f(0)=5, f(2)=1; fibers have
    // non-critical extra roots so the set is empty
    CriticalSet cs = critical_values(Polynomial::from_ints(Q, {5, 0, -3, 1}));
    CHECK(cs.kind == CriticalKind::Empty);
    CHECK_FALSE(cs.exactness_downgraded);
    // f = x^4: critical set {0} via a rational candidate
    CriticalSet q4 = critical_values(Polynomial::from_ints(Q, {0, 0, 0, 0, 1}));
    REQUIRE(q4.kind == CriticalKind::Finite);
    CHECK(q4.values.size() == 1);
    CHECK(q4.values[0].t == Q.zero());
}
