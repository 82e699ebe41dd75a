#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <fgw/coeff.hpp>

using namespace fgw;

namespace
{

Coefficient q(const Ring &r, long num, long den = 1)
{
    return Coefficient::from_rational(r, mpq_class(num, den));
}

// Independent valuation: strip factors of p from numerator and denominator.
int valuation_oracle(long num, long den, long p)
{
    int v = 0;
    while (num % p == 0) {
        num /= p;
        ++v;
    }
    while (den % p == 0) {
        den /= p;
        --v;
    }
    return v;
}

// num * den^(p-2) mod p, i.e. num/den in F_p by Fermat.
long residue_oracle(long num, long den, long p)
{
    auto mod = [p](long x) { return ((x % p) + p) % p; };
    long inv = 1;
    long base = mod(den);
    for (long e = p - 2; e > 0; e >>= 1) {
        if (e & 1) {
            inv = inv * base % p;
        }
        base = base * base % p;
    }
    return mod(mod(num) * inv);
}

} // namespace

TEST_CASE("rational arithmetic is exact")
{
    const auto Q = GradedRingSpec::rationals();
    CHECK(q(Q, 1, 2) + q(Q, 1, 3) == q(Q, 5, 6));
    CHECK((q(Q, 1, 2) + q(Q, 1, 3)).to_string() == "5/6");
    CHECK(q(Q, 4, -6).to_string() == "-2/3");
    CHECK((q(Q, 2, 3) * q(Q, 3, 2)).is_one());
    CHECK(q(Q, 3, 7).inverse() == q(Q, 7, 3));
}

TEST_CASE("prime field reduces residues")
{
    const auto F5 = GradedRingSpec::prime_field(5);
    CHECK((Coefficient::from_integer(F5, 2) + Coefficient::from_integer(F5, 3)).is_zero());
    CHECK(Coefficient::from_integer(F5, -1).to_string() == "4");
    CHECK(q(F5, 1, 2).to_string() == "3");
    CHECK_THROWS_AS(q(F5, 1, 5), Error);
    CHECK_THROWS_AS(Coefficient::from_integer(F5, 0).inverse(), Error);
}

TEST_CASE("integers reject fractions")
{
    const auto Z = GradedRingSpec::integers();
    CHECK_THROWS_AS(q(Z, 1, 2), Error);
    CHECK_FALSE(Coefficient::from_integer(Z, 2).is_unit());
    CHECK(Coefficient::from_integer(Z, -1).inverse() == Coefficient::from_integer(Z, -1));
}

TEST_CASE("Morava generator degrees")
{
    const auto K21 = GradedRingSpec::morava(2, 1);
    const auto v = Coefficient::generator(K21, "v");
    CHECK(v.degree() == 2);
    CHECK((v * v).degree() == 4);
    CHECK((v * v).to_string() == "v^2");
    CHECK((v * v.inverse()).is_one());
    CHECK(v.inverse().degree() == -2);
    CHECK(v.inverse().to_string() == "v^-1");

    const auto K22 = GradedRingSpec::morava(2, 2);
    CHECK(Coefficient::generator(K22, "v").degree() == 6);
    const auto K31 = GradedRingSpec::morava(3, 1);
    CHECK(Coefficient::generator(K31, "v").degree() == 4);
    CHECK((Coefficient::from_integer(K31, 2) * Coefficient::generator(K31, "v", 3)).to_string() == "2·v^3");

    CHECK_THROWS_AS(GradedRingSpec::morava(4, 1), Error);
    CHECK_THROWS_AS(GradedRingSpec::morava(2, 0), Error);
}

TEST_CASE("adding unequal degrees fails in Z grading only")
{
    const auto K = GradedRingSpec::morava(2, 1);
    const auto v = Coefficient::generator(K, "v");
    const auto one = Coefficient::one(K);
    try {
        (void)(v + one);
        FAIL("expected DegreeMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::DegreeMismatch);
    }
    const auto K2 = GradedRingSpec::morava(2, 1, Grading::Z2);
    const auto w = Coefficient::generator(K2, "v");
    CHECK((w + Coefficient::one(K2)).terms().size() == 2);
    CHECK(K2->reduce_degree(-3) == 1);
}

TEST_CASE("ring mismatch is reported")
{
    const auto a = Coefficient::one(GradedRingSpec::rationals());
    const auto b = Coefficient::one(GradedRingSpec::prime_field(3));
    try {
        (void)(a + b);
        FAIL("expected RingMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::RingMismatch);
    }
}

TEST_CASE("polynomial extension over Q")
{
    const auto R = GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"m1", -2}, {"m2", -4}});
    const auto m1 = Coefficient::generator(R, "m1");
    const auto m2 = Coefficient::generator(R, "m2");
    CHECK((m1 * m1 * m2).to_string() == "m1^2·m2");
    CHECK((m1 * m1 * m2).degree() == -8);
    CHECK((m1 * m1 - m2).to_string() == "-m2 + m1^2");
    CHECK_THROWS_AS(m1.inverse(), Error);
    CHECK_THROWS_AS(GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"a", 1}}), Error);
    CHECK_THROWS_AS(GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"a", 2}, {"a", 2}}), Error);
}

TEST_CASE("rendering and parsing are inverse")
{
    const auto R = GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"m1", -2}, {"m2", -4}});
    for (const std::string text : {"3/4", "-m2 + m1^2", "12·m1·m2 - 8·m1^3", "0", "-1/3·m1"}) {
        const auto c = Coefficient::parse(R, text, text == "0" ? 0 : -1000);
        CHECK(c.to_string() == text);
        CHECK(Coefficient::parse(R, c.to_string(), c.degree()) == c);
    }
    CHECK(Coefficient::parse(R, "2*m1*m1") == Coefficient::parse(R, "2·m1^2"));
    CHECK_THROWS_AS(Coefficient::parse(R, "m3"), Error);
    CHECK_THROWS_AS(Coefficient::parse(R, "1/0"), Error);
    CHECK_THROWS_AS(Coefficient::parse(R, "m1 + 1"), Error);
    const auto K = GradedRingSpec::morava(3, 1);
    CHECK(Coefficient::parse(K, "2·v^-2").to_string() == "2·v^-2");
}

TEST_CASE("p-integrality examples")
{
    const auto Q = GradedRingSpec::rationals();
    auto r = check_p_integral(q(Q, 3, 4), 3);
    CHECK(r.integral);
    CHECK(r.image->is_zero());

    r = check_p_integral(q(Q, 1, 2), 2);
    CHECK_FALSE(r.integral);
    CHECK(r.valuation == -1);
    try {
        reduce_mod_p(q(Q, 1, 2), 2);
        FAIL("expected NotPIntegral");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotPIntegral);
        CHECK(std::string(e.what()).find("valuation -1") != std::string::npos);
    }

    r = check_p_integral(q(Q, -6, 5), 2);
    CHECK(r.integral);
    CHECK(r.image->is_zero());
    CHECK(reduce_mod_p(q(Q, 7, 3), 5).to_string() == "4");
}

TEST_CASE("p-adic valuation and reduction agree with independent oracles")
{
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> num(-500, 500);
    std::uniform_int_distribution<long> den(1, 400);
    const auto Q = GradedRingSpec::rationals();
    for (long p : {2L, 3L, 5L, 7L}) {
        for (int trial = 0; trial < 200; ++trial) {
            long a = num(rng);
            long b = den(rng);
            if (a == 0) {
                continue;
            }
            const mpq_class x(a, b);
            const long g = mpz_class(gcd(mpz_class(a), mpz_class(b))).get_si();
            const int expected = valuation_oracle(a / g, b / g, p);
            CHECK(p_adic_valuation(x, p) == expected);
            const auto r = check_p_integral(Coefficient::from_rational(Q, x), p);
            CHECK(r.integral == (expected >= 0));
            if (r.integral) {
                CHECK(r.image->to_string() == std::to_string(residue_oracle(a / g, b / g, p)));
            }
        }
    }
}

TEST_CASE("ring axioms on random samples")
{
    std::mt19937 rng(5);
    const auto R = GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"a", 2}, {"b", 2}});
    std::uniform_int_distribution<int> small(-3, 3);
    auto random_coeff = [&](int degree_in_gens) {
        std::vector<CoefficientTerm> terms;
        for (int i = 0; i <= degree_in_gens; ++i) {
            terms.push_back({{i, degree_in_gens - i}, mpq_class(small(rng), 1 + std::abs(small(rng)))});
        }
        return Coefficient::from_terms(R, terms, 2 * degree_in_gens);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_coeff(1);
        const auto y = random_coeff(1);
        const auto z = random_coeff(2);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        CHECK((x + y) * z == x * z + y * z);
        CHECK(x + y == y + x);
        CHECK((x * y).degree() == x.degree() + y.degree());
        const auto canon = Coefficient::from_terms(R, (x * z).terms(), (x * z).degree());
        CHECK(canon == x * z);
        CHECK(canon.terms() == (x * z).terms());
    }
}

TEST_CASE("F_p[v^±1] ring axioms and degree bookkeeping")
{
    std::mt19937 rng(9);
    const auto K = GradedRingSpec::morava(3, 1);
    std::uniform_int_distribution<int> e(-3, 3);
    std::uniform_int_distribution<int> s(0, 2);
    std::uniform_int_distribution<int> unit(1, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = Coefficient::from_integer(K, s(rng)) * Coefficient::generator(K, "v", e(rng));
        const auto y = Coefficient::from_integer(K, s(rng)) * Coefficient::generator(K, "v", e(rng));
        const auto z = Coefficient::from_integer(K, unit(rng)) * Coefficient::generator(K, "v", e(rng));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        if (!x.is_zero() && !y.is_zero()) {
            CHECK((x * y).degree() == x.degree() + y.degree());
        }
        CHECK((z * z.inverse()).is_one());
    }
}

TEST_CASE("base change and grading modes")
{
    const auto Z = GradedRingSpec::integers(Grading::Z2);
    const auto Q = with_field_scalars(Z);
    CHECK(Q->kind() == RingKind::Rationals);
    CHECK(Q->grading() == Grading::Z2);
    CHECK(Coefficient::from_integer(Z, -3).map_to(Q) == Coefficient::from_integer(Q, -3));
    const auto K = GradedRingSpec::morava(2, 1);
    const auto K2 = with_grading(K, Grading::Z2);
    CHECK(K2->grading() == Grading::Z2);
    CHECK(Coefficient::generator(K, "v", 3).map_to(K2).degree() == 0);
    CHECK(Coefficient::from_rational(GradedRingSpec::rationals(), mpq_class(1, 3)).map_to(K).to_string() == "1");
    CHECK_THROWS_AS(Coefficient::one(K).map_to(GradedRingSpec::prime_field(3)), Error);
}

TEST_CASE("ring JSON round trip")
{
    const std::vector<Ring> rings{GradedRingSpec::rationals(), GradedRingSpec::integers(Grading::Z2),
                                  GradedRingSpec::prime_field(7), GradedRingSpec::morava(2, 2),
                                  GradedRingSpec::polynomial_extension(GradedRingSpec::morava(3, 1), {{"m1", -2}})};
    for (const auto &r : rings) {
        CHECK(same_ring(ring_from_json(ring_to_json(r)), r));
    }
    CHECK_FALSE(same_ring(rings[0], rings[1]));
    CHECK_THROWS_AS(ring_from_json(nlohmann::json{{"kind", "octonions"}}), Error);
}
