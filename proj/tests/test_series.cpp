#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <fgw/series.hpp>

using namespace fgw;

namespace
{

const Ring Q = GradedRingSpec::rationals();

TruncatedSeries var(const Context &ctx, const std::string &name, int trunc)
{
    return TruncatedSeries::variable(Q, ctx, name, trunc);
}

Coefficient rat(long n, long d = 1)
{
    return Coefficient::from_rational(Q, mpq_class(n, d));
}

TruncatedSeries random_series(std::mt19937 &rng, const Context &ctx, int trunc, bool constant_term)
{
    std::uniform_int_distribution<int> c(-3, 3);
    std::uniform_int_distribution<int> e(0, trunc - 1);
    TruncatedSeries s(Q, ctx, trunc);
    for (int k = 0; k < 6; ++k) {
        std::vector<int> exps(ctx->size());
        for (auto &x : exps) {
            x = e(rng) / static_cast<int>(ctx->size());
        }
        Monomial m(exps);
        if (m.total_degree() == 0 && !constant_term) {
            continue;
        }
        s.add_term(m, rat(c(rng), 1 + std::abs(c(rng))));
    }
    return s;
}

// Catalan-number oracle for the reversion of x + x^2: coefficient of x^n is (-1)^(n-1) C_(n-1).
mpq_class catalan(int n)
{
    mpz_class num = 1;
    for (int k = n + 2; k <= 2 * n; ++k) {
        num *= k;
    }
    mpz_class den = 1;
    for (int k = 2; k <= n; ++k) {
        den *= k;
    }
    return mpq_class(num, den);
}

} // namespace

TEST_CASE("canonical order is graded lexicographic")
{
    const auto ctx = VariableContext::make({"x", "y"});
    auto s = var(ctx, "y", 4).pow(2) + var(ctx, "x", 4) * var(ctx, "y", 4) + var(ctx, "x", 4).pow(2) + var(ctx, "y", 4);
    CHECK(s.to_string() == "y + x^2 + x·y + y^2");
}

TEST_CASE("basic arithmetic examples")
{
    const auto ctx = VariableContext::make({"x", "y"});
    const auto x = var(ctx, "x", 4);
    const auto y = var(ctx, "y", 4);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK(((x + y) * (x - y)).to_string() == "x^2 - y^2");

    // x times every monomial of degree <= 3, truncated at 4.
    TruncatedSeries all(Q, ctx, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; a + b < 4; ++b) {
            all.add_term(Monomial(std::vector<int>{a, b}), rat(1));
        }
    }
    const auto prod = x * all;
    for (const auto &[m, c] : prod.terms()) {
        CHECK(m.total_degree() < 4);
        CHECK(m[0] >= 1);
    }
    CHECK(prod.size() == 6);

    const auto K = GradedRingSpec::morava(5, 1);
    const auto xk = TruncatedSeries::variable(K, ctx, "x", 3);
    const auto yk = TruncatedSeries::variable(K, ctx, "y", 3);
    CHECK((xk + yk).scaled(Coefficient::generator(K, "v")).to_string() == "v·x + v·y");
}

TEST_CASE("truncation of results is the minimum")
{
    const auto ctx = VariableContext::make({"x"});
    const auto a = var(ctx, "x", 5);
    const auto b = var(ctx, "x", 3);
    CHECK((a + b).truncation() == 3);
    CHECK((a * b).truncation() == 3);
    CHECK((a * b).to_string() == "x^2");
    CHECK((a.pow(3) * b).is_zero());
}

TEST_CASE("context mismatch")
{
    const auto c1 = VariableContext::make({"x"});
    const auto c2 = VariableContext::make({"y"});
    try {
        (void)(var(c1, "x", 3) + var(c2, "y", 3));
        FAIL("expected ContextMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ContextMismatch);
    }
    // Structurally equal contexts are compatible.
    const auto c3 = VariableContext::make({"x"});
    CHECK((var(c1, "x", 3) + var(c3, "x", 3)).to_string() == "2·x");
}

TEST_CASE("coefficient_of")
{
    const auto ctx = VariableContext::make({"x", "y"});
    const auto x = var(ctx, "x", 4);
    const auto y = var(ctx, "y", 4);
    const auto L = x + y - x * y;
    CHECK(coefficient_of(L, Monomial(std::vector<int>{1, 1})) == rat(-1));
    CHECK(coefficient_of(x + y, Monomial(std::vector<int>{1, 0})) == rat(1));
    CHECK(coefficient_of(L, Monomial(std::vector<int>{3, 0})).is_zero());
    try {
        (void)coefficient_of(L, Monomial(std::vector<int>{2, 2}));
        FAIL("expected OutOfTruncation");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::OutOfTruncation);
    }
}

TEST_CASE("substitution examples")
{
    const auto ctx = VariableContext::make({"x", "y"});
    const auto x = var(ctx, "x", 4);
    const auto y = var(ctx, "y", 4);
    const auto L = x + y - x * y;
    CHECK(substitute(L, {{"x", TruncatedSeries::zero(Q, ctx, 4)}}) == y);
    CHECK(substitute(x * x, {{"x", x + y}}) == x * x + (x * y).scaled(rat(2)) + y * y);

    // u -> [2]u = 2u - u^2 in L(u, v) equals 1 - (1-u)^2 (1-v).
    const auto cuv = VariableContext::make({"u", "v"});
    const auto u = var(cuv, "u", 5);
    const auto v = var(cuv, "v", 5);
    const auto one = TruncatedSeries::one(Q, cuv, 5);
    const auto Luv = u + v - u * v;
    const auto two_u = u.scaled(rat(2)) - u * u;
    const auto expected = one - (one - u) * (one - u) * (one - v);
    CHECK(substitute(Luv, {{"u", two_u}}) == expected);

    try {
        (void)substitute(L, {{"x", one.embed(ctx) + x}});
        FAIL("expected NonzeroConstantTerm");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NonzeroConstantTerm);
    }
}

TEST_CASE("substitution is functorial")
{
    std::mt19937 rng(3);
    const auto ctx = VariableContext::make({"x", "y"});
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_series(rng, ctx, 5, true);
        const auto ax = random_series(rng, ctx, 5, false);
        const auto ay = random_series(rng, ctx, 5, false);
        const auto bx = random_series(rng, ctx, 5, false);
        const auto by = random_series(rng, ctx, 5, false);
        const std::map<std::string, TruncatedSeries> A{{"x", ax}, {"y", ay}};
        const std::map<std::string, TruncatedSeries> B{{"x", bx}, {"y", by}};
        const std::map<std::string, TruncatedSeries> BA{{"x", substitute(ax, B)}, {"y", substitute(ay, B)}};
        CHECK(substitute(substitute(s, A), B) == substitute(s, BA));
    }
}

TEST_CASE("multiplication is associative and commutative")
{
    std::mt19937 rng(11);
    const auto ctx = VariableContext::make({"a", "b", "c"});
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = random_series(rng, ctx, 6, true);
        const auto s = random_series(rng, ctx, 6, true);
        const auto t = random_series(rng, ctx, 6, true);
        CHECK((r * s) * t == r * (s * t));
        CHECK(r * s == s * r);
        CHECK(r * (s + t) == r * s + r * t);
    }
}

TEST_CASE("reversion examples")
{
    const auto ctx = VariableContext::make({"x"});
    const int trunc = 9;
    const auto x = var(ctx, "x", trunc);
    CHECK(reversion(x, "x") == x);

    // x + x^2: Lagrange inversion gives (-1)^(n-1) Catalan(n-1).
    const auto r = reversion(x + x * x, "x");
    for (int n = 1; n < trunc; ++n) {
        const mpq_class expected = (n % 2 == 1 ? 1 : -1) * catalan(n - 1);
        CHECK(coefficient_of(r, Monomial(std::vector<int>{n})) == Coefficient::from_rational(Q, expected));
    }
    CHECK(r.to_string().rfind("x - x^2 + 2·x^3 - 5·x^4", 0) == 0);

    // log(1+x) truncated: its reversion agrees with exp(x) - 1 on the first terms.
    const auto cx = VariableContext::make({"x"});
    const auto y = var(cx, "x", 4);
    const auto log3 = y - (y * y).scaled(rat(1, 2)) + (y * y * y).scaled(rat(1, 3));
    const auto e = reversion(log3, "x");
    CHECK(e.to_string() == "x + 1/2·x^2 + 1/6·x^3");
    CHECK(substitute(log3, {{"x", e}}) == y);
    const auto plus = y + (y * y).scaled(rat(1, 2)) + (y * y * y).scaled(rat(1, 3));
    CHECK(reversion(plus, "x").to_string() == "x - 1/2·x^2 + 1/6·x^3");

    try {
        (void)reversion(x * x, "x");
        FAIL("expected NonUnitLinearTerm");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::NonUnitLinearTerm);
    }
}

TEST_CASE("reversion round trip on random invertible series")
{
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> c(-4, 4);
    const auto ctx = VariableContext::make({"x"});
    const int trunc = 8;
    const auto x = var(ctx, "x", trunc);
    for (int trial = 0; trial < 20; ++trial) {
        TruncatedSeries s(Q, ctx, trunc);
        s.add_term(Monomial(std::vector<int>{1}), rat(1 + trial % 3, 1 + trial % 2));
        for (int k = 2; k < trunc; ++k) {
            s.add_term(Monomial(std::vector<int>{k}), rat(c(rng), 1 + std::abs(c(rng))));
        }
        const auto t = reversion(s, "x");
        CHECK(substitute(s, {{"x", t}}) == x);
        CHECK(substitute(t, {{"x", s}}) == x);
    }
}

TEST_CASE("specialization, embedding and filtering")
{
    const auto ctx = VariableContext::make({"x", "y", "z"});
    const auto x = var(ctx, "x", 4);
    const auto y = var(ctx, "y", 4);
    const auto z = var(ctx, "z", 4);
    const auto s = x + y * z + x * x * z;
    CHECK(s.specialize_zero({"z"}) == x);
    const auto big = VariableContext::make({"w", "z", "y", "x"});
    const auto e = s.embed(big);
    CHECK(e.embed(ctx) == s);
    CHECK_THROWS_AS(s.embed(VariableContext::make({"x", "y"})), Error);
    CHECK(s.filtered([](const Monomial &m) { return m[2] == 0; }) == x);
    CHECK(s.is_homogeneous_of(2) == false);
    CHECK(x.is_homogeneous_of(2));
}

TEST_CASE("series JSON round trip")
{
    std::mt19937 rng(31);
    const auto ctx = VariableContext::make({"u", "v"}, {2, -2});
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_series(rng, ctx, 5, true);
        const auto j = series_to_json(s);
        CHECK(series_from_json(j) == s);
        CHECK(series_to_json(series_from_json(j)).dump() == j.dump());
    }
    CHECK_THROWS_AS(series_from_json(nlohmann::json{{"terms", 3}}), Error);
}

TEST_CASE("compare_series reports the first differing monomial")
{
    const auto ctx = VariableContext::make({"x", "y"});
    const auto x = var(ctx, "x", 4);
    const auto y = var(ctx, "y", 4);
    CHECK(compare_series(x + y, y + x).ok);
    const auto v = compare_series(x + y + x * y, x + y - x * y);
    CHECK_FALSE(v.ok);
    CHECK(v.monomial == "x·y");
}
