#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fgw/correction.hpp>

using namespace fgw;

namespace
{

std::vector<FormalGroupLaw> bundled(int bound)
{
    return {FormalGroupLaw::additive(bound), FormalGroupLaw::multiplicative(bound), FormalGroupLaw::honda(2, 1, bound),
            FormalGroupLaw::generic_log(2, bound)};
}

TruncatedSeries divisor(const DivisorPresentation &p, int j)
{
    return TruncatedSeries::variable(p.law().ring(), p.context(), p.divisor_name(j), p.truncation());
}

// prod_{i < k} (1 - D_i), multiplied out.
TruncatedSeries alternating_product(const DivisorPresentation &p, int k)
{
    auto one = TruncatedSeries::one(p.law().ring(), p.context(), p.truncation());
    auto prod = one;
    for (int i = 0; i < k; ++i) {
        prod = prod * (one - divisor(p, i));
    }
    return prod;
}

bool divisible_by_both(const Monomial &m, std::size_t a, std::size_t b)
{
    return m[a] > 0 && m[b] > 0;
}

CorrectionSeries correction(const FormalGroupLaw &law, int N, int trunc, NegationMode mode = NegationMode::Literal,
                            bool decorated = false)
{
    return compute_correction(DivisorPresentation::make(law, N, trunc, mode, decorated));
}

} // namespace

TEST_CASE("presentation variables and relations")
{
    const auto p = DivisorPresentation::make(FormalGroupLaw::multiplicative(4), 2, 4);
    CHECK(p.context()->names() == std::vector<std::string>{"D0", "D1", "D2"});
    // Lambda_0 = L(-D1, -D2) = -D1 - D2 - D1 D2.
    CHECK(p.lambda(0).to_string() == "-D1 - D2 - D1·D2");
    CHECK(p.relation(0).to_string() == "D0^2 + D0·D1 + D0·D2 + D0·D1·D2");

    const auto q = DivisorPresentation::make(FormalGroupLaw::multiplicative(4), 1, 4, NegationMode::FormalInverse, true);
    CHECK(q.context()->names() == std::vector<std::string>{"S", "T", "D0", "D1"});
    // Formal inverse of x under x + y - xy is -x - x^2 - x^3.
    CHECK(q.negated(1).to_string() == "-D1 - D1^2 - D1^3");
}

TEST_CASE("additive law needs no correction")
{
    for (int N = 0; N <= 4; ++N) {
        for (auto mode : {NegationMode::Literal, NegationMode::FormalInverse}) {
            const auto c = correction(FormalGroupLaw::additive(6), N, 6, mode);
            CHECK(c.f.to_string() == "1");
            CHECK(c.witness.multipliers.empty());
            CHECK(verify_identity(c).ok);
        }
    }
}

TEST_CASE("multiplicative law: f_j is the alternating product")
{
    const auto c1 = correction(FormalGroupLaw::multiplicative(4), 1, 4);
    CHECK(c1.per_stage[1].to_string() == "1 - D0");
    for (int N = 0; N <= 4; ++N) {
        const auto c = correction(FormalGroupLaw::multiplicative(6), N, 6);
        CAPTURE(N);
        // f is determined below truncation - 1.
        CHECK(c.f.truncation() == 5);
        CHECK(c.f == alternating_product(c.presentation, N + 1).truncated(5));
        for (int j = 0; j <= N; ++j) {
            CHECK(c.per_stage[static_cast<std::size_t>(j)] == alternating_product(c.presentation, j).truncated(5));
        }
        for (const auto &[m, coef] : c.f.terms()) {
            bool square_free = true;
            for (int e : m.exponents()) {
                square_free = square_free && e <= 1;
            }
            CHECK(square_free);
            CHECK(coef == Coefficient::from_integer(c.f.ring(), m.total_degree() % 2 == 0 ? 1 : -1));
        }
    }
}

TEST_CASE("law with a single nonlinear coefficient")
{
    const auto R = GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), {{"a", -2}});
    const auto one = Coefficient::one(R);
    const auto a = Coefficient::generator(R, "a");
    const auto law = FormalGroupLaw::from_table("x+y+axy", {LawKind::Custom}, R, 2,
                                                {{{1, 0}, one}, {{0, 1}, one}, {{1, 1}, a}});
    const auto c = correction(law, 1, 3);
    CHECK(c.per_stage[1].to_string() == "1 + a·D0");
    CHECK(c.f.to_string() == "1 + a·D0 + a·D1");
    CHECK(verify_identity(c).ok);
}

TEST_CASE("witness replay certifies the identity")
{
    for (const auto &law : bundled(6)) {
        for (auto mode : {NegationMode::Literal, NegationMode::FormalInverse}) {
            for (int N = 0; N <= 3; ++N) {
                CAPTURE(law.name());
                CAPTURE(N);
                const auto c = correction(law, N, 6, mode);
                CHECK(verify_identity(c).ok);
                CHECK(c.f.constant_term().is_one());
            }
        }
    }
    const auto h = correction(FormalGroupLaw::honda(2, 1, 6), 2, 6);
    CHECK_FALSE(h.witness.multipliers.empty());
    CHECK(h.stats.rewrites > 0);

    // Residual computed here, independently of verify_identity.
    const auto &p = h.presentation;
    auto residual = p.multi_sum_series() - h.witness.replay(p);
    for (int j = 0; j <= p.N(); ++j) {
        residual -= divisor(p, j) * h.per_stage[static_cast<std::size_t>(j)];
    }
    CHECK(residual.is_zero());
}

TEST_CASE("tampering is detected")
{
    const auto c = correction(FormalGroupLaw::honda(2, 1, 6), 2, 6);

    auto bad_f = c;
    // D0·D1 survives in f_2; a term divisible by D2 would only reach the unchecked f_3.
    bad_f.f.add_term(Monomial(std::vector<int>{1, 1, 0}), Coefficient::generator(c.f.ring(), "v", 2));
    CHECK_FALSE(verify_identity(bad_f).ok);

    auto bad_w = c;
    auto &g = bad_w.witness.multipliers.front().second;
    g.add_term(Monomial(std::vector<int>{0, 0, 0}), Coefficient::generator(g.ring(), "v"));
    const auto v = verify_identity(bad_w);
    CHECK_FALSE(v.ok);
    CHECK_FALSE(v.monomial.empty());

    auto bad_stage = c;
    bad_stage.per_stage[2] = bad_stage.per_stage[1];
    CHECK_FALSE(verify_identity(bad_stage).ok);
}

TEST_CASE("processing order does not change f")
{
    for (const auto &law : {FormalGroupLaw::honda(2, 1, 6), FormalGroupLaw::generic_log(2, 6)}) {
        const auto p = DivisorPresentation::make(law, 3, 6);
        const auto base = compute_correction(p);
        for (std::uint64_t seed : {1u, 7u, 42u}) {
            const auto shuffled = compute_correction(p, {seed});
            CHECK(shuffled.f == base.f);
            CHECK(verify_identity(shuffled).ok);
        }
    }
}

TEST_CASE("coherence: setting D_N to zero gives the series for N - 1")
{
    for (const auto &law : bundled(5)) {
        for (int N = 1; N <= 3; ++N) {
            const auto big = correction(law, N, 5);
            const auto small = correction(law, N - 1, 5);
            CAPTURE(law.name());
            CAPTURE(N);
            CHECK(big.f.specialize_zero({"D" + std::to_string(N)}) == small.f.embed(big.f.context()));
            CHECK(big.per_stage[static_cast<std::size_t>(N)] == small.f.embed(big.f.context()));
        }
    }
}

TEST_CASE("adjacent swaps agree modulo D_i D_(i+1), matching the merged variable")
{
    for (const auto &law : bundled(5)) {
        for (auto mode : {NegationMode::Literal, NegationMode::FormalInverse}) {
            for (int N = 1; N <= 3; ++N) {
                const auto c = correction(law, N, 5, mode);
                const auto merged = correction(law, N - 1, 5, mode);
                for (int i = 0; i + 1 <= N; ++i) {
                    CAPTURE(law.name());
                    CAPTURE(N);
                    CAPTURE(i);
                    const auto a = static_cast<std::size_t>(i);
                    const auto b = a + 1;
                    auto mod = [&](const TruncatedSeries &s) {
                        return s.filtered([&](const Monomial &m) { return !divisible_by_both(m, a, b); });
                    };
                    const auto Di = divisor(c.presentation, i);
                    const auto Dn = divisor(c.presentation, i + 1);
                    const auto swapped = substitute(c.f, {{"D" + std::to_string(i), Dn}, {"D" + std::to_string(i + 1), Di}});
                    CHECK(mod(swapped) == mod(c.f));

                    std::map<std::string, TruncatedSeries> assign;
                    for (int k = 0; k < N; ++k) {
                        const auto name = "D" + std::to_string(k);
                        if (k < i) {
                            assign.emplace(name, divisor(c.presentation, k));
                        } else if (k == i) {
                            assign.emplace(name, Di + Dn);
                        } else {
                            assign.emplace(name, divisor(c.presentation, k + 1));
                        }
                    }
                    CHECK(mod(substitute(merged.f, assign)) == mod(c.f));
                }
            }
        }
    }
}

TEST_CASE("decorated series F")
{
    for (const auto &law : bundled(5)) {
        for (int N = 0; N <= 3; ++N) {
            CAPTURE(law.name());
            CAPTURE(N);
            const auto F = correction(law, N, 5, NegationMode::Literal, true);
            const auto f = correction(law, N, 5);
            CHECK(verify_identity(F).ok);
            CHECK(F.f.specialize_zero({"S", "T"}) == f.f.embed(F.f.context()));
            CHECK(F.f.constant_term().is_one());
            const auto parts = expand_F_in_S(F);
            CHECK(parts.size() == 4);
            if (law.spec().kind == LawKind::Multiplicative) {
                CHECK(F.f == f.f.embed(F.f.context()));
                for (std::size_t i = 1; i < parts.size(); ++i) {
                    CHECK(parts[i].is_zero());
                }
            }
        }
    }
}

TEST_CASE("assembly")
{
    const auto add = correction(FormalGroupLaw::additive(5), 2, 5);
    CHECK(assemble_corrected_class(AssemblyKind::three_point(), add).to_string() == "1");
    CHECK_THROWS_AS(assemble_corrected_class(AssemblyKind::higher_genus(1), add), Error);

    const auto F = correction(FormalGroupLaw::additive(5), 1, 5, NegationMode::Literal, true);
    const auto g = assemble_corrected_class(AssemblyKind::higher_genus(2), F);
    CHECK(g.constant_term().is_one());
    CHECK(g.context()->names().front() == "w1");
    CHECK_THROWS_AS(assemble_corrected_class(AssemblyKind::three_point(), F), Error);
}

TEST_CASE("argument errors")
{
    try {
        (void)DivisorPresentation::make(FormalGroupLaw::multiplicative(4), 1, 1);
        FAIL("expected TruncationTooSmall");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TruncationTooSmall);
    }
    try {
        (void)expand_F_in_S(correction(FormalGroupLaw::multiplicative(4), 1, 4));
        FAIL("expected NotDecorated");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotDecorated);
    }
    CHECK_THROWS_AS(DivisorPresentation::make(FormalGroupLaw::multiplicative(3), 1, 6), Error);
    CHECK(parse_negation_mode("formalInverse") == NegationMode::FormalInverse);
    CHECK(to_string(NegationMode::Literal) == "literal");
    CHECK_THROWS_AS(parse_negation_mode("both"), Error);
}

TEST_CASE("negation modes agree for the additive law")
{
    const auto a = correction(FormalGroupLaw::additive(5), 3, 5, NegationMode::Literal);
    const auto b = correction(FormalGroupLaw::additive(5), 3, 5, NegationMode::FormalInverse);
    CHECK(a.f == b.f);
}

TEST_CASE("correction JSON round trip")
{
    for (const auto &law : bundled(5)) {
        const auto c = correction(law, 2, 5, NegationMode::FormalInverse, law.spec().kind == LawKind::Honda);
        const auto j = correction_to_json(c);
        const auto back = correction_from_json(j);
        CHECK(back == c);
        CHECK(correction_to_json(back).dump() == j.dump());
        CHECK(verify_identity(back).ok);
        CHECK(presentation_from_json(presentation_to_json(c.presentation)) == c.presentation);
    }
    CHECK_THROWS_AS(correction_from_json(nlohmann::json{{"presentation", 1}}), Error);
}
