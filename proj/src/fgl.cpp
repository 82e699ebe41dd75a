#include <fgw/fgl.hpp>

#include <sstream>

namespace fgw
{

LawSpec LawSpec::parse(std::string_view text)
{
    const std::string s(text);
    LawSpec spec;
    auto numbers = [&](std::size_t from) {
        std::vector<long> out;
        std::stringstream ss(s.substr(from));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stol(item, &used));
                if (used != item.size()) {
                    throw std::invalid_argument(item);
                }
            } catch (const std::exception &) {
                fail(ErrorCode::InvalidArgument, "bad number '" + item + "' in law '" + s + "'");
            }
        }
        return out;
    };
    if (s == "additive") {
        spec.kind = LawKind::Additive;
    } else if (s == "multiplicative") {
        spec.kind = LawKind::Multiplicative;
    } else if (s == "custom") {
        spec.kind = LawKind::Custom;
    } else if (s.rfind("honda:", 0) == 0) {
        const auto v = numbers(6);
        if (v.size() != 2) {
            fail(ErrorCode::InvalidArgument, "honda law needs 'honda:p,n'");
        }
        spec.kind = LawKind::Honda;
        spec.p = v[0];
        spec.height = static_cast<int>(v[1]);
    } else if (s.rfind("generic_log:", 0) == 0) {
        const auto v = numbers(12);
        if (v.size() != 1 || v[0] < 0) {
            fail(ErrorCode::InvalidArgument, "generic law needs 'generic_log:k'");
        }
        spec.kind = LawKind::GenericLog;
        spec.generators = static_cast<int>(v[0]);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown law '" + s + "'");
    }
    return spec;
}

std::string LawSpec::to_string() const
{
    switch (kind) {
    case LawKind::Additive: return "additive";
    case LawKind::Multiplicative: return "multiplicative";
    case LawKind::Honda: return "honda:" + std::to_string(p) + "," + std::to_string(height);
    case LawKind::GenericLog: return "generic_log:" + std::to_string(generators);
    case LawKind::Custom: return "custom";
    }
    return "custom";
}

namespace
{

TruncatedSeries law_series(const FormalGroupLaw &law, int truncation)
{
    const auto ctx = law_context(law, {"x", "y"});
    TruncatedSeries s(law.ring(), ctx, truncation);
    for (const auto &[ij, c] : law.table()) {
        s.add_term(Monomial(std::vector<int>{ij.first, ij.second}), c);
    }
    return s;
}

// Composes a univariate logarithm into exp(log x + log y) over its own ring.
TruncatedSeries law_from_logarithm(const TruncatedSeries &log)
{
    const auto exp = reversion(log, "x");
    const auto ctx2 = VariableContext::make({"x", "y"});
    const int trunc = log.truncation();
    const auto X = TruncatedSeries::variable(log.ring(), ctx2, "x", trunc);
    const auto Y = TruncatedSeries::variable(log.ring(), ctx2, "y", trunc);
    const auto lx = substitute(log, {{"x", X}});
    const auto ly = substitute(log, {{"x", Y}});
    return substitute(exp, {{"x", lx + ly}});
}

} // namespace

FormalGroupLaw FormalGroupLaw::construct(const LawSpec &spec, int degree_bound)
{
    switch (spec.kind) {
    case LawKind::Additive: return additive(degree_bound);
    case LawKind::Multiplicative: return multiplicative(degree_bound);
    case LawKind::Honda: return honda(spec.p, spec.height, degree_bound);
    case LawKind::GenericLog: return generic_log(spec.generators, degree_bound);
    case LawKind::Custom: break;
    }
    fail(ErrorCode::InvalidArgument, "custom laws are built from an explicit table");
}

FormalGroupLaw FormalGroupLaw::additive(int degree_bound)
{
    const Ring ring = GradedRingSpec::rationals();
    Table t;
    t.emplace(std::pair{1, 0}, Coefficient::one(ring));
    t.emplace(std::pair{0, 1}, Coefficient::one(ring));
    return from_table("additive", LawSpec{LawKind::Additive}, ring, degree_bound, std::move(t));
}

FormalGroupLaw FormalGroupLaw::multiplicative(int degree_bound)
{
    // K-theory is 2-periodic; the Bott class is absorbed into the Z/2 grading.
    const Ring ring = GradedRingSpec::integers(Grading::Z2);
    Table t;
    t.emplace(std::pair{1, 0}, Coefficient::one(ring));
    t.emplace(std::pair{0, 1}, Coefficient::one(ring));
    t.emplace(std::pair{1, 1}, Coefficient::from_integer(ring, -1));
    return from_table("multiplicative", LawSpec{LawKind::Multiplicative}, ring, degree_bound, std::move(t));
}

FormalGroupLaw FormalGroupLaw::honda(long p, int height, int degree_bound)
{
    if (!is_prime(p)) {
        fail(ErrorCode::InvalidArgument, "honda law needs a prime, got " + std::to_string(p));
    }
    if (height < 1) {
        fail(ErrorCode::InvalidArgument, "honda law needs height >= 1");
    }
    if (degree_bound < 2) {
        fail(ErrorCode::InvalidArgument, "degree bound must be at least 2");
    }
    const Ring q = GradedRingSpec::rationals();
    const Ring target = GradedRingSpec::morava(p, height);
    long ph = 1;
    for (int i = 0; i < height; ++i) {
        ph *= p;
    }

    const auto ctx1 = VariableContext::make({"x"});
    TruncatedSeries log(q, ctx1, degree_bound + 1);
    mpz_class denom = 1;
    for (long power = 1; power <= degree_bound; power *= ph) {
        log.add_term(Monomial(std::vector<int>{static_cast<int>(power)}), Coefficient::from_rational(q, mpq_class(mpz_class(1), denom)));
        denom *= p;
        if (ph == 1) {
            break;
        }
    }
    const auto rational_law = law_from_logarithm(log);

    Table t;
    const Coefficient v = Coefficient::generator(target, "v");
    for (const auto &[m, c] : rational_law.terms()) {
        const int i = m[0];
        const int j = m[1];
        const auto integrality = check_p_integral(c, p);
        if (!integrality.integral) {
            fail(ErrorCode::IntegralityFailure, "coefficient of x^" + std::to_string(i) + " y^" + std::to_string(j)
                                                    + " is " + c.to_string() + ", not " + std::to_string(p)
                                                    + "-integral");
        }
        const Coefficient reduced = integrality.image->map_to(target);
        if (reduced.is_zero()) {
            continue;
        }
        if ((i + j - 1) % (ph - 1) != 0) {
            fail(ErrorCode::GradingFailure, "nonzero coefficient at x^" + std::to_string(i) + " y^" + std::to_string(j)
                                                + " with i+j-1 not divisible by " + std::to_string(ph - 1));
        }
        t.emplace(std::pair{i, j}, reduced * v.pow(static_cast<unsigned>((i + j - 1) / (ph - 1))));
    }
    return from_table("honda(" + std::to_string(p) + "," + std::to_string(height) + ")",
                      LawSpec{LawKind::Honda, p, height, 0}, target, degree_bound, std::move(t), -2);
}

FormalGroupLaw FormalGroupLaw::generic_log(int generators, int degree_bound)
{
    if (generators < 0) {
        fail(ErrorCode::InvalidArgument, "generator count must be non-negative");
    }
    if (degree_bound < 2) {
        fail(ErrorCode::InvalidArgument, "degree bound must be at least 2");
    }
    std::vector<std::pair<std::string, int>> gens;
    for (int i = 1; i <= generators; ++i) {
        gens.emplace_back("m" + std::to_string(i), -2 * i);
    }
    const Ring ring = GradedRingSpec::polynomial_extension(GradedRingSpec::rationals(), gens);
    const auto ctx1 = VariableContext::make({"x"});
    TruncatedSeries log(ring, ctx1, degree_bound + 1);
    log.add_term(Monomial(std::vector<int>{1}), Coefficient::one(ring));
    for (int i = 1; i <= generators; ++i) {
        log.add_term(Monomial(std::vector<int>{i + 1}), Coefficient::generator(ring, "m" + std::to_string(i)));
    }
    const auto series = law_from_logarithm(log);
    Table t;
    for (const auto &[m, c] : series.terms()) {
        t.emplace(std::pair{m[0], m[1]}, c);
    }
    return from_table("generic_log(" + std::to_string(generators) + ")", LawSpec{LawKind::GenericLog, 0, 0, generators},
                      ring, degree_bound, std::move(t));
}

FormalGroupLaw FormalGroupLaw::from_table(std::string name, LawSpec spec, Ring ring, int degree_bound, Table table,
                                          int variable_degree)
{
    if (degree_bound < 2) {
        fail(ErrorCode::InvalidArgument, "degree bound must be at least 2");
    }
    FormalGroupLaw law;
    law.name_ = std::move(name);
    law.spec_ = spec;
    law.ring_ = std::move(ring);
    law.bound_ = degree_bound;
    law.variable_degree_ = variable_degree;
    for (auto &[ij, c] : table) {
        if (ij.first < 0 || ij.second < 0) {
            fail(ErrorCode::InvalidLaw, "negative index in coefficient table");
        }
        require_same_ring(law.ring_, c.ring(), "law coefficient");
        if (ij.first + ij.second <= degree_bound && !c.is_zero()) {
            law.table_.emplace(ij, c);
        }
    }

    auto where = [](int i, int j) { return "a(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
    const Coefficient one = Coefficient::one(law.ring_);
    if (law.a(0, 0) != Coefficient::zero(law.ring_) || law.a(1, 0) != one || law.a(0, 1) != one) {
        fail(ErrorCode::InvalidLaw, "unitality requires a(0,0) = 0 and a(1,0) = a(0,1) = 1");
    }
    for (const auto &[ij, c] : law.table_) {
        const auto [i, j] = ij;
        if ((i == 0 && j >= 2) || (j == 0 && i >= 2)) {
            fail(ErrorCode::InvalidLaw, "unitality violated at " + where(i, j));
        }
        if (law.a(j, i) != c) {
            fail(ErrorCode::InvalidLaw, "commutativity violated at " + where(i, j));
        }
        if (law.ring_->grading() == Grading::Z
            && c.degree() != law.ring_->reduce_degree(static_cast<long>(variable_degree) * (1 - i - j))) {
            fail(ErrorCode::InvalidLaw, "coefficient " + where(i, j) + " has degree " + std::to_string(c.degree()));
        }
    }

    const int trunc = degree_bound + 1;
    const auto ctx3 = law_context(law, {"x", "y", "z"});
    const auto x = TruncatedSeries::variable(law.ring_, ctx3, "x", trunc);
    const auto y = TruncatedSeries::variable(law.ring_, ctx3, "y", trunc);
    const auto z = TruncatedSeries::variable(law.ring_, ctx3, "z", trunc);
    const auto lhs = law.evaluate(law.evaluate(x, y), z);
    const auto rhs = law.evaluate(x, law.evaluate(y, z));
    if (lhs != rhs) {
        const auto diff = lhs - rhs;
        fail(ErrorCode::InvalidLaw, "associativity fails at " + monomial_string(ctx3, diff.terms().begin()->first));
    }
    return law;
}

Coefficient FormalGroupLaw::a(int i, int j) const
{
    const auto it = table_.find({i, j});
    if (it != table_.end()) {
        return it->second;
    }
    return Coefficient::zero(ring_, static_cast<long>(variable_degree_) * (1 - i - j));
}

void FormalGroupLaw::require_truncation(int truncation) const
{
    if (truncation > bound_ + 1) {
        fail(ErrorCode::BoundExceeded, "truncation " + std::to_string(truncation) + " needs degree bound "
                                           + std::to_string(truncation - 1) + ", law " + name_ + " has "
                                           + std::to_string(bound_));
    }
}

TruncatedSeries FormalGroupLaw::evaluate(const TruncatedSeries &x, const TruncatedSeries &y) const
{
    const int trunc = std::min(x.truncation(), y.truncation());
    require_truncation(trunc);
    return substitute(law_series(*this, trunc), {{"x", x}, {"y", y}});
}

bool FormalGroupLaw::operator==(const FormalGroupLaw &o) const
{
    return name_ == o.name_ && spec_ == o.spec_ && same_ring(ring_, o.ring_) && bound_ == o.bound_
           && variable_degree_ == o.variable_degree_ && table_ == o.table_;
}

Context law_context(const FormalGroupLaw &law, std::vector<std::string> names)
{
    return VariableContext::make_uniform(std::move(names), law.variable_degree());
}

TruncatedSeries two_var_sum(const FormalGroupLaw &law, const std::string &x, const std::string &y, int truncation)
{
    law.require_truncation(truncation);
    const auto ctx = law_context(law, {x, y});
    return law.evaluate(TruncatedSeries::variable(law.ring(), ctx, x, truncation),
                        TruncatedSeries::variable(law.ring(), ctx, y, truncation));
}

TruncatedSeries n_series(const FormalGroupLaw &law, int n, const std::string &x, int truncation)
{
    law.require_truncation(truncation);
    const auto ctx = law_context(law, {x});
    const auto var = TruncatedSeries::variable(law.ring(), ctx, x, truncation);
    if (n < 0) {
        const auto inv = formal_inverse(law, x, truncation);
        return substitute(n_series(law, -n, x, truncation), {{x, inv}});
    }
    TruncatedSeries acc = TruncatedSeries::zero(law.ring(), ctx, truncation);
    for (int k = 1; k <= n; ++k) {
        acc = law.evaluate(var, acc);
    }
    return acc;
}

TruncatedSeries fold_sum(const FormalGroupLaw &law, const std::vector<TruncatedSeries> &args)
{
    if (args.empty()) {
        fail(ErrorCode::InvalidArgument, "formal sum of no arguments");
    }
    TruncatedSeries acc = args.front();
    for (std::size_t i = 1; i < args.size(); ++i) {
        acc = law.evaluate(acc, args[i]);
    }
    return acc;
}

TruncatedSeries fold_sum_right(const FormalGroupLaw &law, const std::vector<TruncatedSeries> &args)
{
    if (args.empty()) {
        fail(ErrorCode::InvalidArgument, "formal sum of no arguments");
    }
    TruncatedSeries acc = args.back();
    for (std::size_t i = args.size() - 1; i-- > 0;) {
        acc = law.evaluate(args[i], acc);
    }
    return acc;
}

TruncatedSeries multi_sum(const FormalGroupLaw &law, const std::vector<std::string> &variables,
                          const std::vector<int> &multiplicities, int truncation)
{
    if (variables.size() != multiplicities.size()) {
        fail(ErrorCode::InvalidArgument, "variables and multiplicities differ in length");
    }
    law.require_truncation(truncation);
    const auto ctx = law_context(law, variables);
    std::vector<TruncatedSeries> args;
    std::map<int, TruncatedSeries> cache;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        const int n = multiplicities[i];
        auto it = cache.find(n);
        if (it == cache.end()) {
            it = cache.emplace(n, n_series(law, n, "u", truncation)).first;
        }
        args.push_back(substitute(it->second, {{"u", TruncatedSeries::variable(law.ring(), ctx, variables[i], truncation)}}));
    }
    if (args.empty()) {
        return TruncatedSeries::zero(law.ring(), ctx, truncation);
    }
    return fold_sum(law, args);
}

TruncatedSeries formal_inverse(const FormalGroupLaw &law, const std::string &x, int truncation)
{
    law.require_truncation(truncation);
    const auto ctx = law_context(law, {x});
    const auto var = TruncatedSeries::variable(law.ring(), ctx, x, truncation);
    // y <- y - L(x, y) gains at least one degree of accuracy per step.
    TruncatedSeries y = -var;
    for (int i = 1; i < truncation; ++i) {
        y -= law.evaluate(var, y);
    }
    return y;
}

nlohmann::json law_to_json(const FormalGroupLaw &law)
{
    auto coeffs = nlohmann::json::array();
    for (const auto &[ij, c] : law.table()) {
        coeffs.push_back(nlohmann::json::array({ij.first, ij.second, c.to_string()}));
    }
    return {{"name", law.name()},
            {"law", law.spec().to_string()},
            {"ring", ring_to_json(law.ring())},
            {"bound", law.degree_bound()},
            {"variable_degree", law.variable_degree()},
            {"coefficients", coeffs}};
}

FormalGroupLaw law_from_json(const nlohmann::json &j)
{
    try {
        const Ring ring = ring_from_json(j.at("ring"));
        FormalGroupLaw::Table table;
        for (const auto &c : j.at("coefficients")) {
            table.emplace(std::pair{c.at(0).get<int>(), c.at(1).get<int>()},
                          Coefficient::parse(ring, c.at(2).get<std::string>()));
        }
        return FormalGroupLaw::from_table(j.at("name").get<std::string>(), LawSpec::parse(j.at("law").get<std::string>()),
                                          ring, j.at("bound").get<int>(), std::move(table),
                                          j.at("variable_degree").get<int>());
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("law: ") + e.what());
    }
}

std::string law_table_text(const FormalGroupLaw &law)
{
    std::ostringstream os;
    os << "law " << law.name() << " over " << law.ring()->describe() << ", degree bound " << law.degree_bound() << "\n";
    os << "L(x,y) = " << two_var_sum(law, "x", "y", law.degree_bound() + 1).to_string() << " + O(deg "
       << law.degree_bound() + 1 << ")\n";
    for (int d = 1; d <= law.degree_bound(); ++d) {
        for (int i = 0; i <= d; ++i) {
            const auto c = law.a(i, d - i);
            if (!c.is_zero()) {
                os << "a(" << i << "," << d - i << ") = " << c.to_string() << "\n";
            }
        }
    }
    return os.str();
}

} // namespace fgw
