#include <fgw/series.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fgw
{

namespace
{

const std::string kDot = "\xC2\xB7";

} // namespace

// --- VariableContext ---------------------------------------------------------

Context VariableContext::make(std::vector<std::string> names, std::vector<int> degrees)
{
    if (degrees.empty()) {
        degrees.assign(names.size(), 2);
    }
    if (degrees.size() != names.size()) {
        fail(ErrorCode::InvalidArgument, "variable names and degrees differ in length");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) {
            fail(ErrorCode::InvalidArgument, "empty variable name");
        }
        for (std::size_t k = i + 1; k < names.size(); ++k) {
            if (names[i] == names[k]) {
                fail(ErrorCode::InvalidArgument, "duplicate variable name " + names[i]);
            }
        }
    }
    auto ctx = std::shared_ptr<VariableContext>(new VariableContext());
    ctx->names_ = std::move(names);
    ctx->degrees_ = std::move(degrees);
    return ctx;
}

Context VariableContext::make_uniform(std::vector<std::string> names, int degree)
{
    std::vector<int> degrees(names.size(), degree);
    return make(std::move(names), std::move(degrees));
}

std::optional<std::size_t> VariableContext::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t VariableContext::require_index(std::string_view name) const
{
    const auto idx = index_of(name);
    if (!idx) {
        fail(ErrorCode::ContextMismatch, "no variable named " + std::string(name));
    }
    return *idx;
}

bool same_context(const Context &a, const Context &b)
{
    return a == b || (a && b && *a == *b);
}

// --- Monomial ----------------------------------------------------------------

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps))
{
    for (int e : exps_) {
        if (e < 0) {
            fail(ErrorCode::InvalidArgument, "negative exponent in monomial");
        }
        total_ += e;
    }
}

Monomial Monomial::unit(std::size_t nvars, std::size_t var, int power)
{
    std::vector<int> e(nvars, 0);
    e.at(var) = power;
    return Monomial(std::move(e));
}

std::vector<std::size_t> Monomial::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] > 0) {
            out.push_back(i);
        }
    }
    return out;
}

bool Monomial::divides(const Monomial &o) const
{
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] > o.exps_[i]) {
            return false;
        }
    }
    return true;
}

Monomial Monomial::operator*(const Monomial &o) const
{
    Monomial m = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        m.exps_[i] += o.exps_[i];
    }
    m.total_ += o.total_;
    return m;
}

Monomial Monomial::quotient_of(const Monomial &o) const
{
    if (!divides(o)) {
        fail(ErrorCode::Internal, "monomial quotient requested for non-divisor");
    }
    Monomial m = o;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        m.exps_[i] -= exps_[i];
    }
    m.total_ -= total_;
    return m;
}

Monomial Monomial::with_exponent(std::size_t var, int e) const
{
    Monomial m = *this;
    m.total_ += e - m.exps_.at(var);
    m.exps_[var] = e;
    return m;
}

bool GrlexOrder::operator()(const Monomial &a, const Monomial &b) const
{
    if (a.total_degree() != b.total_degree()) {
        return a.total_degree() < b.total_degree();
    }
    return a.exponents() > b.exponents();
}

std::string monomial_string(const Context &context, const Monomial &m)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += kDot;
        }
        out += context->name(i);
        if (m[i] != 1) {
            out += "^" + std::to_string(m[i]);
        }
    }
    return out.empty() ? "1" : out;
}

// --- TruncatedSeries ---------------------------------------------------------

TruncatedSeries::TruncatedSeries(Ring ring, Context context, int truncation)
    : ring_(std::move(ring)), context_(std::move(context)), truncation_(truncation)
{
    if (truncation_ < 1) {
        fail(ErrorCode::InvalidArgument, "truncation must be positive");
    }
}

TruncatedSeries TruncatedSeries::zero(Ring ring, Context context, int truncation)
{
    return TruncatedSeries(std::move(ring), std::move(context), truncation);
}

TruncatedSeries TruncatedSeries::constant(const Coefficient &c, Context context, int truncation)
{
    TruncatedSeries s(c.ring(), std::move(context), truncation);
    s.add_term(Monomial(s.context_->size()), c);
    return s;
}

TruncatedSeries TruncatedSeries::one(Ring ring, Context context, int truncation)
{
    return constant(Coefficient::one(ring), std::move(context), truncation);
}

TruncatedSeries TruncatedSeries::variable(Ring ring, Context context, std::string_view name, int truncation)
{
    const auto idx = context->require_index(name);
    TruncatedSeries s(ring, context, truncation);
    s.add_term(Monomial::unit(context->size(), idx), Coefficient::one(ring));
    return s;
}

TruncatedSeries TruncatedSeries::monomial(const Coefficient &c, const Monomial &m, Context context, int truncation)
{
    if (m.size() != context->size()) {
        fail(ErrorCode::ContextMismatch, "monomial arity differs from context");
    }
    TruncatedSeries s(c.ring(), std::move(context), truncation);
    s.add_term(m, c);
    return s;
}

Coefficient TruncatedSeries::coefficient_of(const Monomial &m) const
{
    if (m.size() != context_->size()) {
        fail(ErrorCode::ContextMismatch, "monomial arity differs from context");
    }
    if (m.total_degree() >= truncation_) {
        fail(ErrorCode::OutOfTruncation, monomial_string(context_, m) + " is at or beyond truncation "
                                             + std::to_string(truncation_));
    }
    const auto it = terms_.find(m);
    return it == terms_.end() ? Coefficient::zero(ring_) : it->second;
}

Coefficient TruncatedSeries::constant_term() const
{
    return coefficient_of(Monomial(context_->size()));
}

void TruncatedSeries::add_term(const Monomial &m, const Coefficient &c)
{
    if (m.total_degree() >= truncation_ || c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

void TruncatedSeries::check_compatible(const TruncatedSeries &o, std::string_view where) const
{
    if (!same_context(context_, o.context_)) {
        fail(ErrorCode::ContextMismatch, std::string(where) + ": series live in different variable contexts");
    }
    require_same_ring(ring_, o.ring_, where);
}

TruncatedSeries TruncatedSeries::operator-() const
{
    TruncatedSeries out = *this;
    for (auto &[m, c] : out.terms_) {
        c = -c;
    }
    return out;
}

TruncatedSeries &TruncatedSeries::operator+=(const TruncatedSeries &o)
{
    check_compatible(o, "series add");
    if (o.truncation_ < truncation_) {
        *this = truncated(o.truncation_);
    }
    for (const auto &[m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

TruncatedSeries &TruncatedSeries::operator-=(const TruncatedSeries &o)
{
    check_compatible(o, "series subtract");
    if (o.truncation_ < truncation_) {
        *this = truncated(o.truncation_);
    }
    for (const auto &[m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b)
{
    a.check_compatible(b, "series multiply");
    const int trunc = std::min(a.truncation_, b.truncation_);
    if (b.terms_.size() == 1) {
        const auto &[m, c] = *b.terms_.begin();
        return a.truncated(trunc).times_monomial(m, c);
    }
    if (a.terms_.size() == 1) {
        const auto &[m, c] = *a.terms_.begin();
        return b.truncated(trunc).times_monomial(m, c);
    }
    TruncatedSeries out(a.ring_, a.context_, trunc);
    // Terms are ordered by total degree, so both loops can stop early.
    for (const auto &[ma, ca] : a.terms_) {
        if (ma.total_degree() >= trunc) {
            break;
        }
        for (const auto &[mb, cb] : b.terms_) {
            if (ma.total_degree() + mb.total_degree() >= trunc) {
                break;
            }
            out.add_term(ma * mb, ca * cb);
        }
    }
    return out;
}

TruncatedSeries &TruncatedSeries::operator*=(const TruncatedSeries &o)
{
    *this = *this * o;
    return *this;
}

TruncatedSeries TruncatedSeries::scaled(const Coefficient &c) const
{
    require_same_ring(ring_, c.ring(), "series scale");
    TruncatedSeries out(ring_, context_, truncation_);
    for (const auto &[m, x] : terms_) {
        auto y = x * c;
        if (!y.is_zero()) {
            out.terms_.emplace_hint(out.terms_.end(), m, std::move(y));
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::times_monomial(const Monomial &m, const Coefficient &c) const
{
    require_same_ring(ring_, c.ring(), "series monomial multiply");
    TruncatedSeries out(ring_, context_, truncation_);
    if (c.is_zero()) {
        return out;
    }
    // Multiplying by a monomial preserves the grlex order, so hints stay valid.
    for (const auto &[x, coef] : terms_) {
        if (x.total_degree() + m.total_degree() >= truncation_) {
            break;
        }
        auto y = coef * c;
        if (!y.is_zero()) {
            out.terms_.emplace_hint(out.terms_.end(), x * m, std::move(y));
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::pow(unsigned e) const
{
    TruncatedSeries result = one(ring_, context_, truncation_);
    for (unsigned i = 0; i < e; ++i) {
        result *= *this;
    }
    return result;
}

TruncatedSeries TruncatedSeries::truncated(int truncation) const
{
    TruncatedSeries out(ring_, context_, std::min(truncation, truncation_));
    for (const auto &[m, c] : terms_) {
        if (m.total_degree() >= out.truncation_) {
            break;
        }
        out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::specialize_zero(const std::vector<std::string> &names) const
{
    std::vector<std::size_t> idx;
    for (const auto &n : names) {
        idx.push_back(context_->require_index(n));
    }
    return filtered([&](const Monomial &m) {
        return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return m[i] == 0; });
    });
}

TruncatedSeries TruncatedSeries::embed(Context target) const
{
    std::vector<std::optional<std::size_t>> map(context_->size());
    for (std::size_t i = 0; i < context_->size(); ++i) {
        map[i] = target->index_of(context_->name(i));
    }
    TruncatedSeries out(ring_, target, truncation_);
    for (const auto &[m, c] : terms_) {
        std::vector<int> e(target->size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (!map[i]) {
                fail(ErrorCode::ContextMismatch, "variable " + context_->name(i) + " missing from target context");
            }
            e[*map[i]] = m[i];
        }
        out.add_term(Monomial(std::move(e)), c);
    }
    return out;
}

bool TruncatedSeries::is_homogeneous_of(int degree) const
{
    for (const auto &[m, c] : terms_) {
        long d = c.degree();
        for (std::size_t i = 0; i < m.size(); ++i) {
            d += static_cast<long>(m[i]) * context_->degrees()[i];
        }
        if (ring_->reduce_degree(d) != ring_->reduce_degree(degree)) {
            return false;
        }
    }
    return true;
}

bool TruncatedSeries::operator==(const TruncatedSeries &o) const
{
    return truncation_ == o.truncation_ && same_context(context_, o.context_) && same_ring(ring_, o.ring_)
           && terms_ == o.terms_;
}

std::string TruncatedSeries::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        std::string term;
        const std::string cs = c.to_string();
        if (m.total_degree() == 0) {
            term = c.terms().size() > 1 && !first ? "(" + cs + ")" : cs;
        } else {
            const std::string ms = monomial_string(context_, m);
            if (c.is_one()) {
                term = ms;
            } else if ((-c).is_one()) {
                term = "-" + ms;
            } else if (c.terms().size() == 1) {
                term = cs + kDot + ms;
            } else {
                term = "(" + cs + ")" + kDot + ms;
            }
        }
        if (first) {
            out = term;
        } else if (term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
        first = false;
    }
    return out;
}

std::ostream &operator<<(std::ostream &os, const TruncatedSeries &s)
{
    return os << s.to_string();
}

Verdict compare_series(const TruncatedSeries &actual, const TruncatedSeries &expected)
{
    if (!same_context(actual.context(), expected.context())) {
        fail(ErrorCode::ContextMismatch, "compared series live in different variable contexts");
    }
    const int trunc = std::min(actual.truncation(), expected.truncation());
    const auto diff = actual.truncated(trunc) - expected.truncated(trunc);
    if (diff.is_zero()) {
        return {};
    }
    const auto &[m, c] = *diff.terms().begin();
    const auto ms = m.total_degree() == 0 ? std::string("1") : monomial_string(actual.context(), m);
    return {false, ms,
            "coefficient of " + ms + " is " + actual.coefficient_of(m).to_string() + ", expected "
                + expected.coefficient_of(m).to_string()};
}

Coefficient coefficient_of(const TruncatedSeries &s, const Monomial &m)
{
    return s.coefficient_of(m);
}

// --- composition -------------------------------------------------------------

namespace
{

class Composer
{
public:
    Composer(std::vector<TruncatedSeries> images, Ring ring, Context ctx, int trunc)
        : images_(std::move(images)), ring_(std::move(ring)), ctx_(std::move(ctx)), trunc_(trunc),
          powers_(images_.size())
    {
        for (auto &img : images_) {
            img = img.truncated(trunc_);
        }
    }

    using Term = std::pair<const Monomial *, const Coefficient *>;

    TruncatedSeries eval(std::vector<Term> &terms, std::size_t var)
    {
        TruncatedSeries acc(ring_, ctx_, trunc_);
        if (var == images_.size()) {
            for (const auto &[m, c] : terms) {
                acc.add_term(Monomial(ctx_->size()), *c);
            }
            return acc;
        }
        std::stable_sort(terms.begin(), terms.end(),
                         [var](const Term &a, const Term &b) { return (*a.first)[var] < (*b.first)[var]; });
        std::size_t i = 0;
        while (i < terms.size()) {
            const int e = (*terms[i].first)[var];
            std::size_t k = i;
            while (k < terms.size() && (*terms[k].first)[var] == e) {
                ++k;
            }
            // Every image has zero constant term, so x^e contributes in degree >= e.
            if (e < trunc_) {
                std::vector<Term> group(terms.begin() + static_cast<std::ptrdiff_t>(i),
                                        terms.begin() + static_cast<std::ptrdiff_t>(k));
                TruncatedSeries sub = eval(group, var + 1);
                if (e > 0 && !sub.is_zero()) {
                    sub *= power(var, e);
                }
                acc += sub;
            }
            i = k;
        }
        return acc;
    }

private:
    const TruncatedSeries &power(std::size_t var, int e)
    {
        auto &cache = powers_[var];
        if (cache.empty()) {
            cache.push_back(TruncatedSeries::one(ring_, ctx_, trunc_));
        }
        while (static_cast<int>(cache.size()) <= e) {
            cache.push_back(cache.back() * images_[var]);
        }
        return cache[static_cast<std::size_t>(e)];
    }

    std::vector<TruncatedSeries> images_;
    Ring ring_;
    Context ctx_;
    int trunc_;
    std::vector<std::vector<TruncatedSeries>> powers_;
};

} // namespace

TruncatedSeries substitute(const TruncatedSeries &target, const std::map<std::string, TruncatedSeries> &assignments)
{
    Context result_ctx = target.context();
    int trunc = target.truncation();
    bool first = true;
    for (const auto &[name, s] : assignments) {
        target.context()->require_index(name);
        if (first) {
            result_ctx = s.context();
            first = false;
        } else if (!same_context(result_ctx, s.context())) {
            fail(ErrorCode::ContextMismatch, "substituted series must share one context");
        }
        require_same_ring(target.ring(), s.ring(), "substitute");
        if (!s.constant_term().is_zero()) {
            fail(ErrorCode::NonzeroConstantTerm, "series substituted for " + name + " has a constant term");
        }
        trunc = std::min(trunc, s.truncation());
    }

    const auto &tctx = target.context();
    std::vector<TruncatedSeries> images;
    images.reserve(tctx->size());
    for (std::size_t i = 0; i < tctx->size(); ++i) {
        const auto it = assignments.find(tctx->name(i));
        if (it != assignments.end()) {
            images.push_back(it->second);
            continue;
        }
        const auto idx = result_ctx->index_of(tctx->name(i));
        if (idx) {
            images.push_back(TruncatedSeries::variable(target.ring(), result_ctx, tctx->name(i), trunc));
        } else {
            // Only an error if the variable actually occurs.
            const bool occurs = std::any_of(target.terms().begin(), target.terms().end(),
                                            [i](const auto &t) { return t.first[i] > 0; });
            if (occurs) {
                fail(ErrorCode::ContextMismatch, "variable " + tctx->name(i) + " has no image");
            }
            images.push_back(TruncatedSeries::zero(target.ring(), result_ctx, trunc));
        }
    }

    Composer composer(std::move(images), target.ring(), result_ctx, trunc);
    std::vector<Composer::Term> terms;
    terms.reserve(target.size());
    for (const auto &[m, c] : target.terms()) {
        terms.emplace_back(&m, &c);
    }
    return composer.eval(terms, 0);
}

TruncatedSeries reversion(const TruncatedSeries &s, std::string_view variable)
{
    const auto &ctx = s.context();
    const std::size_t v = ctx->require_index(variable);
    for (const auto &[m, c] : s.terms()) {
        if (m.total_degree() != m[v]) {
            fail(ErrorCode::InvalidArgument, "reversion needs a series in " + std::string(variable) + " only");
        }
    }
    if (!s.constant_term().is_zero()) {
        fail(ErrorCode::NonzeroConstantTerm, "reversion of a series with constant term");
    }
    const int trunc = s.truncation();
    if (trunc < 2) {
        return s;
    }
    const Coefficient lin = s.coefficient_of(Monomial::unit(ctx->size(), v));
    if (!lin.is_unit()) {
        fail(ErrorCode::NonUnitLinearTerm, "linear coefficient " + lin.to_string() + " is not a unit");
    }
    const Coefficient inv = lin.inverse();
    const auto x = TruncatedSeries::variable(s.ring(), ctx, variable, trunc);

    // Horner evaluation of s at a series with zero constant term.
    auto compose = [&](const TruncatedSeries &t) {
        TruncatedSeries acc(s.ring(), ctx, trunc);
        for (int k = trunc - 1; k >= 1; --k) {
            const auto c = s.coefficient_of(Monomial::unit(ctx->size(), v, k));
            if (!c.is_zero()) {
                acc.add_term(Monomial(ctx->size()), c);
            }
            acc *= t;
        }
        return acc;
    };

    // Each correction step fixes one more degree.
    TruncatedSeries t = x.scaled(inv);
    for (int iter = 1; iter < trunc; ++iter) {
        t -= (compose(t) - x).scaled(inv);
    }
    return t;
}

// --- JSON --------------------------------------------------------------------

nlohmann::json context_to_json(const Context &context)
{
    return {{"names", context->names()}, {"degrees", context->degrees()}};
}

Context context_from_json(const nlohmann::json &j)
{
    try {
        return VariableContext::make(j.at("names").get<std::vector<std::string>>(),
                                     j.at("degrees").get<std::vector<int>>());
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("context: ") + e.what());
    }
}

nlohmann::json series_to_json(const TruncatedSeries &s)
{
    auto terms = nlohmann::json::array();
    for (const auto &[m, c] : s.terms()) {
        terms.push_back(nlohmann::json::array({m.exponents(), c.to_string()}));
    }
    return {{"ring", ring_to_json(s.ring())},
            {"context", context_to_json(s.context())},
            {"truncation", s.truncation()},
            {"terms", terms}};
}

TruncatedSeries series_from_json(const nlohmann::json &j)
{
    try {
        const Ring ring = ring_from_json(j.at("ring"));
        const Context ctx = context_from_json(j.at("context"));
        TruncatedSeries s(ring, ctx, j.at("truncation").get<int>());
        for (const auto &t : j.at("terms")) {
            auto e = t.at(0).get<std::vector<int>>();
            if (e.size() != ctx->size()) {
                fail(ErrorCode::SchemaError, "term exponent vector has wrong length");
            }
            Monomial m(std::move(e));
            if (m.total_degree() >= s.truncation()) {
                fail(ErrorCode::SchemaError, "term beyond truncation");
            }
            s.add_term(m, Coefficient::parse(ring, t.at(1).get<std::string>()));
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("series: ") + e.what());
    }
}

} // namespace fgw
