#include <fgw/coeff.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fgw
{

namespace
{

const std::string kDot = "\xC2\xB7"; // U+00B7 MIDDLE DOT

std::vector<Generator> flatten(const Ring &base, const std::vector<Generator> &own)
{
    std::vector<Generator> out;
    if (base) {
        out = base->generators();
    }
    out.insert(out.end(), own.begin(), own.end());
    return out;
}

std::string grading_name(Grading g)
{
    return g == Grading::Z ? "Z" : "Z2";
}

} // namespace

bool is_prime(long p)
{
    if (p < 2) {
        return false;
    }
    for (long d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

Ring GradedRingSpec::rationals(Grading grading)
{
    auto r = std::shared_ptr<GradedRingSpec>(new GradedRingSpec());
    r->kind_ = RingKind::Rationals;
    r->grading_ = grading;
    r->scalar_ = ScalarKind::Rational;
    return r;
}

Ring GradedRingSpec::integers(Grading grading)
{
    auto r = std::shared_ptr<GradedRingSpec>(new GradedRingSpec());
    r->kind_ = RingKind::Integers;
    r->grading_ = grading;
    r->scalar_ = ScalarKind::Integer;
    return r;
}

Ring GradedRingSpec::prime_field(long p, Grading grading)
{
    if (!is_prime(p)) {
        fail(ErrorCode::InvalidArgument, "prime field characteristic " + std::to_string(p) + " is not prime");
    }
    auto r = std::shared_ptr<GradedRingSpec>(new GradedRingSpec());
    r->kind_ = RingKind::PrimeField;
    r->grading_ = grading;
    r->scalar_ = ScalarKind::Modular;
    r->p_ = p;
    return r;
}

Ring GradedRingSpec::morava(long p, int height, Grading grading)
{
    if (!is_prime(p)) {
        fail(ErrorCode::InvalidArgument, "Morava prime " + std::to_string(p) + " is not prime");
    }
    if (height < 1) {
        fail(ErrorCode::InvalidArgument, "Morava height must be >= 1");
    }
    long q = 1;
    for (int i = 0; i < height; ++i) {
        q *= p;
    }
    auto r = std::shared_ptr<GradedRingSpec>(new GradedRingSpec());
    r->kind_ = RingKind::LaurentGraded;
    r->grading_ = grading;
    r->scalar_ = ScalarKind::Modular;
    r->p_ = p;
    r->height_ = height;
    r->own_ = {Generator{"v", static_cast<int>(2 * (q - 1)), true}};
    r->generators_ = r->own_;
    return r;
}

Ring GradedRingSpec::polynomial_extension(Ring base, const std::vector<std::pair<std::string, int>> &generators,
                                          Grading grading)
{
    if (!base) {
        fail(ErrorCode::InvalidArgument, "polynomial extension needs a base ring");
    }
    auto r = std::shared_ptr<GradedRingSpec>(new GradedRingSpec());
    r->kind_ = RingKind::PolynomialExtension;
    r->grading_ = grading;
    r->scalar_ = base->scalar_;
    r->p_ = base->p_;
    r->base_ = base;
    for (const auto &[name, degree] : generators) {
        if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
            fail(ErrorCode::InvalidArgument, "generator name '" + name + "' must start with a letter");
        }
        if (degree % 2 != 0) {
            fail(ErrorCode::InvalidArgument, "generator " + name + " must have even degree");
        }
        r->own_.push_back(Generator{name, degree, false});
    }
    r->generators_ = flatten(base, r->own_);
    for (std::size_t i = 0; i < r->generators_.size(); ++i) {
        for (std::size_t k = i + 1; k < r->generators_.size(); ++k) {
            if (r->generators_[i].name == r->generators_[k].name) {
                fail(ErrorCode::InvalidArgument, "duplicate generator name " + r->generators_[i].name);
            }
        }
    }
    return r;
}

std::optional<std::size_t> GradedRingSpec::generator_index(std::string_view name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (generators_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

int GradedRingSpec::reduce_degree(long degree) const
{
    if (grading_ == Grading::Z2) {
        return static_cast<int>(((degree % 2) + 2) % 2);
    }
    if (degree > INT_MAX || degree < INT_MIN) {
        fail(ErrorCode::InvalidArgument, "degree out of range");
    }
    return static_cast<int>(degree);
}

std::string GradedRingSpec::describe() const
{
    std::string out;
    switch (kind_) {
    case RingKind::Rationals: out = "Q"; break;
    case RingKind::Integers: out = "Z"; break;
    case RingKind::PrimeField: out = "F_" + std::to_string(p_); break;
    case RingKind::LaurentGraded:
        out = "F_" + std::to_string(p_) + "[v,v^-1] |v|=" + std::to_string(own_[0].degree);
        break;
    case RingKind::PolynomialExtension: {
        out = base_->describe() + "[";
        for (std::size_t i = 0; i < own_.size(); ++i) {
            out += (i ? "," : "") + own_[i].name;
        }
        out += "]";
        break;
    }
    }
    if (grading_ == Grading::Z2) {
        out += " (Z/2-graded)";
    }
    return out;
}

bool GradedRingSpec::operator==(const GradedRingSpec &o) const
{
    if (kind_ != o.kind_ || grading_ != o.grading_ || p_ != o.p_ || height_ != o.height_ || own_ != o.own_) {
        return false;
    }
    if (static_cast<bool>(base_) != static_cast<bool>(o.base_)) {
        return false;
    }
    return !base_ || *base_ == *o.base_;
}

bool same_ring(const Ring &a, const Ring &b)
{
    if (a == b) {
        return true;
    }
    if (!a || !b) {
        return false;
    }
    return *a == *b;
}

void require_same_ring(const Ring &a, const Ring &b, std::string_view where)
{
    if (!same_ring(a, b)) {
        fail(ErrorCode::RingMismatch, std::string(where) + ": " + (a ? a->describe() : "<none>") + " vs "
                                          + (b ? b->describe() : "<none>"));
    }
}

Ring with_grading(const Ring &ring, Grading grading)
{
    switch (ring->kind()) {
    case RingKind::Rationals: return GradedRingSpec::rationals(grading);
    case RingKind::Integers: return GradedRingSpec::integers(grading);
    case RingKind::PrimeField: return GradedRingSpec::prime_field(ring->characteristic(), grading);
    case RingKind::LaurentGraded: return GradedRingSpec::morava(ring->characteristic(), ring->height(), grading);
    case RingKind::PolynomialExtension: {
        std::vector<std::pair<std::string, int>> gens;
        for (const auto &g : ring->own_generators()) {
            gens.emplace_back(g.name, g.degree);
        }
        return GradedRingSpec::polynomial_extension(with_grading(ring->base(), grading), gens, grading);
    }
    }
    return ring;
}

Ring with_field_scalars(const Ring &ring)
{
    switch (ring->kind()) {
    case RingKind::Integers: return GradedRingSpec::rationals(ring->grading());
    case RingKind::PolynomialExtension: {
        std::vector<std::pair<std::string, int>> gens;
        for (const auto &g : ring->own_generators()) {
            gens.emplace_back(g.name, g.degree);
        }
        return GradedRingSpec::polynomial_extension(with_field_scalars(ring->base()), gens, ring->grading());
    }
    default: return ring;
    }
}

nlohmann::json ring_to_json(const Ring &ring)
{
    nlohmann::json j;
    j["grading"] = grading_name(ring->grading());
    switch (ring->kind()) {
    case RingKind::Rationals: j["kind"] = "rationals"; break;
    case RingKind::Integers: j["kind"] = "integers"; break;
    case RingKind::PrimeField:
        j["kind"] = "prime_field";
        j["p"] = ring->characteristic();
        break;
    case RingKind::LaurentGraded:
        j["kind"] = "laurent";
        j["p"] = ring->characteristic();
        j["n"] = ring->height();
        break;
    case RingKind::PolynomialExtension: {
        j["kind"] = "polynomial";
        j["base"] = ring_to_json(ring->base());
        auto gens = nlohmann::json::array();
        for (const auto &g : ring->own_generators()) {
            gens.push_back(nlohmann::json::array({g.name, g.degree}));
        }
        j["generators"] = gens;
        break;
    }
    }
    return j;
}

Ring ring_from_json(const nlohmann::json &j)
{
    try {
        const Grading grading = j.at("grading").get<std::string>() == "Z2" ? Grading::Z2 : Grading::Z;
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "rationals") {
            return GradedRingSpec::rationals(grading);
        }
        if (kind == "integers") {
            return GradedRingSpec::integers(grading);
        }
        if (kind == "prime_field") {
            return GradedRingSpec::prime_field(j.at("p").get<long>(), grading);
        }
        if (kind == "laurent") {
            return GradedRingSpec::morava(j.at("p").get<long>(), j.at("n").get<int>(), grading);
        }
        if (kind == "polynomial") {
            std::vector<std::pair<std::string, int>> gens;
            for (const auto &g : j.at("generators")) {
                gens.emplace_back(g.at(0).get<std::string>(), g.at(1).get<int>());
            }
            return GradedRingSpec::polynomial_extension(ring_from_json(j.at("base")), gens, grading);
        }
        fail(ErrorCode::SchemaError, "unknown ring kind '" + kind + "'");
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("ring: ") + e.what());
    }
}

// --- Coefficient -----------------------------------------------------------

namespace
{

bool scalar_invertible(ScalarKind kind, const mpq_class &v)
{
    switch (kind) {
    case ScalarKind::Rational:
    case ScalarKind::Modular: return v != 0;
    case ScalarKind::Integer: return v == 1 || v == -1;
    }
    return false;
}

mpq_class scalar_inverse(const Ring &ring, const mpq_class &v)
{
    if (ring->scalar_kind() == ScalarKind::Modular) {
        mpz_class inv;
        mpz_class p = ring->characteristic();
        if (mpz_invert(inv.get_mpz_t(), v.get_num().get_mpz_t(), p.get_mpz_t()) == 0) {
            fail(ErrorCode::NotInvertible, "residue not invertible");
        }
        return mpq_class(inv);
    }
    return mpq_class(1) / v;
}

// Brings a scalar into the canonical representative of the ring's scalar layer.
void normalize_scalar(const Ring &ring, mpq_class &v)
{
    switch (ring->scalar_kind()) {
    case ScalarKind::Rational: v.canonicalize(); return;
    case ScalarKind::Integer:
        v.canonicalize();
        if (v.get_den() != 1) {
            fail(ErrorCode::InvalidArgument, "non-integral value " + v.get_str() + " in " + ring->describe());
        }
        return;
    case ScalarKind::Modular: {
        v.canonicalize();
        const mpz_class p = ring->characteristic();
        mpz_class num = v.get_num();
        mpz_class den = v.get_den();
        if (den != 1) {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0) {
                fail(ErrorCode::NotPIntegral, "value " + v.get_str() + " has denominator divisible by "
                                                  + std::to_string(ring->characteristic()));
            }
            num *= inv;
        }
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
        v = mpq_class(r);
        return;
    }
    }
}

} // namespace

void Coefficient::canonicalize()
{
    const auto &gens = ring_->generators();
    for (auto &t : terms_) {
        if (t.exponents.size() != gens.size()) {
            fail(ErrorCode::InvalidArgument, "exponent vector has wrong length for " + ring_->describe());
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (t.exponents[i] < 0 && !gens[i].invertible) {
                fail(ErrorCode::InvalidArgument, "negative power of non-invertible generator " + gens[i].name);
            }
        }
        normalize_scalar(ring_, t.value);
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const CoefficientTerm &a, const CoefficientTerm &b) { return a.exponents < b.exponents; });
    std::vector<CoefficientTerm> merged;
    merged.reserve(terms_.size());
    for (auto &t : terms_) {
        if (!merged.empty() && merged.back().exponents == t.exponents) {
            merged.back().value += t.value;
            normalize_scalar(ring_, merged.back().value);
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const CoefficientTerm &t) { return t.value == 0; });
    terms_ = std::move(merged);

    if (!terms_.empty()) {
        std::optional<int> deg;
        for (const auto &t : terms_) {
            long d = 0;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                d += static_cast<long>(t.exponents[i]) * gens[i].degree;
            }
            const int rd = ring_->reduce_degree(d);
            if (deg && *deg != rd) {
                fail(ErrorCode::DegreeMismatch, "inhomogeneous coefficient in " + ring_->describe());
            }
            deg = rd;
        }
        degree_ = *deg;
    }
}

Coefficient Coefficient::zero(Ring ring, long degree)
{
    Coefficient c;
    c.degree_ = ring->reduce_degree(degree);
    c.ring_ = std::move(ring);
    return c;
}

Coefficient Coefficient::one(Ring ring)
{
    return from_integer(std::move(ring), 1);
}

Coefficient Coefficient::from_integer(Ring ring, long long value)
{
    return from_rational(std::move(ring), mpq_class(mpz_class(std::to_string(value))));
}

Coefficient Coefficient::from_rational(Ring ring, const mpq_class &value)
{
    std::vector<CoefficientTerm> terms;
    terms.push_back({Exponents(ring->generators().size(), 0), value});
    return from_terms(std::move(ring), std::move(terms));
}

Coefficient Coefficient::generator(Ring ring, std::string_view name, int power)
{
    const auto idx = ring->generator_index(name);
    if (!idx) {
        fail(ErrorCode::InvalidArgument, "ring " + ring->describe() + " has no generator " + std::string(name));
    }
    Exponents e(ring->generators().size(), 0);
    e[*idx] = power;
    std::vector<CoefficientTerm> terms;
    terms.push_back({std::move(e), mpq_class(1)});
    return from_terms(std::move(ring), std::move(terms));
}

Coefficient Coefficient::from_terms(Ring ring, std::vector<CoefficientTerm> terms, long zero_degree)
{
    Coefficient c;
    c.degree_ = ring->reduce_degree(zero_degree);
    c.ring_ = std::move(ring);
    c.terms_ = std::move(terms);
    c.canonicalize();
    return c;
}

bool Coefficient::is_one() const
{
    return terms_.size() == 1 && terms_[0].value == 1
           && std::all_of(terms_[0].exponents.begin(), terms_[0].exponents.end(), [](int e) { return e == 0; });
}

std::optional<mpq_class> Coefficient::scalar_value() const
{
    if (terms_.empty()) {
        return mpq_class(0);
    }
    if (terms_.size() == 1
        && std::all_of(terms_[0].exponents.begin(), terms_[0].exponents.end(), [](int e) { return e == 0; })) {
        return terms_[0].value;
    }
    return std::nullopt;
}

bool Coefficient::is_unit() const
{
    if (terms_.size() != 1 || !scalar_invertible(ring_->scalar_kind(), terms_[0].value)) {
        return false;
    }
    const auto &gens = ring_->generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (terms_[0].exponents[i] != 0 && !gens[i].invertible) {
            return false;
        }
    }
    return true;
}

Coefficient Coefficient::inverse() const
{
    if (!is_unit()) {
        fail(ErrorCode::NotInvertible, to_string() + " is not a unit in " + ring_->describe());
    }
    CoefficientTerm t = terms_[0];
    for (auto &e : t.exponents) {
        e = -e;
    }
    t.value = scalar_inverse(ring_, t.value);
    return from_terms(ring_, {std::move(t)});
}

Coefficient Coefficient::pow(unsigned e) const
{
    Coefficient result = one(ring_);
    Coefficient base = *this;
    while (e) {
        if (e & 1U) {
            result *= base;
        }
        e >>= 1U;
        if (e) {
            base *= base;
        }
    }
    return result;
}

Coefficient Coefficient::operator-() const
{
    Coefficient c = *this;
    for (auto &t : c.terms_) {
        t.value = -t.value;
        normalize_scalar(ring_, t.value);
    }
    return c;
}

Coefficient &Coefficient::operator+=(const Coefficient &o)
{
    require_same_ring(ring_, o.ring_, "coefficient add");
    if (o.is_zero()) {
        return *this;
    }
    if (is_zero()) {
        terms_ = o.terms_;
        degree_ = o.degree_;
        return *this;
    }
    if (degree_ != o.degree_) {
        fail(ErrorCode::DegreeMismatch,
             "adding degree " + std::to_string(degree_) + " and degree " + std::to_string(o.degree_));
    }
    // Both sides are sorted; merge.
    std::vector<CoefficientTerm> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0;
    std::size_t k = 0;
    while (i < terms_.size() || k < o.terms_.size()) {
        if (k == o.terms_.size() || (i < terms_.size() && terms_[i].exponents < o.terms_[k].exponents)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || o.terms_[k].exponents < terms_[i].exponents) {
            out.push_back(o.terms_[k++]);
        } else {
            CoefficientTerm t = std::move(terms_[i++]);
            t.value += o.terms_[k++].value;
            normalize_scalar(ring_, t.value);
            if (t.value != 0) {
                out.push_back(std::move(t));
            }
        }
    }
    terms_ = std::move(out);
    return *this;
}

Coefficient &Coefficient::operator-=(const Coefficient &o)
{
    return *this += -o;
}

Coefficient operator*(const Coefficient &a, const Coefficient &b)
{
    require_same_ring(a.ring_, b.ring_, "coefficient multiply");
    Coefficient c;
    c.ring_ = a.ring_;
    c.degree_ = a.ring_->reduce_degree(static_cast<long>(a.degree_) + b.degree_);
    if (a.is_zero() || b.is_zero()) {
        return c;
    }
    if (a.terms_.size() == 1 && b.terms_.size() == 1) {
        CoefficientTerm t{a.terms_[0].exponents, a.terms_[0].value * b.terms_[0].value};
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            t.exponents[i] += b.terms_[0].exponents[i];
        }
        normalize_scalar(c.ring_, t.value);
        if (t.value != 0) {
            c.terms_.push_back(std::move(t));
        }
        return c;
    }
    c.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto &x : a.terms_) {
        for (const auto &y : b.terms_) {
            CoefficientTerm t{x.exponents, x.value * y.value};
            for (std::size_t i = 0; i < t.exponents.size(); ++i) {
                t.exponents[i] += y.exponents[i];
            }
            c.terms_.push_back(std::move(t));
        }
    }
    c.canonicalize();
    return c;
}

Coefficient &Coefficient::operator*=(const Coefficient &o)
{
    *this = *this * o;
    return *this;
}

bool Coefficient::operator==(const Coefficient &o) const
{
    return same_ring(ring_, o.ring_) && terms_ == o.terms_;
}

Coefficient Coefficient::map_to(const Ring &target) const
{
    if (same_ring(ring_, target)) {
        return *this;
    }
    const auto &src_gens = ring_->generators();
    const auto from = ring_->scalar_kind();
    const auto to = target->scalar_kind();
    if (from == ScalarKind::Modular && (to != ScalarKind::Modular || ring_->characteristic() != target->characteristic())) {
        fail(ErrorCode::RingMismatch, "cannot map " + ring_->describe() + " into " + target->describe());
    }
    std::vector<CoefficientTerm> out;
    for (const auto &t : terms_) {
        Exponents e(target->generators().size(), 0);
        for (std::size_t i = 0; i < src_gens.size(); ++i) {
            if (t.exponents[i] == 0) {
                continue;
            }
            const auto idx = target->generator_index(src_gens[i].name);
            if (!idx) {
                fail(ErrorCode::RingMismatch, "generator " + src_gens[i].name + " missing in " + target->describe());
            }
            e[*idx] = t.exponents[i];
        }
        out.push_back({std::move(e), t.value});
    }
    return from_terms(target, std::move(out), degree_);
}

namespace
{

std::string monomial_string(const Ring &ring, const Exponents &e)
{
    std::string out;
    const auto &gens = ring->generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += kDot;
        }
        out += gens[i].name;
        if (e[i] != 1) {
            out += "^" + std::to_string(e[i]);
        }
    }
    return out;
}

} // namespace

std::string Coefficient::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto &t = terms_[k];
        const std::string mono = monomial_string(ring_, t.exponents);
        std::string term;
        if (mono.empty()) {
            term = t.value.get_str();
        } else if (t.value == 1) {
            term = mono;
        } else if (t.value == -1) {
            term = "-" + mono;
        } else {
            term = t.value.get_str() + kDot + mono;
        }
        if (k == 0) {
            out = term;
        } else if (term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

std::ostream &operator<<(std::ostream &os, const Coefficient &c)
{
    return os << c.to_string();
}

namespace
{

class CoefficientParser
{
public:
    CoefficientParser(const Ring &ring, std::string_view text) : ring_(ring)
    {
        // Canonical rendering uses U+00B7 for products; accept '*' as well.
        std::string s(text);
        for (std::size_t pos = s.find(kDot); pos != std::string::npos; pos = s.find(kDot)) {
            s.replace(pos, kDot.size(), "*");
        }
        for (char c : s) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                src_ += c;
            }
        }
    }

    std::vector<CoefficientTerm> parse()
    {
        if (src_.empty()) {
            error("empty coefficient");
        }
        std::vector<CoefficientTerm> terms;
        bool first = true;
        while (pos_ < src_.size() || first) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1 : 1;
            } else if (!first) {
                error("expected '+' or '-'");
            }
            first = false;
            auto t = term();
            if (sign < 0) {
                t.value = -t.value;
            }
            terms.push_back(std::move(t));
        }
        return terms;
    }

private:
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char get() { return src_[pos_++]; }

    [[noreturn]] void error(const std::string &msg) const
    {
        fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + src_ + "'");
    }

    mpz_class integer()
    {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        if (start == pos_) {
            error("expected digits");
        }
        return mpz_class(src_.substr(start, pos_ - start));
    }

    CoefficientTerm term()
    {
        CoefficientTerm t{Exponents(ring_->generators().size(), 0), mpq_class(1)};
        while (true) {
            factor(t);
            if (peek() != '*') {
                break;
            }
            ++pos_;
        }
        return t;
    }

    void factor(CoefficientTerm &t)
    {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = integer();
            mpz_class den = 1;
            if (peek() == '/') {
                ++pos_;
                den = integer();
                if (den == 0) {
                    error("zero denominator");
                }
            }
            t.value *= mpq_class(num, den);
            t.value.canonicalize();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                ++pos_;
            }
            const std::string name = src_.substr(start, pos_ - start);
            const auto idx = ring_->generator_index(name);
            if (!idx) {
                error("unknown generator '" + name + "'");
            }
            int e = 1;
            if (peek() == '^') {
                ++pos_;
                int sign = 1;
                if (peek() == '-') {
                    ++pos_;
                    sign = -1;
                }
                e = sign * static_cast<int>(integer().get_si());
            }
            t.exponents[*idx] += e;
            return;
        }
        error("unexpected character");
    }

    const Ring &ring_;
    std::string src_;
    std::size_t pos_ = 0;
};

} // namespace

Coefficient Coefficient::parse(Ring ring, std::string_view text, long zero_degree)
{
    auto terms = CoefficientParser(ring, text).parse();
    return from_terms(std::move(ring), std::move(terms), zero_degree);
}

int p_adic_valuation(const mpq_class &q, long p)
{
    if (q == 0) {
        return INT_MAX;
    }
    auto val = [p](mpz_class z) {
        int v = 0;
        const mpz_class pp = p;
        while (mpz_divisible_p(z.get_mpz_t(), pp.get_mpz_t())) {
            z /= pp;
            ++v;
        }
        return v;
    };
    return val(q.get_num()) - val(q.get_den());
}

PIntegrality check_p_integral(const Coefficient &a, long p)
{
    if (a.ring()->kind() != RingKind::Rationals) {
        fail(ErrorCode::RingMismatch, "p-integrality is defined for coefficients over Q");
    }
    if (!is_prime(p)) {
        fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    }
    PIntegrality out;
    const mpq_class v = a.is_zero() ? mpq_class(0) : a.terms()[0].value;
    out.valuation = p_adic_valuation(v, p);
    out.integral = out.valuation >= 0;
    if (out.integral) {
        out.image = Coefficient::from_rational(GradedRingSpec::prime_field(p, a.ring()->grading()), v);
    }
    return out;
}

Coefficient reduce_mod_p(const Coefficient &a, long p, Ring target)
{
    const auto r = check_p_integral(a, p);
    if (!r.integral) {
        fail(ErrorCode::NotPIntegral,
             a.to_string() + " has " + std::to_string(p) + "-adic valuation " + std::to_string(r.valuation));
    }
    if (!target) {
        return *r.image;
    }
    return r.image->map_to(target);
}

} // namespace fgw
