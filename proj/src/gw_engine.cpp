#include <fgw/gw_engine.hpp>

#include <algorithm>
#include <set>
#include <tuple>

namespace fgw
{

mpq_class parse_rational(const std::string &text)
{
    const auto c = Coefficient::parse(GradedRingSpec::rationals(), text);
    const auto v = c.scalar_value();
    if (!v) {
        fail(ErrorCode::ParseError, "'" + text + "' is not a rational number");
    }
    return *v;
}

std::string rational_string(const mpq_class &q)
{
    mpq_class c = q;
    c.canonicalize();
    return c.get_str();
}

void require_positive_cutoff(const mpq_class &cutoff)
{
    if (cutoff <= 0) {
        fail(ErrorCode::CutoffNonpositive, "area cutoff must be positive, got " + rational_string(cutoff));
    }
}

namespace
{

bool is_zero_vector(const Vector &v)
{
    return std::all_of(v.begin(), v.end(), [](const Coefficient &c) { return c.is_zero(); });
}

Vector zero_vector(const Ring &ring, std::size_t n)
{
    return Vector(n, Coefficient::zero(ring));
}

Vector map_vector(const Vector &v, const Ring &ring)
{
    Vector out;
    out.reserve(v.size());
    for (const auto &c : v) {
        out.push_back(c.map_to(ring));
    }
    return out;
}

} // namespace

// --- Tensor3 -------------------------------------------------------------------

Tensor3::Tensor3(Ring ring, std::size_t n) : ring_(std::move(ring)), n_(n), data_(n * n * n, Coefficient::zero(ring_))
{
}

Tensor3 Tensor3::map_to(const Ring &target) const
{
    Tensor3 out(target, n_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] = data_[i].map_to(target);
    }
    return out;
}

bool Tensor3::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Coefficient &c) { return c.is_zero(); });
}

// --- NovikovSeries -------------------------------------------------------------

NovikovSeries::NovikovSeries(Ring ring, std::size_t dim, mpq_class cutoff)
    : ring_(std::move(ring)), dim_(dim), cutoff_(std::move(cutoff))
{
    require_positive_cutoff(cutoff_);
}

NovikovSeries NovikovSeries::constant(const Vector &v, mpq_class cutoff)
{
    if (v.empty()) {
        fail(ErrorCode::InvalidArgument, "empty vector");
    }
    NovikovSeries s(v.front().ring(), v.size(), std::move(cutoff));
    s.add(0, v);
    return s;
}

void NovikovSeries::add(const mpq_class &t, const Vector &v)
{
    if (v.size() != dim_) {
        fail(ErrorCode::InvalidArgument, "vector of length " + std::to_string(v.size()) + " in a rank "
                                             + std::to_string(dim_) + " Novikov series");
    }
    if (t < 0) {
        fail(ErrorCode::InvalidArgument, "negative Novikov exponent");
    }
    if (t >= cutoff_ || is_zero_vector(v)) {
        return;
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t, [](const Term &a, const mpq_class &b) { return a.t < b; });
    if (it != terms_.end() && it->t == t) {
        for (std::size_t i = 0; i < dim_; ++i) {
            it->vector[i] += v[i].map_to(ring_);
        }
        if (is_zero_vector(it->vector)) {
            terms_.erase(it);
        }
        return;
    }
    terms_.insert(it, Term{t, map_vector(v, ring_)});
}

NovikovSeries &NovikovSeries::operator+=(const NovikovSeries &o)
{
    if (o.cutoff_ < cutoff_) {
        *this = truncated(o.cutoff_);
    }
    for (const auto &term : o.terms_) {
        add(term.t, term.vector);
    }
    return *this;
}

NovikovSeries &NovikovSeries::operator-=(const NovikovSeries &o)
{
    return *this += o.scaled(Coefficient::from_integer(o.ring_, -1));
}

NovikovSeries NovikovSeries::scaled(const Coefficient &c) const
{
    NovikovSeries out(ring_, dim_, cutoff_);
    const auto k = c.map_to(ring_);
    for (const auto &term : terms_) {
        Vector v;
        for (const auto &x : term.vector) {
            v.push_back(x * k);
        }
        out.add(term.t, v);
    }
    return out;
}

NovikovSeries NovikovSeries::truncated(const mpq_class &cutoff) const
{
    NovikovSeries out(ring_, dim_, std::min(cutoff, cutoff_));
    for (const auto &term : terms_) {
        out.add(term.t, term.vector);
    }
    return out;
}

bool NovikovSeries::operator==(const NovikovSeries &o) const
{
    return same_ring(ring_, o.ring_) && dim_ == o.dim_ && cutoff_ == o.cutoff_ && terms_ == o.terms_;
}

// --- Datum -----------------------------------------------------------------------

std::size_t GWDatum::index_of(const std::string &name) const
{
    const auto it = std::find(basis.begin(), basis.end(), name);
    if (it == basis.end()) {
        fail(ErrorCode::InvalidArgument, "unknown basis element '" + name + "'");
    }
    return static_cast<std::size_t>(it - basis.begin());
}

Vector GWDatum::basis_vector(std::size_t i, const Ring &target) const
{
    Vector v = zero_vector(target, dim());
    v.at(i) = Coefficient::one(target);
    return v;
}

namespace
{

Coefficient scalar_from_json(const Ring &ring, const nlohmann::json &j)
{
    if (j.is_string()) {
        return Coefficient::parse(ring, j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Coefficient::from_integer(ring, j.get<long long>());
    }
    fail(ErrorCode::SchemaError, "expected a coefficient string or integer, got " + j.dump());
}

mpq_class area_from_json(const nlohmann::json &j)
{
    if (j.is_number_integer()) {
        return mpq_class(j.get<long>());
    }
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    fail(ErrorCode::SchemaError, "expected an area as a rational string, got " + j.dump());
}

Tensor3 tensor_from_json(const Ring &ring, std::size_t n, const nlohmann::json &j, const std::string &where)
{
    Tensor3 t(ring, n);
    if (!j.is_array() || j.size() != n) {
        fail(ErrorCode::SchemaError, where + ": expected an " + std::to_string(n) + "x" + std::to_string(n) + "x"
                                         + std::to_string(n) + " array");
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (!j[a].is_array() || j[a].size() != n) {
            fail(ErrorCode::SchemaError, where + ": bad row length");
        }
        for (std::size_t b = 0; b < n; ++b) {
            if (!j[a][b].is_array() || j[a][b].size() != n) {
                fail(ErrorCode::SchemaError, where + ": bad row length");
            }
            for (std::size_t c = 0; c < n; ++c) {
                t.at(a, b, c) = scalar_from_json(ring, j[a][b][c]);
            }
        }
    }
    return t;
}

nlohmann::json tensor_to_json(const Tensor3 &t)
{
    auto out = nlohmann::json::array();
    for (std::size_t a = 0; a < t.dim(); ++a) {
        auto plane = nlohmann::json::array();
        for (std::size_t b = 0; b < t.dim(); ++b) {
            auto row = nlohmann::json::array();
            for (std::size_t c = 0; c < t.dim(); ++c) {
                row.push_back(t.at(a, b, c).to_string());
            }
            plane.push_back(row);
        }
        out.push_back(plane);
    }
    return out;
}

nlohmann::json vector_to_json(const Vector &v)
{
    auto out = nlohmann::json::array();
    for (const auto &c : v) {
        out.push_back(c.to_string());
    }
    return out;
}

Vector vector_from_json(const Ring &ring, const nlohmann::json &j, std::size_t n, const std::string &where)
{
    if (!j.is_array() || j.size() != n) {
        fail(ErrorCode::SchemaError, where + ": expected " + std::to_string(n) + " entries");
    }
    Vector v;
    for (const auto &x : j) {
        v.push_back(scalar_from_json(ring, x));
    }
    return v;
}

// Gauss-Jordan elimination over Q; nullopt when singular.
std::optional<std::vector<std::vector<mpq_class>>> invert(std::vector<std::vector<mpq_class>> a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const mpq_class p = a[col][col];
        for (std::size_t k = 0; k < n; ++k) {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) {
                continue;
            }
            const mpq_class factor = a[r][col];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= factor * a[col][k];
                inv[r][k] -= factor * inv[col][k];
            }
        }
    }
    return inv;
}

} // namespace

GWDatum load_datum(const nlohmann::json &j)
{
    try {
        GWDatum d;
        d.ring = GradedRingSpec::rationals();
        d.basis = j.at("basis").get<std::vector<std::string>>();
        const std::size_t n = d.basis.size();
        if (n == 0) {
            fail(ErrorCode::SchemaError, "empty basis");
        }
        if (std::set<std::string>(d.basis.begin(), d.basis.end()).size() != n) {
            fail(ErrorCode::SchemaError, "duplicate basis name");
        }
        d.degrees = j.contains("degrees") ? j.at("degrees").get<std::vector<int>>() : std::vector<int>(n, 0);
        if (d.degrees.size() != n) {
            fail(ErrorCode::SchemaError, "degrees and basis differ in length");
        }
        const auto &pj = j.at("pairing");
        if (!pj.is_array() || pj.size() != n) {
            fail(ErrorCode::SchemaError, "pairing must be a square matrix over the basis");
        }
        std::vector<std::vector<mpq_class>> g(n, std::vector<mpq_class>(n));
        for (std::size_t a = 0; a < n; ++a) {
            d.pairing.push_back(vector_from_json(d.ring, pj[a], n, "pairing row"));
            for (std::size_t b = 0; b < n; ++b) {
                const auto v = d.pairing[a][b].scalar_value();
                if (!v) {
                    fail(ErrorCode::SchemaError, "pairing entries must be rational");
                }
                g[a][b] = *v;
            }
        }
        const auto inv = invert(g);
        if (!inv) {
            fail(ErrorCode::SingularPairing, "pairing matrix is not invertible over Q");
        }
        for (const auto &row : *inv) {
            Vector v;
            for (const auto &x : row) {
                v.push_back(Coefficient::from_rational(d.ring, x));
            }
            d.inverse_pairing.push_back(std::move(v));
        }
        d.unit = vector_from_json(d.ring, j.at("unit"), n, "unit");

        std::set<std::string> names;
        for (const auto &cj : j.at("classes")) {
            ClassDatum c;
            c.name = cj.at("name").get<std::string>();
            if (!names.insert(c.name).second) {
                fail(ErrorCode::SchemaError, "duplicate class name " + c.name);
            }
            c.area = area_from_json(cj.at("area"));
            if (c.area < 0) {
                fail(ErrorCode::SchemaError, "class " + c.name + " has negative area");
            }
            c.correlator = tensor_from_json(d.ring, n, cj.at("correlator"), "correlator of " + c.name);
            if (cj.contains("bubbles")) {
                for (const auto &bj : cj.at("bubbles")) {
                    c.bubbles.push_back({bj.at("class").get<std::string>(), area_from_json(bj.at("area"))});
                }
            }
            for (std::size_t i = 1; i < c.bubbles.size(); ++i) {
                if (c.bubbles[i].area > c.bubbles[i - 1].area) {
                    fail(ErrorCode::UnorderedBubbles, "bubbles of " + c.name + " must have non-increasing area: "
                                                          + c.bubbles[i - 1].class_name + " precedes "
                                                          + c.bubbles[i].class_name);
                }
            }
            if (cj.contains("table")) {
                for (const auto &tj : cj.at("table")) {
                    auto mono = tj.at("monomial").get<std::vector<int>>();
                    if (mono.size() != c.bubbles.size()) {
                        fail(ErrorCode::TableArityMismatch, "table monomial of " + c.name + " has "
                                                                + std::to_string(mono.size()) + " exponents for "
                                                                + std::to_string(c.bubbles.size()) + " bubbles");
                    }
                    if (std::any_of(mono.begin(), mono.end(), [](int e) { return e < 0; })) {
                        fail(ErrorCode::SchemaError, "negative exponent in table of " + c.name);
                    }
                    if (std::all_of(mono.begin(), mono.end(), [](int e) { return e == 0; })) {
                        fail(ErrorCode::SchemaError, "the empty monomial of " + c.name + " is its correlator");
                    }
                    auto t = tensor_from_json(d.ring, n, tj.at("tensor"), "table entry of " + c.name);
                    if (!c.table.emplace(std::move(mono), std::move(t)).second) {
                        fail(ErrorCode::SchemaError, "repeated table monomial in " + c.name);
                    }
                }
            }
            d.classes.push_back(std::move(c));
        }

        for (const auto &c : d.classes) {
            if (c.area != 0) {
                continue;
            }
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t e = 0; e < n; ++e) {
                    Coefficient s = Coefficient::zero(d.ring);
                    for (std::size_t a = 0; a < n; ++a) {
                        s += d.unit[a] * c.correlator.at(a, b, e);
                    }
                    if (s != d.pairing[b][e]) {
                        fail(ErrorCode::UnitAxiomViolation, "mu_" + c.name + "(unit, " + d.basis[b] + ", " + d.basis[e]
                                                                + ") = " + s.to_string() + " but the pairing gives "
                                                                + d.pairing[b][e].to_string());
                    }
                }
            }
        }
        return d;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("datum: ") + e.what());
    }
}

nlohmann::json datum_to_json(const GWDatum &d)
{
    auto pairing = nlohmann::json::array();
    for (const auto &row : d.pairing) {
        pairing.push_back(vector_to_json(row));
    }
    auto classes = nlohmann::json::array();
    for (const auto &c : d.classes) {
        auto bubbles = nlohmann::json::array();
        for (const auto &b : c.bubbles) {
            bubbles.push_back({{"class", b.class_name}, {"area", rational_string(b.area)}});
        }
        auto table = nlohmann::json::array();
        for (const auto &[m, t] : c.table) {
            table.push_back({{"monomial", m}, {"tensor", tensor_to_json(t)}});
        }
        classes.push_back({{"name", c.name},
                           {"area", rational_string(c.area)},
                           {"correlator", tensor_to_json(c.correlator)},
                           {"bubbles", bubbles},
                           {"table", table}});
    }
    return {{"basis", d.basis},
            {"degrees", d.degrees},
            {"pairing", pairing},
            {"unit", vector_to_json(d.unit)},
            {"classes", classes}};
}

Ring product_ring(const FormalGroupLaw &law)
{
    return with_grading(with_field_scalars(law.ring()), Grading::Z2);
}

// --- QuantumProduct --------------------------------------------------------------

QuantumProduct::QuantumProduct(const GWDatum &d, Ring ring, std::vector<Tensor3> correlators)
    : ring_(std::move(ring)), dim_(d.dim()), correlators_(std::move(correlators))
{
    const std::size_t n = dim_;
    std::vector<Vector> ginv;
    for (const auto &row : d.inverse_pairing) {
        ginv.push_back(map_vector(row, ring_));
    }
    for (std::size_t c = 0; c < d.classes.size(); ++c) {
        const auto &mu = correlators_[c];
        Tensor3 raised(ring_, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (mu.at(i, j, k).is_zero()) {
                        continue;
                    }
                    for (std::size_t l = 0; l < n; ++l) {
                        if (!ginv[k][l].is_zero()) {
                            raised.at(i, j, l) += mu.at(i, j, k) * ginv[k][l];
                        }
                    }
                }
            }
        }
        classes_.push_back({d.classes[c].area, std::move(raised)});
    }
}

QuantumProduct QuantumProduct::naive(const GWDatum &d, const Ring &ring)
{
    std::vector<Tensor3> correlators;
    for (const auto &c : d.classes) {
        correlators.push_back(c.correlator.map_to(ring));
    }
    return QuantumProduct(d, ring, std::move(correlators));
}

QuantumProduct QuantumProduct::corrected(const GWDatum &d, const FormalGroupLaw &law, int truncation,
                                         NegationMode negation)
{
    const Ring ring = product_ring(law);
    std::map<std::size_t, CorrectionSeries> cache;
    std::vector<Tensor3> correlators;
    for (const auto &c : d.classes) {
        Tensor3 mu = c.correlator.map_to(ring);
        const std::size_t k = c.bubbles.size();
        if (k == 0) {
            correlators.push_back(std::move(mu));
            continue;
        }
        auto it = cache.find(k);
        if (it == cache.end()) {
            const auto p = DivisorPresentation::make(law, static_cast<int>(k) - 1, truncation, negation);
            it = cache.emplace(k, compute_correction(p)).first;
        }
        Tensor3 total(ring, d.dim());
        for (const auto &[m, coef] : it->second.f.terms()) {
            const Tensor3 *t = nullptr;
            Tensor3 mapped;
            if (m.total_degree() == 0) {
                t = &mu;
            } else {
                const auto entry = c.table.find(m.exponents());
                if (entry == c.table.end()) {
                    continue;
                }
                mapped = entry->second.map_to(ring);
                t = &mapped;
            }
            const auto w = coef.map_to(ring);
            for (std::size_t a = 0; a < d.dim(); ++a) {
                for (std::size_t b = 0; b < d.dim(); ++b) {
                    for (std::size_t e = 0; e < d.dim(); ++e) {
                        if (!t->at(a, b, e).is_zero()) {
                            total.at(a, b, e) += w * t->at(a, b, e);
                        }
                    }
                }
            }
        }
        correlators.push_back(std::move(total));
    }
    return QuantumProduct(d, ring, std::move(correlators));
}

NovikovSeries QuantumProduct::multiply(const Vector &a, const Vector &b, const mpq_class &cutoff) const
{
    if (a.size() != dim_ || b.size() != dim_) {
        fail(ErrorCode::InvalidArgument, "product arguments must have length " + std::to_string(dim_));
    }
    NovikovSeries out(ring_, dim_, cutoff);
    const auto am = map_vector(a, ring_);
    const auto bm = map_vector(b, ring_);
    for (const auto &w : classes_) {
        if (w.area >= cutoff) {
            continue;
        }
        Vector v = zero_vector(ring_, dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (am[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                if (bm[j].is_zero()) {
                    continue;
                }
                const auto ab = am[i] * bm[j];
                for (std::size_t l = 0; l < dim_; ++l) {
                    if (!w.raised.at(i, j, l).is_zero()) {
                        v[l] += ab * w.raised.at(i, j, l);
                    }
                }
            }
        }
        out.add(w.area, v);
    }
    return out;
}

NovikovSeries QuantumProduct::multiply(const NovikovSeries &a, const NovikovSeries &b) const
{
    const mpq_class cutoff = std::min(a.cutoff(), b.cutoff());
    NovikovSeries out(ring_, dim_, cutoff);
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            const mpq_class shift = ta.t + tb.t;
            if (shift >= cutoff) {
                continue;
            }
            const auto partial = multiply(ta.vector, tb.vector, cutoff - shift);
            for (const auto &term : partial.terms()) {
                out.add(term.t + shift, term.vector);
            }
        }
    }
    return out;
}

NovikovSeries naive_product(const GWDatum &d, const Vector &a, const Vector &b, const mpq_class &cutoff)
{
    require_positive_cutoff(cutoff);
    if (a.empty()) {
        fail(ErrorCode::InvalidArgument, "empty product argument");
    }
    return QuantumProduct::naive(d, a.front().ring()).multiply(a, b, cutoff);
}

NovikovSeries corrected_product(const GWDatum &d, const FormalGroupLaw &law, const Vector &a, const Vector &b,
                                const mpq_class &cutoff, int truncation, NegationMode negation)
{
    require_positive_cutoff(cutoff);
    return QuantumProduct::corrected(d, law, truncation, negation).multiply(a, b, cutoff);
}

AssociativityReport associativity_check(const QuantumProduct &product, const mpq_class &cutoff)
{
    require_positive_cutoff(cutoff);
    const std::size_t n = product.dim();
    std::vector<NovikovSeries> basis;
    for (std::size_t i = 0; i < n; ++i) {
        Vector e = zero_vector(product.ring(), n);
        e[i] = Coefficient::one(product.ring());
        basis.push_back(NovikovSeries::constant(e, cutoff));
    }
    std::vector<std::vector<NovikovSeries>> pair;
    for (std::size_t i = 0; i < n; ++i) {
        pair.emplace_back();
        for (std::size_t j = 0; j < n; ++j) {
            pair[i].push_back(product.multiply(basis[i], basis[j]));
        }
    }
    AssociativityReport report{cutoff, {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                auto diff = product.multiply(pair[i][j], basis[k]);
                diff -= product.multiply(basis[i], pair[j][k]);
                for (const auto &term : diff.terms()) {
                    report.residuals.push_back({term.t, i, j, k, term.vector});
                }
            }
        }
    }
    std::stable_sort(report.residuals.begin(), report.residuals.end(), [](const Residual &a, const Residual &b) {
        return std::tie(a.t, a.i, a.j, a.k) < std::tie(b.t, b.i, b.j, b.k);
    });
    return report;
}

AssociativityReport associativity_check(const GWDatum &d, const FormalGroupLaw &law, const mpq_class &cutoff,
                                        int truncation, NegationMode negation)
{
    return associativity_check(QuantumProduct::corrected(d, law, truncation, negation), cutoff);
}

// --- JSON ------------------------------------------------------------------------

nlohmann::json novikov_to_json(const NovikovSeries &s)
{
    auto terms = nlohmann::json::array();
    for (const auto &t : s.terms()) {
        terms.push_back({{"t", rational_string(t.t)}, {"vector", vector_to_json(t.vector)}});
    }
    return {{"ring", ring_to_json(s.ring())}, {"dim", s.dim()}, {"cutoff", rational_string(s.cutoff())}, {"terms", terms}};
}

NovikovSeries novikov_from_json(const nlohmann::json &j)
{
    try {
        const Ring ring = ring_from_json(j.at("ring"));
        const auto n = j.at("dim").get<std::size_t>();
        NovikovSeries s(ring, n, parse_rational(j.at("cutoff").get<std::string>()));
        for (const auto &t : j.at("terms")) {
            s.add(parse_rational(t.at("t").get<std::string>()), vector_from_json(ring, t.at("vector"), n, "term"));
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("Novikov series: ") + e.what());
    }
}

nlohmann::json report_to_json(const AssociativityReport &r, const GWDatum &d, const Ring &ring)
{
    auto residual_json = [&](const Residual &x) {
        return nlohmann::json{{"t", rational_string(x.t)},
                              {"triple", {d.basis.at(x.i), d.basis.at(x.j), d.basis.at(x.k)}},
                              {"vector", vector_to_json(x.vector)}};
    };
    auto residuals = nlohmann::json::array();
    for (const auto &x : r.residuals) {
        residuals.push_back(residual_json(x));
    }
    return {{"associative", r.associative()},
            {"ring", ring_to_json(ring)},
            {"cutoff", rational_string(r.cutoff)},
            {"leading", r.leading() ? residual_json(*r.leading()) : nlohmann::json(nullptr)},
            {"residuals", residuals}};
}

AssociativityReport report_from_json(const nlohmann::json &j, const GWDatum &d, const Ring &ring)
{
    try {
        AssociativityReport r{parse_rational(j.at("cutoff").get<std::string>()), {}};
        for (const auto &x : j.at("residuals")) {
            const auto &triple = x.at("triple");
            r.residuals.push_back({parse_rational(x.at("t").get<std::string>()), d.index_of(triple.at(0)),
                                   d.index_of(triple.at(1)), d.index_of(triple.at(2)),
                                   vector_from_json(ring, x.at("vector"), d.dim(), "residual")});
        }
        return r;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("report: ") + e.what());
    }
}

} // namespace fgw
