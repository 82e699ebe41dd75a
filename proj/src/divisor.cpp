#include <fgw/divisor.hpp>

#include <algorithm>
#include <functional>

namespace fgw
{

namespace
{

constexpr std::size_t kMaxDecomposedVariables = 16;

std::string bitstring(std::size_t mask, std::size_t m)
{
    std::string out(m, '0');
    for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1U) {
            out[i] = '1';
        }
    }
    return out;
}

Monomial indicator(const std::string &bits)
{
    std::vector<int> e(bits.size(), 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        e[i] = bits[i] == '1' ? 1 : 0;
    }
    return Monomial(std::move(e));
}

} // namespace

JDecomposition j_decompose(const TruncatedSeries &s)
{
    if (!s.constant_term().is_zero()) {
        fail(ErrorCode::NonzeroConstantTerm, "J-decomposition needs a series without constant term");
    }
    const std::size_t m = s.context()->size();
    if (m > kMaxDecomposedVariables) {
        fail(ErrorCode::InvalidArgument, "J-decomposition supports at most " + std::to_string(kMaxDecomposedVariables)
                                             + " variables");
    }
    JDecomposition d;
    d.context = s.context();
    d.truncation = s.truncation();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        const auto bits = bitstring(mask, m);
        const int weight = static_cast<int>(std::count(bits.begin(), bits.end(), '1'));
        d.components.emplace(bits, TruncatedSeries(s.ring(), s.context(), std::max(1, s.truncation() - weight)));
    }
    for (const auto &[mono, c] : s.terms()) {
        std::string bits(m, '0');
        std::vector<int> e(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            if (mono[i] > 0) {
                bits[i] = '1';
                e[i] = mono[i] - 1;
            }
        }
        d.components.at(bits).add_term(Monomial(std::move(e)), c);
    }
    return d;
}

TruncatedSeries JDecomposition::reconstruct() const
{
    if (components.empty()) {
        fail(ErrorCode::InvalidArgument, "empty J-decomposition");
    }
    TruncatedSeries out(components.begin()->second.ring(), context, truncation);
    for (const auto &[bits, lj] : components) {
        // L_J carries truncation t - |J|, so u^J L_J is exact below t.
        const auto shift = indicator(bits);
        for (const auto &[m, c] : lj.terms()) {
            out.add_term(m * shift, c);
        }
    }
    return out;
}

Verdict JDecomposition::check_support() const
{
    for (const auto &[bits, lj] : components) {
        for (const auto &[m, c] : lj.terms()) {
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i] == '0' && m[i] != 0) {
                    return {false, monomial_string(context, m), "component " + bits + " involves " + context->name(i)};
                }
            }
        }
    }
    return {};
}

bool JDecomposition::operator==(const JDecomposition &o) const
{
    return same_context(context, o.context) && truncation == o.truncation && components == o.components;
}

nlohmann::json decomposition_to_json(const JDecomposition &d)
{
    nlohmann::json comps = nlohmann::json::object();
    for (const auto &[bits, lj] : d.components) {
        comps[bits] = series_to_json(lj);
    }
    return {{"context", context_to_json(d.context)}, {"truncation", d.truncation}, {"components", comps}};
}

JDecomposition decomposition_from_json(const nlohmann::json &j)
{
    try {
        JDecomposition d;
        d.context = context_from_json(j.at("context"));
        d.truncation = j.at("truncation").get<int>();
        for (const auto &[bits, s] : j.at("components").items()) {
            if (bits.size() != d.context->size()) {
                fail(ErrorCode::SchemaError, "component key " + bits + " has the wrong length");
            }
            auto series = series_from_json(s);
            if (*series.context() != *d.context) {
                fail(ErrorCode::SchemaError, "component " + bits + " uses another context");
            }
            d.components.emplace(bits, series.embed(d.context));
        }
        return d;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("decomposition: ") + e.what());
    }
}

TruncatedSeries two_component_expansion(const FormalGroupLaw &law, int truncation)
{
    if (truncation > law.degree_bound()) {
        fail(ErrorCode::BoundExceeded, "truncation " + std::to_string(truncation) + " exceeds degree bound "
                                           + std::to_string(law.degree_bound()));
    }
    const auto ctx = law_context(law, {"D1", "D2"});
    const auto &ring = law.ring();
    auto out = TruncatedSeries::variable(ring, ctx, "D1", truncation)
               + TruncatedSeries::variable(ring, ctx, "D2", truncation);
    TruncatedSeries tail(ring, ctx, truncation);
    for (const auto &[ij, c] : law.table()) {
        if (ij.first >= 1 && ij.second >= 1) {
            tail.add_term(Monomial(std::vector<int>{ij.first - 1, ij.second - 1}), c);
        }
    }
    const auto d1d2 = tail.times_monomial(Monomial(std::vector<int>{1, 1}), Coefficient::one(ring));
    return out + d1d2;
}

Verdict inclusion_exclusion_check(int k)
{
    if (k < 1) {
        fail(ErrorCode::InvalidArgument, "inclusion-exclusion needs at least one component");
    }
    const auto law = FormalGroupLaw::multiplicative(std::max(2, k));
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) {
        names.push_back("u" + std::to_string(i));
    }
    const int trunc = k + 1;
    const auto actual = multi_sum(law, names, std::vector<int>(names.size(), 1), trunc);
    TruncatedSeries expected(law.ring(), actual.context(), trunc);
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        const auto bits = bitstring(mask, static_cast<std::size_t>(k));
        const long size = std::count(bits.begin(), bits.end(), '1');
        expected.add_term(indicator(bits), Coefficient::from_integer(law.ring(), size % 2 == 1 ? 1 : -1));
    }
    return compare_series(actual, expected);
}

// --- ConeComplexModel ----------------------------------------------------------

bool ConeComplexModel::FaceOrder::operator()(const Face &a, const Face &b) const
{
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    return a < b;
}

ConeComplexModel ConeComplexModel::make(std::vector<std::string> vertices, std::vector<Face> faces)
{
    ConeComplexModel c;
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
        fail(ErrorCode::InvalidComplex, "duplicate vertex");
    }
    for (auto &f : faces) {
        if (f.empty()) {
            fail(ErrorCode::InvalidComplex, "empty face");
        }
        std::sort(f.begin(), f.end());
        if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
            fail(ErrorCode::InvalidComplex, "face " + face_label(f) + " repeats a vertex");
        }
        for (const auto &v : f) {
            if (!std::binary_search(vertices.begin(), vertices.end(), v)) {
                fail(ErrorCode::InvalidComplex, "face " + face_label(f) + " uses unknown vertex " + v);
            }
        }
        c.faces_.insert(f);
    }
    for (const auto &v : vertices) {
        if (!c.faces_.count(Face{v})) {
            fail(ErrorCode::InvalidComplex, "vertex " + v + " is not a face");
        }
    }
    for (const auto &f : c.faces_) {
        if (f.size() < 2) {
            continue;
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
            Face sub = f;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
            if (!c.faces_.count(sub)) {
                fail(ErrorCode::InvalidComplex, "face " + face_label(f) + " lacks its facet " + face_label(sub));
            }
        }
    }
    c.vertices_ = std::move(vertices);
    return c;
}

ConeComplexModel ConeComplexModel::generated_by(const std::vector<Face> &faces)
{
    std::set<std::string> vertices;
    std::set<Face> closure;
    for (Face f : faces) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
        if (f.empty()) {
            fail(ErrorCode::InvalidComplex, "empty face");
        }
        if (f.size() > 20) {
            fail(ErrorCode::InvalidComplex, "face " + face_label(f) + " is too large to close");
        }
        vertices.insert(f.begin(), f.end());
        for (std::size_t mask = 1; mask < (std::size_t{1} << f.size()); ++mask) {
            Face sub;
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (mask >> i & 1U) {
                    sub.push_back(f[i]);
                }
            }
            closure.insert(std::move(sub));
        }
    }
    return make({vertices.begin(), vertices.end()}, {closure.begin(), closure.end()});
}

ConeComplexModel ConeComplexModel::simplex(int dimension)
{
    if (dimension < 0) {
        return {};
    }
    Face top;
    for (int i = 0; i <= dimension; ++i) {
        top.push_back("v" + std::to_string(i));
    }
    return generated_by({top});
}

int ConeComplexModel::dimension() const noexcept
{
    return faces_.empty() ? -1 : static_cast<int>(faces_.rbegin()->size()) - 1;
}

std::vector<std::size_t> ConeComplexModel::f_vector() const
{
    std::vector<std::size_t> out(static_cast<std::size_t>(dimension() + 1), 0);
    for (const auto &f : faces_) {
        ++out[f.size() - 1];
    }
    return out;
}

std::size_t ConeComplexModel::count_faces_of_dimension(int k) const
{
    const auto fv = f_vector();
    return k >= 0 && static_cast<std::size_t>(k) < fv.size() ? fv[static_cast<std::size_t>(k)] : 0;
}

std::string face_label(const ConeComplexModel::Face &face)
{
    std::string out = "{";
    for (std::size_t i = 0; i < face.size(); ++i) {
        out += (i ? "," : "") + face[i];
    }
    return out + "}";
}

ConeComplexModel barycentric_subdivide(const ConeComplexModel &c)
{
    const std::vector<ConeComplexModel::Face> faces(c.faces().begin(), c.faces().end());
    auto contains = [](const ConeComplexModel::Face &big, const ConeComplexModel::Face &small) {
        return big.size() > small.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    std::vector<std::string> vertices;
    std::vector<ConeComplexModel::Face> chains;
    // Faces are ordered by size, so strict chains are increasing index sequences.
    std::vector<std::size_t> chain;
    std::function<void(std::size_t)> extend = [&](std::size_t last) {
        ConeComplexModel::Face labels;
        for (auto i : chain) {
            labels.push_back(face_label(faces[i]));
        }
        chains.push_back(std::move(labels));
        for (std::size_t next = last + 1; next < faces.size(); ++next) {
            if (contains(faces[next], faces[last])) {
                chain.push_back(next);
                extend(next);
                chain.pop_back();
            }
        }
    };
    for (std::size_t i = 0; i < faces.size(); ++i) {
        vertices.push_back(face_label(faces[i]));
        chain = {i};
        extend(i);
    }
    return ConeComplexModel::make(std::move(vertices), std::move(chains));
}

nlohmann::json complex_to_json(const ConeComplexModel &c)
{
    nlohmann::json faces = nlohmann::json::array();
    for (const auto &f : c.faces()) {
        faces.push_back(f);
    }
    return {{"vertices", c.vertices()}, {"faces", faces}};
}

ConeComplexModel complex_from_json(const nlohmann::json &j)
{
    try {
        return ConeComplexModel::make(j.at("vertices").get<std::vector<std::string>>(),
                                      j.at("faces").get<std::vector<ConeComplexModel::Face>>());
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("complex: ") + e.what());
    }
}

} // namespace fgw
