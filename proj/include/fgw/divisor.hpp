#pragma once

// Strata decompositions of normal-crossing divisor classes and cone-complex
// bookkeeping.

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include <fgw/fgl.hpp>
#include <fgw/series.hpp>

namespace fgw
{

// s = sum_J u^J * L_J, where J runs over subsets of the variables and L_J only
// involves variables in J. Keys are bitstrings: character i is '1' iff
// variable i belongs to J. Every J is present, zero components included.
struct JDecomposition {
    Context context;
    int truncation = 1;
    std::map<std::string, TruncatedSeries> components;

    TruncatedSeries reconstruct() const;
    // Every component is supported on its own J.
    Verdict check_support() const;

    bool operator==(const JDecomposition &o) const;
};

JDecomposition j_decompose(const TruncatedSeries &s);

nlohmann::json decomposition_to_json(const JDecomposition &d);
JDecomposition decomposition_from_json(const nlohmann::json &j);

// D1 + D2 + D1*D2 * sum_{i,j>=1} a_ij D1^(i-1) D2^(j-1); requires truncation <= bound.
TruncatedSeries two_component_expansion(const FormalGroupLaw &law, int truncation);

// Multiplicative multi-sum of u_1..u_k against sum_{S nonempty} (-1)^(|S|+1) prod_{i in S} u_i.
Verdict inclusion_exclusion_check(int k);

// Abstract simplicial complex on named vertices. Faces are nonempty sorted
// vertex lists, closed under taking nonempty subsets.
class ConeComplexModel
{
public:
    using Face = std::vector<std::string>;

    struct FaceOrder {
        bool operator()(const Face &a, const Face &b) const;
    };
    using FaceSet = std::set<Face, FaceOrder>;

    ConeComplexModel() = default;

    // Validates: every listed vertex is a singleton face, every face uses
    // listed vertices only, and faces are downward closed.
    static ConeComplexModel make(std::vector<std::string> vertices, std::vector<Face> faces);
    // Downward closure of the given faces.
    static ConeComplexModel generated_by(const std::vector<Face> &faces);
    static ConeComplexModel simplex(int dimension);

    const std::vector<std::string> &vertices() const noexcept { return vertices_; }
    const FaceSet &faces() const noexcept { return faces_; }
    // -1 for the empty complex.
    int dimension() const noexcept;
    // f_k = number of k-dimensional faces.
    std::vector<std::size_t> f_vector() const;
    std::size_t count_faces_of_dimension(int k) const;

    bool operator==(const ConeComplexModel &o) const = default;

private:
    std::vector<std::string> vertices_;
    FaceSet faces_;
};

// Vertices are the faces of c; faces are the strict chains of faces of c.
ConeComplexModel barycentric_subdivide(const ConeComplexModel &c);

std::string face_label(const ConeComplexModel::Face &face);

nlohmann::json complex_to_json(const ConeComplexModel &c);
ConeComplexModel complex_from_json(const nlohmann::json &j);

} // namespace fgw
