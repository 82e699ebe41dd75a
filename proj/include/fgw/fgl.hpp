#pragma once

// One-dimensional commutative formal group laws, stored as coefficient tables
// a_ij up to a total-degree bound and verified at construction.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <fgw/coeff.hpp>
#include <fgw/series.hpp>

namespace fgw
{

enum class LawKind { Additive, Multiplicative, Honda, GenericLog, Custom };

struct LawSpec {
    LawKind kind = LawKind::Additive;
    long p = 0;
    int height = 0;
    int generators = 0;

    // "additive", "multiplicative", "honda:p,n", "generic_log:k", "custom"
    static LawSpec parse(std::string_view text);
    std::string to_string() const;

    bool operator==(const LawSpec &) const = default;
};

class FormalGroupLaw
{
public:
    using Table = std::map<std::pair<int, int>, Coefficient>;

    static FormalGroupLaw construct(const LawSpec &spec, int degree_bound);
    static FormalGroupLaw additive(int degree_bound);
    static FormalGroupLaw multiplicative(int degree_bound);
    // Height-n law obtained from the logarithm sum_i p^-i x^(p^(ni)), reduced
    // mod p and graded by powers of v.
    static FormalGroupLaw honda(long p, int height, int degree_bound);
    // Law with logarithm x + sum_{i<=k} m_i x^(i+1) over Q[m_1..m_k], deg m_i = -2i.
    static FormalGroupLaw generic_log(int generators, int degree_bound);

    // Validates unitality, commutativity, associativity up to the bound and,
    // for Z-graded rings, deg a_ij = variable_degree * (1 - i - j).
    static FormalGroupLaw from_table(std::string name, LawSpec spec, Ring ring, int degree_bound, Table table,
                                     int variable_degree = 2);

    const std::string &name() const noexcept { return name_; }
    const LawSpec &spec() const noexcept { return spec_; }
    const Ring &ring() const noexcept { return ring_; }
    int degree_bound() const noexcept { return bound_; }
    // Degree of the series variables making L homogeneous of that same degree:
    // 2 for cohomologically graded coefficients, -2 when v carries positive degree.
    int variable_degree() const noexcept { return variable_degree_; }

    Coefficient a(int i, int j) const;
    // Nonzero coefficients only.
    const Table &table() const noexcept { return table_; }

    // L(x, y) for series with zero constant term in a common context.
    TruncatedSeries evaluate(const TruncatedSeries &x, const TruncatedSeries &y) const;

    void require_truncation(int truncation) const;

    bool operator==(const FormalGroupLaw &o) const;

private:
    FormalGroupLaw() = default;

    std::string name_;
    LawSpec spec_;
    Ring ring_;
    int bound_ = 0;
    int variable_degree_ = 2;
    Table table_;
};

// Context of the named variables with the law's variable degree.
Context law_context(const FormalGroupLaw &law, std::vector<std::string> names);

TruncatedSeries two_var_sum(const FormalGroupLaw &law, const std::string &x, const std::string &y, int truncation);
TruncatedSeries n_series(const FormalGroupLaw &law, int n, const std::string &x, int truncation);
// Left-nested fold [n_1]u_1 +_L ... +_L [n_m]u_m.
TruncatedSeries multi_sum(const FormalGroupLaw &law, const std::vector<std::string> &variables,
                          const std::vector<int> &multiplicities, int truncation);
// Left-nested fold of arbitrary series arguments (zero constant terms).
TruncatedSeries fold_sum(const FormalGroupLaw &law, const std::vector<TruncatedSeries> &args);
// Right-nested fold; equal to fold_sum by associativity.
TruncatedSeries fold_sum_right(const FormalGroupLaw &law, const std::vector<TruncatedSeries> &args);
// The series i(x) with L(x, i(x)) = 0.
TruncatedSeries formal_inverse(const FormalGroupLaw &law, const std::string &x, int truncation);

nlohmann::json law_to_json(const FormalGroupLaw &law);
FormalGroupLaw law_from_json(const nlohmann::json &j);
std::string law_table_text(const FormalGroupLaw &law);

} // namespace fgw
