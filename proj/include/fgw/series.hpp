#pragma once

// Sparse multivariate power series truncated by total degree.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <fgw/coeff.hpp>

namespace fgw
{

class VariableContext;
using Context = std::shared_ptr<const VariableContext>;

// Ordered variable names with (even) degrees. The order is significant: it
// fixes the canonical term order and, for divisor variables, the processing
// order of the correction algorithm.
class VariableContext
{
public:
    static Context make(std::vector<std::string> names, std::vector<int> degrees = {});
    static Context make_uniform(std::vector<std::string> names, int degree);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string> &names() const noexcept { return names_; }
    const std::vector<int> &degrees() const noexcept { return degrees_; }
    const std::string &name(std::size_t i) const { return names_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require_index(std::string_view name) const;

    bool operator==(const VariableContext &o) const = default;

private:
    VariableContext() = default;

    std::vector<std::string> names_;
    std::vector<int> degrees_;
};

bool same_context(const Context &a, const Context &b);

class Monomial
{
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
    explicit Monomial(std::vector<int> exps);

    static Monomial unit(std::size_t nvars, std::size_t var, int power = 1);

    std::size_t size() const noexcept { return exps_.size(); }
    int operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<int> &exponents() const noexcept { return exps_; }
    int total_degree() const noexcept { return total_; }
    std::vector<std::size_t> support() const;
    bool divides(const Monomial &o) const;

    Monomial operator*(const Monomial &o) const;
    // o / this; requires divides(o).
    Monomial quotient_of(const Monomial &o) const;
    Monomial with_exponent(std::size_t var, int e) const;

    bool operator==(const Monomial &o) const { return exps_ == o.exps_; }

private:
    std::vector<int> exps_;
    int total_ = 0;
};

// Canonical order: total degree ascending, then lexicographically descending
// in the context's variable order (x^2 < x*y < y^2 for x before y).
struct GrlexOrder {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

class TruncatedSeries
{
public:
    using TermMap = std::map<Monomial, Coefficient, GrlexOrder>;

    TruncatedSeries() = default;
    TruncatedSeries(Ring ring, Context context, int truncation);

    static TruncatedSeries zero(Ring ring, Context context, int truncation);
    static TruncatedSeries constant(const Coefficient &c, Context context, int truncation);
    static TruncatedSeries one(Ring ring, Context context, int truncation);
    static TruncatedSeries variable(Ring ring, Context context, std::string_view name, int truncation);
    static TruncatedSeries monomial(const Coefficient &c, const Monomial &m, Context context, int truncation);

    const Ring &ring() const noexcept { return ring_; }
    const Context &context() const noexcept { return context_; }
    int truncation() const noexcept { return truncation_; }
    const TermMap &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Coefficient coefficient_of(const Monomial &m) const;
    Coefficient constant_term() const;
    // Adds c * m; silently dropped when m lies at or beyond the truncation.
    void add_term(const Monomial &m, const Coefficient &c);

    TruncatedSeries operator-() const;
    TruncatedSeries &operator+=(const TruncatedSeries &o);
    TruncatedSeries &operator-=(const TruncatedSeries &o);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b);
    TruncatedSeries &operator*=(const TruncatedSeries &o);

    TruncatedSeries scaled(const Coefficient &c) const;
    TruncatedSeries times_monomial(const Monomial &m, const Coefficient &c) const;
    TruncatedSeries pow(unsigned e) const;
    TruncatedSeries truncated(int truncation) const;

    // Sets the named variables to zero.
    TruncatedSeries specialize_zero(const std::vector<std::string> &names) const;
    // Re-expresses the series in another context, matching variables by name;
    // every occurring variable must exist in the target.
    TruncatedSeries embed(Context target) const;
    // Keeps only the terms whose monomial satisfies the predicate.
    template <typename Pred>
    TruncatedSeries filtered(Pred &&keep) const
    {
        TruncatedSeries out(ring_, context_, truncation_);
        for (const auto &[m, c] : terms_) {
            if (keep(m)) {
                out.terms_.emplace_hint(out.terms_.end(), m, c);
            }
        }
        return out;
    }

    bool is_homogeneous_of(int degree) const;

    bool operator==(const TruncatedSeries &o) const;

    std::string to_string() const;

private:
    void check_compatible(const TruncatedSeries &o, std::string_view where) const;

    Ring ring_;
    Context context_;
    int truncation_ = 1;
    TermMap terms_;
};

std::ostream &operator<<(std::ostream &os, const TruncatedSeries &s);

std::string monomial_string(const Context &context, const Monomial &m);

// Outcome of an exact identity check; on failure `monomial` names the first
// offending term in canonical order and `detail` describes the mismatch.
struct Verdict {
    bool ok = true;
    std::string monomial;
    std::string detail;

    explicit operator bool() const noexcept { return ok; }
};

// Compares two series term by term; the first differing monomial is reported.
Verdict compare_series(const TruncatedSeries &actual, const TruncatedSeries &expected);

// Exact coefficient lookup; OutOfTruncation when m is not below the truncation.
Coefficient coefficient_of(const TruncatedSeries &s, const Monomial &m);

// Composition: each named variable of `target` is replaced by its assigned
// series. Assigned series share one context, which is the result context;
// unassigned variables pass through by name. Assigned series must have zero
// constant term.
TruncatedSeries substitute(const TruncatedSeries &target, const std::map<std::string, TruncatedSeries> &assignments);

// Compositional inverse of a univariate series with unit linear coefficient.
TruncatedSeries reversion(const TruncatedSeries &s, std::string_view variable);

nlohmann::json context_to_json(const Context &context);
Context context_from_json(const nlohmann::json &j);
nlohmann::json series_to_json(const TruncatedSeries &s);
TruncatedSeries series_from_json(const nlohmann::json &j);

} // namespace fgw
