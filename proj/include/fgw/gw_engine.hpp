#pragma once

// Quantum products over area-truncated Novikov rings from tabulated
// correlator data, corrected by the series f of the chosen formal group law.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include <fgw/correction.hpp>

namespace fgw
{

using Vector = std::vector<Coefficient>;

// Dense n x n x n array of coefficients, indexed (i, j, k).
class Tensor3
{
public:
    Tensor3() = default;
    Tensor3(Ring ring, std::size_t n);

    std::size_t dim() const noexcept { return n_; }
    const Ring &ring() const noexcept { return ring_; }
    Coefficient &at(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
    const Coefficient &at(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }

    Tensor3 map_to(const Ring &target) const;
    bool is_zero() const;
    bool operator==(const Tensor3 &o) const { return n_ == o.n_ && data_ == o.data_; }

private:
    Ring ring_;
    std::size_t n_ = 0;
    std::vector<Coefficient> data_;
};

// sum_i v_i q^(t_i) with rational exponents strictly increasing and below the cutoff.
class NovikovSeries
{
public:
    struct Term {
        mpq_class t;
        Vector vector;

        bool operator==(const Term &o) const { return t == o.t && vector == o.vector; }
    };

    NovikovSeries(Ring ring, std::size_t dim, mpq_class cutoff);
    static NovikovSeries constant(const Vector &v, mpq_class cutoff);

    const Ring &ring() const noexcept { return ring_; }
    std::size_t dim() const noexcept { return dim_; }
    const mpq_class &cutoff() const noexcept { return cutoff_; }
    const std::vector<Term> &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    // Dropped when t >= cutoff; zero vectors are never stored.
    void add(const mpq_class &t, const Vector &v);
    NovikovSeries &operator+=(const NovikovSeries &o);
    NovikovSeries &operator-=(const NovikovSeries &o);
    NovikovSeries scaled(const Coefficient &c) const;
    NovikovSeries truncated(const mpq_class &cutoff) const;

    bool operator==(const NovikovSeries &o) const;

private:
    Ring ring_;
    std::size_t dim_ = 0;
    mpq_class cutoff_;
    std::vector<Term> terms_;
};

struct BubbleDivisor {
    std::string class_name;
    mpq_class area;

    bool operator==(const BubbleDivisor &o) const { return class_name == o.class_name && area == o.area; }
};

struct ClassDatum {
    std::string name;
    mpq_class area;
    // All three slots covariant.
    Tensor3 correlator;
    // Ordered by non-increasing area; bubble i is the divisor variable D_i.
    std::vector<BubbleDivisor> bubbles;
    // Exponent vectors over the bubble variables; unlisted monomials evaluate to zero.
    std::map<std::vector<int>, Tensor3> table;
};

struct GWDatum {
    std::vector<std::string> basis;
    std::vector<int> degrees;
    Ring ring;
    std::vector<Vector> pairing;
    std::vector<Vector> inverse_pairing;
    Vector unit;
    std::vector<ClassDatum> classes;

    std::size_t dim() const noexcept { return basis.size(); }
    std::size_t index_of(const std::string &name) const;
    Vector basis_vector(std::size_t i, const Ring &ring) const;
};

// Checks invertibility of the pairing, bubble ordering, table arity and, when
// a class of area 0 is present, the unit axiom mu_0(unit, b, c) = g(b, c).
GWDatum load_datum(const nlohmann::json &j);
nlohmann::json datum_to_json(const GWDatum &d);

// Scalars of products corrected by `law`: its ring with field scalars and Z/2 grading.
Ring product_ring(const FormalGroupLaw &law);

// Product with structure constants M_beta[i][j][l] = sum_k mu_beta(i, j, k) g^(kl),
// mu_beta being either the raw correlators or their corrected version.
class QuantumProduct
{
public:
    static QuantumProduct naive(const GWDatum &d, const Ring &ring);
    static QuantumProduct corrected(const GWDatum &d, const FormalGroupLaw &law, int truncation,
                                    NegationMode negation = NegationMode::Literal);

    const Ring &ring() const noexcept { return ring_; }
    std::size_t dim() const noexcept { return dim_; }

    NovikovSeries multiply(const Vector &a, const Vector &b, const mpq_class &cutoff) const;
    NovikovSeries multiply(const NovikovSeries &a, const NovikovSeries &b) const;

    // Corrected covariant correlator of class `index`.
    const Tensor3 &corrected_correlator(std::size_t index) const { return correlators_.at(index); }

private:
    struct Weighted {
        mpq_class area;
        Tensor3 raised;
    };

    QuantumProduct(const GWDatum &d, Ring ring, std::vector<Tensor3> correlators);

    Ring ring_;
    std::size_t dim_ = 0;
    std::vector<Tensor3> correlators_;
    std::vector<Weighted> classes_;
};

void require_positive_cutoff(const mpq_class &cutoff);

NovikovSeries naive_product(const GWDatum &d, const Vector &a, const Vector &b, const mpq_class &cutoff);
NovikovSeries corrected_product(const GWDatum &d, const FormalGroupLaw &law, const Vector &a, const Vector &b,
                                const mpq_class &cutoff, int truncation, NegationMode negation = NegationMode::Literal);

struct Residual {
    mpq_class t;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    Vector vector;

    bool operator==(const Residual &o) const
    {
        return t == o.t && i == o.i && j == o.j && k == o.k && vector == o.vector;
    }
};

struct AssociativityReport {
    mpq_class cutoff;
    // (e_i * e_j) * e_k - e_i * (e_j * e_k), sorted by (t, i, j, k).
    std::vector<Residual> residuals;

    bool associative() const noexcept { return residuals.empty(); }
    // Residual of lowest area: the first order at which associativity breaks.
    const Residual *leading() const noexcept { return residuals.empty() ? nullptr : &residuals.front(); }

    bool operator==(const AssociativityReport &o) const { return cutoff == o.cutoff && residuals == o.residuals; }
};

AssociativityReport associativity_check(const QuantumProduct &product, const mpq_class &cutoff);
AssociativityReport associativity_check(const GWDatum &d, const FormalGroupLaw &law, const mpq_class &cutoff,
                                        int truncation, NegationMode negation = NegationMode::Literal);

mpq_class parse_rational(const std::string &text);
std::string rational_string(const mpq_class &q);

nlohmann::json novikov_to_json(const NovikovSeries &s);
NovikovSeries novikov_from_json(const nlohmann::json &j);
nlohmann::json report_to_json(const AssociativityReport &r, const GWDatum &d, const Ring &ring);
AssociativityReport report_from_json(const nlohmann::json &j, const GWDatum &d, const Ring &ring);

} // namespace fgw
