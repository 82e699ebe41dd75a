#pragma once

// Exact graded coefficient rings: Q, Z, F_p, F_p[v, v^-1] and commuting
// polynomial extensions of any of these.

#include <climits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include <fgw/error.hpp>

namespace fgw
{

enum class Grading { Z, Z2 };

enum class RingKind { Rationals, Integers, PrimeField, LaurentGraded, PolynomialExtension };

// The scalar layer underneath every ring, after flattening extensions.
enum class ScalarKind { Rational, Integer, Modular };

struct Generator {
    std::string name;
    int degree = 0;
    // Only the Morava generator v is invertible.
    bool invertible = false;

    bool operator==(const Generator &) const = default;
};

class GradedRingSpec;
using Ring = std::shared_ptr<const GradedRingSpec>;

class GradedRingSpec
{
public:
    static Ring rationals(Grading grading = Grading::Z);
    static Ring integers(Grading grading = Grading::Z);
    static Ring prime_field(long p, Grading grading = Grading::Z);
    // F_p[v, v^-1] with deg(v) = 2(p^n - 1).
    static Ring morava(long p, int height, Grading grading = Grading::Z);
    static Ring polynomial_extension(Ring base, const std::vector<std::pair<std::string, int>> &generators,
                                     Grading grading = Grading::Z);

    RingKind kind() const noexcept { return kind_; }
    Grading grading() const noexcept { return grading_; }
    // Characteristic prime for PrimeField/LaurentGraded (and extensions over them), else 0.
    long characteristic() const noexcept { return p_; }
    int height() const noexcept { return height_; }
    const Ring &base() const noexcept { return base_; }
    ScalarKind scalar_kind() const noexcept { return scalar_; }

    // All generators, base generators first.
    const std::vector<Generator> &generators() const noexcept { return generators_; }
    const std::vector<Generator> &own_generators() const noexcept { return own_; }
    std::optional<std::size_t> generator_index(std::string_view name) const;

    int reduce_degree(long degree) const;
    std::string describe() const;

    bool operator==(const GradedRingSpec &other) const;

private:
    GradedRingSpec() = default;

    RingKind kind_ = RingKind::Rationals;
    Grading grading_ = Grading::Z;
    ScalarKind scalar_ = ScalarKind::Rational;
    long p_ = 0;
    int height_ = 0;
    Ring base_;
    std::vector<Generator> own_;
    std::vector<Generator> generators_;
};

bool same_ring(const Ring &a, const Ring &b);
void require_same_ring(const Ring &a, const Ring &b, std::string_view where);

// Same ring with a different grading mode (recursively through extensions).
Ring with_grading(const Ring &ring, Grading grading);
// Replaces Z scalars by Q; other scalar layers are unchanged.
Ring with_field_scalars(const Ring &ring);

nlohmann::json ring_to_json(const Ring &ring);
Ring ring_from_json(const nlohmann::json &j);

bool is_prime(long p);

using Exponents = std::vector<int>;

struct CoefficientTerm {
    Exponents exponents;
    mpq_class value;

    bool operator==(const CoefficientTerm &o) const { return exponents == o.exponents && value == o.value; }
};

// A homogeneous element of a graded ring, kept in canonical form: terms
// sorted by exponent vector, no zero terms, scalars reduced.
class Coefficient
{
public:
    Coefficient() = default;

    static Coefficient zero(Ring ring, long degree = 0);
    static Coefficient one(Ring ring);
    static Coefficient from_integer(Ring ring, long long value);
    static Coefficient from_rational(Ring ring, const mpq_class &value);
    static Coefficient generator(Ring ring, std::string_view name, int power = 1);
    static Coefficient from_terms(Ring ring, std::vector<CoefficientTerm> terms, long zero_degree = 0);
    static Coefficient parse(Ring ring, std::string_view text, long zero_degree = 0);

    const Ring &ring() const noexcept { return ring_; }
    int degree() const noexcept { return degree_; }
    const std::vector<CoefficientTerm> &terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_one() const;
    // Scalar-only coefficients (no generator powers); nullopt otherwise.
    std::optional<mpq_class> scalar_value() const;

    bool is_unit() const;
    Coefficient inverse() const;
    Coefficient pow(unsigned e) const;

    Coefficient operator-() const;
    Coefficient &operator+=(const Coefficient &o);
    Coefficient &operator-=(const Coefficient &o);
    Coefficient &operator*=(const Coefficient &o);
    friend Coefficient operator+(Coefficient a, const Coefficient &b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient &b) { return a -= b; }
    friend Coefficient operator*(const Coefficient &a, const Coefficient &b);

    // Value equality (zero compares equal to zero of any degree).
    bool operator==(const Coefficient &o) const;

    // Base change along the canonical map between scalar layers
    // (Z -> Q, Q -> F_p when p-integral, identity on generators present in both).
    Coefficient map_to(const Ring &target) const;

    std::string to_string() const;

private:
    void canonicalize();

    Ring ring_;
    int degree_ = 0;
    std::vector<CoefficientTerm> terms_;
};

std::ostream &operator<<(std::ostream &os, const Coefficient &c);

// p-adic valuation of a nonzero rational; INT_MAX for zero.
int p_adic_valuation(const mpq_class &q, long p);

struct PIntegrality {
    bool integral = false;
    int valuation = INT_MAX;
    std::optional<Coefficient> image;
};

// For a coefficient over Q: whether it is p-integral and, if so, its image in F_p.
PIntegrality check_p_integral(const Coefficient &a, long p);
// As above but throws NotPIntegral (message carries the valuation).
Coefficient reduce_mod_p(const Coefficient &a, long p, Ring target = {});

} // namespace fgw
