#pragma once

// The quotient rings R (variables D_0..D_N) and R' (additionally S, T), the
// staged rewriting that produces the correction series f (resp. F), and
// certificates for the defining identity
//
//   L(D_0, ..., D_N) = sum_j D_j * f_j + sum_j g_j * r_j,
//   r_j = D_j^2 - D_j * Lambda_j,
//
// where f_j is f with D_j, ..., D_N set to zero and Lambda_j is the formal
// sum of the negated D_i, i != j (preceded by S and T in R').

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <fgw/fgl.hpp>
#include <fgw/series.hpp>

namespace fgw
{

enum class NegationMode { Literal, FormalInverse };

std::string to_string(NegationMode mode);
NegationMode parse_negation_mode(std::string_view text);

class DivisorPresentation
{
public:
    static DivisorPresentation make(FormalGroupLaw law, int N, int truncation,
                                    NegationMode negation = NegationMode::Literal, bool decorated = false);

    const FormalGroupLaw &law() const noexcept { return law_; }
    int N() const noexcept { return n_; }
    int truncation() const noexcept { return truncation_; }
    NegationMode negation() const noexcept { return negation_; }
    bool decorated() const noexcept { return decorated_; }

    // [S, T,] D0, ..., DN
    const Context &context() const noexcept { return context_; }
    std::string divisor_name(int j) const { return "D" + std::to_string(j); }

    // Image of D_i under the chosen negation: -D_i or the formal inverse.
    TruncatedSeries negated(int i) const;
    TruncatedSeries lambda(int j) const;
    TruncatedSeries relation(int j) const;
    // L(D_0, ..., D_N), left-nested.
    TruncatedSeries multi_sum_series() const;

    bool operator==(const DivisorPresentation &o) const;

private:
    DivisorPresentation(FormalGroupLaw law) : law_(std::move(law)) {}

    FormalGroupLaw law_;
    int n_ = 0;
    int truncation_ = 2;
    NegationMode negation_ = NegationMode::Literal;
    bool decorated_ = false;
    Context context_;
};

struct RewriteWitness {
    // (relation index j, multiplier g_j); only nonzero multipliers are kept.
    std::vector<std::pair<int, TruncatedSeries>> multipliers;

    // sum_j g_j * r_j for the given presentation.
    TruncatedSeries replay(const DivisorPresentation &p) const;

    bool operator==(const RewriteWitness &o) const;
};

struct CorrectionStats {
    std::size_t processed = 0;
    std::size_t rewrites = 0;
    std::size_t deferrals = 0;

    bool operator==(const CorrectionStats &) const = default;
};

struct CorrectionOptions {
    // Processes the monomials of each stage in a seeded random order instead
    // of canonical order.
    std::optional<std::uint64_t> shuffle_seed;
};

struct CorrectionSeries {
    DivisorPresentation presentation;
    TruncatedSeries f;
    std::vector<TruncatedSeries> per_stage;
    RewriteWitness witness;
    CorrectionStats stats;

    bool operator==(const CorrectionSeries &o) const;
};

// Raw output of one run of the staged algorithm on the given presentation:
// the stage outputs f_0..f_N and the witness.
struct StagedRun {
    std::vector<TruncatedSeries> stage_outputs;
    RewriteWitness witness;
    CorrectionStats stats;
};

StagedRun run_stages(const DivisorPresentation &p, const CorrectionOptions &options = {});

// f is the last stage output of the presentation with one extra variable, so
// that every f_j is a specialization of it; the stage outputs of the run on p
// itself must agree with those specializations.
CorrectionSeries compute_correction(const DivisorPresentation &p, const CorrectionOptions &options = {});

// Replays the witness: L - sum_j D_j f_j - sum_j g_j r_j must vanish, the stored
// per-stage series must be the specializations of f, and f(0) must be 1.
Verdict verify_identity(const CorrectionSeries &c);

// F_i = coefficient of S^i in F, for i below the truncation.
std::vector<TruncatedSeries> expand_F_in_S(const CorrectionSeries &c);

struct AssemblyKind {
    enum class Kind { ThreePoint, HigherGenus } kind = Kind::ThreePoint;
    int inputs = 0;

    static AssemblyKind three_point() { return {}; }
    static AssemblyKind higher_genus(int inputs) { return {Kind::HigherGenus, inputs}; }
};

// ThreePoint: f itself. HigherGenus(n): sum_i F_i z^i * prod_j sum_k (Tin_j w_j)^k
// in the variables w1..wn, z, Tin1..Tinn, T, D0..DN.
TruncatedSeries assemble_corrected_class(const AssemblyKind &kind, const CorrectionSeries &c);

nlohmann::json presentation_to_json(const DivisorPresentation &p);
DivisorPresentation presentation_from_json(const nlohmann::json &j);
nlohmann::json correction_to_json(const CorrectionSeries &c);
CorrectionSeries correction_from_json(const nlohmann::json &j);

} // namespace fgw
