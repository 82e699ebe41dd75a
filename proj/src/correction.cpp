#include <fgw/correction.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace fgw
{

std::string to_string(NegationMode mode)
{
    return mode == NegationMode::Literal ? "literal" : "formalInverse";
}

NegationMode parse_negation_mode(std::string_view text)
{
    if (text == "literal") {
        return NegationMode::Literal;
    }
    if (text == "formalInverse" || text == "formal-inverse" || text == "inverse") {
        return NegationMode::FormalInverse;
    }
    fail(ErrorCode::InvalidArgument, "unknown negation mode '" + std::string(text) + "'");
}

// --- DivisorPresentation -------------------------------------------------------

DivisorPresentation DivisorPresentation::make(FormalGroupLaw law, int N, int truncation, NegationMode negation,
                                              bool decorated)
{
    if (N < 0) {
        fail(ErrorCode::InvalidArgument, "N must be non-negative");
    }
    if (truncation < 2) {
        fail(ErrorCode::TruncationTooSmall, "truncation must be at least 2, got " + std::to_string(truncation));
    }
    law.require_truncation(truncation);
    DivisorPresentation p(std::move(law));
    p.n_ = N;
    p.truncation_ = truncation;
    p.negation_ = negation;
    p.decorated_ = decorated;
    std::vector<std::string> names;
    if (decorated) {
        names = {"S", "T"};
    }
    for (int j = 0; j <= N; ++j) {
        names.push_back(p.divisor_name(j));
    }
    p.context_ = law_context(p.law_, std::move(names));
    return p;
}

TruncatedSeries DivisorPresentation::negated(int i) const
{
    const auto d = TruncatedSeries::variable(law_.ring(), context_, divisor_name(i), truncation_);
    if (negation_ == NegationMode::Literal) {
        return -d;
    }
    return substitute(formal_inverse(law_, "x", truncation_), {{"x", d}});
}

TruncatedSeries DivisorPresentation::lambda(int j) const
{
    std::vector<TruncatedSeries> args;
    if (decorated_) {
        args.push_back(TruncatedSeries::variable(law_.ring(), context_, "S", truncation_));
        args.push_back(TruncatedSeries::variable(law_.ring(), context_, "T", truncation_));
    }
    for (int i = 0; i <= n_; ++i) {
        if (i != j) {
            args.push_back(negated(i));
        }
    }
    if (args.empty()) {
        return TruncatedSeries::zero(law_.ring(), context_, truncation_);
    }
    return fold_sum(law_, args);
}

TruncatedSeries DivisorPresentation::relation(int j) const
{
    const auto d = TruncatedSeries::variable(law_.ring(), context_, divisor_name(j), truncation_);
    return d * d - d * lambda(j);
}

TruncatedSeries DivisorPresentation::multi_sum_series() const
{
    std::vector<TruncatedSeries> args;
    for (int j = 0; j <= n_; ++j) {
        args.push_back(TruncatedSeries::variable(law_.ring(), context_, divisor_name(j), truncation_));
    }
    return fold_sum(law_, args);
}

bool DivisorPresentation::operator==(const DivisorPresentation &o) const
{
    return law_ == o.law_ && n_ == o.n_ && truncation_ == o.truncation_ && negation_ == o.negation_
           && decorated_ == o.decorated_;
}

// --- Witness -------------------------------------------------------------------

TruncatedSeries RewriteWitness::replay(const DivisorPresentation &p) const
{
    TruncatedSeries out = TruncatedSeries::zero(p.law().ring(), p.context(), p.truncation());
    for (const auto &[j, g] : multipliers) {
        if (j < 0 || j > p.N()) {
            fail(ErrorCode::InvalidArgument, "witness refers to relation " + std::to_string(j));
        }
        out += g * p.relation(j);
    }
    return out;
}

bool RewriteWitness::operator==(const RewriteWitness &o) const
{
    return multipliers == o.multipliers;
}

bool CorrectionSeries::operator==(const CorrectionSeries &o) const
{
    return presentation == o.presentation && f == o.f && per_stage == o.per_stage && witness == o.witness
           && stats == o.stats;
}

// --- Staged algorithm ------------------------------------------------------------

namespace
{

class StageRunner
{
public:
    StageRunner(const DivisorPresentation &p, const CorrectionOptions &options)
        : p_(p), options_(options), offset_(p.decorated() ? 2 : 0), n_(p.N()), trunc_(p.truncation()),
          pools_(static_cast<std::size_t>(n_ + 1)), lambda_(static_cast<std::size_t>(n_ + 1)),
          lambda_pow_(static_cast<std::size_t>(n_ + 1))
    {
    }

    StagedRun run()
    {
        const auto sum = p_.multi_sum_series();
        for (const auto &[m, c] : sum.terms()) {
            const int s = top_stage(m);
            if (s < 0) {
                fail(ErrorCode::Internal, "multi-sum term without divisor variable");
            }
            deposit(s, m, c);
        }
        StagedRun out;
        for (int j = 0; j <= n_; ++j) {
            out.stage_outputs.push_back(TruncatedSeries::zero(p_.law().ring(), p_.context(), trunc_));
            TruncatedSeries g = TruncatedSeries::zero(p_.law().ring(), p_.context(), trunc_);
            process_stage(j, out.stage_outputs.back(), g);
            if (!g.is_zero()) {
                out.witness.multipliers.emplace_back(j, std::move(g));
            }
        }
        out.stats = stats_;
        return out;
    }

private:
    using Pool = std::map<Monomial, Coefficient, GrlexOrder>;

    std::size_t var(int j) const { return static_cast<std::size_t>(offset_ + j); }

    int top_stage(const Monomial &m) const
    {
        for (int j = n_; j >= 0; --j) {
            if (m[var(j)] > 0) {
                return j;
            }
        }
        return -1;
    }

    void deposit(int stage, const Monomial &m, const Coefficient &c)
    {
        auto &pool = pools_[static_cast<std::size_t>(stage)];
        auto [it, inserted] = pool.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                pool.erase(it);
            }
        }
    }

    const TruncatedSeries &lambda_power(int j, int e)
    {
        auto &powers = lambda_pow_[static_cast<std::size_t>(j)];
        if (powers.empty()) {
            lambda_[static_cast<std::size_t>(j)] = p_.lambda(j);
            powers.push_back(TruncatedSeries::one(p_.law().ring(), p_.context(), trunc_));
        }
        while (static_cast<int>(powers.size()) <= e) {
            powers.push_back(powers.back() * lambda_[static_cast<std::size_t>(j)]);
        }
        return powers[static_cast<std::size_t>(e)];
    }

    // sum_{a=0}^{k-2} D_j^a Lambda_j^(k-2-a), so that D_j^k - D_j Lambda_j^(k-1) = Q * r_j.
    const TruncatedSeries &quotient(int j, int k)
    {
        const auto key = std::pair{j, k};
        auto it = quotients_.find(key);
        if (it != quotients_.end()) {
            return it->second;
        }
        const auto &ring = p_.law().ring();
        TruncatedSeries q = TruncatedSeries::zero(ring, p_.context(), trunc_);
        for (int a = 0; a <= k - 2; ++a) {
            q += lambda_power(j, k - 2 - a).times_monomial(Monomial::unit(p_.context()->size(), var(j), a),
                                                          Coefficient::one(ring));
        }
        return quotients_.emplace(key, std::move(q)).first->second;
    }

    void process_stage(int j, TruncatedSeries &fj, TruncatedSeries &gj)
    {
        std::vector<std::pair<Monomial, Coefficient>> work(pools_[static_cast<std::size_t>(j)].begin(),
                                                            pools_[static_cast<std::size_t>(j)].end());
        pools_[static_cast<std::size_t>(j)].clear();
        if (options_.shuffle_seed) {
            std::mt19937_64 rng(*options_.shuffle_seed + static_cast<std::uint64_t>(j));
            std::shuffle(work.begin(), work.end(), rng);
        }
        const std::size_t dj = var(j);
        for (const auto &[m, c] : work) {
            ++stats_.processed;
            const int k = m[dj];
            const Monomial phi = m.with_exponent(dj, 0);
            if (k == 1) {
                fj.add_term(phi, c);
                continue;
            }
            ++stats_.rewrites;
            gj += quotient(j, k).times_monomial(phi, c);
            const Monomial dphi = m.with_exponent(dj, 1);
            for (const auto &[lm, lc] : lambda_power(j, k - 1).terms()) {
                if (lm.total_degree() + dphi.total_degree() >= trunc_) {
                    break;
                }
                const Monomial prod = lm * dphi;
                const int s = top_stage(prod);
                if (s == j) {
                    fj.add_term(prod.with_exponent(dj, 0), lc * c);
                } else if (s > j) {
                    ++stats_.deferrals;
                    deposit(s, prod, lc * c);
                } else {
                    fail(ErrorCode::Internal, "rewrite moved a term from stage " + std::to_string(j) + " to stage "
                                                  + std::to_string(s));
                }
            }
        }
    }

    const DivisorPresentation &p_;
    const CorrectionOptions &options_;
    int offset_;
    int n_;
    int trunc_;
    std::vector<Pool> pools_;
    std::vector<TruncatedSeries> lambda_;
    std::vector<std::vector<TruncatedSeries>> lambda_pow_;
    std::map<std::pair<int, int>, TruncatedSeries> quotients_;
    CorrectionStats stats_;
};

std::vector<std::string> trailing_divisors(const DivisorPresentation &p, int from)
{
    std::vector<std::string> names;
    for (int i = from; i <= p.N(); ++i) {
        names.push_back(p.divisor_name(i));
    }
    return names;
}

} // namespace

StagedRun run_stages(const DivisorPresentation &p, const CorrectionOptions &options)
{
    return StageRunner(p, options).run();
}

CorrectionSeries compute_correction(const DivisorPresentation &p, const CorrectionOptions &options)
{
    const auto own = run_stages(p, options);
    const auto extended
        = DivisorPresentation::make(p.law(), p.N() + 1, p.truncation(), p.negation(), p.decorated());
    const auto probe = run_stages(extended, options);

    // D_j f_j lies below the truncation t, so f is only determined below t - 1.
    CorrectionSeries out{p, probe.stage_outputs.back().embed(p.context()).truncated(p.truncation() - 1), {},
                         own.witness, own.stats};
    for (int j = 0; j <= p.N(); ++j) {
        out.per_stage.push_back(out.f.specialize_zero(trailing_divisors(p, j)));
        const auto agree = compare_series(own.stage_outputs[static_cast<std::size_t>(j)], out.per_stage.back());
        if (!agree) {
            fail(ErrorCode::Internal, "stage " + std::to_string(j) + " output is not a specialization of f: "
                                          + agree.detail);
        }
    }
    return out;
}

Verdict verify_identity(const CorrectionSeries &c)
{
    const auto &p = c.presentation;
    if (!same_context(c.f.context(), p.context())) {
        return {false, "", "f does not live in the presentation's variables"};
    }
    if (c.per_stage.size() != static_cast<std::size_t>(p.N() + 1)) {
        return {false, "", "expected " + std::to_string(p.N() + 1) + " per-stage series"};
    }
    if (!c.f.constant_term().is_one()) {
        return {false, "1", "constant term of f is " + c.f.constant_term().to_string()};
    }
    TruncatedSeries residual = p.multi_sum_series();
    for (int j = 0; j <= p.N(); ++j) {
        const auto fj = c.f.specialize_zero(trailing_divisors(p, j));
        const auto stored = compare_series(c.per_stage[static_cast<std::size_t>(j)], fj);
        if (!stored) {
            return {false, stored.monomial, "f_" + std::to_string(j) + ": " + stored.detail};
        }
        const auto dj = TruncatedSeries::variable(p.law().ring(), p.context(), p.divisor_name(j), p.truncation());
        TruncatedSeries lifted(p.law().ring(), p.context(), p.truncation());
        for (const auto &[m, coef] : fj.terms()) {
            lifted.add_term(m, coef);
        }
        residual -= dj * lifted;
    }
    residual -= c.witness.replay(p);
    if (residual.is_zero()) {
        return {};
    }
    const auto &[m, coef] = *residual.terms().begin();
    const auto ms = m.total_degree() == 0 ? std::string("1") : monomial_string(p.context(), m);
    return {false, ms, "residual coefficient of " + ms + " is " + coef.to_string()};
}

std::vector<TruncatedSeries> expand_F_in_S(const CorrectionSeries &c)
{
    const auto &p = c.presentation;
    if (!p.decorated()) {
        fail(ErrorCode::NotDecorated, "expansion in S needs the decorated presentation");
    }
    const std::size_t s = p.context()->require_index("S");
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < c.f.truncation(); ++i) {
        TruncatedSeries fi(p.law().ring(), p.context(), c.f.truncation());
        for (const auto &[m, coef] : c.f.terms()) {
            if (m[s] == i) {
                fi.add_term(m.with_exponent(s, 0), coef);
            }
        }
        out.push_back(std::move(fi));
    }
    return out;
}

TruncatedSeries assemble_corrected_class(const AssemblyKind &kind, const CorrectionSeries &c)
{
    const auto &p = c.presentation;
    if (kind.kind == AssemblyKind::Kind::ThreePoint) {
        if (p.decorated()) {
            fail(ErrorCode::ContextMismatch, "three-point assembly takes f over D_0..D_N only");
        }
        return c.f;
    }
    if (!p.decorated()) {
        fail(ErrorCode::NotDecorated, "higher-genus assembly needs F");
    }
    if (kind.inputs < 0) {
        fail(ErrorCode::InvalidArgument, "negative number of inputs");
    }
    const int vd = p.law().variable_degree();
    const int trunc = c.f.truncation();
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (int j = 1; j <= kind.inputs; ++j) {
        names.push_back("w" + std::to_string(j));
        degrees.push_back(-vd);
    }
    names.push_back("z");
    degrees.push_back(vd);
    for (int j = 1; j <= kind.inputs; ++j) {
        names.push_back("Tin" + std::to_string(j));
        degrees.push_back(vd);
    }
    names.push_back("T");
    degrees.push_back(vd);
    for (int j = 0; j <= p.N(); ++j) {
        names.push_back(p.divisor_name(j));
        degrees.push_back(vd);
    }
    const auto ctx = VariableContext::make(names, degrees);
    const auto &ring = p.law().ring();

    TruncatedSeries out = TruncatedSeries::zero(ring, ctx, trunc);
    const auto z = TruncatedSeries::variable(ring, ctx, "z", trunc);
    const auto parts = expand_F_in_S(c);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += parts[i].embed(ctx) * z.pow(static_cast<unsigned>(i));
    }
    for (int j = 1; j <= kind.inputs; ++j) {
        const auto x = TruncatedSeries::variable(ring, ctx, "Tin" + std::to_string(j), trunc)
                       * TruncatedSeries::variable(ring, ctx, "w" + std::to_string(j), trunc);
        TruncatedSeries geometric = TruncatedSeries::one(ring, ctx, trunc);
        TruncatedSeries power = geometric;
        for (int k = 1; 2 * k < trunc; ++k) {
            power *= x;
            geometric += power;
        }
        out *= geometric;
    }
    return out;
}

// --- JSON ------------------------------------------------------------------------

nlohmann::json presentation_to_json(const DivisorPresentation &p)
{
    return {{"law", law_to_json(p.law())},
            {"N", p.N()},
            {"truncation", p.truncation()},
            {"negation", to_string(p.negation())},
            {"decorated", p.decorated()}};
}

DivisorPresentation presentation_from_json(const nlohmann::json &j)
{
    try {
        return DivisorPresentation::make(law_from_json(j.at("law")), j.at("N").get<int>(), j.at("truncation").get<int>(),
                                         parse_negation_mode(j.at("negation").get<std::string>()),
                                         j.at("decorated").get<bool>());
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("presentation: ") + e.what());
    }
}

nlohmann::json correction_to_json(const CorrectionSeries &c)
{
    auto stages = nlohmann::json::array();
    for (const auto &s : c.per_stage) {
        stages.push_back(series_to_json(s));
    }
    auto witness = nlohmann::json::array();
    for (const auto &[j, g] : c.witness.multipliers) {
        witness.push_back({{"relation", j}, {"multiplier", series_to_json(g)}});
    }
    return {{"presentation", presentation_to_json(c.presentation)},
            {"f", series_to_json(c.f)},
            {"per_stage", stages},
            {"witness", witness},
            {"stats",
             {{"processed", c.stats.processed}, {"rewrites", c.stats.rewrites}, {"deferrals", c.stats.deferrals}}}};
}

namespace
{

TruncatedSeries series_in(const nlohmann::json &j, const DivisorPresentation &p, const std::string &what)
{
    auto s = series_from_json(j);
    if (*s.context() != *p.context()) {
        fail(ErrorCode::SchemaError, what + " does not use the presentation's variables");
    }
    if (!same_ring(s.ring(), p.law().ring())) {
        fail(ErrorCode::SchemaError, what + " is not over the law's ring");
    }
    return s.embed(p.context());
}

} // namespace

CorrectionSeries correction_from_json(const nlohmann::json &j)
{
    try {
        auto p = presentation_from_json(j.at("presentation"));
        auto f = series_in(j.at("f"), p, "f");
        CorrectionSeries c{p, std::move(f), {}, {}, {}};
        for (const auto &s : j.at("per_stage")) {
            c.per_stage.push_back(series_in(s, p, "per-stage series"));
        }
        for (const auto &w : j.at("witness")) {
            c.witness.multipliers.emplace_back(w.at("relation").get<int>(), series_in(w.at("multiplier"), p, "multiplier"));
        }
        if (j.contains("stats")) {
            const auto &st = j.at("stats");
            c.stats = {st.at("processed").get<std::size_t>(), st.at("rewrites").get<std::size_t>(),
                       st.at("deferrals").get<std::size_t>()};
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, std::string("correction: ") + e.what());
    }
}

} // namespace fgw
