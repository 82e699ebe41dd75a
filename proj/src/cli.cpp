#include <fgw/cli.hpp>

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include <fgw/correction.hpp>
#include <fgw/divisor.hpp>
#include <fgw/fgl.hpp>
#include <fgw/gw_engine.hpp>

namespace fgw::cli
{

namespace
{

struct Options {
    std::string format = "text";

    std::string kind;
    long p = 2;
    int n = 1;
    int generators = 1;
    int bound = 6;

    std::string law;
    int multiple = 2;
    int trunc = 6;
    std::vector<int> multiplicities;

    int N = 1;
    std::string negation = "literal";
    bool decorated = false;
    std::string out_file;

    std::string file;

    std::string datum;
    std::string cutoff = "5";
    int truncation = 4;
    bool check_assoc = false;
    bool naive = false;
    std::string a;
    std::string b;

    std::string complex_file;
    int simplex = -1;
    int times = 1;
};

void add_format(CLI::App *cmd, Options &o)
{
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

nlohmann::json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::InvalidArgument, "cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::SchemaError, path + ": " + e.what());
    }
}

void write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::InvalidArgument, "cannot write " + path);
    }
    out << text;
}

std::string dump(const nlohmann::json &j)
{
    return j.dump(2) + "\n";
}

// Bound large enough for the requested truncation.
FormalGroupLaw law_for(const std::string &selector, int truncation)
{
    return FormalGroupLaw::construct(LawSpec::parse(selector), std::max(2, truncation - 1));
}

std::vector<std::string> u_names(std::size_t m)
{
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) {
        names.push_back("u" + std::to_string(i));
    }
    return names;
}

std::string vector_text(const Vector &v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + v[i].to_string();
    }
    return out + ")";
}

std::string novikov_text(const NovikovSeries &s)
{
    if (s.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto &t : s.terms()) {
        out += (out.empty() ? "" : " + ") + std::string("q^") + rational_string(t.t) + "\xC2\xB7" + vector_text(t.vector);
    }
    return out;
}

int cmd_law(const Options &o, std::ostream &out)
{
    LawSpec spec;
    if (o.kind == "additive") {
        spec.kind = LawKind::Additive;
    } else if (o.kind == "multiplicative") {
        spec.kind = LawKind::Multiplicative;
    } else if (o.kind == "honda") {
        spec = {LawKind::Honda, o.p, o.n, 0};
    } else if (o.kind == "generic_log") {
        spec = {LawKind::GenericLog, 0, 0, o.generators};
    } else {
        spec = LawSpec::parse(o.kind);
    }
    const auto law = FormalGroupLaw::construct(spec, o.bound);
    out << (o.format == "json" ? dump(law_to_json(law)) : law_table_text(law));
    return Success;
}

int cmd_nseries(const Options &o, std::ostream &out)
{
    const auto law = law_for(o.law, o.trunc);
    const auto s = n_series(law, o.multiple, "x", o.trunc);
    if (o.format == "json") {
        out << dump(series_to_json(s));
    } else {
        out << "[" << o.multiple << "](x) = " << s << " + O(deg " << o.trunc << ")\n";
    }
    return Success;
}

int cmd_multisum(const Options &o, std::ostream &out)
{
    const auto law = law_for(o.law, o.trunc);
    const auto s = multi_sum(law, u_names(o.multiplicities.size()), o.multiplicities, o.trunc);
    if (o.format == "json") {
        out << dump(series_to_json(s));
    } else {
        out << "L = " << s << " + O(deg " << o.trunc << ")\n";
    }
    return Success;
}

int cmd_decompose(const Options &o, std::ostream &out)
{
    const auto law = law_for(o.law, o.trunc);
    const auto d = j_decompose(multi_sum(law, u_names(o.multiplicities.size()), o.multiplicities, o.trunc));
    if (o.format == "json") {
        out << dump(decomposition_to_json(d));
    } else {
        for (const auto &[bits, lj] : d.components) {
            out << "L_" << bits << " = " << lj << "\n";
        }
    }
    return Success;
}

void correction_text(const CorrectionSeries &c, std::ostream &out)
{
    const auto &p = c.presentation;
    out << (p.decorated() ? "F = " : "f = ") << c.f << " + O(deg " << c.f.truncation() << ")\n";
    for (std::size_t j = 0; j < c.per_stage.size(); ++j) {
        out << (p.decorated() ? "F_" : "f_") << j << " = " << c.per_stage[j] << "\n";
    }
    for (const auto &[j, g] : c.witness.multipliers) {
        out << "g_" << j << " = " << g << "\n";
    }
    out << "processed " << c.stats.processed << " monomials, " << c.stats.rewrites << " rewrites, "
        << c.stats.deferrals << " deferrals\n";
}

int cmd_correction(const Options &o, std::ostream &out)
{
    const auto p = DivisorPresentation::make(law_for(o.law, o.trunc), o.N, o.trunc, parse_negation_mode(o.negation),
                                             o.decorated);
    const auto c = compute_correction(p);
    const auto j = correction_to_json(c);
    if (!o.out_file.empty()) {
        write_file(o.out_file, dump(j));
    }
    if (o.format == "json") {
        out << dump(j);
    } else {
        correction_text(c, out);
    }
    return Success;
}

int cmd_verify(const Options &o, std::ostream &out)
{
    const auto c = correction_from_json(read_json(o.file));
    const auto v = verify_identity(c);
    if (o.format == "json") {
        out << dump({{"ok", v.ok}, {"monomial", v.monomial}, {"detail", v.detail}});
    } else if (v) {
        out << "identity verified for N=" << c.presentation.N() << " over " << c.presentation.law().name() << "\n";
    } else {
        out << "identity fails at " << v.monomial << ": " << v.detail << "\n";
    }
    return v ? Success : VerdictFailure;
}

int cmd_qprod(const Options &o, std::ostream &out)
{
    const auto datum = load_datum(read_json(o.datum));
    const mpq_class cutoff = parse_rational(o.cutoff);
    require_positive_cutoff(cutoff);
    const auto law = law_for(o.law, o.truncation);
    const auto product = o.naive ? QuantumProduct::naive(datum, product_ring(law))
                                 : QuantumProduct::corrected(datum, law, o.truncation, parse_negation_mode(o.negation));

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i = 0; i < datum.dim(); ++i) {
        left.push_back(i);
        right.push_back(i);
    }
    if (!o.a.empty()) {
        left = {datum.index_of(o.a)};
    }
    if (!o.b.empty()) {
        right = {datum.index_of(o.b)};
    }

    nlohmann::json products = nlohmann::json::array();
    std::ostringstream text;
    for (auto i : left) {
        for (auto j : right) {
            const auto s
                = product.multiply(datum.basis_vector(i, product.ring()), datum.basis_vector(j, product.ring()), cutoff);
            products.push_back({{"a", datum.basis[i]}, {"b", datum.basis[j]}, {"product", novikov_to_json(s)}});
            text << datum.basis[i] << " * " << datum.basis[j] << " = " << novikov_text(s) << "\n";
        }
    }
    nlohmann::json j = {{"law", o.law},
                        {"mode", o.naive ? "naive" : "corrected"},
                        {"cutoff", rational_string(cutoff)},
                        {"truncation", o.truncation},
                        {"basis", datum.basis},
                        {"products", products}};
    int status = Success;
    if (o.check_assoc) {
        const auto report = associativity_check(product, cutoff);
        j["associativity"] = report_to_json(report, datum, product.ring());
        if (report.associative()) {
            text << "associative up to cutoff " << rational_string(cutoff) << "\n";
        } else {
            const auto &r = *report.leading();
            text << "not associative: " << report.residuals.size() << " residual terms; lowest at q^"
                 << rational_string(r.t) << " for (" << datum.basis[r.i] << ", " << datum.basis[r.j] << ", "
                 << datum.basis[r.k] << "): " << vector_text(r.vector) << "\n";
            status = VerdictFailure;
        }
    }
    out << (o.format == "json" ? dump(j) : text.str());
    return status;
}

int cmd_subdivide(const Options &o, std::ostream &out)
{
    if (o.complex_file.empty() == (o.simplex < 0)) {
        fail(ErrorCode::InvalidArgument, "give exactly one of --complex and --simplex");
    }
    auto c = o.complex_file.empty() ? ConeComplexModel::simplex(o.simplex) : complex_from_json(read_json(o.complex_file));
    for (int i = 0; i < o.times; ++i) {
        c = barycentric_subdivide(c);
    }
    if (o.format == "json") {
        auto j = complex_to_json(c);
        j["f_vector"] = c.f_vector();
        out << dump(j);
    } else {
        out << "dimension " << c.dimension() << ", f-vector (";
        const auto fv = c.f_vector();
        for (std::size_t i = 0; i < fv.size(); ++i) {
            out << (i ? ", " : "") << fv[i];
        }
        out << ")\n";
        for (const auto &f : c.faces()) {
            out << face_label(f) << "\n";
        }
    }
    return Success;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Formal group laws, correction series and corrected quantum products", "fgw"};
    app.require_subcommand(1);
    Options o;

    auto *law = app.add_subcommand("law", "Print the coefficient table of a formal group law");
    law->add_option("--kind", o.kind, "additive, multiplicative, honda, generic_log")->required();
    law->add_option("--p", o.p, "Prime for the Honda law");
    law->add_option("--n", o.n, "Height of the Honda law");
    law->add_option("--generators", o.generators, "Number of logarithm coefficients for generic_log");
    law->add_option("--bound", o.bound, "Degree bound")->check(CLI::Range(2, 64));
    add_format(law, o);

    const auto law_help = "Law selector: additive, multiplicative, honda:p,n, generic_log:k";

    auto *nseries = app.add_subcommand("nseries", "Print the n-series [n](x)");
    nseries->add_option("--law", o.law, law_help)->required();
    nseries->add_option("--n", o.multiple, "Multiple n (negative allowed)")->required();
    nseries->add_option("--trunc", o.trunc, "Exclusive total-degree truncation")->check(CLI::Range(1, 64));
    add_format(nseries, o);

    auto *multisum = app.add_subcommand("multisum", "Print [n_1]u_1 + ... + [n_m]u_m");
    auto *decompose = app.add_subcommand("decompose", "J-decomposition of a multi-sum");
    for (auto *cmd : {multisum, decompose}) {
        cmd->add_option("--law", o.law, law_help)->required();
        cmd->add_option("--mult", o.multiplicities, "Comma-separated multiplicities")->required()->delimiter(',');
        cmd->add_option("--trunc", o.trunc, "Exclusive total-degree truncation")->check(CLI::Range(1, 64));
        add_format(cmd, o);
    }

    auto *correction = app.add_subcommand("correction", "Compute the correction series f (or F with --decorated)");
    correction->add_option("--law", o.law, law_help)->required();
    correction->add_option("--N", o.N, "Highest divisor index")->check(CLI::Range(0, 16));
    correction->add_option("--trunc", o.trunc, "Exclusive total-degree truncation")->check(CLI::Range(1, 64));
    correction->add_option("--negation", o.negation, "literal or formalInverse")
        ->check(CLI::IsMember({"literal", "formalInverse"}));
    correction->add_flag("--decorated", o.decorated, "Add the variables S and T");
    correction->add_option("--out", o.out_file, "Also write the JSON dump to this file");
    add_format(correction, o);

    auto *verify = app.add_subcommand("verify", "Replay the witness of a dumped correction series");
    verify->add_option("--file", o.file, "JSON dump produced by 'correction'")->required();
    add_format(verify, o);

    auto *qprod = app.add_subcommand("qprod", "Corrected quantum products from a correlator datum");
    qprod->add_option("--datum", o.datum, "Datum JSON file")->required();
    qprod->add_option("--law", o.law, law_help)->required();
    qprod->add_option("--cutoff", o.cutoff, "Area cutoff (rational)");
    qprod->add_option("--truncation", o.truncation, "Truncation of the correction series")->check(CLI::Range(2, 64));
    qprod->add_option("--negation", o.negation, "literal or formalInverse")
        ->check(CLI::IsMember({"literal", "formalInverse"}));
    qprod->add_option("--a", o.a, "Left basis element (default: all)");
    qprod->add_option("--b", o.b, "Right basis element (default: all)");
    qprod->add_flag("--check-assoc", o.check_assoc, "Run the associativity check");
    qprod->add_flag("--naive", o.naive, "Use the uncorrected correlators");
    add_format(qprod, o);

    auto *subdivide = app.add_subcommand("subdivide", "Barycentric subdivision of a simplicial complex");
    subdivide->add_option("--complex", o.complex_file, "Complex JSON file");
    subdivide->add_option("--simplex", o.simplex, "Use the standard simplex of this dimension")->check(CLI::Range(0, 6));
    subdivide->add_option("--times", o.times, "Number of subdivisions")->check(CLI::Range(0, 3));
    add_format(subdivide, o);

    std::vector<std::string> storage;
    storage.emplace_back("fgw");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : storage) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : UsageError;
    }

    try {
        if (*law) {
            return cmd_law(o, out);
        }
        if (*nseries) {
            return cmd_nseries(o, out);
        }
        if (*multisum) {
            return cmd_multisum(o, out);
        }
        if (*decompose) {
            return cmd_decompose(o, out);
        }
        if (*correction) {
            return cmd_correction(o, out);
        }
        if (*verify) {
            return cmd_verify(o, out);
        }
        if (*qprod) {
            return cmd_qprod(o, out);
        }
        if (*subdivide) {
            return cmd_subdivide(o, out);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    }
    return UsageError;
}

} // namespace fgw::cli
