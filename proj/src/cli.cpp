#include "cycletrace/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cycletrace/errors.hpp"
#include "cycletrace/exactmath.hpp"
#include "cycletrace/oracle.hpp"
#include "cycletrace/parallel.hpp"
#include "cycletrace/serialize.hpp"
#include "cycletrace/traces.hpp"

namespace cycletrace
{

namespace
{

struct RunConfig
{
    int k = 2;
    std::string class_form = "1,1,1";
    std::string D;
    std::optional<long> Dmin;
    std::optional<long> Dmax;
    std::vector<std::string> coeffs;
    std::string format = "json";
    bool numeric = false;
    long terms = 100000;
    double rel_tol = 1e-4;
    QuadratureConfig oracle;
};

BinaryQuadraticForm parse_form(const std::string& text)
{
    std::vector<Integer> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        try
        {
            parts.emplace_back(item);
        }
        catch (const std::invalid_argument&)
        {
            throw InvalidArgument("bad form coefficient '" + item + "'");
        }
    }
    if (parts.size() != 3)
        throw InvalidArgument("a form is given as a,b,c; got '" + text + "'");
    return {parts[0], parts[1], parts[2]};
}

Integer parse_integer(const std::string& text)
{
    try
    {
        return Integer(text);
    }
    catch (const std::invalid_argument&)
    {
        throw InvalidArgument("not an integer: '" + text + "'");
    }
}

CoefficientVector parse_coeffs(const std::vector<std::string>& items)
{
    CoefficientVector v;
    for (const auto& item : items)
    {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("--coeff expects D=p/q, got '" + item + "'");
        const Integer D = parse_integer(item.substr(0, eq));
        if (v.entries().count(D))
            throw InvalidArgument("duplicate coefficient for D = " + D.get_str());
        v.set(D, Rational::parse(item.substr(eq + 1)));
    }
    return v;
}

/// Discriminants D in [lo, hi] (D > 0, D = 0,1 mod 4), ascending.
std::vector<Integer> discriminant_range(long lo, long hi)
{
    std::vector<Integer> out;
    for (long D = std::max(lo, 1L); D <= hi; ++D)
        if (D % 4 == 0 || D % 4 == 1)
            out.emplace_back(D);
    return out;
}

struct TableRow
{
    Integer D;
    std::string status = "ok";
    std::optional<TraceResult> result;
};

void print_table(const RunConfig& cfg, const BinaryQuadraticForm& A, const std::vector<TableRow>& rows,
                 std::ostream& out)
{
    const bool scaled = cfg.k == 4;
    auto display = [&](const TraceResult& r) { return scaled ? Rational(3) * r.value : r.value; };
    if (cfg.format == "json")
    {
        Json jrows = Json::array();
        for (const auto& row : rows)
        {
            Json j{{"D", integer_json(row.D)}, {"status", row.status}};
            if (row.result)
            {
                j["trace"] = row.result->value.to_string();
                if (scaled)
                    j["3*trace"] = display(*row.result).to_string();
                j["ck"] = row.result->ck.to_string();
            }
            jrows.push_back(j);
        }
        Json doc{{"k", cfg.k}, {"d", integer_json(A.disc())}, {"A", form_json(A)}, {"rows", jrows}};
        out << doc.dump(2) << "\n";
        return;
    }
    const std::string value_header = scaled ? "3*trace" : "trace";
    if (cfg.format == "csv")
    {
        out << "D,trace" << (scaled ? ",3*trace" : "") << ",status\n";
        for (const auto& row : rows)
        {
            out << row.D.get_str() << ",";
            if (row.result)
            {
                out << row.result->value.to_string();
                if (scaled)
                    out << "," << display(*row.result).to_string();
            }
            else if (scaled)
            {
                out << ",";
            }
            out << "," << row.status << "\n";
        }
        return;
    }
    out << "| D | trace |" << (scaled ? " 3*trace |" : "") << " note |\n";
    out << "|---|---|" << (scaled ? "---|" : "") << "---|\n";
    for (const auto& row : rows)
    {
        out << "| " << row.D.get_str() << " | ";
        if (row.result)
        {
            out << row.result->value.to_string() << " |";
            if (scaled)
                out << " " << display(*row.result).to_string() << " |";
            out << "  |\n";
        }
        else
        {
            out << " |" << (scaled ? "  |" : "") << " " << row.status << " |\n";
        }
    }
}

int cmd_trace(const RunConfig& cfg, std::ostream& out)
{
    const auto A = reduce_posdef(parse_form(cfg.class_form));
    if (!cfg.coeffs.empty())
    {
        const auto coeffs = parse_coeffs(cfg.coeffs);
        const Rational value = combined_trace(cfg.k, A, coeffs);
        Json entries = Json::array();
        for (const auto& [D, v] : coeffs.entries())
            entries.push_back({{"D", integer_json(D)}, {"coeff", v.to_string()}});
        Json doc{{"k", cfg.k}, {"d", integer_json(A.disc())}, {"A", form_json(A)}, {"coeffs", entries},
                 {"trace", value.to_string()}};
        if (!single_trace_weight(cfg.k))
            doc["note"] = "formal combination";
        if (cfg.format == "json")
            out << doc.dump(2) << "\n";
        else
            out << value.to_string() << (single_trace_weight(cfg.k) ? "" : " (formal combination)") << "\n";
        return kExitOk;
    }
    if (cfg.D.empty())
        throw InvalidArgument("trace needs --D or --coeff");
    const auto result = trace_exact(make_trace_request(cfg.k, A, parse_integer(cfg.D)));
    if (cfg.format == "json")
    {
        out << to_json(result).dump(2) << "\n";
    }
    else if (cfg.format == "csv")
    {
        out << "k,d,A,D,trace,ck,stabilizer\n"
            << result.request.k << "," << result.request.d().get_str() << ",\"" << A.to_string() << "\","
            << result.request.D.get_str() << "," << result.value.to_string() << "," << result.ck.to_string() << ","
            << result.stabilizer << "\n";
    }
    else
    {
        out << "| k | d | A | D | trace | ck | stabilizer |\n|---|---|---|---|---|---|---|\n"
            << "| " << result.request.k << " | " << result.request.d().get_str() << " | " << A.to_string() << " | "
            << result.request.D.get_str() << " | " << result.value.to_string() << " | " << result.ck.to_string()
            << " | " << result.stabilizer << " |\n";
    }
    return kExitOk;
}

int cmd_table(const RunConfig& cfg, std::ostream& out)
{
    const auto A = reduce_posdef(parse_form(cfg.class_form));
    if (!cfg.Dmax)
        throw InvalidArgument("table needs --Dmax");
    if (!single_trace_weight(cfg.k))
    {
        if (cfg.k % 2 != 0)
            throw OddWeight("weight parameter k must be even");
        throw UnsupportedWeight("tables need k in {2, 4}");
    }
    const auto Ds = discriminant_range(cfg.Dmin.value_or(1), *cfg.Dmax);
    std::vector<std::exception_ptr> errors;
    auto rows = parallel_map<TableRow>(
        Ds.size(),
        [&](std::size_t i) {
            TableRow row{Ds[i], "ok", std::nullopt};
            if (is_perfect_square(Ds[i]))
            {
                row.status = "skipped (square)";
                return row;
            }
            try
            {
                row.result = trace_exact(make_trace_request(cfg.k, A, Ds[i]));
            }
            catch (const GeodesicCollision& e)
            {
                row.status = "skipped (collision with " + e.form() + ")";
            }
            return row;
        },
        errors);
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    print_table(cfg, A, rows, out);
    return kExitOk;
}

int cmd_ck(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.D.empty())
        throw InvalidArgument("ck needs --D");
    const Integer D = parse_integer(cfg.D);
    const Rational value = ck(cfg.k, D);
    const auto fac = factor_discriminant(D);
    std::optional<double> numeric;
    if (cfg.numeric)
        numeric = ck_numeric(cfg.k, D, cfg.terms);
    if (cfg.format == "json")
    {
        Json doc{{"k", cfg.k}, {"D", integer_json(D)}, {"D0", integer_json(fac.D0)}, {"f", integer_json(fac.f)},
                 {"ck", value.to_string()}};
        if (numeric)
            doc["ck_numeric"] = *numeric;
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    out << value.to_string() << "\n";
    if (numeric)
        out << std::fixed << std::setprecision(8) << *numeric << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto A = reduce_posdef(parse_form(cfg.class_form));
    if (!single_trace_weight(cfg.k))
    {
        if (cfg.k % 2 != 0)
            throw OddWeight("weight parameter k must be even");
        throw UnsupportedWeight("verification needs k in {2, 4}");
    }
    const bool single = !cfg.D.empty();
    std::vector<Integer> Ds;
    if (single)
        Ds.push_back(parse_integer(cfg.D));
    else if (cfg.Dmax)
        Ds = discriminant_range(cfg.Dmin.value_or(1), *cfg.Dmax);
    else
        throw InvalidArgument("verify needs --D or --Dmax");

    if (single)
    {
        // Single D: guards surface as exit codes before any numerics run.
        make_trace_request(cfg.k, A, Ds[0]);
        scan_interior_forms(Ds[0], A);
    }

    std::vector<std::exception_ptr> errors;
    auto reports = parallel_map<Json>(
        Ds.size(),
        [&](std::size_t i) -> Json {
            const Integer& D = Ds[i];
            if (is_perfect_square(D))
                return {{"D", integer_json(D)}, {"status", "skipped (square)"}};
            try
            {
                const auto exact = trace_exact(make_trace_request(cfg.k, A, D));
                const auto numeric = trace_numeric(cfg.k, A, D, cfg.oracle);
                const auto report = compare(exact.value, numeric.value, cfg.rel_tol);
                Json j = verification_json(D, exact.value, numeric.value, report, cfg.oracle);
                j["est_error"] = numeric.est_error;
                return j;
            }
            catch (const GeodesicCollision& e)
            {
                return {{"D", integer_json(D)}, {"status", "skipped (collision with " + e.form() + ")"}};
            }
            catch (const NoConvergence& e)
            {
                return {{"D", integer_json(D)}, {"status", "no convergence"}, {"error", e.what()}, {"pass", false}};
            }
        },
        errors);
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    bool all_pass = true;
    for (const auto& r : reports)
        if (r.contains("pass") && !r["pass"].get<bool>())
        {
            all_pass = false;
            err << "verification failed at D = " << r["D"].dump() << "\n";
        }

    if (cfg.format == "json")
    {
        Json doc{{"k", cfg.k}, {"A", form_json(A)}, {"rel_tol", cfg.rel_tol}, {"reports", reports}};
        out << doc.dump(2) << "\n";
    }
    else
    {
        const bool md = cfg.format == "markdown";
        out << (md ? "| D | exact | numeric | rel_diff | pass |\n|---|---|---|---|---|\n"
                   : "D,exact,numeric,rel_diff,pass\n");
        for (const auto& r : reports)
        {
            std::vector<std::string> cells{r["D"].dump()};
            if (r.contains("exact"))
            {
                std::ostringstream num, rel;
                num << std::setprecision(12) << r["numeric"].get<double>();
                rel << std::setprecision(3) << r["rel_diff"].get<double>();
                cells.insert(cells.end(), {r["exact"].get<std::string>(), num.str(), rel.str(),
                                           r["pass"].get<bool>() ? "pass" : "FAIL"});
            }
            else
            {
                cells.insert(cells.end(), {"", "", "", r["status"].get<std::string>()});
            }
            for (std::size_t i = 0; i < cells.size(); ++i)
                out << (md ? (i == 0 ? "| " : " | ") : (i == 0 ? "" : ",")) << cells[i];
            out << (md ? " |\n" : "\n");
        }
    }
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_classes(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.D.empty())
        throw InvalidArgument("classes needs --D");
    const Integer D = parse_integer(cfg.D);
    const auto set = indefinite_class_reps(D);
    Json classes = Json::array();
    for (const auto& Q : set.reps)
    {
        const auto [g, P] = primitive_part(Q);
        const auto pell = pell_fundamental(P.disc());
        const auto M = automorph(Q);
        classes.push_back({{"form", form_json(Q)},
                           {"content", integer_json(g)},
                           {"pell", {{"D", integer_json(pell.D)}, {"t", integer_json(pell.t)}, {"u", integer_json(pell.u)}}},
                           {"automorph", Json::array({Json::array({integer_json(M.p), integer_json(M.q)}),
                                                      Json::array({integer_json(M.r), integer_json(M.s)})})}});
    }
    if (cfg.format == "json")
    {
        out << Json{{"D", integer_json(D)}, {"count", set.reps.size()}, {"classes", classes}}.dump(2) << "\n";
        return kExitOk;
    }
    const bool md = cfg.format == "markdown";
    out << (md ? "| form | content | pell (t,u) | automorph |\n|---|---|---|---|\n" : "form,content,t,u,automorph\n");
    for (const auto& c : classes)
    {
        const std::string form = c["form"].dump();
        const std::string autom = c["automorph"].dump();
        const std::string t = c["pell"]["t"].dump(), u = c["pell"]["u"].dump();
        if (md)
            out << "| " << form << " | " << c["content"].dump() << " | (" << t << "," << u << ") | " << autom << " |\n";
        else
            out << "\"" << form << "\"," << c["content"].dump() << "," << t << "," << u << ",\"" << autom << "\"\n";
    }
    return kExitOk;
}

int exit_code_for(const error& e)
{
    if (e.kind() == "GeodesicCollision")
        return kExitCollision;
    if (e.kind() == "SquareDiscriminant" || e.kind() == "SquareEntry")
        return kExitSquare;
    if (e.kind() == "NoConvergence")
        return kExitVerifyFailed;
    return kExitInvalid;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact traces of cycle integrals of meromorphic modular forms f_{k,A}", "cycletrace"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "weight parameter (modular weight 2k), even")->capture_default_str();
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "markdown"}))
            ->capture_default_str();
    };
    auto add_class = [&](CLI::App* sub) {
        sub->add_option("--class", cfg.class_form, "positive definite form a,b,c (reduced internally)")
            ->capture_default_str();
    };
    auto add_oracle = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", cfg.rel_tol, "relative tolerance for exact vs numeric")->capture_default_str();
        sub->add_option("--quad-rel-tol", cfg.oracle.rel_tol, "oracle convergence tolerance")->capture_default_str();
        sub->add_option("--max-panels", cfg.oracle.max_panels)->capture_default_str();
        sub->add_option("--orbit-bound", cfg.oracle.orbit_bound)->capture_default_str();
        sub->add_option("--max-orbit-bound", cfg.oracle.max_orbit_bound)->capture_default_str();
    };

    auto* trace = app.add_subcommand("trace", "exact trace for one D, or a combination via --coeff");
    add_common(trace);
    add_class(trace);
    auto* trace_D = trace->add_option("--D", cfg.D, "positive nonsquare discriminant");
    trace->add_option("--coeff", cfg.coeffs, "coefficient a_F(-D) as D=p/q (repeatable)")->excludes(trace_D);

    auto* table = app.add_subcommand("table", "traces over a range of discriminants");
    add_common(table);
    add_class(table);
    table->add_option("--Dmin", cfg.Dmin, "smallest D (default 1)");
    table->add_option("--Dmax", cfg.Dmax, "largest D")->required();

    // ck prints a bare value by default; json is opt-in.
    auto* ckcmd = app.add_subcommand("ck", "the constant c_k(D)");
    ckcmd->add_option("--k", cfg.k, "weight parameter (modular weight 2k), even")->capture_default_str();
    ckcmd->add_option("--format", cfg.format, "output format (default text)")
        ->check(CLI::IsMember({"text", "json"}));
    ckcmd->preparse_callback([&](std::size_t) { cfg.format = "text"; });
    ckcmd->add_option("--D", cfg.D, "positive discriminant")->required();
    ckcmd->add_flag("--numeric", cfg.numeric, "also evaluate the L-series definition");
    ckcmd->add_option("--terms", cfg.terms, "L-series terms for --numeric")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "compare exact traces with numerical cycle integrals");
    add_common(verify);
    add_class(verify);
    auto* verify_D = verify->add_option("--D", cfg.D, "single discriminant");
    verify->add_option("--Dmin", cfg.Dmin, "range start")->excludes(verify_D);
    verify->add_option("--Dmax", cfg.Dmax, "range end")->excludes(verify_D);
    add_oracle(verify);

    auto* classes = app.add_subcommand("classes", "SL2(Z)-classes of forms of discriminant D");
    add_common(classes);
    classes->add_option("--D", cfg.D, "positive nonsquare discriminant")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try
    {
        if (*trace)
            return cmd_trace(cfg, out);
        if (*table)
            return cmd_table(cfg, out);
        if (*ckcmd)
            return cmd_ck(cfg, out);
        if (*verify)
            return cmd_verify(cfg, out, err);
        if (*classes)
            return cmd_classes(cfg, out);
    }
    catch (const error& e)
    {
        err << e.kind() << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitInvalid;
}

} // namespace cycletrace
