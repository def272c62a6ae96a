// volpic: solves second-kind Volterra integral equations with separable
// kernels by auxiliary-variable polynomialization and Picard iteration over
// truncated power series.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "volpic/oracle.hpp"
#include "volpic/picard.hpp"
#include "volpic/polynomialize.hpp"

using json = nlohmann::ordered_json;
using namespace volpic;

namespace {

struct Options {
    std::string file;
    std::string inline_equation;
    int order = -1;
    int iters = -1;
    int precision = -1;
    std::string backend = "auto";
    std::string format = "text";
    std::string out;
    std::string reference;
    std::string window;
    int samples = 9;
    std::string oracle_h;
};

struct Resolved {
    EquationFile ef;
    int order = 9;
    int iters = 0;  // 0: stabilize mode with the default budget
    int precision = Coefficient::default_digits;
    Backend backend = Backend::rational;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("file", o.file, "equation file (.vie)");
    cmd->add_option("-e,--equation", o.inline_equation, "inline equation text");
    cmd->add_option("--order", o.order, "truncation order N");
    cmd->add_option("--iters", o.iters, "fixed number of Picard iterations");
    cmd->add_option("--precision", o.precision, "float precision in decimal digits");
    cmd->add_option("--backend", o.backend, "rational | float (default: auto)")
        ->check(CLI::IsMember({"auto", "rational", "float"}));
    cmd->add_option("--format", o.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", o.out, "write output to a file instead of stdout");
}

Resolved resolve(const Options& o, const AugmentedSystem* sys = nullptr) {
    Resolved r;
    if (!o.file.empty())
        r.ef = load_vie(o.file);
    else if (!o.inline_equation.empty())
        r.ef = parse_vie(o.inline_equation, "inline");
    else
        throw parse_error("no equation given (pass a .vie file or --equation)", 0, 0);
    if (r.ef.order) r.order = *r.ef.order;
    if (r.ef.iters) r.iters = *r.ef.iters;
    if (r.ef.precision) r.precision = *r.ef.precision;
    if (o.order >= 0) r.order = o.order;
    if (o.iters >= 0) r.iters = o.iters;
    if (o.precision >= 0) r.precision = o.precision;
    if (r.order < 0) r.order = 9;
    if (r.precision < Coefficient::min_digits) r.precision = Coefficient::min_digits;
    if (o.backend == "rational")
        r.backend = Backend::rational;
    else if (o.backend == "float")
        r.backend = Backend::bigfloat;
    else if (sys)
        r.backend = sys->rational_initials() ? Backend::rational : Backend::bigfloat;
    return r;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

std::string backend_name(Backend b) {
    return b == Backend::rational ? "rational" : "float";
}

json series_json(const Series& s, const std::string& name) {
    json rec;
    rec["name"] = name;
    rec["point"] = s.point().str();
    rec["order"] = s.order();
    rec["backend"] = backend_name(s.backend());
    json coeffs = json::array();
    for (int j = 0; j <= s.order(); ++j) coeffs.push_back(s[j].str());
    rec["coeffs"] = coeffs;
    return rec;
}

// "1.00000 - 0.84147 t + 0.22732 t^2 ..." with exactly-zero terms skipped.
std::string pretty_series(const Series& s, int places) {
    const Coefficient& a = s.point();
    std::string u = a.is_zero() ? "t" : "(t - " + a.str() + ")";
    std::string out;
    for (int j = 0; j <= s.order(); ++j) {
        if (s[j].is_zero()) continue;
        std::string mag = s[j].abs().decimal(places);
        bool neg = s[j].sign() < 0;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += mag;
        if (j >= 1) out += " " + u;
        if (j >= 2) out += "^" + std::to_string(j);
    }
    if (out.empty()) out = Coefficient(0L).decimal(places);
    return out;
}

SolveMode pick_mode(const Resolved& r) {
    return r.iters > 0 ? SolveMode::fixed_iters : SolveMode::stabilize;
}

int iter_budget(const Resolved& r) {
    return r.iters > 0 ? r.iters : default_budget(r.order);
}

int run_check(const Options& o) {
    Resolved r = resolve(o);
    const Equation& eq = r.ef.equation;
    if (o.format == "json") {
        json doc;
        doc["label"] = eq.label;
        doc["lower"] = eq.lower.str();
        doc["phi"] = to_string(eq.phi);
        json terms = json::array();
        for (const auto& t : eq.terms)
            terms.push_back({{"f", to_string(t.f)}, {"kernel", to_string(t.kernel)}});
        doc["terms"] = terms;
        doc["order"] = r.order;
        doc["iters"] = iter_budget(r);
        doc["precision"] = r.precision;
        emit(o, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "label: " << eq.label << "\n";
    out << "lower limit: a = " << eq.lower.str() << "\n";
    out << "phi(t) = " << to_string(eq.phi) << "\n";
    if (eq.terms.empty()) out << "no integral term\n";
    for (const auto& t : eq.terms) {
        out << "separable: f(t) = " << to_string(t.f) << "\n";
        out << "  kernel(s, y) = " << to_string(t.kernel) << "\n";
    }
    emit(o, out.str());
    return 0;
}

int run_show_system(const Options& o) {
    Resolved pre = resolve(o);
    AugmentedSystem sys = assemble(pre.ef.equation);
    Resolved r = resolve(o, &sys);
    auto name = [&](VarId v) { return default_var_name(v); };
    auto initials = sys.initial_values(r.backend, r.precision);

    if (o.format == "json") {
        json doc;
        doc["label"] = sys.source.label;
        doc["lower"] = sys.lower.str();
        doc["backend"] = backend_name(r.backend);
        doc["y0"] = initials[0].str();
        json vars = json::array();
        for (const auto& v : sys.vars) {
            vars.push_back({{"name", name(v.id)},
                            {"defining", to_string(v.defining)},
                            {"initial", initials[v.id].str()},
                            {"rhs", v.rhs.str(name)}});
        }
        doc["variables"] = vars;
        json yrule;
        yrule["explicit"] = sys.y_rule.explicit_part.str(name);
        json terms = json::array();
        for (const auto& [outer, integrand] : sys.y_rule.integral_terms)
            terms.push_back({{"outer", outer.str(name)}, {"integrand", integrand.str(name)}});
        yrule["integral_terms"] = terms;
        doc["y_rule"] = yrule;
        doc["y_prime"] = sys.y_prime ? json(sys.y_prime->str(name)) : json(nullptr);
        emit(o, doc.dump(2) + "\n");
        return 0;
    }

    std::ostringstream out;
    out << "label: " << sys.source.label << "\n";
    if (sys.vars.empty())
        out << "no auxiliary variables required\n";
    else
        out << sys.vars.size() << " auxiliary variable"
            << (sys.vars.size() == 1 ? "" : "s") << "\n";
    out << "y(" << sys.lower.str() << ") = " << initials[0].str() << "\n";
    for (const auto& v : sys.vars) {
        out << name(v.id) << " := " << to_string(v.defining) << ", " << name(v.id) << "("
            << sys.lower.str() << ") = " << initials[v.id].str() << ", " << name(v.id)
            << "' = " << v.rhs.str(name) << "\n";
    }
    out << "y = " << sys.y_rule.explicit_part.str(name);
    for (const auto& [outer, integrand] : sys.y_rule.integral_terms)
        out << " + (" << outer.str(name) << ")*int(" << integrand.str(name) << " ds)";
    out << "\n";
    for (const auto& v : sys.vars)
        out << name(v.id) << " = " << initials[v.id].str() << " + int(" << v.rhs.str(name)
            << " ds)\n";
    if (sys.y_prime) out << "y' = " << sys.y_prime->str(name) << "\n";
    emit(o, out.str());
    return 0;
}

json solve_report_json(const AugmentedSystem& sys, const SolveReport& rep,
                       Backend backend, int order) {
    json doc;
    doc["label"] = sys.source.label;
    doc["backend"] = backend_name(backend);
    doc["order"] = order;
    doc["iterations"] = rep.iterations;
    doc["trace"] = rep.trace;
    json comps = json::array();
    for (std::size_t c = 0; c < rep.final_state.components.size(); ++c)
        comps.push_back(series_json(rep.final_state.components[c],
                                    sys.component_name(static_cast<int>(c))));
    doc["components"] = comps;
    json rounded = json::array();
    for (const auto& cs : rep.final_state.components[0].rounded_coeffs(5))
        rounded.push_back(cs);
    doc["rounded_y"] = rounded;
    return doc;
}

int run_solve(const Options& o) {
    Resolved pre = resolve(o);
    AugmentedSystem sys = assemble(pre.ef.equation);
    Resolved r = resolve(o, &sys);
    SolveReport rep =
        solve(sys, r.order, iter_budget(r), pick_mode(r), r.backend, r.precision);
    std::cerr << "solved in " << rep.wall_ms << " ms\n";

    if (o.format == "json") {
        emit(o, solve_report_json(sys, rep, r.backend, r.order).dump(2) + "\n");
        return 0;
    }
    if (o.format == "csv") {
        std::ostringstream out;
        out << "component,power,coefficient\n";
        for (std::size_t c = 0; c < rep.final_state.components.size(); ++c) {
            const Series& s = rep.final_state.components[c];
            for (int j = 0; j <= s.order(); ++j)
                out << sys.component_name(static_cast<int>(c)) << "," << j << ","
                    << s[j].str() << "\n";
        }
        emit(o, out.str());
        return 0;
    }
    std::ostringstream out;
    out << "label: " << sys.source.label << "\n";
    out << "backend: " << backend_name(r.backend) << "  order: " << r.order
        << "  iterations: " << rep.iterations << "\n";
    out << "y ~ " << pretty_series(rep.final_state.components[0], 5) << "\n";
    out << "stable degree trace:";
    for (int d : rep.trace) out << " " << d;
    out << "\n";
    emit(o, out.str());
    return 0;
}

int run_residual(const Options& o) {
    Resolved pre = resolve(o);
    AugmentedSystem sys = assemble(pre.ef.equation);
    Resolved r = resolve(o, &sys);
    SolveReport rep =
        solve(sys, r.order, iter_budget(r), pick_mode(r), r.backend, r.precision);
    auto res = residual(sys, rep.final_state);

    if (o.format == "json") {
        json doc;
        doc["label"] = sys.source.label;
        doc["backend"] = backend_name(r.backend);
        doc["stable_degree"] = rep.final_state.stable_degree;
        json comps = json::array();
        for (std::size_t c = 0; c < res.size(); ++c)
            comps.push_back(series_json(res[c], sys.component_name(static_cast<int>(c))));
        doc["components"] = comps;
        emit(o, doc.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    if (o.format == "csv") {
        out << "component,power,residual\n";
        for (std::size_t c = 0; c < res.size(); ++c)
            for (int j = 0; j <= res[c].order(); ++j)
                out << sys.component_name(static_cast<int>(c)) << "," << j << ","
                    << res[c][j].str() << "\n";
        emit(o, out.str());
        return 0;
    }
    out << "label: " << sys.source.label << "\n";
    out << "stable degree: " << rep.final_state.stable_degree << "\n";
    for (std::size_t c = 0; c < res.size(); ++c) {
        out << sys.component_name(static_cast<int>(c)) << " residual:";
        for (int j = 0; j <= res[c].order(); ++j) out << " " << res[c][j].str();
        out << "\n";
    }
    emit(o, out.str());
    return 0;
}

int run_compare(const Options& o) {
    Resolved pre = resolve(o);
    AugmentedSystem sys = assemble(pre.ef.equation);
    Resolved r = resolve(o, &sys);
    if (o.reference.empty() && o.oracle_h.empty()) {
        std::cerr << "compare needs --reference and/or --oracle-h\n";
        return 1;
    }
    SolveReport rep =
        solve(sys, r.order, iter_budget(r), pick_mode(r), r.backend, r.precision);
    const Series& y = rep.final_state.components[0];
    int digits = std::max(r.precision, Coefficient::default_digits);
    Series yf = promoted(y, digits);

    Coefficient lo = sys.lower, hi = sys.lower + Coefficient(1L);
    if (!o.window.empty()) {
        auto dots = o.window.find("..");
        if (dots == std::string::npos)
            throw std::invalid_argument("--window expects the form a..b");
        lo = Coefficient::from_string(o.window.substr(0, dots));
        hi = Coefficient::from_string(o.window.substr(dots + 2));
    }

    std::optional<Expr> ref;
    if (!o.reference.empty()) ref = parse_reference(o.reference);

    struct Row {
        Coefficient t, series, reference, error;
    };
    std::vector<Row> rows;
    Coefficient max_err = Coefficient::zero(Backend::bigfloat, digits);
    if (ref) {
        int m = std::max(1, o.samples);
        for (int i = 0; i < m; ++i) {
            Coefficient frac = m == 1 ? Coefficient(0L) : Coefficient(i, m - 1);
            Coefficient t = (lo + (hi - lo) * frac).promote(digits);
            Coefficient sv = yf.evaluate(t);
            Coefficient rv = eval_numeric(*ref, {{"t", t}}, digits);
            Coefficient err = (sv - rv).abs();
            if (max_err.cmp(err) < 0) max_err = err;
            rows.push_back({t, sv, rv, err});
        }
    }

    std::optional<Coefficient> oracle_dev;
    Coefficient h(0L);
    if (!o.oracle_h.empty()) {
        h = Coefficient::from_string(o.oracle_h);
        GridSolution grid = trapezoid_solve(sys.source, h, hi, digits);
        oracle_dev = compare_max_abs(yf, grid, lo, hi);
    }

    if (o.format == "json") {
        json doc;
        doc["label"] = sys.source.label;
        doc["window"] = {lo.str(), hi.str()};
        if (ref) {
            json samples = json::array();
            for (const auto& row : rows)
                samples.push_back({{"t", row.t.str()},
                                   {"series", row.series.str()},
                                   {"reference", row.reference.str()},
                                   {"error", row.error.str()}});
            doc["samples"] = samples;
            doc["max_error"] = max_err.str();
        }
        if (oracle_dev) {
            doc["oracle"] = {{"h", h.str()}, {"max_deviation", oracle_dev->str()}};
        }
        emit(o, doc.dump(2) + "\n");
        return 0;
    }
    if (o.format == "csv") {
        std::ostringstream out;
        out << "t,series,reference,abs_error\n";
        for (const auto& row : rows)
            out << row.t.str() << "," << row.series.str() << "," << row.reference.str()
                << "," << row.error.str() << "\n";
        emit(o, out.str());
        return 0;
    }
    std::ostringstream out;
    out << "label: " << sys.source.label << "\n";
    out << "window: [" << lo.str() << ", " << hi.str() << "]\n";
    if (ref) {
        for (const auto& row : rows)
            out << "t = " << row.t.decimal(5) << "  series = " << row.series.str()
                << "  reference = " << row.reference.str()
                << "  |error| = " << row.error.str() << "\n";
        out << "max |series - reference|: " << max_err.str() << "\n";
    }
    if (oracle_dev)
        out << "max |series - trapezoid(h=" << h.str() << ")|: " << oracle_dev->str()
            << "\n";
    emit(o, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "volpic: symbolic Picard iteration for separable-kernel Volterra equations"};
    app.require_subcommand(1);

    Options check_o, show_o, solve_o, compare_o, residual_o;
    CLI::App* c_check = app.add_subcommand("check", "parse and report the kernel split");
    add_common(c_check, check_o);
    CLI::App* c_show =
        app.add_subcommand("show-system", "print the polynomialized augmented system");
    add_common(c_show, show_o);
    CLI::App* c_solve = app.add_subcommand("solve", "run the Picard iteration");
    add_common(c_solve, solve_o);
    CLI::App* c_compare =
        app.add_subcommand("compare", "error profile against a reference / the oracle");
    add_common(c_compare, compare_o);
    c_compare->add_option("--reference", compare_o.reference,
                          "closed-form reference expression in t");
    c_compare->add_option("--window", compare_o.window, "comparison window a..b");
    c_compare->add_option("--samples", compare_o.samples, "number of sample points");
    c_compare->add_option("--oracle-h", compare_o.oracle_h,
                          "trapezoid oracle step size");
    CLI::App* c_res =
        app.add_subcommand("residual", "right-hand side minus the converged iterate");
    add_common(c_res, residual_o);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(c_check)) return run_check(check_o);
        if (app.got_subcommand(c_show)) return run_show_system(show_o);
        if (app.got_subcommand(c_solve)) return run_solve(solve_o);
        if (app.got_subcommand(c_compare)) return run_compare(compare_o);
        if (app.got_subcommand(c_res)) return run_residual(residual_o);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const closure_error& e) {
        std::cerr << "polynomialization error: " << e.what() << "\n";
        return 3;
    } catch (const solve_error& e) {
        std::cerr << "solve error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
