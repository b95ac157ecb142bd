// formred: command-line front end for the binary form reduction library.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 numeric non-convergence,
// 3 domain error (e.g. hyperbolic reduction of a form with real roots).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <formred/formred.hpp>

using namespace formred;

namespace {

char const * const coeff_note =
    "Coefficients are comma-separated decimal integers in DESCENDING powers of x:\n"
    "  c0,c1,...,cn  means  c0 x^n + c1 x^(n-1) y + ... + cn y^n.\n"
    "Write --coeffs=-1,0,1 when the first coefficient is negative.";

char const * const tie_note =
    "Shift rounding: the centre's real part is first quantized to --decimals places\n"
    "(round half to even, exact rational arithmetic), then rounded to an integer with\n"
    "exact halves resolved by --tie: up (toward +inf, default), zero (away from zero),\n"
    "even. The default {2 decimals, up} reproduces the reference comparison counts.";

char const * const region_note =
    "Regions: every candidate root x+iy has y >= 1 and 1 < x^2+y^2 <= r2^2.\n"
    "  halfdisc-exclude-i  all such points (the standard n-gon counts)\n"
    "  right-halfdisc      additionally x > 0";

binary_form parse_coeffs(std::string const & s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(item);
    if (parts.size() < 2) throw std::invalid_argument("--coeffs needs at least two coefficients");
    return form_from_strings(parts);
}

std::string json_coeffs(binary_form const & f)
{
    std::string s = "[";
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
        s += fmt::format("{}\"{}\"", i ? "," : "", f[i].get_str());
    return s + "]";
}

std::string json_matrix(unimodular_matrix const & m)
{
    return fmt::format("[[{},{}],[{},{}]]", m.a11, m.a12, m.a21, m.a22);
}

std::string json_point(uhp_point const & p) { return fmt::format("[{:.6f},{:.6f}]", p.t, p.u); }

std::string json_report(reduction_report const & r)
{
    std::string s = fmt::format("{{\"method\":\"{}\",\"input\":{},\"output\":{},\"matrix\":{},"
                                "\"scale\":\"{}\",\"input_height\":\"{}\",\"output_height\":\"{}\"",
                                to_string(r.method), json_coeffs(r.input), json_coeffs(r.output),
                                json_matrix(r.matrix), r.scale.get_str(), r.input_height.get_str(),
                                r.output_height.get_str());
    if (r.zero_used) s += fmt::format(",\"zero_used\":{}", json_point(*r.zero_used));
    if (!r.stages.empty()) {
        s += ",\"stages\":[";
        for (std::size_t i = 0; i < r.stages.size(); ++i)
            s += fmt::format("{}{{\"method\":\"{}\",\"input_height\":\"{}\",\"output_height\":\"{}\"}}",
                             i ? "," : "", to_string(r.stages[i].method),
                             r.stages[i].input_height.get_str(), r.stages[i].output_height.get_str());
        s += "]";
    }
    return s + "}";
}

std::string to_text(binary_form const & f)
{
    std::ostringstream o;
    o << f;
    return o.str();
}

void print_report(reduction_report const & r)
{
    fmt::print("method         {}\n", to_string(r.method));
    fmt::print("input          {}\n", to_text(r.input));
    fmt::print("output         {}\n", to_text(r.output));
    fmt::print("matrix         {}\n", json_matrix(r.matrix));
    fmt::print("scale          {}\n", r.scale.get_str());
    fmt::print("input height   {}\n", r.input_height.get_str());
    fmt::print("output height  {}\n", r.output_height.get_str());
    if (r.zero_used) fmt::print("centre         ({:.6f}, {:.6f})\n", r.zero_used->t, r.zero_used->u);
    for (auto const & s : r.stages)
        fmt::print("  stage {:<14} {} -> {}\n", to_string(s.method), s.input_height.get_str(),
                   s.output_height.get_str());
}

shift_rounding make_rounding(std::string const & tie, int decimals)
{
    return {decimals, parse_tie_rule(tie)};
}

void add_rounding_flags(CLI::App * cmd, std::string & tie, int & decimals)
{
    cmd->add_option("--tie", tie, "tie rule for exact halves: up, zero, even")
        ->check(CLI::IsMember({"up", "zero", "even"}));
    cmd->add_option("--decimals", decimals, "decimal places kept before rounding (-1: none)");
}

void add_region_flag(CLI::App * cmd, std::string & region)
{
    cmd->add_option("--region", region, "root region: halfdisc-exclude-i, right-halfdisc")
        ->check(CLI::IsMember({"halfdisc-exclude-i", "right-halfdisc"}));
}

std::vector<long> parse_longs(std::string const & s)
{
    std::vector<long> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long x = std::stol(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("not an integer: " + item);
        v.push_back(x);
    }
    return v;
}

void write_text(std::string const & path, std::string const & text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"formred: reduce integer binary forms to small height; regenerate n-gon databases"};
    app.require_subcommand(1);
    app.footer(std::string(coeff_note) + "\n\nExit codes: 0 ok, 1 usage/I-O, 2 numeric, 3 domain.");

    // reduce
    std::string coeffs, method = "hyperbolic", tie = "up";
    int decimals = 2;
    bool json = false;
    auto * reduce_cmd = app.add_subcommand("reduce", "one geometric reduction step");
    reduce_cmd->add_option("--coeffs", coeffs, "form coefficients, descending x power")->required();
    reduce_cmd->add_option("--method", method, "julia, hyperbolic or com")
        ->check(CLI::IsMember({"julia", "hyperbolic", "com"}));
    add_rounding_flags(reduce_cmd, tie, decimals);
    reduce_cmd->add_flag("--json", json, "machine-readable output");
    reduce_cmd->footer(std::string(coeff_note) + "\n" + tie_note
                       + "\nhyperbolic needs a form without real roots (exit 3 otherwise);"
                         "\ncom shifts by the rounded mean real part of the upper roots.");

    // minimize
    int patience = 3;
    unsigned long scale_bound = 64;
    auto * min_cmd = app.add_subcommand("minimize", "full pipeline: geometric start, shift descent, scaling");
    min_cmd->add_option("--coeffs", coeffs, "form coefficients, descending x power")->required();
    min_cmd->add_option("--patience", patience, "shift window of the descent")->check(CLI::PositiveNumber);
    min_cmd->add_option("--scale-bound", scale_bound, "largest u, v tried in x -> (u/v) x")
        ->check(CLI::PositiveNumber);
    add_rounding_flags(min_cmd, tie, decimals);
    min_cmd->add_flag("--json", json, "machine-readable output");
    min_cmd->footer(std::string(coeff_note) + "\n" + tie_note);

    // gen
    int k = 3, r2 = 4;
    unsigned workers = 1;
    std::string out_path, region;
    bool no_store = false, allow_large = false;
    auto * gen_cmd = app.add_subcommand("gen", "stream the k-gon database as JSONL");
    gen_cmd->add_option("--k", k, "roots per form (form degree 2k)")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--r2", r2, "outer radius")->check(CLI::Range(2, 1 << 20));
    gen_cmd->add_option("--out", out_path, "output file (default: stdout)");
    gen_cmd->add_flag("--no-store", no_store, "compute every record but write none");
    gen_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--allow-large", allow_large, "permit r2 > 64");
    gen_cmd->add_flag("--json", json, "print the summary as JSON on stdout");
    add_region_flag(gen_cmd, region);
    gen_cmd->footer(std::string(region_note)
                    + "\nRecords appear in lexicographic order of the sorted root index sets,"
                      "\nidentically for any worker count.");

    // compare
    std::string same = "height";
    auto * cmp_cmd = app.add_subcommand("compare", "centre of mass vs hyperbolic centroid shifts");
    cmp_cmd->add_option("--k", k, "roots per form")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--r2", r2, "outer radius")->check(CLI::Range(2, 1 << 20));
    add_rounding_flags(cmp_cmd, tie, decimals);
    cmp_cmd->add_option("--same", same, "what counts as the same result: height, shift")
        ->check(CLI::IsMember({"height", "shift"}));
    cmp_cmd->add_option("--out", out_path, "also write the statistics JSON here");
    cmp_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    cmp_cmd->add_flag("--allow-large", allow_large, "permit r2 > 64");
    cmp_cmd->add_flag("--json", json, "machine-readable output");
    add_region_flag(cmp_cmd, region);
    cmp_cmd->footer(std::string(tie_note) + "\n" + region_note
                    + "\nPer form the two rounded shifts are applied and heights compared;"
                      "\nthe strictly lower one wins, equal heights count as the same result.");

    // maxdist
    std::string metric = "euclidean", hyp_u = "harmonic", md_region = "right-halfdisc";
    auto * md_cmd = app.add_subcommand("maxdist", "k-gon with the largest centre of mass / centroid gap");
    md_cmd->add_option("--k", k, "roots per form")->check(CLI::PositiveNumber);
    md_cmd->add_option("--r2", r2, "outer radius")->check(CLI::Range(2, 1 << 20));
    md_cmd->add_option("--metric", metric, "euclidean or hyperbolic")
        ->check(CLI::IsMember({"euclidean", "hyperbolic"}));
    md_cmd->add_option("--hyp-u", hyp_u, "height of the hyperbolic centre: harmonic or centroid")
        ->check(CLI::IsMember({"harmonic", "centroid"}));
    md_cmd->add_option("--region", md_region, "root region: right-halfdisc (default), halfdisc-exclude-i")
        ->check(CLI::IsMember({"halfdisc-exclude-i", "right-halfdisc"}));
    md_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    md_cmd->add_flag("--allow-large", allow_large, "permit r2 > 64");
    md_cmd->add_flag("--json", json, "machine-readable output");
    md_cmd->footer(std::string(region_note)
                   + "\nDefaults (right-halfdisc, euclidean, harmonic: u = k / sum(1/y)) reproduce the"
                     "\nreference triangle witness. Ties go to the lexicographically smallest root set.");

    // quad
    std::string qreduce;
    long disc = 0;
    bool primitive_only = false;
    auto * quad_cmd = app.add_subcommand("quad", "binary quadratic forms");
    auto * qr_opt = quad_cmd->add_option("--reduce", qreduce, "reduce a,b,c (positive definite)");
    auto * qe_opt = quad_cmd->add_option("--enumerate-disc", disc, "list reduced forms of discriminant -D");
    qr_opt->excludes(qe_opt);
    quad_cmd->add_flag("--primitive", primitive_only, "only primitive forms (class number)");
    quad_cmd->add_flag("--json", json, "machine-readable output");
    quad_cmd->footer("Reduced means |b| <= a <= c, with b >= 0 when |b| = a or a = c.");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const & e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const & e) {
        return app.exit(e);
    } catch (CLI::ParseError const & e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*reduce_cmd) {
            auto f = parse_coeffs(coeffs);
            auto rounding = make_rounding(tie, decimals);
            reduction_report r = method == "julia"        ? julia_reduce(f)
                                 : method == "hyperbolic" ? reduce_hyperbolic(f, rounding)
                                                          : reduce_com(f, rounding);
            if (json)
                fmt::print("{}\n", json_report(r));
            else
                print_report(r);
        } else if (*min_cmd) {
            auto f = parse_coeffs(coeffs);
            minimize_options opt{patience, scale_bound, make_rounding(tie, decimals)};
            auto r = minimize(f, opt);
            if (json)
                fmt::print("{}\n", json_report(r));
            else
                print_report(r);
        } else if (*gen_cmd) {
            lattice_config cfg{r2, k};
            if (!region.empty()) cfg.region = parse_region(region);
            cfg.allow_large = allow_large;
            generate_summary s;
            if (no_store) {
                s = generate(cfg, workers, nullptr);
            } else if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
                s = generate(cfg, workers, [&](std::string const & text) { out << text; });
                out.flush();
                if (!out) throw std::runtime_error("write failed: " + out_path);
            } else {
                s = generate(cfg, workers, [](std::string const & text) {
                    std::fwrite(text.data(), 1, text.size(), stdout);
                });
            }
            std::string summary = fmt::format("{{\"records\":{},\"checksum\":{},\"region\":\"{}\",\"r2\":{},\"k\":{}}}",
                                              s.records, s.checksum, to_string(cfg.region), r2, k);
            // records may be on stdout: the summary goes there only when asked
            if (json && (no_store || !out_path.empty()))
                fmt::print("{}\n", summary);
            else
                fmt::print(stderr, "{}\n", summary);
        } else if (*cmp_cmd) {
            lattice_config cfg{r2, k};
            if (!region.empty()) cfg.region = parse_region(region);
            cfg.allow_large = allow_large;
            compare_options opt{make_rounding(tie, decimals), parse_same_rule(same), workers};
            auto s = run_compare(cfg, opt);
            std::string conv = fmt::format("{}/{}", to_string(opt.rounding.tie),
                                           decimals < 0 ? std::string("exact")
                                                        : fmt::format("{}dp", decimals));
            std::string text = fmt::format(
                "{{\"total\":{},\"hyperbolic\":{},\"julia\":{},\"same\":{},\"tie_convention\":\"{}\","
                "\"region\":\"{}\",\"r2\":{},\"k\":{}}}",
                s.total, s.hyperbolic_wins, s.julia_wins, s.same, conv, to_string(cfg.region), r2, k);
            if (!out_path.empty()) write_text(out_path, text + "\n");
            if (json) {
                fmt::print("{}\n", text);
            } else {
                fmt::print("forms                  {}\n", s.total);
                fmt::print("hyperbolic lower       {}\n", s.hyperbolic_wins);
                fmt::print("centre of mass lower   {}\n", s.julia_wins);
                fmt::print("same result            {}\n", s.same);
                fmt::print("convention             {}, same = {}\n", conv, same);
            }
        } else if (*md_cmd) {
            lattice_config cfg{r2, k, parse_region(md_region), allow_large};
            max_distance_options opt{parse_metric(metric), parse_hyp_height(hyp_u), workers};
            auto r = max_distance(cfg, opt);
            if (r.distance < 0) throw std::invalid_argument("no k-gon in this configuration");
            std::string rec = format_record(r.record);
            rec.pop_back();
            if (json) {
                fmt::print("{},\"distance\":{:.6f},\"examined\":{},\"metric\":\"{}\",\"hyp_u\":\"{}\","
                           "\"region\":\"{}\"}}\n",
                           rec, r.distance, r.examined, metric, hyp_u, md_region);
            } else {
                std::string roots;
                for (auto const & p : r.record.roots)
                    roots += fmt::format("{}({},{})", roots.empty() ? "" : " ", p.x, p.y);
                fmt::print("roots      {}\n", roots);
                fmt::print("distance   {:.6f} ({}, hyperbolic height {})\n", r.distance, metric, hyp_u);
                fmt::print("com        ({:.6f}, {:.6f})\n", r.record.com.t, r.record.com.u);
                fmt::print("centroid   ({:.6f}, {:.6f})\n", r.record.hyp.t, r.record.hyp.u);
                fmt::print("examined   {}\n", r.examined);
            }
        } else if (*quad_cmd) {
            if (!qreduce.empty()) {
                auto v = parse_longs(qreduce);
                if (v.size() != 3) throw std::invalid_argument("--reduce needs a,b,c");
                quadratic_form<std::int64_t> q{v[0], v[1], v[2]};
                auto r = reduce(q);
                auto z = zero_map(r.form);
                if (json)
                    fmt::print("{{\"input\":[{},{},{}],\"reduced\":[{},{},{}],\"matrix\":{},"
                               "\"discriminant\":{},\"zero\":{}}}\n",
                               q.a, q.b, q.c, r.form.a, r.form.b, r.form.c, json_matrix(r.matrix),
                               q.discriminant(), json_point(z));
                else
                    fmt::print("[{},{},{}] -> [{},{},{}]  matrix {}  disc {}  zero ({:.6f}, {:.6f})\n",
                               q.a, q.b, q.c, r.form.a, r.form.b, r.form.c, json_matrix(r.matrix),
                               q.discriminant(), z.t, z.u);
            } else if (*qe_opt) {
                auto forms = enumerate_reduced(disc, primitive_only);
                if (json) {
                    std::string list;
                    for (auto const & q : forms)
                        list += fmt::format("{}[{},{},{}]", list.empty() ? "" : ",", q.a, q.b, q.c);
                    fmt::print("{{\"D\":{},\"forms\":[{}],\"count\":{}}}\n", disc, list, forms.size());
                } else {
                    for (auto const & q : forms)
                        fmt::print("[{},{},{}]\n", q.a, q.b, q.c);
                    fmt::print("count {}\n", forms.size());
                }
            } else {
                throw std::invalid_argument("quad needs --reduce or --enumerate-disc");
            }
        }
    } catch (numeric_error const & e) {
        fmt::print(stderr, "numeric error: {}\n", e.what());
        return 2;
    } catch (domain_error const & e) {
        fmt::print(stderr, "domain error: {}\n", e.what());
        return 3;
    } catch (std::exception const & e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
