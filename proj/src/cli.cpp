#include "sieve/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <memory>
#include <json.hpp>
#include <sstream>
#include <variant>

#include "sieve/errors.hpp"
#include "sieve/localspec.hpp"
#include "sieve/verify.hpp"

namespace sieve {

double parse_budget(const std::string& text)
{
    if (text.empty()) throw PreconditionError("empty budget");
    double scale = 1.0;
    std::string num = text;
    switch (text.back()) {
    case 's': num.pop_back(); break;
    case 'm': num.pop_back(); scale = 60.0; break;
    case 'h': num.pop_back(); scale = 3600.0; break;
    default: break;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(num, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != num.size() || !(v > 0.0)) throw PreconditionError("bad budget '" + text + "'");
    return v * scale;
}

namespace {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

void write_table(const Table& t, const std::string& format, std::ostream& out)
{
    if (format == "json") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size(); ++i)
                std::visit([&](const auto& v) { obj[t.header[i]] = v; }, row[i]);
            arr.push_back(obj);
        }
        out << arr.dump(2) << '\n';
        return;
    }
    CsvWriter w(out, t.header);
    for (const auto& row : t.rows) {
        for (const auto& c : row) std::visit([&](const auto& v) { w.cell(v); }, c);
        w.end_row();
    }
}

std::vector<double> linear_grid(double lo, double hi, std::int64_t points)
{
    std::vector<double> g;
    if (points <= 0 || lo > hi) return g;
    if (points == 1) return {lo};
    for (std::int64_t i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

std::vector<double> geometric_grid(double lo, double hi, std::int64_t points)
{
    std::vector<double> g;
    if (points <= 0 || lo > hi) return g;
    if (points == 1) return {lo};
    if (!(lo > 0.0)) throw PreconditionError("geometric grid needs lo > 0");
    for (std::int64_t i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1)));
    return g;
}

std::shared_ptr<const ArithCache> cache_for(std::int64_t limit) { return std::make_shared<ArithCache>(limit); }

Table kernel_table(const CliConfig& c)
{
    const auto k = build_weight(c.m);
    Table t{{"t", "W"}, {}};
    for (double x : linear_grid(c.lo.value_or(1.0), c.hi.value_or(2.0), c.points.value_or(512))) t.rows.push_back({x, k(x)});
    return t;
}

Table transform_table(const CliConfig& c, std::ostream& err)
{
    const auto k = build_weight(c.m);
    if (c.which == "star") {
        TransformConfig cfg;
        cfg.cache = cache_for(cfg.series_cap);
        cfg.quad_tol = c.tol;
        Table t{{"z", "W_star", "err_bound", "terms"}, {}};
        for (double z : linear_grid(c.lo.value_or(1e-4), c.hi.value_or(3.0), c.points.value_or(1024))) {
            const auto s = w_star_series(k, cfg, z);
            t.rows.push_back({z, s.value, s.error_bound, static_cast<long long>(s.terms)});
        }
        return t;
    }
    if (c.which == "hat") {
        const double umax = std::max(std::abs(c.lo.value_or(0.0)), std::abs(c.hi.value_or(3.0)));
        const auto cache = cache_for(std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(2.0 * umax)) + 2));
        Table t{{"u", "W_hat_star"}, {}};
        for (double u : linear_grid(c.lo.value_or(0.0), c.hi.value_or(3.0), c.points.value_or(1024))) t.rows.push_back({u, w_hat_star(k, *cache, u)});
        const double h0 = w_hat_star(k, *cache, 0.0), h1 = w_hat_star(k, *cache, 1.0);
        err << "hat(1) - hat(0) = " << format_double(h1 - h0) << '\n';
        return t;
    }
    throw PreconditionError("--which must be star or hat");
}

Table spectrum_table(const CliConfig& c)
{
    if (c.L < 1 || c.L > c.M) throw PreconditionError("need 1 <= L <= M");
    const auto k = build_weight(c.m);
    TransformConfig cfg;
    cfg.cache = cache_for(cfg.series_cap);
    cfg.quad_tol = 1e-8;
    const auto s = nystrom_spectrum(k, cfg, c.tau_over_h, c.M, 1);
    Table t{{"ell", "lambda", "lambda_sqrt_ell", "lambda_ell", "partial_sum"}, {}};
    double sum = 0.0;
    for (std::int64_t l = 1; l <= c.L; ++l) {
        const double lam = s.eigenvalues[static_cast<std::size_t>(l - 1)];
        sum += lam;
        const double dl = static_cast<double>(l);
        t.rows.push_back({static_cast<long long>(l), lam, lam * std::sqrt(dl), lam * dl, sum});
    }
    return t;
}

Table lowerbound_table(const CliConfig& c, std::ostream& err)
{
    const std::int64_t N = c.N.value_or(200);
    if (N < 8) throw PreconditionError("lowerbound-scan needs N >= 8");
    const double dN = static_cast<double>(N);
    const auto Qs = geometric_grid(c.lo.value_or(dN / 2.0), c.hi.value_or(20.0 * dN), c.points.value_or(12));
    double qmax = 1.0;
    for (double q : Qs) qmax = std::max(qmax, q);
    const auto cache = cache_for(std::max<std::int64_t>(static_cast<std::int64_t>(2.0 * qmax) + 2, N + 2));
    const auto scan = lowerbound_scan(lowerbound_family(N, c.seed), Qs, *cache);
    Table t{{"label", "N", "Q", "N_over_Q", "ratio"}, {}};
    for (const auto& r : scan.rows) t.rows.push_back({r.label, static_cast<long long>(r.N), r.Q, r.N_over_Q, r.ratio});
    for (const auto& f : scan.fits)
        err << f.label << ": exponent " << format_double(f.exponent) << ", log A " << format_double(f.log_A) << (f.positive ? "" : ", NOT POSITIVE") << '\n';
    return t;
}

int verify(const CliConfig& c, std::ostream& out, std::ostream& err)
{
    VerifyConfig v;
    v.m = c.m;
    v.M = c.M;
    v.seed = c.seed;
    v.budget_seconds = c.budget_seconds;
    const auto reports = run_suite(c.suite, v);
    out << to_json(reports) << '\n';
    int failed = 0;
    for (const auto& r : reports)
        if (!r.pass) {
            ++failed;
            err << "FAIL " << r.check_id << " residual " << format_double(r.residual) << " tolerance " << format_double(r.tolerance) << '\n';
        }
    err << reports.size() - static_cast<std::size_t>(failed) << " of " << reports.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

void validate_sieve(const CliConfig& c)
{
    if (!c.Q && !c.H && !c.C && !c.E && !c.U) return;
    SieveParams p;
    p.Q = c.Q.value_or(p.Q);
    p.H = c.H.value_or(p.H);
    p.C = c.C.value_or(p.C);
    p.E = c.E.value_or(p.E);
    p.U = c.U;
    p.validate();
}

void add_common(CLI::App* sub, CliConfig& c)
{
    sub->add_option("-m,--order", c.m, "kernel order (>= 5)");
    sub->add_option("-Q,--big-q", c.Q, "Q");
    sub->add_option("-N,--length", c.N, "sequence length");
    sub->add_option("-H,--h-max", c.H, "H");
    sub->add_option("-C,--c-cut", c.C, "C");
    sub->add_option("-E,--e-cut", c.E, "E");
    sub->add_option("-U,--u-cut", c.U, "U");
    sub->add_option("-M,--grid", c.M, "Nystrom grid size");
    sub->add_option("-L,--count", c.L, "number of eigenvalues");
    sub->add_option("--lo", c.lo, "grid start");
    sub->add_option("--hi", c.hi, "grid end");
    sub->add_option("--points", c.points, "grid points");
    sub->add_option("--seed", c.seed, "seed");
    sub->add_option("-o,--output", c.output, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CliConfig c;
    std::string budget;
    CLI::App app{"Large sieve kernels, spectra and verification suites", "sieve_spectra"};
    app.set_config("--config", "", "flat key=value file; flags override it");
    app.require_subcommand(1);

    auto* kt = app.add_subcommand("kernel-table", "(t, W(m;t)) on [1, 2]");
    auto* tt = app.add_subcommand("transform-table", "W* or its Fourier transform on a grid");
    auto* sp = app.add_subcommand("spectrum", "eigenvalues of the difference operator");
    auto* vf = app.add_subcommand("verify", "run a verification suite, JSON report");
    auto* lb = app.add_subcommand("lowerbound-scan", "raw form / (Q^2 |phi|^2) over a Q grid");
    for (auto* s : {kt, tt, sp, vf, lb}) s->fallthrough();
    add_common(&app, c);
    app.add_option("--which", c.which, "transform-table: star or hat")->check(CLI::IsMember({"star", "hat"}));
    app.add_option("--tol", c.tol, "transform-table: series tail tolerance");
    app.add_option("-t,--tau-over-h", c.tau_over_h, "spectrum: tau/h");
    app.add_option("--suite", c.suite, "verify: transforms, delta, precise, spectrum, global, primes or all");
    app.add_option("--budget", budget, "verify: time budget, e.g. 600s");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    try {
        if (!budget.empty()) c.budget_seconds = parse_budget(budget);
        validate_sieve(c);
        if (!c.output.empty()) {
            file.open(c.output, std::ios::binary);
            if (!file) throw Error("cannot open '" + c.output + "' for writing");
            sink = &file;
        }
        int code = 0;
        if (kt->parsed()) write_table(kernel_table(c), c.format, *sink);
        else if (tt->parsed()) write_table(transform_table(c, err), c.format, *sink);
        else if (sp->parsed()) write_table(spectrum_table(c), c.format, *sink);
        else if (lb->parsed()) write_table(lowerbound_table(c, err), c.format, *sink);
        else if (vf->parsed()) {
            if (c.suite.empty()) {
                err << "verify needs --suite\n" << app.help();
                return 2;
            }
            const auto names = suite_names();
            if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end()) {
                err << "unknown suite '" << c.suite << "'\n" << app.help();
                return 2;
            }
            code = verify(c, *sink, err);
        }
        sink->flush();
        if (!*sink) throw Error("write failed");
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace sieve
