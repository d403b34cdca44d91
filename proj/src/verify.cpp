#include "sieve/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "sieve/errors.hpp"
#include "sieve/localspec.hpp"
#include "sieve/quadrature.hpp"

namespace sieve {

Xorshift64Star::Xorshift64Star(std::uint64_t seed) : x_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

std::uint64_t Xorshift64Star::next()
{
    x_ ^= x_ >> 12;
    x_ ^= x_ << 25;
    x_ ^= x_ >> 27;
    return x_ * 0x2545F4914F6CDD1Dull;
}

double Xorshift64Star::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

const std::vector<std::pair<SequenceKind, std::string>>& kind_names()
{
    static const std::vector<std::pair<SequenceKind, std::string>> names{
        {SequenceKind::RandomSigns, "random_signs"}, {SequenceKind::RandomComplex, "random_complex"},
        {SequenceKind::Spike, "spike"},              {SequenceKind::Progression, "progression"},
        {SequenceKind::PrimeIndicator, "prime_indicator"}, {SequenceKind::EigenPullback, "eigen_pullback"},
    };
    return names;
}

double extra_or(const SequenceSpec& s, const std::string& key, double fallback)
{
    auto it = s.extra.find(key);
    return it == s.extra.end() ? fallback : it->second;
}

std::int64_t extra_int(const SequenceSpec& s, const std::string& key, std::int64_t fallback)
{
    const double v = extra_or(s, key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw PreconditionError("generate_sequence: '" + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
}

// Large tables shared by the helpers below; built once.
std::shared_ptr<const ArithCache> shared_cache()
{
    static std::mutex mu;
    static std::shared_ptr<const ArithCache> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache) cache = std::make_shared<ArithCache>(std::int64_t{1} << 23);
    return cache;
}

TransformConfig spectrum_config(double tol = 1e-8)
{
    TransformConfig cfg;
    cfg.cache = shared_cache();
    cfg.quad_tol = tol;
    return cfg;
}

}  // namespace

SequenceKind parse_sequence_kind(const std::string& name)
{
    for (const auto& [k, n] : kind_names())
        if (n == name) return k;
    throw PreconditionError("unknown sequence kind '" + name + "'");
}

std::string sequence_kind_name(SequenceKind kind)
{
    for (const auto& [k, n] : kind_names())
        if (k == kind) return n;
    return "unknown";
}

ComplexSequence generate_sequence(const SequenceSpec& spec)
{
    if (spec.N < 1) throw PreconditionError("generate_sequence: N must be >= 1");
    const std::int64_t N = spec.N;
    ComplexSequence phi(N);
    Xorshift64Star rng(spec.seed);
    switch (spec.kind) {
    case SequenceKind::RandomSigns:
        for (std::int64_t n = 1; n <= N; ++n) phi.at(n) = (rng.next() >> 63) ? 1.0 : -1.0;
        break;
    case SequenceKind::RandomComplex:
        for (std::int64_t n = 1; n <= N; ++n) {
            const double re = 2.0 * rng.uniform() - 1.0;
            const double im = 2.0 * rng.uniform() - 1.0;
            phi.at(n) = {re, im};
        }
        break;
    case SequenceKind::Spike: {
        const auto k = extra_int(spec, "k", 1);
        if (k < 1 || k > N) throw PreconditionError("generate_sequence: spike position outside [1, N]");
        phi.at(k) = 1.0;
        break;
    }
    case SequenceKind::Progression: {
        const auto q = extra_int(spec, "q", 2);
        const auto a = extra_int(spec, "a", 1);
        if (q < 1) throw PreconditionError("generate_sequence: progression modulus must be >= 1");
        for (std::int64_t n = 1; n <= N; ++n)
            if (((n - a) % q + q) % q == 0) phi.at(n) = 1.0;
        break;
    }
    case SequenceKind::PrimeIndicator: {
        const auto cache = shared_cache();
        if (N > cache->limit()) throw SizeError("generate_sequence: N above the sieve limit");
        const double root = std::sqrt(static_cast<double>(N));
        for (std::int64_t n = 2; n <= N; ++n)
            if (static_cast<double>(cache->least_prime_factor(n)) >= root) phi.at(n) = 1.0;
        break;
    }
    case SequenceKind::EigenPullback: {
        const auto h = extra_int(spec, "h", 1);
        const auto ell = extra_int(spec, "ell", 1);
        const auto chi = extra_int(spec, "chi", 0);
        const auto M = extra_int(spec, "M", 400);
        const auto m = extra_int(spec, "m", 5);
        const double tau = extra_or(spec, "tau", 1.0);
        if (h < 1 || ell < 1 || chi < 0) throw PreconditionError("generate_sequence: bad pullback indices");
        const auto table = character_table(h);
        if (static_cast<std::size_t>(chi) >= table.size()) throw PreconditionError("generate_sequence: character index out of range");
        const auto kernel = build_weight(static_cast<int>(m));
        const auto s = nystrom_spectrum(kernel, spectrum_config(), tau, h, M, ell);
        phi = pullback(s, table, N, static_cast<std::size_t>(ell), static_cast<std::size_t>(chi)).values;
        break;
    }
    }
    return phi;
}

bool Ladder::mean_decreasing() const
{
    for (std::size_t i = 1; i < mean.size(); ++i)
        if (!(mean[i] < mean[i - 1])) return false;
    return true;
}

bool Ladder::opnorm_decreasing() const
{
    for (std::size_t i = 1; i < opnorm.size(); ++i)
        if (!(opnorm[i] < opnorm[i - 1])) return false;
    return true;
}

namespace {

// Largest |eigenvalue| of the symmetric Toeplitz matrix T(i,j) = t(|i-j|).
double toeplitz_norm(const std::vector<double>& t)
{
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd T(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) T(i, j) = t[static_cast<std::size_t>(std::abs(i - j))];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("toeplitz_norm: eigensolver did not converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

void finish_ladder(Ladder& L)
{
    const std::size_t g = L.grid.size();
    L.mean.assign(g, 0.0);
    for (const auto& row : L.per_seed)
        for (std::size_t i = 0; i < g; ++i) L.mean[i] += row[i] / static_cast<double>(L.per_seed.size());
    for (const auto& row : L.per_seed)
        for (std::size_t i = 1; i < g; ++i)
            if (!(row[i] < row[i - 1])) ++L.per_seed_increases;
}

}  // namespace

Ladder main_term_ladder(const WeightKernel& kernel, const ArithCache& cache, std::int64_t N, const std::vector<int>& exponents, int seeds,
                        std::uint64_t first_seed)
{
    Ladder L;
    std::vector<ComplexSequence> phis;
    for (int s = 0; s < seeds; ++s)
        phis.push_back(generate_sequence({SequenceKind::RandomComplex, N, first_seed + static_cast<std::uint64_t>(s), {}}));
    L.per_seed.assign(phis.size(), {});
    for (int k : exponents) {
        const double Q = static_cast<double>(N) * std::ldexp(1.0, k);
        L.grid.push_back(std::ldexp(1.0, k));
        const double i0 = I0(kernel, cache, Q);
        for (std::size_t s = 0; s < phis.size(); ++s) {
            const double S = smoothed_form(phis[s], kernel, Q, {FareyPath::Ramanujan, &cache});
            L.per_seed[s].push_back(std::abs(S / (Q * i0 * phis[s].norm2()) - 1.0));
        }
        std::vector<double> t(static_cast<std::size_t>(N));
        for (std::int64_t v = 0; v < N; ++v) t[static_cast<std::size_t>(v)] = delta_symbol(cache, kernel, Q, v) / (Q * i0) - (v == 0 ? 1.0 : 0.0);
        L.opnorm.push_back(toeplitz_norm(t));
    }
    finish_ladder(L);
    return L;
}

Ladder precise_ladder(const WeightKernel& kernel, const TransformConfig& cfg, std::int64_t N, double Q, const std::vector<double>& H_grid,
                      int seeds, std::uint64_t first_seed)
{
    Ladder L;
    L.grid = H_grid;
    double Hmax = 0.5;
    for (double H : H_grid) Hmax = std::max(Hmax, H);
    const PreciseEvaluator ev(kernel, cfg, N, Q, Hmax);
    std::vector<double> delta(static_cast<std::size_t>(N));
    for (std::int64_t v = 0; v < N; ++v) delta[static_cast<std::size_t>(v)] = delta_symbol(*cfg.cache, kernel, Q, v) / Q;
    for (int s = 0; s < seeds; ++s) {
        const auto phi = generate_sequence({SequenceKind::RandomComplex, N, first_seed + static_cast<std::uint64_t>(s), {}});
        const double lhs = smoothed_form(phi, kernel, Q, {FareyPath::Dft, cfg.cache.get()}) / Q;
        std::vector<double> row;
        for (double H : H_grid) row.push_back(std::abs(lhs - ev.evaluate(phi, H).rhs) / phi.norm2());
        L.per_seed.push_back(row);
    }
    for (double H : H_grid) {
        const auto k = ev.hsum_kernel(H);
        std::vector<double> t(delta);
        t[0] -= ev.I0();
        for (std::size_t v = 0; v < t.size(); ++v) t[v] += k[v];
        L.opnorm.push_back(toeplitz_norm(t));
    }
    finish_ladder(L);
    return L;
}

std::vector<std::pair<std::string, ComplexSequence>> lowerbound_family(std::int64_t N, std::uint64_t seed)
{
    std::vector<std::pair<std::string, ComplexSequence>> fam;
    for (std::uint64_t s = seed; s < seed + 3; ++s)
        fam.emplace_back("random_signs:" + std::to_string(s), generate_sequence({SequenceKind::RandomSigns, N, s, {}}));
    fam.emplace_back("random_complex:" + std::to_string(seed), generate_sequence({SequenceKind::RandomComplex, N, seed, {}}));
    fam.emplace_back("progression:1mod3", generate_sequence({SequenceKind::Progression, N, seed, {{"a", 1}, {"q", 3}}}));
    fam.emplace_back("spike:7", generate_sequence({SequenceKind::Spike, N, seed, {{"k", 7}}}));
    fam.emplace_back("eigen_pullback:h1l1", generate_sequence({SequenceKind::EigenPullback, N, seed, {{"h", 1}, {"ell", 1}}}));
    fam.emplace_back("eigen_pullback:h3l2c1", generate_sequence({SequenceKind::EigenPullback, N, seed, {{"h", 3}, {"ell", 2}, {"chi", 1}}}));
    return fam;
}

std::vector<std::string> suite_names() { return {"transforms", "delta", "precise", "spectrum", "global", "primes"}; }

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
    const VerifyConfig& cfg;
    WeightKernel kernel;
    std::shared_ptr<const ArithCache> cache;
    Clock::time_point start;
    std::vector<CheckReport> out;

    Context(const VerifyConfig& c) : cfg(c), kernel(build_weight(c.m)), cache(shared_cache()), start(Clock::now()) {}

    void add(CheckReport r)
    {
        out.push_back(std::move(r));
        tick();
    }
    void tick() const
    {
        if (!cfg.budget_seconds) return;
        const double used = std::chrono::duration<double>(Clock::now() - start).count();
        if (used > *cfg.budget_seconds)
            throw ResourceError("verify: budget of " + format_double(*cfg.budget_seconds) + " s exhausted after " + std::to_string(out.size()) + " checks");
    }
    TransformConfig tcfg(double tol) const
    {
        TransformConfig t;
        t.cache = cache;
        t.quad_tol = tol;
        return t;
    }
};

std::string join(const std::vector<double>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_double(xs[i]);
    return s;
}

void suite_transforms(Context& ctx)
{
    const auto& k = ctx.kernel;
    const double plateau = 6.0 / (std::numbers::pi * std::numbers::pi) * k.integral0;

    ctx.add(make_equality("transforms.pm_mass", k.pm.integral(), 1.0, 1e-12));

    auto c = make_equality("transforms.constant", plateau, 0.816, 1e-3);
    c.params["m"] = format_param(static_cast<long long>(k.m));
    ctx.add(c);

    auto p = make_equality("transforms.plateau", w_hat_star(k, *ctx.cache, 0.3), plateau, 1e-10);
    p.params["u"] = "0.3";
    ctx.add(p);

    ctx.add(make_equality("transforms.hat_one_equals_zero", w_hat_star(k, *ctx.cache, 1.0), w_hat_star(k, *ctx.cache, 0.0), 1e-12));

    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 200; ++i) {
        const double v = w_hat_star(k, *ctx.cache, 0.5 + 0.5 * (i + 0.5) / 200.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CheckReport sc;
    sc.check_id = "transforms.hat_sign_change";
    sc.lhs = lo;
    sc.rhs = hi;
    sc.pass = lo < 0.0 && hi > 0.0;
    sc.residual = sc.pass ? 0.0 : 1.0;
    sc.notes = "lhs = min, rhs = max of the transform over 200 points of [1/2, 1]; pass iff min < 0 < max";
    ctx.add(sc);

    for (double y : {1.3, 2.7, 6.0}) {
        auto r = make_equality("transforms.sharp_tilde", w_sharp(k, y), k.J - w_tilde(k, y), 1e-8);
        r.params["y"] = format_param(y);
        ctx.add(r);
    }

    ctx.add(make_equality("transforms.tilde_even", w_tilde(k, -5.3), w_tilde(k, 5.3), 1e-12));

    auto cfg = ctx.tcfg(1e-10);
    cfg.C = 50;
    auto ss = make_equality("transforms.star_star_small", w_star_star_C(k, cfg, 0.01), 0.0, 1e-12);
    ss.params["C"] = "50";
    ctx.add(ss);

    auto scfg = ctx.tcfg(1e-8);
    auto ccfg = ctx.tcfg(1e-10);
    ccfg.C = 2000;
    for (double z : {0.5, 1.0, 2.0}) {
        const auto sv = w_star_series(k, scfg, z);
        auto r = make_equality("transforms.series_vs_truncated", sv.value, w_star_C(k, ccfg, z), 1e-4);
        r.params["z"] = format_param(z);
        r.params["C"] = "2000";
        r.notes = "series terms " + std::to_string(sv.terms) + ", bound " + format_double(sv.error_bound);
        ctx.add(r);
    }

    const double u = 1.3;
    const auto& bp = k.pm.breakpoints();
    std::vector<double> cuts(bp.begin() + 1, bp.end() - 1);
    const double re = quad::adaptive_split([&](double t) { return k.pm(t) * std::cos(2.0 * std::numbers::pi * u * t); }, bp.front(), bp.back(), cuts, 1e-13);
    const double im = quad::adaptive_split([&](double t) { return -k.pm(t) * std::sin(2.0 * std::numbers::pi * u * t); }, bp.front(), bp.back(), cuts, 1e-13);
    auto f = make_equality("transforms.fourier_pm", std::abs(fourier_pm(k.m, u) - cplx{re, im}), 0.0, 1e-9);
    f.params["u"] = format_param(u);
    f.notes = "lhs = |closed form - quadrature|";
    ctx.add(f);
}

void suite_delta(Context& ctx)
{
    const auto& k = ctx.kernel;
    SieveParams sp;
    sp.Q = 20;
    sp.C = 4;
    sp.E = 4;
    sp.H = 3;
    double worst = 0.0;
    for (std::int64_t v = -50; v <= 50; ++v)
        worst = std::max(worst, std::abs(delta_symbol(*ctx.cache, k, sp.Q, v) - delta_decomposition(*ctx.cache, k, sp, v).sum()));
    auto r = make_equality("delta.decomposition", worst, 0.0, 1e-9);
    r.params = {{"Q", "20"}, {"C", "4"}, {"E", "4"}, {"H", "3"}, {"v", "-50..50"}};
    r.notes = "lhs = max_v |Delta(v) - (L0 + U + U# + L + L#)(v)|";
    ctx.add(r);

    for (int s = 0; s < 20; ++s) {
        const auto seed = ctx.cfg.seed + static_cast<std::uint64_t>(s);
        const auto phi = generate_sequence({SequenceKind::RandomComplex, 40, seed, {}});
        auto b = make_equality("delta.bilinear", smoothed_form(phi, k, 25.0, {FareyPath::Direct, nullptr}), delta_bilinear(phi, *ctx.cache, k, 25.0), 1e-8);
        b.params = {{"N", "40"}, {"Q", "25"}, {"seed", std::to_string(seed)}};
        ctx.add(b);
    }

    const auto phi = generate_sequence({SequenceKind::RandomComplex, 60, ctx.cfg.seed, {}});
    const double ref = smoothed_form(phi, k, 40.0, {FareyPath::Direct, nullptr});
    for (auto [path, name] : {std::pair{FareyPath::Folded, "folded"}, {FareyPath::Dft, "dft"}, {FareyPath::Ramanujan, "ramanujan"}}) {
        auto e = make_equality("delta.farey_paths", smoothed_form(phi, k, 40.0, {path, ctx.cache.get()}), ref, 1e-10 * std::abs(ref));
        e.params = {{"N", "60"}, {"Q", "40"}, {"path", name}};
        e.notes = "tolerance relative to the direct path";
        ctx.add(e);
    }
}

CheckReport ladder_report(const std::string& id, const Ladder& L)
{
    double worst = 0.0;
    for (std::size_t i = 1; i < L.mean.size(); ++i) worst = std::max({worst, L.mean[i] / L.mean[i - 1], L.opnorm[i] / L.opnorm[i - 1]});
    CheckReport r;
    r.check_id = id;
    r.lhs = worst;
    r.rhs = 1.0;
    r.pass = L.mean_decreasing() && L.opnorm_decreasing();
    r.residual = std::max(0.0, worst - 1.0);
    r.tolerance = 0.0;
    std::ostringstream n;
    n << "lhs = largest step ratio of the seed mean and of the operator norm; grid " << join(L.grid) << "; mean " << join(L.mean) << "; opnorm "
      << join(L.opnorm) << "; single-seed non-decreasing steps " << L.per_seed_increases << " of " << L.per_seed.size() * (L.grid.size() - 1);
    r.notes = n.str();
    return r;
}

void suite_precise(Context& ctx)
{
    const auto& k = ctx.kernel;
    auto a = ladder_report("precise.main_term_ladder", main_term_ladder(k, *ctx.cache, 40, {5, 6, 7, 8, 9}, 10, ctx.cfg.seed));
    a.params = {{"N", "40"}, {"Q/N", "32..512"}, {"seeds", "10"}};
    ctx.add(a);

    auto b = ladder_report("precise.h_ladder", precise_ladder(k, ctx.tcfg(1e-7), 300, 150.0, {0.5, 1, 2, 4, 8, 16}, 20, ctx.cfg.seed));
    b.params = {{"N", "300"}, {"Q", "150"}, {"H", "0.5..16"}, {"seeds", "20"}};
    ctx.add(b);

    const auto phi = generate_sequence({SequenceKind::RandomComplex, 40, ctx.cfg.seed, {}});
    const double Q = 25.0;
    const auto pr = precise_rhs(phi, k, ctx.tcfg(1e-10), Q, 0.5);
    auto e = make_equality("precise.empty_h_sum", pr.rhs, pr.I0 * phi.norm2(), 1e-12 * pr.rhs);
    e.params = {{"N", "40"}, {"Q", "25"}, {"H", "0.5"}};
    ctx.add(e);
}

void suite_spectrum(Context& ctx)
{
    const auto& k = ctx.kernel;
    const auto scfg = ctx.tcfg(1e-8);
    const auto icfg = ctx.tcfg(1e-7);
    for (double th : {0.25, 1.0, 4.0}) {
        const auto s = nystrom_spectrum(k, scfg, th, ctx.cfg.M, 21);
        const std::map<std::string, std::string> params{{"tau_over_h", format_param(th)}, {"M", format_param(static_cast<long long>(ctx.cfg.M))}};

        double sum = 0.0, sq = 0.0;
        for (double l : s.eigenvalues) {
            sum += l;
            sq += l * l;
        }
        auto t = make_equality("spectrum.trace", s.trace(), 0.0, 1e-14);
        t.params = params;
        t.notes = "diagonal trace; eigenvalue sum " + format_double(sum);
        ctx.add(t);
        auto ts = make_equality("spectrum.eigenvalue_sum", sum, 0.0, 1e-12);
        ts.params = params;
        ctx.add(ts);

        auto t2 = make_equality("spectrum.hilbert_schmidt", sq, kernel_square_integral(k, icfg, th), 1e-4);
        t2.params = params;
        ctx.add(t2);

        const double v2 = kernel_square_integral(k, icfg, th, false);
        double worst = 0.0;
        for (std::size_t l = 1; l <= s.eigenvalues.size(); ++l)
            worst = std::max(worst, std::abs(s.eigenvalues[l - 1]) * std::sqrt(static_cast<double>(l)));
        auto lb = make_inequality("spectrum.local_bound", worst, std::sqrt(2.0 * v2));
        lb.params = params;
        lb.notes = "one-sided: max_l |lambda_l| sqrt(l) <= sqrt(2 int_0^1 V^2)";
        ctx.add(lb);

        for (std::size_t L : {5u, 20u}) {
            auto m = mercer_check(s, L);
            m.params["tau_over_h"] = format_param(th);
            ctx.add(m);
        }

        auto fb = fourier_eig_bounds(s, k, *ctx.cache);
        ctx.add(fb);

        double pos = 0.0, neg = 0.0;
        for (double l : s.eigenvalues) {
            pos = std::max(pos, l);
            neg = std::min(neg, l);
        }
        CheckReport sg;
        sg.check_id = "spectrum.both_signs";
        sg.params = params;
        sg.lhs = neg;
        sg.rhs = pos;
        sg.pass = neg < 0.0 && pos > 0.0;
        sg.residual = sg.pass ? 0.0 : 1.0;
        sg.notes = "lhs = most negative, rhs = most positive eigenvalue";
        ctx.add(sg);
    }
}

void suite_global(Context& ctx)
{
    const auto& k = ctx.kernel;
    {
        const std::int64_t N = 400, h = 3, Np = extended_length(N);
        const auto a = generate_sequence({SequenceKind::RandomComplex, N, ctx.cfg.seed, {}});
        const auto b = generate_sequence({SequenceKind::RandomComplex, N, ctx.cfg.seed + 1, {}});
        const auto Fa = gamma_embed(a, h, 2 * Np), Fb = gamma_embed(b, h, 2 * Np);
        auto r = make_equality("global.isometry", std::abs(inner(Fa, Fb) - static_cast<double>(N) / static_cast<double>(Np) * scalar_product(a, b)), 0.0, 1e-9);
        r.params = {{"N", "400"}, {"h", "3"}, {"M", std::to_string(2 * Np)}};
        r.notes = "lhs = |<Gamma a, Gamma b> - (N/N')[a, b]_N|";
        ctx.add(r);
    }
    {
        const std::int64_t N = 100, h = 4, Np = extended_length(N);
        const auto a = generate_sequence({SequenceKind::RandomComplex, N, ctx.cfg.seed, {}});
        const auto back = gamma_adjoint(gamma_embed(a, h, 3 * Np), N);
        double worst = 0.0;
        for (std::int64_t n = 1; n <= N; ++n) worst = std::max(worst, std::abs(back(n) - static_cast<double>(N) / static_cast<double>(Np) * a(n)));
        auto r = make_equality("global.adjoint", worst, 0.0, 1e-9);
        r.params = {{"N", "100"}, {"h", "4"}};
        r.notes = "lhs = max_n |Gamma* Gamma a - (N/N') a|";
        ctx.add(r);

        const auto P = project_pure(gamma_embed(a, h, 3 * Np));
        auto p = make_equality("global.projector", (project_pure(P).values - P.values).cwiseAbs().maxCoeff(), 0.0, 1e-11);
        p.params = {{"N", "100"}, {"h", "4"}};
        ctx.add(p);
    }
    Xorshift64Star rng(ctx.cfg.seed);
    for (std::int64_t h = 2; h <= 12; ++h) {
        const auto phi = generate_sequence({SequenceKind::RandomComplex, 60, ctx.cfg.seed + static_cast<std::uint64_t>(h), {}});
        std::vector<double> G(60);
        for (auto& g : G) g = 2.0 * rng.uniform() - 1.0;
        ctx.add(character_sum_check(phi, G, character_table(h)));
    }

    const auto scfg = ctx.tcfg(1e-8);
    std::vector<ComplexSequence> family;
    const std::int64_t N = 20000;
    for (std::int64_t h = 1; h <= 4; ++h) {
        const auto s = nystrom_spectrum(k, scfg, 1.0, h, ctx.cfg.M, 3);
        const auto table = character_table(h);
        for (std::size_t chi = 0; chi < table.size(); ++chi)
            for (std::size_t l = 1; l <= 3; ++l) family.push_back(pullback(s, table, N, l, chi).values);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i; j < family.size(); ++j) dev = std::max(dev, std::abs(scalar_product(family[i], family[j]) - (i == j ? 1.0 : 0.0)));
    auto g = make_inequality("global.gram", dev, 0.05);
    g.params = {{"N", "20000"}, {"h", "1..4"}, {"ell", "1..3"}, {"tau", "1"}, {"M", format_param(static_cast<long long>(ctx.cfg.M))}};
    g.notes = "one-sided: max |Gram - I| <= 0.05 (calibrated threshold)";
    ctx.add(g);

    for (int s = 0; s < 20; ++s) {
        const auto phi = generate_sequence({SequenceKind::RandomComplex, N, ctx.cfg.seed + static_cast<std::uint64_t>(s), {}});
        auto b = bessel_bound(phi, family);
        b.params["seed"] = std::to_string(ctx.cfg.seed + static_cast<std::uint64_t>(s));
        ctx.add(b);
    }

    const auto phi = generate_sequence({SequenceKind::RandomComplex, 60, ctx.cfg.seed, {}});
    auto si = spectral_identity(phi, k, scfg, 30.0, 4.0, 10, 200);
    for (auto& r : si.reports) ctx.add(r);

    const std::int64_t Nl = 200;
    const auto scan = lowerbound_scan(lowerbound_family(Nl, ctx.cfg.seed), {100, 200, 400, 1000, 2000, 4000}, *ctx.cache);
    double least = 1e300;
    for (const auto& row : scan.rows) least = std::min(least, row.ratio);
    CheckReport lb;
    lb.check_id = "global.lowerbound_positive";
    lb.params = {{"N", "200"}, {"Q", "100..4000"}, {"family", std::to_string(scan.fits.size())}};
    lb.lhs = least;
    lb.rhs = 0.0;
    lb.pass = least > 0.0;
    lb.residual = lb.pass ? 0.0 : -least;
    std::string fits;
    for (const auto& f : scan.fits) fits += (fits.empty() ? "" : "; ") + f.label + " c=" + format_double(f.exponent);
    lb.notes = "lhs = smallest raw form / (Q^2 |phi|^2); fitted exponents: " + fits;
    ctx.add(lb);
}

void suite_primes(Context& ctx)
{
    const std::int64_t N = 10000;
    const auto phi = generate_sequence({SequenceKind::PrimeIndicator, N, ctx.cfg.seed, {}});
    for (std::int64_t Q0 : {10, 50, 100}) ctx.add(prime_support_check(phi, Q0, *ctx.cache));
    const auto spike = generate_sequence({SequenceKind::Spike, N, ctx.cfg.seed, {{"k", 9973}}});
    auto r = prime_support_check(spike, 50, *ctx.cache);
    r.params["phi"] = "spike:9973";
    ctx.add(r);
}

}  // namespace

std::vector<CheckReport> run_suite(const std::string& suite_id, const VerifyConfig& cfg)
{
    const auto names = suite_names();
    if (suite_id != "all" && std::find(names.begin(), names.end(), suite_id) == names.end())
        throw PreconditionError("unknown suite '" + suite_id + "'");
    if (cfg.M < 64) throw PreconditionError("verify: M must be >= 64");
    Context ctx(cfg);
    const auto run = [&](const std::string& id) {
        if (id == "transforms") suite_transforms(ctx);
        else if (id == "delta") suite_delta(ctx);
        else if (id == "precise") suite_precise(ctx);
        else if (id == "spectrum") suite_spectrum(ctx);
        else if (id == "global") suite_global(ctx);
        else if (id == "primes") suite_primes(ctx);
    };
    if (suite_id == "all")
        for (const auto& id : names) run(id);
    else
        run(suite_id);
    return std::move(ctx.out);
}

}  // namespace sieve
