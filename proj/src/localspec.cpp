#include "sieve/localspec.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sieve/errors.hpp"
#include "sieve/parallel.hpp"

namespace sieve {

std::int64_t extended_length(std::int64_t N)
{
    if (N < 1) throw PreconditionError("extended_length: N must be >= 1");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N)));
    while (r * r < N) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= N) --r;
    return N + r;
}

GridFunction::GridFunction(std::int64_t h_, std::int64_t M_) : h(h_), M(M_)
{
    if (h < 1 || M < 1) throw PreconditionError("GridFunction: need h >= 1 and M >= 1");
    values = Eigen::MatrixXcd::Zero(h, M);
}

cplx inner(const GridFunction& F, const GridFunction& G)
{
    if (F.h != G.h || F.M != G.M) throw PreconditionError("inner: grid shapes differ");
    const cplx s = (F.values.array() * G.values.array().conjugate()).sum();
    return s / (static_cast<double>(F.h) * static_cast<double>(F.M));
}

namespace {

std::int64_t residue_rep(std::int64_t b, std::int64_t h) { return b == 0 ? h : b; }

void check_embedding(std::int64_t N, std::int64_t h)
{
    if (N < 1) throw PreconditionError("embedding: N must be >= 1");
    if (h < 1 || h > extended_length(N) - N) throw PreconditionError("embedding: need 1 <= h <= N' - N");
}

}  // namespace

GridFunction gamma_embed(const ComplexSequence& phi, std::int64_t h, std::int64_t M)
{
    const std::int64_t N = phi.N();
    check_embedding(N, h);
    const std::int64_t Np = extended_length(N);
    GridFunction F(h, M);
    for (std::int64_t j = 0; j < M; ++j) {
        // floor(N' y_j / h) with y_j = (2j+1)/(2M), in integers
        const std::int64_t k = (Np * (2 * j + 1)) / (2 * M * h);
        for (std::int64_t b = 0; b < h; ++b) F.values(b, j) = phi(residue_rep(b, h) + h * k);
    }
    return F;
}

ComplexSequence gamma_adjoint(const GridFunction& F, std::int64_t N)
{
    check_embedding(N, F.h);
    const std::int64_t h = F.h, M = F.M;
    const std::int64_t Np = extended_length(N);
    if (M * h < Np) throw PreconditionError("gamma_adjoint: grid coarser than the windows of width h/N'");
    const double cell = 1.0 / static_cast<double>(M);
    ComplexSequence out(N);
    for (std::int64_t n = 1; n <= N; ++n) {
        const std::int64_t b = n % h;
        const std::int64_t k = (n - residue_rep(b, h)) / h;
        const double lo = static_cast<double>(k * h) / static_cast<double>(Np);
        const double hi = static_cast<double>((k + 1) * h) / static_cast<double>(Np);
        // exact cell overlaps, indices computed in integers
        const std::int64_t j0 = (k * h * M) / Np;
        const std::int64_t j1 = std::min(M - 1, ((k + 1) * h * M - 1) / Np);
        cplx s{0.0, 0.0};
        for (std::int64_t j = j0; j <= j1; ++j) {
            const double a = std::max(lo, static_cast<double>(j) * cell);
            const double c = std::min(hi, static_cast<double>(j + 1) * cell);
            if (c > a) s += (c - a) * F.values(b, j);
        }
        out.at(n) = s * (static_cast<double>(N) / static_cast<double>(h));
    }
    return out;
}

GridFunction project_pure(const GridFunction& F)
{
    const std::int64_t h = F.h;
    Eigen::MatrixXd P(h, h);
    for (std::int64_t b = 0; b < h; ++b)
        for (std::int64_t c = 0; c < h; ++c) P(b, c) = ramanujan_sum(h, b - c) / static_cast<double>(h);
    GridFunction out(h, F.M);
    out.values = P.cast<cplx>() * F.values;
    return out;
}

std::vector<cplx> base_vector(const CharacterTable& table, std::size_t chi)
{
    const std::int64_t h = table.modulus();
    const double s = 1.0 / std::sqrt(static_cast<double>(table.size()));
    std::vector<cplx> out(static_cast<std::size_t>(h));
    for (std::int64_t b = 0; b < h; ++b) out[static_cast<std::size_t>(b)] = gauss_sum(table, chi, b) * s;
    return out;
}

double Spectrum::eigenfunction(std::size_t ell, double y) const
{
    if (ell < 1 || ell > count()) throw PreconditionError("Spectrum::eigenfunction: index outside the computed range");
    const auto col = eigenfunctions.col(static_cast<Eigen::Index>(ell - 1));
    const double t = y * static_cast<double>(M) - 0.5;
    if (t <= 0.0) return col(0);
    if (t >= static_cast<double>(M - 1)) return col(M - 1);
    const auto j = static_cast<Eigen::Index>(std::floor(t));
    const double f = t - static_cast<double>(j);
    return (1.0 - f) * col(j) + f * col(j + 1);
}

double Spectrum::trace() const { return kernel_samples.trace() / static_cast<double>(M); }

std::vector<double> difference_kernel_samples(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, std::int64_t M)
{
    if (!(tau_over_h > 0.0)) throw PreconditionError("difference_kernel_samples: tau/h must be positive");
    std::vector<double> v(static_cast<std::size_t>(M), 0.0);
    parallel_for(v.size(), [&](std::size_t k) {
        if (k > 0) v[k] = w_star(kernel, cfg, tau_over_h * static_cast<double>(k) / static_cast<double>(M));
    });
    return v;
}

Spectrum nystrom_spectrum(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, std::int64_t M, std::int64_t L)
{
    if (M < 64) throw PreconditionError("nystrom_spectrum: M must be >= 64");
    if (L < 0 || L > M) throw PreconditionError("nystrom_spectrum: need 0 <= L <= M");
    const auto v = difference_kernel_samples(kernel, cfg, tau_over_h, M);

    Spectrum s;
    s.tau_over_h = tau_over_h;
    s.M = M;
    s.kernel_samples.resize(M, M);
    for (std::int64_t i = 0; i < M; ++i)
        for (std::int64_t j = 0; j < M; ++j) s.kernel_samples(i, j) = v[static_cast<std::size_t>(std::abs(i - j))];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.kernel_samples / static_cast<double>(M));
    if (es.info() != Eigen::Success) throw NumericError("nystrom_spectrum: eigensolver did not converge");
    const auto& lam = es.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(lam(a)) > std::abs(lam(b)); });

    s.eigenvalues.reserve(static_cast<std::size_t>(M));
    for (auto i : order) s.eigenvalues.push_back(lam(i));
    s.eigenfunctions.resize(M, L);
    const double scale = std::sqrt(static_cast<double>(M));
    for (std::int64_t l = 0; l < L; ++l) {
        Eigen::VectorXd g = es.eigenvectors().col(order[static_cast<std::size_t>(l)]) * scale;
        const double big = g.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            if (std::abs(g(j)) > 1e-8 * big) {
                if (g(j) < 0) g = -g;
                break;
            }
        }
        s.eigenfunctions.col(l) = g;
    }
    return s;
}

Spectrum nystrom_spectrum(const WeightKernel& kernel, const TransformConfig& cfg, double tau, std::int64_t h, std::int64_t M, std::int64_t L)
{
    if (h < 1) throw PreconditionError("nystrom_spectrum: h must be >= 1");
    return nystrom_spectrum(kernel, cfg, tau / static_cast<double>(h), M, L);
}

GridFunction apply_operator(const Spectrum& spec, const GridFunction& F)
{
    if (F.M != spec.M) throw PreconditionError("apply_operator: grid size differs from the spectrum's");
    GridFunction out(F.h, F.M);
    out.values = F.values * (spec.kernel_samples.cast<cplx>() / static_cast<double>(spec.M));
    return out;
}

double kernel_square_integral(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, bool triangular)
{
    if (!(tau_over_h > 0.0)) throw PreconditionError("kernel_square_integral: tau/h must be positive");
    const double y_lo = 1e-3 / tau_over_h;
    if (y_lo >= 1.0) return 0.0;
    std::vector<double> cuts{y_lo};
    const double step = 1.0 / 64.0;
    while (cuts.back() < step) cuts.push_back(std::min(2.0 * cuts.back(), step));
    while (cuts.back() < 1.0) cuts.push_back(std::min(1.0, cuts.back() + step));

    using GL = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> part(cuts.size() - 1, 0.0);
    parallel_for(part.size(), [&](std::size_t i) {
        part[i] = GL::integrate(
            [&](double y) {
                const double w = w_star(kernel, cfg, tau_over_h * y);
                return triangular ? 2.0 * w * w * (1.0 - y) : w * w;
            },
            cuts[i], cuts[i + 1]);
    });
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

double mercer_residual(const Spectrum& spec, std::size_t L)
{
    if (L > spec.count()) throw PreconditionError("mercer_residual: L exceeds the computed eigenfunctions");
    Eigen::MatrixXd R = spec.kernel_samples;
    for (std::size_t l = 0; l < L; ++l) {
        const auto g = spec.eigenfunctions.col(static_cast<Eigen::Index>(l));
        R.noalias() -= spec.eigenvalues[l] * (g * g.transpose());
    }
    return R.cwiseAbs().maxCoeff();
}

CheckReport mercer_check(const Spectrum& spec, std::size_t L, double slack)
{
    if (L >= spec.eigenvalues.size()) throw PreconditionError("mercer_check: need L < M");
    const double res = mercer_residual(spec, L);
    const double next = std::abs(spec.eigenvalues[L]);
    auto r = make_inequality("spectrum.mercer", res, next + slack);
    r.params["tau_over_h"] = format_param(spec.tau_over_h);
    r.params["M"] = format_param(static_cast<long long>(spec.M));
    r.params["L"] = format_param(static_cast<long long>(L));
    r.notes = "one-sided: max grid residual <= |lambda_{L+1}| + slack, slack = " + format_double(slack);
    return r;
}

HatExtrema w_hat_star_extrema(const WeightKernel& kernel, const ArithCache& cache)
{
    constexpr double kTop = 64.0;
    constexpr int kPerUnit = 512;
    if (cache.limit() < 2 * static_cast<std::int64_t>(kTop) + 2) throw SizeError("w_hat_star_extrema: cache too small");
    const auto f = [&](double u) { return w_hat_star(kernel, cache, u); };
    const int count = static_cast<int>((kTop - 0.5) * kPerUnit);
    std::vector<double> vals(static_cast<std::size_t>(count + 1));
    parallel_for(vals.size(), [&](std::size_t i) { vals[i] = f(0.5 + static_cast<double>(i) / kPerUnit); });
    const auto best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    const double u0 = 0.5 + static_cast<double>(best) / kPerUnit;
    const double d = 1.0 / kPerUnit;
    auto [umin, vmin] = boost::math::tools::brent_find_minima(f, std::max(0.5, u0 - d), u0 + d, 52);
    HatExtrema out;
    out.min = std::min(vmin, vals[static_cast<std::size_t>(best)]);
    out.argmin = vmin <= vals[static_cast<std::size_t>(best)] ? umin : u0;
    out.max = hat_plateau(kernel);
    return out;
}

CheckReport fourier_eig_bounds(const Spectrum& spec, const WeightKernel& kernel, const ArithCache& cache, double tol,
                               std::optional<GapConstants> gap)
{
    const auto ext = w_hat_star_extrema(kernel, cache);
    const double scale = 1.0 / spec.tau_over_h;
    const double vmin = scale * ext.min, vmax = scale * ext.max;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double l : spec.eigenvalues) {
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    const double excess = std::max(hi - vmax, vmin - lo);

    CheckReport r;
    r.check_id = "spectrum.fourier_bounds";
    r.params["tau_over_h"] = format_param(spec.tau_over_h);
    r.params["M"] = format_param(static_cast<long long>(spec.M));
    r.lhs = excess;
    r.rhs = 0.0;
    r.residual = std::max(0.0, excess);
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    std::ostringstream notes;
    notes << "lhs = max(lambda_max - max Vhat, min Vhat - lambda_min); Vhat in [" << format_double(vmin) << ", " << format_double(vmax)
          << "], lambda in [" << format_double(lo) << ", " << format_double(hi) << "]; bracket [-min Vhat, max Vhat] "
          << ((lo >= -vmin && hi <= vmax) ? "holds" : "fails");
    if (gap) {
        const double cap = vmax - gap->c * std::exp(-gap->c4 * gap->U2);
        notes << "; gap form lambda_1 <= " << format_double(cap) << (hi <= cap ? " holds" : " fails");
    }
    r.notes = notes.str();
    return r;
}

PullbackVector pullback(const Spectrum& spec, const CharacterTable& table, std::int64_t N, std::size_t ell, std::size_t chi_index)
{
    if (N < 1) throw PreconditionError("pullback: N must be >= 1");
    if (chi_index >= table.size()) throw PreconditionError("pullback: character index out of range");
    const std::int64_t h = table.modulus();
    PullbackVector p;
    p.h = h;
    p.ell = ell;
    p.chi_index = chi_index;
    p.N = N;
    p.tau = spec.tau_over_h * static_cast<double>(h);
    p.values = ComplexSequence(N);
    const double s = 1.0 / std::sqrt(static_cast<double>(table.size()));
    std::vector<cplx> tau(static_cast<std::size_t>(h));
    for (std::int64_t b = 0; b < h; ++b) tau[static_cast<std::size_t>(b)] = gauss_sum(table, chi_index, b) * s;
    for (std::int64_t n = 1; n <= N; ++n)
        p.values.at(n) = tau[static_cast<std::size_t>(n % h)] * spec.eigenfunction(ell, static_cast<double>(n) / static_cast<double>(N));
    return p;
}

CheckReport bessel_bound(const ComplexSequence& phi, const std::vector<ComplexSequence>& family)
{
    const std::size_t k = family.size();
    std::vector<std::vector<cplx>> gram(k, std::vector<cplx>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            gram[i][j] = scalar_product(family[i], family[j]);
            gram[j][i] = std::conj(gram[i][j]);
        }
    double lhs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double denom = 0.0;
        for (std::size_t j = 0; j < k; ++j) denom += std::abs(gram[i][j]);
        if (denom == 0.0) continue;
        lhs += std::norm(scalar_product(phi, family[i])) / denom;
    }
    const double rhs = phi.N() ? scalar_product(phi, phi).real() : 0.0;
    CheckReport r;
    r.check_id = "global.bessel";
    r.params["N"] = format_param(static_cast<long long>(phi.N()));
    r.params["family"] = format_param(static_cast<long long>(k));
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = std::max(0.0, lhs - rhs);
    r.tolerance = 1e-12 * rhs;
    r.pass = r.residual <= r.tolerance;
    r.notes = "one-sided: lhs <= rhs up to 1e-12 relative rounding; slack " + format_double(rhs - lhs);
    return r;
}

CheckReport character_sum_check(const ComplexSequence& phi, const std::vector<double>& G, const CharacterTable& table, double tol)
{
    const std::int64_t N = phi.N(), h = table.modulus();
    if (static_cast<std::int64_t>(G.size()) != N) throw PreconditionError("character_sum_check: weight length differs from N");
    double lhs = 0.0;
    for (std::size_t chi = 0; chi < table.size(); ++chi) {
        std::vector<cplx> tau(static_cast<std::size_t>(h));
        for (std::int64_t b = 0; b < h; ++b) tau[static_cast<std::size_t>(b)] = gauss_sum(table, chi, b);
        cplx s{0.0, 0.0};
        for (std::int64_t n = 1; n <= N; ++n) s += phi(n) * G[static_cast<std::size_t>(n - 1)] * tau[static_cast<std::size_t>(n % h)];
        lhs += std::norm(s);
    }
    lhs /= static_cast<double>(table.size());
    double rhs = 0.0;
    for (std::int64_t a = 0; a < h; ++a) {
        if (gcd(a, h) != 1) continue;
        cplx s{0.0, 0.0};
        for (std::int64_t n = 1; n <= N; ++n) s += phi(n) * G[static_cast<std::size_t>(n - 1)] * e_frac(n * a, h);
        rhs += std::norm(s);
    }
    auto r = make_equality("global.character_sum", lhs, rhs, tol);
    r.params["h"] = format_param(static_cast<long long>(h));
    r.params["N"] = format_param(static_cast<long long>(N));
    return r;
}

SpectralIdentity spectral_identity(const ComplexSequence& phi, const WeightKernel& kernel, const TransformConfig& cfg, double Q, double H,
                                   std::int64_t L, std::int64_t M)
{
    cfg.validate();
    const std::int64_t N = phi.N();
    if (N < 1) throw PreconditionError("spectral_identity: N must be >= 1");
    if (!(Q >= 1.0) || !(H >= 0.5)) throw PreconditionError("spectral_identity: need Q >= 1 and H >= 1/2");
    const auto hmax = static_cast<std::int64_t>(std::floor(H));
    const std::int64_t Np = extended_length(N);
    if (hmax > Np - N) throw PreconditionError("spectral_identity: H exceeds N' - N");
    const double tau = static_cast<double>(N) / Q;
    const std::int64_t Mg = Np * ((std::max<std::int64_t>(M, 64) + Np - 1) / Np);
    if (L < 0 || L > Mg) throw PreconditionError("spectral_identity: need 0 <= L <= grid size");

    SpectralIdentity out;
    out.lhs = smoothed_form(phi, kernel, Q, {FareyPath::Dft, cfg.cache.get()}) / Q;
    PreciseEvaluator precise(kernel, cfg, N, Q, H);
    const auto pr = precise.evaluate(phi);
    out.I0 = pr.I0;
    out.rhs_exact = pr.rhs;
    const double main = out.I0 * phi.norm2();

    double op_sum = 0.0, exp_sum_total = 0.0;
    for (std::int64_t h = 1; h <= hmax; ++h) {
        const auto spec = nystrom_spectrum(kernel, cfg, tau, h, Mg, Mg);
        const auto table = character_table(h);
        const auto F = project_pure(gamma_embed(phi, h, Mg));
        const double bil = inner(F, apply_operator(spec, F)).real();
        const double term = static_cast<double>(N) * (tau / static_cast<double>(h)) * bil;
        op_sum += term;

        // the same bilinear form through the grid eigenbasis
        double eig = 0.0;
        std::vector<std::vector<cplx>> bases;
        for (std::size_t chi = 0; chi < table.size(); ++chi) bases.push_back(base_vector(table, chi));
        for (std::int64_t l = 0; l < Mg; ++l) {
            const Eigen::VectorXd g = spec.eigenfunctions.col(l);
            double mass = 0.0;
            for (const auto& base : bases) {
                cplx c{0.0, 0.0};
                for (std::int64_t b = 0; b < h; ++b) c += std::conj(base[static_cast<std::size_t>(b)]) * F.values.row(b).dot(g.cast<cplx>());
                mass += std::norm(c / (static_cast<double>(h) * static_cast<double>(Mg)));
            }
            eig += spec.eigenvalues[static_cast<std::size_t>(l)] * mass;
        }
        auto rep = make_equality("global.operator_eigenbasis", bil, eig, 1e-10 * std::max(1.0, F.values.squaredNorm() / static_cast<double>(h * Mg)));
        rep.params["h"] = format_param(static_cast<long long>(h));
        rep.params["M"] = format_param(static_cast<long long>(Mg));
        out.reports.push_back(rep);

        // truncated expansion at the points n/N
        double ex = 0.0;
        for (std::int64_t l = 1; l <= L; ++l) {
            std::vector<double> G(static_cast<std::size_t>(N));
            for (std::int64_t n = 1; n <= N; ++n) G[static_cast<std::size_t>(n - 1)] = spec.eigenfunction(static_cast<std::size_t>(l), static_cast<double>(n) / static_cast<double>(N));
            double mass = 0.0;
            for (std::int64_t a = 0; a < h; ++a) {
                if (gcd(a, h) != 1) continue;
                cplx s{0.0, 0.0};
                for (std::int64_t n = 1; n <= N; ++n) s += phi(n) * G[static_cast<std::size_t>(n - 1)] * e_frac(n * a, h);
                mass += std::norm(s);
            }
            ex += spec.eigenvalues[static_cast<std::size_t>(l - 1)] * mass;
            if (l == 1) {
                auto cs = character_sum_check(phi, G, table, 1e-9 * std::max(1.0, mass));
                out.reports.push_back(cs);
            }
        }
        exp_sum_total += ex / (static_cast<double>(h) * Q);
    }
    out.rhs_operator = main - op_sum;
    out.rhs_expansion = main - exp_sum_total;
    return out;
}

LowerboundScan lowerbound_scan(const std::vector<std::pair<std::string, ComplexSequence>>& family, const std::vector<double>& Q_grid,
                               const ArithCache& cache)
{
    LowerboundScan out;
    for (const auto& [label, phi] : family) {
        const double n2 = phi.norm2();
        if (!(n2 > 0.0)) throw PreconditionError("lowerbound_scan: zero sequence '" + label + "'");
        std::vector<double> xs, ys;
        bool positive = true;
        for (double Q : Q_grid) {
            LowerboundRow row;
            row.label = label;
            row.N = phi.N();
            row.Q = Q;
            row.N_over_Q = static_cast<double>(phi.N()) / Q;
            row.ratio = raw_form(phi, Q, {FareyPath::Ramanujan, &cache}) / (Q * Q * n2);
            positive = positive && row.ratio > 0.0;
            if (row.ratio > 0.0) {
                xs.push_back(row.N_over_Q);
                ys.push_back(std::log(row.ratio));
            }
            out.rows.push_back(row);
        }
        LowerboundFit fit;
        fit.label = label;
        fit.positive = positive;
        if (xs.size() >= 2) {
            const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
            const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
            double sxy = 0.0, sxx = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxy += (xs[i] - mx) * (ys[i] - my);
                sxx += (xs[i] - mx) * (xs[i] - mx);
            }
            const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
            fit.exponent = -slope;
            fit.log_A = my - slope * mx;
        }
        out.fits.push_back(fit);
    }
    return out;
}

}  // namespace sieve
