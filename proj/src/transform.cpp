#include "sieve/transform.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sieve/errors.hpp"
#include "sieve/quadrature.hpp"

namespace sieve {

void TransformConfig::validate() const
{
    if (series_N < 0) throw PreconditionError("TransformConfig: series_N must be >= 0");
    if (!(quad_tol > 0.0)) throw PreconditionError("TransformConfig: quad_tol must be positive");
    if (C && *C < 1) throw PreconditionError("TransformConfig: C must be >= 1");
    if (!cache) throw PreconditionError("TransformConfig: no arithmetic cache");
}

double w_sharp(const WeightKernel& kernel, double y)
{
    const double a = std::abs(y);
    if (a < 1.0) return 0.0;
    double s = 0.0;
    const auto k0 = static_cast<std::int64_t>(std::ceil(a / 2.0));
    const auto k1 = static_cast<std::int64_t>(std::floor(a));
    for (std::int64_t k = std::max<std::int64_t>(1, k0); k <= k1; ++k) s += kernel(a / k) / static_cast<double>(k);
    return s;
}

double w_flat(const WeightKernel& kernel, double z)
{
    if (!(z > 0.0)) throw PreconditionError("w_flat: z must be positive");
    double s = 0.0;
    const auto f0 = static_cast<std::int64_t>(std::ceil(1.0 / z));
    const auto f1 = static_cast<std::int64_t>(std::floor(2.0 / z));
    for (std::int64_t f = std::max<std::int64_t>(1, f0); f <= f1; ++f) s += kernel(z * f) / static_cast<double>(f);
    return s;
}

double w_tilde(const WeightKernel& kernel, double z)
{
    const double x = std::abs(z);
    if (x <= 1.0) return kernel.J;
    // With s = 1/u, u W'(u) + W(u) = -pm'(s) s^2 and du = -ds/s^2, so
    // W~(x) = -(1/x) int_{1/2}^{1} {x s} pm'(s) ds. The integrand is a
    // polynomial between consecutive points k/x and breakpoints of pm.
    const PiecewisePoly& d = kernel.dpm;
    const auto& br = d.breakpoints();
    double total = 0.0;
    for (std::size_t i = 0; i < d.piece_count(); ++i) {
        const double a = br[i], b = br[i + 1];
        double lo = a;
        auto k = static_cast<std::int64_t>(std::floor(x * a)) + 1;
        while (lo < b) {
            const double hi = std::min(b, static_cast<double>(k) / x);
            if (hi > lo) {
                const double fl = std::floor(x * 0.5 * (lo + hi));
                total += quad::gauss8([&](double s) { return (x * s - fl) * d.eval_piece(i, s); }, lo, hi);
            }
            lo = hi;
            ++k;
        }
    }
    return -total / x;
}

namespace {

void require_cache(const TransformConfig& cfg, std::int64_t n, const char* who)
{
    if (!cfg.cache) throw PreconditionError(std::string(who) + ": no arithmetic cache");
    if (cfg.cache->limit() < n) throw SizeError(std::string(who) + ": cache limit " + std::to_string(cfg.cache->limit()) + " below " + std::to_string(n));
}

double mobius_partial(const ArithCache& cache, std::int64_t C, int power)
{
    double s = 0.0;
    for (std::int64_t c = 1; c <= C; ++c) {
        const int mu = cache.mu(c);
        if (mu != 0) s += mu / std::pow(static_cast<double>(c), power);
    }
    return s;
}

}  // namespace

double w_star_C(const WeightKernel& kernel, const TransformConfig& cfg, double z)
{
    if (!cfg.C) throw PreconditionError("w_star_C: C must be finite");
    const std::int64_t C = *cfg.C;
    require_cache(cfg, C, "w_star_C");
    double s = 0.0;
    for (std::int64_t c = 1; c <= C; ++c) {
        const int mu = cfg.cache->mu(c);
        if (mu != 0) s += mu / static_cast<double>(c) * w_tilde(kernel, static_cast<double>(c) * z);
    }
    return s;
}

double w_star_star_C(const WeightKernel& kernel, const TransformConfig& cfg, double z)
{
    if (!cfg.C) throw PreconditionError("w_star_star_C: C must be finite");
    require_cache(cfg, *cfg.C, "w_star_star_C");
    const double x = std::abs(z);
    // W~(cz) = J for c|z| <= 1, so only c > 1/|z| contribute.
    double s = 0.0;
    for (std::int64_t c = 1; c <= *cfg.C; ++c) {
        const int mu = cfg.cache->mu(c);
        if (mu == 0 || static_cast<double>(c) * x <= 1.0) continue;
        s += mu / static_cast<double>(c) * (w_tilde(kernel, static_cast<double>(c) * x) - kernel.J);
    }
    return s;
}

double series_error_bound(int m, double z, std::int64_t N)
{
    const double x = std::abs(z);
    if (N < 1) return std::numeric_limits<double>::infinity();
    const double lg = std::log(2.0) + m * std::log(2.0 * m / (std::numbers::pi * x)) - std::log(m - 1.0) - (m - 1.0) * std::log(static_cast<double>(N));
    return std::exp(lg);
}

std::int64_t series_terms_for(int m, double z, double tol)
{
    const double x = std::abs(z);
    const double lg = (std::log(2.0) + m * std::log(2.0 * m / (std::numbers::pi * x)) - std::log(m - 1.0) - std::log(tol)) / (m - 1.0);
    if (lg > 60.0) return std::numeric_limits<std::int64_t>::max();
    auto N = static_cast<std::int64_t>(std::ceil(std::exp(lg)));
    N = std::max<std::int64_t>(N, 1);
    while (N > 1 && series_error_bound(m, x, N - 1) < tol) --N;
    while (series_error_bound(m, x, N) >= tol) ++N;
    return N;
}

SeriesValue w_star_series(const WeightKernel& kernel, const TransformConfig& cfg, double z)
{
    const double x = std::abs(z);
    if (!(x > 0.0)) throw PreconditionError("w_star_series: z must be nonzero");
    if (!cfg.cache) throw PreconditionError("w_star_series: no arithmetic cache");
    const int m = kernel.m;
    const std::int64_t cap = std::min(cfg.series_cap, cfg.cache->limit());
    std::int64_t N = std::max(cfg.series_N, series_terms_for(m, x, cfg.quad_tol));
    if (N > cap) {
        const double b = series_error_bound(m, x, cap);
        throw AccuracyError("w_star_series: " + std::to_string(N) + " terms needed at z=" + std::to_string(x) + ", cap is " + std::to_string(cap), b);
    }
    const auto& phi = cfg.cache->phi_table();
    const double a = 1.5 * std::numbers::pi * x;
    const double b = std::numbers::pi * x / (2.0 * m);
    double sum = 0.0, comp = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double nb = b * static_cast<double>(n);
        const double term = phi[n] / static_cast<double>(n) * std::cos(a * static_cast<double>(n)) * std::pow(std::sin(nb) / nb, m);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return {-2.0 * (sum + comp), series_error_bound(m, x, N), N};
}

double w_star(const WeightKernel& kernel, const TransformConfig& cfg, double z)
{
    if (z == 0.0) return 0.0;
    return w_star_series(kernel, cfg, z).value;
}

double hat_plateau(const WeightKernel& kernel) { return 6.0 / (std::numbers::pi * std::numbers::pi) * kernel.integral0; }

double hat_plateau_C(const WeightKernel& kernel, const ArithCache& cache, std::int64_t C)
{
    if (C < 1 || C > cache.limit()) throw SizeError("hat_plateau_C: C outside cache range");
    return mobius_partial(cache, C, 2) * kernel.integral0;
}

namespace {

template <class Ratio>
double hat_sum(const WeightKernel& kernel, const ArithCache& cache, double u, Ratio ratio)
{
    const double a = std::abs(u);
    const auto n0 = static_cast<std::int64_t>(std::ceil(a));
    const auto n1 = static_cast<std::int64_t>(std::floor(2.0 * a));
    if (n1 > cache.limit()) throw SizeError("w_hat_star: cache limit below 2|u|");
    double s = 0.0;
    for (std::int64_t n = std::max<std::int64_t>(1, n0); n <= n1; ++n) s += ratio(n) * kernel(n / a);
    return s / a;
}

}  // namespace

double w_hat_star(const WeightKernel& kernel, const ArithCache& cache, double u)
{
    const double P = hat_plateau(kernel);
    if (std::abs(u) <= 0.5) return P;
    return P - hat_sum(kernel, cache, u, [&](std::int64_t n) { return static_cast<double>(cache.phi(n)) / static_cast<double>(n); });
}

double w_hat_star_C(const WeightKernel& kernel, const ArithCache& cache, std::int64_t C, double u)
{
    const double P = hat_plateau_C(kernel, cache, C);
    if (std::abs(u) <= 0.5) return P;
    return P - hat_sum(kernel, cache, u, [&](std::int64_t n) { return phi_C_ratio(cache, n, C); });
}

}  // namespace sieve
