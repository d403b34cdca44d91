#include "sieve/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sieve/errors.hpp"
#include "sieve/quadrature.hpp"

namespace sieve {

double poly_eval(const std::vector<double>& c, double x)
{
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

namespace {

std::vector<double> poly_derivative(const std::vector<double>& c)
{
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

std::vector<double> poly_antiderivative(const std::vector<double>& c, double constant)
{
    std::vector<double> a(c.size() + 1);
    a[0] = constant;
    for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

std::vector<double> poly_sub(std::vector<double> a, const std::vector<double>& b)
{
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> pieces, bool even)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)), even_(even)
{
    if (breaks_.size() != pieces_.size() + 1) throw PreconditionError("PiecewisePoly: need one more breakpoint than pieces");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1])) throw PreconditionError("PiecewisePoly: breakpoints must increase");
    if (even_) {
        double scale = 0.0, worst = 0.0;
        const double span = std::max(std::abs(lo()), std::abs(hi()));
        for (int k = 0; k < 64; ++k) {
            const double t = span * (k + 0.5) / 64.0;
            const double a = (*this)(t), b = (*this)(-t);
            scale = std::max(scale, std::abs(a));
            worst = std::max(worst, std::abs(a - b));
        }
        if (worst > 1e-12 * std::max(1.0, scale)) throw PreconditionError("PiecewisePoly: even flag set but f(-t) != f(t)");
    }
}

int PiecewisePoly::degree() const
{
    std::size_t d = 0;
    for (const auto& p : pieces_) d = std::max(d, p.size());
    return d == 0 ? 0 : static_cast<int>(d) - 1;
}

std::size_t PiecewisePoly::locate(double t) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t i = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(i, pieces_.size() - 1);
}

double PiecewisePoly::eval_piece(std::size_t i, double t) const { return poly_eval(pieces_[i], t - breaks_[i]); }

double PiecewisePoly::operator()(double t) const
{
    if (pieces_.empty() || t < lo() || t > hi()) return 0.0;
    const std::size_t i = locate(t);
    return eval_piece(i, t);
}

PiecewisePoly PiecewisePoly::derivative() const
{
    std::vector<std::vector<double>> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(poly_derivative(p));
    PiecewisePoly out;
    out.breaks_ = breaks_;
    out.pieces_ = std::move(d);
    return out;
}

PiecewisePoly PiecewisePoly::antiderivative() const
{
    std::vector<std::vector<double>> a;
    a.reserve(pieces_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        a.push_back(poly_antiderivative(pieces_[i], acc));
        acc = poly_eval(a.back(), breaks_[i + 1] - breaks_[i]);
    }
    PiecewisePoly out;
    out.breaks_ = breaks_;
    out.pieces_ = std::move(a);
    return out;
}

double PiecewisePoly::integral() const { return integral(lo(), hi()); }

double PiecewisePoly::integral(double a, double b) const
{
    if (b < a) return -integral(b, a);
    double s = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double l = std::max(a, breaks_[i]);
        const double r = std::min(b, breaks_[i + 1]);
        if (!(r > l)) continue;
        const auto anti = poly_antiderivative(pieces_[i], 0.0);
        s += poly_eval(anti, r - breaks_[i]) - poly_eval(anti, l - breaks_[i]);
    }
    return s;
}

PiecewisePoly PiecewisePoly::scaled(double c) const
{
    PiecewisePoly out = *this;
    for (auto& p : out.pieces_)
        for (double& x : p) x *= c;
    return out;
}

double PiecewisePoly::derivative_jump(std::size_t i, int k) const
{
    if (i == 0 || i >= pieces_.size()) throw PreconditionError("derivative_jump: not an interior breakpoint");
    std::vector<double> left = pieces_[i - 1], right = pieces_[i];
    for (int j = 0; j < k; ++j) {
        left = poly_derivative(left);
        right = poly_derivative(right);
    }
    return poly_eval(left, breaks_[i] - breaks_[i - 1]) - poly_eval(right, 0.0);
}

PiecewisePoly conv_power(int m)
{
    if (m < 1 || m > 12) throw PreconditionError("conv_power: m must lie in [1, 12], got " + std::to_string(m));
    // g_1 on unit pieces [-1,0], [0,1]
    std::vector<std::vector<double>> g{{1.0}, {1.0}};
    for (int k = 1; k < m; ++k) {
        // antiderivative F on [-k, k], unit pieces indexed by left endpoint
        std::vector<std::vector<double>> F;
        double acc = 0.0;
        for (const auto& p : g) {
            F.push_back(poly_antiderivative(p, acc));
            acc = poly_eval(F.back(), 1.0);
        }
        const double total = acc;
        auto Fpiece = [&](int left) -> std::vector<double> {
            if (left < -k) return {0.0};
            if (left >= k) return {total};
            return F[static_cast<std::size_t>(left + k)];
        };
        // g_{k+1}(t) = F(t+1) - F(t-1); same local variable on each unit piece
        std::vector<std::vector<double>> next;
        for (int j = -(k + 1); j <= k; ++j) next.push_back(poly_sub(Fpiece(j + 1), Fpiece(j - 1)));
        g = std::move(next);
    }
    std::vector<double> breaks;
    for (int j = -m; j <= m; ++j) breaks.push_back(j);
    return PiecewisePoly(breaks, g, true);
}

double renyi_conv_power(int m, double t)
{
    if (m < 1 || m > 12) throw PreconditionError("renyi_conv_power: m must lie in [1, 12]");
    const double a = std::abs(t);
    if (a >= m) return 0.0;
    double fact = 1.0;
    for (int i = 2; i < m; ++i) fact *= i;
    double s = 0.0, binom = 1.0;
    const int jmax = static_cast<int>(std::floor((m + a) / 2.0));
    for (int j = 0; j <= jmax; ++j) {
        const double base = m + a - 2.0 * j;
        s += (j % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(base, m - 1);
        binom = binom * (m - j) / (j + 1);
    }
    return s / fact;
}

double WeightKernel::operator()(double t) const
{
    const double a = std::abs(t);
    if (a < 1.0 || a > 2.0) return 0.0;
    return pm(1.0 / a) / a;
}

double WeightKernel::derivative(double t) const
{
    const double a = std::abs(t);
    if (a < 1.0 || a > 2.0) return 0.0;
    const double s = 1.0 / a;
    // d/da [pm(1/a)/a] = -pm'(1/a)/a^3 - pm(1/a)/a^2
    const double d = -dpm(s) * s * s * s - pm(s) * s * s;
    return t < 0 ? -d : d;
}

WeightKernel WeightKernel::scaled(double c) const
{
    WeightKernel k = *this;
    k.pm = pm.scaled(c);
    k.dpm = dpm.scaled(c);
    k.J *= c;
    k.integral0 *= c;
    return k;
}

WeightKernel build_weight(int m)
{
    if (m < 5) throw PreconditionError("build_weight: m must be >= 5, got " + std::to_string(m));
    const PiecewisePoly g = conv_power(m);
    const double A = 4.0 * m;
    const double scale = A / std::pow(2.0, m);
    std::vector<double> breaks;
    std::vector<std::vector<double>> pieces;
    for (std::size_t i = 0; i < g.breakpoints().size(); ++i) breaks.push_back((g.breakpoints()[i] + 3.0 * m) / A);
    for (std::size_t i = 0; i < g.piece_count(); ++i) {
        std::vector<double> c = g.piece(i);
        double f = scale;
        for (double& x : c) {
            x *= f;
            f *= A;
        }
        pieces.push_back(std::move(c));
    }
    WeightKernel k;
    k.m = m;
    k.pm = PiecewisePoly(breaks, pieces);
    k.dpm = k.pm.derivative();
    k.J = k.pm.integral();
    // integral of W over [1,2] is the integral of pm(s)/s over [1/2,1]
    double s = 0.0;
    for (std::size_t i = 0; i < k.pm.piece_count(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        s += quad::adaptive([&](double x) { return k.pm.eval_piece(i, x) / x; }, a, b, 1e-14);
    }
    k.integral0 = s;
    return k;
}

cplx fourier_pm(int m, double u)
{
    if (m < 1) throw PreconditionError("fourier_pm: m must be >= 1");
    if (u == 0.0) return {1.0, 0.0};
    const double x = std::numbers::pi * u / (2.0 * m);
    return e(-0.75 * u) * std::pow(std::sin(x) / x, m);
}

double I0(const WeightKernel& kernel, const ArithCache& cache, double Q)
{
    if (!(Q >= 1.0)) throw PreconditionError("I0: Q must be >= 1");
    const auto qmax = static_cast<std::int64_t>(std::floor(2.0 * Q));
    if (qmax > cache.limit()) throw SizeError("I0: cache limit below 2Q");
    double s = 0.0;
    for (auto q = static_cast<std::int64_t>(std::floor(Q)) + 1; q <= qmax; ++q)
        s += static_cast<double>(cache.phi(q)) * kernel(q / Q) / static_cast<double>(q);
    return s / Q;
}

cplx mellin_W(const WeightKernel& kernel, cplx s)
{
    // t = 1/x turns the integral into int pm(x) x^{-s} dx over [1/2, 1]
    double re = 0.0, im = 0.0;
    const auto& br = kernel.pm.breakpoints();
    for (std::size_t i = 0; i < kernel.pm.piece_count(); ++i) {
        auto f = [&](double x) { return kernel.pm.eval_piece(i, x) * std::pow(x, -s); };
        re += quad::adaptive([&](double x) { return f(x).real(); }, br[i], br[i + 1], 1e-11);
        im += quad::adaptive([&](double x) { return f(x).imag(); }, br[i], br[i + 1], 1e-11);
    }
    return {re, im};
}

}  // namespace sieve
