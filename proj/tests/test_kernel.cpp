#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "sieve/errors.hpp"
#include "sieve/kernel.hpp"
#include "sieve/quadrature.hpp"

using namespace sieve;
using Rat = boost::multiprecision::cpp_rational;

namespace {

// Exact closed forms on |t|, t rational.
Rat closed_m2(Rat t)
{
    if (t < 0) t = -t;
    return t <= 2 ? Rat(2) - t : Rat(0);
}

Rat closed_m3(Rat t)
{
    if (t < 0) t = -t;
    if (t <= 1) return Rat(3) - t * t;
    if (t <= 3) return (Rat(3) - t) * (Rat(3) - t) / 2;
    return 0;
}

Rat closed_m5(Rat t)
{
    if (t < 0) t = -t;
    const Rat t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    if (t <= 1) return (Rat(115) - 30 * t2 + 3 * t4) / 12;
    if (t <= 3) return (Rat(55) + 10 * t - 30 * t2 + 10 * t3 - t4) / 6;
    if (t <= 5) return (Rat(625) - 500 * t + 150 * t2 - 20 * t3 + t4) / 24;
    return 0;
}

template <class F>
double worst_rational(int m, F closed, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> num(-(m + 1) * 1000, (m + 1) * 1000);
    const auto f = conv_power(m);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Rat t(num(rng), 1000);
        worst = std::max(worst, std::abs(f(static_cast<double>(t)) - static_cast<double>(closed(t))));
    }
    return worst;
}

}  // namespace

TEST(ConvPower, ClosedFormsExact)
{
    EXPECT_LT(worst_rational(2, closed_m2, 1), 1e-12);
    EXPECT_LT(worst_rational(3, closed_m3, 2), 1e-12);
    EXPECT_LT(worst_rational(5, closed_m5, 3), 1e-12);
}

TEST(ConvPower, CentralValues)
{
    EXPECT_NEAR(conv_power(2)(0.0), 2.0, 1e-14);
    EXPECT_NEAR(conv_power(3)(0.0), 3.0, 1e-14);
    EXPECT_NEAR(conv_power(5)(0.0), 115.0 / 12.0, 1e-13);
}

TEST(ConvPower, RecursionMatchesRenyi)
{
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 8; ++m) {
        const auto f = conv_power(m);
        std::uniform_real_distribution<double> u(-m - 0.5, m + 0.5);
        for (int i = 0; i < 200; ++i) {
            const double t = u(rng);
            ASSERT_NEAR(f(t), renyi_conv_power(m, t), 1e-10) << m << ' ' << t;
        }
    }
}

TEST(ConvPower, MassAndSmoothness)
{
    for (int m = 1; m <= 12; ++m) {
        const auto f = conv_power(m);
        EXPECT_NEAR(f.integral() / std::ldexp(1.0, m), 1.0, 1e-12) << m;
        for (std::size_t i = 1; i + 1 < f.breakpoints().size(); ++i)
            for (int k = 0; k <= m - 2; ++k) ASSERT_LT(std::abs(f.derivative_jump(i, k)), 1e-9) << m << ' ' << i << ' ' << k;
    }
}

TEST(ConvPower, EvenSymmetry)
{
    const auto f = conv_power(7);
    for (int i = 0; i < 64; ++i) {
        const double t = 7.0 * i / 64.0;
        ASSERT_NEAR(f(t), f(-t), 1e-12);
    }
}

TEST(ConvPower, RangeChecked)
{
    EXPECT_THROW(conv_power(0), PreconditionError);
    EXPECT_THROW(conv_power(13), PreconditionError);
}

TEST(Weight, SupportAndShape)
{
    const auto W = build_weight(5);
    EXPECT_NEAR(W.pm.integral(), 1.0, 1e-13);
    EXPECT_EQ(W(0.9), 0.0);
    EXPECT_EQ(W(2.1), 0.0);
    EXPECT_NEAR(W(1.0), 0.0, 1e-12);
    EXPECT_NEAR(W(2.0), 0.0, 1e-12);
    for (int i = 0; i <= 200; ++i) {
        const double t = 1.0 + i / 200.0;
        ASSERT_GE(W(t), -1e-14);
        ASSERT_EQ(W(t), W(-t));
    }
}

TEST(Weight, Constants)
{
    const auto W = build_weight(5);
    EXPECT_NEAR(W.integral0, 1.343418391779511, 1e-12);
    EXPECT_NEAR(6.0 / (std::numbers::pi * std::numbers::pi) * W.integral0, 0.816, 1e-3);
    EXPECT_NEAR(W.J, quad::adaptive([&](double t) { return W(t) / t; }, 1.0, 2.0, 1e-13), 1e-12);
    EXPECT_NEAR(W.integral0, quad::adaptive([&](double t) { return W(t); }, 1.0, 2.0, 1e-13), 1e-12);
}

TEST(Weight, RejectsLowOrder)
{
    EXPECT_THROW(build_weight(4), PreconditionError);
}

TEST(Weight, DerivativeMatchesDifferenceQuotient)
{
    const auto W = build_weight(6);
    for (double t : {1.1, 1.37, 1.5, 1.81}) {
        const double h = 1e-6;
        EXPECT_NEAR(W.derivative(t), (W(t + h) - W(t - h)) / (2 * h), 1e-6);
    }
}

TEST(FourierPm, ClosedFormProperties)
{
    EXPECT_NEAR(std::abs(fourier_pm(5, 0.0) - cplx(1.0)), 0.0, 1e-15);
    for (double u : {1.0, -1.0, 3.7, -3.7, 10.0, -10.0}) EXPECT_LE(std::abs(fourier_pm(5, u)), 1.0 + 1e-15);
}

TEST(FourierPm, MatchesQuadrature)
{
    const auto W = build_weight(5);
    for (double u : {0.4, 1.3, 2.9}) {
        const auto& bp = W.pm.breakpoints();
        std::vector<double> cuts(bp.begin() + 1, bp.end() - 1);
        const double re = quad::adaptive_split([&](double t) { return W.pm(t) * std::cos(2 * std::numbers::pi * u * t); }, bp.front(), bp.back(), cuts, 1e-13);
        const double im = quad::adaptive_split([&](double t) { return -W.pm(t) * std::sin(2 * std::numbers::pi * u * t); }, bp.front(), bp.back(), cuts, 1e-13);
        EXPECT_LT(std::abs(fourier_pm(5, u) - cplx(re, im)), 1e-9) << u;
    }
}

TEST(I0, Examples)
{
    const auto W = build_weight(5);
    const ArithCache big(20001);
    EXPECT_NEAR(I0(W, big, 1e4), 6.0 / (std::numbers::pi * std::numbers::pi) * W.integral0, 0.01);
    const ArithCache small(2);
    EXPECT_NEAR(I0(W, small, 1.0), W(2.0) / 2.0, 1e-15);
    EXPECT_EQ(I0(W.scaled(0.0), big, 100.0), 0.0);
    EXPECT_THROW(I0(W, small, 5.0), SizeError);
}

TEST(Mellin, SpecialPoints)
{
    const auto W = build_weight(5);
    EXPECT_NEAR(std::abs(mellin_W(W, 0.0) - cplx(W.J)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(mellin_W(W, 1.0) - cplx(W.integral0)), 0.0, 1e-10);
}

TEST(Mellin, DecaysVertically)
{
    const auto W = build_weight(5);
    std::vector<double> scaled;
    for (double y : {40.0, 80.0, 160.0, 320.0}) scaled.push_back(std::abs(mellin_W(W, cplx(9.0 / 8.0, y))) * std::pow(1 + y, 4));
    const double K = *std::max_element(scaled.begin(), scaled.begin() + 2);
    for (double v : scaled) EXPECT_LE(v, 2.0 * K);
}
