#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "sieve/errors.hpp"
#include "sieve/localspec.hpp"
#include "sieve/quadrature.hpp"
#include "sieve/transform.hpp"

using namespace sieve;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

struct Fixture : ::testing::Test {
    static void SetUpTestSuite()
    {
        W = new WeightKernel(build_weight(5));
        cache = new std::shared_ptr<const ArithCache>(std::make_shared<ArithCache>(std::int64_t{1} << 23));
    }
    static void TearDownTestSuite()
    {
        delete W;
        delete cache;
    }
    static TransformConfig cfg(double tol = 1e-10, std::optional<std::int64_t> C = {})
    {
        TransformConfig c;
        c.cache = *cache;
        c.quad_tol = tol;
        c.C = C;
        return c;
    }
    static WeightKernel* W;
    static std::shared_ptr<const ArithCache>* cache;
};

WeightKernel* Fixture::W = nullptr;
std::shared_ptr<const ArithCache>* Fixture::cache = nullptr;

using Transform = Fixture;

}  // namespace

TEST_F(Transform, SharpExamples)
{
    EXPECT_EQ(w_sharp(*W, 0.5), 0.0);
    EXPECT_NEAR(w_sharp(*W, 1.5), (*W)(1.5), 1e-15);
    EXPECT_NEAR(w_sharp(*W, 3.0), (*W)(1.5) / 2.0, 1e-15);
}

TEST_F(Transform, FlatExamples)
{
    EXPECT_EQ(w_flat(*W, 3.0), 0.0);
    EXPECT_NEAR(w_flat(*W, 1e-3), W->J, 0.01);
    EXPECT_NEAR(w_flat(*W, 1.0), 0.0, 1e-12);
    EXPECT_THROW(w_flat(*W, 0.0), PreconditionError);
}

TEST_F(Transform, TildeExamples)
{
    EXPECT_EQ(w_tilde(*W, 0.7), W->J);
    EXPECT_NEAR(w_tilde(*W, 5.3), w_tilde(*W, -5.3), 1e-12);
    std::vector<double> scaled;
    for (double z : {4.0, 8.0, 16.0, 32.0}) scaled.push_back(std::abs(w_tilde(*W, z)) * z * z);
    for (double s : scaled) EXPECT_LE(s, 2.0 * scaled.front() + 0.5);
}

TEST_F(Transform, SharpIsJMinusTilde)
{
    for (double y : {1.3, 2.7, 6.0, 11.2}) EXPECT_NEAR(w_sharp(*W, y), W->J - w_tilde(*W, y), 1e-8) << y;
}

TEST_F(Transform, StarCExamples)
{
    EXPECT_NEAR(w_star_star_C(*W, cfg(1e-10, 50), 0.01), 0.0, 1e-12);
    double mu_sum = 0.0;
    for (std::int64_t c = 1; c <= 10; ++c) mu_sum += (*cache)->mu(c) / static_cast<double>(c);
    EXPECT_NEAR(w_star_C(*W, cfg(1e-10, 10), 0.0), W->J * mu_sum, 1e-12);
    EXPECT_NEAR(w_star_C(*W, cfg(1e-10, 30), 2.3), w_star_C(*W, cfg(1e-10, 30), -2.3), 1e-12);
}

TEST_F(Transform, StarCNeedsFiniteC)
{
    EXPECT_THROW(w_star_C(*W, cfg(), 1.0), PreconditionError);
}

TEST_F(Transform, SeriesErrorBound)
{
    EXPECT_NEAR(series_error_bound(5, 1.0, 100), 2.0 * std::pow(10.0 / std::numbers::pi, 5) / (4.0 * 1e8), 1e-18);
    EXPECT_NEAR(series_error_bound(5, 1.0, 100), 1.6e-6, 0.05e-6);
    const auto N = series_terms_for(5, 0.7, 1e-8);
    EXPECT_LT(series_error_bound(5, 0.7, N), 1e-8);
    EXPECT_GE(series_error_bound(5, 0.7, N - 1), 1e-8);
}

TEST_F(Transform, SeriesReferenceValues)
{
    const auto c = cfg(1e-10);
    EXPECT_NEAR(w_star(*W, c, 0.5), 0.906506549750, 1e-9);
    EXPECT_NEAR(w_star(*W, c, 1.0), 0.489149233323, 1e-9);
    EXPECT_NEAR(w_star(*W, c, 2.0), 1.227017554496, 1e-9);
    EXPECT_EQ(w_star(*W, c, 0.0), 0.0);
    EXPECT_NEAR(w_star(*W, c, -1.0), w_star(*W, c, 1.0), 1e-15);
}

TEST_F(Transform, SeriesAgreesWithTruncatedMoebius)
{
    for (double z : {0.5, 1.0, 2.0}) EXPECT_NEAR(w_star_series(*W, cfg(1e-8), z).value, w_star_C(*W, cfg(1e-10, 2000), z), 1e-4) << z;
}

TEST_F(Transform, SeriesAgreesWithFourierInversion)
{
    for (double z : {0.5, 1.0, 2.0}) {
        double s = 0.0;
        for (int i = 0; i < 200 * 8; ++i)
            s += boost::math::quadrature::gauss<double, 20>::integrate(
                [&](double u) { return w_hat_star(*W, **cache, u) * std::cos(2.0 * std::numbers::pi * u * z); }, i / 8.0, (i + 1) / 8.0);
        EXPECT_NEAR(2.0 * s, w_star(*W, cfg(1e-10), z), 5e-5) << z;
    }
}

TEST_F(Transform, SeriesDecaysForLargeZ)
{
    EXPECT_LT(std::abs(w_star(*W, cfg(1e-10), 50.0)), 1e-3);
}

TEST_F(Transform, SeriesCapRaisesAccuracyError)
{
    auto c = cfg(1e-12);
    c.series_cap = 1000;
    try {
        w_star_series(*W, c, 1e-3);
        FAIL() << "expected AccuracyError";
    } catch (const AccuracyError& e) {
        EXPECT_GT(e.bound(), 1e-12);
    }
}

TEST_F(Transform, HatPlateau)
{
    const double P = 6.0 / kPi2 * W->integral0;
    EXPECT_NEAR(hat_plateau(*W), P, 1e-12);
    for (double u : {0.0, 0.3, -0.45, 0.5}) EXPECT_NEAR(w_hat_star(*W, **cache, u), P, 1e-10) << u;
    EXPECT_NEAR(w_hat_star(*W, **cache, 0.8), P - (*W)(1.0 / 0.8) / 0.8, 1e-12);
    EXPECT_NEAR(w_hat_star(*W, **cache, 1.0), w_hat_star(*W, **cache, 0.0), 1e-12);
}

TEST_F(Transform, HatSignChangeAndUpperBound)
{
    double lo = 1e300, hi = -1e300;
    const double P = hat_plateau(*W);
    for (int i = 0; i < 200; ++i) {
        const double v = w_hat_star(*W, **cache, 0.5 + 0.5 * (i + 0.5) / 200.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(lo, 0.0);
    EXPECT_GT(hi, 0.0);
    for (int i = 0; i < 4000; ++i) ASSERT_LE(w_hat_star(*W, **cache, i / 100.0), P + 1e-12);
}

TEST_F(Transform, HatExtrema)
{
    const auto ex = w_hat_star_extrema(*W, **cache);
    EXPECT_NEAR(ex.min, -5.172882883841, 1e-8);
    EXPECT_NEAR(ex.argmin, 0.75, 0.05);
    EXPECT_NEAR(ex.max, hat_plateau(*W), 1e-15);
}

TEST_F(Transform, HatTruncationDecaysInC)
{
    for (std::int64_t C : {25, 50, 100, 200})
        for (double u : {5.0, 20.0, 50.0})
            EXPECT_LE(std::abs(w_hat_star(*W, **cache, u) - w_hat_star_C(*W, **cache, C, u)), 0.05 * std::log(u + 2.0) / static_cast<double>(C)) << C << ' ' << u;
}

TEST_F(Transform, HatPlateauC)
{
    double sum = 0.0;
    for (std::int64_t c = 1; c <= 40; ++c) sum += (*cache)->mu(c) / static_cast<double>(c * c);
    EXPECT_NEAR(hat_plateau_C(*W, **cache, 40), sum * W->integral0, 1e-12);
    EXPECT_NEAR(hat_plateau_C(*W, **cache, 40), w_hat_star_C(*W, **cache, 40, 0.25), 1e-12);
}

TEST_F(Transform, ConfigValidation)
{
    TransformConfig c;
    c.quad_tol = 0.0;
    EXPECT_THROW(c.validate(), PreconditionError);
    c.quad_tol = 1e-8;
    c.C = 0;
    EXPECT_THROW(c.validate(), PreconditionError);
}
