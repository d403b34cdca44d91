#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "sieve/errors.hpp"
#include "sieve/localspec.hpp"
#include "sieve/verify.hpp"

using namespace sieve;

namespace {

struct Local : ::testing::Test {
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
    static TransformConfig cfg(double tol = 1e-8)
    {
        TransformConfig c;
        c.cache = *cache;
        c.quad_tol = tol;
        return c;
    }
    static Spectrum spectrum(double th, std::int64_t M = 400, std::int64_t L = 20) { return nystrom_spectrum(*W, cfg(), th, M, L); }
    static WeightKernel* W;
    static std::shared_ptr<const ArithCache>* cache;
};

WeightKernel* Local::W = nullptr;
std::shared_ptr<const ArithCache>* Local::cache = nullptr;

ComplexSequence random_complex(std::int64_t N, std::uint64_t seed) { return generate_sequence({SequenceKind::RandomComplex, N, seed, {}}); }

GridFunction random_grid(std::int64_t h, std::int64_t M, std::uint64_t seed)
{
    Xorshift64Star rng(seed);
    GridFunction F(h, M);
    for (std::int64_t b = 0; b < h; ++b)
        for (std::int64_t j = 0; j < M; ++j) F.values(b, j) = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    return F;
}

double norm(const GridFunction& F) { return std::sqrt(inner(F, F).real()); }

}  // namespace

TEST(Embedding, ExtendedLength)
{
    EXPECT_EQ(extended_length(100), 110);
    EXPECT_EQ(extended_length(101), 112);
    EXPECT_EQ(extended_length(1), 2);
}

TEST(Embedding, Isometry)
{
    const std::int64_t N = 400, Np = extended_length(N);
    const auto a = random_complex(N, 1), b = random_complex(N, 2);
    for (std::int64_t h : {1, 3, 7}) {
        const auto Fa = gamma_embed(a, h, 2 * Np), Fb = gamma_embed(b, h, 2 * Np);
        EXPECT_LT(std::abs(inner(Fa, Fb) - static_cast<double>(N) / static_cast<double>(Np) * scalar_product(a, b)), 1e-9) << h;
    }
}

TEST(Embedding, SingleRowAndZero)
{
    const auto phi = random_complex(50, 3);
    const auto F = gamma_embed(phi, 1, extended_length(50));
    EXPECT_EQ(F.values.rows(), 1);
    EXPECT_EQ(F.values(0, 0), phi(1));
    EXPECT_EQ(F.values(0, 49), phi(50));
    EXPECT_EQ(F.values(0, 55), cplx(0.0));
    EXPECT_EQ(gamma_embed(ComplexSequence(50), 3, 200).values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Embedding, ModulusTooLarge)
{
    EXPECT_THROW(gamma_embed(random_complex(100, 1), 11, 440), PreconditionError);
}

TEST(Adjoint, GammaStarGamma)
{
    const std::int64_t N = 100, h = 4, Np = extended_length(N);
    const auto a = random_complex(N, 5);
    const auto back = gamma_adjoint(gamma_embed(a, h, 3 * Np), N);
    for (std::int64_t n = 1; n <= N; ++n) ASSERT_LT(std::abs(back(n) - static_cast<double>(N) / static_cast<double>(Np) * a(n)), 1e-9) << n;
}

TEST(Adjoint, Adjointness)
{
    const std::int64_t N = 100, h = 4, M = 2 * extended_length(N);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto a = random_complex(N, seed);
        const auto F = random_grid(h, M, seed + 100);
        EXPECT_LT(std::abs(inner(gamma_embed(a, h, M), F) - scalar_product(a, gamma_adjoint(F, N))), 1e-9);
    }
    EXPECT_TRUE(gamma_adjoint(GridFunction(h, M), N).is_zero());
}

TEST(Adjoint, CoarseGridRejected)
{
    EXPECT_THROW(gamma_adjoint(GridFunction(2, 10), 100), PreconditionError);
}

TEST(Projector, IdempotentAndIdentityForH1)
{
    const auto F = random_grid(12, 64, 9);
    const auto P = project_pure(F);
    EXPECT_LT((project_pure(P).values - P.values).cwiseAbs().maxCoeff(), 1e-11);
    const auto G = random_grid(1, 64, 10);
    EXPECT_LT((project_pure(G).values - G.values).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Projector, SelfAdjoint)
{
    const auto F = random_grid(10, 32, 1), G = random_grid(10, 32, 2);
    EXPECT_LT(std::abs(inner(project_pure(F), G) - inner(F, project_pure(G))), 1e-12);
}

TEST(Projector, Contraction)
{
    const std::int64_t N = 200, Np = extended_length(N);
    const auto a = random_complex(N, 4);
    const auto F = gamma_embed(a, 6, Np);
    EXPECT_LE(norm(project_pure(F)), norm(F) + 1e-14);
    ComplexSequence even(N);
    for (std::int64_t n = 2; n <= N; n += 2) even.at(n) = 1.0;
    const auto E = gamma_embed(even, 2, Np);
    EXPECT_LT(norm(project_pure(E)), 0.99 * norm(E));
}

TEST(Projector, BaseVectorsOrthonormalAndFixed)
{
    for (std::int64_t h : {5, 12}) {
        const auto t = character_table(h);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto bi = base_vector(t, i);
            GridFunction F(h, 1);
            for (std::int64_t b = 0; b < h; ++b) F.values(b, 0) = bi[static_cast<std::size_t>(b)];
            EXPECT_LT((project_pure(F).values - F.values).cwiseAbs().maxCoeff(), 1e-12);
            for (std::size_t j = 0; j < t.size(); ++j) {
                const auto bj = base_vector(t, j);
                cplx s = 0;
                for (std::int64_t b = 0; b < h; ++b) s += bi[static_cast<std::size_t>(b)] * std::conj(bj[static_cast<std::size_t>(b)]);
                EXPECT_LT(std::abs(s / static_cast<double>(h) - cplx(i == j ? 1.0 : 0.0)), 1e-12);
            }
        }
    }
}

TEST_F(Local, ProjectorCommutesWithOperator)
{
    const auto s = spectrum(1.0, 128, 1);
    const auto F = random_grid(6, 128, 3);
    EXPECT_LT((project_pure(apply_operator(s, F)).values - apply_operator(s, project_pure(F)).values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(Local, TraceIsZero)
{
    for (double th : {0.25, 1.0, 4.0}) {
        const auto s = spectrum(th);
        EXPECT_EQ(s.trace(), 0.0);
        double sum = 0.0;
        for (double l : s.eigenvalues) sum += l;
        EXPECT_NEAR(sum, 0.0, 1e-12) << th;
    }
}

TEST_F(Local, HilbertSchmidt)
{
    for (double th : {0.25, 1.0, 4.0}) {
        const auto s = spectrum(th);
        double sq = 0.0;
        for (double l : s.eigenvalues) sq += l * l;
        EXPECT_NEAR(sq, kernel_square_integral(*W, cfg(1e-7), th), 1e-4) << th;
    }
}

TEST_F(Local, LocalBound)
{
    for (double th : {0.25, 1.0, 4.0}) {
        const auto s = spectrum(th);
        const double bound = std::sqrt(kernel_square_integral(*W, cfg(1e-7), th) + 1e-4);
        for (std::size_t l = 1; l <= s.eigenvalues.size(); ++l) ASSERT_LE(std::abs(s.lambda(l)), bound / std::sqrt(static_cast<double>(l))) << th << ' ' << l;
    }
}

TEST_F(Local, EigenfunctionsOrthonormalAndSigned)
{
    const auto s = spectrum(1.0, 400, 30);
    const Eigen::MatrixXd G = s.eigenfunctions.transpose() * s.eigenfunctions / 400.0;
    EXPECT_LT((G - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-10);
    for (std::size_t l = 1; l < s.eigenvalues.size(); ++l) ASSERT_GE(std::abs(s.eigenvalues[l - 1]), std::abs(s.eigenvalues[l]));
    for (Eigen::Index c = 0; c < 30; ++c) {
        const double mx = s.eigenfunctions.col(c).cwiseAbs().maxCoeff();
        Eigen::Index j = 0;
        while (std::abs(s.eigenfunctions(j, c)) <= 1e-8 * mx) ++j;
        EXPECT_GT(s.eigenfunctions(j, c), 0.0);
    }
}

TEST_F(Local, Deterministic)
{
    const auto a = spectrum(1.0, 200, 5), b = spectrum(1.0, 200, 5);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ((a.eigenfunctions - b.eigenfunctions).cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(Local, BothSigns)
{
    for (double th : {0.25, 1.0, 4.0, 100.0}) {
        const auto s = spectrum(th, 200, 1);
        EXPECT_GT(*std::max_element(s.eigenvalues.begin(), s.eigenvalues.end()), 0.0);
        EXPECT_LT(*std::min_element(s.eigenvalues.begin(), s.eigenvalues.end()), 0.0);
    }
}

TEST_F(Local, DeepDecayRegimeBelowPlateau)
{
    const auto s = spectrum(100.0, 400, 1);
    EXPECT_LT(std::abs(s.lambda(1)), hat_plateau(*W));
}

TEST_F(Local, Preconditions)
{
    EXPECT_THROW(nystrom_spectrum(*W, cfg(), 1.0, 32, 1), PreconditionError);
    EXPECT_THROW(nystrom_spectrum(*W, cfg(), 1.0, 64, 65), PreconditionError);
    const auto s = spectrum(1.0, 64, 64);
    EXPECT_THROW(mercer_check(s, 64), PreconditionError);
}

TEST_F(Local, RefinementStableAtQuarter)
{
    const auto a = nystrom_spectrum(*W, cfg(1e-7), 0.25, 400, 1), b = nystrom_spectrum(*W, cfg(1e-7), 0.25, 800, 1);
    for (std::size_t l = 1; l <= 10; ++l) EXPECT_LT(std::abs(a.lambda(l) - b.lambda(l)), 1e-4) << l;
}

TEST_F(Local, NuclearNormIncrementsShrink)
{
    for (double th : {1.0, 4.0}) {
        std::vector<double> sums;
        for (std::int64_t M : {100, 200, 400, 800}) {
            const auto s = nystrom_spectrum(*W, cfg(1e-7), th, M, 1);
            double a = 0.0;
            for (double l : s.eigenvalues) a += std::abs(l);
            sums.push_back(a);
        }
        for (std::size_t i = 2; i < sums.size(); ++i) EXPECT_LT(std::abs(sums[i] - sums[i - 1]), std::abs(sums[i - 1] - sums[i - 2])) << th;
    }
}

TEST_F(Local, EigenfunctionVariationAndSupBound)
{
    for (double th : {0.25, 1.0, 4.0}) {
        const std::int64_t M = 400;
        const auto s = spectrum(th, M, 10);
        const auto V = difference_kernel_samples(*W, cfg(), th, M);
        double tv = 0.0, vmax = 0.0;
        for (std::size_t k = 0; k + 1 < V.size(); ++k) tv += std::abs(V[k + 1] - V[k]);
        for (double v : V) vmax = std::max(vmax, std::abs(v));
        for (std::size_t l = 1; l <= 10; ++l) {
            double g_tv = 0.0, g1 = 0.0, ginf = 0.0;
            for (std::int64_t j = 0; j < M; ++j) {
                const double g = s.eigenfunctions(j, static_cast<Eigen::Index>(l - 1));
                g1 += std::abs(g) / static_cast<double>(M);
                ginf = std::max(ginf, std::abs(g));
                if (j + 1 < M) g_tv += std::abs(s.eigenfunctions(j + 1, static_cast<Eigen::Index>(l - 1)) - g);
            }
            EXPECT_LE(g1, 1.0 + 1e-12);
            EXPECT_LE(std::abs(s.lambda(l)) * g_tv, g1 * tv * (1.0 + 1e-12)) << th << ' ' << l;
            EXPECT_LE(std::abs(s.lambda(l)) * ginf, vmax * (1.0 + 1e-12)) << th << ' ' << l;
        }
    }
}

TEST_F(Local, MercerEndpoints)
{
    const auto s = spectrum(1.0, 128, 128);
    EXPECT_LT(mercer_residual(s, 128), 1e-12);
    const auto r = mercer_check(s, 127);
    EXPECT_TRUE(r.pass);
}

TEST_F(Local, FourierBoundsHoldAtQuarterAndOne)
{
    for (double th : {0.25, 1.0}) {
        const auto r = fourier_eig_bounds(spectrum(th), *W, **cache);
        EXPECT_TRUE(r.pass) << th << ' ' << r.notes;
    }
}

TEST_F(Local, EigenfunctionInterpolation)
{
    const auto s = spectrum(1.0, 200, 2);
    EXPECT_DOUBLE_EQ(s.eigenfunction(1, 0.5 / 200.0), s.eigenfunctions(0, 0));
    EXPECT_DOUBLE_EQ(s.eigenfunction(1, 0.0), s.eigenfunctions(0, 0));
    EXPECT_DOUBLE_EQ(s.eigenfunction(1, 1.0), s.eigenfunctions(199, 0));
    const double mid = 0.5 * (s.eigenfunctions(10, 1) + s.eigenfunctions(11, 1));
    EXPECT_NEAR(s.eigenfunction(2, 11.0 / 200.0), mid, 1e-14);
}

TEST_F(Local, PullbackNormalization)
{
    const auto s = spectrum(1.0, 400, 3);
    const auto t1 = character_table(1);
    const auto g = pullback(s, t1, 20000, 1, 0);
    EXPECT_NEAR(scalar_product(g.values, g.values).real(), 1.0, 0.01);
    const auto g2 = pullback(s, t1, 20000, 2, 0);
    EXPECT_LT(std::abs(scalar_product(g.values, g2.values)), 0.01);
}

TEST_F(Local, GramNearIdentitySmallN)
{
    std::vector<ComplexSequence> fam;
    for (std::int64_t h = 1; h <= 3; ++h) {
        const auto s = nystrom_spectrum(*W, cfg(), 1.0, h, 400, 2);
        const auto t = character_table(h);
        for (std::size_t chi = 0; chi < t.size(); ++chi)
            for (std::size_t l = 1; l <= 2; ++l) fam.push_back(pullback(s, t, 5000, l, chi).values);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = 0; j < fam.size(); ++j) dev = std::max(dev, std::abs(scalar_product(fam[i], fam[j]) - (i == j ? 1.0 : 0.0)));
    EXPECT_LT(dev, 0.05);
}

TEST_F(Local, Bessel)
{
    const auto s = spectrum(1.0, 400, 2);
    const auto t = character_table(3);
    std::vector<ComplexSequence> fam;
    for (std::size_t chi = 0; chi < t.size(); ++chi)
        for (std::size_t l = 1; l <= 2; ++l) fam.push_back(pullback(nystrom_spectrum(*W, cfg(), 1.0, 3, 400, 2), t, 3000, l, chi).values);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) EXPECT_TRUE(bessel_bound(random_complex(3000, seed), fam).pass);
    const auto tight = bessel_bound(fam[0], fam);
    EXPECT_TRUE(tight.pass);
    EXPECT_GT(tight.lhs / tight.rhs, 0.9);
    const auto g = pullback(s, character_table(1), 3000, 1, 0).values;
    const auto phi = random_complex(3000, 3);
    const auto single = bessel_bound(phi, {g});
    const double cs = std::norm(scalar_product(phi, g)) / scalar_product(g, g).real();
    EXPECT_NEAR(single.lhs, cs, 1e-12 * std::max(1.0, cs));
    EXPECT_TRUE(single.pass);
}

TEST(CharacterSum, ExactForH2To12)
{
    Xorshift64Star rng(7);
    for (std::int64_t h = 2; h <= 12; ++h) {
        const auto phi = random_complex(60, static_cast<std::uint64_t>(h));
        std::vector<double> G(60);
        for (auto& g : G) g = 2 * rng.uniform() - 1;
        const auto r = character_sum_check(phi, G, character_table(h));
        EXPECT_TRUE(r.pass) << h << ' ' << r.residual;
        EXPECT_LT(r.residual, 1e-9);
    }
}

TEST_F(Local, SpectralIdentity)
{
    const auto phi = random_complex(60, 1);
    const auto si = spectral_identity(phi, *W, cfg(), 30.0, 4.0, 10, 200);
    for (const auto& r : si.reports) EXPECT_TRUE(r.pass) << r.check_id << ' ' << r.residual;
    EXPECT_NEAR(si.lhs, si.rhs_exact, 0.01 * std::abs(si.lhs));
    EXPECT_NEAR(si.rhs_expansion, si.rhs_exact, 0.01 * std::abs(si.rhs_exact));
    const auto zero = spectral_identity(ComplexSequence(60), *W, cfg(), 30.0, 2.0, 5, 100);
    EXPECT_EQ(zero.lhs, 0.0);
    EXPECT_EQ(zero.rhs_exact, 0.0);
    EXPECT_EQ(zero.rhs_operator, 0.0);
    EXPECT_EQ(zero.rhs_expansion, 0.0);
}

TEST_F(Local, LowerboundScan)
{
    const auto signs = generate_sequence({SequenceKind::RandomSigns, 2000, 1, {}});
    const auto scan = lowerbound_scan({{"signs", signs}}, {2000.0}, **cache);
    ASSERT_EQ(scan.rows.size(), 1u);
    EXPECT_GT(scan.rows[0].ratio, 0.0);
    const auto fam = lowerbound_family(200, 1);
    const auto full = lowerbound_scan(fam, {100, 400, 4000}, **cache);
    for (const auto& r : full.rows) EXPECT_GT(r.ratio, 0.0) << r.label;
    EXPECT_THROW(lowerbound_scan({{"zero", ComplexSequence(10)}}, {10.0}, **cache), PreconditionError);
}
