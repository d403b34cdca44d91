#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sieve/arith.hpp"
#include "sieve/kernel.hpp"
#include "sieve/lsq.hpp"
#include "sieve/report.hpp"
#include "sieve/transform.hpp"

namespace sieve {

// N' = N + ceil(sqrt N)
std::int64_t extended_length(std::int64_t N);

// Function on Z/h x [0,1], sampled at the midpoints y_j = (j + 1/2)/M
// (0-based j). Row b holds the residue class b mod h.
struct GridFunction {
    std::int64_t h = 1;
    std::int64_t M = 0;
    Eigen::MatrixXcd values;  // h x M

    GridFunction() = default;
    GridFunction(std::int64_t h, std::int64_t M);

    double node(std::int64_t j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(M); }
};

// (1/h) sum_b (1/M) sum_j F conj(G)
cplx inner(const GridFunction& F, const GridFunction& G);

// Gamma_{N,h}(phi)(b, y) = phi_{s(b) + h floor(N' y / h)}, s(b) in [1, h].
// When M is a multiple of N' the windows are resolved exactly.
GridFunction gamma_embed(const ComplexSequence& phi, std::int64_t h, std::int64_t M);
// Gamma*(F)(n) = (N/h) int over the n-th window of F(n mod h, y) dy, with
// F read as constant on each grid cell.
ComplexSequence gamma_adjoint(const GridFunction& F, std::int64_t N);
// (UF)(b, y) = (1/h) sum_c c_h(b - c) F(c, y)
GridFunction project_pure(const GridFunction& F);

// Base_{h,chi}(b) = tau_h(chi, b)/sqrt(phi(h)), orthonormal on Z/h.
std::vector<cplx> base_vector(const CharacterTable& table, std::size_t chi);

struct Spectrum {
    double tau_over_h = 1.0;
    std::int64_t M = 0;
    // All M eigenvalues, by decreasing |lambda|.
    std::vector<double> eigenvalues;
    // First L eigenfunctions as columns, scaled so (1/M) sum_j G(y_j)^2 = 1.
    Eigen::MatrixXd eigenfunctions;
    // V(y_i - y_j)
    Eigen::MatrixXd kernel_samples;

    std::size_t count() const { return static_cast<std::size_t>(eigenfunctions.cols()); }
    double lambda(std::size_t ell) const { return eigenvalues.at(ell - 1); }
    // G_ell(y), ell >= 1, linear between nodes and constant beyond the end nodes.
    double eigenfunction(std::size_t ell, double y) const;
    // Trace of the discretized operator (sum of the diagonal).
    double trace() const;
};

// V(y) = W*(tau y / h) on [-1, 1] sampled at the grid differences k/M.
std::vector<double> difference_kernel_samples(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, std::int64_t M);

// Midpoint Nystrom discretization of G -> int_0^1 G(y') V(y - y') dy'.
Spectrum nystrom_spectrum(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, std::int64_t M, std::int64_t L);
Spectrum nystrom_spectrum(const WeightKernel& kernel, const TransformConfig& cfg, double tau, std::int64_t h, std::int64_t M, std::int64_t L);

// Applies the discretized operator row by row.
GridFunction apply_operator(const Spectrum& spec, const GridFunction& F);

// 2 int_0^1 W*(tau y/h)^2 (1 - y) dy by composite Gauss-Legendre, or
// int_0^1 W*(tau y/h)^2 dy when `triangular` is false. The stretch
// tau y/h < 1e-3 is left out (its weight is below 1e-5).
double kernel_square_integral(const WeightKernel& kernel, const TransformConfig& cfg, double tau_over_h, bool triangular = true);

// max over grid pairs of |V(y_i - y_j) - sum_{ell<=L} lambda G(y_i) G(y_j)|
double mercer_residual(const Spectrum& spec, std::size_t L);
CheckReport mercer_check(const Spectrum& spec, std::size_t L, double slack = 5e-4);

struct HatExtrema {
    double min = 0.0;
    double argmin = 0.0;
    double max = 0.0;  // the plateau
};
// Extrema of the Fourier transform of W* (scan of |u| <= 64 plus refinement).
HatExtrema w_hat_star_extrema(const WeightKernel& kernel, const ArithCache& cache);

struct GapConstants {
    double c = 0.0;
    double c4 = 0.0;
    double U2 = 0.0;
};
// min Vhat - tol <= lambda <= max Vhat + tol with Vhat(u) = (h/tau) W*^(uh/tau).
// The notes say whether [-min Vhat, max Vhat] holds as well and, when gap
// constants are given, whether lambda_1 <= max Vhat - c exp(-c4 U2).
CheckReport fourier_eig_bounds(const Spectrum& spec, const WeightKernel& kernel, const ArithCache& cache, double tol = 1e-6,
                               std::optional<GapConstants> gap = {});

struct PullbackVector {
    std::int64_t h = 1;
    std::size_t ell = 1;
    std::size_t chi_index = 0;
    std::int64_t N = 0;
    double tau = 1.0;
    ComplexSequence values;  // tau_h(chi, n)/sqrt(phi(h)) G_ell(n/N)
};

PullbackVector pullback(const Spectrum& spec, const CharacterTable& table, std::int64_t N, std::size_t ell, std::size_t chi_index);

// sum_i |[phi, g_i]|^2 / sum_j |[g_i, g_j]| <= [phi, phi]_N
CheckReport bessel_bound(const ComplexSequence& phi, const std::vector<ComplexSequence>& family);

// sum_chi |sum_n phi_n G_n tau_h(chi, n)|^2 / phi(h) against
// sum_{a mod* h} |sum_n phi_n G_n e(na/h)|^2, G_n a real weight per n.
CheckReport character_sum_check(const ComplexSequence& phi, const std::vector<double>& G, const CharacterTable& table, double tol = 1e-9);

struct SpectralIdentity {
    double lhs = 0.0;            // smoothed form / Q
    double rhs_exact = 0.0;      // I0 |phi|^2 - h-sum through W* directly
    double rhs_operator = 0.0;   // I0 |phi|^2 - N sum_h (tau/h) [Pure phi | V Pure phi]
    double rhs_expansion = 0.0;  // I0 |phi|^2 - eigen-expansion with L terms per h
    double I0 = 0.0;
    std::vector<CheckReport> reports;
};

// tau = N/Q. Each h <= H needs h <= N' - N.
SpectralIdentity spectral_identity(const ComplexSequence& phi, const WeightKernel& kernel, const TransformConfig& cfg, double Q, double H,
                                   std::int64_t L, std::int64_t M);

struct LowerboundRow {
    std::string label;
    std::int64_t N = 0;
    double Q = 0.0;
    double N_over_Q = 0.0;
    double ratio = 0.0;  // raw form / (Q^2 |phi|^2)
};

struct LowerboundFit {
    std::string label;
    double exponent = 0.0;  // c in ratio ~ A exp(-c N/Q), least squares
    double log_A = 0.0;
    bool positive = true;
};

struct LowerboundScan {
    std::vector<LowerboundRow> rows;
    std::vector<LowerboundFit> fits;
};

LowerboundScan lowerbound_scan(const std::vector<std::pair<std::string, ComplexSequence>>& family, const std::vector<double>& Q_grid,
                               const ArithCache& cache);

}  // namespace sieve
