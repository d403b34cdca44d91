#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sieve/arith.hpp"
#include "sieve/kernel.hpp"
#include "sieve/report.hpp"
#include "sieve/transform.hpp"

namespace sieve {

// (phi_n)_{1<=n<=N}; phi_n = 0 outside that range.
class ComplexSequence {
public:
    ComplexSequence() = default;
    explicit ComplexSequence(std::int64_t N);
    explicit ComplexSequence(std::vector<cplx> values);

    std::int64_t N() const { return static_cast<std::int64_t>(values_.size()); }
    cplx operator()(std::int64_t n) const;
    cplx& at(std::int64_t n);
    const std::vector<cplx>& values() const { return values_; }
    // sum |phi_n|^2
    double norm2() const;
    bool is_zero() const;

private:
    std::vector<cplx> values_;
};

// [phi, psi]_N = (1/N) sum phi_n conj(psi_n)
cplx scalar_product(const ComplexSequence& phi, const ComplexSequence& psi);

struct SieveParams {
    double Q = 1.0;
    double H = 1.0;
    std::int64_t C = 1;
    std::int64_t E = 1;
    std::optional<double> U;  // empty means the full line

    // E <= min(Q, 2Q/C), C >= 1, E >= 1, H >= 1/2.
    void validate() const;
};

// S(phi, alpha) = sum phi_n e(n alpha)
cplx exp_sum(const ComplexSequence& phi, double alpha);
cplx exp_sum_farey(const ComplexSequence& phi, std::int64_t a, std::int64_t q);

// Ways to get sum_{a mod* q} |S(phi, a/q)|^2.
enum class FareyPath {
    Direct,     // each a separately, O(N) per fraction
    Folded,     // fold phi mod q, then O(q) per fraction
    Dft,        // fold phi mod q, one length-q FFT for all a
    Ramanujan,  // autocorrelation against c_q(v); needs a cache
};

struct FormOptions {
    FareyPath path = FareyPath::Dft;
    const ArithCache* cache = nullptr;
};

double farey_mass(const ComplexSequence& phi, std::int64_t q, const FormOptions& opt = {});

// sum_{Q<q<=2Q} sum_{a mod* q} |S(phi, a/q)|^2
double raw_form(const ComplexSequence& phi, double Q, const FormOptions& opt = {});
// sum_q W(q/Q)/q sum_{a mod* q} |S(phi, a/q)|^2. Divide by Q for the other
// common normalization.
double smoothed_form(const ComplexSequence& phi, const WeightKernel& kernel, double Q, const FormOptions& opt = {});

// R(v) = sum_n phi_{n+v} conj(phi_n) for 0 <= v < N.
std::vector<cplx> autocorrelation(const ComplexSequence& phi);

// Delta(v) = sum_{c,d: d|v} mu(c) W(cd/Q)/c
double delta_symbol(const ArithCache& cache, const WeightKernel& kernel, double Q, std::int64_t v);
// sum_{m,n} phi_m conj(phi_n) Delta(m-n)
double delta_bilinear(const ComplexSequence& phi, const ArithCache& cache, const WeightKernel& kernel, double Q);

struct DeltaPieces {
    double L0 = 0.0;      // diagonal, c <= C
    double U = 0.0;       // e <= E, c <= C, with sign flipped
    double Usharp = 0.0;  // e > E, c > C
    double L = 0.0;       // h <= H, c <= C
    double Lsharp = 0.0;  // h > H, c <= C
    double sum() const { return L0 + U + Usharp + L + Lsharp; }
};

DeltaPieces delta_decomposition(const ArithCache& cache, const WeightKernel& kernel, const SieveParams& params, std::int64_t v);

// Right-hand side of the smoothed equality:
//   I0 |phi|^2 - sum_{h<=H} 1/(hQ) sum_{a mod* h} int_{-U}^{U} W*^(u) |S(a/h + u/(hQ))|^2 du,
// to be compared with smoothed_form / Q.
struct PreciseResult {
    double rhs = 0.0;
    double hsum = 0.0;
    double I0 = 0.0;
    // U finite: measured gap between the truncated and full u-integrals.
    double tail_estimate = 0.0;
};

// Caches W*(v/(hQ)) and the truncated u-integrals for repeated use with
// sequences of the same length.
class PreciseEvaluator {
public:
    PreciseEvaluator(const WeightKernel& kernel, const TransformConfig& cfg, std::int64_t N, double Q, double H, std::optional<double> U = {});

    PreciseResult evaluate(const ComplexSequence& phi) const;
    PreciseResult evaluate(const ComplexSequence& phi, double H) const;
    double I0() const { return I0_; }
    // k(v) = sum_{h<=H} c_h(v) W*(v/(hQ))/(hQ), 0 <= v < N, so that the
    // h-sum is sum_{m,n} phi_m conj(phi_n) k(|m-n|).
    std::vector<double> hsum_kernel(double H) const;

private:
    double hsum(const std::vector<cplx>& R, double H, bool truncated) const;

    std::int64_t N_;
    double Q_;
    double H_;
    std::optional<double> U_;
    double I0_;
    std::vector<std::vector<double>> wstar_;   // [h-1][v] = W*(v/(hQ))
    std::vector<std::vector<double>> wtrunc_;  // [h-1][v] = 2 int_0^U W*^(u) cos(2 pi v u/(hQ)) du
    std::vector<std::vector<double>> ramanujan_;  // [h-1][v] = c_h(v)
};

PreciseResult precise_rhs(const ComplexSequence& phi, const WeightKernel& kernel, const TransformConfig& cfg, double Q, double H,
                          std::optional<double> U = {});

// sum_{h<=H} (N+hQ)/(hQ^2) max_{u<v<u+2hQ} sum_{c mod h} |sum_{u<n<=v, n=c mod h} phi_n|^2
double vic_remainder(const ComplexSequence& phi, double H, double Q);

// sum_{q<=Q0} sum_{a mod* q} |S|^2 <= 7 N log Q0 / log N |phi|^2 for phi
// supported on integers free of prime factors below sqrt(N).
CheckReport prime_support_check(const ComplexSequence& phi, std::int64_t Q0, const ArithCache& cache);

}  // namespace sieve
