#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "sieve/arith.hpp"
#include "sieve/kernel.hpp"

namespace sieve {

struct TransformConfig {
    std::optional<std::int64_t> C;  // Moebius truncation; empty means infinity
    std::int64_t series_N = 0;      // starting truncation of the phi(n) series; 0 picks it from the bound
    double quad_tol = 1e-10;
    std::int64_t series_cap = std::int64_t{1} << 23;
    std::shared_ptr<const ArithCache> cache;

    void validate() const;
};

// W#(y) = sum_{k>=1} W(y/k)/k
double w_sharp(const WeightKernel& kernel, double y);
// Wb(z) = sum_{f>=1} W(zf)/f
double w_flat(const WeightKernel& kernel, double z);
// W~(z) = (1/|z|) int_0^inf {z/u} (u W'(u) + W(u)) du
double w_tilde(const WeightKernel& kernel, double z);

// W*_C(z) = sum_{c<=C} mu(c)/c W~(cz)
double w_star_C(const WeightKernel& kernel, const TransformConfig& cfg, double z);
// W**_C(z) = W*_C(z) - J sum_{c<=C} mu(c)/c
double w_star_star_C(const WeightKernel& kernel, const TransformConfig& cfg, double z);

struct SeriesValue {
    double value = 0.0;
    double error_bound = 0.0;
    std::int64_t terms = 0;
};

// Tail bound of the phi(n)/n cosine series after N terms.
double series_error_bound(int m, double z, std::int64_t N);
// Smallest N whose tail bound is below tol.
std::int64_t series_terms_for(int m, double z, double tol);

// W*(z) = -2 sum_n phi(n)/n cos(3 pi n z/2) sinc(pi n z/(2m))^m, z != 0.
SeriesValue w_star_series(const WeightKernel& kernel, const TransformConfig& cfg, double z);
// W* with W*(0) = 0; the series for z != 0.
double w_star(const WeightKernel& kernel, const TransformConfig& cfg, double z);

// Value of the Fourier transform of W* on |u| <= 1/2.
double hat_plateau(const WeightKernel& kernel);
double hat_plateau_C(const WeightKernel& kernel, const ArithCache& cache, std::int64_t C);

// Fourier transform of W*: plateau minus (1/|u|) sum_{|u|<=n<=2|u|} phi(n)/n W(n/|u|).
double w_hat_star(const WeightKernel& kernel, const ArithCache& cache, double u);
// Fourier transform of W*_C (equivalently of W**_C away from u = 0): phi(n)/n
// replaced by sum_{d|n, d<=C} mu(d)/d.
double w_hat_star_C(const WeightKernel& kernel, const ArithCache& cache, std::int64_t C, double u);

}  // namespace sieve
