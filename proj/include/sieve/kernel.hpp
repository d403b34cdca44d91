#pragma once

#include <complex>
#include <vector>

#include "sieve/arith.hpp"

namespace sieve {

// Piecewise polynomial on [breaks.front(), breaks.back()], zero outside.
// Piece i lives on [breaks[i], breaks[i+1]] and is stored in the local
// variable x = t - breaks[i], coefficients in ascending degree.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> pieces, bool even = false);

    double operator()(double t) const;
    double lo() const { return breaks_.empty() ? 0.0 : breaks_.front(); }
    double hi() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
    bool even() const { return even_; }
    int degree() const;
    std::size_t piece_count() const { return pieces_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& piece(std::size_t i) const { return pieces_.at(i); }
    // Index of the piece containing t (t inside the support).
    std::size_t locate(double t) const;
    double eval_piece(std::size_t i, double t) const;

    PiecewisePoly derivative() const;
    // Vanishes at lo(); zero outside the support like every PiecewisePoly.
    PiecewisePoly antiderivative() const;
    double integral() const;
    double integral(double a, double b) const;
    PiecewisePoly scaled(double c) const;
    // One-sided jump of the k-th derivative at interior breakpoint i.
    double derivative_jump(std::size_t i, int k) const;

private:
    std::vector<double> breaks_;
    std::vector<std::vector<double>> pieces_;
    bool even_ = false;
};

double poly_eval(const std::vector<double>& c, double x);

// 1^{*m}: m-fold convolution power of the indicator of [-1,1], by recursion.
PiecewisePoly conv_power(int m);
// Closed-form sum for the same function, used as a cross-check.
double renyi_conv_power(int m, double t);

struct WeightKernel {
    int m = 5;
    PiecewisePoly pm;   // bump supported on [1/2, 1]
    PiecewisePoly dpm;  // its derivative
    double J = 0.0;          // integral of W(u)/u over (0, inf)
    double integral0 = 0.0;  // integral of W over (0, inf)

    // W(m;t) = pm(1/|t|)/|t|
    double operator()(double t) const;
    double derivative(double t) const;
    WeightKernel scaled(double c) const;
};

WeightKernel build_weight(int m);

// Fourier transform of pm, convention  f^(u) = int f(t) e(-ut) dt.
cplx fourier_pm(int m, double u);

// sum_q phi(q) W(q/Q) / (q Q) over q in (Q, 2Q].
double I0(const WeightKernel& kernel, const ArithCache& cache, double Q);

// int_0^inf W(t) t^{s-1} dt
cplx mellin_W(const WeightKernel& kernel, cplx s);

}  // namespace sieve
