#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "sieve/errors.hpp"

namespace sieve::quad {

// 8-point Gauss-Legendre on [a,b]; exact for polynomials of degree <= 15.
template <class F>
double gauss8(F&& f, double a, double b)
{
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

// Adaptive Gauss-Kronrod (15 point) on [a,b] with relative tolerance tol
// (clamped to 1e-13). Throws NumericError when the estimate stays far above it.
template <class F>
double adaptive(F&& f, double a, double b, double tol, double* err_out = nullptr)
{
    if (!(b > a)) return 0.0;
    const double rel = std::max(tol, 1e-13);
    double err = 0.0, L1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 18, rel, &err, &L1);
    if (err_out) *err_out = err;
    if (!std::isfinite(v) || err > 1e3 * rel * std::max(1.0, L1)) throw NumericError("adaptive quadrature did not converge", err);
    return v;
}

// Integrate over [a,b] split at the given interior points; each piece adaptive.
template <class F>
double adaptive_split(F&& f, double a, double b, std::vector<double> cuts, double tol)
{
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    const double piece_tol = tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]);
        const double hi = std::min(b, cuts[i + 1]);
        if (hi > lo) s += adaptive(f, lo, hi, piece_tol);
    }
    return s;
}

}  // namespace sieve::quad
