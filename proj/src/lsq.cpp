#include "sieve/lsq.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "sieve/errors.hpp"
#include "sieve/parallel.hpp"

namespace sieve {

ComplexSequence::ComplexSequence(std::int64_t N)
{
    if (N < 0) throw PreconditionError("ComplexSequence: N must be >= 0");
    values_.assign(static_cast<std::size_t>(N), cplx{0.0, 0.0});
}

ComplexSequence::ComplexSequence(std::vector<cplx> values) : values_(std::move(values)) {}

cplx ComplexSequence::operator()(std::int64_t n) const
{
    if (n < 1 || n > N()) return {0.0, 0.0};
    return values_[static_cast<std::size_t>(n - 1)];
}

cplx& ComplexSequence::at(std::int64_t n)
{
    if (n < 1 || n > N()) throw PreconditionError("ComplexSequence::at: index " + std::to_string(n) + " outside [1, N]");
    return values_[static_cast<std::size_t>(n - 1)];
}

double ComplexSequence::norm2() const
{
    double s = 0.0;
    for (const auto& x : values_) s += std::norm(x);
    return s;
}

bool ComplexSequence::is_zero() const
{
    for (const auto& x : values_)
        if (x != cplx{0.0, 0.0}) return false;
    return true;
}

cplx scalar_product(const ComplexSequence& phi, const ComplexSequence& psi)
{
    if (phi.N() != psi.N()) throw PreconditionError("scalar_product: lengths differ");
    if (phi.N() == 0) return {0.0, 0.0};
    cplx s{0.0, 0.0};
    for (std::int64_t n = 1; n <= phi.N(); ++n) s += phi(n) * std::conj(psi(n));
    return s / static_cast<double>(phi.N());
}

void SieveParams::validate() const
{
    if (!(Q >= 1.0)) throw PreconditionError("SieveParams: Q must be >= 1");
    if (!(H >= 0.5)) throw PreconditionError("SieveParams: H must be >= 1/2");
    if (C < 1 || E < 1) throw PreconditionError("SieveParams: C and E must be >= 1");
    if (static_cast<double>(E) > std::min(Q, 2.0 * Q / static_cast<double>(C)))
        throw PreconditionError("SieveParams: need E <= min(Q, 2Q/C)");
    if (U && !(*U > 0.0)) throw PreconditionError("SieveParams: U must be positive");
}

cplx exp_sum(const ComplexSequence& phi, double alpha)
{
    const double a = alpha - std::floor(alpha);
    cplx s{0.0, 0.0};
    for (std::int64_t n = 1; n <= phi.N(); ++n) s += phi(n) * e(static_cast<double>(n) * a);
    return s;
}

cplx exp_sum_farey(const ComplexSequence& phi, std::int64_t a, std::int64_t q)
{
    cplx s{0.0, 0.0};
    for (std::int64_t n = 1; n <= phi.N(); ++n) s += phi(n) * e_frac(n * (a % q), q);
    return s;
}

namespace {

std::vector<cplx> twiddles(std::int64_t q)
{
    std::vector<cplx> tw(static_cast<std::size_t>(q));
    for (std::int64_t k = 0; k < q; ++k) tw[k] = e_frac(k, q);
    return tw;
}

std::vector<cplx> fold(const ComplexSequence& phi, std::int64_t q)
{
    std::vector<cplx> f(static_cast<std::size_t>(q), cplx{0.0, 0.0});
    for (std::int64_t n = 1; n <= phi.N(); ++n) f[n % q] += phi(n);
    return f;
}

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

double mass_direct(const ComplexSequence& phi, std::int64_t q)
{
    const auto tw = twiddles(q);
    double s = 0.0;
    for (std::int64_t a = 1; a <= q; ++a) {
        if (gcd(a, q) != 1) continue;
        cplx S{0.0, 0.0};
        std::int64_t idx = 0;
        const std::int64_t step = a % q;
        for (std::int64_t n = 1; n <= phi.N(); ++n) {
            idx += step;
            if (idx >= q) idx -= q;
            S += phi(n) * tw[idx];
        }
        s += std::norm(S);
    }
    return s;
}

double mass_folded(const ComplexSequence& phi, std::int64_t q)
{
    const auto tw = twiddles(q);
    const auto f = fold(phi, q);
    double s = 0.0;
    for (std::int64_t a = 1; a <= q; ++a) {
        if (gcd(a, q) != 1) continue;
        cplx S{0.0, 0.0};
        std::int64_t idx = 0;
        for (std::int64_t r = 0; r < q; ++r) {
            S += f[r] * tw[idx];
            idx += a;
            if (idx >= q) idx -= q;
        }
        s += std::norm(S);
    }
    return s;
}

double mass_dft(const ComplexSequence& phi, std::int64_t q)
{
    const auto f = fold(phi, q);
    std::vector<cplx> out(static_cast<std::size_t>(q));
    std::vector<cplx> in = f;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(q), reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    double s = 0.0;
    for (std::int64_t a = 1; a <= q; ++a)
        if (gcd(a, q) == 1) s += std::norm(out[a % q]);
    return s;
}

// c_q(v) for 0 <= v < N through the value at gcd(q, v).
std::vector<double> ramanujan_row(const ArithCache& cache, std::int64_t q, std::int64_t N)
{
    std::vector<double> row(static_cast<std::size_t>(std::max<std::int64_t>(N, 1)));
    std::vector<std::pair<std::int64_t, double>> memo;
    for (std::int64_t v = 0; v < N; ++v) {
        const std::int64_t g = v == 0 ? q : gcd(q, v);
        double val = 0.0;
        bool found = false;
        for (const auto& [k, x] : memo)
            if (k == g) {
                val = x;
                found = true;
                break;
            }
        if (!found) {
            val = ramanujan_sum_fast(cache, q, g);
            memo.emplace_back(g, val);
        }
        row[v] = val;
    }
    return row;
}

double mass_ramanujan(const std::vector<cplx>& R, std::int64_t q, const ArithCache& cache)
{
    if (q > cache.limit()) throw SizeError("farey_mass: cache limit below q");
    const auto N = static_cast<std::int64_t>(R.size());
    if (N == 0) return 0.0;
    const auto row = ramanujan_row(cache, q, N);
    double s = R[0].real() * row[0];
    for (std::int64_t v = 1; v < N; ++v) s += 2.0 * R[v].real() * row[v];
    return s;
}

double mass(const ComplexSequence& phi, const std::vector<cplx>* R, std::int64_t q, const FormOptions& opt)
{
    if (q < 1) throw PreconditionError("farey_mass: q must be >= 1");
    switch (opt.path) {
    case FareyPath::Direct:
        return mass_direct(phi, q);
    case FareyPath::Folded:
        return mass_folded(phi, q);
    case FareyPath::Dft:
        return mass_dft(phi, q);
    case FareyPath::Ramanujan:
        if (!opt.cache) throw PreconditionError("farey_mass: the Ramanujan path needs a cache");
        if (R) return mass_ramanujan(*R, q, *opt.cache);
        return mass_ramanujan(autocorrelation(phi), q, *opt.cache);
    }
    return 0.0;
}

template <class Weight>
double q_sum(const ComplexSequence& phi, double Q, const FormOptions& opt, Weight weight)
{
    if (!(Q >= 1.0)) throw PreconditionError("Q must be >= 1");
    if (phi.is_zero()) return 0.0;
    const auto q0 = static_cast<std::int64_t>(std::floor(Q)) + 1;
    const auto q1 = static_cast<std::int64_t>(std::floor(2.0 * Q));
    if (q1 < q0) return 0.0;
    std::vector<cplx> R;
    if (opt.path == FareyPath::Ramanujan) R = autocorrelation(phi);
    std::vector<double> part(static_cast<std::size_t>(q1 - q0 + 1), 0.0);
    parallel_for(part.size(), [&](std::size_t i) {
        const std::int64_t q = q0 + static_cast<std::int64_t>(i);
        const double w = weight(q);
        if (w != 0.0) part[i] = w * mass(phi, R.empty() ? nullptr : &R, q, opt);
    });
    double s = 0.0;
    for (double x : part) s += x;
    return s;
}

}  // namespace

std::vector<cplx> autocorrelation(const ComplexSequence& phi)
{
    const std::int64_t N = phi.N();
    std::vector<cplx> R(static_cast<std::size_t>(N), cplx{0.0, 0.0});
    for (std::int64_t v = 0; v < N; ++v)
        for (std::int64_t n = 1; n + v <= N; ++n) R[v] += phi(n + v) * std::conj(phi(n));
    return R;
}

double farey_mass(const ComplexSequence& phi, std::int64_t q, const FormOptions& opt) { return mass(phi, nullptr, q, opt); }

double raw_form(const ComplexSequence& phi, double Q, const FormOptions& opt)
{
    return q_sum(phi, Q, opt, [](std::int64_t) { return 1.0; });
}

double smoothed_form(const ComplexSequence& phi, const WeightKernel& kernel, double Q, const FormOptions& opt)
{
    return q_sum(phi, Q, opt, [&](std::int64_t q) { return kernel(q / Q) / static_cast<double>(q); });
}

double delta_symbol(const ArithCache& cache, const WeightKernel& kernel, double Q, std::int64_t v)
{
    if (!(Q >= 1.0)) throw PreconditionError("delta_symbol: Q must be >= 1");
    const auto top = static_cast<std::int64_t>(std::floor(2.0 * Q));
    if (top > cache.limit()) throw SizeError("delta_symbol: cache limit below 2Q");
    auto c_sum = [&](std::int64_t d) {
        double s = 0.0;
        const auto c0 = static_cast<std::int64_t>(std::floor(Q / static_cast<double>(d))) + 1;
        const auto c1 = static_cast<std::int64_t>(std::floor(2.0 * Q / static_cast<double>(d)));
        for (std::int64_t c = c0; c <= c1; ++c) {
            const int mu = cache.mu(c);
            if (mu != 0) s += mu * kernel(static_cast<double>(c * d) / Q) / static_cast<double>(c);
        }
        return s;
    };
    double s = 0.0;
    if (v == 0) {
        for (std::int64_t d = 1; d <= top; ++d) s += c_sum(d);
        return s;
    }
    for (std::int64_t d : cache.divisors(v < 0 ? -v : v)) {
        if (d > top) break;
        s += c_sum(d);
    }
    return s;
}

double delta_bilinear(const ComplexSequence& phi, const ArithCache& cache, const WeightKernel& kernel, double Q)
{
    const auto R = autocorrelation(phi);
    if (R.empty()) return 0.0;
    double s = R[0].real() * delta_symbol(cache, kernel, Q, 0);
    for (std::size_t v = 1; v < R.size(); ++v) s += 2.0 * R[v].real() * delta_symbol(cache, kernel, Q, static_cast<std::int64_t>(v));
    return s;
}

DeltaPieces delta_decomposition(const ArithCache& cache, const WeightKernel& kernel, const SieveParams& params, std::int64_t v)
{
    params.validate();
    const double Q = params.Q;
    const auto top = static_cast<std::int64_t>(std::floor(2.0 * Q));
    if (top > cache.limit()) throw SizeError("delta_decomposition: cache limit below 2Q");
    const std::int64_t av = v < 0 ? -v : v;
    DeltaPieces out;

    if (v == 0) {
        for (std::int64_t c = 1; c <= std::min(params.C, top); ++c) {
            const int mu = cache.mu(c);
            if (mu == 0) continue;
            for (std::int64_t d = 1; c * d <= top; ++d) out.L0 += mu * kernel(static_cast<double>(c * d) / Q) / static_cast<double>(c);
        }
    }

    // sum_{c in range, f} mu(c) W(cef/Q)/(cef)
    auto cf_sum = [&](std::int64_t e, bool small_c) {
        double s = 0.0;
        for (std::int64_t c = small_c ? 1 : params.C + 1; c * e <= top; ++c) {
            if (small_c && c > params.C) break;
            const int mu = cache.mu(c);
            if (mu == 0) continue;
            for (std::int64_t f = 1; c * e * f <= top; ++f) {
                const auto n = c * e * f;
                s += mu * kernel(static_cast<double>(n) / Q) / static_cast<double>(n);
            }
        }
        return s;
    };
    for (std::int64_t e = 1; e <= std::min(params.E, top); ++e) out.U -= ramanujan_sum(e, v) * cf_sum(e, true);
    for (std::int64_t e = params.E + 1; e <= top; ++e) out.Usharp += ramanujan_sum(e, v) * cf_sum(e, false);

    if (v != 0) {
        for (std::int64_t c = 1; c <= params.C; ++c) {
            const int mu = cache.mu(c);
            if (mu == 0) continue;
            const double x = static_cast<double>(c * av);
            const auto g0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(x / (2.0 * Q))));
            const auto g1 = static_cast<std::int64_t>(std::floor(x / Q));
            for (std::int64_t g = g0; g <= g1; ++g) {
                const double w = mu * kernel(x / (static_cast<double>(g) * Q)) / static_cast<double>(g * c);
                if (w == 0.0) continue;
                for (std::int64_t h = 1; h <= g; ++h) {
                    if (g % h != 0) continue;
                    const double term = w * ramanujan_sum(h, v);
                    if (static_cast<double>(h) <= params.H)
                        out.L += term;
                    else
                        out.Lsharp += term;
                }
            }
        }
    }
    return out;
}

PreciseEvaluator::PreciseEvaluator(const WeightKernel& kernel, const TransformConfig& cfg, std::int64_t N, double Q, double H,
                                   std::optional<double> U)
    : N_(N), Q_(Q), H_(H), U_(U)
{
    cfg.validate();
    if (!(H >= 0.5)) throw PreconditionError("precise_rhs: H must be >= 1/2");
    if (!(Q >= 1.0)) throw PreconditionError("precise_rhs: Q must be >= 1");
    if (U && !(*U > 0.0)) throw PreconditionError("precise_rhs: U must be positive");
    I0_ = sieve::I0(kernel, *cfg.cache, Q);
    const auto hmax = static_cast<std::int64_t>(std::floor(H));
    const auto nv = static_cast<std::size_t>(std::max<std::int64_t>(N, 1));
    wstar_.assign(static_cast<std::size_t>(hmax), std::vector<double>(nv, 0.0));
    ramanujan_.assign(static_cast<std::size_t>(hmax), std::vector<double>(nv, 0.0));
    const std::size_t cells = static_cast<std::size_t>(hmax) * nv;
    parallel_for(cells, [&](std::size_t i) {
        const auto h = static_cast<std::int64_t>(i / nv) + 1;
        const auto v = static_cast<std::int64_t>(i % nv);
        ramanujan_[h - 1][v] = ramanujan_sum(h, v);
        if (v > 0) wstar_[h - 1][v] = w_star(kernel, cfg, static_cast<double>(v) / (static_cast<double>(h) * Q));
    });
    if (!U) return;

    // W*^ is smooth between half-integers; 20-point Gauss-Legendre per piece.
    using GL = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> nodes, weights;
    for (double lo = 0.0; lo < *U; lo += 0.5) {
        const double hi = std::min(*U, lo + 0.5);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t j = 0; j < GL::abscissa().size(); ++j) {
            const double x = GL::abscissa()[j], w = GL::weights()[j];
            for (double sgn : {1.0, -1.0}) {
                if (x == 0.0 && sgn < 0) continue;
                const double u = mid + sgn * half * x;
                nodes.push_back(u);
                weights.push_back(half * w * w_hat_star(kernel, *cfg.cache, u));
            }
        }
    }
    wtrunc_.assign(static_cast<std::size_t>(hmax), std::vector<double>(nv, 0.0));
    parallel_for(cells, [&](std::size_t i) {
        const auto h = static_cast<std::int64_t>(i / nv) + 1;
        const auto v = static_cast<std::int64_t>(i % nv);
        const double z = static_cast<double>(v) / (static_cast<double>(h) * Q);
        double s = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * std::cos(2.0 * std::numbers::pi * z * nodes[k]);
        wtrunc_[h - 1][v] = 2.0 * s;
    });
}

double PreciseEvaluator::hsum(const std::vector<cplx>& R, double H, bool truncated) const
{
    const auto hmax = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(H)), static_cast<std::int64_t>(wstar_.size()));
    const auto& table = truncated ? wtrunc_ : wstar_;
    double total = 0.0;
    for (std::int64_t h = 1; h <= hmax; ++h) {
        const auto& w = table[h - 1];
        const auto& c = ramanujan_[h - 1];
        double s = R[0].real() * c[0] * w[0];
        for (std::size_t v = 1; v < R.size(); ++v) s += 2.0 * R[v].real() * c[v] * w[v];
        total += s / (static_cast<double>(h) * Q_);
    }
    return total;
}

std::vector<double> PreciseEvaluator::hsum_kernel(double H) const
{
    if (H > H_) throw PreconditionError("PreciseEvaluator: H above the prepared range");
    const auto hmax = static_cast<std::int64_t>(std::floor(H));
    std::vector<double> k(static_cast<std::size_t>(N_), 0.0);
    for (std::int64_t h = 1; h <= hmax; ++h)
        for (std::size_t v = 0; v < k.size(); ++v) k[v] += ramanujan_[h - 1][v] * wstar_[h - 1][v] / (static_cast<double>(h) * Q_);
    return k;
}

PreciseResult PreciseEvaluator::evaluate(const ComplexSequence& phi) const { return evaluate(phi, H_); }

PreciseResult PreciseEvaluator::evaluate(const ComplexSequence& phi, double H) const
{
    if (phi.N() != N_) throw PreconditionError("PreciseEvaluator: sequence length differs from the prepared N");
    if (H > H_) throw PreconditionError("PreciseEvaluator: H above the prepared range");
    PreciseResult r;
    r.I0 = I0_;
    if (phi.N() == 0) return r;
    const auto R = autocorrelation(phi);
    const double full = hsum(R, H, false);
    r.hsum = full;
    if (U_) {
        r.hsum = hsum(R, H, true);
        r.tail_estimate = std::abs(full - r.hsum);
    }
    r.rhs = I0_ * phi.norm2() - r.hsum;
    return r;
}

PreciseResult precise_rhs(const ComplexSequence& phi, const WeightKernel& kernel, const TransformConfig& cfg, double Q, double H,
                          std::optional<double> U)
{
    return PreciseEvaluator(kernel, cfg, phi.N(), Q, H, U).evaluate(phi);
}

double vic_remainder(const ComplexSequence& phi, double H, double Q)
{
    if (!(Q > 0.0)) throw PreconditionError("vic_remainder: Q must be positive");
    const std::int64_t N = phi.N();
    const auto hmax = static_cast<std::int64_t>(std::floor(H));
    double total = 0.0;
    for (std::int64_t h = 1; h <= hmax; ++h) {
        const double len = 2.0 * static_cast<double>(h) * Q;
        const auto span = static_cast<std::int64_t>(std::ceil(len)) - 1;  // n runs over u < n <= u + span
        double best = 0.0;
        std::vector<cplx> cls(static_cast<std::size_t>(h));
        for (std::int64_t u = 0; u < N; ++u) {
            std::fill(cls.begin(), cls.end(), cplx{0.0, 0.0});
            double cur = 0.0;
            for (std::int64_t n = u + 1; n <= std::min(N, u + span); ++n) {
                cplx& s = cls[n % h];
                cur -= std::norm(s);
                s += phi(n);
                cur += std::norm(s);
                best = std::max(best, cur);
            }
        }
        total += (static_cast<double>(N) + static_cast<double>(h) * Q) / (static_cast<double>(h) * Q * Q) * best;
    }
    return total;
}

CheckReport prime_support_check(const ComplexSequence& phi, std::int64_t Q0, const ArithCache& cache)
{
    const std::int64_t N = phi.N();
    if (N < 100) throw PreconditionError("prime_support_check: N must be >= 100");
    if (Q0 < 2 || static_cast<double>(Q0) > std::sqrt(static_cast<double>(N)))
        throw PreconditionError("prime_support_check: need 2 <= Q0 <= sqrt(N)");
    if (cache.limit() < N) throw SizeError("prime_support_check: cache limit below N");
    const double root = std::sqrt(static_cast<double>(N));
    for (std::int64_t n = 2; n <= N; ++n)
        if (phi(n) != cplx{0.0, 0.0} && static_cast<double>(cache.least_prime_factor(n)) < root)
            throw PreconditionError("prime_support_check: phi is supported on " + std::to_string(n) + ", which has a prime factor below sqrt(N)");
    double lhs = 0.0;
    for (std::int64_t q = 1; q <= Q0; ++q) lhs += farey_mass(phi, q, {FareyPath::Dft, nullptr});
    const double rhs = 7.0 * static_cast<double>(N) * std::log(static_cast<double>(Q0)) / std::log(static_cast<double>(N)) * phi.norm2();
    CheckReport r = make_inequality("primes.restricted_support", lhs, rhs);
    r.params["N"] = format_param(static_cast<long long>(N));
    r.params["Q0"] = format_param(static_cast<long long>(Q0));
    return r;
}

}  // namespace sieve
