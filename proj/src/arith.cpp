#include "sieve/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sieve/errors.hpp"

namespace sieve {

cplx e(double x)
{
    double r = x - std::floor(x);
    if (r > 0.5) r -= 1.0;
    const double t = 2.0 * std::numbers::pi * r;
    return {std::cos(t), std::sin(t)};
}

cplx e_frac(std::int64_t num, std::int64_t den)
{
    if (den <= 0) throw PreconditionError("e_frac: denominator must be positive");
    std::int64_t r = num % den;
    if (r < 0) r += den;
    if (r == 0) return {1.0, 0.0};
    if (2 * r == den) return {-1.0, 0.0};
    if (4 * r == den) return {0.0, 1.0};
    if (4 * r == 3 * den) return {0.0, -1.0};
    return e(static_cast<double>(r) / static_cast<double>(den));
}

std::int64_t gcd(std::int64_t a, std::int64_t b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

ArithCache::ArithCache(std::int64_t limit) : limit_(limit)
{
    if (limit < 1) throw PreconditionError("ArithCache: limit must be >= 1");
    if (limit > (std::int64_t{1} << 30)) throw SizeError("ArithCache: limit above 2^30");
    const auto n1 = static_cast<std::size_t>(limit) + 1;
    phi_.assign(n1, 0);
    lpf_.assign(n1, 0);
    mu_.assign(n1, 0);
    omega_.assign(n1, 0);
    std::vector<std::int32_t> primes;
    phi_[1] = 1;
    mu_[1] = 1;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (lpf_[i] == 0) {
            lpf_[i] = static_cast<std::int32_t>(i);
            phi_[i] = static_cast<std::int32_t>(i - 1);
            mu_[i] = -1;
            omega_[i] = 1;
            primes.push_back(static_cast<std::int32_t>(i));
        }
        for (std::int32_t p : primes) {
            const std::int64_t ip = i * p;
            if (p > lpf_[i] || ip > limit) break;
            lpf_[ip] = p;
            if (p == lpf_[i]) {
                phi_[ip] = phi_[i] * p;
                mu_[ip] = 0;
                omega_[ip] = omega_[i];
            } else {
                phi_[ip] = phi_[i] * (p - 1);
                mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
                omega_[ip] = static_cast<std::int8_t>(omega_[i] + 1);
            }
        }
    }
}

void ArithCache::check(std::int64_t n) const
{
    if (n < 1 || n > limit_)
        throw SizeError("ArithCache: index " + std::to_string(n) + " outside [1, " + std::to_string(limit_) + "]");
}

std::int64_t ArithCache::phi(std::int64_t n) const { check(n); return phi_[n]; }
int ArithCache::mu(std::int64_t n) const { check(n); return mu_[n]; }
int ArithCache::omega(std::int64_t n) const { check(n); return omega_[n]; }
std::int64_t ArithCache::least_prime_factor(std::int64_t n) const { check(n); return n == 1 ? 1 : lpf_[n]; }
bool ArithCache::is_prime(std::int64_t n) const { check(n); return n > 1 && lpf_[n] == n; }

std::vector<std::int64_t> ArithCache::divisors(std::int64_t n) const
{
    check(n);
    std::vector<std::int64_t> out{1};
    while (n > 1) {
        const std::int64_t p = lpf_[n];
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        const std::size_t base = out.size();
        std::int64_t pk = 1;
        for (int j = 1; j <= k; ++j) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> ArithCache::squarefree_divisors(std::int64_t n) const
{
    check(n);
    std::vector<std::int64_t> out{1};
    while (n > 1) {
        const std::int64_t p = lpf_[n];
        while (n % p == 0) n /= p;
        const std::size_t base = out.size();
        for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ArithCache build_arith_cache(std::int64_t limit) { return ArithCache(limit); }

double ramanujan_sum(std::int64_t h, std::int64_t v)
{
    if (h < 1) throw PreconditionError("ramanujan_sum: h must be >= 1");
    cplx s{0.0, 0.0};
    for (std::int64_t a = 1; a <= h; ++a)
        if (gcd(a, h) == 1) s += e_frac(a * (v % h), h);
    if (std::abs(s.imag()) > 1e-12 * std::max<double>(1.0, static_cast<double>(h) / 64.0))
        throw NumericError("ramanujan_sum: imaginary part did not cancel", std::abs(s.imag()));
    return s.real();
}

double ramanujan_sum_fast(const ArithCache& cache, std::int64_t h, std::int64_t v)
{
    const std::int64_t g = gcd(h, v == 0 ? h : v);
    double s = 0.0;
    for (std::int64_t d : cache.divisors(g)) s += static_cast<double>(d) * cache.mu(h / d);
    return s;
}

double phi_C_ratio(const ArithCache& cache, std::int64_t n, std::int64_t C)
{
    if (n < 1) throw PreconditionError("phi_C_ratio: n must be >= 1");
    double s = 0.0;
    for (std::int64_t d : cache.squarefree_divisors(n)) {
        if (d > C) break;
        s += cache.mu(d) / static_cast<double>(d);
    }
    return s;
}

namespace {

struct CyclicFactor {
    std::int64_t modulus;  // prime power p^k this factor lives on
    std::int64_t order;
    std::vector<std::int64_t> log;  // discrete log of a mod p^k, -1 if undefined
};

std::int64_t mult_order(std::int64_t g, std::int64_t q)
{
    std::int64_t x = g % q, k = 1;
    while (x != 1) {
        x = x * g % q;
        ++k;
    }
    return k;
}

std::vector<CyclicFactor> unit_group_factors(std::int64_t h)
{
    std::vector<CyclicFactor> out;
    std::int64_t n = h;
    for (std::int64_t p = 2; p * p <= n || n > 1; ++p) {
        if (p * p > n) p = n;
        if (n % p != 0) continue;
        std::int64_t q = 1;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            q *= p;
            ++k;
        }
        if (p == 2) {
            if (k == 1) continue;
            if (k == 2) {
                CyclicFactor f{4, 2, std::vector<std::int64_t>(4, -1)};
                f.log[1] = 0;
                f.log[3] = 1;
                out.push_back(f);
                continue;
            }
            // (Z/2^k)* = <-1> x <5>
            CyclicFactor sign{q, 2, std::vector<std::int64_t>(q, -1)};
            CyclicFactor five{q, q / 4, std::vector<std::int64_t>(q, -1)};
            std::int64_t x = 1;
            for (std::int64_t j = 0; j < q / 4; ++j) {
                sign.log[x] = 0;
                sign.log[q - x] = 1;
                five.log[x] = j;
                five.log[q - x] = j;
                x = x * 5 % q;
            }
            out.push_back(sign);
            out.push_back(five);
            continue;
        }
        const std::int64_t ord = q / p * (p - 1);
        std::int64_t g = 2;
        while (gcd(g, p) != 1 || mult_order(g, q) != ord) ++g;
        CyclicFactor f{q, ord, std::vector<std::int64_t>(q, -1)};
        std::int64_t x = 1;
        for (std::int64_t j = 0; j < ord; ++j) {
            f.log[x] = j;
            x = x * g % q;
        }
        out.push_back(f);
    }
    return out;
}

}  // namespace

CharacterTable::CharacterTable(std::int64_t h) : h_(h)
{
    if (h < 1) throw PreconditionError("character_table: h must be >= 1");
    if (h > kMaxModulus) throw SizeError("character_table: modulus " + std::to_string(h) + " above cap 512");
    const auto factors = unit_group_factors(h);
    std::size_t count = 1;
    for (const auto& f : factors) {
        orders_.push_back(f.order);
        count *= static_cast<std::size_t>(f.order);
    }
    values_.assign(count, std::vector<cplx>(static_cast<std::size_t>(h), cplx{0.0, 0.0}));
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<std::int64_t> j(factors.size());
        std::size_t rest = idx;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            j[i] = static_cast<std::int64_t>(rest % factors[i].order);
            rest /= factors[i].order;
        }
        for (std::int64_t a = 0; a < h; ++a) {
            if (gcd(a, h) != 1) continue;
            double frac = 0.0;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const std::int64_t lg = factors[i].log[a % factors[i].modulus];
                frac += static_cast<double>((j[i] * lg) % factors[i].order) / static_cast<double>(factors[i].order);
            }
            values_[idx][a] = e(frac);
        }
    }
}

cplx CharacterTable::value(std::size_t chi, std::int64_t a) const
{
    std::int64_t r = a % h_;
    if (r < 0) r += h_;
    return values_.at(chi)[static_cast<std::size_t>(r)];
}

CharacterTable character_table(std::int64_t h) { return CharacterTable(h); }

cplx gauss_sum(const CharacterTable& table, std::size_t chi, std::int64_t n)
{
    if (chi >= table.size()) throw PreconditionError("gauss_sum: character index out of range");
    const std::int64_t h = table.modulus();
    const auto& row = table.row(chi);
    cplx s{0.0, 0.0};
    for (std::int64_t b = 0; b < h; ++b)
        if (row[b] != cplx{0.0, 0.0}) s += row[b] * e_frac(b * (n % h), h);
    return s;
}

}  // namespace sieve
