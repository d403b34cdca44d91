#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace sieve {

using cplx = std::complex<double>;

// e(x) = exp(2 pi i x), with x reduced mod 1 first.
cplx e(double x);
// e(num/den) with the reduction done in integers.
cplx e_frac(std::int64_t num, std::int64_t den);

std::int64_t gcd(std::int64_t a, std::int64_t b);

// Sieved tables of phi, mu and omega up to `limit`. Immutable once built.
class ArithCache {
public:
    explicit ArithCache(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    std::int64_t phi(std::int64_t n) const;
    int mu(std::int64_t n) const;
    int omega(std::int64_t n) const;
    std::int64_t least_prime_factor(std::int64_t n) const;
    bool is_prime(std::int64_t n) const;

    // Divisors of n in increasing order.
    std::vector<std::int64_t> divisors(std::int64_t n) const;
    // Squarefree divisors only (the ones with mu != 0).
    std::vector<std::int64_t> squarefree_divisors(std::int64_t n) const;

    const std::vector<std::int32_t>& phi_table() const { return phi_; }

private:
    void check(std::int64_t n) const;

    std::int64_t limit_;
    std::vector<std::int32_t> phi_;
    std::vector<std::int32_t> lpf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::int8_t> omega_;
};

ArithCache build_arith_cache(std::int64_t limit);

// c_h(v) = sum over reduced a mod h of e(av/h), by the definition.
double ramanujan_sum(std::int64_t h, std::int64_t v);
// Same value through sum_{d | (h,v)} d mu(h/d). Needs cache.limit() >= h.
double ramanujan_sum_fast(const ArithCache& cache, std::int64_t h, std::int64_t v);

// sum_{d | n, d <= C} mu(d)/d
double phi_C_ratio(const ArithCache& cache, std::int64_t n, std::int64_t C);

// Dirichlet characters mod h as explicit value tables. Row 0 is principal.
class CharacterTable {
public:
    static constexpr std::int64_t kMaxModulus = 512;

    explicit CharacterTable(std::int64_t h);

    std::int64_t modulus() const { return h_; }
    std::size_t size() const { return values_.size(); }
    cplx value(std::size_t chi, std::int64_t a) const;
    const std::vector<cplx>& row(std::size_t chi) const { return values_.at(chi); }
    // Orders of the cyclic factors of (Z/h)* used to index the characters.
    const std::vector<std::int64_t>& factor_orders() const { return orders_; }

private:
    std::int64_t h_;
    std::vector<std::int64_t> orders_;
    std::vector<std::vector<cplx>> values_;
};

CharacterTable character_table(std::int64_t h);

// tau_h(chi, n) = sum_{b mod h} chi(b) e(bn/h)
cplx gauss_sum(const CharacterTable& table, std::size_t chi, std::int64_t n);

}  // namespace sieve
