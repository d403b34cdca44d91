#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sieve/kernel.hpp"
#include "sieve/lsq.hpp"
#include "sieve/transform.hpp"
#include "sieve/report.hpp"

namespace sieve {

// xorshift64*: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; out = x * 0x2545F4914F6CDD1D.
// A zero seed is replaced by 0x9E3779B97F4A7C15.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed);
    std::uint64_t next();
    // (out >> 11) * 2^-53, in [0, 1)
    double uniform();

private:
    std::uint64_t x_;
};

enum class SequenceKind { RandomSigns, RandomComplex, Spike, Progression, PrimeIndicator, EigenPullback };

SequenceKind parse_sequence_kind(const std::string& name);
std::string sequence_kind_name(SequenceKind kind);

// extra keys: spike {k}; progression {a, q}; eigen_pullback {h, ell, chi, tau, M, m}.
struct SequenceSpec {
    SequenceKind kind = SequenceKind::RandomSigns;
    std::int64_t N = 1;
    std::uint64_t seed = 1;
    std::map<std::string, double> extra;
};

// random_signs: +-1 from the top bit of each draw. random_complex: real and
// imaginary parts 2u - 1, one draw each. prime_indicator: 1 on n >= 2 whose
// least prime factor is at least sqrt(N).
ComplexSequence generate_sequence(const SequenceSpec& spec);

// Residual ladders for the asymptotic statements. For each grid value the
// per-seed relative residuals are kept, together with their mean and the
// operator norm of the residual Toeplitz form (the worst case over all
// sequences of length N).
struct Ladder {
    std::vector<double> grid;
    std::vector<std::vector<double>> per_seed;  // [seed][grid index]
    std::vector<double> mean;
    std::vector<double> opnorm;
    int per_seed_increases = 0;  // steps where a single seed's residual did not drop

    bool mean_decreasing() const;
    bool opnorm_decreasing() const;
};

// |S(Q)/(Q I0 |phi|^2) - 1| along Q = 2^k N, k in exponents, random_complex seeds.
Ladder main_term_ladder(const WeightKernel& kernel, const ArithCache& cache, std::int64_t N, const std::vector<int>& exponents, int seeds,
                        std::uint64_t first_seed = 1);
// |S/Q - precise rhs(H)| / |phi|^2 along the H grid at fixed N, Q.
Ladder precise_ladder(const WeightKernel& kernel, const TransformConfig& cfg, std::int64_t N, double Q, const std::vector<double>& H_grid,
                      int seeds, std::uint64_t first_seed = 1);

// Family used by the lower-bound scan: random signs, random complex, a
// progression, a spike and eigenfunction pullbacks.
std::vector<std::pair<std::string, ComplexSequence>> lowerbound_family(std::int64_t N, std::uint64_t seed);

struct VerifyConfig {
    int m = 5;
    std::int64_t M = 400;
    std::uint64_t seed = 1;
    std::optional<double> budget_seconds;
};

std::vector<std::string> suite_names();

// Suites: transforms, delta, precise, spectrum, global, primes, or all.
// Throws PreconditionError for an unknown id and ResourceError once the
// budget is exhausted.
std::vector<CheckReport> run_suite(const std::string& suite_id, const VerifyConfig& cfg = {});

}  // namespace sieve
