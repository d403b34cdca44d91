#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sieve {

struct CliConfig {
    std::string subcommand;
    int m = 5;
    std::optional<double> Q;
    std::optional<std::int64_t> N;
    std::optional<double> H;
    std::optional<std::int64_t> C;
    std::optional<std::int64_t> E;
    std::optional<double> U;
    std::int64_t M = 400;
    std::int64_t L = 40;
    // grid: points on [lo, hi]; defaults depend on the subcommand
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<std::int64_t> points;
    double tau_over_h = 1.0;
    double tol = 1e-6;
    std::string which = "star";
    std::string suite;
    std::optional<double> budget_seconds;
    std::uint64_t seed = 1;
    std::string output;  // empty: standard output
    std::string format = "csv";
};

// "600s", "10m", "600" -> seconds
double parse_budget(const std::string& text);

// argv-style entry point (args[0] is the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sieve
