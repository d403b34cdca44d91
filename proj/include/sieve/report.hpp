#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace sieve {

// One verified identity or inequality.
// For two-sided identities residual = |lhs - rhs|. One-sided checks
// (lhs <= rhs) use residual = max(0, lhs - rhs) and say so in notes.
struct CheckReport {
    std::string check_id;
    std::map<std::string, std::string> params;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
};

CheckReport make_equality(std::string id, double lhs, double rhs, double tol, std::string notes = {});
CheckReport make_inequality(std::string id, double lhs, double rhs, std::string notes = {});

// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);
std::string format_param(double x);
std::string format_param(long long x);

std::string to_json(const CheckReport& r, int indent = 2);
std::string to_json(const std::vector<CheckReport>& rs, int indent = 2);

// Minimal CSV writer: header first, LF line endings, dot decimals.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

}  // namespace sieve
