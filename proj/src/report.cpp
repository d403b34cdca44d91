#include "sieve/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>

#include "sieve/errors.hpp"

namespace sieve {

CheckReport make_equality(std::string id, double lhs, double rhs, double tol, std::string notes)
{
    CheckReport r;
    r.check_id = std::move(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = std::abs(lhs - rhs);
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    r.notes = std::move(notes);
    return r;
}

CheckReport make_inequality(std::string id, double lhs, double rhs, std::string notes)
{
    CheckReport r;
    r.check_id = std::move(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = std::max(0.0, lhs - rhs);
    r.tolerance = 0.0;
    r.pass = lhs <= rhs;
    r.notes = notes.empty() ? "one-sided: lhs <= rhs, residual = max(0, lhs - rhs)" : std::move(notes);
    return r;
}

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_param(double x) { return format_double(x); }
std::string format_param(long long x) { return std::to_string(x); }

namespace {

nlohmann::ordered_json report_json(const CheckReport& r)
{
    nlohmann::ordered_json j;
    j["check_id"] = r.check_id;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    auto num = [](double x) -> nlohmann::ordered_json {
        if (std::isfinite(x)) return x;
        return format_double(x);
    };
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["residual"] = num(r.residual);
    j["tolerance"] = num(r.tolerance);
    j["pass"] = r.pass;
    j["notes"] = r.notes;
    return j;
}

}  // namespace

std::string to_json(const CheckReport& r, int indent) { return report_json(r).dump(indent); }

std::string to_json(const std::vector<CheckReport>& rs, int indent)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back(report_json(r));
    return arr.dump(indent);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }
CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

CsvWriter& CsvWriter::cell(const std::string& s)
{
    if (in_row_ == columns_) throw PreconditionError("CsvWriter: too many cells in row");
    out_ << (in_row_ ? "," : "") << s;
    ++in_row_;
    return *this;
}

void CsvWriter::end_row()
{
    if (in_row_ != columns_) throw PreconditionError("CsvWriter: row has wrong number of cells");
    out_ << '\n';
    in_row_ = 0;
}

}  // namespace sieve
