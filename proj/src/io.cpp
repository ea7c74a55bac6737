#include "relsub/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relsub/errors.hpp"

namespace relsub {

namespace {

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    while (used < s.size() && (s[used] == ' ' || s[used] == '\r')) ++used;
    return used == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Dataset ingest_csv_stream(std::istream& in, double time_scale) {
  if (!(time_scale > 0.0)) throw ValidationError("time scale must be positive");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw EmptyFile("csv file is empty");
  ++line_no;
  if (trim(line) != "t,censored,t_trunc")
    throw MalformedRow(line_no, "expected header t,censored,t_trunc");

  std::vector<double> t, trunc;
  std::vector<std::uint8_t> cens;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    std::stringstream ss(row);
    std::string f1, f2, f3, extra;
    if (!std::getline(ss, f1, ',') || !std::getline(ss, f2, ',') || !std::getline(ss, f3, ','))
      throw MalformedRow(line_no, "expected three comma-separated fields");
    if (std::getline(ss, extra, ','))
      throw MalformedRow(line_no, "too many fields");

    double tv = 0.0, cv = 0.0, lv = 0.0;
    if (!parse_double(trim(f1), tv)) throw MalformedRow(line_no, "bad time value");
    if (!parse_double(trim(f2), cv)) throw MalformedRow(line_no, "bad censored flag");
    if (!parse_double(trim(f3), lv)) throw MalformedRow(line_no, "bad truncation value");
    if (cv != 0.0 && cv != 1.0) throw MalformedRow(line_no, "censored flag must be 0 or 1");
    tv *= time_scale;
    lv *= time_scale;
    if (!(lv >= 0.0)) throw MalformedRow(line_no, "truncation time must be nonnegative");
    if (!(tv >= lv)) throw MalformedRow(line_no, "time is smaller than the truncation time");
    if (cv == 0.0 && tv == 0.0)
      throw MalformedRow(line_no, "uncensored zero failure time is degenerate");
    t.push_back(tv);
    cens.push_back(cv == 1.0 ? 1 : 0);
    trunc.push_back(lv);
  }
  if (t.empty()) throw EmptyFile("csv file has no data rows");
  return Dataset::from_columns(std::move(t), std::move(cens), std::move(trunc));
}

Dataset ingest_csv(const std::string& path, double time_scale) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return ingest_csv_stream(in, time_scale);
}

void write_csv_stream(const Dataset& data, std::ostream& out) {
  out << "t,censored,t_trunc\n";
  for (std::size_t i = 0; i < data.n(); ++i)
    out << format_double(data.time(i)) << ',' << (data.censored(i) ? 1 : 0) << ','
        << format_double(data.trunc(i)) << '\n';
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  write_csv_stream(data, out);
}

}  // namespace relsub
