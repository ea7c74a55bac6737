#pragma once

#include <iosfwd>
#include <string>

#include "relsub/data.hpp"

namespace relsub {

// Reads a dataset from CSV with header "t,censored,t_trunc". Times are
// multiplied by time_scale on ingestion (case-study workflows pass 1e-6).
// Rows violating t >= t_trunc >= 0, censored not in {0,1}, or an uncensored
// zero failure time are rejected with their line number.
Dataset ingest_csv(const std::string& path, double time_scale = 1.0);
Dataset ingest_csv_stream(std::istream& in, double time_scale = 1.0);

void write_csv(const Dataset& data, const std::string& path);
void write_csv_stream(const Dataset& data, std::ostream& out);

// Fixed numeric formatting shared by all CSV writers so outputs are
// byte-stable across runs.
std::string format_double(double x);

}  // namespace relsub
