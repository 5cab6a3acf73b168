#pragma once

#include <iosfwd>
#include <string>

#include <diffnet/core.hpp>

namespace diffnet {

/*
 * CSV with a header row of variable names followed by one row per sample.
 * Fields are comma separated decimal floats; empty or non-numeric fields
 * are rejected.
 */
RawDataset<double> parse_csv(std::istream& in, const std::string& source = "<stream>");
RawDataset<double> read_csv(const std::string& path);

/// Round-trip exact: values are written with 17 significant digits.
void write_csv(std::ostream& out, const RawDataset<double>& data);

std::string read_text_file(const std::string& path);

} // namespace diffnet
