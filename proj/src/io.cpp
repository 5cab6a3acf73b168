#include <diffnet/io.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace diffnet {

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

RawDataset<double> parse_csv(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, source + ": empty file");

    RawDataset<double> data;
    for (const auto& f : split_fields(line)) {
        std::string name = trim(f);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
            name = name.substr(1, name.size() - 2);
        }
        data.variable_names.push_back(name);
    }
    const std::size_t p = data.variable_names.size();

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line) == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != p) {
            throw Error(ErrorCode::ParseError,
                source + ":" + std::to_string(line_no) + ": expected " + std::to_string(p)
                + " fields, got " + std::to_string(fields.size()));
        }
        for (const auto& raw : fields) {
            const std::string f = trim(raw);
            double x = 0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
                throw Error(ErrorCode::ParseError,
                    source + ":" + std::to_string(line_no) + ": not a number: '" + f + "'");
            }
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::NonFinite,
                    source + ":" + std::to_string(line_no) + ": non-finite value");
            }
            values.push_back(x);
        }
        ++rows;
    }

    data.values.resize(static_cast<Index>(rows), static_cast<Index>(p));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < p; ++k) {
            data.values(static_cast<Index>(i), static_cast<Index>(k)) = values[i * p + k];
        }
    }
    return data;
}

RawDataset<double> read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_csv(in, path);
}

void write_csv(std::ostream& out, const RawDataset<double>& data)
{
    for (std::size_t k = 0; k < data.variable_names.size(); ++k) {
        out << (k ? "," : "") << data.variable_names[k];
    }
    out << '\n';
    char buf[32];
    for (Index i = 0; i < data.values.rows(); ++i) {
        for (Index k = 0; k < data.values.cols(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", data.values(i, k));
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace diffnet
