#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace arnoldqc::io {

/// Fixed "%.10e" rendering shared by every data file, so identical inputs
/// give byte-identical output.
inline std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", x);
    return buf;
}

/// x rounded to the precision printed by format_number.
inline double rounded(double x)
{
    if (!std::isfinite(x))
        return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

inline std::string csv_escape(const std::string& cell)
{
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

/// Writes a header row up front; every later row must have the same width.
class CsvWriter
{
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), width_(header.size())
    {
        write(header);
    }

    CsvWriter& cell(const std::string& s)
    {
        pending_.push_back(s);
        return *this;
    }
    CsvWriter& cell(double x) { return cell(format_number(x)); }
    CsvWriter& cell(int x) { return cell(std::to_string(x)); }
    CsvWriter& cell(std::size_t x) { return cell(std::to_string(x)); }

    void end_row()
    {
        if (pending_.size() != width_)
            throw std::logic_error("CsvWriter: row has " + std::to_string(pending_.size()) + " cells, header has "
                                   + std::to_string(width_));
        write(pending_);
        pending_.clear();
    }

private:
    void write(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? "," : "") << csv_escape(cells[i]);
        os_ << '\n';
    }

    std::ostream& os_;
    std::size_t width_;
    std::vector<std::string> pending_;
};

} // namespace arnoldqc::io
