#include "sfcmfg/csv.hpp"

#include "sfcmfg/types.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace sfcmfg {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // normalize -0
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
    if (!out_) throw IoError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::sep() {
    if (in_row_) out_ << ',';
    ++in_row_;
}

CsvWriter& CsvWriter::field(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

CsvWriter& CsvWriter::field(double v) {
    sep();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::field(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
    sep();
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        throw std::logic_error("CSV row width mismatch in " + path_);
    out_ << '\n';
    in_row_ = 0;
}

}  // namespace sfcmfg
