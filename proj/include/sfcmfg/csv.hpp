#ifndef SFCMFG_CSV_HPP
#define SFCMFG_CSV_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace sfcmfg {

// Formats a double with the shortest representation that round-trips
// (std::to_chars). Locale-independent and byte-stable across runs.
std::string format_double(double v);

// Minimal CSV writer: comma separated, UTF-8, '.' decimal point, one header
// row, "\n" line endings. Output is byte-deterministic for identical input.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& field(const std::string& s);
    CsvWriter& field(double v);
    CsvWriter& field(std::int64_t v);
    CsvWriter& field(std::uint64_t v);
    CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
    void end_row();

    const std::string& path() const { return path_; }

  private:
    void sep();
    std::ofstream out_;
    std::string path_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

}  // namespace sfcmfg

#endif
