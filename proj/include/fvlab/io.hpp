#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fvlab {

// Fixed 17-significant-digit decimal rendering; all artifact files use it so
// reruns are byte-identical.
std::string fmt17(double v);

// CSV writer: a '#' provenance line (seed, config hash), a header row, then
// data rows. Creates parent directories.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, uint64_t seed, uint64_t config_hash,
              const std::vector<std::string>& columns);
    ~CsvWriter();

    void row(const std::vector<std::string>& cells);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fvlab
