#ifndef TTOMO_IO_UTIL_HPP
#define TTOMO_IO_UTIL_HPP

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace ttomo {

void ensure_dir(const std::string& path);

// shortest round-trip decimal for doubles, for deterministic text output
std::string fmt_g17(double v);

// flat key=value text files (config echo, metadata sidecars)
void write_kv(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_kv(const std::string& path);

// 8-bit portable graymap, linear ramp between the given bounds
void write_pgm(const std::string& path, int nx, int nz,
               const std::vector<double>& values_x_outer, double lo, double hi);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  void row(const std::vector<std::string>& cells);
  std::FILE* handle() { return fp_; }

 private:
  std::FILE* fp_ = nullptr;
};

}  // namespace ttomo

#endif
