#include "ttomo/io_util.hpp"

#include <sys/stat.h>
#include <sys/types.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ttomo {

void ensure_dir(const std::string& path) {
  if (path.empty()) return;
  std::string cur;
  for (size_t k = 0; k < path.size(); ++k) {
    cur += path[k];
    if (path[k] == '/' || k + 1 == path.size()) {
      if (cur == "/" || cur.empty()) continue;
      std::string d = cur;
      if (d.back() == '/') d.pop_back();
      if (d.empty()) continue;
      if (mkdir(d.c_str(), 0755) != 0 && errno != EEXIST)
        throw std::runtime_error("ensure_dir: cannot create " + d);
    }
  }
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_kv(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_kv: cannot open " + path);
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

std::map<std::string, std::string> read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_kv: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (!k.empty()) kv[k] = v;
  }
  return kv;
}

void write_pgm(const std::string& path, int nx, int nz,
               const std::vector<double>& values_x_outer, double lo, double hi) {
  if (static_cast<size_t>(nx) * nz != values_x_outer.size())
    throw std::invalid_argument("write_pgm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << nx << " " << nz << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  // image rows top-to-bottom = decreasing z
  for (int j = nz - 1; j >= 0; --j)
    for (int i = 0; i < nx; ++i) {
      double t = (values_x_outer[static_cast<size_t>(i) * nz + j] - lo) / span;
      int px = static_cast<int>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
      out.put(static_cast<char>(px));
    }
}

CsvWriter::CsvWriter(const std::string& path) {
  fp_ = std::fopen(path.c_str(), "w");
  if (!fp_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

CsvWriter::~CsvWriter() {
  if (fp_) std::fclose(fp_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t k = 0; k < cells.size(); ++k)
    std::fprintf(fp_, "%s%s", cells[k].c_str(), k + 1 == cells.size() ? "\n" : ",");
}

}  // namespace ttomo
