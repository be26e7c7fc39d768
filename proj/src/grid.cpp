#include "ttomo/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ttomo {

Grid2D::Grid2D(double R_, double a_, double b_, int nx_, int nz_)
    : R(R_), a(a_), b(b_), nx(nx_), nz(nz_) {
  if (!(R > 0.0)) throw std::invalid_argument("Grid2D: R must be positive");
  if (!(0.0 < a && a < b)) throw std::invalid_argument("Grid2D: need 0 < a < b");
  if (nx < 3 || nz < 3) throw std::invalid_argument("Grid2D: need nx, nz >= 3");
  hx = 2.0 * R / (nx - 1);
  hz = (b - a) / (nz - 1);
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

ScalarField dx_forward(const ScalarField& f) {
  const Grid2D& g = f.grid();
  ScalarField out(g);
  for (int i = 0; i < g.nx - 1; ++i)
    for (int j = 0; j < g.nz; ++j)
      out.at(i, j) = (f.at(i + 1, j) - f.at(i, j)) / g.hx;
  for (int j = 0; j < g.nz; ++j)  // backward value at the last column
    out.at(g.nx - 1, j) = (f.at(g.nx - 1, j) - f.at(g.nx - 2, j)) / g.hx;
  return out;
}

ScalarField dz_forward(const ScalarField& f) {
  const Grid2D& g = f.grid();
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nz - 1; ++j)
      out.at(i, j) = (f.at(i, j + 1) - f.at(i, j)) / g.hz;
    out.at(i, g.nz - 1) = (f.at(i, g.nz - 1) - f.at(i, g.nz - 2)) / g.hz;
  }
  return out;
}

ScalarField dx_central(const ScalarField& f) {
  const Grid2D& g = f.grid();
  ScalarField out(g);
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 1; i < g.nx - 1; ++i)
      out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * g.hx);
    out.at(0, j) = (f.at(1, j) - f.at(0, j)) / g.hx;
    out.at(g.nx - 1, j) = (f.at(g.nx - 1, j) - f.at(g.nx - 2, j)) / g.hx;
  }
  return out;
}

ScalarField dz_central(const ScalarField& f) {
  const Grid2D& g = f.grid();
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.nz - 1; ++j)
      out.at(i, j) = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.hz);
    out.at(i, 0) = (f.at(i, 1) - f.at(i, 0)) / g.hz;
    out.at(i, g.nz - 1) = (f.at(i, g.nz - 1) - f.at(i, g.nz - 2)) / g.hz;
  }
  return out;
}

DiscreteNorms discrete_norms(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const double w = g.hx * g.hz;
  double l2 = 0.0;
  for (double v : f.values()) l2 += v * v;
  l2 *= w;
  double semi = 0.0;
  for (int i = 0; i < g.nx - 1; ++i)
    for (int j = 0; j < g.nz - 1; ++j) {
      const double dx = (f.at(i + 1, j) - f.at(i, j)) / g.hx;
      const double dz = (f.at(i, j + 1) - f.at(i, j)) / g.hz;
      semi += dx * dx + dz * dz;
    }
  semi *= w;
  DiscreteNorms n;
  n.l2h = std::sqrt(l2);
  n.h1h = std::sqrt(l2 + semi);
  return n;
}

void write_csv(const ScalarField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_csv: cannot open " + path);
  const Grid2D& g = f.grid();
  std::fprintf(fp, "x,z,value\n");
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i)
      std::fprintf(fp, "%.17g,%.17g,%.17g\n", g.x(i), g.z(j), f.at(i, j));
  std::fclose(fp);
}

void write_binary(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_binary: cannot open " + path);
  const Grid2D& g = f.grid();
  out.write("TTF1", 4);
  int32_t dims[2] = {g.nx, g.nz};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  double geom[3] = {g.R, g.a, g.b};
  out.write(reinterpret_cast<const char*>(geom), sizeof(geom));
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double v = f.at(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

ScalarField read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_binary: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, "TTF1", 4) != 0)
    throw std::runtime_error("read_binary: bad magic in " + path);
  int32_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  double geom[3];
  in.read(reinterpret_cast<char*>(geom), sizeof(geom));
  Grid2D g(geom[0], geom[1], geom[2], dims[0], dims[1]);
  ScalarField f(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      f.at(i, j) = v;
    }
  if (!in) throw std::runtime_error("read_binary: truncated file " + path);
  return f;
}

}  // namespace ttomo
