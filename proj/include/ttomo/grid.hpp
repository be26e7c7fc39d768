#ifndef TTOMO_GRID_HPP
#define TTOMO_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace ttomo {

// Tensor grid on the rectangle (-R,R) x (a,b).
// Node (i,j) sits at x_i = -R + i*hx, z_j = a + j*hz with 0 <= i < nx, 0 <= j < nz.
// Interior nodes are 1..nx-2 x 1..nz-2; everything else is boundary.
struct Grid2D {
  double R = 1.0;
  double a = 1.0;
  double b = 3.0;
  int nx = 0;
  int nz = 0;
  double hx = 0.0;
  double hz = 0.0;

  Grid2D() = default;
  Grid2D(double R_, double a_, double b_, int nx_, int nz_);

  double x(int i) const { return -R + i * hx; }
  double z(int j) const { return a + j * hz; }
  int node(int i, int j) const { return i * nz + j; }
  int node_count() const { return nx * nz; }
  bool is_boundary(int i, int j) const {
    return i == 0 || i == nx - 1 || j == 0 || j == nz - 1;
  }

  bool operator==(const Grid2D& o) const {
    return R == o.R && a == o.a && b == o.b && nx == o.nx && nz == o.nz;
  }
};

// Scalar field sampled at every grid node. Storage order is x-outer:
// values[i*nz + j]. Immutable by convention once filled.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid2D& g, double fill = 0.0)
      : grid_(g), values_(static_cast<size_t>(g.node_count()), fill) {}

  const Grid2D& grid() const { return grid_; }
  double& at(int i, int j) { return values_[grid_.node(i, j)]; }
  double at(int i, int j) const { return values_[grid_.node(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

// N values per node, component-minor: values[(i*nz+j)*N + n]. This matches
// the line-up indexing of the least-squares system, so the stacked unknown
// vector and the field share one layout.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const Grid2D& g, int ncomp)
      : grid_(g), ncomp_(ncomp),
        values_(static_cast<size_t>(g.node_count()) * ncomp, 0.0) {}

  const Grid2D& grid() const { return grid_; }
  int components() const { return ncomp_; }
  double& at(int i, int j, int n) { return values_[static_cast<size_t>(grid_.node(i, j)) * ncomp_ + n]; }
  double at(int i, int j, int n) const { return values_[static_cast<size_t>(grid_.node(i, j)) * ncomp_ + n]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  Grid2D grid_;
  int ncomp_ = 0;
  std::vector<double> values_;
};

// Forward differences per the discrete scheme. The last column (dx) / row
// (dz) holds the backward value so the output is defined on the whole grid;
// discrete functionals never read those extrapolated entries.
ScalarField dx_forward(const ScalarField& f);
ScalarField dz_forward(const ScalarField& f);

// Central differences (one-sided at the edges), used by the postprocessing.
ScalarField dx_central(const ScalarField& f);
ScalarField dz_central(const ScalarField& f);

struct DiscreteNorms {
  double l2h = 0.0;
  double h1h = 0.0;
};

// Quadrature-weighted sums with uniform node weight hx*hz. The H1 seminorm
// part sums forward differences over i < nx-1, j < nz-1 only.
DiscreteNorms discrete_norms(const ScalarField& f);

// CSV with header "x,z,value", z outer; binary format: magic "TTF1",
// int32 nx, nz, then doubles R, a, b and the nx*nz values (z outer),
// all little-endian.
void write_csv(const ScalarField& f, const std::string& path);
void write_binary(const ScalarField& f, const std::string& path);
ScalarField read_binary(const std::string& path);

}  // namespace ttomo

#endif
