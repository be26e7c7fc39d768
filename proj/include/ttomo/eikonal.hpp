#ifndef TTOMO_EIKONAL_HPP
#define TTOMO_EIKONAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "ttomo/grid.hpp"

namespace ttomo {

// Background squared refractive index c0 = n0^2. The analytic test media are
// defined by formulas on Omega; outside Omega the formula is continued by
// clamping (x into [-R,R], z from above into [a_clamp, b]), which keeps c0
// continuous, >= 1, nondecreasing in z, and equal to 1 below z = a. All test
// media reduce to 1 for z <= a, so sources on the z = 0 line sit in a unit
// background.
class Medium {
 public:
  enum class Kind { Constant, Test1, Test2, Test3, Test4 };

  Medium(Kind kind, double R, double a, double b)
      : kind_(kind), R_(R), a_(a), b_(b) {}

  double c0(double x, double z) const;
  Kind kind() const { return kind_; }
  // media satisfying the monotonicity hypothesis dz(c0) >= 0
  bool monotone_in_z() const { return true; }

 private:
  Kind kind_;
  double R_, a_, b_;
};

struct SourceLine {
  double alpha_bar = 3.0;
  int n_alpha = 209;
  std::vector<double> alphas;  // uniform on [-alpha_bar, alpha_bar]

  SourceLine() = default;
  SourceLine(double abar, int na);
  double spacing() const { return alphas[1] - alphas[0]; }
};

// Computational box for fast marching: contains Omega, the source line and a
// margin. Its lattice refines the Omega grid so Omega nodes coincide with box
// nodes: omega node (i,j) <-> box node (off_x + i*refine, off_z + j*refine).
struct Box {
  double x0 = 0.0, z0 = 0.0, h = 0.0;
  int nx = 0, nz = 0;
  int off_x = 0, off_z = 0, refine = 1;

  static Box around(const Grid2D& omega, double alpha_bar, double margin, int refine);

  int idx(int i, int j) const { return i * nz + j; }
  double x(int i) const { return x0 + i * h; }
  double z(int j) const { return z0 + j * h; }
  bool contains(double x, double z) const {
    return x >= x0 && x <= x0 + (nx - 1) * h && z >= z0 && z <= z0 + (nz - 1) * h;
  }
};

struct FmmOptions {
  int refine = 2;                  // box step = omega step / refine
  double margin = 0.5;             // box margin around Omega and L_sc
  double source_disc_radius = 0.45;  // exact-distance initialization radius
  int u0_smooth_passes = 0;        // 3x3 binomial passes on u0 before differencing
  double tracer_step_factor = 0.25;  // step = factor * min(hx,hz)
  int max_geodesic_steps = 100000;
  bool second_order = false;       // optional higher-order upwind updates
};

// First-arrival travel time for |grad u|^2 = c0 with point source (alpha, 0).
// First-order upwind fast marching; nodes within source_disc_radius of the
// source are initialized with the exact distance (c0 = 1 there).
std::vector<double> fast_march(const Medium& medium, const Box& box,
                               double alpha, const FmmOptions& opt);

// Travel-time field plus its gradient for one source; the unit of work the
// per-source pipeline passes around. Safe to compute for different sources
// concurrently (no shared mutable state).
struct SourceSolve {
  int k = 0;           // source index
  double alpha = 0.0;  // source x-coordinate
  Box box;
  std::vector<double> u0, gx, gz;  // on box nodes
};

SourceSolve solve_source(const Medium& medium, const Box& box, int k,
                         double alpha, const FmmOptions& opt);

// Gradient descent from (x,z) toward the source; returns vertices ordered
// source-first. Last segment is the exact source point once the path gets
// within one box cell.
std::vector<std::pair<double, double>> trace_geodesic(const SourceSolve& s,
                                                      double x, double z,
                                                      const FmmOptions& opt);

// Per-source fields on the Omega grid needed by the Fourier-system assembly
// and reconstruction. Layout: field[k][node] with node = i*nz + j.
struct BackgroundField {
  Grid2D omega;
  SourceLine line;
  std::vector<std::vector<double>> u0, du0x, du0z;
  std::vector<std::vector<double>> pa, qa, pb, qb;  // integrand weights, see assembly
  double min_dzu0 = 0.0;
  int min_dzu0_node = -1, min_dzu0_source = -1;
};

// Accumulates per-source derivative slices and finalizes the alpha-direction
// derivatives plus the Assumption-3.2 audit (dz u0 > 0 everywhere; violation
// is a hard error naming node and source).
class BackgroundBuilder {
 public:
  BackgroundBuilder(const Grid2D& omega, const SourceLine& line);
  void accumulate(const SourceSolve& s);
  BackgroundField finalize();

 private:
  BackgroundField bg_;
  std::vector<std::vector<double>> r13_, r2_;
  std::vector<bool> seen_;
};

// Analytic background for c0 == 1 (u0 = |x - x_alpha|); the independent
// reference for fast-marching oracles and manufactured-solution tests.
BackgroundField straight_ray_background(const Grid2D& omega, const SourceLine& line);

void write_geodesic_csv(const std::vector<std::pair<double, double>>& poly,
                        const std::string& path);

}  // namespace ttomo

#endif
