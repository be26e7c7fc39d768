#ifndef TTOMO_FORWARD_HPP
#define TTOMO_FORWARD_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ttomo/eikonal.hpp"
#include "ttomo/grid.hpp"

namespace ttomo {

// Connected piece of the support of p, with the amplitude the reconstruction
// is judged against. sign > 0: report the max inside; sign < 0: the min.
struct Inclusion {
  std::string name;
  double amplitude = 0.0;
  int sign = 1;
  std::function<bool(double, double)> contains;
};

class Phantom {
 public:
  static Phantom make_test(int test_id, const Grid2D& g);
  // custom phantom over the same grid (used by oracles and manufactured runs)
  static Phantom make_custom(const Grid2D& g, std::function<double(double, double)> p,
                             Medium::Kind medium, std::vector<Inclusion> inclusions,
                             double cut_z, const std::string& name);

  const std::string& name() const { return name_; }
  double p(double x, double z) const { return p_(x, z); }
  const ScalarField& p_field() const { return field_; }
  const std::vector<Inclusion>& inclusions() const { return inclusions_; }
  Medium::Kind medium_kind() const { return medium_; }
  double cut_z() const { return cut_z_; }

  // bilinear interpolation of the sampled field; zero outside Omega
  double interp(double x, double z) const;

 private:
  std::string name_;
  std::function<double(double, double)> p_;
  ScalarField field_;
  std::vector<Inclusion> inclusions_;
  Medium::Kind medium_ = Medium::Kind::Constant;
  double cut_z_ = 2.0;
};

struct BoundaryNode {
  int i = 0, j = 0;
  double x = 0.0, z = 0.0;
  int nx_dir = 0, nz_dir = 0;  // outward normal (corners use the x side)
};

// u(x, x_alpha) sampled at every boundary node for every source, plus the
// per-source inflow/outflow partition. Values on the inflow part are zero
// (p is supported inside Omega, so those rays never meet it).
struct BoundaryData {
  Grid2D omega;
  SourceLine line;
  std::vector<BoundaryNode> nodes;
  Eigen::MatrixXd values;                    // nodes x n_alpha
  std::vector<std::vector<uint8_t>> outflow;  // [node][k], 1 on the + side
  double delta = 0.0;
  uint64_t seed = 0;

  static BoundaryData empty(const Grid2D& omega, const SourceLine& line);
};

// Integrates p along traced geodesics from every outflow boundary node to the
// source of s; fills column s.k of data. Pure w.r.t. distinct sources.
void simulate_source(const Phantom& phantom, const SourceSolve& s, const FmmOptions& opt,
                     BoundaryData& data, const std::string& geodesic_dir = "");

// u over the whole grid for one source (oracle/diagnostic use)
ScalarField simulate_field(const Phantom& phantom, const SourceSolve& s, const FmmOptions& opt);

// multiplicative uniform noise u -> u(1 + delta r), r ~ U[-1,1], deterministic
BoundaryData add_noise(const BoundaryData& data, double delta, uint64_t seed);

void write_boundary_csv(const BoundaryData& data, const std::string& csv_path,
                        const std::string& meta_path);

}  // namespace ttomo

#endif
