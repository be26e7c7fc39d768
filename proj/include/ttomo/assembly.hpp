#ifndef TTOMO_ASSEMBLY_HPP
#define TTOMO_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <vector>

#include "ttomo/basis.hpp"
#include "ttomo/eikonal.hpp"
#include "ttomo/forward.hpp"
#include "ttomo/grid.hpp"

namespace ttomo {

// Per-node coefficient matrices of the truncated transport system
//   S dz(W) + A(x) W + B(x) dx(W) = 0
// with
//   a_mn = int [ -(r1+r3) Psi_n' - d/dalpha(r1+r3) Psi_n ] Psi_m dalpha
//   b_mn = int [    r2    Psi_n' + d/dalpha(r2)    Psi_n ] Psi_m dalpha
// where r1 = dzz(u0)/dz(u0), r2 = dx(u0)/dz(u0), r3 = dzx(u0) dx(u0)/dz(u0)^2.
// The Psi_n'-weighted ratios enter without the alpha-derivative; only the
// Psi_n weights carry it (term collection from the alpha-differentiated
// transport identity).
//
// S defaults to the data-grid quadrature variant so that the whole discrete
// operator uses one quadrature; the internal-rule S is available behind the
// flag for comparison.
struct FourierSystem {
  Grid2D omega;
  int N = 0;
  Eigen::MatrixXd S;                 // system S (N x N)
  std::vector<Eigen::MatrixXd> A, B;  // per node (x-outer ordering)
  // boundary data coefficients, aligned with BoundaryData node order
  std::vector<int> boundary_node_ids;  // grid node id per boundary row
  Eigen::MatrixXd F;                   // boundary rows x N

  const Eigen::MatrixXd& A_at(int i, int j) const { return A[omega.node(i, j)]; }
  const Eigen::MatrixXd& B_at(int i, int j) const { return B[omega.node(i, j)]; }
};

FourierSystem assemble_coefficients(const BackgroundField& bg, const Basis& basis,
                                    bool exact_S = false);

// F_n(x) = projection over alpha of f(x, x_alpha) dz(u0)(x, x_alpha)
void assemble_boundary(const BoundaryData& data, const BackgroundField& bg, const Basis& basis,
                       FourierSystem& sys);

void dump_probe_node(const FourierSystem& sys, int i, int j, const std::string& path);

}  // namespace ttomo

#endif
