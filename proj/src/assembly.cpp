#include "ttomo/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "ttomo/io_util.hpp"

namespace ttomo {

FourierSystem assemble_coefficients(const BackgroundField& bg, const Basis& basis,
                                    bool exact_S) {
  const Grid2D& g = bg.omega;
  const int N = basis.N(), na = basis.n_alpha(), nn = g.node_count();
  if (bg.line.n_alpha != na)
    throw std::invalid_argument("assemble_coefficients: basis/source-line node count mismatch");
  if (std::abs(bg.line.alpha_bar - basis.alpha_bar()) > 1e-12)
    throw std::invalid_argument("assemble_coefficients: basis/source-line alpha_bar mismatch");

  FourierSystem sys;
  sys.omega = g;
  sys.N = N;
  sys.S = exact_S ? basis.S() : basis.S_quad();
  sys.A.resize(nn);
  sys.B.resize(nn);

  const Eigen::MatrixXd psi_tau = basis.psi() * basis.quad_weights().asDiagonal();  // N x na
  Eigen::MatrixXd X(N, na);
  Eigen::VectorXd pa(na), qa(na), pb(na), qb(na);
  for (int q = 0; q < nn; ++q) {
    for (int k = 0; k < na; ++k) {
      pa[k] = bg.pa[k][q];
      qa[k] = bg.qa[k][q];
      pb[k] = bg.pb[k][q];
      qb[k] = bg.qb[k][q];
    }
    X = basis.dpsi() * pa.asDiagonal() + basis.psi() * qa.asDiagonal();
    sys.A[q] = psi_tau * X.transpose();
    X = basis.dpsi() * pb.asDiagonal() + basis.psi() * qb.asDiagonal();
    sys.B[q] = psi_tau * X.transpose();
    if (!sys.A[q].allFinite() || !sys.B[q].allFinite())
      throw std::runtime_error("assemble_coefficients: non-finite coefficient at node (" +
                               std::to_string(q / g.nz) + "," + std::to_string(q % g.nz) + ")");
  }
  return sys;
}

void assemble_boundary(const BoundaryData& data, const BackgroundField& bg, const Basis& basis,
                       FourierSystem& sys) {
  const Grid2D& g = sys.omega;
  const int na = basis.n_alpha();
  if (data.values.cols() != na)
    throw std::invalid_argument("assemble_boundary: missing source samples (n_alpha mismatch)");
  const int nb = static_cast<int>(data.nodes.size());
  sys.boundary_node_ids.resize(nb);
  sys.F.resize(nb, basis.N());
  Eigen::VectorXd integrand(na);
  for (int r = 0; r < nb; ++r) {
    const BoundaryNode& n = data.nodes[r];
    const int q = g.node(n.i, n.j);
    sys.boundary_node_ids[r] = q;
    for (int k = 0; k < na; ++k) integrand[k] = data.values(r, k) * bg.du0z[k][q];
    sys.F.row(r) = basis.project(integrand).transpose();
  }
}

void dump_probe_node(const FourierSystem& sys, int i, int j, const std::string& path) {
  CsvWriter w(path);
  w.row({"matrix", "m", "n", "value"});
  const int q = sys.omega.node(i, j);
  for (int m = 0; m < sys.N; ++m)
    for (int n = 0; n < sys.N; ++n) {
      w.row({"A", std::to_string(m + 1), std::to_string(n + 1), fmt_g17(sys.A[q](m, n))});
      w.row({"B", std::to_string(m + 1), std::to_string(n + 1), fmt_g17(sys.B[q](m, n))});
    }
}

}  // namespace ttomo
