#ifndef TTOMO_QRM_HPP
#define TTOMO_QRM_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ttomo/assembly.hpp"
#include "ttomo/grid.hpp"

namespace ttomo {

// Stacks (grid node, component) into one index: lid = (i*m + j)*N + n,
// the zero-based form of the line-up map (i-1)*NxN + (j-1)*N + n.
struct LineupIndex {
  int m = 0;  // nodes per axis (square grid)
  int N = 0;

  LineupIndex() = default;
  LineupIndex(int m_, int N_) : m(m_), N(N_) {}
  long size() const { return static_cast<long>(m) * m * N; }
  long lid(int i, int j, int n) const { return (static_cast<long>(i) * m + j) * N + n; }
};

// Matrix-free application of the least-squares blocks:
//   script-L : forward-difference transport rows for nodes i,j <= m-2
//   D_x, D_y : forward-difference rows, same node range
//   L        : 5-point Laplacian rows on interior nodes
//   D        : identity rows on boundary nodes
// and the normal operator M = L'L + D'D + eps(Id + Dx'Dx + Dy'Dy + L'L).
class OperatorMatrices {
 public:
  OperatorMatrices(const FourierSystem& sys, double eps, bool laplacian_penalty = true);

  const LineupIndex& index() const { return lu_; }
  double eps() const { return eps_; }

  void apply_L(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply_Lt(const Eigen::VectorXd& y, Eigen::VectorXd& out) const;
  void apply_Dx(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply_Dy(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply_Lap(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;  // symmetric rows
  void apply_M(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  // boundary-value vector D'f from the assembled boundary coefficients
  Eigen::VectorXd boundary_rhs() const;

  // discrete quadratic objective whose normal equations are M w = D'f
  // (the uniform h^2 weight cancels and is omitted throughout)
  double objective(const Eigen::VectorXd& w, const Eigen::VectorXd& f_lineup) const;

  // node-diagonal N x N block of M (preconditioner and direct assembly share it)
  Eigen::MatrixXd diag_block(int i, int j) const;

  const FourierSystem& system() const { return *sys_; }

 private:
  const FourierSystem* sys_;
  LineupIndex lu_;
  double h_ = 0.0, eps_ = 0.0;
  bool lap_on_ = true;
  std::vector<char> is_boundary_;

  friend class QrmSolver;
};

struct QrmOptions {
  double eps = 1e-7;
  enum class Method { Direct, CG } method = Method::Direct;
  double cg_tol = 1e-9;
  long cg_max_iters = 0;  // 0 -> 50 * m^2 * N
  long cg_stall_window = 2000;
  bool laplacian_penalty = true;  // off in the J_epsilon variant
  int refine_steps = 2;
};

struct QrmSolution {
  VectorField W;
  Eigen::VectorXd w;
  long iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_curve;
  const char* method = "";
};

// Factors the normal operator once (Jacobi-scaled upper-triangle CSC handed
// to CHOLMOD's supernodal Cholesky) and solves for any number of boundary
// data vectors; falls back to block-Jacobi conjugate gradients when the
// factorization cannot be computed. Residuals are always evaluated through
// the independent matrix-free operator path.
class QrmSolver {
 public:
  QrmSolver(const FourierSystem& sys, const QrmOptions& opt);
  ~QrmSolver();
  QrmSolver(const QrmSolver&) = delete;
  QrmSolver& operator=(const QrmSolver&) = delete;

  // f_lineup = D'f: boundary coefficients scattered into lineup positions
  QrmSolution solve(const Eigen::VectorXd& f_lineup) const;

  const OperatorMatrices& ops() const { return ops_; }
  const char* method_used() const;

 private:
  QrmSolution solve_direct(const Eigen::VectorXd& rhs) const;
  QrmSolution solve_cg(const Eigen::VectorXd& rhs) const;
  QrmSolution finish(Eigen::VectorXd w, QrmSolution partial) const;

  OperatorMatrices ops_;
  QrmOptions opt_;
  struct Cholmod;
  std::unique_ptr<Cholmod> chol_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> block_llt_;  // CG preconditioner
};

// Convenience: build rhs vector D'f from the assembled system
Eigen::VectorXd lineup_boundary_values(const FourierSystem& sys);

// J_epsilon variant: premultiplied system (S -> I, A -> S^-1 A, B -> S^-1 B)
FourierSystem premultiplied_system(const FourierSystem& sys, const Basis& basis);

}  // namespace ttomo

#endif
