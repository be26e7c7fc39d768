#ifndef TTOMO_BASIS_HPP
#define TTOMO_BASIS_HPP

#include <Eigen/Dense>
#include <string>

namespace ttomo {

// Orthonormal system built from alpha^(n-1)*exp(alpha) on (-alpha_bar, alpha_bar)
// by modified Gram-Schmidt with one reorthogonalization pass. The
// orthonormalization runs in quadruple precision against an internal
// Gauss-Legendre rule; derivative samples are updated in lockstep through the
// same linear recurrence, so the structural identities of the stiffness
// matrix S (unit diagonal, vanishing strict lower triangle) survive in
// floating point.
//
// Two quadratures live side by side:
//   - the internal Gauss-Legendre rule (exact for these integrands), used for
//     the Gram-Schmidt inner products, S and its diagnostics;
//   - the data grid: n_alpha uniform nodes with composite-trapezoid weights,
//     matching the source sampling. project() solves the small Gram system of
//     the sampled functions, i.e. it is the discrete least-squares projection,
//     so project(synthesize(c)) == c to machine precision even where the
//     trapezoid rule under-resolves high modes.
class Basis {
 public:
  static Basis build(double alpha_bar, int N, int n_alpha);

  double alpha_bar() const { return alpha_bar_; }
  int N() const { return N_; }
  int n_alpha() const { return n_alpha_; }

  const Eigen::VectorXd& alpha_nodes() const { return alpha_; }
  const Eigen::VectorXd& quad_weights() const { return tau_; }
  // sampled values on the data grid, row n = Psi_n / Psi_n'
  const Eigen::MatrixXd& psi() const { return psi_; }
  const Eigen::MatrixXd& dpsi() const { return dpsi_; }

  // s_mn = int Psi_n' Psi_m (internal rule), and the same integrals evaluated
  // with the data-grid trapezoid weights (the quadrature-consistent variant
  // used inside the discrete transport operator)
  const Eigen::MatrixXd& S() const { return S_; }
  const Eigen::MatrixXd& S_quad() const { return S_quad_; }
  const Eigen::MatrixXd& S_inverse() const { return S_inv_; }

  // build diagnostics
  double gram_deviation() const { return gram_dev_; }          // ||G - I||_max, 2001-node oracle
  double s_inverse_residual() const { return s_inv_residual_; }  // ||S S^-1 - I||_inf, quad arithmetic

  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& samples) const;
  Eigen::VectorXd synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;

  // integral over alpha of sampled data (composite trapezoid)
  double quadrature(const Eigen::Ref<const Eigen::VectorXd>& samples) const {
    return tau_.dot(samples);
  }

  void dump_csv(const std::string& psi_path, const std::string& s_path) const;

 private:
  double alpha_bar_ = 0.0;
  int N_ = 0;
  int n_alpha_ = 0;
  Eigen::VectorXd alpha_, tau_;
  Eigen::MatrixXd psi_, dpsi_;
  Eigen::MatrixXd S_, S_quad_, S_inv_;
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;
  double gram_dev_ = 0.0, s_inv_residual_ = 0.0;
};

}  // namespace ttomo

#endif
