#include "ttomo/basis.hpp"

#include <quadmath.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ttomo/io_util.hpp"

namespace ttomo {

namespace {

using quad = __float128;

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration in long double.
void gauss_legendre(int K, std::vector<long double>& x, std::vector<long double>& w) {
  x.resize(K);
  w.resize(K);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int k = 0; k < (K + 1) / 2; ++k) {
    long double t = cosl(pi * (k + 0.75L) / (K + 0.5L));
    long double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1;
      p1 = t;
      for (int n = 2; n <= K; ++n) {
        long double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      long double dp = K * (t * p1 - p0) / (t * t - 1);
      long double dt = p1 / dp;
      t -= dt;
      if (fabsl(dt) < 1e-19L) break;
    }
    p0 = 1;
    p1 = t;
    for (int n = 2; n <= K; ++n) {
      long double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    long double dp = K * (t * p1 - p0) / (t * t - 1);
    x[K - 1 - k] = t;
    x[k] = -t;
    w[k] = w[K - 1 - k] = 2.0L / ((1 - t * t) * dp * dp);
  }
}

struct QuadRule {
  std::vector<quad> nodes, weights;
};

QuadRule scaled_rule(int K, double alpha_bar) {
  std::vector<long double> x, w;
  gauss_legendre(K, x, w);
  QuadRule r;
  r.nodes.resize(K);
  r.weights.resize(K);
  for (int k = 0; k < K; ++k) {
    r.nodes[k] = (quad)x[k] * (quad)alpha_bar;
    r.weights[k] = (quad)w[k] * (quad)alpha_bar;
  }
  return r;
}

// phi_n(a) = a^(n-1) e^a and its derivative, n is 1-based
void sample_phi(int n, const std::vector<quad>& a, std::vector<quad>& v, std::vector<quad>& dv) {
  const size_t K = a.size();
  v.resize(K);
  dv.resize(K);
  for (size_t k = 0; k < K; ++k) {
    quad e = expq(a[k]);
    quad pw = 1;
    for (int j = 1; j < n; ++j) pw *= a[k];
    v[k] = pw * e;
    quad pl = 0;
    if (n >= 2) {
      pl = (quad)(n - 1);
      for (int j = 2; j < n; ++j) pl *= a[k];
    }
    dv[k] = (pl + pw) * e;
  }
}

}  // namespace

Basis Basis::build(double alpha_bar, int N, int n_alpha) {
  if (!(alpha_bar > 0)) throw std::invalid_argument("basis: alpha_bar must be positive");
  if (N < 1 || N > 60) throw std::invalid_argument("basis: need 1 <= N <= 60");
  if (n_alpha < 4 * N) throw std::invalid_argument("basis: need n_alpha >= 4N");

  Basis b;
  b.alpha_bar_ = alpha_bar;
  b.N_ = N;
  b.n_alpha_ = n_alpha;

  const int Kgs = std::max(4 * N, 240);
  const int Korc = 2001;
  QuadRule gs = scaled_rule(Kgs, alpha_bar);
  QuadRule orc = scaled_rule(Korc, alpha_bar);

  // data grid (uniform, trapezoid weights)
  std::vector<quad> adat(n_alpha);
  const quad step = (quad)(2.0 * alpha_bar) / (n_alpha - 1);
  for (int k = 0; k < n_alpha; ++k) adat[k] = (quad)(-alpha_bar) + step * k;

  // sample sets updated in lockstep: gs values/derivs, data values/derivs,
  // oracle values
  std::vector<std::vector<quad>> g(N), dg(N), t(N), dt(N), o(N);
  for (int n = 0; n < N; ++n) {
    sample_phi(n + 1, gs.nodes, g[n], dg[n]);
    sample_phi(n + 1, adat, t[n], dt[n]);
    std::vector<quad> tmp;
    sample_phi(n + 1, orc.nodes, o[n], tmp);
  }

  auto dot_gs = [&](const std::vector<quad>& u, const std::vector<quad>& v) {
    quad s = 0;
    for (int k = 0; k < Kgs; ++k) s += gs.weights[k] * u[k] * v[k];
    return s;
  };

  for (int n = 0; n < N; ++n) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int m = 0; m < n; ++m) {
        quad r = dot_gs(g[n], g[m]);
        for (int k = 0; k < Kgs; ++k) {
          g[n][k] -= r * g[m][k];
          dg[n][k] -= r * dg[m][k];
        }
        for (int k = 0; k < n_alpha; ++k) {
          t[n][k] -= r * t[m][k];
          dt[n][k] -= r * dt[m][k];
        }
        for (int k = 0; k < Korc; ++k) o[n][k] -= r * o[m][k];
      }
    }
    quad nrm = sqrtq(dot_gs(g[n], g[n]));
    if (!(nrm > 0))
      throw std::runtime_error("basis: Gram-Schmidt residual vanished at n=" + std::to_string(n + 1));
    quad inv = 1 / nrm;
    for (int k = 0; k < Kgs; ++k) {
      g[n][k] *= inv;
      dg[n][k] *= inv;
    }
    for (int k = 0; k < n_alpha; ++k) {
      t[n][k] *= inv;
      dt[n][k] *= inv;
    }
    for (int k = 0; k < Korc; ++k) o[n][k] *= inv;
  }

  // orthonormality against the 2001-node oracle rule
  b.gram_dev_ = 0.0;
  int bad_m = -1, bad_n = -1;
  for (int m = 0; m < N; ++m)
    for (int n = m; n < N; ++n) {
      quad s = 0;
      for (int k = 0; k < Korc; ++k) s += orc.weights[k] * o[m][k] * o[n][k];
      double dev = std::fabs((double)s - (m == n ? 1.0 : 0.0));
      if (dev > b.gram_dev_) {
        b.gram_dev_ = dev;
        bad_m = m + 1;
        bad_n = n + 1;
      }
    }
  if (b.gram_dev_ > 1e-8)
    throw std::runtime_error("basis: orthonormality lost at pair (" + std::to_string(bad_m) +
                             "," + std::to_string(bad_n) + "), deviation " +
                             fmt_g17(b.gram_dev_) + " (N too large for working precision)");

  // S, its quadrature-consistent variant, and S^-1 (all in quad arithmetic)
  std::vector<quad> Sq(static_cast<size_t>(N) * N);
  b.S_.resize(N, N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) {
      quad s = dot_gs(dg[n], g[m]);
      Sq[static_cast<size_t>(m) * N + n] = s;
      b.S_(m, n) = (double)s;
    }

  // Gauss-Jordan inverse; S has unit diagonal up to roundoff so no pivoting
  std::vector<quad> aug(static_cast<size_t>(N) * 2 * N, 0);
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) aug[m * 2 * N + n] = Sq[static_cast<size_t>(m) * N + n];
    aug[m * 2 * N + N + m] = 1;
  }
  for (int c = 0; c < N; ++c) {
    quad piv = aug[c * 2 * N + c];
    if (fabsq(piv) < (quad)1e-30) throw std::runtime_error("basis: S is numerically singular");
    quad ip = 1 / piv;
    for (int k = 0; k < 2 * N; ++k) aug[c * 2 * N + k] *= ip;
    for (int r = 0; r < N; ++r) {
      if (r == c) continue;
      quad f = aug[r * 2 * N + c];
      if (f == 0) continue;
      for (int k = 0; k < 2 * N; ++k) aug[r * 2 * N + k] -= f * aug[c * 2 * N + k];
    }
  }
  b.S_inv_.resize(N, N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) b.S_inv_(m, n) = (double)aug[m * 2 * N + N + n];
  quad resid = 0;
  for (int m = 0; m < N; ++m) {
    quad row = 0;
    for (int n = 0; n < N; ++n) {
      quad acc = m == n ? (quad)-1 : (quad)0;
      for (int k = 0; k < N; ++k)
        acc += Sq[static_cast<size_t>(m) * N + k] * aug[k * 2 * N + N + n];
      row += fabsq(acc);
    }
    if (row > resid) resid = row;
  }
  b.s_inv_residual_ = (double)resid;

  // export data-grid samples
  b.alpha_.resize(n_alpha);
  b.tau_.resize(n_alpha);
  for (int k = 0; k < n_alpha; ++k) {
    b.alpha_[k] = (double)adat[k];
    b.tau_[k] = (double)step * ((k == 0 || k == n_alpha - 1) ? 0.5 : 1.0);
  }
  b.psi_.resize(N, n_alpha);
  b.dpsi_.resize(N, n_alpha);
  for (int n = 0; n < N; ++n)
    for (int k = 0; k < n_alpha; ++k) {
      b.psi_(n, k) = (double)t[n][k];
      b.dpsi_(n, k) = (double)dt[n][k];
    }
  b.S_quad_ = (b.psi_ * b.tau_.asDiagonal() * b.dpsi_.transpose()).eval();

  Eigen::MatrixXd G = b.psi_ * b.tau_.asDiagonal() * b.psi_.transpose();
  b.gram_llt_.compute(G);
  if (b.gram_llt_.info() != Eigen::Success)
    throw std::runtime_error("basis: data-grid Gram matrix not positive definite");
  return b;
}

Eigen::VectorXd Basis::project(const Eigen::Ref<const Eigen::VectorXd>& samples) const {
  if (samples.size() != n_alpha_)
    throw std::invalid_argument("basis::project: sample count mismatch");
  Eigen::VectorXd rhs = psi_ * (tau_.cwiseProduct(samples));
  return gram_llt_.solve(rhs);
}

Eigen::VectorXd Basis::synthesize(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
  if (coeffs.size() != N_)
    throw std::invalid_argument("basis::synthesize: coefficient count mismatch");
  return psi_.transpose() * coeffs;
}

void Basis::dump_csv(const std::string& psi_path, const std::string& s_path) const {
  {
    CsvWriter w(psi_path);
    w.row({"n", "alpha", "psi", "dpsi"});
    for (int n = 0; n < N_; ++n)
      for (int k = 0; k < n_alpha_; ++k)
        w.row({std::to_string(n + 1), fmt_g17(alpha_[k]), fmt_g17(psi_(n, k)),
               fmt_g17(dpsi_(n, k))});
  }
  {
    CsvWriter w(s_path);
    for (int m = 0; m < N_; ++m) {
      std::vector<std::string> cells(N_);
      for (int n = 0; n < N_; ++n) cells[n] = fmt_g17(S_(m, n));
      w.row(cells);
    }
  }
}

}  // namespace ttomo
