#include "ttomo/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ttomo/io_util.hpp"

namespace ttomo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double clampd(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }
}  // namespace

double Medium::c0(double x, double z) const {
  const double xc = clampd(x, -R_, R_);
  const double zc = std::min(z, b_);
  switch (kind_) {
    case Kind::Constant:
      return 1.0;
    case Kind::Test1:
      return zc * zc - 2.0 > 0.0 ? 1.0 + 0.3 * (1.0 - xc * xc) * (zc * zc - 2.0) : 1.0;
    case Kind::Test2:
      return zc > 1.0 ? 1.0 + 0.25 * (xc - 0.5) * (xc - 0.5) * std::log(zc) : 1.0;
    case Kind::Test3:
      return zc > 1.0 ? 1.0 + 0.5 * (xc + 0.5) * (xc + 0.5) * std::log(zc) : 1.0;
    case Kind::Test4:
      return zc > 1.0 ? 1.0 + xc * xc * std::log(zc) : 1.0;
  }
  return 1.0;
}

SourceLine::SourceLine(double abar, int na) : alpha_bar(abar), n_alpha(na) {
  if (na < 2) throw std::invalid_argument("SourceLine: need at least 2 sources");
  alphas.resize(na);
  for (int k = 0; k < na; ++k) alphas[k] = -abar + 2.0 * abar * k / (na - 1);
}

Box Box::around(const Grid2D& omega, double alpha_bar, double margin, int refine) {
  if (std::abs(omega.hx - omega.hz) > 1e-12 * omega.hx)
    throw std::invalid_argument("Box::around: fast marching expects a square grid (hx == hz)");
  if (refine < 1) throw std::invalid_argument("Box::around: refine must be >= 1");
  Box b;
  b.refine = refine;
  b.h = omega.hx / refine;
  const double xneed = std::max(omega.R, alpha_bar) + margin;
  b.off_x = static_cast<int>(std::ceil((xneed - omega.R) / b.h - 1e-9));
  b.x0 = -omega.R - b.off_x * b.h;
  b.nx = 2 * b.off_x + (omega.nx - 1) * refine + 1;
  b.off_z = static_cast<int>(std::ceil((omega.a + margin) / b.h - 1e-9));
  b.z0 = omega.a - b.off_z * b.h;
  const int up = static_cast<int>(std::ceil(margin / b.h - 1e-9));
  b.nz = b.off_z + (omega.nz - 1) * refine + up + 1;
  return b;
}

std::vector<double> fast_march(const Medium& medium, const Box& box, double alpha,
                               const FmmOptions& opt) {
  const int nx = box.nx, nz = box.nz, total = nx * nz;
  const double h = box.h;

  std::vector<double> slow(total);  // n0 = sqrt(c0)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j) {
      const double c = medium.c0(box.x(i), box.z(j));
      if (!(c > 0.0) || !std::isfinite(c))
        throw std::runtime_error("fast_march: invalid c0 at (" + fmt_g17(box.x(i)) + "," +
                                 fmt_g17(box.z(j)) + ")");
      slow[box.idx(i, j)] = std::sqrt(c);
    }

  std::vector<double> u(total, kInf);
  enum : char { FAR = 0, TRIAL = 1, DONE = 2 };
  std::vector<char> state(total, FAR);

  // binary min-heap with back-pointers for decrease-key
  std::vector<int> heap;
  heap.reserve(total / 4);
  std::vector<int> pos(total, -1);
  auto sift_up = [&](int c) {
    while (c > 0) {
      int p = (c - 1) / 2;
      if (u[heap[p]] <= u[heap[c]]) break;
      std::swap(heap[p], heap[c]);
      pos[heap[p]] = p;
      pos[heap[c]] = c;
      c = p;
    }
  };
  auto sift_down = [&](int c) {
    const int n = static_cast<int>(heap.size());
    while (true) {
      int l = 2 * c + 1, r = l + 1, m = c;
      if (l < n && u[heap[l]] < u[heap[m]]) m = l;
      if (r < n && u[heap[r]] < u[heap[m]]) m = r;
      if (m == c) break;
      std::swap(heap[m], heap[c]);
      pos[heap[m]] = m;
      pos[heap[c]] = c;
      c = m;
    }
  };
  auto push_or_update = [&](int id, double val) {
    if (val >= u[id]) return;
    u[id] = val;
    if (pos[id] < 0) {
      heap.push_back(id);
      pos[id] = static_cast<int>(heap.size()) - 1;
      state[id] = TRIAL;
    }
    sift_up(pos[id]);
  };
  auto pop_min = [&]() {
    int id = heap[0];
    heap[0] = heap.back();
    pos[heap[0]] = 0;
    heap.pop_back();
    pos[id] = -1;
    if (!heap.empty()) sift_down(0);
    return id;
  };

  // exact initialization in a disc around the source (c0 = 1 there)
  const double sx = alpha, sz = 0.0, r0 = opt.source_disc_radius;
  const int ic = static_cast<int>(std::floor((sx - box.x0) / h));
  const int jc = static_cast<int>(std::floor((sz - box.z0) / h));
  const int rad = static_cast<int>(std::ceil(r0 / h)) + 1;
  int seeded = 0;
  for (int i = std::max(0, ic - rad); i <= std::min(nx - 1, ic + rad); ++i)
    for (int j = std::max(0, jc - rad); j <= std::min(nz - 1, jc + rad); ++j) {
      const double d = std::hypot(box.x(i) - sx, box.z(j) - sz);
      if (d <= r0) {
        const int id = box.idx(i, j);
        u[id] = d;
        state[id] = DONE;
        ++seeded;
      }
    }
  if (seeded == 0) {
    // source disc smaller than a cell: seed the four surrounding nodes
    for (int i = std::max(0, ic); i <= std::min(nx - 1, ic + 1); ++i)
      for (int j = std::max(0, jc); j <= std::min(nz - 1, jc + 1); ++j) {
        const int id = box.idx(i, j);
        u[id] = std::hypot(box.x(i) - sx, box.z(j) - sz);
        state[id] = DONE;
      }
  }

  auto update = [&](int i, int j) {
    const int id = box.idx(i, j);
    if (state[id] == DONE) return;
    const double f = h * slow[id];
    double a1 = kInf, a2 = kInf;  // x axis: nearest and next upwind values
    if (i > 0 && state[box.idx(i - 1, j)] == DONE) a1 = u[box.idx(i - 1, j)];
    if (i + 1 < nx && state[box.idx(i + 1, j)] == DONE) {
      if (u[box.idx(i + 1, j)] < a1) {
        a1 = u[box.idx(i + 1, j)];
        if (i + 2 < nx && state[box.idx(i + 2, j)] == DONE) a2 = u[box.idx(i + 2, j)];
      }
    } else if (a1 < kInf && i > 1 && state[box.idx(i - 2, j)] == DONE) {
      a2 = u[box.idx(i - 2, j)];
    }
    double b1 = kInf, b2 = kInf;
    if (j > 0 && state[box.idx(i, j - 1)] == DONE) b1 = u[box.idx(i, j - 1)];
    if (j + 1 < nz && state[box.idx(i, j + 1)] == DONE) {
      if (u[box.idx(i, j + 1)] < b1) {
        b1 = u[box.idx(i, j + 1)];
        if (j + 2 < nz && state[box.idx(i, j + 2)] == DONE) b2 = u[box.idx(i, j + 2)];
      }
    } else if (b1 < kInf && j > 1 && state[box.idx(i, j - 2)] == DONE) {
      b2 = u[box.idx(i, j - 2)];
    }

    double cand = kInf;
    // second-order coefficients per axis when two upwind values are usable
    auto axis_coeff = [&](double v1, double v2, double& c1, double& c0v) {
      if (opt.second_order && v2 < kInf && v2 <= v1) {
        c1 = 1.5;
        c0v = (4.0 * v1 - v2) / 3.0 * 1.5;  // 1.5*u - (4v1-v2)/2 form folded below
      } else {
        c1 = 1.0;
        c0v = v1;
      }
    };
    if (a1 < kInf && b1 < kInf) {
      double ca, va, cb, vb;
      axis_coeff(a1, a2, ca, va);
      axis_coeff(b1, b2, cb, vb);
      // solve (ca u - va)^2 + (cb u - vb)^2 = f^2 (first order: ca=cb=1)
      const double A = ca * ca + cb * cb;
      const double B = -2.0 * (ca * va + cb * vb);
      const double C = va * va + vb * vb - f * f;
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double t = (-B + std::sqrt(disc)) / (2.0 * A);
        if (t >= std::max(a1, b1)) cand = t;
      }
    }
    if (cand == kInf) {
      const double m = std::min(a1, b1);
      if (m < kInf) cand = m + f;
    }
    push_or_update(id, cand);
  };

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
      if (state[box.idx(i, j)] == DONE) {
        if (i > 0) update(i - 1, j);
        if (i + 1 < nx) update(i + 1, j);
        if (j > 0) update(i, j - 1);
        if (j + 1 < nz) update(i, j + 1);
      }

  while (!heap.empty()) {
    const int id = pop_min();
    state[id] = DONE;
    const int i = id / nz, j = id % nz;
    if (i > 0) update(i - 1, j);
    if (i + 1 < nx) update(i + 1, j);
    if (j > 0) update(i, j - 1);
    if (j + 1 < nz) update(i, j + 1);
  }
  return u;
}

namespace {

void binomial_smooth(const Box& box, std::vector<double>& u, int passes) {
  if (passes <= 0) return;
  std::vector<double> tmp(u.size());
  for (int p = 0; p < passes; ++p) {
    for (int i = 0; i < box.nx; ++i)
      for (int j = 0; j < box.nz; ++j) {
        const int i0 = std::max(0, i - 1), i1 = std::min(box.nx - 1, i + 1);
        const int j0 = std::max(0, j - 1), j1 = std::min(box.nz - 1, j + 1);
        double acc = 0.0, wsum = 0.0;
        for (int ii = i0; ii <= i1; ++ii)
          for (int jj = j0; jj <= j1; ++jj) {
            const double w = (ii == i ? 2.0 : 1.0) * (jj == j ? 2.0 : 1.0);
            acc += w * u[box.idx(ii, jj)];
            wsum += w;
          }
        tmp[box.idx(i, j)] = acc / wsum;
      }
    u.swap(tmp);
  }
}

}  // namespace

SourceSolve solve_source(const Medium& medium, const Box& box, int k, double alpha,
                         const FmmOptions& opt) {
  SourceSolve s;
  s.k = k;
  s.alpha = alpha;
  s.box = box;
  s.u0 = fast_march(medium, box, alpha, opt);
  binomial_smooth(box, s.u0, opt.u0_smooth_passes);
  const int nx = box.nx, nz = box.nz;
  s.gx.assign(s.u0.size(), 0.0);
  s.gz.assign(s.u0.size(), 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j) {
      const int il = std::max(0, i - 1), ir = std::min(nx - 1, i + 1);
      const int jl = std::max(0, j - 1), jr = std::min(nz - 1, j + 1);
      s.gx[box.idx(i, j)] = (s.u0[box.idx(ir, j)] - s.u0[box.idx(il, j)]) / ((ir - il) * box.h);
      s.gz[box.idx(i, j)] = (s.u0[box.idx(i, jr)] - s.u0[box.idx(i, jl)]) / ((jr - jl) * box.h);
    }
  return s;
}

namespace {

double bilinear(const Box& box, const std::vector<double>& f, double x, double z) {
  double fx = (x - box.x0) / box.h, fz = (z - box.z0) / box.h;
  fx = clampd(fx, 0.0, box.nx - 1.000001);
  fz = clampd(fz, 0.0, box.nz - 1.000001);
  const int i = std::min(static_cast<int>(fx), box.nx - 2);
  const int j = std::min(static_cast<int>(fz), box.nz - 2);
  const double tx = fx - i, tz = fz - j;
  return (1 - tx) * (1 - tz) * f[box.idx(i, j)] + tx * (1 - tz) * f[box.idx(i + 1, j)] +
         (1 - tx) * tz * f[box.idx(i, j + 1)] + tx * tz * f[box.idx(i + 1, j + 1)];
}

}  // namespace

std::vector<std::pair<double, double>> trace_geodesic(const SourceSolve& s, double x, double z,
                                                      const FmmOptions& opt) {
  const Box& box = s.box;
  const double step = opt.tracer_step_factor * box.h * box.refine;
  std::vector<std::pair<double, double>> poly;
  poly.emplace_back(x, z);
  double px = x, pz = z;
  for (int it = 0; it < opt.max_geodesic_steps; ++it) {
    if (std::hypot(px - s.alpha, pz) <= box.h * box.refine) {
      poly.emplace_back(s.alpha, 0.0);
      std::reverse(poly.begin(), poly.end());
      return poly;
    }
    const double gx = bilinear(box, s.gx, px, pz);
    const double gz = bilinear(box, s.gz, px, pz);
    const double g = std::hypot(gx, gz);
    if (g < 1e-12)
      throw std::runtime_error("trace_geodesic: vanishing gradient near (" + fmt_g17(px) + "," +
                               fmt_g17(pz) + ")");
    px -= step * gx / g;
    pz -= step * gz / g;
    px = clampd(px, box.x0, box.x0 + (box.nx - 1) * box.h);
    pz = clampd(pz, box.z0, box.z0 + (box.nz - 1) * box.h);
    poly.emplace_back(px, pz);
  }
  throw std::runtime_error("trace_geodesic: no convergence from (" + fmt_g17(x) + "," +
                           fmt_g17(z) + ") to source alpha=" + fmt_g17(s.alpha) +
                           " within step limit (caustic or bad field)");
}

BackgroundBuilder::BackgroundBuilder(const Grid2D& omega, const SourceLine& line) {
  bg_.omega = omega;
  bg_.line = line;
  const int na = line.n_alpha, nn = omega.node_count();
  auto sized = [&] { return std::vector<std::vector<double>>(na, std::vector<double>(nn, 0.0)); };
  bg_.u0 = sized();
  bg_.du0x = sized();
  bg_.du0z = sized();
  r13_ = sized();
  r2_ = sized();
  seen_.assign(na, false);
}

void BackgroundBuilder::accumulate(const SourceSolve& s) {
  const Grid2D& g = bg_.omega;
  const Box& box = s.box;
  const double h = box.h;
  const int k = s.k;
  if (k < 0 || k >= bg_.line.n_alpha)
    throw std::invalid_argument("BackgroundBuilder: source index out of range");
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nz; ++j) {
      const int bi = box.off_x + i * box.refine, bj = box.off_z + j * box.refine;
      const int id = box.idx(bi, bj);
      const double uc = s.u0[id];
      const double ux = (s.u0[box.idx(bi + 1, bj)] - s.u0[box.idx(bi - 1, bj)]) / (2 * h);
      const double uz = (s.u0[box.idx(bi, bj + 1)] - s.u0[box.idx(bi, bj - 1)]) / (2 * h);
      const double uzz =
          (s.u0[box.idx(bi, bj + 1)] - 2 * uc + s.u0[box.idx(bi, bj - 1)]) / (h * h);
      const double uzx = (s.u0[box.idx(bi + 1, bj + 1)] - s.u0[box.idx(bi + 1, bj - 1)] -
                          s.u0[box.idx(bi - 1, bj + 1)] + s.u0[box.idx(bi - 1, bj - 1)]) /
                         (4 * h * h);
      const int q = g.node(i, j);
      bg_.u0[k][q] = uc;
      bg_.du0x[k][q] = ux;
      bg_.du0z[k][q] = uz;
      r13_[k][q] = uzz / uz + uzx * ux / (uz * uz);
      r2_[k][q] = ux / uz;
    }
  seen_[k] = true;
}

BackgroundField BackgroundBuilder::finalize() {
  const int na = bg_.line.n_alpha, nn = bg_.omega.node_count();
  for (int k = 0; k < na; ++k)
    if (!seen_[k])
      throw std::runtime_error("BackgroundBuilder: missing source " + std::to_string(k));

  bg_.min_dzu0 = kInf;
  for (int k = 0; k < na; ++k)
    for (int q = 0; q < nn; ++q) {
      const double v = bg_.du0z[k][q];
      if (v < bg_.min_dzu0) {
        bg_.min_dzu0 = v;
        bg_.min_dzu0_node = q;
        bg_.min_dzu0_source = k;
      }
      if (!std::isfinite(r13_[k][q]) || !std::isfinite(r2_[k][q]))
        throw std::runtime_error("BackgroundBuilder: non-finite ratio field at node " +
                                 std::to_string(q) + ", source " + std::to_string(k));
    }
  if (!(bg_.min_dzu0 > 0.0)) {
    const int q = bg_.min_dzu0_node;
    throw std::runtime_error(
        "monotonicity (Assumption on dz u0 > 0) violated: dz u0 = " + fmt_g17(bg_.min_dzu0) +
        " at node (i,j)=(" + std::to_string(q / bg_.omega.nz) + "," +
        std::to_string(q % bg_.omega.nz) + "), source k=" + std::to_string(bg_.min_dzu0_source));
  }

  const double da = bg_.line.spacing();
  auto sized = [&] { return std::vector<std::vector<double>>(na, std::vector<double>(nn, 0.0)); };
  bg_.pa = sized();
  bg_.qa = sized();
  bg_.pb = sized();
  bg_.qb = sized();
  for (int k = 0; k < na; ++k) {
    const int kl = std::max(0, k - 1), kr = std::min(na - 1, k + 1);
    const double den = (kr - kl) * da;
    for (int q = 0; q < nn; ++q) {
      bg_.pa[k][q] = -r13_[k][q];
      bg_.qa[k][q] = -(r13_[kr][q] - r13_[kl][q]) / den;
      bg_.pb[k][q] = r2_[k][q];
      bg_.qb[k][q] = (r2_[kr][q] - r2_[kl][q]) / den;
    }
  }
  r13_.clear();
  r2_.clear();
  return std::move(bg_);
}

BackgroundField straight_ray_background(const Grid2D& omega, const SourceLine& line) {
  BackgroundField bg;
  bg.omega = omega;
  bg.line = line;
  const int na = line.n_alpha, nn = omega.node_count();
  auto sized = [&] { return std::vector<std::vector<double>>(na, std::vector<double>(nn, 0.0)); };
  bg.u0 = sized();
  bg.du0x = sized();
  bg.du0z = sized();
  bg.pa = sized();
  bg.qa = sized();
  bg.pb = sized();
  bg.qb = sized();
  bg.min_dzu0 = kInf;
  for (int k = 0; k < na; ++k) {
    const double al = line.alphas[k];
    for (int i = 0; i < omega.nx; ++i)
      for (int j = 0; j < omega.nz; ++j) {
        const double x = omega.x(i), z = omega.z(j);
        const double r = std::hypot(x - al, z);
        const int q = omega.node(i, j);
        bg.u0[k][q] = r;
        bg.du0x[k][q] = (x - al) / r;
        bg.du0z[k][q] = z / r;
        // dzz u0 / dz u0 + dzx u0 dx u0 / (dz u0)^2 == 0 for straight rays
        bg.pa[k][q] = 0.0;
        bg.qa[k][q] = 0.0;
        bg.pb[k][q] = (x - al) / z;
        bg.qb[k][q] = -1.0 / z;
        bg.min_dzu0 = std::min(bg.min_dzu0, z / r);
      }
  }
  return bg;
}

void write_geodesic_csv(const std::vector<std::pair<double, double>>& poly,
                        const std::string& path) {
  CsvWriter w(path);
  w.row({"x", "z"});
  for (const auto& [x, z] : poly) w.row({fmt_g17(x), fmt_g17(z)});
}

}  // namespace ttomo
