#include "ttomo/forward.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ttomo/io_util.hpp"

namespace ttomo {

namespace {

double p_test1(double x, double z) {
  if ((x - 0.5) * (x - 0.5) + (z - 2) * (z - 2) < 0.22 * 0.22) return 8.0;
  if ((x + 0.5) * (x + 0.5) + (z - 2) * (z - 2) < 0.2 * 0.2) return 5.0;
  return 0.0;
}

double p_test2(double x, double z) {
  const double r2 = x * x + (z - 2) * (z - 2);
  return (0.55 * 0.55 < r2 && r2 < 0.75 * 0.75) ? 2.0 : 0.0;
}

double p_test3(double x, double z) {
  const double m = std::max(std::abs(x), std::abs(z - 2));
  if (std::abs(x - (z - 2)) < 0.35 && m < 0.7 && z < 2 && x < 0) return 2.5;
  if (std::abs(x + (z - 2)) < 0.2 && m < 0.7 && z < 2 && x > 0) return -2.5;
  if (std::abs(x) < 0.2 && m < 0.8 && z > 2 && x < 0) return 2.5;
  if (std::abs(x) < 0.2 && m < 0.8 && z > 2 && x > 0) return -2.5;
  return 0.0;
}

double p_test4(double x, double z) {
  const double m = std::max(std::abs(x), std::abs(z - 2));
  if (std::abs(x - (z - 2)) < 0.325 && m < 0.7 && x < -0.03) return 2.0;
  if (std::abs(x + (z - 2)) < 0.2 && m < 0.7) return 2.0;
  return 0.0;
}

}  // namespace

Phantom Phantom::make_test(int test_id, const Grid2D& g) {
  std::function<double(double, double)> p;
  Medium::Kind mk;
  std::vector<Inclusion> inc;
  double cut = 2.0;
  std::string name = "test" + std::to_string(test_id);
  switch (test_id) {
    case 1:
      p = p_test1;
      mk = Medium::Kind::Test1;
      inc.push_back({"right_disc", 8.0, 1, [](double x, double z) {
                       return (x - 0.5) * (x - 0.5) + (z - 2) * (z - 2) < 0.22 * 0.22;
                     }});
      inc.push_back({"left_disc", 5.0, 1, [](double x, double z) {
                       return (x + 0.5) * (x + 0.5) + (z - 2) * (z - 2) < 0.2 * 0.2;
                     }});
      cut = 2.0;
      break;
    case 2:
      p = p_test2;
      mk = Medium::Kind::Test2;
      inc.push_back({"ring", 2.0, 1, [](double x, double z) { return p_test2(x, z) != 0.0; }});
      cut = 2.0;
      break;
    case 3:
      p = p_test3;
      mk = Medium::Kind::Test3;
      inc.push_back({"positive_part", 2.5, 1,
                     [](double x, double z) { return p_test3(x, z) > 0.0; }});
      inc.push_back({"negative_part", -2.5, -1,
                     [](double x, double z) { return p_test3(x, z) < 0.0; }});
      cut = 1.5;
      break;
    case 4:
      p = p_test4;
      mk = Medium::Kind::Test4;
      inc.push_back({"lambda", 2.0, 1, [](double x, double z) { return p_test4(x, z) != 0.0; }});
      cut = 1.7;
      break;
    default:
      throw std::invalid_argument("Phantom::make_test: test_id must be 1..4");
  }
  return make_custom(g, p, mk, std::move(inc), cut, name);
}

Phantom Phantom::make_custom(const Grid2D& g, std::function<double(double, double)> p,
                             Medium::Kind medium, std::vector<Inclusion> inclusions,
                             double cut_z, const std::string& name) {
  Phantom ph;
  ph.name_ = name;
  ph.p_ = std::move(p);
  ph.medium_ = medium;
  ph.inclusions_ = std::move(inclusions);
  ph.cut_z_ = cut_z;
  ph.field_ = ScalarField(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nz; ++j) ph.field_.at(i, j) = ph.p_(g.x(i), g.z(j));
  return ph;
}

double Phantom::interp(double x, double z) const {
  const Grid2D& g = field_.grid();
  if (x < -g.R || x > g.R || z < g.a || z > g.b) return 0.0;
  double fx = (x + g.R) / g.hx, fz = (z - g.a) / g.hz;
  int i = std::min(static_cast<int>(fx), g.nx - 2);
  int j = std::min(static_cast<int>(fz), g.nz - 2);
  i = std::max(i, 0);
  j = std::max(j, 0);
  const double tx = fx - i, tz = fz - j;
  return (1 - tx) * (1 - tz) * field_.at(i, j) + tx * (1 - tz) * field_.at(i + 1, j) +
         (1 - tx) * tz * field_.at(i, j + 1) + tx * tz * field_.at(i + 1, j + 1);
}

BoundaryData BoundaryData::empty(const Grid2D& omega, const SourceLine& line) {
  BoundaryData d;
  d.omega = omega;
  d.line = line;
  for (int i = 0; i < omega.nx; ++i)
    for (int j = 0; j < omega.nz; ++j) {
      if (!omega.is_boundary(i, j)) continue;
      BoundaryNode n;
      n.i = i;
      n.j = j;
      n.x = omega.x(i);
      n.z = omega.z(j);
      if (i == 0) {
        n.nx_dir = -1;
      } else if (i == omega.nx - 1) {
        n.nx_dir = 1;
      } else if (j == 0) {
        n.nz_dir = -1;
      } else {
        n.nz_dir = 1;
      }
      d.nodes.push_back(n);
    }
  d.values = Eigen::MatrixXd::Zero(static_cast<int>(d.nodes.size()), line.n_alpha);
  d.outflow.assign(d.nodes.size(), std::vector<uint8_t>(line.n_alpha, 0));
  return d;
}

namespace {

double integrate_p_along(const Phantom& ph, const std::vector<std::pair<double, double>>& poly) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < poly.size(); ++k) {
    const double dl = std::hypot(poly[k + 1].first - poly[k].first,
                                 poly[k + 1].second - poly[k].second);
    acc += 0.5 * dl *
           (ph.interp(poly[k].first, poly[k].second) +
            ph.interp(poly[k + 1].first, poly[k + 1].second));
  }
  return acc;
}

}  // namespace

void simulate_source(const Phantom& phantom, const SourceSolve& s, const FmmOptions& opt,
                     BoundaryData& data, const std::string& geodesic_dir) {
  const Box& box = s.box;
  const int k = s.k;
  for (size_t r = 0; r < data.nodes.size(); ++r) {
    const BoundaryNode& n = data.nodes[r];
    const int bi = box.off_x + n.i * box.refine, bj = box.off_z + n.j * box.refine;
    const double gdot = s.gx[box.idx(bi, bj)] * n.nx_dir + s.gz[box.idx(bi, bj)] * n.nz_dir;
    if (gdot > 0.0) {
      data.outflow[r][k] = 1;
      std::vector<std::pair<double, double>> poly;
      try {
        poly = trace_geodesic(s, n.x, n.z, opt);
      } catch (const std::exception& e) {
        throw std::runtime_error("simulate_source: node (" + std::to_string(n.i) + "," +
                                 std::to_string(n.j) + "), source k=" + std::to_string(k) +
                                 ": " + e.what());
      }
      data.values(static_cast<int>(r), k) = integrate_p_along(phantom, poly);
      if (!geodesic_dir.empty())
        write_geodesic_csv(poly, geodesic_dir + "/geodesic_k" + std::to_string(k) + "_n" +
                                     std::to_string(r) + ".csv");
    } else {
      data.outflow[r][k] = 0;
      data.values(static_cast<int>(r), k) = 0.0;
    }
  }
}

ScalarField simulate_field(const Phantom& phantom, const SourceSolve& s, const FmmOptions& opt) {
  const Grid2D& g = phantom.p_field().grid();
  ScalarField u(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nz; ++j) {
      auto poly = trace_geodesic(s, g.x(i), g.z(j), opt);
      u.at(i, j) = integrate_p_along(phantom, poly);
    }
  return u;
}

BoundaryData add_noise(const BoundaryData& data, double delta, uint64_t seed) {
  if (delta < 0) throw std::invalid_argument("add_noise: delta must be >= 0");
  BoundaryData out = data;
  out.delta = delta;
  out.seed = seed;
  if (delta == 0.0) return out;
  std::mt19937_64 rng(seed);
  // portable U[-1,1] from raw 53-bit draws
  auto u11 = [&rng]() {
    const double u01 = static_cast<double>(rng() >> 11) * 0x1p-53;
    return 2.0 * u01 - 1.0;
  };
  for (int r = 0; r < out.values.rows(); ++r)
    for (int k = 0; k < out.values.cols(); ++k)
      out.values(r, k) *= 1.0 + delta * u11();
  return out;
}

void write_boundary_csv(const BoundaryData& data, const std::string& csv_path,
                        const std::string& meta_path) {
  CsvWriter w(csv_path);
  w.row({"alpha_index", "boundary_node_index", "x", "z", "value", "side"});
  for (int k = 0; k < data.line.n_alpha; ++k)
    for (size_t r = 0; r < data.nodes.size(); ++r)
      w.row({std::to_string(k), std::to_string(r), fmt_g17(data.nodes[r].x),
             fmt_g17(data.nodes[r].z), fmt_g17(data.values(static_cast<int>(r), k)),
             data.outflow[r][k] ? "+" : "-"});
  write_kv(meta_path, {{"delta", fmt_g17(data.delta)},
                       {"seed", std::to_string(data.seed)},
                       {"n_alpha", std::to_string(data.line.n_alpha)},
                       {"alpha_bar", fmt_g17(data.line.alpha_bar)},
                       {"boundary_nodes", std::to_string(data.nodes.size())}});
}

}  // namespace ttomo
