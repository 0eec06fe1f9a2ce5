#include "lpib/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lpib {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

Rule1D gauss_jacobi01(int m, double a, double b) {
  require(m >= 1, "gauss_jacobi01: need at least one node");
  require(a > -1.0 && b > -1.0, "gauss_jacobi01: weight exponents must exceed -1");

  // Recurrence coefficients of monic Jacobi polynomials for (1-x)^alpha (1+x)^beta
  // on [-1,1]; the [0,1] weight s^a (1-s)^b maps to alpha = b, beta = a.
  const double alpha = b, beta = a;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    double kk = k;
    double denom = (2 * kk + alpha + beta) * (2 * kk + alpha + beta + 2);
    double ak;
    if (k == 0)
      ak = (beta - alpha) / (alpha + beta + 2);
    else
      ak = (beta * beta - alpha * alpha) / denom;
    J(k, k) = ak;
    if (k + 1 < m) {
      double k1 = kk + 1;
      double bk;
      if (k == 0) {
        // k=1 coefficient with the (1+alpha+beta) factor cancelled analytically
        bk = 4 * (1 + alpha) * (1 + beta) /
             (std::pow(2 + alpha + beta, 2) * (3 + alpha + beta));
      } else {
        double num = 4 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + alpha + beta);
        double den = std::pow(2 * k1 + alpha + beta, 2) * (2 * k1 + alpha + beta + 1) *
                     (2 * k1 + alpha + beta - 1);
        bk = num / den;
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(bk);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const auto& xs = es.eigenvalues();
  const auto& V = es.eigenvectors();

  // mu0 = int_{-1}^{1} (1-x)^alpha (1+x)^beta dx = 2^{alpha+beta+1} B(alpha+1, beta+1)
  double mu0 = std::exp((alpha + beta + 1) * std::log(2.0) + log_beta(alpha + 1, beta + 1));

  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  const double scale = std::pow(2.0, -(a + b + 1));
  for (int i = 0; i < m; ++i) {
    r.x[i] = 0.5 * (xs[i] + 1.0);
    r.w[i] = scale * mu0 * V(0, i) * V(0, i);
  }
  return r;
}

Rule1D gauss_legendre(int m, double lo, double hi) {
  Rule1D base = gauss_jacobi01(m, 0.0, 0.0);
  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < m; ++i) {
    r.x[i] = lo + (hi - lo) * base.x[i];
    r.w[i] = (hi - lo) * base.w[i];
  }
  return r;
}

CircleRule CircleRule::equispaced(int m) {
  require(m >= 1, "circle rule needs nodes");
  CircleRule r;
  r.c.resize(m);
  r.w.assign(m, 2.0 * M_PI / m);
  for (int j = 0; j < m; ++j) {
    double th = 2.0 * M_PI * j / m;
    r.c[j] = cplx(std::cos(th), std::sin(th));
  }
  return r;
}

CircleRule CircleRule::paneled(std::vector<double> breaks, int per_panel) {
  if (breaks.empty()) return equispaced(std::max(per_panel, 4));
  const double twopi = 2.0 * M_PI;
  for (double& b : breaks) b = std::fmod(std::fmod(b, twopi) + twopi, twopi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               breaks.end());
  CircleRule r;
  int np = static_cast<int>(breaks.size());
  for (int i = 0; i < np; ++i) {
    double lo = breaks[i];
    double hi = (i + 1 < np) ? breaks[i + 1] : breaks[0] + twopi;
    if (hi - lo < 1e-12) continue;
    Rule1D g = gauss_legendre(per_panel, lo, hi);
    for (int k = 0; k < per_panel; ++k) {
      r.c.push_back(cplx(std::cos(g.x[k]), std::sin(g.x[k])));
      r.w.push_back(g.w[k]);
    }
  }
  return r;
}

RealSphereRule real_sphere_rule(int d, int res) {
  require(d >= 1, "real_sphere_rule: dimension must be positive");
  RealSphereRule r;
  r.dim = d;
  if (d == 1) {
    r.nodes.resize(2);
    r.nodes[0] = RVec::Constant(1, 1.0);
    r.nodes[1] = RVec::Constant(1, -1.0);
    r.weights = {1.0, 1.0};
    return r;
  }
  if (d == 2) {
    CircleRule c = CircleRule::equispaced(2 * res);
    for (std::size_t j = 0; j < c.c.size(); ++j) {
      RVec v(2);
      v << c.c[j].real(), c.c[j].imag();
      r.nodes.push_back(v);
      r.weights.push_back(c.w[j]);
    }
    return r;
  }
  // x = (cos th, sin th * xi), dx = sin^{d-2} th dth dxi; u = cos th with
  // weight (1-u^2)^{(d-3)/2} becomes s^{(d-3)/2}(1-s)^{(d-3)/2} after
  // s = (u+1)/2 up to a power of two.
  double e = 0.5 * (d - 3);
  Rule1D g = gauss_jacobi01(res, e, e);
  RealSphereRule sub = real_sphere_rule(d - 1, std::max(4, res / 1));
  const double jac = std::pow(2.0, d - 2);
  for (int i = 0; i < res; ++i) {
    double u = 2.0 * g.x[i] - 1.0;
    double st = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (std::size_t k = 0; k < sub.nodes.size(); ++k) {
      RVec v(d);
      v[0] = u;
      for (int j = 0; j < d - 1; ++j) v[j + 1] = st * sub.nodes[k][j];
      r.nodes.push_back(v);
      r.weights.push_back(jac * g.w[i] * sub.weights[k]);
    }
  }
  return r;
}

namespace {

SphereRule assemble_product(int n, double p, RuleKind kind, int res, const CircleRule& circle,
                            const Rule1D& t_rule, const SphereRule* sub) {
  SphereRule r;
  r.n = n;
  r.p = p;
  r.kind = kind;
  r.resolution = res;
  r.circle_nodes = circle.c;
  std::size_t mt = t_rule.x.size();
  std::size_t msub = sub ? sub->nodes.size() : 1;
  r.nt = mt;
  r.nsub = msub;
  r.t_sin.resize(mt);
  r.t_cos.resize(mt);
  for (std::size_t i = 0; i < mt; ++i) {
    double s = t_rule.x[i];
    r.t_sin[i] = std::sqrt(s);
    r.t_cos[i] = std::sqrt(1.0 - s);
  }
  r.nodes.reserve(circle.c.size() * mt * msub);
  r.weights.reserve(circle.c.size() * mt * msub);
  for (std::size_t jc = 0; jc < circle.c.size(); ++jc) {
    for (std::size_t it = 0; it < mt; ++it) {
      for (std::size_t ks = 0; ks < msub; ++ks) {
        CVec v(n);
        v[0] = circle.c[jc] * r.t_sin[it];
        if (sub) {
          for (int j = 0; j < n - 1; ++j) v[j + 1] = r.t_cos[it] * sub->nodes[ks][j];
        }
        r.nodes.push_back(v);
        // dt weight already carries the 1/2 s^{p/2}(1-s)^{n-2} Jacobian
        double w = circle.w[jc] * 0.5 * t_rule.w[it] * (sub ? sub->weights[ks] : 1.0);
        r.weights.push_back(w);
      }
    }
  }
  return r;
}

}  // namespace

SphereRule sphere_rule(int n, int res) {
  require(n >= 1, "sphere_rule: n >= 1");
  require(res >= 4, "sphere_rule: resolution >= 4");
  if (n == 1) {
    SphereRule r;
    r.n = 1;
    r.kind = RuleKind::plain;
    r.resolution = res;
    CircleRule c = CircleRule::equispaced(2 * res);
    r.circle_nodes = c.c;
    r.nt = 1;
    r.nsub = 1;
    for (std::size_t j = 0; j < c.c.size(); ++j) {
      CVec v(1);
      v[0] = c.c[j];
      r.nodes.push_back(v);
      r.weights.push_back(c.w[j]);
    }
    return r;
  }
  if (n >= 4) return monte_carlo_sphere_rule(n, 1u << 16, 0x5eed'0000u + n);
  CircleRule c = CircleRule::equispaced(2 * res);
  Rule1D t = gauss_jacobi01(res, 0.0, n - 2);
  SphereRule sub = sphere_rule(n - 1, n >= 3 ? std::max(4, res / 2) : res);
  return assemble_product(n, 0.0, RuleKind::plain, res, c, t, &sub);
}

SphereRule jacobi_sphere_rule(int n, double p, int res, const std::vector<double>& circle_breaks) {
  require(n >= 2, "jacobi_sphere_rule: n >= 2");
  require(p > -2.0 && p < 1.0, "jacobi_sphere_rule: p must lie in (-2, 1)");
  require(res >= 4, "jacobi_sphere_rule: resolution >= 4");
  CircleRule c = circle_breaks.empty() ? CircleRule::equispaced(2 * res)
                                       : CircleRule::paneled(circle_breaks, std::max(8, res / 2));
  Rule1D t = gauss_jacobi01(res, 0.5 * p, n - 2);
  SphereRule sub = sphere_rule(n - 1, n >= 3 ? std::max(4, res / 2) : res);
  return assemble_product(n, p, RuleKind::jacobi, res, c, t, &sub);
}

SphereRule monte_carlo_sphere_rule(int n, std::size_t count, std::uint64_t seed) {
  SphereRule r;
  r.n = n;
  r.kind = RuleKind::plain;
  r.resolution = static_cast<int>(count);
  Rng rng(seed);
  double w = sphere_area(2 * n) / static_cast<double>(count);
  r.nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    r.nodes.push_back(rng.unit_vector(n));
    r.weights.push_back(w);
  }
  r.nt = 1;
  r.nsub = 1;
  return r;
}

CMat unitary_to_e1(const CVec& u) {
  const int n = static_cast<int>(u.size());
  require(std::abs(u.norm() - 1.0) < 1e-12, "unitary_to_e1: input must be a unit vector");
  CMat Q(n, n);
  Q.col(0) = u;
  // Gram-Schmidt over coordinate seeds, skipping the one most parallel to u.
  int skip = 0;
  double best = -1.0;
  for (int j = 0; j < n; ++j)
    if (std::abs(u[j]) > best) {
      best = std::abs(u[j]);
      skip = j;
    }
  int col = 1;
  for (int j = 0; j < n && col < n; ++j) {
    if (j == skip) continue;
    CVec v = CVec::Zero(n);
    v[j] = 1.0;
    for (int k = 0; k < col; ++k) v -= cdot(v, Q.col(k)) * Q.col(k);
    double nv = v.norm();
    require(nv > 1e-8, "unitary_to_e1: degenerate basis completion");
    Q.col(col++) = v / nv;
  }
  return Q;
}

Eigen::MatrixXd real_orthobasis(const Eigen::VectorXd& u) {
  const int d = static_cast<int>(u.size());
  Eigen::MatrixXd Q(d, d);
  Q.col(0) = u / u.norm();
  int skip = 0;
  u.cwiseAbs().maxCoeff(&skip);
  int col = 1;
  for (int j = 0; j < d && col < d; ++j) {
    if (j == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v[j] = 1.0;
    for (int k = 0; k < col; ++k) v -= Q.col(k).dot(v) * Q.col(k);
    double nv = v.norm();
    if (nv < 1e-10) continue;
    Q.col(col++) = v / nv;
  }
  require(col == d, "real_orthobasis: completion failed");
  return Q;
}

namespace {

template <typename Acc, typename F>
auto integrate_impl(const SphereRule& rule, const F& f) {
  const std::size_t N = rule.nodes.size();
  constexpr int kChunks = 64;
  std::vector<Acc> partial(kChunks);
  std::vector<std::size_t> bad(kChunks, SIZE_MAX);
  parallel_chunks(N, [&](int chunk, std::size_t b, std::size_t e) {
    Acc acc;
    for (std::size_t i = b; i < e; ++i) {
      auto fi = f(rule.nodes[i]);
      if (!std::isfinite(std::abs(fi))) {
        bad[chunk] = std::min(bad[chunk], i);
        continue;
      }
      acc.add(rule.weights[i] * fi);
    }
    partial[chunk] = acc;
  }, kChunks);
  for (int k = 0; k < kChunks; ++k) {
    if (bad[k] != SIZE_MAX) {
      std::ostringstream os;
      os << "integrate: non-finite integrand at node " << bad[k];
      throw std::domain_error(os.str());
    }
  }
  Acc total;
  for (int k = 0; k < std::min<std::size_t>(kChunks, N); ++k) total.add(partial[k].value());
  return total.value();
}

}  // namespace

double integrate(const SphereRule& rule, const std::function<double(const CVec&)>& f) {
  return integrate_impl<KahanSum>(rule, f);
}

cplx integrate_c(const SphereRule& rule, const std::function<cplx(const CVec&)>& f) {
  return integrate_impl<KahanSumC>(rule, f);
}

namespace {

std::optional<std::filesystem::path> cache_dir() {
  const char* env = std::getenv("LPIB_CACHE_DIR");
  if (!env || !*env) return std::nullopt;
  return std::filesystem::path(env);
}

std::string cache_key(int n, double p, int res, RuleKind kind) {
  std::ostringstream os;
  os << "rule_n" << n << "_p" << p << "_r" << res << "_"
     << (kind == RuleKind::plain ? "plain" : "jacobi") << ".json";
  return os.str();
}

}  // namespace

std::optional<SphereRule> rule_cache_load(int n, double p, int res, RuleKind kind) {
  auto dir = cache_dir();
  if (!dir) return std::nullopt;
  std::ifstream in(*dir / cache_key(n, p, res, kind));
  if (!in) return std::nullopt;
  nlohmann::json j;
  in >> j;
  SphereRule r;
  r.n = j.at("n");
  r.p = j.at("p");
  r.kind = j.at("kind") == "jacobi" ? RuleKind::jacobi : RuleKind::plain;
  r.resolution = j.at("resolution");
  r.nt = j.at("nt");
  r.nsub = j.at("nsub");
  for (const auto& row : j.at("nodes")) {
    CVec v(r.n);
    for (int k = 0; k < r.n; ++k) v[k] = cplx(row[2 * k], row[2 * k + 1]);
    r.nodes.push_back(v);
  }
  r.weights = j.at("weights").get<std::vector<double>>();
  for (const auto& row : j.at("circle_nodes")) r.circle_nodes.push_back(cplx(row[0], row[1]));
  r.t_sin = j.at("t_sin").get<std::vector<double>>();
  r.t_cos = j.at("t_cos").get<std::vector<double>>();
  return r;
}

void rule_cache_store(const SphereRule& rule) {
  auto dir = cache_dir();
  if (!dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir, ec);
  nlohmann::json j;
  j["n"] = rule.n;
  j["p"] = rule.p;
  j["kind"] = rule.kind == RuleKind::jacobi ? "jacobi" : "plain";
  j["resolution"] = rule.resolution;
  j["nt"] = rule.nt;
  j["nsub"] = rule.nsub;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& v : rule.nodes) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < rule.n; ++k) {
      row.push_back(v[k].real());
      row.push_back(v[k].imag());
    }
    nodes.push_back(row);
  }
  j["weights"] = rule.weights;
  auto& cn = j["circle_nodes"] = nlohmann::json::array();
  for (const auto& c : rule.circle_nodes) cn.push_back({c.real(), c.imag()});
  j["t_sin"] = rule.t_sin;
  j["t_cos"] = rule.t_cos;
  std::ofstream out(*dir / cache_key(rule.n, rule.p, rule.resolution, rule.kind));
  out << j.dump();
}

}  // namespace lpib
