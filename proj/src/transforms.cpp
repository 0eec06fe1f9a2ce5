#include "lpib/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace lpib {

namespace {

// Kernel rule for J_{C,p}: flattened (circle x t x sub) nodes in the e_1
// frame together with the per-node factor h_C(c)^p. Cached per (C-tag, p, n,
// res) since transforms evaluate at many output directions.
struct KernelRule {
  std::vector<CVec> nodes;        // e_1-adapted directions
  std::vector<double> wh;         // weight * h_C(c)^p
};

KernelRule build_kernel_rule(const PlanarConvexBody& C, double p, int n, int res) {
  SphereRule base = jacobi_sphere_rule(n, p, res, C.kink_angles());
  KernelRule kr;
  const std::size_t block = base.nt * base.nsub;
  kr.nodes = base.nodes;
  kr.wh.resize(base.weights.size());
  for (std::size_t i = 0; i < base.weights.size(); ++i) {
    cplx c = base.circle_nodes[i / block];
    kr.wh[i] = base.weights[i] * std::pow(C.support(c), p);
  }
  return kr;
}

struct KernelKey {
  std::string tag;
  double p;
  int n, res;
  bool operator<(const KernelKey& o) const {
    return std::tie(tag, p, n, res) < std::tie(o.tag, o.p, o.n, o.res);
  }
};

std::shared_ptr<const KernelRule> cached_kernel_rule(const PlanarConvexBody& C, double p, int n,
                                                     int res) {
  static std::map<KernelKey, std::shared_ptr<const KernelRule>> cache;
  static std::mutex mu;
  std::string id;
  try {
    id = C.to_json().dump();
  } catch (const std::exception&) {
    // support_form bodies have no stable identity; skip the cache
    return std::make_shared<KernelRule>(build_kernel_rule(C, p, n, res));
  }
  KernelKey key{id, p, n, res};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<KernelRule>(build_kernel_rule(C, p, n, res))).first;
  }
  return it->second;
}

std::shared_ptr<const SphereRule> cached_sphere_rule(int n, int res) {
  static std::map<std::pair<int, int>, std::shared_ptr<const SphereRule>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, res);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_shared<SphereRule>(sphere_rule(n, res))).first;
  return it->second;
}

std::shared_ptr<const RealSphereRule> cached_real_sphere_rule(int d, int res) {
  static std::map<std::pair<int, int>, std::shared_ptr<const RealSphereRule>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, res);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_shared<RealSphereRule>(real_sphere_rule(d, res))).first;
  return it->second;
}

void check_J_range(const PlanarConvexBody& C, double p) {
  require(p != 0.0, "kernel exponent p = 0 is excluded");
  require(p < 1.0, "kernel exponent must satisfy p < 1");
  require(p > -C.dim(), "kernel exponent must exceed -dim C");
  require(C.dim() == 1 || C.origin_interior(), "kernel body needs 0 in its relative interior");
}

template <typename Acc, typename F>
auto eval_J_impl(const PlanarConvexBody& C, double p, const F& f, const CVec& u,
                 const TransformOptions& opt) {
  const int n = static_cast<int>(u.size());
  require(std::abs(u.norm() - 1.0) < 1e-12, "eval_J: direction must be a unit vector");

  if (C.dim() == 1) {
    // h_{Cu}(x) = |<x, w u>|: route through the real-kernel path.
    require(p > -1.0, "segment kernels need p > -1");
    cplx w = C.segment_direction();
    double len = C.segment_length_half();
    CVec dir = u;
    for (int j = 0; j < n; ++j) dir[j] = w * u[j];
    if constexpr (std::is_same_v<Acc, KahanSumC>)
      return std::pow(len, p) * real_cosine_integral_c(p, f, dir, n, opt);
    else
      return std::pow(len, p) * real_cosine_integral(p, f, dir, n, opt);
  }

  auto krp = cached_kernel_rule(C, p, n, opt.res);
  const KernelRule& kr = *krp;
  CMat Q = unitary_to_e1(u);

  constexpr int kChunks = 64;
  std::vector<Acc> partial(kChunks);
  parallel_chunks(kr.nodes.size(), [&](int chunk, std::size_t b, std::size_t e) {
    Acc acc;
    CVec x(n);
    for (std::size_t i = b; i < e; ++i) {
      x.noalias() = Q * kr.nodes[i];
      acc.add(kr.wh[i] * f(x));
    }
    partial[chunk] = acc;
  }, kChunks);
  Acc total;
  for (int k = 0; k < std::min<std::size_t>(kChunks, kr.nodes.size()); ++k)
    total.add(partial[k].value());
  return total.value();
}

}  // namespace

double eval_J(const PlanarConvexBody& C, double p, const SphereFn& f, const CVec& u,
              const TransformOptions& opt) {
  check_J_range(C, p);
  return eval_J_impl<KahanSum>(C, p, f, u, opt);
}

cplx eval_J_c(const PlanarConvexBody& C, double p, const SphereFnC& f, const CVec& u,
              const TransformOptions& opt) {
  check_J_range(C, p);
  return eval_J_impl<KahanSumC>(C, p, f, u, opt);
}

// ---------------------------------------------------------------------------
// Real-kernel rule: v = x uhat + sqrt(1-x^2) xi with xi in S^{2n-2}(uhat^perp)
// and |x|^p (1-x^2)^{(2n-3)/2} dx absorbed via s = x^2.
// ---------------------------------------------------------------------------

namespace {

struct RealKernelRule {
  std::vector<double> xs;     // signed polar coordinate nodes
  std::vector<double> w;      // combined weights (kernel factor absorbed)
  std::shared_ptr<const RealSphereRule> sub;  // rule on S^{2n-2}
};

// one_sided: only x > 0 nodes (kernel (x)_+^p).
RealKernelRule build_real_kernel_rule(double p, int n, int res, bool one_sided) {
  RealKernelRule rr;
  const int d = 2 * n;
  // int_{-1}^{1} |x|^p (1-x^2)^{(d-3)/2} g(x) dx
  //   = (1/2) int_0^1 s^{(p-1)/2} (1-s)^{(d-3)/2} [g(sqrt s) + g(-sqrt s)] ds
  Rule1D g = gauss_jacobi01(res, 0.5 * (p - 1.0), 0.5 * (d - 3.0));
  for (int i = 0; i < res; ++i) {
    double x = std::sqrt(g.x[i]);
    rr.xs.push_back(x);
    rr.w.push_back(0.5 * g.w[i]);
    if (!one_sided) {
      rr.xs.push_back(-x);
      rr.w.push_back(0.5 * g.w[i]);
    }
  }
  rr.sub = cached_real_sphere_rule(d - 1, std::max(6, res));
  return rr;
}

const RealKernelRule& cached_real_kernel_rule(double p, int n, int res, bool one_sided) {
  static std::map<std::tuple<double, int, int, bool>, std::shared_ptr<const RealKernelRule>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, n, res, one_sided);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, std::make_shared<const RealKernelRule>(
                               build_real_kernel_rule(p, n, res, one_sided)))
             .first;
  return *it->second;
}

template <typename Acc, typename F>
auto real_cosine_impl(double p, const F& f, const CVec& dir, int n, const TransformOptions& opt,
                      bool one_sided) {
  const double len = dir.norm();
  require(len > 0, "cosine integral: zero direction");
  const int d = 2 * n;
  const RealKernelRule& rr = cached_real_kernel_rule(p, n, opt.res, one_sided);
  Eigen::VectorXd u = to_real(dir).head(d) / len;
  Eigen::MatrixXd B = real_orthobasis(u);
  const RealSphereRule& sub = *rr.sub;

  const std::size_t nx = rr.xs.size();
  const std::size_t ns = sub.nodes.size();
  constexpr int kChunks = 64;
  std::vector<Acc> partial(kChunks);
  parallel_chunks(nx * ns, [&](int chunk, std::size_t bb, std::size_t ee) {
    Acc acc;
    RVec v(d);
    CVec vc(n);
    for (std::size_t idx = bb; idx < ee; ++idx) {
      std::size_t i = idx / ns, k = idx % ns;
      double x = rr.xs[i];
      double st = std::sqrt(std::max(0.0, 1.0 - x * x));
      for (int r = 0; r < d; ++r) {
        double comp = x * u[r];
        for (int c = 1; c < d; ++c) comp += st * B(r, c) * sub.nodes[k][c - 1];
        v[r] = comp;
      }
      vc = to_cplx(v);
      acc.add(rr.w[i] * sub.weights[k] * f(vc));
    }
    partial[chunk] = acc;
  }, kChunks);
  Acc total;
  for (int k = 0; k < std::min<std::size_t>(kChunks, nx * ns); ++k) total.add(partial[k].value());
  return std::pow(len, p) * total.value();
}

}  // namespace

double real_cosine_integral(double p, const SphereFn& f, const CVec& dir, int n,
                            const TransformOptions& opt) {
  require(p > -1.0 && p < 1.0 && p != 0.0, "real cosine kernel needs p in (-1,1) \\ {0}");
  return real_cosine_impl<KahanSum>(p, f, dir, n, opt, false);
}

cplx real_cosine_integral_c(double p, const SphereFnC& f, const CVec& dir, int n,
                            const TransformOptions& opt) {
  require(p > -1.0 && p < 1.0 && p != 0.0, "real cosine kernel needs p in (-1,1) \\ {0}");
  return real_cosine_impl<KahanSumC>(p, f, dir, n, opt, false);
}

cplx cosine_plus_integral_c(double p, const SphereFnC& f, const CVec& dir, int n,
                            const TransformOptions& opt) {
  require(p > -1.0 && p != 0.0, "one-sided cosine kernel needs p > -1");
  return real_cosine_impl<KahanSumC>(p, f, dir, n, opt, true);
}

// ---------------------------------------------------------------------------
// Intersection bodies
// ---------------------------------------------------------------------------

std::shared_ptr<const SphereGrid> output_grid(int n, const TransformOptions& opt) {
  return std::make_shared<SphereGrid>(n, opt.out_circle, opt.out_t);
}

StarBody tabulate_body(const StarBody& K, const TransformOptions& opt) {
  return tabulate(K, output_grid(K.complex_dim(), opt));
}

StarBody complex_lp_intersection_body(const PlanarConvexBody& C, double p, const StarBody& K,
                                      const TransformOptions& opt) {
  check_J_range(C, p);
  const int n = K.complex_dim();
  const double expo = 2.0 * n + p;
  auto rho_pow = [K, expo](const CVec& v) { return std::pow(K.radial(v), expo); };
  nlohmann::json params = {{"transform", "complex_lp_intersection"},
                           {"p", p},
                           {"kernel", C.to_json()},
                           {"source", K.describe()}};
  return StarBody::radial_form(
      n,
      [C, p, rho_pow, expo, opt](const CVec& u) {
        double val = eval_J(C, p, rho_pow, u, opt) / expo;
        return std::pow(val, -1.0 / p);
      },
      "complex_lp_intersection", params);
}

StarBody classical_intersection_body(const StarBody& K, const TransformOptions& opt) {
  const int n = K.complex_dim();
  const int d = 2 * n;
  require(d >= 2, "intersection body needs dimension >= 2");
  auto sub = cached_real_sphere_rule(d - 1, std::max(8, opt.res));
  return StarBody::radial_form(
      n,
      [K, sub, d](const CVec& u) {
        // V_{d-1}(K cap u^perp) = (1/(d-1)) int_{S^{d-2}(u^perp)} rho^{d-1}
        Eigen::VectorXd ur = to_real(u).head(d);
        Eigen::MatrixXd B = real_orthobasis(ur / ur.norm());
        KahanSum acc;
        RVec v(d);
        for (std::size_t k = 0; k < sub->nodes.size(); ++k) {
          for (int r = 0; r < d; ++r) {
            double comp = 0.0;
            for (int c = 1; c < d; ++c) comp += B(r, c) * sub->nodes[k][c - 1];
            v[r] = comp;
          }
          acc.add(sub->weights[k] * std::pow(K.radial(to_cplx(v)), d - 1));
        }
        return acc.value() / (d - 1);
      },
      "classical_intersection", {{"transform", "classical_intersection"}});
}

StarBody real_lp_intersection_body(double p, const StarBody& K, const TransformOptions& opt) {
  require(p != 0.0, "real intersection kernel excludes p = 0");
  require(p >= -1.0 && p < 1.0, "real intersection kernel needs p in [-1, 1)");
  if (p == -1.0) return classical_intersection_body(K, opt);
  const int n = K.complex_dim();
  const double expo = 2.0 * n + p;
  auto rho_pow = [K, expo](const CVec& v) { return std::pow(K.radial(v), expo); };
  return StarBody::radial_form(
      n,
      [p, rho_pow, expo, n, opt](const CVec& u) {
        double val = real_cosine_integral(p, rho_pow, u, n, opt) / expo;
        return std::pow(val, -1.0 / p);
      },
      "real_lp_intersection", {{"transform", "real_lp_intersection"}, {"p", p}});
}

namespace {

// Integral over the unit sphere of u^{perp, C} with a plain S^{2n-3} rule.
template <typename Acc, typename F>
auto radon_impl(const F& f, const CVec& u, const TransformOptions& opt) {
  const int n = static_cast<int>(u.size());
  require(n >= 2, "complex radon transform needs n >= 2");
  require(std::abs(u.norm() - 1.0) < 1e-12, "radon: direction must be a unit vector");
  CMat Q = unitary_to_e1(u);
  const SphereRule& sub = *cached_sphere_rule(n - 1, std::max(8, opt.res));
  Acc acc;
  CVec x(n);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    x.setZero();
    for (int col = 1; col < n; ++col) x += Q.col(col) * sub.nodes[i][col - 1];
    acc.add(sub.weights[i] * f(x));
  }
  return acc.value();
}

}  // namespace

double complex_radon(const SphereFn& f, const CVec& u, const TransformOptions& opt) {
  return radon_impl<KahanSum>(f, u, opt);
}

cplx complex_radon_c(const SphereFnC& f, const CVec& u, const TransformOptions& opt) {
  return radon_impl<KahanSumC>(f, u, opt);
}

StarBody complex_intersection_body(const StarBody& K, const TransformOptions& opt) {
  const int n = K.complex_dim();
  require(n >= 2, "complex intersection body needs n >= 2");
  const double expo = 2.0 * n - 2.0;
  auto rho_pow = [K, expo](const CVec& v) { return std::pow(K.radial(v), expo); };
  return StarBody::radial_form(
      n,
      [rho_pow, expo, opt](const CVec& u) {
        double val = complex_radon(rho_pow, u, opt) / (expo * M_PI);
        return std::sqrt(val);
      },
      "complex_intersection", {{"transform", "complex_intersection"}});
}

// ---------------------------------------------------------------------------
// Ellipsoid substitution path
// ---------------------------------------------------------------------------

double eval_J_ellipsoid(const PlanarConvexBody& C, double p, const RMat& T, const CVec& u,
                        const TransformOptions& opt) {
  check_J_range(C, p);
  require(C.dim() == 2, "ellipsoid path expects a full-dimensional kernel body");
  const int n = static_cast<int>(u.size());
  const int d = 2 * n;
  require(T.rows() == d && T.cols() == d, "eval_J_ellipsoid: matrix must be 2n x 2n");

  // (T y).u = <y, T' u> + i <y, T'(iu)>; the kernel argument lives in the
  // 2-plane spanned by alpha, beta.
  CVec iu = u;
  for (int j = 0; j < n; ++j) iu[j] *= cplx(0.0, 1.0);
  Eigen::VectorXd alpha = T.transpose() * to_real(u).head(d);
  Eigen::VectorXd beta = T.transpose() * to_real(iu).head(d);

  Eigen::VectorXd g1 = alpha / alpha.norm();
  Eigen::VectorXd g2 = beta - g1.dot(beta) * g1;
  require(g2.norm() > 1e-12, "eval_J_ellipsoid: degenerate kernel plane");
  g2 /= g2.norm();

  // z0(phi) = <g(phi), alpha> + i <g(phi), beta> traces an origin-enclosing
  // ellipse; panel the circle where arg z0 crosses a kink angle of h_C.
  double a11 = g1.dot(alpha), a21 = g2.dot(alpha);
  double b1 = g1.dot(beta), b2 = g2.dot(beta);
  auto z0 = [&](double phi) {
    double cp = std::cos(phi), sp = std::sin(phi);
    return cplx(cp * a11 + sp * a21, cp * b1 + sp * b2);
  };
  std::vector<double> breaks;
  const auto& kinks = C.kink_angles();
  if (!kinks.empty()) {
    const int scan = 512;
    auto angdiff = [](double x) {
      while (x > M_PI) x -= 2 * M_PI;
      while (x < -M_PI) x += 2 * M_PI;
      return x;
    };
    for (double kang : kinks) {
      double prev = angdiff(std::arg(z0(0.0)) - kang);
      for (int i = 1; i <= scan; ++i) {
        double phi = 2.0 * M_PI * i / scan;
        double cur = angdiff(std::arg(z0(phi)) - kang);
        if (prev * cur <= 0.0 && std::abs(prev - cur) < M_PI) {
          double lo = 2.0 * M_PI * (i - 1) / scan, hi = phi;
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (angdiff(std::arg(z0(mid)) - kang) * prev <= 0.0)
              hi = mid;
            else
              lo = mid;
          }
          breaks.push_back(0.5 * (lo + hi));
        }
        prev = cur;
      }
    }
  }
  CircleRule circ = breaks.empty() ? CircleRule::equispaced(2 * opt.res)
                                   : CircleRule::paneled(breaks, std::max(12, opt.res / 2));

  // Kernel h_C((Ty).u)^p = sin(t)^p h_C(z0(phi))^p; the t and w directions
  // only contribute their weight sums since the remaining integrand is 1.
  Rule1D t = gauss_jacobi01(opt.res, 0.5 * p, n - 2);
  KahanSum tsum;
  for (double w : t.w) tsum.add(0.5 * w);
  double wsub = sphere_area(2 * n - 2);

  KahanSum csum;
  for (std::size_t j = 0; j < circ.c.size(); ++j) {
    double phi = std::arg(circ.c[j]);
    csum.add(circ.w[j] * std::pow(C.support(z0(phi)), p));
  }
  double detT = std::abs(Eigen::MatrixXd(T).determinant());
  return detT * csum.value() * tsum.value() * wsub;
}

// ---------------------------------------------------------------------------
// Sections and moments
// ---------------------------------------------------------------------------

namespace {

// Largest r >= 0 with base + r * dir in K (gauge bisection; the gauge is
// quasi-convex along the ray for convex K).
double ray_reach(const StarBody& K, const CVec& base, const CVec& dir) {
  auto gauge = [&](double r) {
    CVec x = base + r * dir;
    double nx = x.norm();
    if (nx < 1e-14) return 0.0;
    return 1.0 / K.radial_dir(x);  // |x| / rho(x/|x|)
  };
  double hi = 1.0;
  while (gauge(hi) < 1.0 && hi < 1e6) hi *= 2.0;
  if (hi >= 1e6) throw std::domain_error("ray_reach: unbounded ray");
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gauge(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// Gauge of K at an arbitrary point (<= 1 inside the body).
static double gauge_at(const StarBody& K, const CVec& x) {
  double nx = x.norm();
  if (nx < 1e-14) return 0.0;
  return 1.0 / K.radial_dir(x);
}

// Minimizes the K-gauge over the affine section plane foot + span(plane
// columns); convexity of the gauge makes plain descent reliable. Returns the
// minimizer and the attained gauge.
static std::pair<CVec, double> section_center(const StarBody& K, const CVec& foot,
                                              const CMat& frame) {
  const int n = K.complex_dim();
  const int m = 2 * (n - 1);  // real degrees of freedom in the plane
  Eigen::VectorXd zeta = Eigen::VectorXd::Zero(m);
  auto point = [&](const Eigen::VectorXd& c) {
    CVec x = foot;
    for (int j = 0; j < n - 1; ++j) x += cplx(c[2 * j], c[2 * j + 1]) * frame.col(j + 1);
    return x;
  };
  auto value = [&](const Eigen::VectorXd& c) { return gauge_at(K, point(c)); };
  double f = value(zeta);
  double step = 0.25;
  const double h = 1e-6;
  for (int it = 0; it < 200 && step > 1e-12; ++it) {
    Eigen::VectorXd g(m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd cp = zeta, cm = zeta;
      cp[j] += h;
      cm[j] -= h;
      g[j] = (value(cp) - value(cm)) / (2 * h);
    }
    double gn = g.norm();
    if (gn < 1e-11) break;
    bool moved = false;
    while (step > 1e-12) {
      Eigen::VectorXd cand = zeta - (step / gn) * g;
      double fc = value(cand);
      if (fc < f - 1e-15) {
        zeta = cand;
        f = fc;
        moved = true;
        step *= 1.3;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {point(zeta), f};
}

SectionProfile::SectionProfile(StarBody K, CVec u, bool convex, const TransformOptions& opt)
    : K_(std::move(K)), u_(std::move(u)), convex_(convex), opt_(opt) {
  require(K_.complex_dim() >= 2, "section profile needs n >= 2");
  require(std::abs(u_.norm() - 1.0) < 1e-12, "section profile: unit direction required");
  frame_ = unitary_to_e1(u_);
  radius_ = 0.0;
  SphereRule probe = sphere_rule(K_.complex_dim(), 8);
  for (const auto& v : probe.nodes) radius_ = std::max(radius_, K_.radial(v));
  radius_ *= 1.0000001;
}

double SectionProfile::operator()(cplx z) const {
  const int n = K_.complex_dim();
  if (std::abs(z) > radius_) return 0.0;
  if (!convex_ && std::abs(z) > 1e-12)
    throw std::invalid_argument("section profile of a non-convex body is served at z = 0 only");
  // Slice {zu + y : y in u^{perp,C}}. The foot zu may fall outside K while
  // the section is nonempty; integrate radially about the in-plane gauge
  // minimizer instead.
  CVec foot = z * u_;
  CVec center = foot;
  if (std::abs(z) > 1e-12) {
    auto [c, gmin] = section_center(K_, foot, frame_);
    if (gmin >= 1.0 - 1e-12) return 0.0;
    center = c;
  }
  const SphereRule& sub = *cached_sphere_rule(n - 1, std::max(8, opt_.res / 2));
  KahanSum acc;
  CVec dir(n);
  const int dsec = 2 * n - 2;
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    dir.setZero();
    for (int col = 1; col < n; ++col) dir += frame_.col(col) * sub.nodes[i][col - 1];
    double r = std::abs(z) < 1e-12 ? K_.radial(dir) : ray_reach(K_, center, dir);
    acc.add(sub.weights[i] * std::pow(r, dsec));
  }
  return acc.value() / dsec;
}

SectionProfile section_profile(const StarBody& K, const CVec& u, bool convex,
                               const TransformOptions& opt) {
  return SectionProfile(K, u, convex, opt);
}

namespace {

void check_not_complex_span(const CVec& v, const CVec& u) {
  // v in span_C{u} iff v - (v.u)u vanishes
  CVec res = v - cdot(v, u) * u;
  require(res.norm() > 1e-10 * v.norm(), "direction must avoid the complex line of u");
}

}  // namespace

double section_moment_asym(const StarBody& K, double p, const CVec& v, const CVec& u, cplx z,
                           const TransformOptions& opt) {
  require(p >= 0.0, "asymmetric section moment needs p >= 0");
  const int n = K.complex_dim();
  require(std::abs(u.norm() - 1.0) < 1e-12, "section moment: unit u required");
  check_not_complex_span(v, u);

  CMat frame = unitary_to_e1(u);
  CVec foot = z * u;
  CVec center = foot;
  if (std::abs(z) > 1e-12) {
    auto [c, gmin] = section_center(K, foot, frame);
    if (gmin >= 1.0 - 1e-12) return 0.0;
    center = c;
  }
  const SphereRule& sub = *cached_sphere_rule(n - 1, std::max(8, opt.res / 2));
  const int dsec = 2 * n - 2;
  const cplx base_val = cdot(center, v);
  KahanSum acc;
  CVec dir(n);
  Rule1D gl = gauss_legendre(24, 0.0, 1.0);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    dir.setZero();
    for (int col = 1; col < n; ++col) dir += frame.col(col) * sub.nodes[i][col - 1];
    double reach = ray_reach(K, center, dir);
    if (reach <= 0.0) continue;
    // Re(x.v) = a + r b along x = foot + r dir; split the radial integral at
    // the sign change so each Gauss panel sees a smooth integrand.
    double a = base_val.real();
    double b = cdot(dir, v).real();
    auto radial_part = [&](double lo, double hi) {
      if (hi <= lo) return;
      KahanSum seg;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        double r = lo + (hi - lo) * gl.x[q];
        double lin = a + r * b;
        if (lin <= 0.0) continue;
        seg.add((hi - lo) * gl.w[q] * std::pow(lin, p) * std::pow(r, dsec - 1));
      }
      acc.add(sub.weights[i] * seg.value());
    };
    double rstar = (std::abs(b) > 1e-300) ? -a / b : -1.0;
    if (rstar > 0.0 && rstar < reach) {
      radial_part(0.0, rstar);
      radial_part(rstar, reach);
    } else {
      radial_part(0.0, reach);
    }
  }
  return acc.value();
}

double section_moment_sym(const StarBody& K, const CVec& w, const CVec& u, cplx z,
                          const TransformOptions& opt) {
  const int n = K.complex_dim();
  require(std::abs(u.norm() - 1.0) < 1e-12, "section moment: unit u required");
  check_not_complex_span(w, u);
  CMat frame = unitary_to_e1(u);
  CVec foot = z * u;
  CVec center = foot;
  if (std::abs(z) > 1e-12) {
    auto [c, gmin] = section_center(K, foot, frame);
    if (gmin >= 1.0 - 1e-12) return 0.0;
    center = c;
  }
  const SphereRule& sub = *cached_sphere_rule(n - 1, std::max(8, opt.res / 2));
  const int dsec = 2 * n - 2;
  const cplx a = cdot(center, w);
  KahanSum acc;
  CVec dir(n);
  Rule1D gl = gauss_legendre(16, 0.0, 1.0);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    dir.setZero();
    for (int col = 1; col < n; ++col) dir += frame.col(col) * sub.nodes[i][col - 1];
    double reach = ray_reach(K, center, dir);
    if (reach <= 0.0) continue;
    cplx b = cdot(dir, w);
    KahanSum seg;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      double r = reach * gl.x[q];
      seg.add(reach * gl.w[q] * std::norm(a + r * b) * std::pow(r, dsec - 1));
    }
    acc.add(sub.weights[i] * seg.value());
  }
  return acc.value();
}

double finite_part_moment(double q, const std::function<double(double)>& Phi, double R) {
  require(q > -3.0 && q < -2.0, "finite part exponent must lie in (-3, -2)");
  require(R > 0, "finite part: support bound must be positive");
  const double phi0 = Phi(0.0);
  // Phi must be even near zero: check the one-sided derivative.
  const double h = 1e-5 * R;
  double d1 = (Phi(h) - phi0) / h;
  double scale = std::max({std::abs(phi0), std::abs(Phi(0.5 * R)), 1e-30});
  require(std::abs(d1) < 1e-3 * scale / R + 1e-6 * scale,
          "finite part: Phi'(0) must vanish (Phi even)");

  const double eps = 0.05 * R;
  // [0, eps]: r^q (Phi - Phi(0)) = r^{q+2} psi(r), psi smooth; Gauss-Jacobi in
  // r/eps with weight x^{q+2}.
  Rule1D gj = gauss_jacobi01(48, q + 2.0, 0.0);
  KahanSum head;
  for (std::size_t i = 0; i < gj.x.size(); ++i) {
    double r = eps * gj.x[i];
    double psi = (Phi(r) - phi0) / (r * r);
    head.add(std::pow(eps, q + 3.0) * gj.w[i] * psi);
  }
  // [eps, R]: plain quadrature on r^q (Phi - Phi(0)).
  Rule1D gl = gauss_legendre(96, eps, R);
  KahanSum mid;
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    double r = gl.x[i];
    mid.add(gl.w[i] * std::pow(r, q) * (Phi(r) - phi0));
  }
  // [R, inf): Phi vanishes; the subtracted term integrates in closed form.
  double tail = phi0 * std::pow(R, q + 1.0) / (q + 1.0);
  return head.value() + mid.value() + tail;
}

}  // namespace lpib
