#include "lpib/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpib {

// ---------------------------------------------------------------------------
// PlanarConvexBody
// ---------------------------------------------------------------------------

void PlanarConvexBody::validate() const {
  // Sublinearity on sampled pairs and nonnegativity; done eagerly so kernel
  // quadrature downstream never sees a malformed support function.
  const int m = 48;
  for (int i = 0; i < m; ++i) {
    double a = 2.0 * M_PI * i / m;
    cplx ca(std::cos(a), std::sin(a));
    double h = h_(ca);
    require(std::isfinite(h) && h >= -1e-12, "support function must be nonnegative");
    if (origin_interior_) require(h > 1e-12, "origin-interior body needs h > 0 on S^1");
    for (int j = i + 1; j < m; j += 7) {
      double b = 2.0 * M_PI * j / m;
      cplx cb(std::cos(b), std::sin(b));
      require(h_(ca + cb) <= h_(ca) + h_(cb) + 1e-9, "support function must be sublinear");
    }
  }
}

PlanarConvexBody PlanarConvexBody::disk(double radius) {
  require(radius > 0, "disk radius must be positive");
  PlanarConvexBody b;
  b.h_ = [radius](cplx z) { return radius * std::abs(z); };
  b.dim_ = 2;
  b.origin_interior_ = true;
  b.symmetric_ = true;
  b.tag_ = "disk";
  b.meta_ = {{"type", "disk"}, {"radius", radius}};
  return b;
}

PlanarConvexBody PlanarConvexBody::segment(cplx w) {
  require(std::abs(w) > 0, "segment endpoint must be nonzero");
  PlanarConvexBody b;
  b.h_ = [w](cplx z) { return std::abs(w.real() * z.real() + w.imag() * z.imag()); };
  b.dim_ = 1;
  b.origin_interior_ = false;
  b.symmetric_ = true;
  double th = std::arg(w);
  b.kinks_ = {th + M_PI / 2, th - M_PI / 2};
  b.tag_ = "segment";
  b.meta_ = {{"type", "segment"}, {"endpoint", {w.real(), w.imag()}}};
  b.validate();
  return b;
}

PlanarConvexBody PlanarConvexBody::polygon(std::vector<cplx> vertices) {
  require(vertices.size() >= 3, "polygon needs at least 3 vertices");
  PlanarConvexBody b;
  auto vs = vertices;
  b.h_ = [vs](cplx z) {
    double best = -1e300;
    for (cplx v : vs) best = std::max(best, v.real() * z.real() + v.imag() * z.imag());
    return best;
  };
  b.dim_ = 2;
  b.origin_interior_ = true;
  // h is kinked where the maximizing vertex switches: at directions normal to
  // the edges.
  const int m = static_cast<int>(vs.size());
  for (int i = 0; i < m; ++i) {
    cplx e = vs[(i + 1) % m] - vs[i];
    cplx nrm(e.imag(), -e.real());  // outward for ccw vertices
    if (nrm.real() * vs[i].real() + nrm.imag() * vs[i].imag() < 0.0) nrm = -nrm;
    b.kinks_.push_back(std::arg(nrm));
  }
  bool sym = true;
  for (cplx v : vs) {
    bool found = false;
    for (cplx w : vs)
      if (std::abs(v + w) < 1e-12) found = true;
    sym = sym && found;
  }
  b.symmetric_ = sym;
  b.tag_ = "polygon";
  nlohmann::json verts = nlohmann::json::array();
  for (cplx v : vs) verts.push_back({v.real(), v.imag()});
  b.meta_ = {{"type", "polygon"}, {"vertices", verts}};
  b.validate();
  return b;
}

PlanarConvexBody PlanarConvexBody::square(double h) {
  // Vertices (+-h, +-h): support h(+-1) = h(+-i) = h.
  return polygon({cplx(h, h), cplx(-h, h), cplx(-h, -h), cplx(h, -h)});
}

PlanarConvexBody PlanarConvexBody::triangle() {
  std::vector<cplx> vs;
  for (int k = 0; k < 3; ++k)
    vs.push_back(std::polar(1.0, 2.0 * M_PI * k / 3.0));
  return polygon(vs);
}

PlanarConvexBody PlanarConvexBody::support_form(std::function<double(cplx)> h, std::string name,
                                                std::vector<double> kink_angles) {
  PlanarConvexBody b;
  b.h_ = std::move(h);
  b.dim_ = 2;
  b.origin_interior_ = true;
  b.kinks_ = std::move(kink_angles);
  b.tag_ = std::move(name);
  b.meta_ = {{"type", "support_form"}, {"name", b.tag_}};
  b.validate();
  double hmax = 0, hmin = 1e300;
  for (int i = 0; i < 64; ++i) {
    double v = b.h_(std::polar(1.0, 2.0 * M_PI * i / 64));
    hmax = std::max(hmax, v);
    hmin = std::min(hmin, v);
  }
  b.symmetric_ = true;
  for (int i = 0; i < 32; ++i) {
    cplx c = std::polar(1.0, 2.0 * M_PI * i / 32);
    if (std::abs(b.h_(c) - b.h_(-c)) > 1e-10 * hmax) b.symmetric_ = false;
  }
  return b;
}

double PlanarConvexBody::support(cplx z) const { return h_(z); }

bool PlanarConvexBody::origin_symmetric() const { return symmetric_; }

cplx PlanarConvexBody::segment_direction() const {
  require(dim_ == 1, "segment_direction: body is full-dimensional");
  double re = meta_.at("endpoint")[0], im = meta_.at("endpoint")[1];
  cplx w(re, im);
  return w / std::abs(w);
}

double PlanarConvexBody::segment_length_half() const {
  require(dim_ == 1, "segment_length_half: body is full-dimensional");
  double re = meta_.at("endpoint")[0], im = meta_.at("endpoint")[1];
  return std::abs(cplx(re, im));
}

PlanarConvexBody PlanarConvexBody::rotate(cplx c0) const {
  require(std::abs(std::abs(c0) - 1.0) < 1e-12, "rotate: phase must be unimodular");
  const std::string t = meta_.value("type", "");
  if (t == "disk") return *this;
  if (t == "segment") {
    double re = meta_.at("endpoint")[0], im = meta_.at("endpoint")[1];
    return segment(c0 * cplx(re, im));
  }
  if (t == "polygon") {
    std::vector<cplx> vs;
    for (const auto& v : meta_.at("vertices")) vs.push_back(c0 * cplx(v[0], v[1]));
    return polygon(vs);
  }
  auto h = h_;
  std::vector<double> kinks = kinks_;
  for (double& k : kinks) k += std::arg(c0);
  return support_form([h, c0](cplx z) { return h(std::conj(c0) * z); }, tag_ + "_rot", kinks);
}

nlohmann::json PlanarConvexBody::to_json() const {
  if (meta_.value("type", "") == "support_form")
    throw std::invalid_argument("support_form planar bodies do not serialize");
  return meta_;
}

PlanarConvexBody PlanarConvexBody::from_json(const nlohmann::json& j) {
  const std::string t = j.at("type");
  if (t == "disk") return disk(j.at("radius"));
  if (t == "segment") {
    auto e = j.at("endpoint");
    return segment(cplx(e[0], e[1]));
  }
  if (t == "polygon") {
    std::vector<cplx> vs;
    for (const auto& v : j.at("vertices")) vs.push_back(cplx(v[0], v[1]));
    return polygon(vs);
  }
  throw std::invalid_argument("unknown planar body type: " + t);
}

// ---------------------------------------------------------------------------
// PlanarStarBody
// ---------------------------------------------------------------------------

PlanarStarBody::PlanarStarBody(std::function<double(cplx)> rho, std::vector<double> kinks)
    : rho_(std::move(rho)), kinks_(std::move(kinks)) {
  for (int i = 0; i < 32; ++i) {
    double v = rho_(std::polar(1.0, 2.0 * M_PI * i / 32));
    require(std::isfinite(v) && v > 0, "planar radial function must be positive");
  }
}

double PlanarStarBody::radial(cplx c) const {
  double r = std::abs(c);
  require(r > 0, "radial of the zero direction");
  return rho_(c / r);
}

PlanarStarBody PlanarStarBody::rotate(cplx c0) const {
  auto f = rho_;
  std::vector<double> kinks = kinks_;
  for (double& k : kinks) k += std::arg(c0);
  return PlanarStarBody([f, c0](cplx c) { return f(std::conj(c0) * c); }, kinks);
}

PlanarStarBody polar_planar(const PlanarConvexBody& C) {
  require(C.origin_interior(), "polar body needs the origin interior");
  return PlanarStarBody([C](cplx c) { return 1.0 / C.support(c); }, C.kink_angles());
}

double convexity_margin_2d(const PlanarStarBody& body, int samples) {
  require(samples >= 16, "convexity probe needs at least 16 samples");
  std::vector<cplx> pts(samples);
  std::vector<double> rho(samples);
  for (int i = 0; i < samples; ++i) {
    cplx c = std::polar(1.0, 2.0 * M_PI * i / samples);
    rho[i] = body.radial(c);
    pts[i] = rho[i] * c;
  }
  double worst = 0.0;
  const int lam_steps = 7;
  for (int k = 2; k <= samples / 2; ++k) {
    for (int i = 0; i < samples; ++i) {
      cplx a = pts[i], b = pts[(i + k) % samples];
      for (int s = 1; s <= lam_steps; ++s) {
        double lam = static_cast<double>(s) / (lam_steps + 1);
        cplx x = (1.0 - lam) * a + lam * b;
        double r = std::abs(x);
        if (r < 1e-14) continue;
        double rb = body.radial(x);
        worst = std::min(worst, (rb - r) / rb);
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// SphereGrid
// ---------------------------------------------------------------------------

SphereGrid::SphereGrid(int n, int circle_nodes, int t_nodes) : n_(n), mc_(circle_nodes), mt_(t_nodes) {
  require(n >= 1, "grid needs n >= 1");
  require(circle_nodes >= 4, "grid circle axis too small");
  if (n >= 2) {
    require(t_nodes >= 4, "grid t axis too small");
    Rule1D g = gauss_jacobi01(t_nodes, 0.0, n - 2);
    s_nodes_ = g.x;
    s_weights_ = g.w;
    sub_ = std::make_shared<SphereGrid>(n - 1, n >= 3 ? std::max(4, circle_nodes / 2) : circle_nodes,
                                        std::max(4, t_nodes / (n >= 3 ? 2 : 1)));
  } else {
    mt_ = 1;
  }
}

std::size_t SphereGrid::size() const {
  if (n_ == 1) return mc_;
  return static_cast<std::size_t>(mc_) * mt_ * sub_->size();
}

CVec SphereGrid::node(std::size_t i) const {
  if (n_ == 1) {
    CVec v(1);
    v[0] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(i) / mc_);
    return v;
  }
  std::size_t nsub = sub_->size();
  std::size_t ic = i / (mt_ * nsub);
  std::size_t it = (i / nsub) % mt_;
  std::size_t is = i % nsub;
  double st = std::sqrt(s_nodes_[it]);
  double ct = std::sqrt(1.0 - s_nodes_[it]);
  CVec v(n_);
  v[0] = std::polar(st, 2.0 * M_PI * static_cast<double>(ic) / mc_);
  CVec w = sub_->node(is);
  for (int j = 0; j < n_ - 1; ++j) v[j + 1] = ct * w[j];
  return v;
}

double SphereGrid::weight(std::size_t i) const {
  if (n_ == 1) return 2.0 * M_PI / mc_;
  std::size_t nsub = sub_->size();
  std::size_t it = (i / nsub) % mt_;
  std::size_t is = i % nsub;
  return (2.0 * M_PI / mc_) * 0.5 * s_weights_[it] * sub_->weight(is);
}

namespace {

// 4-point Lagrange coefficients at x for nodes xs[i0..i0+3].
void lagrange4(const double* xs, double x, double* coeff) {
  for (int a = 0; a < 4; ++a) {
    double c = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      c *= (x - xs[b]) / (xs[a] - xs[b]);
    }
    coeff[a] = c;
  }
}

}  // namespace

// Order-3 tensor interpolation. The product chart degenerates where |u_1|
// is 0 or 1, so accuracy drops from h^4 to roughly h^3 inside those caps;
// precision-critical consumers evaluate transforms pointwise instead.
double SphereGrid::interpolate(const std::vector<double>& values, const CVec& u) const {
  require(values.size() == size(), "interpolate: value count mismatch");
  if (n_ == 1) {
    double th = std::arg(u[0]);
    double pos = th / (2.0 * M_PI) * mc_;
    int i1 = static_cast<int>(std::floor(pos));
    double xs[4], ys[4];
    for (int a = 0; a < 4; ++a) {
      int idx = i1 - 1 + a;
      xs[a] = static_cast<double>(idx);
      ys[a] = values[((idx % mc_) + mc_) % mc_];
    }
    double coeff[4];
    lagrange4(xs, pos, coeff);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) out += coeff[a] * ys[a];
    return out;
  }

  const std::size_t nsub = sub_->size();
  double s = std::min(1.0, std::norm(u[0]));
  double th = std::abs(u[0]) > 1e-14 ? std::arg(u[0]) : 0.0;

  // circle axis stencil
  double pos = th / (2.0 * M_PI) * mc_;
  int ic1 = static_cast<int>(std::floor(pos));
  double cxs[4], ccoef[4];
  int cidx[4];
  for (int a = 0; a < 4; ++a) {
    int idx = ic1 - 1 + a;
    cxs[a] = static_cast<double>(idx);
    cidx[a] = ((idx % mc_) + mc_) % mc_;
  }
  lagrange4(cxs, pos, ccoef);

  // t axis stencil on the s-nodes (clamped at the ends)
  int it0 = 0;
  {
    int lo = 0, hi = mt_ - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (s_nodes_[mid] < s)
        lo = mid + 1;
      else
        hi = mid;
    }
    it0 = std::clamp(lo - 2, 0, std::max(0, mt_ - 4));
  }
  int nt_st = std::min(4, mt_);
  double txs[4], tcoef[4] = {1, 0, 0, 0};
  for (int a = 0; a < nt_st; ++a) txs[a] = s_nodes_[it0 + a];
  if (nt_st == 4)
    lagrange4(txs, s, tcoef);
  else {
    for (int a = 0; a < nt_st; ++a) tcoef[a] = 1.0 / nt_st;
  }

  // w axis: recurse on the tail direction
  CVec tail(n_ - 1);
  double tail_norm = 0.0;
  for (int j = 0; j < n_ - 1; ++j) tail[j] = u[j + 1];
  tail_norm = tail.norm();
  if (tail_norm > 1e-14)
    tail /= tail_norm;
  else
    tail[0] = 1.0;

  double out = 0.0;
  std::vector<double> slice(nsub);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < nt_st; ++b) {
      std::size_t base = (static_cast<std::size_t>(cidx[a]) * mt_ + (it0 + b)) * nsub;
      std::copy(values.begin() + base, values.begin() + base + nsub, slice.begin());
      out += ccoef[a] * tcoef[b] * sub_->interpolate(slice, tail);
    }
  }
  return out;
}

nlohmann::json SphereGrid::to_json() const {
  nlohmann::json j = {{"n", n_}, {"circle_nodes", mc_}, {"t_nodes", n_ >= 2 ? mt_ : 0}};
  return j;
}

SphereGrid SphereGrid::from_json(const nlohmann::json& j) {
  int n = j.at("n");
  return SphereGrid(n, j.at("circle_nodes"), n >= 2 ? int(j.at("t_nodes")) : 1);
}

// ---------------------------------------------------------------------------
// StarBody
// ---------------------------------------------------------------------------

struct StarBody::Impl {
  int n = 1;
  std::string kind;
  nlohmann::json params;

  double radius = 1.0;                       // ball
  RMat T, Tinv;                              // linear_image
  CMat A, Ainv;                              // complex_linear_image
  std::shared_ptr<const Impl> inner;         // wrapped body
  std::function<double(const CVec&)> rho;    // radial_form
  std::shared_ptr<const SphereGrid> grid;    // tabulated
  std::vector<double> values;
  int s1_nodes = 0;                          // s1_average
  std::vector<cplx> s1_phases;

  double eval(const CVec& u) const {
    if (kind == "ball") return radius;
    if (kind == "linear_image") {
      RVec y = Tinv * to_real(u);
      double nrm = y.norm();
      CVec dir = to_cplx(RVec(y / nrm));
      return inner->eval(dir) / nrm;
    }
    if (kind == "complex_linear_image") {
      CVec y = Ainv * u;
      double nrm = y.norm();
      CVec dir = y / nrm;
      return inner->eval(dir) / nrm;
    }
    if (kind == "radial_form") return rho(u);
    if (kind == "tabulated") return grid->interpolate(values, u);
    if (kind == "s1_average") {
      // rho^{2n-2}(u) = (1/2pi) int rho^{2n-2}(cu) dc
      const double expo = 2.0 * n - 2.0;
      KahanSum acc;
      CVec cu(n);
      for (cplx c : s1_phases) {
        for (int j = 0; j < n; ++j) cu[j] = c * u[j];
        acc.add(std::pow(inner->eval(cu), expo));
      }
      return std::pow(acc.value() / s1_phases.size(), 1.0 / expo);
    }
    throw std::logic_error("unknown star body kind");
  }
};

StarBody StarBody::ball(int n, double radius) {
  require(n >= 1 && n <= kMaxDim, "ball: complex dimension out of range");
  require(radius > 0, "ball: radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->kind = "ball";
  impl->radius = radius;
  impl->params = {{"radius", radius}};
  return StarBody(impl);
}

namespace {

void validate_positive(const StarBody::Impl& impl, int n) {
  // coarse positivity sweep
  Rng rng(0xb0d7);
  for (int i = 0; i < 64; ++i) {
    CVec u = rng.unit_vector(n);
    double r = impl.eval(u);
    require(std::isfinite(r) && r > 0, "radial function must be positive and finite");
  }
}

}  // namespace

StarBody StarBody::linear_image(const RMat& T, const StarBody& inner) {
  auto impl = std::make_shared<Impl>();
  impl->n = inner.complex_dim();
  require(T.rows() == 2 * impl->n && T.cols() == 2 * impl->n,
          "linear_image: matrix must be 2n x 2n");
  impl->kind = "linear_image";
  impl->T = T;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
  require(lu.isInvertible(), "linear_image: matrix must be invertible");
  impl->Tinv = lu.inverse();
  impl->inner = inner.impl_;
  validate_positive(*impl, impl->n);
  return StarBody(impl);
}

StarBody StarBody::complex_linear_image(const CMat& A, const StarBody& inner) {
  auto impl = std::make_shared<Impl>();
  impl->n = inner.complex_dim();
  require(A.rows() == impl->n && A.cols() == impl->n,
          "complex_linear_image: matrix must be n x n");
  impl->kind = "complex_linear_image";
  impl->A = A;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  require(lu.isInvertible(), "complex_linear_image: matrix must be invertible");
  impl->Ainv = lu.inverse();
  impl->inner = inner.impl_;
  validate_positive(*impl, impl->n);
  return StarBody(impl);
}

StarBody StarBody::radial_form(int n, std::function<double(const CVec&)> rho, std::string name,
                               nlohmann::json params) {
  require(n >= 1 && n <= kMaxDim, "radial_form: dimension out of range");
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->kind = "radial_form";
  impl->rho = std::move(rho);
  impl->params = std::move(params);
  impl->params["name"] = name;
  validate_positive(*impl, n);
  return StarBody(impl);
}

StarBody StarBody::tabulated(std::shared_ptr<const SphereGrid> grid, std::vector<double> values) {
  require(grid != nullptr, "tabulated: grid required");
  require(values.size() == grid->size(), "tabulated: sample count mismatch");
  for (double v : values) require(std::isfinite(v) && v > 0, "tabulated samples must be positive");
  auto impl = std::make_shared<Impl>();
  impl->n = grid->n();
  impl->kind = "tabulated";
  impl->grid = std::move(grid);
  impl->values = std::move(values);
  return StarBody(impl);
}

StarBody StarBody::s1_average(const StarBody& inner, int circle_nodes) {
  require(inner.complex_dim() >= 2, "s1_average: needs n >= 2");
  require(circle_nodes >= 8, "s1_average: too few circle nodes");
  auto impl = std::make_shared<Impl>();
  impl->n = inner.complex_dim();
  impl->kind = "s1_average";
  impl->inner = inner.impl_;
  impl->s1_nodes = circle_nodes;
  impl->s1_phases.resize(circle_nodes);
  for (int j = 0; j < circle_nodes; ++j)
    impl->s1_phases[j] = std::polar(1.0, 2.0 * M_PI * j / circle_nodes);
  impl->params = {{"circle_nodes", circle_nodes}};
  return StarBody(impl);
}

StarBody StarBody::lq_ball(int n, double q) {
  require(q > 0, "lq_ball: exponent must be positive");
  return radial_form(
      n,
      [q](const CVec& u) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < u.size(); ++j) s += std::pow(std::abs(u[j]), q);
        return std::pow(s, -1.0 / q);
      },
      "lq_ball", {{"q", q}});
}

int StarBody::complex_dim() const { return impl_->n; }

double StarBody::radial(const CVec& u) const {
  require(u.size() == impl_->n, "radial: dimension mismatch");
  require(std::abs(u.norm() - 1.0) <= 1e-12, "radial: direction must be a unit vector");
  return impl_->eval(u);
}

double StarBody::radial_dir(const CVec& x) const {
  double nrm = x.norm();
  require(nrm > 1e-300, "radial_dir: zero vector");
  CVec u = x / nrm;
  return impl_->eval(u) / nrm;
}

bool StarBody::is_tabulated() const { return impl_->kind == "tabulated"; }
const SphereGrid* StarBody::grid() const {
  return impl_->kind == "tabulated" ? impl_->grid.get() : nullptr;
}
const std::vector<double>& StarBody::values() const {
  require(impl_->kind == "tabulated", "values: body is not tabulated");
  return impl_->values;
}

std::string StarBody::describe() const {
  std::ostringstream os;
  os << impl_->kind << "(n=" << impl_->n << ")";
  return os.str();
}

double volume(const StarBody& K, const SphereRule& rule) {
  require(rule.n == K.complex_dim(), "volume: rule dimension mismatch");
  const int d = 2 * K.complex_dim();
  double integral = integrate(rule, [&](const CVec& v) { return std::pow(K.radial(v), d); });
  return integral / d;
}

double volume(const StarBody& K, int res) {
  return volume(K, sphere_rule(K.complex_dim(), res));
}

StarBody tabulate(const StarBody& K, std::shared_ptr<const SphereGrid> grid) {
  require(grid->n() == K.complex_dim(), "tabulate: grid dimension mismatch");
  std::vector<double> vals(grid->size());
  parallel_chunks(grid->size(), [&](int, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = K.radial(grid->node(i));
  });
  return StarBody::tabulated(std::move(grid), std::move(vals));
}

StarBody perturbed_body(int n, std::uint64_t seed, double eps, bool invariant) {
  require(eps >= 0.0 && eps <= 0.45, "perturbed_body: eps too large for positivity");
  Rng rng(seed);
  const int terms = 3;
  std::vector<CVec> as, bs;
  std::vector<cplx> cs;
  for (int i = 0; i < terms; ++i) {
    as.push_back(rng.unit_vector(n));
    bs.push_back(rng.unit_vector(n));
    cs.push_back(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  }
  auto raw = [=](const CVec& u) {
    cplx s = 0.0;
    for (int i = 0; i < terms; ++i) {
      cplx za = cdot(u, as[i]);
      cplx zb = cdot(u, bs[i]);
      s += invariant ? cs[i] * za * std::conj(zb) : cs[i] * za * zb;
    }
    return s.real();
  };
  // normalize the bump to sup <= 1 on a probe set
  double sup = 1e-12;
  Rng probe(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 512; ++i) sup = std::max(sup, std::abs(raw(probe.unit_vector(n))));
  const double scale = eps / sup;
  nlohmann::json params = {{"seed", seed}, {"eps", eps}, {"invariant", invariant}};
  return StarBody::radial_form(
      n, [raw, scale](const CVec& u) { return 1.0 + scale * raw(u); }, "perturbed", params);
}

CMat random_complex_matrix(int n, std::uint64_t seed, double scale) {
  Rng rng(seed);
  CMat A = CMat::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A(r, c) += scale * cplx(rng.gaussian(), rng.gaussian());
  return A;
}

// ---------------------------------------------------------------------------
// Body-spec serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json cplx_pair(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

nlohmann::json StarBody::to_json() const {
  const Impl& im = *impl_;
  nlohmann::json j;
  if (im.kind == "ball") {
    j = {{"type", "ball"}, {"radius", im.radius}};
  } else if (im.kind == "linear_image") {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < im.T.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < im.T.cols(); ++c) row.push_back(im.T(r, c));
      rows.push_back(row);
    }
    j = {{"type", "linear_image"}, {"matrix", rows}, {"inner", StarBody(im.inner).to_json()}};
  } else if (im.kind == "complex_linear_image") {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < im.A.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < im.A.cols(); ++c) row.push_back(cplx_pair(im.A(r, c)));
      rows.push_back(row);
    }
    j = {{"type", "complex_linear_image"},
         {"matrix", rows},
         {"inner", StarBody(im.inner).to_json()}};
  } else if (im.kind == "radial_form") {
    const std::string name = im.params.value("name", "");
    if (name != "lq_ball" && name != "perturbed")
      throw std::invalid_argument("radial form '" + name +
                                  "' does not serialize; tabulate it first");
    j = im.params;
    j["type"] = "radial_form";
  } else if (im.kind == "tabulated") {
    j = {{"type", "tabulated"}, {"grid", im.grid->to_json()}, {"values", im.values}};
  } else if (im.kind == "s1_average") {
    j = {{"type", "s1_average"},
         {"circle_nodes", im.s1_nodes},
         {"inner", StarBody(im.inner).to_json()}};
  } else {
    throw std::logic_error("unknown body kind: " + im.kind);
  }
  return j;
}

StarBody StarBody::from_json(const nlohmann::json& j) {
  return from_json_dim(j, -1);
}

StarBody StarBody::from_json_dim(const nlohmann::json& j, int n_hint) {
  const std::string t = j.at("type");
  if (t == "ball") {
    require(n_hint >= 1, "ball spec needs the ambient dimension");
    return ball(n_hint, j.at("radius"));
  }
  if (t == "linear_image") {
    const auto& rows = j.at("matrix");
    int d = static_cast<int>(rows.size());
    StarBody inner = from_json_dim(j.at("inner"), d / 2);
    RMat T(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) T(r, c) = rows[r][c];
    return linear_image(T, inner);
  }
  if (t == "complex_linear_image") {
    const auto& rows = j.at("matrix");
    int n = static_cast<int>(rows.size());
    StarBody inner = from_json_dim(j.at("inner"), n);
    CMat A(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) A(r, c) = cplx(rows[r][c][0], rows[r][c][1]);
    return complex_linear_image(A, inner);
  }
  if (t == "radial_form") {
    const std::string name = j.at("name");
    require(n_hint >= 1, "radial form spec needs the ambient dimension");
    if (name == "lq_ball") return lq_ball(n_hint, j.at("q"));
    if (name == "perturbed")
      return perturbed_body(n_hint, j.at("seed").get<std::uint64_t>(), j.at("eps"),
                            j.at("invariant"));
    throw std::invalid_argument("unknown radial form: " + name);
  }
  if (t == "tabulated") {
    auto grid = std::make_shared<SphereGrid>(SphereGrid::from_json(j.at("grid")));
    return tabulated(grid, j.at("values").get<std::vector<double>>());
  }
  if (t == "s1_average") {
    nlohmann::json inner_spec = j.at("inner");
    StarBody inner = from_json_dim(inner_spec, n_hint);
    return s1_average(inner, j.at("circle_nodes"));
  }
  throw std::invalid_argument("unknown body type: " + t);
}

}  // namespace lpib
