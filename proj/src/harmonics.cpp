#include "lpib/harmonics.hpp"

#include "lpib/transforms.hpp"

#include <cmath>

namespace lpib {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double jacobi_Q(int l, int a, int b, double t) {
  require(l >= 0 && a >= 0 && b >= 0, "jacobi_Q: nonnegative parameters expected");
  // Shifted Jacobi polynomial, exact binomial expansion, normalized at t = 1:
  // Q_l = sum_j C(l+b, l-j) C(l+a, j) (-1)^j (1-t)^j t^{l-j} / C(l+b, l).
  long double acc = 0.0L;
  long double one_minus = 1.0L - static_cast<long double>(t);
  for (int j = 0; j <= l; ++j) {
    long double term = static_cast<long double>(binom(l + b, l - j)) *
                       static_cast<long double>(binom(l + a, j));
    term *= std::pow(one_minus, j) * std::pow(static_cast<long double>(t), l - j);
    acc += (j % 2 == 0) ? term : -term;
  }
  return static_cast<double>(acc / static_cast<long double>(binom(l + b, l)));
}

cplx zonal_eval(int k, int l, int n, const CVec& u) {
  CVec pole = CVec::Zero(n);
  pole[0] = 1.0;
  return zonal_eval(k, l, n, u, pole);
}

cplx zonal_eval(int k, int l, int n, const CVec& u, const CVec& pole) {
  require(k >= 0 && l >= 0, "zonal_eval: bi-degree must be nonnegative");
  require(n >= 2, "zonal_eval: n >= 2");
  require(std::abs(u.norm() - 1.0) < 1e-10, "zonal_eval: unit vector expected");
  cplx z = cdot(u, pole);
  int m = k - l;
  cplx ang = m >= 0 ? std::pow(z, m) : std::pow(std::conj(z), -m);
  double t = std::min(1.0, std::norm(z));
  return ang * jacobi_Q(std::min(k, l), std::abs(m), n - 2, t);
}

cplx fourier_coeff(const std::function<double(cplx)>& g, int k,
                   const std::vector<double>& kink_angles, int per_panel) {
  CircleRule rule = kink_angles.empty() ? CircleRule::equispaced(4 * per_panel)
                                        : CircleRule::paneled(kink_angles, per_panel);
  KahanSumC acc;
  for (std::size_t j = 0; j < rule.c.size(); ++j) {
    cplx c = rule.c[j];
    double gv = g(c);
    require(std::isfinite(gv), "fourier_coeff: integrand must be finite");
    acc.add(rule.w[j] * gv * std::pow(c, k));
  }
  double norm = (k == 0) ? 1.0 / (2.0 * M_PI) : 1.0 / M_PI;
  return norm * acc.value();
}

cplx fourier_coeff_support_pow(const PlanarConvexBody& C, double p, int k) {
  require(p > -C.dim(), "fourier_coeff_support_pow: p must exceed -dim C");
  require(p < 1.0 && p != 0.0, "fourier_coeff_support_pow: p in (-dim C, 1) \\ {0}");
  if (C.dim() == 2) {
    return fourier_coeff([&C, p](cplx c) { return std::pow(C.support(c), p); }, k,
                         C.kink_angles());
  }
  // Segment [-w, w]: h(c)^p = |w|^p |cos(psi)|^p with psi measured from the
  // segment direction. int |cos psi|^p e^{ik psi} dpsi reduces to a
  // Gauss-Jacobi integral in s = sin^2 psi on the quarter circle.
  cplx wdir = C.segment_direction();
  double len = C.segment_length_half();
  if (k % 2 != 0) return 0.0;
  Rule1D gj = gauss_jacobi01(64, -0.5, 0.5 * (p - 1.0));
  KahanSum quarter;  // int_0^{pi/2} cos^p(psi) cos(k psi) dpsi
  for (std::size_t i = 0; i < gj.x.size(); ++i) {
    double s = gj.x[i];
    double psi = std::asin(std::sqrt(s));
    quarter.add(0.5 * gj.w[i] * std::cos(k * psi));
  }
  double full = 4.0 * quarter.value();  // even k: 2 (1 + (-1)^k) = 4
  // c_k(g(conj(w0) c)) = w0^k c_k(g) for the rotated kernel
  double norm = (k == 0) ? 1.0 / (2.0 * M_PI) : 1.0 / M_PI;
  return std::pow(len, p) * std::pow(wdir, k) * norm * full;
}

double multiplier_alpha(int n, double p, int k, int l) {
  require(p > -2.0 && p < 1.0 && p != 0.0, "multiplier_alpha: p in (-2,1) \\ {0}");
  // pi^n (D)_k / (B)_{k+n-1}, D = (p-k-l)/2 + 1, B = (p+l-k)/2 + 1; the
  // Pochhammer form keeps all gamma poles cancelled.
  double D = 0.5 * (p - k - l) + 1.0;
  double B = 0.5 * (p + l - k) + 1.0;
  double num = 1.0;
  for (int i = 0; i < k; ++i) num *= (D + i);
  double den = 1.0;
  for (int i = 0; i < k + n - 1; ++i) den *= (B + i);
  return std::pow(M_PI, n) * num / den;
}

cplx multiplier_J(const PlanarConvexBody& C, double p, int n, int k, int l) {
  require(p > -C.dim() && p < 1.0 && p != 0.0, "multiplier_J: p out of range");
  double alpha = multiplier_alpha(n, p, k, l);
  if (k == l) return 2.0 * alpha * fourier_coeff_support_pow(C, p, 0);
  return alpha * fourier_coeff_support_pow(C, p, k - l);
}

double multiplier_cosine(double p, int n, int k, int l) {
  require(p > -1.0 && p != 0.0, "multiplier_cosine: p > -1 required");
  // (pi^n / 2^p) Gamma(p+1) / (Gamma(n + (p+k+l)/2) Gamma((p-k-l)/2 + 1))
  double a = n + 0.5 * (p + k + l);
  double b = 0.5 * (p - k - l) + 1.0;
  // 1/Gamma at its poles gives a vanishing multiplier.
  auto inv_gamma = [](double x) {
    if (x > 0.0) return std::exp(-std::lgamma(x));
    double r = std::round(x);
    if (std::abs(x - r) < 1e-13 && r <= 0.0) return 0.0;
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return std::exp(std::lgamma(1.0 - x)) * std::sin(M_PI * x) / M_PI;
  };
  return std::pow(M_PI, n) * std::pow(2.0, -p) * std::tgamma(p + 1.0) * inv_gamma(a) *
         inv_gamma(b);
}

double multiplier_radon(int n, int k) {
  require(n >= 2 && k >= 0, "multiplier_radon: n >= 2, k >= 0");
  double v = 2.0 * std::pow(M_PI, n - 1);
  // k! / (n+k-2)!
  double ratio = std::exp(std::lgamma(k + 1.0) - std::lgamma(n + k - 1.0));
  return (k % 2 == 0 ? 1.0 : -1.0) * v * ratio;
}

EigenvalueEstimate funk_hecke_eigenvalue(const KernelSpec& kernel, int n, int k, int l, int res,
                                         std::uint64_t seed, int directions) {
  require(n >= 2, "funk_hecke_eigenvalue: n >= 2");
  TransformOptions opt;
  opt.res = res;
  Rng rng(seed);
  EigenvalueEstimate out;
  std::vector<cplx> vals;
  int attempts = 0;
  while (static_cast<int>(vals.size()) < directions && attempts < 64 * directions) {
    ++attempts;
    CVec u = rng.unit_vector(n);
    cplx Yu = zonal_eval(k, l, n, u);
    if (std::abs(Yu) < 0.1) continue;  // degenerate probe; retry at fresh u
    SphereFnC f = [k, l, n](const CVec& v) { return zonal_eval(k, l, n, v); };
    cplx Tv;
    switch (kernel.family) {
      case KernelFamily::support_pow:
        Tv = eval_J_c(kernel.C, kernel.p, f, u, opt);
        break;
      case KernelFamily::cosine_plus:
        Tv = cosine_plus_integral_c(kernel.p, f, u, n, opt);
        break;
      case KernelFamily::radon:
        Tv = complex_radon_c(f, u, opt);
        break;
    }
    vals.push_back(Tv / Yu);
  }
  require(!vals.empty(), "funk_hecke_eigenvalue: no nondegenerate probe directions found");
  KahanSumC mean;
  for (cplx v : vals) mean.add(v);
  out.value = mean.value() / static_cast<double>(vals.size());
  out.used = static_cast<int>(vals.size());
  double spread = 0.0;
  for (cplx v : vals) spread = std::max(spread, std::abs(v - out.value));
  out.spread = spread;
  return out;
}

}  // namespace lpib
