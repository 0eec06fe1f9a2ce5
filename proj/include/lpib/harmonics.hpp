#pragma once

#include "lpib/geometry.hpp"

namespace lpib {

// Q_l(a, b, .): the degree-l polynomial orthogonal on [0,1] with respect to
// the weight t^a (1-t)^b, normalized by Q_l(a, b, 1) = 1.
double jacobi_Q(int l, int a, int b, double t);

// Zonal harmonic of bi-degree (k, l) with pole e (default e_1), value 1 at the
// pole. Evaluates P_{k,l}(z) = z^{|k-l|} Q_{min(k,l)}(|k-l|, n-2, |z|^2) with
// the conjugate angular factor when l > k.
cplx zonal_eval(int k, int l, int n, const CVec& u);
cplx zonal_eval(int k, int l, int n, const CVec& u, const CVec& pole);

// Fourier coefficients in the convention c_0(g) = (1/2pi) int g dc and
// c_k(g) = (1/pi) int g(c) c^k dc for k != 0.
cplx fourier_coeff(const std::function<double(cplx)>& g, int k,
                   const std::vector<double>& kink_angles = {}, int per_panel = 48);

// c_k(h_C^p); the segment case absorbs the |cos|^p singularity into a
// Gauss-Jacobi rule. Requires p > -dim C.
cplx fourier_coeff_support_pow(const PlanarConvexBody& C, double p, int k);

// alpha^{(n,p)}_{k,l} of the kernel-transform multiplier formula, evaluated
// in the pole-free Pochhammer form pi^n (D)_k / (B)_{k+n-1} with
// D = (p-k-l)/2 + 1 and B = (p+l-k)/2 + 1.
double multiplier_alpha(int n, double p, int k, int l);

// Multiplier of the transform f -> int h_C(v.u)^p f(v) dv on the bi-degree
// (k, l) harmonics: 2 c_0(h_C^p) alpha for k = l, c_{k-l}(h_C^p) alpha else.
cplx multiplier_J(const PlanarConvexBody& C, double p, int n, int k, int l);

// Multiplier of the one-sided cosine transform with kernel (Re z)_+^p.
double multiplier_cosine(double p, int n, int k, int l);

// Multiplier of the complex spherical Radon transform: zero off the diagonal,
// (-1)^k 2 pi^{n-1} k!/(n+k-2)! on it.
double multiplier_radon(int n, int k);

struct EigenvalueEstimate {
  cplx value{};
  double spread = 0.0;  // max deviation across probe directions
  int used = 0;
};

enum class KernelFamily { support_pow, cosine_plus, radon };

struct KernelSpec {
  KernelFamily family = KernelFamily::support_pow;
  PlanarConvexBody C = PlanarConvexBody::disk(1.0);
  double p = 0.5;
};

// Numerical Funk-Hecke eigenvalue: applies the kernel transform to the
// (k, l) zonal harmonic at several seeded directions and averages the ratio
// (T Y)(u) / Y(u); the spread across directions is reported as a diagnostic.
EigenvalueEstimate funk_hecke_eigenvalue(const KernelSpec& kernel, int n, int k, int l,
                                         int res = 32, std::uint64_t seed = 7,
                                         int directions = 4);

}  // namespace lpib
