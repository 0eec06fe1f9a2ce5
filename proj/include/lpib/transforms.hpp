#pragma once

#include "lpib/geometry.hpp"

namespace lpib {

struct TransformOptions {
  int res = 32;           // kernel-rule resolution (circle = 2*res, t = res)
  int out_circle = 32;    // tabulation grid circle axis
  int out_t = 16;         // tabulation grid t axis
  int circle_nodes = 64;  // S^1 averages and planar integrals
};

using SphereFn = std::function<double(const CVec&)>;
using SphereFnC = std::function<cplx(const CVec&)>;

// (J_{C,p} f)(u) = int_{S^{2n-1}} h_C(v.u)^p f(v) dv for -dim C < p < 1,
// p != 0. Computed on the e_1-adapted rule with the radial part of the kernel
// singularity absorbed into Gauss-Jacobi weights; the circle factor is
// paneled at the kink angles of h_C. Strictly positive for positive f.
double eval_J(const PlanarConvexBody& C, double p, const SphereFn& f, const CVec& u,
              const TransformOptions& opt = {});
cplx eval_J_c(const PlanarConvexBody& C, double p, const SphereFnC& f, const CVec& u,
              const TransformOptions& opt = {});

// Symmetric real p-cosine integral int |<v, dir>|^p f(v) dv over S^{2n-1}
// (|dir| need not be 1; homogeneity is applied). For p in (-1, 1) \ {0}; the
// |x|^p factor on the polar angle is absorbed by a Gauss-Jacobi rule.
double real_cosine_integral(double p, const SphereFn& f, const CVec& dir, int n,
                            const TransformOptions& opt = {});
cplx real_cosine_integral_c(double p, const SphereFnC& f, const CVec& dir, int n,
                            const TransformOptions& opt = {});

// One-sided version with kernel (<v, dir>)_+^p, p > -1.
cplx cosine_plus_integral_c(double p, const SphereFnC& f, const CVec& dir, int n,
                            const TransformOptions& opt = {});

// rho_{I_{C,p} K}^{-p} = (1/(2n+p)) J_{C,p}(rho_K^{2n+p}); lazily evaluated.
// Segments route through the real-kernel path via h_{Cu}(x) = |<x, wu>|.
StarBody complex_lp_intersection_body(const PlanarConvexBody& C, double p, const StarBody& K,
                                      const TransformOptions& opt = {});

// rho_{I_p K}^{-p}(u) = int_K |<x,u>|^p dx for p in (-1,1) \ {0}. At p = -1
// the classical intersection body rho(u) = V_{2n-1}(K cap u^perp) is returned.
StarBody real_lp_intersection_body(double p, const StarBody& K,
                                   const TransformOptions& opt = {});

// Classical intersection body of a star body in R^{2n}.
StarBody classical_intersection_body(const StarBody& K, const TransformOptions& opt = {});

// (R_c f)(u) = int_{S^{2n-1} cap {v.u = 0}} f dv over the unit sphere of the
// complex hyperplane orthogonal to u.
double complex_radon(const SphereFn& f, const CVec& u, const TransformOptions& opt = {});
cplx complex_radon_c(const SphereFnC& f, const CVec& u, const TransformOptions& opt = {});

// rho_{I_c K}(u) = ((1/((2n-2) pi)) R_c rho_K^{2n-2}(u))^{1/2}; the result is
// S^1-invariant by construction.
StarBody complex_intersection_body(const StarBody& K, const TransformOptions& opt = {});

// Exact substitution path for ellipsoids E = T B^{2n} (real-linear invertible
// T): J_{C,p}(rho_E^{2n+p})(u) = |det T| int h_C((T y).u)^p dy, integrated on
// a rule adapted to the 2-plane where the kernel argument lives.
double eval_J_ellipsoid(const PlanarConvexBody& C, double p, const RMat& T, const CVec& u,
                        const TransformOptions& opt = {});

// Complex parallel section function A(z) = V_{2n-2}(K cap {x.u = z}).
// For z != 0 requires a convex K (sections star-shaped about the foot point).
class SectionProfile {
 public:
  SectionProfile(StarBody K, CVec u, bool convex, const TransformOptions& opt = {});
  double operator()(cplx z) const;
  double support_radius() const { return radius_; }

 private:
  StarBody K_;
  CVec u_;
  CMat frame_;  // columns: u, basis of u^{perp, C}
  bool convex_;
  double radius_;
  TransformOptions opt_;
};

SectionProfile section_profile(const StarBody& K, const CVec& u, bool convex = true,
                               const TransformOptions& opt = {});

// M^{Re,+,u}_{p,v}(K, z) = int_{v^+ cap (K cap H_{u,z})} Re(x.v)^p dx, p >= 0.
double section_moment_asym(const StarBody& K, double p, const CVec& v, const CVec& u, cplx z,
                           const TransformOptions& opt = {});

// M^{|.|,u}_{2,w}(K, z) = int_{K cap H_{u,z}} |x.w|^2 dx.
double section_moment_sym(const StarBody& K, const CVec& w, const CVec& u, cplx z,
                          const TransformOptions& opt = {});

// Finite-part integral int_0^inf r^q (Phi(r) - Phi(0) - r Phi'(0)) dr for
// q in (-3, -2), for even compactly supported Phi that is smooth near zero
// (Phi'(0) = 0 is validated). R bounds the support.
double finite_part_moment(double q, const std::function<double(double)>& Phi, double R);

// Tabulates any star body onto the default output grid of opt.
StarBody tabulate_body(const StarBody& K, const TransformOptions& opt = {});

std::shared_ptr<const SphereGrid> output_grid(int n, const TransformOptions& opt);

}  // namespace lpib
