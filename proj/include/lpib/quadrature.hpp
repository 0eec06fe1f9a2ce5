#pragma once

#include "lpib/numeric.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lpib {

// Nodes and weights of a one-dimensional rule.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss rule for the weight s^a (1-s)^b on [0,1], computed by Golub-Welsch
// from the Jacobi recurrence coefficients. Requires a, b > -1.
Rule1D gauss_jacobi01(int m, double a, double b);

// Gauss-Legendre on [lo, hi].
Rule1D gauss_legendre(int m, double lo, double hi);

// Rule on S^1: sum_j w_j f(c_j) approximates the arclength integral.
struct CircleRule {
  std::vector<cplx> c;
  std::vector<double> w;

  static CircleRule equispaced(int m);
  // Composite Gauss panels split at the given angles (radians); integrands
  // only need to be smooth inside each panel.
  static CircleRule paneled(std::vector<double> breaks, int per_panel);
};

// Rule on the real sphere S^{d-1} in R^d (recursive polar product).
struct RealSphereRule {
  int dim = 0;  // ambient d
  std::vector<RVec> nodes;
  std::vector<double> weights;
};
RealSphereRule real_sphere_rule(int d, int res);

enum class RuleKind { plain, jacobi };

// Product rule on S^{2n-1} from the split v = (c sin t, w cos t) with c in S^1
// (phase of the first complex coordinate), w in S^{2n-3} and t in (0, pi/2).
// The t-direction carries the Gauss rule for (1/2) s^{p/2} (1-s)^{n-2} ds,
// s = sin^2 t, so the jacobi kind absorbs a |v . e_1|^p kernel factor into
// its weights: integrands are supplied WITHOUT that factor.
struct SphereRule {
  int n = 1;
  double p = 0.0;
  RuleKind kind = RuleKind::plain;
  int resolution = 0;
  std::vector<CVec> nodes;
  std::vector<double> weights;
  // Factor data retained so kernel transforms can pull circle-dependent
  // factors out of the inner loops: node index = (ic * nt + it) * nsub + isub.
  std::vector<cplx> circle_nodes;
  std::vector<double> t_sin, t_cos;
  std::size_t nt = 0, nsub = 0;

  double total_weight() const {
    KahanSum s;
    for (double w : weights) s.add(w);
    return s.value();
  }
};

// Plain product rule; total weight converges to |S^{2n-1}|. For n >= 4 the
// grid is replaced by a seeded Monte Carlo rule (product grids explode).
SphereRule sphere_rule(int n, int res);

// Kernel-adapted rule for integrals of f(v) |v . e_1|^p over S^{2n-1},
// -2 < p < 1. The circle factor may be paneled at the given break angles.
SphereRule jacobi_sphere_rule(int n, double p, int res,
                              const std::vector<double>& circle_breaks = {});

SphereRule monte_carlo_sphere_rule(int n, std::size_t count, std::uint64_t seed);

// Unitary matrix with Theta e_1 = u (|u| = 1).
CMat unitary_to_e1(const CVec& u);

// Orthonormal basis of the real orthogonal complement of the unit vector
// u in R^d, as columns 1..d-1 of the returned matrix (column 0 is u).
Eigen::MatrixXd real_orthobasis(const Eigen::VectorXd& u);

// Deterministic compensated quadrature sum; evaluation order is fixed by the
// 64-way chunking, so results do not depend on the number of threads. Throws
// std::domain_error naming the offending node if f returns a non-finite value.
double integrate(const SphereRule& rule, const std::function<double(const CVec&)>& f);
cplx integrate_c(const SphereRule& rule, const std::function<cplx(const CVec&)>& f);

// Optional on-disk rule cache (JSON), keyed by (n, p, resolution, kind).
// Looks at the directory in the LPIB_CACHE_DIR environment variable; no-ops
// when unset.
std::optional<SphereRule> rule_cache_load(int n, double p, int res, RuleKind kind);
void rule_cache_store(const SphereRule& rule);

}  // namespace lpib
