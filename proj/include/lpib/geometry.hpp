#pragma once

#include "lpib/quadrature.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace lpib {

// ---------------------------------------------------------------------------
// Planar bodies (subsets of C ~ R^2)
// ---------------------------------------------------------------------------

// Convex body C in the complex plane, given by its support function
// h_C(z) = sup { <x, z> : x in C }. These parametrize the kernels h_C(v.u)^p.
class PlanarConvexBody {
 public:
  static PlanarConvexBody disk(double radius);
  // Segment [-w, w] through the origin.
  static PlanarConvexBody segment(cplx w);
  // Convex polygon with the origin in its interior; vertices counterclockwise.
  static PlanarConvexBody polygon(std::vector<cplx> vertices);
  static PlanarConvexBody square(double h = 1.0);  // h(+-1) = h(+-i) = h
  // Equilateral triangle with vertices at unit distance, centroid at origin.
  static PlanarConvexBody triangle();
  static PlanarConvexBody support_form(std::function<double(cplx)> h, std::string name,
                                       std::vector<double> kink_angles = {});

  double support(cplx z) const;  // h_C(z), 1-homogeneous
  int dim() const { return dim_; }
  bool origin_interior() const { return origin_interior_; }
  bool origin_symmetric() const;

  // Angles at which h_C is not smooth on S^1 (polygon vertex switches,
  // segment zeros); quadrature panels split here.
  const std::vector<double>& kink_angles() const { return kinks_; }
  // For dim C = 1 only: unit direction of the segment.
  cplx segment_direction() const;
  double segment_length_half() const;

  PlanarConvexBody rotate(cplx c0) const;  // h_{c0 C}(c) = h_C(conj(c0) c)

  const std::string& tag() const { return tag_; }
  nlohmann::json to_json() const;
  static PlanarConvexBody from_json(const nlohmann::json& j);

 private:
  PlanarConvexBody() = default;
  std::function<double(cplx)> h_;
  int dim_ = 2;
  bool origin_interior_ = true;
  bool symmetric_ = false;
  std::vector<double> kinks_;
  std::string tag_;
  nlohmann::json meta_;
  void validate() const;
};

// Planar star body given by a positive radial function on S^1.
class PlanarStarBody {
 public:
  PlanarStarBody(std::function<double(cplx)> rho, std::vector<double> kinks = {});
  double radial(cplx c) const;  // c need not be unit; 1-homogeneous gauge applies
  const std::vector<double>& kink_angles() const { return kinks_; }
  PlanarStarBody rotate(cplx c0) const;  // rho_{c0 P}(c) = rho_P(conj(c0) c)

 private:
  std::function<double(cplx)> rho_;
  std::vector<double> kinks_;
};

// rho_{C^o} = 1/h_C; requires the origin interior to C.
PlanarStarBody polar_planar(const PlanarConvexBody& C);

// Chord-membership convexity probe of the planar set {r rho(c) c : r <= 1}.
// Returns the most negative relative margin over sampled chords; >= 0 for a
// convex profile.
double convexity_margin_2d(const PlanarStarBody& body, int samples);

// ---------------------------------------------------------------------------
// Sphere grid for tabulated bodies
// ---------------------------------------------------------------------------

// Product grid on S^{2n-1} in the coordinates v = (c sin t, w cos t): an
// equispaced circle in the phase c, Gauss nodes in s = sin^2 t and a
// recursive grid for w. The grid doubles as a plain quadrature rule, and
// off-node queries use 4-point (order 3) barycentric interpolation per axis.
class SphereGrid {
 public:
  SphereGrid(int n, int circle_nodes, int t_nodes);
  int n() const { return n_; }
  std::size_t size() const;
  CVec node(std::size_t i) const;
  double weight(std::size_t i) const;
  double interpolate(const std::vector<double>& values, const CVec& u) const;

  int circle_count() const { return mc_; }
  int t_count() const { return mt_; }
  const SphereGrid* sub() const { return sub_.get(); }

  nlohmann::json to_json() const;
  static SphereGrid from_json(const nlohmann::json& j);

 private:
  int n_, mc_, mt_;
  std::vector<double> s_nodes_, s_weights_;
  std::shared_ptr<SphereGrid> sub_;
};

// ---------------------------------------------------------------------------
// Star bodies in C^n ~ R^{2n}
// ---------------------------------------------------------------------------

// Immutable star body with positive continuous radial function; evaluation is
// pure and thread-safe.
class StarBody {
 public:
  static StarBody ball(int n, double radius);
  // Image under an invertible real 2n x 2n matrix (interleaved coordinates).
  static StarBody linear_image(const RMat& T, const StarBody& inner);
  static StarBody complex_linear_image(const CMat& A, const StarBody& inner);
  static StarBody radial_form(int n, std::function<double(const CVec&)> rho, std::string name,
                              nlohmann::json params = nlohmann::json::object());
  static StarBody tabulated(std::shared_ptr<const SphereGrid> grid, std::vector<double> values);
  // K^{S1}: rho^{2n-2}(u) = (1/2pi) int rho_K^{2n-2}(cu) dc, by circle rule.
  static StarBody s1_average(const StarBody& inner, int circle_nodes = 64);
  // l_q unit ball { sum |z_j|^q <= 1 } (S^1-invariant, convex for q >= 1).
  static StarBody lq_ball(int n, double q);

  int complex_dim() const;
  // Radial function at a unit vector (|u| = 1 within 1e-12).
  double radial(const CVec& u) const;
  // Gauge extension to arbitrary nonzero x: radial(x/|x|)/|x| is 1/||x||_K.
  double radial_dir(const CVec& x) const;

  bool is_tabulated() const;
  const SphereGrid* grid() const;
  const std::vector<double>& values() const;

  std::string describe() const;
  nlohmann::json to_json() const;
  static StarBody from_json(const nlohmann::json& j);
  static StarBody from_json_dim(const nlohmann::json& j, int n_hint);

  struct Impl;

 private:
  explicit StarBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Polar-coordinate volume (1/2n) int rho^{2n} dv on the given rule.
double volume(const StarBody& K, const SphereRule& rule);
double volume(const StarBody& K, int res = 16);

// Samples the body onto the grid.
StarBody tabulate(const StarBody& K, std::shared_ptr<const SphereGrid> grid);

// Seeded star body rho = 1 + eps * f with f a low-order harmonic built from
// complex pairings; |f| <= 1. S^1-invariant generators use phase-free
// pairings. Reconstructible from (n, seed, eps, invariant).
StarBody perturbed_body(int n, std::uint64_t seed, double eps, bool invariant);

// Seeded well-conditioned complex matrix, I + scale * G.
CMat random_complex_matrix(int n, std::uint64_t seed, double scale);

}  // namespace lpib
