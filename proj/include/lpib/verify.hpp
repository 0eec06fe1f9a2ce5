#pragma once

#include "lpib/transforms.hpp"

#include <string>
#include <vector>

namespace lpib {

// One theorem-check outcome. pass is recomputable from the stored discrepancy
// and tolerance (margin checks store the signed margin as the discrepancy and
// pass when it stays above -tolerance).
struct Report {
  std::string name;
  nlohmann::json params;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool margin_check = false;  // pass iff discrepancy >= -tolerance
  bool pass = false;
  double wall_ms = 0.0;
  nlohmann::json provenance;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  std::string summary_line() const;
};

struct CheckConfig {
  std::uint64_t seed = 20240915;
  int res = 32;            // kernel rule resolution
  int res_volume = 8;      // plain rule for volumes
  int grid_circle = 24;    // comparison grid axes
  int grid_t = 12;
  int corpus_size = 50;
  bool quick = false;      // trimmed parameter sets for smoke runs
};

// Named checks; each returns one or more reports.
std::vector<Report> check_multiplier_agreement(const CheckConfig& cfg);
std::vector<Report> check_radon_multipliers(const CheckConfig& cfg);
std::vector<Report> check_segment_reduction(const CheckConfig& cfg);
std::vector<Report> check_invariant_ratio(const CheckConfig& cfg);
std::vector<Report> check_radon_limit(const CheckConfig& cfg);
std::vector<Report> check_volume_ratio(const CheckConfig& cfg);
std::vector<Report> check_busemann(const CheckConfig& cfg);
std::vector<Report> check_circle_representation(const CheckConfig& cfg);
std::vector<Report> check_levi(const CheckConfig& cfg);
std::vector<Report> check_laplacian_identity(const CheckConfig& cfg);
std::vector<Report> check_ellipsoid_counterexample(const CheckConfig& cfg);
std::vector<Report> check_kernel_constancy(const CheckConfig& cfg);
std::vector<Report> check_contravariance(const CheckConfig& cfg);
std::vector<Report> check_moment_lemmas(const CheckConfig& cfg);

// Registry for the CLI: name -> runner.
std::vector<std::string> check_names();
std::vector<Report> run_check(const std::string& name, const CheckConfig& cfg);
std::vector<Report> run_all_checks(const CheckConfig& cfg);

// Ellipsoid sequence item of the counterexample construction: E_{j, b_j} with
// the normalization residual of int rho^{2n+p} = 1.
struct EllipsoidItem {
  int j = 0;
  double b = 0.0;
  double residual = 0.0;
};
EllipsoidItem solve_ellipsoid_normalization(int n, double p, int j);
RMat ellipsoid_matrix(int n, double a, double b);

// Boundary Levi margin of rho^{-1} - 1 for the body I_{D,p}K at a sample of
// boundary points; used by the pseudo-convexity suite.
struct LeviSample {
  double margin = 0.0;
  int skipped = 0;
};
LeviSample levi_margin(const StarBody& ibody, int samples, std::uint64_t seed, double step);

}  // namespace lpib
