#include "doctest.h"

#include "lpib/quadrature.hpp"

#include <cmath>

using namespace lpib;

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

TEST_CASE("gauss_jacobi01 reproduces beta-function moments") {
  for (double a : {0.0, -0.5, 0.25, -0.95}) {
    for (double b : {0.0, 1.0, 0.5}) {
      Rule1D r = gauss_jacobi01(24, a, b);
      // moments int s^{a+j} (1-s)^b ds for a handful of j
      for (int j = 0; j <= 6; ++j) {
        double got = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) got += r.w[i] * std::pow(r.x[i], j);
        double want = std::exp(log_beta(a + j + 1.0, b + 1.0));
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("gauss_jacobi01 is exact on polynomials of the rule degree") {
  Rule1D r = gauss_jacobi01(8, -0.5, 1.0);
  // degree 2m-1 = 15 monomial
  double got = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) got += r.w[i] * std::pow(r.x[i], 15);
  double want = std::exp(log_beta(-0.5 + 15 + 1.0, 2.0));
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("plain sphere rules carry the full surface measure") {
  auto total = [](const SphereRule& r) {
    KahanSum s;
    for (double w : r.weights) s.add(w);
    return s.value();
  };
  CHECK(total(sphere_rule(1, 16)) == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(total(sphere_rule(2, 16)) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-12));
  CHECK(total(sphere_rule(3, 8)) == doctest::Approx(std::pow(M_PI, 3)).epsilon(1e-12));
}

TEST_CASE("integrate handles symmetric integrands on S^3") {
  SphereRule r = sphere_rule(2, 16);
  double one = integrate(r, [](const CVec&) { return 1.0; });
  CHECK(one == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-12));

  // f(v) = <v, e1>^2 averages to |S^3| / 4 over the four real coordinates
  double quad = integrate(r, [](const CVec& v) { return v[0].real() * v[0].real(); });
  CHECK(quad == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-10));

  double odd = integrate(r, [](const CVec& v) { return v[0].real(); });
  CHECK(std::abs(odd) < 1e-12);
}

TEST_CASE("jacobi rule absorbs the |v.e1|^p kernel") {
  // int_{S^3} |v.e1|^p dv = 2pi |S^1| * (1/2) B((p+2)/2, n-1)
  auto closed = [](int n, double p) {
    return 2 * M_PI * sphere_area(2 * n - 2) * 0.5 *
           std::exp(log_beta(0.5 * (p + 2.0), n - 1.0));
  };
  for (double p : {1.0 - 1e-9, 0.5, -0.5, -1.0, -1.5, -1.999}) {
    if (p >= 1.0) continue;
    SphereRule r = jacobi_sphere_rule(2, p, 24);
    double got = integrate(r, [](const CVec&) { return 1.0; });
    CHECK(got == doctest::Approx(closed(2, p)).epsilon(1e-10));
  }
  // spec examples at n = 2
  SphereRule r1 = jacobi_sphere_rule(2, 1.0 - 1e-12, 24);
  CHECK(integrate(r1, [](const CVec&) { return 1.0; }) ==
        doctest::Approx(4 * M_PI * M_PI / 3).epsilon(1e-9));
  SphereRule rm1 = jacobi_sphere_rule(2, -1.0, 24);
  CHECK(integrate(rm1, [](const CVec&) { return 1.0; }) ==
        doctest::Approx(4 * M_PI * M_PI).epsilon(1e-10));
  CHECK(integrate(rm1, [](const CVec&) { return 0.0; }) == 0.0);
}

TEST_CASE("jacobi rule rejects out-of-range exponents") {
  CHECK_THROWS(jacobi_sphere_rule(2, -2.0, 16));
  CHECK_THROWS(jacobi_sphere_rule(2, -2.5, 16));
}

TEST_CASE("unitary_to_e1 maps e1 to the target") {
  Rng rng(11);
  for (int trial = 0; trial < 24; ++trial) {
    int n = 2 + trial % 2;
    CVec u = rng.unit_vector(n);
    CMat Q = unitary_to_e1(u);
    CHECK((Q.col(0) - u).norm() < 1e-13);
    CMat I = Q.adjoint() * Q;
    CHECK((I - CMat::Identity(n, n)).norm() < 1e-12);
  }
  // axis cases
  CVec e1 = CVec::Zero(2);
  e1[0] = 1.0;
  CHECK((unitary_to_e1(e1).col(0) - e1).norm() < 1e-15);
  CVec e2 = CVec::Zero(2);
  e2[1] = 1.0;
  CHECK((unitary_to_e1(e2).col(0) - e2).norm() < 1e-15);
}

TEST_CASE("rotation invariance of plain rules on band-limited integrands") {
  SphereRule r = sphere_rule(2, 16);
  Rng rng(5);
  CVec a = rng.unit_vector(2);
  CMat Q = unitary_to_e1(rng.unit_vector(2));
  auto f = [&](const CVec& v) {
    cplx z = cdot(v, a);
    return std::norm(z) + 0.25 * std::pow(z.real(), 3);
  };
  double base = integrate(r, f);
  double rotated = integrate(r, [&](const CVec& v) { return f(CVec(Q * v)); });
  CHECK(base == doctest::Approx(rotated).epsilon(1e-12));
}

TEST_CASE("refinement shrinks the error of smooth integrands") {
  auto err_at = [](int res) {
    SphereRule r = sphere_rule(2, res);
    double got = integrate(r, [](const CVec& v) {
      return std::exp(v[0].real() + 0.3 * v[1].imag());
    });
    return got;
  };
  double coarse = err_at(6), mid = err_at(10), fine = err_at(20), ref = err_at(28);
  CHECK(std::abs(mid - ref) <= std::abs(coarse - ref) + 1e-15);
  CHECK(std::abs(fine - ref) <= std::abs(mid - ref) + 1e-15);
}

TEST_CASE("integrate reports non-finite integrands with the node") {
  SphereRule r = sphere_rule(2, 8);
  CHECK_THROWS_AS(integrate(r, [](const CVec& v) { return 1.0 / (v[0].real() - v[0].real()); }),
                  std::domain_error);
}

TEST_CASE("real sphere rules carry the surface measure") {
  auto total = [](const RealSphereRule& r) {
    KahanSum s;
    for (double w : r.weights) s.add(w);
    return s.value();
  };
  CHECK(total(real_sphere_rule(2, 16)) == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(total(real_sphere_rule(3, 16)) == doctest::Approx(4 * M_PI).epsilon(1e-12));
  CHECK(total(real_sphere_rule(4, 16)) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("paneled circle rule integrates kinked support powers") {
  // int_{S^1} (|cos| + |sin|)^{-2} = 4
  std::vector<double> kinks = {0, M_PI / 2, M_PI, 3 * M_PI / 2};
  CircleRule r = CircleRule::paneled(kinks, 24);
  KahanSum s;
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    double h = std::abs(r.c[i].real()) + std::abs(r.c[i].imag());
    s.add(r.w[i] / (h * h));
  }
  CHECK(s.value() == doctest::Approx(4.0).epsilon(1e-13));
}
