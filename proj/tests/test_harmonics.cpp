#include "doctest.h"

#include "lpib/harmonics.hpp"
#include "lpib/transforms.hpp"

#include <cmath>

using namespace lpib;

TEST_CASE("jacobi_Q normalization and low-order values") {
  CHECK(jacobi_Q(0, 3, 1, 0.37) == doctest::Approx(1.0));
  // Q_1(0,0,t) = 2t - 1
  for (double t : {0.0, 0.25, 0.7, 1.0}) {
    CHECK(jacobi_Q(1, 0, 0, t) == doctest::Approx(2 * t - 1).epsilon(1e-14));
  }
  for (int l : {0, 1, 2, 3, 5, 8}) {
    for (int a : {0, 1, 2, 4}) {
      for (int b : {0, 1, 2}) {
        CHECK(jacobi_Q(l, a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("jacobi_Q orthogonality under the t^a (1-t)^b weight") {
  for (int a : {0, 2}) {
    for (int b : {0, 1}) {
      Rule1D r = gauss_jacobi01(32, a, b);
      for (int i = 0; i <= 5; ++i) {
        double nrm_i = 0.0;
        for (std::size_t q = 0; q < r.x.size(); ++q)
          nrm_i += r.w[q] * std::pow(jacobi_Q(i, a, b, r.x[q]), 2);
        for (int j = i + 1; j <= 6; ++j) {
          double dot = 0.0, nrm_j = 0.0;
          for (std::size_t q = 0; q < r.x.size(); ++q) {
            double qi = jacobi_Q(i, a, b, r.x[q]);
            double qj = jacobi_Q(j, a, b, r.x[q]);
            dot += r.w[q] * qi * qj;
            nrm_j += r.w[q] * qj * qj;
          }
          CHECK(std::abs(dot) / std::sqrt(nrm_i * nrm_j) < 1e-10);
        }
      }
    }
  }
}

namespace {

CVec cv2(cplx a, cplx b) {
  CVec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("zonal harmonics: pole value, bi-degree law, conjugation") {
  Rng rng(4);
  CVec pole = CVec::Zero(2);
  pole[0] = 1.0;
  CHECK(zonal_eval(0, 0, 2, rng.unit_vector(2)).real() == doctest::Approx(1.0));
  CHECK(std::abs(zonal_eval(3, 2, 2, pole) - cplx(1, 0)) < 1e-14);

  // (1,0) at real alignment evaluates to the pole pairing
  CVec u = cv2(0.6, cplx(0, 0.8));
  CHECK(std::abs(zonal_eval(1, 0, 2, u) - cplx(0.6, 0)) < 1e-14);

  // (1,1), n=2: 2|z|^2 - 1
  for (int i = 0; i < 8; ++i) {
    CVec v = rng.unit_vector(2);
    double t = std::norm(v[0]);
    CHECK(std::abs(zonal_eval(1, 1, 2, v) - cplx(2 * t - 1, 0)) < 1e-13);
  }

  // Y(cu) = c^k conj(c)^l Y(u)
  for (int k : {0, 1, 2, 3}) {
    for (int l : {0, 1, 2}) {
      for (int i = 0; i < 4; ++i) {
        CVec v = rng.unit_vector(2);
        cplx c = std::polar(1.0, rng.uniform(0, 2 * M_PI));
        CVec cv = v;
        for (int j = 0; j < 2; ++j) cv[j] *= c;
        cplx want = std::pow(c, k) * std::pow(std::conj(c), l) * zonal_eval(k, l, 2, v);
        CHECK(std::abs(zonal_eval(k, l, 2, cv) - want) < 1e-12);
      }
    }
  }

  // P_{k,l}(conj z) = conj P_{k,l}(z): compare u against the coordinate
  // conjugate of u
  for (int i = 0; i < 6; ++i) {
    CVec v = rng.unit_vector(2);
    CVec vc = v;
    for (int j = 0; j < 2; ++j) vc[j] = std::conj(v[j]);
    CHECK(std::abs(zonal_eval(2, 1, 2, vc) - std::conj(zonal_eval(2, 1, 2, v))) < 1e-13);
  }
}

TEST_CASE("zonal harmonics annihilate under the ambient laplacian") {
  // H(x) = |x|^{k+l} Y(x/|x|) is a harmonic polynomial; test by central
  // finite differences in the 2n real coordinates.
  Rng rng(12);
  const double h = 1e-2;
  for (auto [k, l] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 1}}) {
    auto H = [&](const RVec& x) {
      CVec z = to_cplx(x);
      double r = z.norm();
      CVec u = z / r;
      return std::pow(r, k + l) * zonal_eval(k, l, 2, u);
    };
    for (int trial = 0; trial < 4; ++trial) {
      RVec x = to_real(rng.unit_vector(2)) * rng.uniform(0.7, 1.3);
      cplx lap = 0.0;
      for (int j = 0; j < 4; ++j) {
        RVec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        lap += H(xp) + H(xm) - 2.0 * H(x);
      }
      lap /= h * h;
      CHECK(std::abs(lap) < 2e-3 * std::pow(4.0, k + l));
    }
  }
}

TEST_CASE("zonal harmonics of distinct bi-degree are orthogonal") {
  SphereRule rule = sphere_rule(2, 16);
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k <= 3; ++k)
    for (int l = 0; l <= 2; ++l)
      if (k + l <= 4) idx.push_back({k, l});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      auto [k1, l1] = idx[i];
      auto [k2, l2] = idx[j];
      cplx dot = integrate_c(rule, [&](const CVec& v) {
        return zonal_eval(k1, l1, 2, v) * std::conj(zonal_eval(k2, l2, 2, v));
      });
      CHECK(std::abs(dot) < 1e-10);
    }
  }
}

TEST_CASE("fourier coefficients of circle kernels") {
  // constant kernel (disk): c_0 = 1, c_k = 0
  auto D = PlanarConvexBody::disk(1.0);
  CHECK(std::abs(fourier_coeff_support_pow(D, 0.7, 0) - cplx(1, 0)) < 1e-13);
  CHECK(std::abs(fourier_coeff_support_pow(D, 0.7, 3)) < 1e-13);

  // half cosine kernel: c_2((Re c)_+) = 2/(3 pi)
  cplx c2 = fourier_coeff([](cplx c) { return std::max(c.real(), 0.0); }, 2,
                          {M_PI / 2, 3 * M_PI / 2});
  CHECK(c2.real() == doctest::Approx(2.0 / (3 * M_PI)).epsilon(1e-12));
  CHECK(std::abs(c2.imag()) < 1e-14);

  // |Re c|: c_0 = 2/pi, and the segment path must agree
  auto S = PlanarConvexBody::segment(1.0);
  CHECK(fourier_coeff_support_pow(S, 1.0 - 1e-13, 0).real() ==
        doctest::Approx(2.0 / M_PI).epsilon(1e-10));
  // odd coefficients vanish by symmetry
  CHECK(std::abs(fourier_coeff_support_pow(S, 0.5, 1)) < 1e-14);
  CHECK(std::abs(fourier_coeff_support_pow(S, -0.5, 3)) < 1e-14);

  // closed form for the segment kernel: 2 Gamma(p+1)/(2^p G((p+m)/2+1) G((p-m)/2+1))
  for (double p : {0.5, -0.5}) {
    for (int m : {2, 4}) {
      cplx got = fourier_coeff_support_pow(S, p, m);
      double want = 2.0 * std::tgamma(p + 1.0) /
                    (std::pow(2.0, p) * std::tgamma(0.5 * (p + m) + 1.0) *
                     std::tgamma(0.5 * (p - m) + 1.0));
      CHECK(got.real() == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("multiplier alpha agrees with the gamma-function form") {
  auto gamma_form = [](int n, double p, int k, int l) {
    double A = 0.5 * (p + k - l) + 1.0;
    double B = 0.5 * (p - k + l) + 1.0;
    double C = 0.5 * (p + k + l) + n;
    double D = 0.5 * (p - k - l) + 1.0;
    return std::pow(M_PI, n) * std::tgamma(A) * std::tgamma(B) / (std::tgamma(C) * std::tgamma(D));
  };
  for (int n : {2, 3}) {
    for (double p : {0.5, -0.5, -1.5}) {
      for (int k = 0; k <= 4; ++k) {
        for (int l = 0; l <= 4; ++l) {
          double A = 0.5 * (p + k - l) + 1.0, B = 0.5 * (p - k + l) + 1.0,
                 D = 0.5 * (p - k - l) + 1.0;
          // the gamma form is only directly evaluable away from poles
          if (A <= 0 || B <= 0 || D <= 0) continue;
          CHECK(multiplier_alpha(n, p, k, l) ==
                doctest::Approx(gamma_form(n, p, k, l)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("multiplier alpha matches the funk-hecke radial integral") {
  // alpha = (2n-2) kappa_{2n-2} pi int_0^1 r^{p+1+|k-l|} Q (1-r^2)^{n-2} dr
  const int n = 2;
  for (double p : {0.5, -0.5, -1.5}) {
    for (auto [k, l] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}}) {
      Rule1D gj = gauss_jacobi01(48, 0.5 * (p + std::abs(k - l)), n - 2);
      double radial = 0.0;
      for (std::size_t i = 0; i < gj.x.size(); ++i) {
        double s = gj.x[i];  // s = r^2: r^{p+1+m} dr = (1/2) s^{(p+m)/2} ds
        radial += 0.5 * gj.w[i] * jacobi_Q(std::min(k, l), std::abs(k - l), n - 2, s);
      }
      double want = (2 * n - 2) * kappa_ball(2 * n - 2) * M_PI * radial;
      CHECK(multiplier_alpha(n, p, k, l) == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("disk kernel multipliers in closed form") {
  auto D = PlanarConvexBody::disk(1.0);
  // lambda_{0,0} = 4 pi^2 / (p + 2) at n = 2
  for (double p : {0.5, -0.5, -1.5}) {
    cplx got = multiplier_J(D, p, 2, 0, 0);
    CHECK(got.real() == doctest::Approx(4 * M_PI * M_PI / (p + 2)).epsilon(1e-12));
    CHECK(std::abs(multiplier_J(D, p, 2, 2, 1)) < 1e-14);
  }
  CHECK(multiplier_J(D, 1.0 - 1e-12, 2, 0, 0).real() ==
        doctest::Approx(4 * M_PI * M_PI / 3).epsilon(1e-9));
}

TEST_CASE("cosine transform multipliers") {
  CHECK(multiplier_cosine(1.0 - 1e-12, 2, 0, 0) == doctest::Approx(4 * M_PI / 3).epsilon(1e-9));
  // |lambda| decays in k + l at fixed p
  for (double p : {0.5, -0.5}) {
    double prev = std::abs(multiplier_cosine(p, 2, 0, 0));
    for (int s = 1; s <= 10; ++s) {
      double cur = std::abs(multiplier_cosine(p, 2, s, 0));
      CHECK(cur < prev + 1e-15);
      prev = cur;
    }
  }
  // odd k+l values are finite and nonzero for non-integer p
  CHECK(std::abs(multiplier_cosine(0.5, 2, 1, 0)) > 0);
  CHECK(std::abs(multiplier_cosine(-0.5, 2, 2, 1)) > 0);
}

TEST_CASE("radon multipliers") {
  CHECK(multiplier_radon(2, 0) == doctest::Approx(2 * M_PI));
  CHECK(multiplier_radon(2, 1) == doctest::Approx(-2 * M_PI));
  CHECK(multiplier_radon(3, 2) == doctest::Approx(2 * M_PI * M_PI / 3));
}

TEST_CASE("numeric funk-hecke eigenvalues match closed forms") {
  // disk kernel, constant harmonic
  KernelSpec disk{KernelFamily::support_pow, PlanarConvexBody::disk(1.0), 0.5};
  auto e00 = funk_hecke_eigenvalue(disk, 2, 0, 0, 24, 3, 3);
  CHECK(std::abs(e00.value - multiplier_J(disk.C, 0.5, 2, 0, 0)) <
        1e-8 * std::abs(e00.value));

  // radon kernel: off-diagonal annihilated, diagonal closed form
  KernelSpec radon{KernelFamily::radon, PlanarConvexBody::disk(1.0), 0.0};
  auto r10 = funk_hecke_eigenvalue(radon, 2, 1, 0, 24, 5, 3);
  CHECK(std::abs(r10.value) < 1e-8);
  auto r22 = funk_hecke_eigenvalue(radon, 2, 2, 2, 24, 5, 3);
  CHECK(std::abs(r22.value - multiplier_radon(2, 2)) < 1e-7 * std::abs(multiplier_radon(2, 2)));

  // segment kernel at (1,1): matches the closed form
  KernelSpec seg{KernelFamily::support_pow, PlanarConvexBody::segment(1.0), 0.5};
  auto s11 = funk_hecke_eigenvalue(seg, 2, 1, 1, 32, 7, 3);
  cplx want = multiplier_J(seg.C, 0.5, 2, 1, 1);
  CHECK(std::abs(s11.value - want) < 1e-6 * std::abs(want));

  // rotated segment at (2,0): pins the conjugation convention of c_{k-l}
  KernelSpec rot{KernelFamily::support_pow, PlanarConvexBody::segment(std::polar(1.0, 0.7)),
                 0.5};
  auto s20 = funk_hecke_eigenvalue(rot, 2, 2, 0, 32, 9, 3);
  cplx want20 = multiplier_J(rot.C, 0.5, 2, 2, 0);
  CHECK(std::abs(s20.value - want20) < 1e-6 * std::abs(want20));

  // triangle kernel: its threefold symmetry kills c_m unless 3 | m, so the
  // (2,1) multiplier vanishes while (3,0) is a genuine off-diagonal probe
  KernelSpec tri{KernelFamily::support_pow, PlanarConvexBody::triangle(), 0.5};
  CHECK(std::abs(multiplier_J(tri.C, 0.5, 2, 2, 1)) < 1e-14);
  auto t21 = funk_hecke_eigenvalue(tri, 2, 2, 1, 32, 11, 3);
  CHECK(std::abs(t21.value) < 1e-9);
  auto t30 = funk_hecke_eigenvalue(tri, 2, 3, 0, 32, 11, 3);
  cplx want30 = multiplier_J(tri.C, 0.5, 2, 3, 0);
  CHECK(std::abs(want30) > 1e-3);
  CHECK(std::abs(t30.value - want30) < 1e-6 * std::abs(want30));

  // one-sided cosine kernel
  KernelSpec cosp{KernelFamily::cosine_plus, PlanarConvexBody::disk(1.0), 0.5};
  auto c11 = funk_hecke_eigenvalue(cosp, 2, 1, 1, 32, 13, 3);
  double wantc = multiplier_cosine(0.5, 2, 1, 1);
  CHECK(std::abs(c11.value - wantc) < 1e-6 * std::abs(wantc));
}

TEST_CASE("eigenvalue ratio is direction independent") {
  KernelSpec tri{KernelFamily::support_pow, PlanarConvexBody::triangle(), -0.5};
  auto est = funk_hecke_eigenvalue(tri, 2, 2, 2, 32, 17, 5);
  CHECK(est.spread < 1e-6 * std::max(1.0, std::abs(est.value)));
}

TEST_CASE("diagonal multipliers stay nonzero across the kernel set") {
  std::vector<PlanarConvexBody> Cs = {PlanarConvexBody::disk(1.0), PlanarConvexBody::square(),
                                      PlanarConvexBody::triangle()};
  for (const auto& C : Cs) {
    for (double p : {0.5, -0.5, -1.5}) {
      for (int k = 0; k <= 6; ++k) {
        CHECK(std::abs(multiplier_J(C, p, 2, k, k)) > 1e-12);
      }
    }
  }
}

TEST_CASE("multiplier limit toward the radon multipliers") {
  // Gamma(p+2)^{-1} lambda_{k,k}[J_{D,p}] -> k'_D lambda_{k,k}[R_c], k'_D = 2 pi
  auto D = PlanarConvexBody::disk(1.0);
  for (int k : {0, 1, 2, 3}) {
    double prev_err = 1e300;
    for (double p : {-1.9, -1.99, -1.999}) {
      double got = multiplier_J(D, p, 2, k, k).real() / std::tgamma(p + 2.0);
      double want = 2 * M_PI * multiplier_radon(2, k);
      double err = std::abs(got - want) / std::abs(want);
      CHECK(err < prev_err + 1e-15);
      prev_err = err;
    }
    CHECK(prev_err < 2e-3);
  }
}
