#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lpib {

using cplx = std::complex<double>;

// Bodies live in C^n ~ R^{2n}; desk scale keeps n small, so small vectors and
// matrices stay on the stack.
inline constexpr int kMaxDim = 8;

using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxDim, 1>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxDim, 2 * kMaxDim>;

// Complex inner product x . u = sum_j x_j conj(u_j); linear in x, antilinear in u.
inline cplx cdot(const CVec& x, const CVec& u) {
  cplx s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) s += x[j] * std::conj(u[j]);
  return s;
}

// Real inner product of C^n ~ R^{2n}.
inline double rdot(const CVec& x, const CVec& u) { return cdot(x, u).real(); }

// Real coordinates are interleaved: (Re z_1, Im z_1, Re z_2, Im z_2, ...).
inline RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CVec to_cplx(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
  return z;
}

inline double kappa_ball(int d) {  // volume of the d-dimensional unit ball
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

inline double sphere_area(int d) {  // surface measure of S^{d-1} in R^d
  return d * kappa_ball(d);
}

// Neumaier compensated accumulator; keeps reductions reproducible.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(cplx x) {
    re.add(x.real());
    im.add(x.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

namespace detail {
inline bool& in_parallel_region() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

// Runs fn(chunk_index, begin, end) over a fixed 64-way chunking of [0, count).
// The chunk layout is independent of the thread count, so per-chunk partial
// results combined in chunk order give bit-identical totals on any machine.
inline void parallel_chunks(std::size_t count,
                            const std::function<void(int, std::size_t, std::size_t)>& fn,
                            int chunks = 64) {
  if (count == 0) return;
  chunks = std::min<std::size_t>(chunks, count);
  auto bounds = [&](int k) {
    std::size_t b = count * k / chunks;
    std::size_t e = count * (k + 1) / chunks;
    return std::pair<std::size_t, std::size_t>(b, e);
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (detail::in_parallel_region() || hw <= 1 || chunks == 1) {
    for (int k = 0; k < chunks; ++k) {
      auto [b, e] = bounds(k);
      fn(k, b, e);
    }
    return;
  }
  int nthreads = std::min<unsigned>(hw, chunks);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      detail::in_parallel_region() = true;
      for (int k = t; k < chunks; k += nthreads) {
        auto [b, e] = bounds(k);
        fn(k, b, e);
      }
      detail::in_parallel_region() = false;
    });
  }
  for (auto& th : pool) th.join();
}

// Deterministic RNG. Gaussians go through Box-Muller so streams do not depend
// on the standard library's normal_distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  CVec unit_vector(int n) {
    CVec u(n);
    double norm2 = 0.0;
    do {
      for (int j = 0; j < n; ++j) u[j] = cplx(gaussian(), gaussian());
      norm2 = u.squaredNorm();
    } while (norm2 < 1e-12);
    return u / std::sqrt(norm2);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace lpib
