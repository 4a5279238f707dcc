#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace andolab {

// Deterministic, platform-independent random source. std:: distributions are
// implementation-defined, which would break byte-identical fixtures and
// reports across toolchains, so the few draws we need are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // splitmix64
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return n == 0 ? 0 : next_u64() % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Complex standard normal, E|z|^2 = 1.
  std::complex<double> cnormal() {
    return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
  }

  /// Uniform on the closed unit disc.
  std::complex<double> disc() {
    const double r = std::sqrt(uniform());
    const double t = 2.0 * M_PI * uniform();
    return std::polar(r, t);
  }

  Eigen::VectorXcd cnormal_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  Eigen::MatrixXcd cnormal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stable seed mixing for independent substreams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c = 0) {
  Rng r(a * 0x9e3779b97f4a7c15ULL + b + (c << 17) + 0x6a09e667f3bcc909ULL);
  return r.next_u64();
}

}  // namespace andolab
