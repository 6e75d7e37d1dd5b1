#include "hypermetric/sequence.hpp"

#include <cmath>

namespace hypermetric {

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t i, int base) {
  const double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

}  // namespace

HaltonSequence::HaltonSequence(int dims, std::uint64_t seed) : bases_(first_primes(dims)) {
  std::mt19937_64 rng(seed);
  shift_.resize(bases_.size());
  for (auto& s : shift_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void HaltonSequence::point(std::uint64_t i, double* out) const {
  for (std::size_t d = 0; d < bases_.size(); ++d) {
    double x = radical_inverse(i + 1, bases_[d]) + shift_[d];
    if (x >= 1.0) x -= 1.0;
    out[d] = x;
  }
}

std::vector<Vector> random_unit_directions(int n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector v(n);
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[j] = Complex(re, im);
    }
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    out.push_back(v / norm);
  }
  return out;
}

}  // namespace hypermetric
