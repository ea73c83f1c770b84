#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "iptt/matcore.hpp"

namespace iptt {

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a, stable across platforms; hashes inequality ids into seeds.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// seed' = splitmix(splitmix(splitmix(seed ^ fnv(id)) ^ trial) ^ dim)
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view id, std::uint64_t trial,
                                    std::uint64_t dim) {
  std::uint64_t h = splitmix64(seed ^ fnv1a(id));
  h = splitmix64(h ^ trial);
  return splitmix64(h ^ dim);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  int uniform_int(int lo, int hi);  // inclusive bounds
  cplx complex_normal();            // E|z|^2 = 1
  std::uint64_t next() { return engine_(); }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

CMatrix random_ginibre(Rng& rng, Eigen::Index dim);
/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
CMatrix random_unitary(Rng& rng, Eigen::Index dim);
CMatrix random_hermitian(Rng& rng, Eigen::Index dim);
/// Random PSD matrix G G* / dim.
CMatrix random_psd(Rng& rng, Eigen::Index dim);
CVector random_unit_vector(Rng& rng, Eigen::Index dim);
/// Uniform point in the closed disk of the given radius.
cplx random_in_disk(Rng& rng, double radius);
/// Normal matrix U diag(lambda) U* with |lambda| <= radius.
CMatrix random_normal_in_disk(Rng& rng, Eigen::Index dim, double radius);
/// Hermitian matrix with spectrum uniform in [-radius, radius].
CMatrix random_hermitian_in_interval(Rng& rng, Eigen::Index dim, double radius);
/// Positive weights summing to one.
std::vector<double> random_probability(Rng& rng, std::size_t n);

}  // namespace iptt
