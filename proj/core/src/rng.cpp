#include "chaosvar/rng.hpp"

#include <cmath>

namespace chaosvar {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment_id,
                          std::uint64_t param_index, std::uint64_t replicate_index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a(experiment_id));
  h = splitmix64(h ^ param_index);
  h = splitmix64(h ^ (replicate_index * 0xd1b54a32d192ed03ULL));
  return h;
}

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream + 0x632be59bd9b4e019ULL));
}

double standard_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

double uniform01(Rng& rng) {
  // 53 random bits, never exactly 0 or 1
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void uniform_on_sphere(Rng& rng, double rho, std::span<double> out) {
  double r2 = 0.0;
  do {
    r2 = 0.0;
    for (double& v : out) {
      v = standard_normal(rng);
      r2 += v * v;
    }
  } while (r2 == 0.0);
  const double s = rho / std::sqrt(r2);
  for (double& v : out) v *= s;
}

}  // namespace chaosvar
