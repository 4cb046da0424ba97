#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace chaosvar {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed for one replicate: independent of how replicates are scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment_id,
                          std::uint64_t param_index, std::uint64_t replicate_index);

// Child stream of a seed, used to split one replicate into sub-streams.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

double standard_normal(Rng& rng);
double uniform01(Rng& rng);

// Uniform point on the sphere of radius rho in R^d (out.size() == d).
void uniform_on_sphere(Rng& rng, double rho, std::span<double> out);

}  // namespace chaosvar
