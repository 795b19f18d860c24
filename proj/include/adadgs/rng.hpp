#pragma once

#include <cstdint>
#include <random>

namespace adadgs {

/// Generator used everywhere a seeded stream is needed. Sequences are
/// reproducible for a given standard library build.
using Rng = std::mt19937_64;

/// Mixes a master seed and a stream index into an independent child seed
/// (splitmix64 finalizer). Used to give every trial, and every consumer
/// inside a trial, its own generator.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace adadgs
