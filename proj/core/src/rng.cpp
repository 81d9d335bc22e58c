#include "sparse_pr/rng.hpp"

namespace sparse_pr {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (mix64(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

namespace {

std::mt19937_64 seeded_engine(RngSpec spec) {
  const std::uint64_t a = mix64(spec.seed);
  const std::uint64_t b = mix64(spec.stream ^ 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(RngSpec spec) : engine_(seeded_engine(spec)) {}

std::size_t Rng::index(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

CVector complex_normal_vector(std::size_t n, Rng& rng) {
  CVector v(n);
  for (auto& c : v) c = rng.complex_normal();
  return v;
}

}  // namespace sparse_pr
