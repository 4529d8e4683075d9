#pragma once

#include <cstdint>
#include <random>

namespace geots::detail {

/// Seeded mt19937_64 with stdlib-independent derived draws, so identical
/// seeds give identical datasets and reports on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0, 1)

  double real(double a, double b) { return a + (b - a) * unit(); }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

  std::int64_t integer(std::int64_t a, std::int64_t b) {
    return a + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(b - a + 1)));
  }

  bool flip() { return (gen_() & 1u) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace geots::detail
