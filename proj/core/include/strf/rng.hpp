#pragma once

#include <array>
#include <cstdint>

namespace strf {

// Philox4x32-10 block function (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// A reproducible stream identified by (seed, a, b). Draws depend only on the
// identifiers and the position, never on thread scheduling.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  // Uniform on (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  double gamma(double shape);       // unit scale
  double chi_square(double dof);

  // Random access: the i-th standard normal of this stream, without touching the position.
  double normal_at(std::uint64_t i) const;

  std::uint64_t position() const { return pos_; }

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t i) const;

  std::array<std::uint32_t, 2> key_;
  std::uint32_t a_lo_, a_hi_;
  std::uint64_t b_;
  std::uint64_t pos_ = 0;   // block counter
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;            // words consumed in buf_
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace strf
