#include "strf/rng.hpp"

#include <cmath>
#include <numbers>

#include "strf/error.hpp"

namespace strf {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t v = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(v) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Stream::Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      a_lo_(static_cast<std::uint32_t>(a)),
      a_hi_(static_cast<std::uint32_t>(a >> 32)),
      b_(b) {}

std::array<std::uint32_t, 4> Stream::block(std::uint64_t i) const {
  // counter words: block index (40 bits) | stream tag b (24 bits), replicate a (64 bits)
  const std::uint64_t w = (i & 0xFFFFFFFFFFull) | (b_ << 40);
  return philox4x32({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(w >> 32), a_lo_, a_hi_}, key_);
}

double Stream::uniform() {
  if (used_ >= 4) {
    buf_ = block(pos_++);
    used_ = 0;
  }
  const double u = to_unit(buf_[used_], buf_[used_ + 1]);
  used_ += 2;
  return u;
}

double Stream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

double Stream::normal_at(std::uint64_t i) const {
  const auto blk = block(i / 2);
  const double r = std::sqrt(-2.0 * std::log(to_unit(blk[0], blk[1])));
  const double t = 2.0 * std::numbers::pi * to_unit(blk[2], blk[3]);
  return (i % 2 == 0) ? r * std::cos(t) : r * std::sin(t);
}

double Stream::gamma(double shape) {
  if (!(shape > 0.0)) throw ValidationError("gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  // Marsaglia-Tsang
  const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Stream::chi_square(double dof) {
  if (dof <= 4.0 && dof == std::floor(dof)) {
    double s = 0.0;
    for (int i = 0; i < static_cast<int>(dof); ++i) {
      const double z = normal();
      s += z * z;
    }
    return s;
  }
  return 2.0 * gamma(0.5 * dof);
}

}  // namespace strf
