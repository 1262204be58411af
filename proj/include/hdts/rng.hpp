#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>

namespace hdts {

/// Counter-based random generator (Philox4x32-10) with explicit streams.
/// A given (seed, stream) pair produces a bit-identical sequence on every
/// platform, and fork() derives statistically independent child streams,
/// which keeps parallel bootstrap replications deterministic regardless of
/// the worker count. Normal variates use Box-Muller on 53-bit uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr const char* algorithm() { return "philox4x32-10"; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index size);

  /// Deterministic child stream; independent of the parent state.
  Rng fork(std::uint64_t label) const;

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Seed specification carried through configs and echoed into results.
struct RngSpec {
  std::uint64_t seed = 0;
  std::string algorithm = Rng::algorithm();
};

}  // namespace hdts
