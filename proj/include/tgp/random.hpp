#pragma once

// Pinned random source: Philox4x64-10 (Random123 family), a
// counter-based generator. Every random object in the toolkit is produced by
// an engine keyed with a seed derived from (master seed, purpose tag, indices),
// so any single matrix, signal, or noise draw can be replayed in isolation.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace tgp {

class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox4x64(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{seed, stream} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (used_ == 4) {
      buffer_ = generate_block(counter_, key_);
      increment();
      used_ = 0;
    }
    return buffer_[used_++];
  }

  /// The bijection itself: ten Philox rounds of `counter` under `key`.
  static Block generate_block(Block counter, Key key) noexcept;

 private:
  void increment() noexcept {
    for (auto& word : counter_) {
      if (++word != 0) break;
    }
  }

  Key key_;
  Block counter_{};
  Block buffer_{};
  unsigned used_ = 4;
};

/// 64-bit finalizer from SplitMix64.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for one random object: hashes the master seed, a purpose tag
/// ("matrix", "signal", "noise", ...) and up to three indices.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::initializer_list<std::uint64_t> indices = {}) noexcept;

}  // namespace tgp
