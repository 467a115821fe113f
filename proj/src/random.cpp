#include "tgp/random.hpp"

namespace tgp {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ using u128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Block Philox4x64::generate_block(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::initializer_list<std::uint64_t> indices) noexcept {
  // FNV-1a over the tag keeps the tag hash independent of std::hash.
  std::uint64_t tag = 0xCBF29CE484222325ULL;
  for (const char c : purpose) {
    tag ^= static_cast<unsigned char>(c);
    tag *= 0x100000001B3ULL;
  }
  std::uint64_t h = mix64(master ^ mix64(tag));
  for (const std::uint64_t i : indices) h = mix64(h ^ mix64(i + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace tgp
