#ifndef MEMLAB_RNG_HPP
#define MEMLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace memlab {

// Counter-based Philox2x64-10 stream. Each (master_seed, path_index) pair
// names one stream; streams can be created in any order on any thread and
// always reproduce the same sequence, so Monte Carlo results are independent
// of the worker count.
class RngLane {
 public:
  RngLane(std::uint64_t master_seed, std::uint64_t path_index)
      : key_(master_seed), key2_(path_index) {}

  std::uint64_t master_seed() const { return key_; }
  std::uint64_t path_index() const { return key2_; }

  std::uint64_t next_u64() {
    if (have_word_) {
      have_word_ = false;
      return word_;
    }
    std::uint64_t x0 = counter_++;
    std::uint64_t x1 = key2_;
    std::uint64_t k = key_;
    for (int r = 0; r < 10; ++r) {
      round(x0, x1, k);
      k += kWeyl;
    }
    word_ = x1;
    have_word_ = true;
    return x0;
  }

  // Uniform on (0,1), never returning an exact endpoint.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; fixed two-uniform consumption per pair.
  double next_normal() {
    if (have_normal_) {
      have_normal_ = false;
      return spare_normal_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t kMult = 0xD2B74407B1CE6E93ull;
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

  static void round(std::uint64_t& x0, std::uint64_t& x1, std::uint64_t k) {
    unsigned __int128 prod = static_cast<unsigned __int128>(x0) * kMult;
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ k ^ x1;
    x1 = lo;
  }

  std::uint64_t key_ = 0;
  std::uint64_t key2_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t word_ = 0;
  bool have_word_ = false;
  bool have_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace memlab

#endif  // MEMLAB_RNG_HPP
