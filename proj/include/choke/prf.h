/*
 * SplitMix64-based PRF expansion and deterministic randomness sources
 *
 * prf_expand(input, len) is defined bit-exactly so that ciphertexts and
 * derived keys are reproducible in any implementation:
 *
 *   mix(z)    = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
 *               z ^= z >> 27; z *= 0x94D049BB133111EB; z ^ (z >> 31)
 *   step(s)   = mix(s + 0x9E3779B97F4A7C15)
 *
 *   s = 0
 *   for each 8-byte block b of input (little-endian, last block zero-padded):
 *      s = step(s ^ b)
 *   s = step(s ^ byte_length(input))
 *   output blocks: s += 0x9E3779B97F4A7C15; emit mix(s) as 8 little-endian bytes
 *   truncate the output to len bytes
 */

#ifndef CHOKE_PRF_H_
#define CHOKE_PRF_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace choke {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15;

std::uint64_t splitmix64_mix(std::uint64_t z);

class PrfStream {
   public:
      explicit PrfStream(ByteView input);

      std::uint64_t next_u64();

      void fill(std::span<std::uint8_t> out);

   private:
      std::uint64_t m_state = 0;
};

Bytes prf_expand(ByteView input, std::size_t out_len);

class RandomSource {
   public:
      virtual ~RandomSource() = default;

      virtual std::uint64_t next_u64() = 0;

      /// Uniform value in [0, bound); bound must be nonzero.
      virtual std::uint64_t uniform(std::uint64_t bound);

      void fill(std::span<std::uint8_t> out);

      Bytes bytes(std::size_t n);
};

/// The standard SplitMix64 generator.
class SplitMix64Rng final : public RandomSource {
   public:
      explicit SplitMix64Rng(std::uint64_t seed) : m_state(seed) {}

      std::uint64_t next_u64() override;

   private:
      std::uint64_t m_state;
};

/// Generator for an independent labelled stream of a master seed.
SplitMix64Rng derive_rng(std::uint64_t seed, std::string_view label);

/// Replays a fixed tape; used to enumerate encapsulation randomness exhaustively.
/// uniform(bound) returns the next tape value directly (it must be < bound).
class ScriptedRandom final : public RandomSource {
   public:
      explicit ScriptedRandom(std::vector<std::uint64_t> tape) : m_tape(std::move(tape)) {}

      std::uint64_t next_u64() override;

      std::uint64_t uniform(std::uint64_t bound) override;

   private:
      std::vector<std::uint64_t> m_tape;
      std::size_t m_pos = 0;
};

}  // namespace choke

#endif
