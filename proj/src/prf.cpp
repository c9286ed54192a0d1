/*
 * SplitMix64-based PRF expansion and deterministic randomness sources
 */

#include <choke/prf.h>

#include <choke/error.h>

#include <algorithm>

namespace choke {

std::uint64_t splitmix64_mix(std::uint64_t z) {
   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
   z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
   return z ^ (z >> 31);
}

namespace {

std::uint64_t load_le64(ByteView in) {
   std::uint64_t v = 0;
   for(std::size_t i = 0; i != in.size(); ++i) {
      v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
   }
   return v;
}

void store_le(std::uint64_t v, std::span<std::uint8_t> out) {
   for(std::size_t i = 0; i != out.size(); ++i) {
      out[i] = static_cast<std::uint8_t>(v >> (8 * i));
   }
}

std::uint64_t step(std::uint64_t s) {
   return splitmix64_mix(s + kSplitMixGamma);
}

}  // namespace

PrfStream::PrfStream(ByteView input) {
   for(std::size_t off = 0; off < input.size(); off += 8) {
      m_state = step(m_state ^ load_le64(input.subspan(off, std::min<std::size_t>(8, input.size() - off))));
   }
   m_state = step(m_state ^ static_cast<std::uint64_t>(input.size()));
}

std::uint64_t PrfStream::next_u64() {
   m_state += kSplitMixGamma;
   return splitmix64_mix(m_state);
}

void PrfStream::fill(std::span<std::uint8_t> out) {
   for(std::size_t off = 0; off < out.size(); off += 8) {
      store_le(next_u64(), out.subspan(off, std::min<std::size_t>(8, out.size() - off)));
   }
}

Bytes prf_expand(ByteView input, std::size_t out_len) {
   Bytes out(out_len);
   PrfStream(input).fill(out);
   return out;
}

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
   if(bound == 0) {
      throw DomainError("uniform: bound must be nonzero");
   }
   // Reject the low 2^64 mod bound values so the result is exactly uniform.
   const std::uint64_t threshold = (0 - bound) % bound;
   while(true) {
      const auto x = next_u64();
      if(x >= threshold) {
         return x % bound;
      }
   }
}

void RandomSource::fill(std::span<std::uint8_t> out) {
   for(std::size_t off = 0; off < out.size(); off += 8) {
      store_le(next_u64(), out.subspan(off, std::min<std::size_t>(8, out.size() - off)));
   }
}

Bytes RandomSource::bytes(std::size_t n) {
   Bytes out(n);
   fill(out);
   return out;
}

std::uint64_t SplitMix64Rng::next_u64() {
   m_state += kSplitMixGamma;
   return splitmix64_mix(m_state);
}

SplitMix64Rng derive_rng(std::uint64_t seed, std::string_view label) {
   Bytes input(8);
   store_le(seed, input);
   input.insert(input.end(), label.begin(), label.end());
   return SplitMix64Rng(PrfStream(input).next_u64());
}

std::uint64_t ScriptedRandom::next_u64() {
   if(m_pos == m_tape.size()) {
      throw ResourceError("scripted randomness tape exhausted");
   }
   return m_tape[m_pos++];
}

std::uint64_t ScriptedRandom::uniform(std::uint64_t bound) {
   if(bound == 0) {
      throw DomainError("uniform: bound must be nonzero");
   }
   const auto v = next_u64();
   if(v >= bound) {
      throw DomainError("scripted value out of range for uniform draw");
   }
   return v;
}

}  // namespace choke
