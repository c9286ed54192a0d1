/*
 * Exact information measures over equally weighted finite samples
 *
 * All comparisons are made on integer counts; logarithms are taken only
 * when producing the final figure in bits, so independence is decided
 * exactly rather than to within a floating point tolerance.
 */

#ifndef CHOKE_INFOTHEORY_H_
#define CHOKE_INFOTHEORY_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace choke {

struct MutualInformation {
      /// Joint count factorises exactly into the product of the marginals.
      bool exactly_zero = true;
      /// I(A;B) in bits; exactly 0.0 when exactly_zero.
      double bits = 0.0;
      std::uint64_t samples = 0;
};

/// Each (a, b) pair is one equally likely outcome of the joint experiment.
MutualInformation exact_mutual_information(std::span<const std::pair<std::uint64_t, std::uint64_t>> outcomes);

struct Fraction {
      std::uint64_t num = 0;
      std::uint64_t den = 1;

      double value() const { return static_cast<double>(num) / static_cast<double>(den); }

      bool is_zero() const { return num == 0; }

      std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

      bool operator==(const Fraction&) const = default;
};

/// Total variation distance between the empirical laws of two outcome lists.
Fraction statistical_distance(std::span<const std::uint64_t> p, std::span<const std::uint64_t> q);

}  // namespace choke

#endif
