/*
 * Flat key=value run configuration
 *
 *   scheme = choke            # choke | serial | combiner
 *   n = 2
 *   field = Fp:5
 *   d = 16                    # symbols per key
 *   w = 1                     # optional, defaults to n-1
 *   seed = 42
 *   kem.1.id = 1              # 1 XorKem, 2 TableKem
 *   kem.1.overhead = 16       # XorKem tag bytes / TableKem ciphertext width
 *
 * Blank lines and '#' comments are ignored. Unknown keys are rejected.
 */

#ifndef CHOKE_CONFIG_H_
#define CHOKE_CONFIG_H_

#include <choke/schemes.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace choke {

struct KemProfile {
      std::uint16_t id = kXorKemId;
      std::uint32_t parameter = 16;

      bool operator==(const KemProfile&) const = default;
};

/// "1:16;1:32" rendering used in bench output.
std::string profile_string(const std::vector<KemProfile>& profile);

struct RunConfig {
      Scheme scheme = Scheme::Choke;
      std::size_t n = 2;
      FieldSpec field = FieldSpec::prime(5);
      std::size_t key_symbols = 1;
      std::size_t w = 1;
      std::uint64_t seed = 0;
      std::vector<KemProfile> kems;

      std::vector<std::shared_ptr<const Kem>> make_kems() const;
};

/// Throws ParseError(BadValue) on malformed or incomplete input.
RunConfig parse_config(const std::string& text);

/// Applies CHOKE_SEED from the environment when set.
void apply_env_overrides(RunConfig& config);

}  // namespace choke

#endif
