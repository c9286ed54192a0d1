/*
 * Hybrid key transport schemes with exact cost meters
 *
 *   CHOKE     X = K * G, coded symbol X_i encapsulated once under KEM_i.
 *   Serial    every key passes through KEM_1 (innermost) .. KEM_n (outermost).
 *   Combiner  key j = PRF(p_j1 || .. || p_jn), block p_ji encapsulated under KEM_i.
 *
 * Call counts come from the CallCounter hooks on Kem::encapsulate and
 * Kem::decapsulate; byte counts are measured from the produced bundle.
 */

#ifndef CHOKE_SCHEMES_H_
#define CHOKE_SCHEMES_H_

#include <choke/iscode.h>
#include <choke/kem.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace choke {

enum class Scheme : std::uint8_t { Choke = 1, Serial = 2, Combiner = 3 };

std::string scheme_name(Scheme s);

/// Accepts "choke", "serial", "combiner"; throws DomainError otherwise.
Scheme parse_scheme(std::string_view name);

struct SuiteSlot {
      std::shared_ptr<const Kem> kem;
      KemKeyPair keys;
};

class KemSuite {
   public:
      /// Throws DomainError unless n >= 2 and every KEM accepts the suite's message space.
      KemSuite(const FieldSpec& field, std::size_t key_symbols, std::vector<SuiteSlot> slots);

      /// Runs gen() for every KEM, in order, from one randomness source.
      static KemSuite generate(const FieldSpec& field,
                               std::size_t key_symbols,
                               const std::vector<std::shared_ptr<const Kem>>& kems,
                               RandomSource& rng);

      std::size_t n() const { return m_slots.size(); }

      const FieldSpec& field() const { return m_field; }

      /// Key length d in field symbols.
      std::size_t key_symbols() const { return m_key_symbols; }

      /// Byte length of one packed key or coded symbol row.
      std::size_t message_bytes() const { return m_key_symbols * m_field.symbol_bytes(); }

      const SuiteSlot& slot(std::size_t i) const { return m_slots.at(i); }

      const std::vector<SuiteSlot>& slots() const { return m_slots; }

   private:
      FieldSpec m_field;
      std::size_t m_key_symbols;
      std::vector<SuiteSlot> m_slots;
};

struct BundleEntry {
      std::uint16_t kem = 0;
      Bytes bytes;

      bool operator==(const BundleEntry&) const = default;
};

/// What travels from sender to receiver. Entry layout per scheme:
///   choke     entry i = c_i under KEM_i
///   serial    entry j = key j after the full chain (tagged with the outermost KEM)
///   combiner  entry j*n + i = block (j, i) under KEM_i
struct CiphertextBundle {
      Scheme scheme = Scheme::Choke;
      FieldSpec field = FieldSpec::prime(2);
      std::size_t n = 0;
      std::vector<BundleEntry> entries;

      std::size_t total_bytes() const;

      bool operator==(const CiphertextBundle&) const = default;
};

/// n for choke and serial, n^2 for combiner.
std::size_t expected_entry_count(Scheme scheme, std::size_t n);

/// Position of block (key, slot) in a combiner bundle.
inline std::size_t combiner_entry_index(std::size_t key, std::size_t slot, std::size_t n) {
   return key * n + slot;
}

/// Serial chain order: suite slots from innermost to outermost.
std::vector<std::size_t> serial_chain_order(std::size_t n);

struct SlotCost {
      std::uint16_t kem = 0;
      std::uint64_t enc_calls = 0;
      std::uint64_t dec_calls = 0;

      bool operator==(const SlotCost&) const = default;
};

/// Costs keyed by suite slot, since a suite may use one KEM algorithm in several slots.
struct CostReport {
      std::vector<SlotCost> slots;
      std::vector<std::uint64_t> entry_bytes;
      std::uint64_t bytes_sent = 0;
      std::optional<std::chrono::nanoseconds> wall_time;

      std::uint64_t total_enc_calls() const;
      std::uint64_t total_dec_calls() const;

      /// Counts and bytes only; wall time is ignored.
      bool same_counts(const CostReport& o) const {
         return slots == o.slots && entry_bytes == o.entry_bytes && bytes_sent == o.bytes_sent;
      }
};

struct CostPrediction {
      CostReport encap;
      CostReport decap;
      /// Minimum bytes any scheme must send to carry n keys through these KEMs: sum of l_i.
      std::uint64_t lower_bound_bytes = 0;
};

CostPrediction predicted_costs(Scheme scheme, const KemSuite& suite);

struct EncapResult {
      CiphertextBundle bundle;
      CostReport cost;
};

struct DecapResult {
      KeyBlock keys;
      CostReport cost;
};

/// Big-endian packing, field.symbol_bytes() per symbol.
Bytes pack_symbols(std::span<const std::uint32_t> symbols, const FieldSpec& field);

/// Throws DecodeError on a ragged length or an out-of-range value.
std::vector<std::uint32_t> unpack_symbols(ByteView bytes, const FieldSpec& field);

EncapResult choke_encap(const KeyBlock& keys, const KemSuite& suite, const GeneratorMatrix& g, RandomSource& rng);
DecapResult choke_decap(const CiphertextBundle& bundle, const KemSuite& suite, const GeneratorMatrix& g);

EncapResult serial_encap(const KeyBlock& keys, const KemSuite& suite, RandomSource& rng);
DecapResult serial_decap(const CiphertextBundle& bundle, const KemSuite& suite);

struct CombinerEncapResult {
      CiphertextBundle bundle;
      CostReport cost;
      KeyBlock keys;
};

/// Generates n*n random blocks of suite.key_symbols() symbols and derives n keys.
CombinerEncapResult combiner_encap(const KemSuite& suite, RandomSource& rng);
DecapResult combiner_decap(const CiphertextBundle& bundle, const KemSuite& suite);

/// Key derivation used by the combiner: d uniform field symbols from PRF(blocks...).
std::vector<std::uint32_t> combiner_derive_key(std::span<const Bytes> packed_blocks,
                                               const FieldSpec& field,
                                               std::size_t key_symbols);

/// Uniformly random keys.
KeyBlock random_key_block(const FieldSpec& field, std::size_t n, std::size_t key_symbols, RandomSource& rng);

}  // namespace choke

#endif
