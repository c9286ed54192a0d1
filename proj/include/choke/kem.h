/*
 * KEM contract, built-in toy KEMs and the KEM registry
 *
 * A KEM here encapsulates a caller-supplied message (the coded symbol X_i)
 * rather than sampling its own key. Every concrete KEM, including adapters
 * for external implementations, derives from Kem and must declare its
 * ciphertext length as a deterministic function of the plaintext length.
 *
 * The built-in KEMs are test instruments and provide no real security:
 * XorKem publishes its seed as the public key, and TableKem is an idealised
 * oracle whose ciphertexts are random table slots.
 */

#ifndef CHOKE_KEM_H_
#define CHOKE_KEM_H_

#include <choke/gf.h>
#include <choke/prf.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace choke {

struct KemId {
      std::uint16_t value = 0;
      std::string name;

      bool operator==(const KemId& o) const { return value == o.value; }
};

inline constexpr std::uint16_t kXorKemId = 1;
inline constexpr std::uint16_t kTableKemId = 2;
/// Ids below this are reserved for built-ins.
inline constexpr std::uint16_t kFirstUserKemId = 16;

/// Private per-keypair state shared between the two halves of a keypair.
class KemState {
   public:
      virtual ~KemState() = default;
};

struct KemPublicKey {
      KemId kem;
      Bytes bytes;
      std::shared_ptr<KemState> state;
};

struct KemSecretKey {
      KemId kem;
      Bytes bytes;
      std::shared_ptr<KemState> state;
};

struct KemKeyPair {
      KemPublicKey public_key;
      KemSecretKey secret_key;
};

struct KemCiphertext {
      std::uint16_t kem = 0;
      Bytes bytes;
};

/// Counts calls made through one Kem entry point.
struct CallCounter {
      std::uint64_t enc = 0;
      std::uint64_t dec = 0;
};

/// Message space a KEM is restricted to, when it has one.
struct MessageSpec {
      FieldSpec field;
      std::size_t symbols;
};

class Kem {
   public:
      explicit Kem(KemId id) : m_id(std::move(id)) {}

      virtual ~Kem() = default;

      const KemId& id() const { return m_id; }

      KemKeyPair generate(RandomSource& rng) const;

      /// Increments meter->enc when a meter is supplied. Throws DomainError for a key of another KEM.
      KemCiphertext encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng, CallCounter* meter = nullptr) const;

      /// Increments meter->dec when a meter is supplied.
      Bytes decapsulate(const KemCiphertext& ct, const KemSecretKey& sk, CallCounter* meter = nullptr) const;

      virtual std::size_t ciphertext_len(std::size_t plaintext_len) const = 0;

      /// nullopt: any byte string is accepted.
      virtual std::optional<MessageSpec> message_spec() const { return std::nullopt; }

      /// Per-instance tuning value (XorKem overhead, TableKem ciphertext width).
      virtual std::uint32_t parameter() const = 0;

      /// Same algorithm and id with a different parameter.
      virtual std::shared_ptr<const Kem> with_parameter(std::uint32_t parameter) const = 0;

   protected:
      virtual KemKeyPair do_generate(RandomSource& rng) const = 0;
      virtual Bytes do_encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng) const = 0;
      virtual Bytes do_decapsulate(ByteView ct, const KemSecretKey& sk) const = 0;

   private:
      KemId m_id;
};

/// Seed-keyed stream cipher KEM.
///
/// gen: a 32 byte seed, used as both public and secret key.
/// enc: ct = nonce(8) || m ^ prf_expand(seed || nonce, |m|) || tag(overhead)
///      where tag = prf_expand(seed || nonce || body || 'T', overhead).
/// dec: rejects ciphertexts shorter than 8 + overhead, and with overhead > 0
///      rejects tag mismatches. With overhead 0 a wrong seed yields garbage.
class XorKem final : public Kem {
   public:
      static constexpr std::size_t kSeedBytes = 32;
      static constexpr std::size_t kNonceBytes = 8;

      explicit XorKem(std::uint32_t overhead = 16, std::uint16_t id = kXorKemId) :
            Kem(KemId{id, "XorKem"}), m_overhead(overhead) {}

      std::size_t ciphertext_len(std::size_t plaintext_len) const override {
         return kNonceBytes + plaintext_len + m_overhead;
      }

      std::uint32_t parameter() const override { return m_overhead; }

      std::shared_ptr<const Kem> with_parameter(std::uint32_t overhead) const override;

   protected:
      KemKeyPair do_generate(RandomSource& rng) const override;
      Bytes do_encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng) const override;
      Bytes do_decapsulate(ByteView ct, const KemSecretKey& sk) const override;

   private:
      std::uint32_t m_overhead;
};

/// Perfect-secrecy oracle KEM. Each ciphertext is a fresh uniformly random
/// slot of a fixed space, written big-endian into `width` bytes, and the
/// keypair's private table maps slots back to messages. The ciphertext is
/// independent of the message by construction.
///
/// A keypair's table is mutated by encapsulation; confine it to one thread.
class TableKem final : public Kem {
   public:
      /// space_size 0 selects min(256^width, 2^56).
      explicit TableKem(std::uint32_t width = 4, std::uint64_t space_size = 0, std::uint16_t id = kTableKemId);

      std::size_t ciphertext_len(std::size_t) const override { return m_width; }

      std::uint32_t parameter() const override { return m_width; }

      std::uint64_t space_size() const { return m_space; }

      std::shared_ptr<const Kem> with_parameter(std::uint32_t width) const override;

      /// Number of table entries recorded under this keypair.
      static std::size_t table_size(const KemSecretKey& sk);

   protected:
      KemKeyPair do_generate(RandomSource& rng) const override;
      Bytes do_encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng) const override;
      Bytes do_decapsulate(ByteView ct, const KemSecretKey& sk) const override;

   private:
      std::uint32_t m_width;
      std::uint64_t m_space;
};

class KemRegistry {
   public:
      /// Throws ConflictError when the id is taken.
      void add(std::shared_ptr<const Kem> kem);

      /// Throws NotFoundError.
      std::shared_ptr<const Kem> get(std::uint16_t id) const;

      bool contains(std::uint16_t id) const { return m_kems.contains(id); }

      /// Registered ids in increasing order.
      std::vector<std::uint16_t> ids() const;

   private:
      std::map<std::uint16_t, std::shared_ptr<const Kem>> m_kems;
};

/// XorKem (overhead 16) as id 1 and TableKem (width 4) as id 2.
const KemRegistry& builtin_registry();

/// A built-in KEM reconfigured with the given parameter.
std::shared_ptr<const Kem> make_builtin_kem(std::uint16_t id, std::uint32_t parameter);

}  // namespace choke

#endif
