/*
 * KEM contract, built-in toy KEMs and the KEM registry
 */

#include <choke/kem.h>

#include <choke/error.h>

#include <algorithm>
#include <limits>

namespace choke {

KemKeyPair Kem::generate(RandomSource& rng) const {
   auto kp = do_generate(rng);
   kp.public_key.kem = m_id;
   kp.secret_key.kem = m_id;
   return kp;
}

KemCiphertext Kem::encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng, CallCounter* meter) const {
   if(pk.kem.value != m_id.value) {
      throw DomainError("public key belongs to KEM id " + std::to_string(pk.kem.value) + ", not " +
                        std::to_string(m_id.value));
   }
   if(meter != nullptr) {
      ++meter->enc;
   }
   auto ct = do_encapsulate(pk, message, rng);
   if(ct.size() != ciphertext_len(message.size())) {
      throw Error(m_id.name + " produced a ciphertext of undeclared length");
   }
   return KemCiphertext{m_id.value, std::move(ct)};
}

Bytes Kem::decapsulate(const KemCiphertext& ct, const KemSecretKey& sk, CallCounter* meter) const {
   if(sk.kem.value != m_id.value) {
      throw DomainError("secret key belongs to KEM id " + std::to_string(sk.kem.value) + ", not " +
                        std::to_string(m_id.value));
   }
   if(ct.kem != m_id.value) {
      throw DomainError("ciphertext was produced by KEM id " + std::to_string(ct.kem) + ", not " +
                        std::to_string(m_id.value));
   }
   if(meter != nullptr) {
      ++meter->dec;
   }
   return do_decapsulate(ct.bytes, sk);
}

// XorKem

namespace {

Bytes concat(std::initializer_list<ByteView> parts) {
   Bytes out;
   for(auto p : parts) {
      out.insert(out.end(), p.begin(), p.end());
   }
   return out;
}

Bytes xor_tag(ByteView seed, ByteView nonce, ByteView body, std::size_t len) {
   static constexpr std::uint8_t kTagLabel[1] = {'T'};
   return prf_expand(concat({seed, nonce, body, kTagLabel}), len);
}

}  // namespace

std::shared_ptr<const Kem> XorKem::with_parameter(std::uint32_t overhead) const {
   return std::make_shared<XorKem>(overhead, id().value);
}

KemKeyPair XorKem::do_generate(RandomSource& rng) const {
   auto seed = rng.bytes(kSeedBytes);
   return KemKeyPair{KemPublicKey{id(), seed, nullptr}, KemSecretKey{id(), seed, nullptr}};
}

Bytes XorKem::do_encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng) const {
   if(pk.bytes.size() != kSeedBytes) {
      throw DomainError("XorKem public key must be 32 bytes");
   }
   const Bytes nonce = rng.bytes(kNonceBytes);
   Bytes body = prf_expand(concat({pk.bytes, nonce}), message.size());
   for(std::size_t i = 0; i != message.size(); ++i) {
      body[i] ^= message[i];
   }
   const Bytes tag = xor_tag(pk.bytes, nonce, body, m_overhead);
   return concat({nonce, body, tag});
}

Bytes XorKem::do_decapsulate(ByteView ct, const KemSecretKey& sk) const {
   if(sk.bytes.size() != kSeedBytes) {
      throw DomainError("XorKem secret key must be 32 bytes");
   }
   if(ct.size() < kNonceBytes + m_overhead) {
      throw DecodeError("XorKem ciphertext truncated: " + std::to_string(ct.size()) + " bytes");
   }
   const auto nonce = ct.first(kNonceBytes);
   const auto body = ct.subspan(kNonceBytes, ct.size() - kNonceBytes - m_overhead);
   const auto tag = ct.last(m_overhead);
   const Bytes expected = xor_tag(sk.bytes, nonce, body, m_overhead);
   if(!std::equal(tag.begin(), tag.end(), expected.begin(), expected.end())) {
      throw DecapsulationFailure("XorKem tag mismatch (wrong key or corrupted ciphertext)");
   }
   Bytes m = prf_expand(concat({sk.bytes, nonce}), body.size());
   for(std::size_t i = 0; i != body.size(); ++i) {
      m[i] ^= body[i];
   }
   return m;
}

// TableKem

namespace {

class DecapTable final : public KemState {
   public:
      std::map<std::uint64_t, Bytes> entries;
};

constexpr std::uint64_t kMaxTableSpace = 1ull << 56;

std::uint64_t default_space(std::uint32_t width) {
   return width >= 7 ? kMaxTableSpace : (1ull << (8 * width));
}

}  // namespace

TableKem::TableKem(std::uint32_t width, std::uint64_t space_size, std::uint16_t id) :
      Kem(KemId{id, "TableKem"}), m_width(width), m_space(space_size == 0 ? default_space(width) : space_size) {
   if(width == 0) {
      throw DomainError("TableKem ciphertext width must be at least one byte");
   }
   if(m_space > default_space(width)) {
      throw DomainError("TableKem space does not fit the ciphertext width");
   }
}

std::shared_ptr<const Kem> TableKem::with_parameter(std::uint32_t width) const {
   return std::make_shared<TableKem>(width, 0, id().value);
}

std::size_t TableKem::table_size(const KemSecretKey& sk) {
   const auto* table = dynamic_cast<const DecapTable*>(sk.state.get());
   return table == nullptr ? 0 : table->entries.size();
}

KemKeyPair TableKem::do_generate(RandomSource& rng) const {
   auto table = std::make_shared<DecapTable>();
   auto handle = rng.bytes(8);
   return KemKeyPair{KemPublicKey{id(), handle, table}, KemSecretKey{id(), handle, table}};
}

Bytes TableKem::do_encapsulate(const KemPublicKey& pk, ByteView message, RandomSource& rng) const {
   auto* table = dynamic_cast<DecapTable*>(pk.state.get());
   if(table == nullptr) {
      throw DomainError("TableKem public key has no table (keys are process-local)");
   }
   if(table->entries.size() >= m_space) {
      throw ResourceError("TableKem ciphertext space exhausted");
   }
   std::uint64_t slot = 0;
   do {
      slot = rng.uniform(m_space);
   } while(table->entries.contains(slot));
   table->entries.emplace(slot, Bytes(message.begin(), message.end()));

   Bytes ct(m_width, 0);
   for(std::size_t i = 0; i != std::min<std::size_t>(m_width, 8); ++i) {
      ct[m_width - 1 - i] = static_cast<std::uint8_t>(slot >> (8 * i));
   }
   return ct;
}

Bytes TableKem::do_decapsulate(ByteView ct, const KemSecretKey& sk) const {
   const auto* table = dynamic_cast<const DecapTable*>(sk.state.get());
   if(table == nullptr) {
      throw DomainError("TableKem secret key has no table (keys are process-local)");
   }
   if(ct.size() != m_width) {
      throw DecodeError("TableKem ciphertext must be " + std::to_string(m_width) + " bytes");
   }
   std::uint64_t slot = 0;
   for(std::size_t i = 0; i != ct.size(); ++i) {
      if(i + 8 < ct.size() && ct[i] != 0) {
         throw DecapsulationFailure("TableKem ciphertext not in table");
      }
      slot = (slot << 8) | ct[i];
   }
   const auto it = table->entries.find(slot);
   if(it == table->entries.end()) {
      throw DecapsulationFailure("TableKem ciphertext not in table");
   }
   return it->second;
}

// Registry

void KemRegistry::add(std::shared_ptr<const Kem> kem) {
   const auto id = kem->id().value;
   if(!m_kems.emplace(id, std::move(kem)).second) {
      throw ConflictError("KEM id " + std::to_string(id) + " already registered");
   }
}

std::shared_ptr<const Kem> KemRegistry::get(std::uint16_t id) const {
   const auto it = m_kems.find(id);
   if(it == m_kems.end()) {
      throw NotFoundError("no KEM registered with id " + std::to_string(id));
   }
   return it->second;
}

std::vector<std::uint16_t> KemRegistry::ids() const {
   std::vector<std::uint16_t> out;
   for(const auto& [id, kem] : m_kems) {
      out.push_back(id);
   }
   return out;
}

const KemRegistry& builtin_registry() {
   static const KemRegistry registry = [] {
      KemRegistry r;
      r.add(std::make_shared<XorKem>());
      r.add(std::make_shared<TableKem>());
      return r;
   }();
   return registry;
}

std::shared_ptr<const Kem> make_builtin_kem(std::uint16_t id, std::uint32_t parameter) {
   return builtin_registry().get(id)->with_parameter(parameter);
}

}  // namespace choke
