/*
 * Hybrid key transport schemes with exact cost meters
 */

#include <choke/schemes.h>

#include <choke/error.h>

#include <numeric>

namespace choke {

std::string scheme_name(Scheme s) {
   switch(s) {
      case Scheme::Choke:
         return "choke";
      case Scheme::Serial:
         return "serial";
      case Scheme::Combiner:
         return "combiner";
   }
   return "unknown";
}

Scheme parse_scheme(std::string_view name) {
   if(name == "choke") {
      return Scheme::Choke;
   }
   if(name == "serial") {
      return Scheme::Serial;
   }
   if(name == "combiner") {
      return Scheme::Combiner;
   }
   throw DomainError("unknown scheme '" + std::string(name) + "'");
}

KemSuite::KemSuite(const FieldSpec& field, std::size_t key_symbols, std::vector<SuiteSlot> slots) :
      m_field(field), m_key_symbols(key_symbols), m_slots(std::move(slots)) {
   if(m_slots.size() < 2) {
      throw DomainError("a KEM suite needs at least two KEMs");
   }
   if(key_symbols == 0) {
      throw DomainError("key length must be at least one symbol");
   }
   for(std::size_t i = 0; i != m_slots.size(); ++i) {
      const auto& s = m_slots[i];
      if(!s.kem) {
         throw DomainError("suite slot " + std::to_string(i + 1) + " has no KEM");
      }
      if(s.keys.public_key.kem.value != s.kem->id().value) {
         throw DomainError("suite slot " + std::to_string(i + 1) + " holds keys of another KEM");
      }
      if(const auto ms = s.kem->message_spec()) {
         if(ms->field != field || ms->symbols != key_symbols) {
            throw DomainError("KEM_" + std::to_string(i + 1) + " does not accept " + field.to_string() + "^" +
                              std::to_string(key_symbols) + " messages");
         }
      }
   }
}

KemSuite KemSuite::generate(const FieldSpec& field,
                            std::size_t key_symbols,
                            const std::vector<std::shared_ptr<const Kem>>& kems,
                            RandomSource& rng) {
   std::vector<SuiteSlot> slots;
   for(const auto& kem : kems) {
      if(!kem) {
         throw DomainError("null KEM in suite");
      }
      slots.push_back(SuiteSlot{kem, kem->generate(rng)});
   }
   return KemSuite(field, key_symbols, std::move(slots));
}

std::size_t CiphertextBundle::total_bytes() const {
   std::size_t total = 0;
   for(const auto& e : entries) {
      total += e.bytes.size();
   }
   return total;
}

std::size_t expected_entry_count(Scheme scheme, std::size_t n) {
   return scheme == Scheme::Combiner ? n * n : n;
}

std::vector<std::size_t> serial_chain_order(std::size_t n) {
   std::vector<std::size_t> order(n);
   std::iota(order.begin(), order.end(), 0);
   return order;
}

std::uint64_t CostReport::total_enc_calls() const {
   std::uint64_t t = 0;
   for(const auto& s : slots) {
      t += s.enc_calls;
   }
   return t;
}

std::uint64_t CostReport::total_dec_calls() const {
   std::uint64_t t = 0;
   for(const auto& s : slots) {
      t += s.dec_calls;
   }
   return t;
}

namespace {

using Clock = std::chrono::steady_clock;

// Per-slot counters handed to the Kem hooks for one scheme run.
class Meter {
   public:
      explicit Meter(const KemSuite& suite) : m_suite(suite), m_counters(suite.n()), m_start(Clock::now()) {}

      CallCounter* slot(std::size_t i) { return &m_counters[i]; }

      CostReport finish(const CiphertextBundle& bundle) const {
         CostReport r;
         for(std::size_t i = 0; i != m_counters.size(); ++i) {
            r.slots.push_back(SlotCost{m_suite.slot(i).kem->id().value, m_counters[i].enc, m_counters[i].dec});
         }
         for(const auto& e : bundle.entries) {
            r.entry_bytes.push_back(e.bytes.size());
            r.bytes_sent += e.bytes.size();
         }
         r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - m_start);
         return r;
      }

   private:
      const KemSuite& m_suite;
      std::vector<CallCounter> m_counters;
      Clock::time_point m_start;
};

void check_bundle(const CiphertextBundle& bundle, Scheme scheme, const KemSuite& suite) {
   if(bundle.scheme != scheme) {
      throw DomainError("bundle was produced by scheme '" + scheme_name(bundle.scheme) + "', expected '" +
                        scheme_name(scheme) + "'");
   }
   if(bundle.n != suite.n()) {
      throw DomainError("bundle carries n=" + std::to_string(bundle.n) + " but the suite has n=" +
                        std::to_string(suite.n()));
   }
   if(bundle.field != suite.field()) {
      throw DomainError("bundle field " + bundle.field.to_string() + " does not match suite field " +
                        suite.field().to_string());
   }
   if(bundle.entries.size() != expected_entry_count(scheme, suite.n())) {
      throw DomainError("bundle has " + std::to_string(bundle.entries.size()) + " entries, expected " +
                        std::to_string(expected_entry_count(scheme, suite.n())));
   }
}

void check_keys(const KeyBlock& keys, const KemSuite& suite) {
   if(keys.rows() != suite.n() || keys.spec() != suite.field() || keys.length() != suite.key_symbols()) {
      throw DomainError("key block shape or field does not match the suite");
   }
}

// Decapsulates one entry under a slot, mapping KEM failures to a DecapsulationError.
Bytes open_entry(const KemSuite& suite, std::size_t slot, const BundleEntry& entry, CallCounter* counter) {
   const auto& s = suite.slot(slot);
   if(entry.kem != s.kem->id().value) {
      throw DecapsulationError(slot, entry.kem,
                               "entry was produced by KEM id " + std::to_string(entry.kem) +
                                  " but the suite slot uses id " + std::to_string(s.kem->id().value));
   }
   try {
      return s.kem->decapsulate(KemCiphertext{entry.kem, entry.bytes}, s.keys.secret_key, counter);
   } catch(const DecapsulationError&) {
      throw;
   } catch(const Error& e) {
      throw DecapsulationError(slot, entry.kem, e.what());
   }
}

std::vector<std::uint32_t> unpack_for_slot(ByteView bytes, const KemSuite& suite, std::size_t slot) {
   try {
      auto symbols = unpack_symbols(bytes, suite.field());
      if(symbols.size() != suite.key_symbols()) {
         throw DecodeError("expected " + std::to_string(suite.key_symbols()) + " symbols, got " +
                           std::to_string(symbols.size()));
      }
      return symbols;
   } catch(const DecodeError& e) {
      throw DecapsulationError(slot, suite.slot(slot).kem->id().value, e.what());
   }
}

// Adapts a PRF stream to RandomSource so uniform() rejection sampling is shared.
class PrfRandom final : public RandomSource {
   public:
      explicit PrfRandom(ByteView input) : m_stream(input) {}

      std::uint64_t next_u64() override { return m_stream.next_u64(); }

   private:
      PrfStream m_stream;
};

}  // namespace

Bytes pack_symbols(std::span<const std::uint32_t> symbols, const FieldSpec& field) {
   const auto width = field.symbol_bytes();
   Bytes out;
   out.reserve(symbols.size() * width);
   for(auto v : symbols) {
      if(v >= field.order()) {
         throw DomainError("symbol out of range for " + field.to_string());
      }
      if(width == 2) {
         out.push_back(static_cast<std::uint8_t>(v >> 8));
      }
      out.push_back(static_cast<std::uint8_t>(v));
   }
   return out;
}

std::vector<std::uint32_t> unpack_symbols(ByteView bytes, const FieldSpec& field) {
   const auto width = field.symbol_bytes();
   if(bytes.size() % width != 0) {
      throw DecodeError("symbol stream length " + std::to_string(bytes.size()) + " is not a multiple of " +
                        std::to_string(width));
   }
   std::vector<std::uint32_t> out;
   out.reserve(bytes.size() / width);
   for(std::size_t i = 0; i < bytes.size(); i += width) {
      std::uint32_t v = bytes[i];
      if(width == 2) {
         v = (v << 8) | bytes[i + 1];
      }
      if(v >= field.order()) {
         throw DecodeError("decoded symbol " + std::to_string(v) + " is not an element of " + field.to_string());
      }
      out.push_back(v);
   }
   return out;
}

KeyBlock random_key_block(const FieldSpec& field, std::size_t n, std::size_t key_symbols, RandomSource& rng) {
   KeyBlock k(field, n, key_symbols);
   for(std::size_t r = 0; r != n; ++r) {
      for(std::size_t c = 0; c != key_symbols; ++c) {
         k.symbols()(r, c) = static_cast<std::uint32_t>(rng.uniform(field.order()));
      }
   }
   return k;
}

// CHOKE

EncapResult choke_encap(const KeyBlock& keys, const KemSuite& suite, const GeneratorMatrix& g, RandomSource& rng) {
   check_keys(keys, suite);
   if(g.n() != suite.n() || g.spec() != suite.field()) {
      throw DomainError("generator matrix does not match the suite");
   }
   Meter meter(suite);
   const CodedBlock coded = encode(keys, g);

   CiphertextBundle bundle{Scheme::Choke, suite.field(), suite.n(), {}};
   for(std::size_t i = 0; i != suite.n(); ++i) {
      const auto& s = suite.slot(i);
      auto ct = s.kem->encapsulate(s.keys.public_key, pack_symbols(coded.row(i), suite.field()), rng, meter.slot(i));
      bundle.entries.push_back(BundleEntry{ct.kem, std::move(ct.bytes)});
   }
   auto cost = meter.finish(bundle);
   return EncapResult{std::move(bundle), std::move(cost)};
}

DecapResult choke_decap(const CiphertextBundle& bundle, const KemSuite& suite, const GeneratorMatrix& g) {
   check_bundle(bundle, Scheme::Choke, suite);
   if(g.n() != suite.n() || g.spec() != suite.field()) {
      throw DomainError("generator matrix does not match the suite");
   }
   Meter meter(suite);
   CodedBlock coded(suite.field(), suite.n(), suite.key_symbols());
   for(std::size_t i = 0; i != suite.n(); ++i) {
      const auto symbols = unpack_for_slot(open_entry(suite, i, bundle.entries[i], meter.slot(i)), suite, i);
      for(std::size_t c = 0; c != symbols.size(); ++c) {
         coded.symbols()(i, c) = symbols[c];
      }
   }
   auto keys = decode(coded, g);
   return DecapResult{std::move(keys), meter.finish(bundle)};
}

// Serial

EncapResult serial_encap(const KeyBlock& keys, const KemSuite& suite, RandomSource& rng) {
   check_keys(keys, suite);
   Meter meter(suite);
   const auto order = serial_chain_order(suite.n());
   CiphertextBundle bundle{Scheme::Serial, suite.field(), suite.n(), {}};
   for(std::size_t j = 0; j != suite.n(); ++j) {
      Bytes message = pack_symbols(keys.row(j), suite.field());
      std::uint16_t outer = 0;
      for(auto i : order) {
         const auto& s = suite.slot(i);
         auto ct = s.kem->encapsulate(s.keys.public_key, message, rng, meter.slot(i));
         message = std::move(ct.bytes);
         outer = ct.kem;
      }
      bundle.entries.push_back(BundleEntry{outer, std::move(message)});
   }
   auto cost = meter.finish(bundle);
   return EncapResult{std::move(bundle), std::move(cost)};
}

DecapResult serial_decap(const CiphertextBundle& bundle, const KemSuite& suite) {
   check_bundle(bundle, Scheme::Serial, suite);
   Meter meter(suite);
   const auto order = serial_chain_order(suite.n());
   KeyBlock keys(suite.field(), suite.n(), suite.key_symbols());
   for(std::size_t j = 0; j != suite.n(); ++j) {
      BundleEntry stage = bundle.entries[j];
      for(auto it = order.rbegin(); it != order.rend(); ++it) {
         const auto i = *it;
         // Inner stages carry no explicit KEM tag; they inherit the slot's id.
         stage.kem = (it == order.rbegin()) ? stage.kem : suite.slot(i).kem->id().value;
         stage.bytes = open_entry(suite, i, stage, meter.slot(i));
      }
      const auto symbols = unpack_for_slot(stage.bytes, suite, order.front());
      for(std::size_t c = 0; c != symbols.size(); ++c) {
         keys.symbols()(j, c) = symbols[c];
      }
   }
   return DecapResult{std::move(keys), meter.finish(bundle)};
}

// Combiner

std::vector<std::uint32_t> combiner_derive_key(std::span<const Bytes> packed_blocks,
                                               const FieldSpec& field,
                                               std::size_t key_symbols) {
   Bytes input;
   for(const auto& b : packed_blocks) {
      input.insert(input.end(), b.begin(), b.end());
   }
   PrfRandom prf(input);
   std::vector<std::uint32_t> key(key_symbols);
   for(auto& v : key) {
      v = static_cast<std::uint32_t>(prf.uniform(field.order()));
   }
   return key;
}

CombinerEncapResult combiner_encap(const KemSuite& suite, RandomSource& rng) {
   const std::size_t n = suite.n();
   Meter meter(suite);
   CiphertextBundle bundle{Scheme::Combiner, suite.field(), n, {}};
   KeyBlock keys(suite.field(), n, suite.key_symbols());
   for(std::size_t j = 0; j != n; ++j) {
      std::vector<Bytes> blocks;
      for(std::size_t i = 0; i != n; ++i) {
         std::vector<std::uint32_t> block(suite.key_symbols());
         for(auto& v : block) {
            v = static_cast<std::uint32_t>(rng.uniform(suite.field().order()));
         }
         blocks.push_back(pack_symbols(block, suite.field()));
      }
      for(std::size_t i = 0; i != n; ++i) {
         const auto& s = suite.slot(i);
         auto ct = s.kem->encapsulate(s.keys.public_key, blocks[i], rng, meter.slot(i));
         bundle.entries.push_back(BundleEntry{ct.kem, std::move(ct.bytes)});
      }
      const auto key = combiner_derive_key(blocks, suite.field(), suite.key_symbols());
      for(std::size_t c = 0; c != key.size(); ++c) {
         keys.symbols()(j, c) = key[c];
      }
   }
   auto cost = meter.finish(bundle);
   return CombinerEncapResult{std::move(bundle), std::move(cost), std::move(keys)};
}

DecapResult combiner_decap(const CiphertextBundle& bundle, const KemSuite& suite) {
   check_bundle(bundle, Scheme::Combiner, suite);
   const std::size_t n = suite.n();
   Meter meter(suite);
   KeyBlock keys(suite.field(), n, suite.key_symbols());
   for(std::size_t j = 0; j != n; ++j) {
      std::vector<Bytes> blocks;
      for(std::size_t i = 0; i != n; ++i) {
         try {
            auto block = open_entry(suite, i, bundle.entries[combiner_entry_index(j, i, n)], meter.slot(i));
            unpack_for_slot(block, suite, i);
            blocks.push_back(std::move(block));
         } catch(const Error& e) {
            throw KeyDerivationError(j, i, e.what());
         }
      }
      const auto key = combiner_derive_key(blocks, suite.field(), suite.key_symbols());
      for(std::size_t c = 0; c != key.size(); ++c) {
         keys.symbols()(j, c) = key[c];
      }
   }
   return DecapResult{std::move(keys), meter.finish(bundle)};
}

// Analytic costs

CostPrediction predicted_costs(Scheme scheme, const KemSuite& suite) {
   const std::size_t n = suite.n();
   const std::size_t mb = suite.message_bytes();
   const std::uint64_t calls = scheme == Scheme::Choke ? 1 : n;

   CostPrediction p;
   std::vector<std::uint64_t> lens;
   for(const auto& s : suite.slots()) {
      lens.push_back(s.kem->ciphertext_len(mb));
      p.lower_bound_bytes += lens.back();
   }

   CostReport enc;
   CostReport dec;
   for(const auto& s : suite.slots()) {
      enc.slots.push_back(SlotCost{s.kem->id().value, calls, 0});
      dec.slots.push_back(SlotCost{s.kem->id().value, 0, calls});
   }
   switch(scheme) {
      case Scheme::Choke:
         enc.entry_bytes = lens;
         break;
      case Scheme::Serial: {
         std::size_t chained = mb;
         for(auto i : serial_chain_order(n)) {
            chained = suite.slot(i).kem->ciphertext_len(chained);
         }
         enc.entry_bytes.assign(n, chained);
         break;
      }
      case Scheme::Combiner:
         for(std::size_t j = 0; j != n; ++j) {
            enc.entry_bytes.insert(enc.entry_bytes.end(), lens.begin(), lens.end());
         }
         break;
   }
   enc.bytes_sent = std::accumulate(enc.entry_bytes.begin(), enc.entry_bytes.end(), std::uint64_t{0});
   dec.entry_bytes = enc.entry_bytes;
   dec.bytes_sent = enc.bytes_sent;
   p.encap = std::move(enc);
   p.decap = std::move(dec);
   return p;
}

}  // namespace choke
