#include <doctest.h>

#include <choke/error.h>
#include <choke/schemes.h>

#include "oracles.h"

#include <numeric>

using namespace choke;

namespace {

// Forwards to a wrapped KEM and counts calls on its own, without the meter hooks.
class SpyKem final : public Kem {
   public:
      explicit SpyKem(std::shared_ptr<const Kem> inner) : Kem(inner->id()), m_inner(std::move(inner)) {}

      std::size_t ciphertext_len(std::size_t len) const override { return m_inner->ciphertext_len(len); }

      std::uint32_t parameter() const override { return m_inner->parameter(); }

      std::shared_ptr<const Kem> with_parameter(std::uint32_t p) const override {
         return std::make_shared<SpyKem>(m_inner->with_parameter(p));
      }

      mutable std::uint64_t enc = 0;
      mutable std::uint64_t dec = 0;

   protected:
      KemKeyPair do_generate(RandomSource& rng) const override { return m_inner->generate(rng); }

      Bytes do_encapsulate(const KemPublicKey& pk, ByteView m, RandomSource& rng) const override {
         ++enc;
         return m_inner->encapsulate(pk, m, rng).bytes;
      }

      Bytes do_decapsulate(ByteView ct, const KemSecretKey& sk) const override {
         ++dec;
         return m_inner->decapsulate(KemCiphertext{id().value, Bytes(ct.begin(), ct.end())}, sk);
      }

   private:
      std::shared_ptr<const Kem> m_inner;
};

struct SpySuite {
      std::vector<std::shared_ptr<SpyKem>> spies;
      KemSuite suite;
};

// Alternates XorKem overheads, or TableKem widths, across slots.
SpySuite make_suite(std::size_t n, bool table, const FieldSpec& f, std::size_t d, RandomSource& rng) {
   std::vector<std::shared_ptr<SpyKem>> spies;
   std::vector<std::shared_ptr<const Kem>> kems;
   for(std::size_t i = 0; i != n; ++i) {
      std::shared_ptr<const Kem> inner;
      if(table) {
         inner = std::make_shared<TableKem>(4);
      } else {
         inner = std::make_shared<XorKem>(i % 2 ? 32 : 16);
      }
      spies.push_back(std::make_shared<SpyKem>(inner));
      kems.push_back(spies.back());
   }
   return SpySuite{spies, KemSuite::generate(f, d, kems, rng)};
}

FieldSpec field_for(std::size_t n) {
   return n == 2 ? FieldSpec::prime(5) : FieldSpec::binary(8);
}

GeneratorMatrix generator_for(std::size_t n, const FieldSpec& f) {
   return build_generator(n, std::min<std::size_t>(n - 1, 3), f);
}

void reset(SpySuite& s) {
   for(auto& k : s.spies) {
      k->enc = 0;
      k->dec = 0;
   }
}

}  // namespace

TEST_CASE("pack_symbols") {
   CHECK(pack_symbols(std::vector<std::uint32_t>{1, 4}, FieldSpec::prime(5)) == Bytes{1, 4});
   CHECK(pack_symbols(std::vector<std::uint32_t>{0x1234, 7}, FieldSpec::binary(16)) == Bytes{0x12, 0x34, 0, 7});
   CHECK(unpack_symbols(Bytes{0x12, 0x34}, FieldSpec::binary(16)) == std::vector<std::uint32_t>{0x1234});
   CHECK_THROWS_AS(unpack_symbols(Bytes{1, 2, 3}, FieldSpec::binary(16)), DecodeError);
   CHECK_THROWS_AS(unpack_symbols(Bytes{5}, FieldSpec::prime(5)), DecodeError);
   CHECK_THROWS_AS(pack_symbols(std::vector<std::uint32_t>{5}, FieldSpec::prime(5)), DomainError);
}

TEST_CASE("measured costs equal predictions and the independent spy counts") {
   SplitMix64Rng rng(21);
   const std::size_t d = 4;
   for(bool table : {false, true}) {
      for(std::size_t n : {2, 3, 4, 8}) {
         CAPTURE(n);
         CAPTURE(table);
         const auto f = field_for(n);
         auto s = make_suite(n, table, f, d, rng);
         const auto& suite = s.suite;
         const auto g = generator_for(n, f);
         const auto keys = random_key_block(f, n, d, rng);
         const std::size_t mb = d * f.symbol_bytes();

         // Hand-computed ciphertext lengths per slot.
         std::vector<std::uint64_t> len(n);
         for(std::size_t i = 0; i != n; ++i) {
            len[i] = table ? 4 : 8 + mb + (i % 2 ? 32 : 16);
         }
         const std::uint64_t sum_len = std::accumulate(len.begin(), len.end(), std::uint64_t{0});
         std::uint64_t chained = mb;
         for(std::size_t i = 0; i != n; ++i) {
            chained = table ? 4 : 8 + chained + (i % 2 ? 32 : 16);
         }

         // CHOKE
         reset(s);
         auto ce = choke_encap(keys, suite, g, rng);
         auto cd = choke_decap(ce.bundle, suite, g);
         CHECK(cd.keys == keys);
         for(std::size_t i = 0; i != n; ++i) {
            CHECK(s.spies[i]->enc == 1);
            CHECK(s.spies[i]->dec == 1);
            CHECK(ce.cost.slots[i].enc_calls == 1);
            CHECK(cd.cost.slots[i].dec_calls == 1);
            CHECK(ce.cost.entry_bytes[i] == len[i]);
         }
         CHECK(ce.cost.bytes_sent == sum_len);
         CHECK(ce.cost.total_enc_calls() == n);
         const auto cp = predicted_costs(Scheme::Choke, suite);
         CHECK(cp.encap.same_counts(ce.cost));
         CHECK(cp.decap.same_counts(cd.cost));
         CHECK(cp.lower_bound_bytes == sum_len);

         // Serial
         reset(s);
         auto se = serial_encap(keys, suite, rng);
         auto sd = serial_decap(se.bundle, suite);
         CHECK(sd.keys == keys);
         for(std::size_t i = 0; i != n; ++i) {
            CHECK(s.spies[i]->enc == n);
            CHECK(s.spies[i]->dec == n);
         }
         CHECK(se.cost.bytes_sent == n * chained);
         const auto sp = predicted_costs(Scheme::Serial, suite);
         CHECK(sp.encap.same_counts(se.cost));
         CHECK(sp.decap.same_counts(sd.cost));

         // Combiner
         reset(s);
         auto me = combiner_encap(suite, rng);
         auto md = combiner_decap(me.bundle, suite);
         CHECK(md.keys == me.keys);
         for(std::size_t i = 0; i != n; ++i) {
            CHECK(s.spies[i]->enc == n);
            CHECK(s.spies[i]->dec == n);
         }
         CHECK(me.bundle.entries.size() == n * n);
         CHECK(me.cost.bytes_sent == n * sum_len);
         CHECK(me.cost.bytes_sent == n * ce.cost.bytes_sent);
         const auto mp = predicted_costs(Scheme::Combiner, suite);
         CHECK(mp.encap.same_counts(me.cost));
         CHECK(mp.decap.same_counts(md.cost));

         CHECK(ce.cost.total_enc_calls() * n == se.cost.total_enc_calls());
         CHECK(ce.cost.bytes_sent <= se.cost.bytes_sent);
      }
   }
}

TEST_CASE("CHOKE round trips over several fields") {
   SplitMix64Rng rng(4);
   for(const auto& f : {FieldSpec::prime(7), FieldSpec::prime(65521), FieldSpec::binary(8), FieldSpec::binary(16)}) {
      for(std::size_t n : {2, 3, 5}) {
         if(n >= f.order()) {
            continue;
         }
         const auto kems = std::vector<std::shared_ptr<const Kem>>(n, std::make_shared<XorKem>());
         const auto suite = KemSuite::generate(f, 3, kems, rng);
         const auto g = build_generator(n, 1, f);
         for(int t = 0; t != 20; ++t) {
            const auto keys = random_key_block(f, n, 3, rng);
            const auto enc = choke_encap(keys, suite, g, rng);
            REQUIRE(choke_decap(enc.bundle, suite, g).keys == keys);
         }
      }
   }
}

TEST_CASE("CHOKE bundle entries carry the coded symbols") {
   // TableKem lets the test read each plaintext back out of the slot's table.
   SplitMix64Rng rng(5);
   const auto f = FieldSpec::prime(5);
   const std::vector<std::shared_ptr<const Kem>> kems{std::make_shared<TableKem>(2), std::make_shared<TableKem>(2)};
   const auto suite = KemSuite::generate(f, 1, kems, rng);
   const auto g = build_generator(2, 1, f, std::vector<std::uint32_t>{1, 2});
   KeyBlock keys(Matrix::from_rows(f, {{3}, {4}}));
   const auto enc = choke_encap(keys, suite, g, rng);
   const Bytes x0 = suite.slot(0).kem->decapsulate(KemCiphertext{kTableKemId, enc.bundle.entries[0].bytes},
                                                   suite.slot(0).keys.secret_key);
   const Bytes x1 = suite.slot(1).kem->decapsulate(KemCiphertext{kTableKemId, enc.bundle.entries[1].bytes},
                                                   suite.slot(1).keys.secret_key);
   CHECK(x0 == Bytes{2});
   CHECK(x1 == Bytes{1});
}

TEST_CASE("combiner key derivation") {
   const auto f = FieldSpec::binary(8);
   const std::vector<Bytes> blocks{{1, 2, 3}, {4, 5}};
   const auto key = combiner_derive_key(blocks, f, 3);
   // Order 256 divides 2^64, so each symbol is the low byte of one PRF word.
   const auto stream = test::reference_expand(Bytes{1, 2, 3, 4, 5}, 24);
   CHECK(key == std::vector<std::uint32_t>{stream[0], stream[8], stream[16]});

   for(std::size_t b = 0; b != blocks.size(); ++b) {
      auto changed = blocks;
      changed[b][0] ^= 1;
      CHECK(combiner_derive_key(changed, f, 3) != key);
   }
   for(auto v : combiner_derive_key(blocks, FieldSpec::prime(5), 50)) {
      CHECK(v < 5);
   }
}

TEST_CASE("a corrupted entry names the failing KEM") {
   SplitMix64Rng rng(6);
   const auto f = FieldSpec::prime(5);
   const auto kems = std::vector<std::shared_ptr<const Kem>>(3, std::make_shared<XorKem>());
   const auto suite = KemSuite::generate(f, 2, kems, rng);
   const auto g = build_generator(3, 1, f);
   const auto keys = random_key_block(f, 3, 2, rng);

   auto enc = choke_encap(keys, suite, g, rng);
   enc.bundle.entries[1].bytes[9] ^= 0x40;
   try {
      choke_decap(enc.bundle, suite, g);
      FAIL("expected DecapsulationError");
   } catch(const DecapsulationError& e) {
      CHECK(e.slot() == 1);
      CHECK(std::string(e.what()).find("KEM_2") != std::string::npos);
   }

   auto ser = serial_encap(keys, suite, rng);
   ser.bundle.entries[0].bytes[9] ^= 0x40;
   try {
      serial_decap(ser.bundle, suite);
      FAIL("expected DecapsulationError");
   } catch(const DecapsulationError& e) {
      CHECK(e.slot() == 2);
   }

   auto comb = combiner_encap(suite, rng);
   comb.bundle.entries[combiner_entry_index(2, 1, 3)].bytes[9] ^= 0x40;
   try {
      combiner_decap(comb.bundle, suite);
      FAIL("expected KeyDerivationError");
   } catch(const KeyDerivationError& e) {
      CHECK(e.key() == 2);
      CHECK(e.slot() == 1);
   }
}

TEST_CASE("bundle and suite mismatches") {
   SplitMix64Rng rng(7);
   const auto f = FieldSpec::prime(5);
   const auto kems = std::vector<std::shared_ptr<const Kem>>(2, std::make_shared<XorKem>());
   const auto suite = KemSuite::generate(f, 2, kems, rng);
   const auto g = build_generator(2, 1, f);
   const auto keys = random_key_block(f, 2, 2, rng);
   const auto enc = choke_encap(keys, suite, g, rng);

   CHECK_THROWS_AS(serial_decap(enc.bundle, suite), DomainError);
   CHECK_THROWS_AS(combiner_decap(enc.bundle, suite), DomainError);

   auto shortb = enc.bundle;
   shortb.entries.pop_back();
   CHECK_THROWS_AS(choke_decap(shortb, suite, g), DomainError);

   auto tagged = enc.bundle;
   tagged.entries[0].kem = kTableKemId;
   CHECK_THROWS_AS(choke_decap(tagged, suite, g), DecapsulationError);

   const auto other = KemSuite::generate(f, 2, kems, rng);
   CHECK_THROWS_AS(choke_decap(enc.bundle, other, g), DecapsulationError);

   CHECK_THROWS_AS(choke_encap(random_key_block(f, 3, 2, rng), suite, g, rng), DomainError);
   CHECK_THROWS_AS(choke_encap(random_key_block(f, 2, 3, rng), suite, g, rng), DomainError);
   CHECK_THROWS_AS(choke_encap(keys, suite, build_generator(3, 1, f), rng), DomainError);

   CHECK_THROWS_AS(KemSuite::generate(f, 2, {std::make_shared<XorKem>()}, rng), DomainError);
   CHECK_THROWS_AS(KemSuite::generate(f, 0, kems, rng), DomainError);
}

TEST_CASE("fixed seeds give identical bundles") {
   const auto f = FieldSpec::binary(8);
   auto run = [&](std::uint64_t seed) {
      SplitMix64Rng rng(seed);
      const auto kems = std::vector<std::shared_ptr<const Kem>>(4, std::make_shared<XorKem>());
      const auto suite = KemSuite::generate(f, 16, kems, rng);
      const auto keys = random_key_block(f, 4, 16, rng);
      const auto g = build_generator(4, 3, f);
      return std::vector<CiphertextBundle>{choke_encap(keys, suite, g, rng).bundle,
                                           serial_encap(keys, suite, rng).bundle,
                                           combiner_encap(suite, rng).bundle};
   };
   CHECK(run(1) == run(1));
   CHECK(run(1) != run(2));
}

TEST_CASE("scheme names") {
   for(auto s : {Scheme::Choke, Scheme::Serial, Scheme::Combiner}) {
      CHECK(parse_scheme(scheme_name(s)) == s);
   }
   CHECK_THROWS_AS(parse_scheme("CHOKE"), DomainError);
   CHECK(expected_entry_count(Scheme::Combiner, 3) == 9);
   CHECK(serial_chain_order(3) == std::vector<std::size_t>{0, 1, 2});
}
