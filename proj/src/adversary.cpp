/*
 * Eavesdropper model for CHOKE
 */

#include <choke/adversary.h>

#include <choke/error.h>

#include <algorithm>

namespace choke {

BreakSet::BreakSet(std::vector<std::size_t> broken, std::size_t n) : m_broken(std::move(broken)) {
   std::sort(m_broken.begin(), m_broken.end());
   m_broken.erase(std::unique(m_broken.begin(), m_broken.end()), m_broken.end());
   if(!m_broken.empty() && m_broken.back() >= n) {
      throw DomainError("broken KEM index " + std::to_string(m_broken.back() + 1) + " out of range 1.." +
                        std::to_string(n));
   }
}

bool BreakSet::contains(std::size_t i) const {
   return std::binary_search(m_broken.begin(), m_broken.end(), i);
}

AdversaryView eve_view(const CiphertextBundle& bundle, const KemSuite& suite, const BreakSet& breaks) {
   if(bundle.scheme != Scheme::Choke || bundle.n != suite.n() || bundle.entries.size() != suite.n()) {
      throw DomainError("eve_view needs a CHOKE bundle produced with this suite");
   }
   if(!breaks.empty() && breaks.broken().back() >= suite.n()) {
      throw DomainError("break set index out of range");
   }
   AdversaryView view{bundle.entries, {}, Matrix(suite.field(), 0, 0), {}, suite.field()};
   for(const auto& s : suite.slots()) {
      view.public_keys.push_back(s.keys.public_key);
   }
   for(auto i : breaks.broken()) {
      const auto& s = suite.slot(i);
      const auto& e = bundle.entries[i];
      const auto plain = s.kem->decapsulate(KemCiphertext{e.kem, e.bytes}, s.keys.secret_key);
      view.revealed.emplace(i, unpack_symbols(plain, suite.field()));
   }
   return view;
}

AdversaryView eve_view(const CiphertextBundle& bundle,
                       const KemSuite& suite,
                       const BreakSet& breaks,
                       const GeneratorMatrix& g) {
   if(g.n() != suite.n() || g.spec() != suite.field()) {
      throw DomainError("generator matrix does not match the suite");
   }
   auto view = eve_view(bundle, suite, breaks);
   view.generator = g.entries();
   return view;
}

RecoveryVerdict attempt_key_recovery(const AdversaryView& view, const Matrix& g) {
   if(!g.is_square() || g.spec() != view.field) {
      throw DomainError("generator does not match the adversary view");
   }
   const std::size_t n = g.rows();
   RecoveryVerdict verdict;
   for(const auto& [i, row] : view.revealed) {
      if(i >= n) {
         throw DomainError("revealed slot out of range");
      }
      verdict.broken.push_back(i);
      std::vector<std::uint32_t> column(n);
      for(std::size_t r = 0; r != n; ++r) {
         column[r] = g(r, i);
      }
      verdict.leaked_combinations.push_back(std::move(column));
   }

   const auto& f = g.spec();
   const Matrix observed = g.select_columns(verdict.broken);
   const std::size_t d = view.revealed.empty() ? 0 : view.revealed.begin()->second.size();
   for(std::size_t j = 0; j != n; ++j) {
      KeyVerdict kv;
      if(!verdict.broken.empty()) {
         std::vector<std::uint32_t> e(n, 0);
         e[j] = 1;
         // k_j = sum_s a_s X_s whenever G_broken * a = e_j.
         if(const auto a = solve_linear(observed, e)) {
            std::vector<std::uint32_t> key(d, 0);
            for(std::size_t s = 0; s != verdict.broken.size(); ++s) {
               const auto& xs = view.revealed.at(verdict.broken[s]);
               for(std::size_t c = 0; c != d; ++c) {
                  key[c] = f.add(key[c], f.mul((*a)[s], xs[c]));
               }
            }
            kv.recovered = std::move(key);
         }
      }
      verdict.keys.push_back(std::move(kv));
   }
   return verdict;
}

RecoveryVerdict attempt_key_recovery(const AdversaryView& view, const GeneratorMatrix& g) {
   return attempt_key_recovery(view, g.entries());
}

namespace {

std::uint64_t ciphertext_value(ByteView ct) {
   std::uint64_t v = 0;
   for(auto b : ct) {
      v = (v << 8) | b;
   }
   return v;
}

}  // namespace

ExperimentResult real_ideal_experiment(const Matrix& g, std::size_t unbroken_slot, std::uint64_t ciphertext_space) {
   if(!g.is_square()) {
      throw DomainError("generator matrix must be square");
   }
   const std::size_t n = g.rows();
   if(unbroken_slot >= n) {
      throw DomainError("unbroken slot out of range");
   }
   if(ciphertext_space == 0 || ciphertext_space > 256) {
      throw DomainError("experiment ciphertext space must be 1..256");
   }
   const auto& f = g.spec();
   const std::uint64_t q = f.order();
   std::uint64_t tuples = 1;
   for(std::size_t i = 0; i != n; ++i) {
      tuples *= q;
      if(tuples > kExperimentEnumerationBound) {
         throw ResourceError("real_ideal_experiment: q^n exceeds the enumeration bound");
      }
   }

   const TableKem kem(1, ciphertext_space);
   const Bytes zero_message = pack_symbols(std::vector<std::uint32_t>{0}, f);

   std::vector<std::uint64_t> real_views;
   std::vector<std::uint64_t> ideal_views;
   std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> real_joint(n);
   std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> ideal_joint(n);

   std::vector<std::uint32_t> k(n);
   std::vector<std::uint32_t> x(n);
   for(std::uint64_t idx = 0; idx != tuples; ++idx) {
      std::uint64_t rest = idx;
      for(std::size_t i = 0; i != n; ++i) {
         k[i] = static_cast<std::uint32_t>(rest % q);
         rest /= q;
      }
      for(std::size_t col = 0; col != n; ++col) {
         x[col] = 0;
         for(std::size_t i = 0; i != n; ++i) {
            x[col] = f.add(x[col], f.mul(k[i], g(i, col)));
         }
      }
      // Revealed symbols of every other slot, packed base q.
      std::uint64_t revealed = 0;
      for(std::size_t col = 0; col != n; ++col) {
         if(col != unbroken_slot) {
            revealed = revealed * q + x[col];
         }
      }
      const Bytes coded = pack_symbols(std::vector<std::uint32_t>{x[unbroken_slot]}, f);

      for(std::uint64_t r = 0; r != ciphertext_space; ++r) {
         // Fresh keypairs so each enc sees an empty table; the tape fixes the slot draw.
         ScriptedRandom gen_tape(std::vector<std::uint64_t>{0});
         const auto real_keys = kem.generate(gen_tape);
         ScriptedRandom real_tape({r});
         const auto c_real = kem.encapsulate(real_keys.public_key, coded, real_tape);
         if(kem.decapsulate(c_real, real_keys.secret_key) != coded) {
            throw Error("TableKem failed to decapsulate inside the experiment");
         }

         ScriptedRandom gen_tape2(std::vector<std::uint64_t>{0});
         const auto ideal_keys = kem.generate(gen_tape2);
         ScriptedRandom ideal_tape({r});
         const auto c_ideal = kem.encapsulate(ideal_keys.public_key, zero_message, ideal_tape);

         const std::uint64_t real_view = revealed * ciphertext_space + ciphertext_value(c_real.bytes);
         const std::uint64_t ideal_view = revealed * ciphertext_space + ciphertext_value(c_ideal.bytes);
         real_views.push_back(real_view);
         ideal_views.push_back(ideal_view);
         for(std::size_t j = 0; j != n; ++j) {
            real_joint[j].emplace_back(k[j], real_view);
            ideal_joint[j].emplace_back(k[j], ideal_view);
         }
      }
   }

   ExperimentResult result;
   result.distance = statistical_distance(real_views, ideal_views);
   for(std::size_t j = 0; j != n; ++j) {
      result.mi_ideal.push_back(exact_mutual_information(ideal_joint[j]));
      result.mi_real.push_back(exact_mutual_information(real_joint[j]));
   }
   return result;
}

Fraction xorkem_real_ideal_smoke(const Matrix& g, std::size_t unbroken_slot, std::size_t samples, RandomSource& rng) {
   if(!g.is_square() || unbroken_slot >= g.rows()) {
      throw DomainError("bad generator or slot for the smoke test");
   }
   const auto& f = g.spec();
   const std::size_t n = g.rows();
   const XorKem kem(0);
   const auto keys = kem.generate(rng);
   const Bytes zero_message = pack_symbols(std::vector<std::uint32_t>{0}, f);

   // Only the first ciphertext body byte is compared; the nonce is message independent.
   std::vector<std::uint64_t> real;
   std::vector<std::uint64_t> ideal;
   for(std::size_t s = 0; s != samples; ++s) {
      std::uint32_t x = 0;
      for(std::size_t i = 0; i != n; ++i) {
         x = f.add(x, f.mul(static_cast<std::uint32_t>(rng.uniform(f.order())), g(i, unbroken_slot)));
      }
      const auto c_real = kem.encapsulate(keys.public_key, pack_symbols(std::vector<std::uint32_t>{x}, f), rng);
      const auto c_ideal = kem.encapsulate(keys.public_key, zero_message, rng);
      real.push_back(c_real.bytes[XorKem::kNonceBytes]);
      ideal.push_back(c_ideal.bytes[XorKem::kNonceBytes]);
   }
   return statistical_distance(real, ideal);
}

}  // namespace choke
