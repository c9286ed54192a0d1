/*
 * Acceptance checks, one PASS/FAIL line per criterion
 */

#include <choke/adversary.h>
#include <choke/bench.h>
#include <choke/error.h>
#include <choke/gf.h>
#include <choke/iscode.h>
#include <choke/schemes.h>
#include <choke/wire.h>

#include "oracles.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <string>

using namespace choke;

namespace {

const std::string kData = CHOKE_TEST_DATA_DIR;

// Collects failed sub-checks; the first few are printed under the criterion line.
struct Checker {
      std::vector<std::string> failures;
      std::uint64_t checks = 0;

      void expect(bool ok, const std::string& what) {
         ++checks;
         if(!ok && failures.size() < 1000) {
            failures.push_back(what);
         }
      }
};

int g_failed = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Checker&)>& body) {
   Checker c;
   const auto t0 = std::chrono::steady_clock::now();
   try {
      body(c);
   } catch(const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
   }
   const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
   bool ok = c.failures.empty();
   std::string timing = std::to_string(dt).substr(0, 6) + " s";
   if(limit_s > 0) {
      timing += ", limit " + std::to_string(int(limit_s)) + " s";
      if(dt >= limit_s) {
         ok = false;
         c.failures.push_back("time limit exceeded");
      }
   }
   std::printf("criterion %d %s  %s (%llu checks, %s)\n", id, ok ? "PASS" : "FAIL", title.c_str(),
               static_cast<unsigned long long>(c.checks), timing.c_str());
   for(std::size_t i = 0; i != std::min<std::size_t>(c.failures.size(), 5); ++i) {
      std::printf("    %s\n", c.failures[i].c_str());
   }
   if(!ok) {
      ++g_failed;
   }
}

std::string slurp(const std::string& path) {
   std::ifstream in(path, std::ios::binary);
   if(!in) {
      throw std::runtime_error("cannot open " + path);
   }
   return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

Bytes slurp_bytes(const std::string& path) {
   const auto s = slurp(path);
   return Bytes(s.begin(), s.end());
}

std::vector<std::shared_ptr<const Kem>> xor_profile(std::size_t n) {
   std::vector<std::shared_ptr<const Kem>> kems;
   for(std::size_t i = 0; i != n; ++i) {
      kems.push_back(std::make_shared<XorKem>(std::uint32_t(8 * (i % 3))));
   }
   return kems;
}

std::vector<std::shared_ptr<const Kem>> table_profile(std::size_t n) {
   return std::vector<std::shared_ptr<const Kem>>(n, std::make_shared<TableKem>(4));
}

void c1_example3(Checker& c) {
   const auto f = FieldSpec::prime(5);
   const auto g = build_generator(2, 1, f, std::vector<std::uint32_t>{1, 2});
   c.expect(g.entries() == Matrix::from_rows(f, {{1, 1}, {1, 2}}), "G is not [[1,1],[1,2]]");
   KeyBlock k(Matrix::from_rows(f, {{3}, {4}}));
   // k1 + k2 = 7 = 2, k1 + 2k2 = 11 = 1.
   c.expect(encode(k, g).symbols() == Matrix::from_rows(f, {{2}, {1}}), "coded block of (3,4) is not (2,1)");
   SplitMix64Rng rng(1);
   for(const auto& kems : {xor_profile(2), table_profile(2)}) {
      const auto suite = KemSuite::generate(f, 1, kems, rng);
      const auto enc = choke_encap(k, suite, g, rng);
      c.expect(choke_decap(enc.bundle, suite, g).keys == k, "decap did not return (3,4)");
      for(int t = 0; t != 200; ++t) {
         const auto keys = random_key_block(f, 2, 3, rng);
         const auto suite3 = KemSuite::generate(f, 3, kems, rng);
         c.expect(choke_decap(choke_encap(keys, suite3, g, rng).bundle, suite3, g).keys == keys, "random round trip");
      }
   }
}

void c2_computation(Checker& c) {
   SplitMix64Rng rng(2);
   const auto f = FieldSpec::binary(8);
   for(std::size_t n : {2, 4, 8}) {
      for(const auto& kems : {xor_profile(n), table_profile(n)}) {
         const auto suite = KemSuite::generate(f, 8, kems, rng);
         const auto g = build_generator(n, n - 1 > 3 ? 3 : n - 1, f);
         const auto keys = random_key_block(f, n, 8, rng);
         const auto ce = choke_encap(keys, suite, g, rng);
         const auto cd = choke_decap(ce.bundle, suite, g);
         const auto se = serial_encap(keys, suite, rng);
         const auto sd = serial_decap(se.bundle, suite);
         const auto me = combiner_encap(suite, rng);
         const auto md = combiner_decap(me.bundle, suite);
         const auto tag = "n=" + std::to_string(n);
         c.expect(cd.keys == keys && sd.keys == keys && md.keys == me.keys, tag + ": round trip");
         for(std::size_t i = 0; i != n; ++i) {
            c.expect(ce.cost.slots[i].enc_calls == 1 && cd.cost.slots[i].dec_calls == 1, tag + ": choke per-KEM calls");
            c.expect(se.cost.slots[i].enc_calls == n && sd.cost.slots[i].dec_calls == n, tag + ": serial per-KEM calls");
            c.expect(me.cost.slots[i].enc_calls == n && md.cost.slots[i].dec_calls == n,
                     tag + ": combiner per-KEM calls");
         }
         c.expect(ce.cost.total_enc_calls() == n && cd.cost.total_dec_calls() == n, tag + ": choke total n");
         c.expect(se.cost.total_enc_calls() == n * n && sd.cost.total_dec_calls() == n * n, tag + ": serial total n^2");
         c.expect(me.cost.total_enc_calls() == n * n && md.cost.total_dec_calls() == n * n,
                  tag + ": combiner total n^2");
      }
   }
}

void c3_communication(Checker& c) {
   SplitMix64Rng rng(3);
   for(const auto& f : {FieldSpec::prime(7), FieldSpec::binary(8), FieldSpec::binary(16)}) {
      for(std::size_t n : {2, 3, 4, 6}) {
         for(const auto& kems : {xor_profile(n), table_profile(n)}) {
            const std::size_t d = 5;
            const auto suite = KemSuite::generate(f, d, kems, rng);
            std::uint64_t sum_len = 0;
            for(const auto& k : kems) {
               sum_len += k->ciphertext_len(d * f.symbol_bytes());
            }
            const auto ce = choke_encap(random_key_block(f, n, d, rng), suite, build_generator(n, 1, f), rng);
            const auto me = combiner_encap(suite, rng);
            const auto bound = predicted_costs(Scheme::Choke, suite).lower_bound_bytes;
            const auto tag = f.to_string() + " n=" + std::to_string(n);
            c.expect(ce.cost.bytes_sent == sum_len, tag + ": choke bytes != sum l_i");
            c.expect(serialize(ce.bundle).size() > 0 && ce.bundle.total_bytes() == sum_len, tag + ": bundle bytes");
            c.expect(bound == sum_len, tag + ": lower bound != sum l_i");
            c.expect(double(ce.cost.bytes_sent) / double(bound) == 1.0, tag + ": ratio != 1.0");
            c.expect(me.cost.bytes_sent == n * sum_len, tag + ": combiner bytes != n sum l_i");
         }
      }
   }
}

void c4_individual_security(Checker& c) {
   for(const auto& f : {FieldSpec::prime(5), FieldSpec::prime(7)}) {
      SplitMix64Rng rng(4);
      const std::uint32_t q = f.order();
      for(std::size_t n = 2; n <= 3; ++n) {
         for(std::size_t w = 1; w < n; ++w) {
            // Every explicit seed point set, so every reachable output of build_generator is covered.
            std::vector<Matrix> produced;
            std::vector<std::uint32_t> pts(n);
            std::function<void(std::size_t, std::uint32_t)> walk = [&](std::size_t pos, std::uint32_t from) {
               if(pos == n) {
                  try {
                     const auto g = build_generator(n, w, f, pts).entries();
                     if(std::find(produced.begin(), produced.end(), g) == produced.end()) {
                        produced.push_back(g);
                     }
                  } catch(const ConstructionError&) {
                  }
                  return;
               }
               for(std::uint32_t a = from; a < q; ++a) {
                  pts[pos] = a;
                  walk(pos + 1, a + 1);
               }
            };
            walk(0, 1);
            for(const auto& gm : produced) {
               const auto g = GeneratorMatrix::from_matrix(gm, w);
               const auto suite = KemSuite::generate(f, 2, xor_profile(n), rng);
               const auto keys = random_key_block(f, n, 2, rng);
               const auto bundle = choke_encap(keys, suite, g, rng).bundle;
               for(std::size_t size = 0; size <= w; ++size) {
                  for(const auto& s : subsets_of_size(n, size)) {
                     const auto verdict = attempt_key_recovery(eve_view(bundle, suite, BreakSet(s, n), g), g);
                     for(std::size_t j = 0; j != n; ++j) {
                        const auto mi = mi_oracle(gm, j, s);
                        c.expect(mi.exactly_zero && mi.bits == 0.0, f.to_string() + ": MI not exactly zero");
                        c.expect(verdict.keys[j].hidden(), f.to_string() + ": key reported recoverable");
                     }
                  }
               }
            }
            c.expect(!produced.empty() || (q == 5 && n == 3 && w == 2),
                     f.to_string() + ": no generator for n=" + std::to_string(n) + " w=" + std::to_string(w));
         }
      }
      // Negative control.
      const auto id = Matrix::identity(f, 2);
      c.expect(!verify_individual_security(id, 1).pass, "identity passed verification");
      const auto mi = mi_oracle(id, 0, std::vector<std::size_t>{0});
      c.expect(!mi.exactly_zero && std::abs(mi.bits - std::log2(double(q))) < 1e-12, "identity MI != log2(q)");
   }
}

void c5_real_ideal(Checker& c) {
   const auto f = FieldSpec::prime(5);
   const auto g = Matrix::from_rows(f, {{1, 1}, {1, 2}});
   for(std::size_t u = 0; u != 2; ++u) {
      const auto r = real_ideal_experiment(g, u);
      const auto tag = "unbroken slot " + std::to_string(u + 1);
      c.expect(r.distance.is_zero(), tag + ": distance " + r.distance.to_string());
      for(std::size_t j = 0; j != 2; ++j) {
         c.expect(r.mi_ideal[j].exactly_zero && r.mi_ideal[j].bits == 0.0, tag + ": ideal MI nonzero");
         c.expect(r.mi_real[j].exactly_zero, tag + ": real MI nonzero");
      }
   }
   const auto leak = real_ideal_experiment(Matrix::identity(f, 2), 1);
   c.expect(std::abs(leak.mi_ideal[0].bits - std::log2(5.0)) < 1e-12, "identity control did not leak log2(5)");
}

void c6_oracle_equivalence(Checker& c) {
   const auto f = FieldSpec::prime(5);
   std::uint64_t disagreements = 0;
   auto compare = [&](const Matrix& g, const std::vector<std::size_t>& s) {
      for(std::size_t j = 0; j != g.rows(); ++j) {
         ++c.checks;
         const bool rank_leaks = subset_reveals_key(g, s, j);
         if(rank_leaks == mi_oracle(g, j, s).exactly_zero) {
            ++disagreements;
         }
      }
   };
   auto digits = [](std::uint64_t idx, std::size_t len) {
      std::vector<std::uint32_t> v(len);
      for(auto& x : v) {
         x = idx % 5;
         idx /= 5;
      }
      return v;
   };
   // n = 2: every matrix, every subset.
   for(std::uint64_t idx = 0; idx != 625; ++idx) {
      const Matrix g(f, 2, 2, digits(idx, 4));
      for(std::size_t size = 0; size <= 2; ++size) {
         for(const auto& s : subsets_of_size(2, size)) {
            compare(g, s);
         }
      }
   }
   // n = 3, |S| <= 2: the verdict reads only the observed columns, so every
   // possible observed block is enumerated, placed in the leading columns.
   for(std::size_t size = 0; size <= 2; ++size) {
      std::uint64_t blocks = 1;
      for(std::size_t i = 0; i != 3 * size; ++i) {
         blocks *= 5;
      }
      std::vector<std::size_t> s(size);
      std::iota(s.begin(), s.end(), 0);
      for(std::uint64_t idx = 0; idx != blocks; ++idx) {
         const auto d = digits(idx, 3 * size);
         Matrix g(f, 3, 3);
         for(std::size_t col = 0; col != size; ++col) {
            for(std::size_t r = 0; r != 3; ++r) {
               g(r, col) = d[col * 3 + r];
            }
         }
         compare(g, s);
      }
   }
   // n = 3, |S| = 3: every constructed generator, the identity, and a seeded sample.
   std::vector<Matrix> full{Matrix::identity(f, 3), build_generator(3, 1, f).entries()};
   SplitMix64Rng rng(6);
   for(int t = 0; t != 4000; ++t) {
      std::vector<std::uint32_t> v(9);
      for(auto& x : v) {
         x = std::uint32_t(rng.uniform(5));
      }
      full.emplace_back(f, 3, 3, v);
   }
   for(const auto& g : full) {
      compare(g, {0, 1, 2});
   }
   c.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
}

std::vector<Bytes> fixed_seed_bundles(std::uint64_t seed) {
   const auto f = FieldSpec::binary(8);
   SplitMix64Rng rng(seed);
   const auto suite = KemSuite::generate(f, 16, xor_profile(4), rng);
   const auto keys = random_key_block(f, 4, 16, rng);
   const auto g = build_generator(4, 3, f);
   return {serialize(choke_encap(keys, suite, g, rng).bundle), serialize(serial_encap(keys, suite, rng).bundle),
           serialize(combiner_encap(suite, rng).bundle)};
}

void c7_determinism(Checker& c) {
   for(std::uint64_t seed : {0, 42, 1234}) {
      c.expect(fixed_seed_bundles(seed) == fixed_seed_bundles(seed), "bundles differ for seed " + std::to_string(seed));
   }
   c.expect(fixed_seed_bundles(1) != fixed_seed_bundles(2), "seed has no effect");

   BenchConfig bc;
   bc.seed = 7;
   const auto csv = bench_report(bc).csv();
   c.expect(csv == bench_report(bc).csv(), "bench CSV differs between runs");
   c.expect(csv == slurp(kData + "/bench_seed7.csv"), "bench CSV differs from the committed reference");

   const auto f = FieldSpec::prime(5);
   const auto pub = read_key_file(KeyFileKind::Public, slurp_bytes(kData + "/example3/public.suite"));
   const auto sec = read_key_file(KeyFileKind::Secret, slurp_bytes(kData + "/example3/secret.chsk"));
   const auto suite = import_suite(f, 1, pub, sec);
   const auto g = GeneratorMatrix::parse_text(slurp(kData + "/example3/generator.gen"));
   const auto bundle = deserialize(slurp_bytes(kData + "/example3.bundle"));
   const auto keys = key_block_from_text(slurp(kData + "/example3.keys"));
   c.expect(keys == KeyBlock(Matrix::from_rows(f, {{3}, {4}})), "committed keys are not (3,4)");
   c.expect(choke_decap(bundle, suite, g).keys == keys, "golden bundle does not decap to the committed keys");
}

void c8_field(Checker& c) {
   for(const auto& f : {FieldSpec::prime(5), FieldSpec::prime(7), FieldSpec::binary(4)}) {
      const auto els = enumerate_field(f);
      const auto zero = FieldElement::zero(f);
      const auto one = FieldElement::one(f);
      c.expect(els.size() == f.order(), f.to_string() + ": element count");
      for(const auto& a : els) {
         c.expect(a + zero == a && a * one == a && a + (-a) == zero, f.to_string() + ": identities");
         if(a != zero) {
            c.expect(a * a.inverse() == one, f.to_string() + ": inverse");
         }
         for(const auto& b : els) {
            c.expect(a + b == b + a && a * b == b * a, f.to_string() + ": commutativity");
            c.expect(a - b == a + (-b), f.to_string() + ": subtraction");
            for(const auto& e : els) {
               c.expect((a + b) + e == a + (b + e), f.to_string() + ": additive associativity");
               c.expect((a * b) * e == a * (b * e), f.to_string() + ": multiplicative associativity");
               c.expect(a * (b + e) == a * b + a * e, f.to_string() + ": distributivity");
            }
         }
      }
   }
   const auto g8 = FieldSpec::binary(8);
   c.expect(g8.reduction_poly() == 0x11B, "GF(2^8) default polynomial is not 0x11B");
   SplitMix64Rng rng(8);
   for(int t = 0; t != 10000; ++t) {
      const auto a = std::uint32_t(rng.uniform(256));
      const auto b = std::uint32_t(rng.uniform(256));
      c.expect(g8.mul(a, b) == test::shift_reduce_mul(a, b, 8, 0x11B), "GF(2^8) product differs from the oracle");
   }
   c.expect(g8.inv(0x53) == 0xCA, "inv(0x53) != 0xCA");
   c.expect(test::search_inverse(0x53, 8, 0x11B) == 0xCA, "oracle inv(0x53) != 0xCA");
}

}  // namespace

int main() {
   criterion(1, "Example-3 reproduction", 1, c1_example3);
   criterion(2, "computation cost: 1 call per KEM vs n", 5, c2_computation);
   criterion(3, "communication cost: sum l_i, bound ratio 1.0, combiner n sum l_i", 0, c3_communication);
   criterion(4, "individual security of constructed generators", 30, c4_individual_security);
   criterion(5, "real/ideal experiment: distance 0, MI 0", 0, c5_real_ideal);
   criterion(6, "rank criterion agrees with the MI oracle", 0, c6_oracle_equivalence);
   criterion(7, "determinism and wire goldens", 0, c7_determinism);
   criterion(8, "field arithmetic", 0, c8_field);
   std::printf("%d of 8 criteria failed\n", g_failed);
   return g_failed == 0 ? 0 : 1;
}
