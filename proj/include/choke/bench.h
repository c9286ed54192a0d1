/*
 * Scheme comparison runs
 *
 * CSV columns:
 *   scheme,n,kem_profile,enc_calls,dec_calls,bytes_sent,lower_bound_bytes,wall_ns,
 *   choke_vs_serial_calls,choke_bytes_over_bound
 *
 * The two ratio columns are per-n figures repeated on every row of that n.
 * wall_ns is 0 unless timing is enabled, which keeps fixed-seed output
 * byte-identical.
 */

#ifndef CHOKE_BENCH_H_
#define CHOKE_BENCH_H_

#include <choke/config.h>
#include <choke/schemes.h>

#include <cstdint>
#include <string>
#include <vector>

namespace choke {

struct BenchConfig {
      std::vector<Scheme> schemes = {Scheme::Choke, Scheme::Serial, Scheme::Combiner};
      std::vector<std::size_t> ns = {2, 4, 8};
      /// Slot i of an n-suite uses profile[i % profile.size()].
      std::vector<KemProfile> profile = {KemProfile{kXorKemId, 16}};
      std::size_t key_symbols = 16;
      FieldSpec field = FieldSpec::binary(8);
      std::uint64_t seed = 0;
      std::size_t trials = 1;
      bool timing = false;
};

struct BenchRow {
      Scheme scheme = Scheme::Choke;
      std::size_t n = 0;
      std::string kem_profile;
      std::uint64_t enc_calls = 0;
      std::uint64_t dec_calls = 0;
      std::uint64_t bytes_sent = 0;
      std::uint64_t lower_bound_bytes = 0;
      std::uint64_t wall_ns = 0;
      double choke_vs_serial_calls = 0.0;
      double choke_bytes_over_bound = 0.0;
      /// Measured counts and bytes equal predicted_costs in every trial.
      bool matches_prediction = false;
      /// Decapsulation reproduced the transported or derived keys in every trial.
      bool round_trip_ok = false;
};

struct BenchReport {
      std::vector<BenchRow> rows;

      std::string csv() const;
      std::string summary() const;

      bool all_ok() const;
};

/// Throws DomainError on an invalid configuration.
BenchReport bench_report(const BenchConfig& config);

}  // namespace choke

#endif
