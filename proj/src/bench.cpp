/*
 * Scheme comparison runs
 */

#include <choke/bench.h>

#include <choke/error.h>

#include <cstdio>
#include <map>
#include <sstream>

namespace choke {

namespace {

std::string format_ratio(double v) {
   char buf[32];
   std::snprintf(buf, sizeof(buf), "%.3f", v);
   return buf;
}

struct Measurement {
      CostReport encap;
      CostReport decap;
      bool round_trip_ok = false;
};

Measurement run_once(Scheme scheme, const KemSuite& suite, const BenchConfig& config, RandomSource& rng) {
   Measurement m;
   switch(scheme) {
      case Scheme::Choke: {
         const auto g = build_generator(suite.n(), suite.n() - 1, suite.field());
         const auto keys = random_key_block(suite.field(), suite.n(), config.key_symbols, rng);
         auto enc = choke_encap(keys, suite, g, rng);
         auto dec = choke_decap(enc.bundle, suite, g);
         m = Measurement{std::move(enc.cost), std::move(dec.cost), dec.keys == keys};
         break;
      }
      case Scheme::Serial: {
         const auto keys = random_key_block(suite.field(), suite.n(), config.key_symbols, rng);
         auto enc = serial_encap(keys, suite, rng);
         auto dec = serial_decap(enc.bundle, suite);
         m = Measurement{std::move(enc.cost), std::move(dec.cost), dec.keys == keys};
         break;
      }
      case Scheme::Combiner: {
         auto enc = combiner_encap(suite, rng);
         auto dec = combiner_decap(enc.bundle, suite);
         m = Measurement{std::move(enc.cost), std::move(dec.cost), dec.keys == enc.keys};
         break;
      }
   }
   return m;
}

}  // namespace

BenchReport bench_report(const BenchConfig& config) {
   if(config.schemes.empty() || config.ns.empty() || config.profile.empty()) {
      throw DomainError("bench needs at least one scheme, one n and one KEM profile");
   }
   if(config.trials == 0 || config.key_symbols == 0) {
      throw DomainError("bench trials and key length must be positive");
   }
   for(auto n : config.ns) {
      if(n < 2) {
         throw DomainError("bench n values must be at least 2");
      }
   }

   BenchReport report;
   for(auto n : config.ns) {
      std::vector<KemProfile> profile;
      std::vector<std::shared_ptr<const Kem>> kems;
      for(std::size_t i = 0; i != n; ++i) {
         profile.push_back(config.profile[i % config.profile.size()]);
         kems.push_back(make_builtin_kem(profile.back().id, profile.back().parameter));
      }

      std::map<Scheme, BenchRow> rows;
      for(auto scheme : config.schemes) {
         BenchRow row;
         row.scheme = scheme;
         row.n = n;
         row.kem_profile = profile_string(profile);
         row.matches_prediction = true;
         row.round_trip_ok = true;

         auto rng = derive_rng(config.seed, "bench/" + scheme_name(scheme) + "/" + std::to_string(n));
         std::uint64_t total_ns = 0;
         for(std::size_t t = 0; t != config.trials; ++t) {
            const auto suite = KemSuite::generate(config.field, config.key_symbols, kems, rng);
            const auto predicted = predicted_costs(scheme, suite);
            const auto m = run_once(scheme, suite, config, rng);

            row.enc_calls = m.encap.total_enc_calls();
            row.dec_calls = m.decap.total_dec_calls();
            row.bytes_sent = m.encap.bytes_sent;
            row.lower_bound_bytes = predicted.lower_bound_bytes;
            row.matches_prediction = row.matches_prediction && m.encap.same_counts(predicted.encap) &&
                                     m.decap.same_counts(predicted.decap);
            row.round_trip_ok = row.round_trip_ok && m.round_trip_ok;
            total_ns += static_cast<std::uint64_t>(m.encap.wall_time.value_or(std::chrono::nanoseconds{0}).count() +
                                                   m.decap.wall_time.value_or(std::chrono::nanoseconds{0}).count());
         }
         row.wall_ns = config.timing ? total_ns / config.trials : 0;
         rows.emplace(scheme, row);
      }

      // Ratios come from measured rows where available, else from the analytic model.
      auto calls_of = [&](Scheme s) -> double {
         if(const auto it = rows.find(s); it != rows.end()) {
            return static_cast<double>(it->second.enc_calls);
         }
         auto rng = derive_rng(config.seed, "bench/predict");
         const auto suite = KemSuite::generate(config.field, config.key_symbols, kems, rng);
         return static_cast<double>(predicted_costs(s, suite).encap.total_enc_calls());
      };
      auto choke_bytes = [&]() -> std::pair<double, double> {
         if(const auto it = rows.find(Scheme::Choke); it != rows.end()) {
            return {static_cast<double>(it->second.bytes_sent), static_cast<double>(it->second.lower_bound_bytes)};
         }
         auto rng = derive_rng(config.seed, "bench/predict");
         const auto suite = KemSuite::generate(config.field, config.key_symbols, kems, rng);
         const auto p = predicted_costs(Scheme::Choke, suite);
         return {static_cast<double>(p.encap.bytes_sent), static_cast<double>(p.lower_bound_bytes)};
      };
      const double calls_ratio = calls_of(Scheme::Serial) / calls_of(Scheme::Choke);
      const auto [bytes, bound] = choke_bytes();

      for(auto scheme : config.schemes) {
         auto row = rows.at(scheme);
         row.choke_vs_serial_calls = calls_ratio;
         row.choke_bytes_over_bound = bytes / bound;
         report.rows.push_back(std::move(row));
      }
   }
   return report;
}

std::string BenchReport::csv() const {
   std::ostringstream out;
   out << "scheme,n,kem_profile,enc_calls,dec_calls,bytes_sent,lower_bound_bytes,wall_ns,"
          "choke_vs_serial_calls,choke_bytes_over_bound\n";
   for(const auto& r : rows) {
      out << scheme_name(r.scheme) << "," << r.n << "," << r.kem_profile << "," << r.enc_calls << "," << r.dec_calls
          << "," << r.bytes_sent << "," << r.lower_bound_bytes << "," << r.wall_ns << ","
          << format_ratio(r.choke_vs_serial_calls) << "," << format_ratio(r.choke_bytes_over_bound) << "\n";
   }
   return out.str();
}

std::string BenchReport::summary() const {
   std::ostringstream out;
   for(const auto& r : rows) {
      out << scheme_name(r.scheme) << " n=" << r.n << ": " << r.enc_calls << " enc / " << r.dec_calls << " dec calls, "
          << r.bytes_sent << " bytes (bound " << r.lower_bound_bytes << ")";
      if(!r.matches_prediction) {
         out << " [MISMATCH with predicted costs]";
      }
      if(!r.round_trip_ok) {
         out << " [ROUND TRIP FAILED]";
      }
      out << "\n";
   }
   return out.str();
}

bool BenchReport::all_ok() const {
   for(const auto& r : rows) {
      if(!r.matches_prediction || !r.round_trip_ok) {
         return false;
      }
   }
   return true;
}

}  // namespace choke
