/*
 * Command line front end
 */

#include <choke/cli.h>

#include <choke/adversary.h>
#include <choke/bench.h>
#include <choke/config.h>
#include <choke/error.h>
#include <choke/iscode.h>
#include <choke/schemes.h>
#include <choke/wire.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace choke {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
   public:
      using std::runtime_error::runtime_error;
};

Bytes read_binary(const std::string& path) {
   std::ifstream in(path, std::ios::binary);
   if(!in) {
      throw UsageError("cannot open '" + path + "'");
   }
   return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string read_text(const std::string& path) {
   const auto b = read_binary(path);
   return std::string(b.begin(), b.end());
}

void write_binary(const std::string& path, ByteView bytes) {
   std::ofstream out(path, std::ios::binary | std::ios::trunc);
   if(!out) {
      throw UsageError("cannot write '" + path + "'");
   }
   out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
   write_binary(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

RunConfig load_config(const std::string& path) {
   try {
      auto c = parse_config(read_text(path));
      apply_env_overrides(c);
      return c;
   } catch(const ParseError& e) {
      throw UsageError(path + ": " + e.what());
   }
}

// Session key slots are 1-based in everything a user reads.
std::string slot_list(const std::vector<std::size_t>& slots) {
   std::string s = "{";
   for(std::size_t i = 0; i != slots.size(); ++i) {
      s += (i ? "," : "") + std::to_string(slots[i] + 1);
   }
   return s + "}";
}

void print_cost(std::ostream& out, const char* label, const CostReport& cost) {
   out << label << ": enc_calls=" << cost.total_enc_calls() << " dec_calls=" << cost.total_dec_calls()
       << " bytes_sent=" << cost.bytes_sent << "\n";
   for(std::size_t i = 0; i != cost.slots.size(); ++i) {
      out << "  KEM_" << (i + 1) << " (id " << cost.slots[i].kem << "): enc=" << cost.slots[i].enc_calls
          << " dec=" << cost.slots[i].dec_calls << "\n";
   }
}

KemSuite load_suite(const RunConfig& config, const std::string& suite_path, const std::vector<KeyFileEntry>& secrets) {
   const auto pub = read_key_file(KeyFileKind::Public, read_binary(suite_path));
   if(pub.size() != config.n) {
      throw DomainError("suite file holds " + std::to_string(pub.size()) + " KEMs but the config says n=" +
                        std::to_string(config.n));
   }
   for(const auto& e : pub) {
      if(e.slot < config.kems.size() &&
         (config.kems[e.slot].id != e.kem || config.kems[e.slot].parameter != e.parameter)) {
         throw DomainError("suite file KEM_" + std::to_string(e.slot + 1) + " does not match the config");
      }
   }
   return import_suite(config.field, config.key_symbols, pub, secrets);
}

GeneratorMatrix load_generator(const std::string& path) {
   return GeneratorMatrix::parse_text(read_text(path));
}

std::vector<std::size_t> parse_break_list(const std::string& text, std::size_t n) {
   std::vector<std::size_t> out;
   std::stringstream ss(text);
   std::string item;
   while(std::getline(ss, item, ',')) {
      if(item.empty()) {
         continue;
      }
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
         v = std::stoul(item, &pos);
      } catch(const std::exception&) {
         throw UsageError("bad break index '" + item + "'");
      }
      if(pos != item.size() || v < 1 || v > n) {
         throw UsageError("break index '" + item + "' must be in 1.." + std::to_string(n));
      }
      out.push_back(v - 1);
   }
   return out;
}

template <typename T>
std::vector<T> parse_csv_list(const std::string& text, auto&& convert) {
   std::vector<T> out;
   std::stringstream ss(text);
   std::string item;
   while(std::getline(ss, item, ',')) {
      if(!item.empty()) {
         out.push_back(convert(item));
      }
   }
   return out;
}

int cmd_keygen(const std::string& config_path, const std::string& dir, std::ostream& out) {
   const auto config = load_config(config_path);
   auto rng = derive_rng(config.seed, "keygen");
   const auto suite = KemSuite::generate(config.field, config.key_symbols, config.make_kems(), rng);
   fs::create_directories(dir);
   write_binary(dir + "/public.suite", write_key_file(KeyFileKind::Public, export_keys(suite, KeyFileKind::Public)));
   const auto secrets = export_keys(suite, KeyFileKind::Secret);
   write_binary(dir + "/secret.chsk", write_key_file(KeyFileKind::Secret, secrets));
   for(const auto& e : secrets) {
      write_binary(dir + "/slot-" + std::to_string(e.slot + 1) + ".chsk", write_key_file(KeyFileKind::Secret, {e}));
   }
   const auto g = build_generator(config.n, config.w, config.field);
   write_text(dir + "/generator.gen", g.to_text());
   out << "wrote " << config.n << " keypairs and generator (n=" << g.n() << ", w=" << g.w() << ") to " << dir << "\n";
   return kExitOk;
}

struct EncapArgs {
      std::string config;
      std::string suite;
      std::string generator;
      std::string out;
      std::string keys_in;
      std::string keys_out;
};

int cmd_encap(const EncapArgs& a, std::ostream& out) {
   const auto config = load_config(a.config);
   const auto suite = load_suite(config, a.suite, {});
   auto rng = derive_rng(config.seed, "encap");

   auto session_keys = [&] {
      if(!a.keys_in.empty()) {
         return key_block_from_text(read_text(a.keys_in));
      }
      auto key_rng = derive_rng(config.seed, "session-keys");
      return random_key_block(config.field, config.n, config.key_symbols, key_rng);
   };

   EncapResult result;
   KeyBlock transported(config.field, config.n, config.key_symbols);
   switch(config.scheme) {
      case Scheme::Choke: {
         if(a.generator.empty()) {
            throw UsageError("encap with scheme=choke requires --generator");
         }
         transported = session_keys();
         result = choke_encap(transported, suite, load_generator(a.generator), rng);
         break;
      }
      case Scheme::Serial:
         transported = session_keys();
         result = serial_encap(transported, suite, rng);
         break;
      case Scheme::Combiner: {
         auto r = combiner_encap(suite, rng);
         transported = r.keys;
         result = EncapResult{std::move(r.bundle), std::move(r.cost)};
         break;
      }
   }
   write_binary(a.out, serialize(result.bundle));
   if(!a.keys_out.empty()) {
      write_text(a.keys_out, key_block_to_text(transported));
   }
   print_cost(out, "encap", result.cost);
   return kExitOk;
}

struct DecapArgs {
      std::string config;
      std::string suite;
      std::string secret;
      std::string generator;
      std::string in;
      std::string out;
};

int cmd_decap(const DecapArgs& a, std::ostream& out) {
   const auto config = load_config(a.config);
   const auto secrets = read_key_file(KeyFileKind::Secret, read_binary(a.secret));
   const auto suite = load_suite(config, a.suite, secrets);
   const auto bundle = deserialize(read_binary(a.in));
   if(bundle.scheme != config.scheme) {
      throw DomainError("bundle scheme '" + scheme_name(bundle.scheme) + "' does not match config scheme '" +
                        scheme_name(config.scheme) + "'");
   }
   DecapResult result = [&] {
      switch(bundle.scheme) {
         case Scheme::Choke:
            if(a.generator.empty()) {
               throw UsageError("decap of a choke bundle requires --generator");
            }
            return choke_decap(bundle, suite, load_generator(a.generator));
         case Scheme::Serial:
            return serial_decap(bundle, suite);
         case Scheme::Combiner:
            break;
      }
      return combiner_decap(bundle, suite);
   }();
   const auto text = key_block_to_text(result.keys);
   if(a.out.empty()) {
      out << text;
   } else {
      write_text(a.out, text);
   }
   print_cost(out, "decap", result.cost);
   return kExitOk;
}

struct AttackArgs {
      std::string config;
      std::string suite;
      std::string bundle;
      std::string generator;
      std::string breaks;
      std::string keys_dir;
      std::string json_out;
};

int cmd_attack(const AttackArgs& a, std::ostream& out) {
   const auto config = load_config(a.config);
   const auto g = read_generator_text(read_text(a.generator));
   const auto broken = parse_break_list(a.breaks, config.n);
   std::vector<KeyFileEntry> secrets;
   for(auto i : broken) {
      const auto path = a.keys_dir + "/slot-" + std::to_string(i + 1) + ".chsk";
      for(auto& e : read_key_file(KeyFileKind::Secret, read_binary(path))) {
         if(e.slot != i) {
            throw DomainError(path + " holds the key of KEM_" + std::to_string(e.slot + 1));
         }
         secrets.push_back(std::move(e));
      }
   }
   const auto suite = load_suite(config, a.suite, secrets);
   const auto bundle = deserialize(read_binary(a.bundle));
   const BreakSet breaks(broken, suite.n());
   const auto view = eve_view(bundle, suite, breaks);
   const auto verdict = attempt_key_recovery(view, g.entries);

   out << "broken KEMs: " << slot_list(verdict.broken) << " (w=" << g.w << ")\n";
   for(const auto& combo : verdict.leaked_combinations) {
      out << "leaked combination:";
      for(std::size_t i = 0; i != combo.size(); ++i) {
         out << (i ? " + " : " ") << combo[i] << "*k_" << (i + 1);
      }
      out << "\n";
   }
   nlohmann::json j;
   j["broken"] = nlohmann::json::array();
   for(auto i : verdict.broken) {
      j["broken"].push_back(i + 1);
   }
   j["leaked_combinations"] = verdict.leaked_combinations;
   j["keys"] = nlohmann::json::array();
   for(std::size_t k = 0; k != verdict.keys.size(); ++k) {
      const auto& kv = verdict.keys[k];
      out << "k_" << (k + 1) << ": ";
      nlohmann::json entry;
      entry["key"] = k + 1;
      if(kv.hidden()) {
         out << "hidden\n";
         entry["status"] = "hidden";
      } else {
         out << "recovered";
         for(auto v : *kv.recovered) {
            out << " " << v;
         }
         out << "\n";
         entry["status"] = "recovered";
         entry["value"] = *kv.recovered;
      }
      j["keys"].push_back(entry);
   }
   if(a.json_out.empty()) {
      out << j.dump() << "\n";
   } else {
      write_text(a.json_out, j.dump(2) + "\n");
   }
   return kExitOk;
}

int cmd_verify_code(const std::string& path, std::optional<std::size_t> w_override, std::ostream& out) {
   const auto g = read_generator_text(read_text(path));
   const auto w = w_override.value_or(g.w);
   const auto report = verify_individual_security(g.entries, w);
   const auto head = "(n=" + std::to_string(g.entries.rows()) + ", w=" + std::to_string(w) + ")";
   if(report.pass) {
      out << "PASS " << head << "\n";
      return kExitOk;
   }
   out << "FAIL " << head << ": coded symbols " << slot_list(report.failing->subset) << " reveal k_"
       << (report.failing->key + 1) << "\n";
   return kExitDomain;
}

int cmd_mi_test(const std::string& path, std::optional<std::size_t> max_size, std::ostream& out) {
   const auto g = read_generator_text(read_text(path));
   const std::size_t n = g.entries.rows();
   const std::size_t limit = max_size.value_or(n);
   out << "subset,key,mi_bits,exactly_zero,rank_criterion_leaks\n";
   for(std::size_t size = 0; size <= std::min(limit, n); ++size) {
      for(const auto& subset : subsets_of_size(n, size)) {
         for(std::size_t j = 0; j != n; ++j) {
            const auto mi = mi_oracle(g.entries, j, subset);
            char bits[32];
            std::snprintf(bits, sizeof(bits), "%.6f", mi.bits);
            out << slot_list(subset) << "," << (j + 1) << "," << bits << "," << (mi.exactly_zero ? "yes" : "no") << ","
                << (subset_reveals_key(g.entries, subset, j) ? "yes" : "no") << "\n";
         }
      }
   }
   return kExitOk;
}

struct BenchArgs {
      std::string schemes = "choke,serial,combiner";
      std::string ns = "2,4,8";
      std::string profile = "1:16";
      std::string field = "GF2:8:0x11B";
      std::size_t d = 16;
      std::uint64_t seed = 0;
      std::size_t trials = 1;
      bool timing = false;
      std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
   BenchConfig c;
   try {
      c.schemes = parse_csv_list<Scheme>(a.schemes, [](const std::string& s) { return parse_scheme(s); });
      c.ns = parse_csv_list<std::size_t>(a.ns, [](const std::string& s) { return std::stoul(s); });
      c.profile = parse_csv_list<KemProfile>(a.profile, [](const std::string& s) {
         const auto colon = s.find(':');
         const auto id = std::stoul(s.substr(0, colon));
         if(id > 0xFFFF) {
            throw DomainError("KEM id out of range");
         }
         KemProfile p{static_cast<std::uint16_t>(id), builtin_registry().get(static_cast<std::uint16_t>(id))->parameter()};
         if(colon != std::string::npos) {
            p.parameter = static_cast<std::uint32_t>(std::stoul(s.substr(colon + 1)));
         }
         return p;
      });
      c.field = FieldSpec::parse(a.field);
   } catch(const std::logic_error& e) {
      throw UsageError(std::string("bad bench argument: ") + e.what());
   } catch(const Error& e) {
      throw UsageError(std::string("bad bench argument: ") + e.what());
   }
   c.key_symbols = a.d;
   c.seed = a.seed;
   if(const char* s = std::getenv("CHOKE_SEED"); s != nullptr && *s != '\0') {
      c.seed = std::stoull(s);
   }
   c.trials = a.trials;
   c.timing = a.timing;

   const auto report = bench_report(c);
   if(a.out.empty()) {
      out << report.csv();
   } else {
      write_text(a.out, report.csv());
      out << report.summary();
   }
   return report.all_ok() ? kExitOk : kExitDomain;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
   CLI::App app{"CHOKE hybrid key encapsulation toolkit", "choke"};
   app.require_subcommand(1);

   std::string config_path;
   std::string dir;
   auto* keygen = app.add_subcommand("keygen", "Generate suite keypairs and a generator matrix");
   keygen->add_option("--config", config_path, "Run configuration")->required();
   keygen->add_option("--out", dir, "Output directory")->required();

   EncapArgs ea;
   auto* encap = app.add_subcommand("encap", "Encapsulate session keys into a bundle");
   encap->add_option("--config", ea.config)->required();
   encap->add_option("--suite", ea.suite, "Public suite file")->required();
   encap->add_option("--generator", ea.generator, "Generator matrix file (choke)");
   encap->add_option("--out", ea.out, "Bundle output file")->required();
   encap->add_option("--keys-in", ea.keys_in, "Session keys to transport (default: random from seed)");
   encap->add_option("--keys-out", ea.keys_out, "Write the transported or derived keys here");

   DecapArgs da;
   auto* decap = app.add_subcommand("decap", "Recover session keys from a bundle");
   decap->add_option("--config", da.config)->required();
   decap->add_option("--suite", da.suite, "Public suite file")->required();
   decap->add_option("--secret", da.secret, "Secret key file")->required();
   decap->add_option("--generator", da.generator, "Generator matrix file (choke)");
   decap->add_option("--in", da.in, "Bundle file")->required();
   decap->add_option("--out", da.out, "Key output file (default: stdout)");

   AttackArgs aa;
   auto* attack = app.add_subcommand("attack", "Simulate an eavesdropper holding some secret keys");
   attack->add_option("--config", aa.config)->required();
   attack->add_option("--suite", aa.suite, "Public suite file")->required();
   attack->add_option("--bundle", aa.bundle)->required();
   attack->add_option("--generator", aa.generator)->required();
   attack->add_option("--breaks", aa.breaks, "Comma separated 1-based KEM indices")->required();
   attack->add_option("--keys-dir", aa.keys_dir, "Directory holding slot-<i>.chsk files")->required();
   attack->add_option("--json-out", aa.json_out, "Write the JSON verdict here instead of stdout");

   std::string gen_path;
   std::optional<std::size_t> w_override;
   auto* verify = app.add_subcommand("verify-code", "Check a generator matrix for individual security");
   verify->add_option("--generator", gen_path)->required();
   verify->add_option("--w", w_override, "Override the file's security parameter");

   std::string mi_gen_path;
   std::optional<std::size_t> max_size;
   auto* mi = app.add_subcommand("mi-test", "Exact mutual information table for a generator");
   mi->add_option("--generator", mi_gen_path)->required();
   mi->add_option("--max-size", max_size, "Largest observed subset size");

   BenchArgs ba;
   auto* bench = app.add_subcommand("bench", "Compare scheme costs");
   bench->add_option("--schemes", ba.schemes, "Comma separated scheme list")->capture_default_str();
   bench->add_option("--n", ba.ns, "Comma separated n values")->capture_default_str();
   bench->add_option("--profile", ba.profile, "KEM profile id:param[,id:param...]")->capture_default_str();
   bench->add_option("--field", ba.field)->capture_default_str();
   bench->add_option("--d", ba.d, "Symbols per key")->capture_default_str();
   bench->add_option("--seed", ba.seed)->capture_default_str();
   bench->add_option("--trials", ba.trials)->capture_default_str();
   bench->add_flag("--timing", ba.timing, "Record wall time (output is no longer reproducible)");
   bench->add_option("--out", ba.out, "CSV output file (default: stdout)");

   try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
   } catch(const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
   } catch(const CLI::ParseError& e) {
      err << "choke: " << e.what() << "\n" << "Run with --help for usage.\n";
      return kExitUsage;
   }

   try {
      if(*keygen) {
         return cmd_keygen(config_path, dir, out);
      }
      if(*encap) {
         return cmd_encap(ea, out);
      }
      if(*decap) {
         return cmd_decap(da, out);
      }
      if(*attack) {
         return cmd_attack(aa, out);
      }
      if(*verify) {
         return cmd_verify_code(gen_path, w_override, out);
      }
      if(*mi) {
         return cmd_mi_test(mi_gen_path, max_size, out);
      }
      if(*bench) {
         return cmd_bench(ba, out);
      }
   } catch(const UsageError& e) {
      err << "choke: " << e.what() << "\n";
      return kExitUsage;
   } catch(const DecapsulationError& e) {
      err << "choke: decapsulation error: " << e.what() << "\n";
      return kExitDomain;
   } catch(const KeyDerivationError& e) {
      err << "choke: key derivation error: " << e.what() << "\n";
      return kExitDomain;
   } catch(const Error& e) {
      err << "choke: " << e.what() << "\n";
      return kExitDomain;
   } catch(const fs::filesystem_error& e) {
      err << "choke: " << e.what() << "\n";
      return kExitUsage;
   }
   return kExitUsage;
}

}  // namespace choke
