/*
 * Flat key=value run configuration
 */

#include <choke/config.h>

#include <choke/error.h>

#include <charconv>
#include <cstdlib>
#include <map>
#include <sstream>

namespace choke {

namespace {

[[noreturn]] void bad(const std::string& why) {
   throw ParseError(ParseErrorKind::BadValue, "config: " + why);
}

std::string trim(std::string_view s) {
   const auto b = s.find_first_not_of(" \t\r");
   if(b == std::string_view::npos) {
      return {};
   }
   const auto e = s.find_last_not_of(" \t\r");
   return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
   std::uint64_t out = 0;
   auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
   if(v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      bad("'" + key + "' must be a non-negative integer, got '" + v + "'");
   }
   return out;
}

}  // namespace

std::string profile_string(const std::vector<KemProfile>& profile) {
   std::string out;
   for(const auto& p : profile) {
      if(!out.empty()) {
         out += ";";
      }
      out += std::to_string(p.id) + ":" + std::to_string(p.parameter);
   }
   return out;
}

std::vector<std::shared_ptr<const Kem>> RunConfig::make_kems() const {
   std::vector<std::shared_ptr<const Kem>> out;
   for(const auto& p : kems) {
      out.push_back(make_builtin_kem(p.id, p.parameter));
   }
   return out;
}

RunConfig parse_config(const std::string& text) {
   std::map<std::string, std::string> kv;
   std::istringstream in(text);
   std::string line;
   int lineno = 0;
   while(std::getline(in, line)) {
      ++lineno;
      if(const auto hash = line.find('#'); hash != std::string::npos) {
         line.erase(hash);
      }
      const auto body = trim(line);
      if(body.empty()) {
         continue;
      }
      const auto eq = body.find('=');
      if(eq == std::string::npos) {
         bad("line " + std::to_string(lineno) + " is not key=value");
      }
      const auto key = trim(std::string_view(body).substr(0, eq));
      const auto value = trim(std::string_view(body).substr(eq + 1));
      if(!kv.emplace(key, value).second) {
         bad("duplicate key '" + key + "'");
      }
   }

   RunConfig c;
   auto take = [&](const std::string& key) -> std::optional<std::string> {
      const auto it = kv.find(key);
      if(it == kv.end()) {
         return std::nullopt;
      }
      auto v = it->second;
      kv.erase(it);
      return v;
   };
   auto require = [&](const std::string& key) {
      auto v = take(key);
      if(!v) {
         bad("missing '" + key + "'");
      }
      return *v;
   };

   if(auto v = take("scheme")) {
      try {
         c.scheme = parse_scheme(*v);
      } catch(const DomainError& e) {
         bad(e.what());
      }
   }
   c.n = to_uint("n", require("n"));
   if(c.n < 2 || c.n > 1024) {
      bad("n must be in 2..1024");
   }
   c.field = FieldSpec::parse(require("field"));
   c.key_symbols = to_uint("d", require("d"));
   if(c.key_symbols == 0) {
      bad("d must be positive");
   }
   c.w = c.n - 1;
   if(auto v = take("w")) {
      c.w = to_uint("w", *v);
   }
   if(auto v = take("seed")) {
      c.seed = to_uint("seed", *v);
   }
   for(std::size_t i = 1; i <= c.n; ++i) {
      const auto prefix = "kem." + std::to_string(i) + ".";
      KemProfile p;
      const auto id = to_uint(prefix + "id", require(prefix + "id"));
      if(id > 0xFFFF || !builtin_registry().contains(static_cast<std::uint16_t>(id))) {
         bad("'" + prefix + "id' names unknown KEM " + std::to_string(id));
      }
      p.id = static_cast<std::uint16_t>(id);
      p.parameter = builtin_registry().get(p.id)->parameter();
      if(auto v = take(prefix + "overhead")) {
         const auto o = to_uint(prefix + "overhead", *v);
         if(o > 1u << 20) {
            bad("'" + prefix + "overhead' is too large");
         }
         p.parameter = static_cast<std::uint32_t>(o);
      }
      c.kems.push_back(p);
   }
   if(!kv.empty()) {
      bad("unknown key '" + kv.begin()->first + "'");
   }
   return c;
}

void apply_env_overrides(RunConfig& config) {
   if(const char* s = std::getenv("CHOKE_SEED"); s != nullptr && *s != '\0') {
      config.seed = to_uint("CHOKE_SEED", s);
   }
}

}  // namespace choke
