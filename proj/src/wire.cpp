/*
 * Binary formats: ciphertext bundles and suite key files
 */

#include <choke/wire.h>

#include <choke/error.h>

#include <algorithm>
#include <limits>
#include <string>

namespace choke {

namespace {

constexpr std::uint8_t kBundleMagic[4] = {'C', 'H', 'K', 'E'};
constexpr std::uint8_t kPublicMagic[4] = {'C', 'H', 'P', 'K'};
constexpr std::uint8_t kSecretMagic[4] = {'C', 'H', 'S', 'K'};

class Writer {
   public:
      void u8(std::uint8_t v) { m_out.push_back(v); }

      void u16(std::uint64_t v) {
         if(v > std::numeric_limits<std::uint16_t>::max()) {
            throw DomainError("value " + std::to_string(v) + " does not fit a 16-bit field");
         }
         u8(static_cast<std::uint8_t>(v >> 8));
         u8(static_cast<std::uint8_t>(v));
      }

      void u32(std::uint64_t v) {
         if(v > std::numeric_limits<std::uint32_t>::max()) {
            throw DomainError("value does not fit a 32-bit field");
         }
         for(int s = 24; s >= 0; s -= 8) {
            u8(static_cast<std::uint8_t>(v >> s));
         }
      }

      void raw(ByteView b) { m_out.insert(m_out.end(), b.begin(), b.end()); }

      Bytes take() { return std::move(m_out); }

   private:
      Bytes m_out;
};

class Reader {
   public:
      explicit Reader(ByteView in) : m_in(in) {}

      std::uint8_t u8() { return take(1)[0]; }

      std::uint16_t u16() {
         const auto b = take(2);
         return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
      }

      std::uint32_t u32() {
         const auto b = take(4);
         return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
      }

      ByteView take(std::size_t n) {
         if(remaining() < n) {
            throw ParseError(ParseErrorKind::Truncated,
                             "truncated input: needed " + std::to_string(n) + " bytes at offset " +
                                std::to_string(m_pos) + ", " + std::to_string(remaining()) + " available");
         }
         auto out = m_in.subspan(m_pos, n);
         m_pos += n;
         return out;
      }

      std::size_t remaining() const { return m_in.size() - m_pos; }

   private:
      ByteView m_in;
      std::size_t m_pos = 0;
};

void check_magic(Reader& r, const std::uint8_t (&magic)[4], const char* what) {
   if(r.remaining() < 4) {
      throw ParseError(ParseErrorKind::BadMagic, std::string("not a ") + what + " (too short for magic)");
   }
   const auto m = r.take(4);
   if(!std::equal(m.begin(), m.end(), std::begin(magic))) {
      throw ParseError(ParseErrorKind::BadMagic, std::string("not a ") + what + " (bad magic)");
   }
   const auto version = r.u8();
   if(version != kWireVersion) {
      throw ParseError(ParseErrorKind::UnsupportedVersion,
                       std::string("unsupported ") + what + " version " + std::to_string(version));
   }
}

// True when the rest of the input parses as a whole number of bundle entries.
bool looks_like_entries(Reader r) {
   if(r.remaining() == 0) {
      return false;
   }
   try {
      while(r.remaining() != 0) {
         r.u16();
         r.take(r.u32());
      }
      return true;
   } catch(const ParseError&) {
      return false;
   }
}

}  // namespace

Bytes serialize(const CiphertextBundle& bundle) {
   if(bundle.entries.size() != expected_entry_count(bundle.scheme, bundle.n)) {
      throw DomainError("bundle entry count does not match the scheme rule");
   }
   const auto field = bundle.field.to_string();
   Writer w;
   w.raw(kBundleMagic);
   w.u8(kWireVersion);
   w.u8(static_cast<std::uint8_t>(bundle.scheme));
   w.u16(field.size());
   w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(field.data()), field.size()));
   w.u16(bundle.n);
   for(const auto& e : bundle.entries) {
      w.u16(e.kem);
      w.u32(e.bytes.size());
      w.raw(e.bytes);
   }
   return w.take();
}

CiphertextBundle deserialize(ByteView bytes) {
   Reader r(bytes);
   check_magic(r, kBundleMagic, "CHOKE bundle");

   CiphertextBundle bundle;
   const auto scheme = r.u8();
   if(scheme < 1 || scheme > 3) {
      throw ParseError(ParseErrorKind::UnknownScheme, "unknown scheme code " + std::to_string(scheme));
   }
   bundle.scheme = static_cast<Scheme>(scheme);

   const auto field_len = r.u16();
   const auto field_bytes = r.take(field_len);
   bundle.field = FieldSpec::parse(std::string(field_bytes.begin(), field_bytes.end()));

   bundle.n = r.u16();
   if(bundle.n < 2) {
      throw ParseError(ParseErrorKind::BadValue, "bundle declares n=" + std::to_string(bundle.n));
   }
   const auto count = expected_entry_count(bundle.scheme, bundle.n);
   for(std::size_t i = 0; i != count; ++i) {
      BundleEntry e;
      e.kem = r.u16();
      const auto len = r.u32();
      const auto body = r.take(len);
      e.bytes.assign(body.begin(), body.end());
      bundle.entries.push_back(std::move(e));
   }
   if(r.remaining() != 0) {
      if(looks_like_entries(r)) {
         throw ParseError(ParseErrorKind::EntryCountMismatch,
                          "bundle holds more entries than " + std::to_string(count) + " required by its scheme");
      }
      throw ParseError(ParseErrorKind::Truncated,
                       std::to_string(r.remaining()) + " trailing bytes after the last entry");
   }
   return bundle;
}

Bytes write_key_file(KeyFileKind kind, const std::vector<KeyFileEntry>& entries) {
   Writer w;
   w.raw(kind == KeyFileKind::Public ? kPublicMagic : kSecretMagic);
   w.u8(kWireVersion);
   w.u16(entries.size());
   for(const auto& e : entries) {
      w.u16(e.slot);
      w.u16(e.kem);
      w.u32(e.parameter);
      w.u32(e.key.size());
      w.raw(e.key);
   }
   return w.take();
}

std::vector<KeyFileEntry> read_key_file(KeyFileKind kind, ByteView bytes) {
   Reader r(bytes);
   check_magic(r, kind == KeyFileKind::Public ? kPublicMagic : kSecretMagic,
               kind == KeyFileKind::Public ? "public suite file" : "secret key file");
   const auto count = r.u16();
   std::vector<KeyFileEntry> out;
   for(std::size_t i = 0; i != count; ++i) {
      KeyFileEntry e;
      e.slot = r.u16();
      e.kem = r.u16();
      e.parameter = r.u32();
      const auto key = r.take(r.u32());
      e.key.assign(key.begin(), key.end());
      out.push_back(std::move(e));
   }
   if(r.remaining() != 0) {
      throw ParseError(ParseErrorKind::EntryCountMismatch, "trailing data in key file");
   }
   return out;
}

std::vector<KeyFileEntry> export_keys(const KemSuite& suite, KeyFileKind kind) {
   std::vector<KeyFileEntry> out;
   for(std::size_t i = 0; i != suite.n(); ++i) {
      const auto& s = suite.slot(i);
      if(s.keys.public_key.state || s.keys.secret_key.state) {
         throw DomainError("KEM_" + std::to_string(i + 1) + " (" + s.kem->id().name +
                           ") keys are process-local and cannot be written to a file");
      }
      out.push_back(KeyFileEntry{i, s.kem->id().value, s.kem->parameter(),
                                 kind == KeyFileKind::Public ? s.keys.public_key.bytes : s.keys.secret_key.bytes});
   }
   return out;
}

KemSuite import_suite(const FieldSpec& field,
                      std::size_t key_symbols,
                      const std::vector<KeyFileEntry>& public_entries,
                      const std::vector<KeyFileEntry>& secret_entries) {
   std::vector<SuiteSlot> slots(public_entries.size());
   for(const auto& e : public_entries) {
      if(e.slot >= slots.size() || slots[e.slot].kem) {
         throw DomainError("public suite file has a missing or duplicate slot " + std::to_string(e.slot + 1));
      }
      auto kem = make_builtin_kem(e.kem, e.parameter);
      slots[e.slot].keys.public_key = KemPublicKey{kem->id(), e.key, nullptr};
      slots[e.slot].keys.secret_key = KemSecretKey{kem->id(), {}, nullptr};
      slots[e.slot].kem = std::move(kem);
   }
   for(const auto& e : secret_entries) {
      if(e.slot >= slots.size()) {
         throw DomainError("secret key for slot " + std::to_string(e.slot + 1) + " is outside the suite");
      }
      auto& s = slots[e.slot];
      if(e.kem != s.kem->id().value || e.parameter != s.kem->parameter()) {
         throw DomainError("secret key for slot " + std::to_string(e.slot + 1) + " belongs to a different KEM");
      }
      s.keys.secret_key.bytes = e.key;
   }
   return KemSuite(field, key_symbols, std::move(slots));
}

}  // namespace choke
