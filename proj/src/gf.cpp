/*
 * Arithmetic over small prime fields F_p and binary fields GF(2^u)
 */

#include <choke/gf.h>

#include <choke/error.h>

#include <bit>
#include <charconv>
#include <cstdio>

namespace choke {

namespace {

unsigned poly_degree(std::uint64_t p) {
   return p == 0 ? 0 : static_cast<unsigned>(63 - std::countl_zero(p));
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
   const unsigned dm = poly_degree(m);
   while(a != 0 && poly_degree(a) >= dm) {
      a ^= m << (poly_degree(a) - dm);
   }
   return a;
}

std::uint64_t clmul(std::uint32_t a, std::uint32_t b) {
   std::uint64_t r = 0;
   std::uint64_t aa = a;
   while(b != 0) {
      if(b & 1) {
         r ^= aa;
      }
      aa <<= 1;
      b >>= 1;
   }
   return r;
}

[[noreturn]] void bad_spec(std::string_view text) {
   throw ParseError(ParseErrorKind::BadFieldSpec, "invalid field spec '" + std::string(text) + "'");
}

std::uint32_t parse_uint(std::string_view s, int base, std::string_view whole) {
   std::uint32_t v = 0;
   auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
   if(s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      bad_spec(whole);
   }
   return v;
}

}  // namespace

bool is_prime(std::uint32_t v) {
   if(v < 2) {
      return false;
   }
   for(std::uint32_t d = 2; d * d <= v; ++d) {
      if(v % d == 0) {
         return false;
      }
   }
   return true;
}

bool is_irreducible_gf2(std::uint32_t poly, unsigned u) {
   if(u == 0 || poly_degree(poly) != u) {
      return false;
   }
   // Trial division by every polynomial of degree 1..u/2.
   for(unsigned deg = 1; deg <= u / 2; ++deg) {
      for(std::uint64_t d = 1ull << deg; d < (2ull << deg); ++d) {
         if(poly_mod(poly, d) == 0) {
            return false;
         }
      }
   }
   return true;
}

std::uint32_t FieldSpec::default_reduction_poly(unsigned u) {
   if(u < 1 || u > 16) {
      throw DomainError("binary field degree must be in 1..16, got " + std::to_string(u));
   }
   for(std::uint32_t p = 1u << u; p < (2u << u); ++p) {
      if(is_irreducible_gf2(p, u)) {
         return p;
      }
   }
   throw DomainError("no irreducible polynomial of degree " + std::to_string(u));
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
   if(p < 2 || p > kMaxOrder || !is_prime(p)) {
      throw DomainError("prime field modulus must be a prime in 2..65536, got " + std::to_string(p));
   }
   return FieldSpec(FieldKind::Prime, p, 1, 0);
}

FieldSpec FieldSpec::binary(unsigned u) {
   return binary(u, default_reduction_poly(u));
}

FieldSpec FieldSpec::binary(unsigned u, std::uint32_t reduction_poly) {
   if(u < 1 || u > 16) {
      throw DomainError("binary field degree must be in 1..16, got " + std::to_string(u));
   }
   if(!is_irreducible_gf2(reduction_poly, u)) {
      throw DomainError("reduction polynomial is not irreducible of degree " + std::to_string(u));
   }
   return FieldSpec(FieldKind::BinaryExtension, 1u << u, u, reduction_poly);
}

FieldSpec FieldSpec::parse(std::string_view text) {
   try {
      if(text.starts_with("Fp:")) {
         return prime(parse_uint(text.substr(3), 10, text));
      }
      if(text.starts_with("GF2:")) {
         const auto rest = text.substr(4);
         const auto colon = rest.find(':');
         if(colon == std::string_view::npos) {
            bad_spec(text);
         }
         const auto u = parse_uint(rest.substr(0, colon), 10, text);
         auto poly_text = rest.substr(colon + 1);
         if(!poly_text.starts_with("0x")) {
            bad_spec(text);
         }
         return binary(u, parse_uint(poly_text.substr(2), 16, text));
      }
   } catch(const DomainError& e) {
      throw ParseError(ParseErrorKind::BadFieldSpec, e.what());
   }
   bad_spec(text);
}

std::string FieldSpec::to_string() const {
   if(m_kind == FieldKind::Prime) {
      return "Fp:" + std::to_string(m_order);
   }
   char buf[32];
   std::snprintf(buf, sizeof(buf), "GF2:%u:0x%X", m_degree, m_poly);
   return buf;
}

std::uint32_t FieldSpec::add(std::uint32_t a, std::uint32_t b) const {
   if(m_kind == FieldKind::BinaryExtension) {
      return a ^ b;
   }
   const std::uint32_t s = a + b;
   return s >= m_order ? s - m_order : s;
}

std::uint32_t FieldSpec::neg(std::uint32_t a) const {
   if(m_kind == FieldKind::BinaryExtension || a == 0) {
      return a;
   }
   return m_order - a;
}

std::uint32_t FieldSpec::sub(std::uint32_t a, std::uint32_t b) const {
   return add(a, neg(b));
}

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const {
   if(m_kind == FieldKind::Prime) {
      return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % m_order);
   }
   return static_cast<std::uint32_t>(poly_mod(clmul(a, b), m_poly));
}

std::uint32_t FieldSpec::pow(std::uint32_t a, std::uint64_t e) const {
   std::uint32_t result = 1;
   std::uint32_t base = a;
   while(e != 0) {
      if(e & 1) {
         result = mul(result, base);
      }
      base = mul(base, base);
      e >>= 1;
   }
   return result;
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
   if(a == 0) {
      throw NotInvertibleError("zero has no multiplicative inverse in " + to_string());
   }
   // The multiplicative group has order q - 1.
   return pow(a, m_order - 2);
}

FieldElement::FieldElement(const FieldSpec& spec, std::uint32_t value) : m_spec(spec), m_value(value) {
   if(value >= spec.order()) {
      throw DomainError("value " + std::to_string(value) + " out of range for " + spec.to_string());
   }
}

namespace {

const FieldSpec& common_spec(const FieldElement& a, const FieldElement& b) {
   if(a.spec() != b.spec()) {
      throw DomainError("field mismatch: " + a.spec().to_string() + " vs " + b.spec().to_string());
   }
   return a.spec();
}

}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
   const auto& f = common_spec(a, b);
   return FieldElement(f, f.add(a.m_value, b.m_value), FieldElement::Unchecked{});
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
   const auto& f = common_spec(a, b);
   return FieldElement(f, f.sub(a.m_value, b.m_value), FieldElement::Unchecked{});
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
   const auto& f = common_spec(a, b);
   return FieldElement(f, f.mul(a.m_value, b.m_value), FieldElement::Unchecked{});
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
   return a * b.inverse();
}

FieldElement FieldElement::operator-() const {
   return FieldElement(m_spec, m_spec.neg(m_value), Unchecked{});
}

FieldElement FieldElement::inverse() const {
   return FieldElement(m_spec, m_spec.inv(m_value), Unchecked{});
}

FieldElement FieldElement::pow(std::uint64_t e) const {
   return FieldElement(m_spec, m_spec.pow(m_value, e), Unchecked{});
}

FieldElement field_add(const FieldElement& a, const FieldElement& b) {
   return a + b;
}

FieldElement field_mul(const FieldElement& a, const FieldElement& b) {
   return a * b;
}

FieldElement field_inv(const FieldElement& a) {
   return a.inverse();
}

std::vector<FieldElement> enumerate_field(const FieldSpec& spec) {
   std::vector<FieldElement> out;
   out.reserve(spec.order());
   for(std::uint32_t v = 0; v < spec.order(); ++v) {
      out.emplace_back(spec, v);
   }
   return out;
}

}  // namespace choke
