/*
 * Arithmetic over small prime fields F_p and binary fields GF(2^u)
 *
 * Elements are stored as reduced integers. Binary-field values are
 * polynomials over GF(2) packed into bits (bit i = coefficient of x^i).
 */

#ifndef CHOKE_GF_H_
#define CHOKE_GF_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace choke {

enum class FieldKind : std::uint8_t { Prime, BinaryExtension };

class FieldSpec {
   public:
      static constexpr std::uint32_t kMaxOrder = 1u << 16;

      /// Throws DomainError unless 2 <= p <= 2^16 and p is prime.
      static FieldSpec prime(std::uint32_t p);

      /// GF(2^u) with the default reduction polynomial for u.
      static FieldSpec binary(unsigned u);

      /// Throws DomainError unless poly has degree u and is irreducible.
      static FieldSpec binary(unsigned u, std::uint32_t reduction_poly);

      /// Parses "Fp:5" or "GF2:8:0x11B"; throws ParseError(BadFieldSpec).
      static FieldSpec parse(std::string_view text);

      /// Lexicographically smallest irreducible polynomial of degree u.
      static std::uint32_t default_reduction_poly(unsigned u);

      FieldKind kind() const { return m_kind; }

      std::uint32_t order() const { return m_order; }

      /// Prime modulus; 2 for binary fields.
      std::uint32_t characteristic() const { return m_kind == FieldKind::Prime ? m_order : 2; }

      /// Extension degree; 1 for prime fields.
      unsigned degree() const { return m_degree; }

      std::uint32_t reduction_poly() const { return m_poly; }

      /// Bytes used per symbol on the wire: 1 when order <= 256, else 2.
      std::size_t symbol_bytes() const { return m_order <= 256 ? 1 : 2; }

      /// Canonical text rendering: "Fp:5" or "GF2:8:0x11B".
      std::string to_string() const;

      // Raw arithmetic on reduced values. Inputs must be < order().
      std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
      std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
      std::uint32_t neg(std::uint32_t a) const;
      std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
      /// Throws NotInvertibleError for zero.
      std::uint32_t inv(std::uint32_t a) const;
      std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

      bool operator==(const FieldSpec&) const = default;

   private:
      FieldSpec(FieldKind kind, std::uint32_t order, unsigned degree, std::uint32_t poly) :
            m_kind(kind), m_order(order), m_degree(degree), m_poly(poly) {}

      FieldKind m_kind;
      std::uint32_t m_order;
      unsigned m_degree;
      std::uint32_t m_poly;
};

bool is_prime(std::uint32_t v);

/// True iff poly (bitmask, degree u) is irreducible over GF(2).
bool is_irreducible_gf2(std::uint32_t poly, unsigned u);

class FieldElement {
   public:
      /// Throws DomainError if value >= spec.order().
      FieldElement(const FieldSpec& spec, std::uint32_t value);

      static FieldElement zero(const FieldSpec& spec) { return FieldElement(spec, 0); }

      static FieldElement one(const FieldSpec& spec) { return FieldElement(spec, 1); }

      std::uint32_t value() const { return m_value; }

      const FieldSpec& spec() const { return m_spec; }

      bool is_zero() const { return m_value == 0; }

      FieldElement inverse() const;

      FieldElement pow(std::uint64_t e) const;

      FieldElement operator-() const;

      friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
      friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
      friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
      friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

      FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }

      FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

      bool operator==(const FieldElement&) const = default;

   private:
      struct Unchecked {};

      FieldElement(const FieldSpec& spec, std::uint32_t value, Unchecked) : m_spec(spec), m_value(value) {}

      FieldSpec m_spec;
      std::uint32_t m_value;
};

FieldElement field_add(const FieldElement& a, const FieldElement& b);
FieldElement field_mul(const FieldElement& a, const FieldElement& b);
FieldElement field_inv(const FieldElement& a);

/// Every element of the field in increasing value order.
std::vector<FieldElement> enumerate_field(const FieldSpec& spec);

}  // namespace choke

#endif
