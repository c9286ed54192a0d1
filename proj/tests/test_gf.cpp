#include <doctest.h>

#include <choke/error.h>
#include <choke/gf.h>
#include <choke/prf.h>

#include "oracles.h"

using namespace choke;

namespace {

FieldElement el(const FieldSpec& f, std::uint32_t v) {
   return FieldElement(f, v);
}

void check_axioms_exhaustive(const FieldSpec& f) {
   const auto all = enumerate_field(f);
   const auto zero = FieldElement::zero(f);
   const auto one = FieldElement::one(f);
   for(const auto& a : all) {
      CHECK(a + zero == a);
      CHECK(a * one == a);
      CHECK(a + (-a) == zero);
      if(!a.is_zero()) {
         CHECK(a * a.inverse() == one);
      }
      for(const auto& b : all) {
         CHECK(a + b == b + a);
         CHECK(a * b == b * a);
         for(const auto& c : all) {
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
         }
      }
   }
}

}  // namespace

TEST_CASE("field_add examples") {
   const auto f5 = FieldSpec::prime(5);
   CHECK(field_add(el(f5, 3), el(f5, 4)).value() == 2);

   const auto gf8 = FieldSpec::binary(8);
   CHECK(field_add(el(gf8, 0x53), el(gf8, 0xCA)).value() == 0x99);

   for(const auto& a : enumerate_field(gf8)) {
      CHECK(field_add(a, FieldElement::zero(gf8)) == a);
   }
}

TEST_CASE("field_mul examples") {
   const auto f5 = FieldSpec::prime(5);
   CHECK(field_mul(el(f5, 3), el(f5, 4)).value() == 2);

   // Frozen from the shift-and-reduce oracle.
   REQUIRE(test::shift_reduce_mul(0x53, 0xCA, 8, 0x11B) == 0x01);
   const auto gf8 = FieldSpec::binary(8, 0x11B);
   CHECK(field_mul(el(gf8, 0x53), el(gf8, 0xCA)).value() == 0x01);

   for(const auto& a : enumerate_field(f5)) {
      CHECK(field_mul(a, FieldElement::one(f5)) == a);
   }
}

TEST_CASE("field_inv examples") {
   const auto f5 = FieldSpec::prime(5);
   const auto gf8 = FieldSpec::binary(8, 0x11B);
   CHECK(field_inv(FieldElement::one(f5)).value() == 1);
   CHECK(field_inv(FieldElement::one(gf8)).value() == 1);
   CHECK(field_inv(el(f5, 2)).value() == 3);

   REQUIRE(test::search_inverse(0x53, 8, 0x11B) == 0xCA);
   CHECK(field_inv(el(gf8, 0x53)).value() == 0xCA);

   CHECK_THROWS_AS(field_inv(FieldElement::zero(f5)), NotInvertibleError);
   CHECK_THROWS_AS(field_inv(FieldElement::zero(gf8)), NotInvertibleError);
}

TEST_CASE("enumerate_field") {
   std::vector<std::uint32_t> values;
   for(const auto& e : enumerate_field(FieldSpec::prime(5))) {
      values.push_back(e.value());
   }
   CHECK(values == std::vector<std::uint32_t>{0, 1, 2, 3, 4});

   values.clear();
   for(const auto& e : enumerate_field(FieldSpec::binary(2))) {
      values.push_back(e.value());
   }
   CHECK(values == std::vector<std::uint32_t>{0, 1, 2, 3});

   CHECK(enumerate_field(FieldSpec::binary(8)).size() == 256);
}

TEST_CASE("field axioms hold exhaustively over F_5, F_7 and GF(2^4)") {
   check_axioms_exhaustive(FieldSpec::prime(5));
   check_axioms_exhaustive(FieldSpec::prime(7));
   check_axioms_exhaustive(FieldSpec::binary(4));
}

TEST_CASE("field axioms hold on random samples over GF(2^8) and GF(2^16)") {
   SplitMix64Rng rng(7);
   for(const auto& f : {FieldSpec::binary(8), FieldSpec::binary(16), FieldSpec::prime(65521)}) {
      for(int i = 0; i != 10'000; ++i) {
         const auto a = el(f, static_cast<std::uint32_t>(rng.uniform(f.order())));
         const auto b = el(f, static_cast<std::uint32_t>(rng.uniform(f.order())));
         const auto c = el(f, static_cast<std::uint32_t>(rng.uniform(f.order())));
         REQUIRE(a + b == b + a);
         REQUIRE(a * b == b * a);
         REQUIRE((a + b) + c == a + (b + c));
         REQUIRE((a * b) * c == a * (b * c));
         REQUIRE(a * (b + c) == a * b + a * c);
         if(!a.is_zero()) {
            REQUIRE(a * a.inverse() == FieldElement::one(f));
         }
      }
   }
}

TEST_CASE("prime field tables agree with integer arithmetic") {
   for(std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
      const auto f = FieldSpec::prime(p);
      for(std::uint32_t a = 0; a != p; ++a) {
         for(std::uint32_t b = 0; b != p; ++b) {
            CHECK(f.add(a, b) == (a + b) % p);
            CHECK(f.mul(a, b) == (a * b) % p);
            CHECK(f.sub(a, b) == (a + p - b) % p);
         }
      }
   }
}

TEST_CASE("binary multiplication matches the shift-and-reduce oracle") {
   const auto gf4 = FieldSpec::binary(4);
   for(std::uint32_t a = 0; a != 16; ++a) {
      for(std::uint32_t b = 0; b != 16; ++b) {
         REQUIRE(gf4.mul(a, b) == test::shift_reduce_mul(a, b, 4, gf4.reduction_poly()));
      }
   }
   const auto gf8 = FieldSpec::binary(8, 0x11B);
   SplitMix64Rng rng(2024);
   for(int i = 0; i != 10'000; ++i) {
      const auto a = static_cast<std::uint32_t>(rng.uniform(256));
      const auto b = static_cast<std::uint32_t>(rng.uniform(256));
      REQUIRE(gf8.mul(a, b) == test::shift_reduce_mul(a, b, 8, 0x11B));
   }
}

TEST_CASE("default reduction polynomials") {
   CHECK(FieldSpec::default_reduction_poly(8) == 0x11B);
   CHECK(FieldSpec::default_reduction_poly(16) == 0x1002B);
   CHECK(FieldSpec::default_reduction_poly(1) == 0x2);
   CHECK(FieldSpec::default_reduction_poly(2) == 0x7);
   for(unsigned u = 1; u <= 16; ++u) {
      CHECK(FieldSpec::binary(u).order() == (1u << u));
   }
}

TEST_CASE("canonical text form") {
   CHECK(FieldSpec::prime(5).to_string() == "Fp:5");
   CHECK(FieldSpec::binary(8).to_string() == "GF2:8:0x11B");
   CHECK(FieldSpec::binary(16).to_string() == "GF2:16:0x1002B");
   for(const auto* s : {"Fp:5", "Fp:65521", "GF2:8:0x11B", "GF2:4:0x13", "GF2:16:0x1002B"}) {
      CHECK(FieldSpec::parse(s).to_string() == s);
   }
   CHECK(FieldSpec::parse("GF2:8:0x11b") == FieldSpec::binary(8));

   for(const auto* bad : {"", "Fp:", "Fp:4", "Fp:5x", "GF2:8", "GF2:8:11B", "GF2:8:0x11A", "GF2:17:0x3", "F5"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(FieldSpec::parse(bad), ParseError);
   }
}

TEST_CASE("construction and combination errors") {
   CHECK_THROWS_AS(FieldSpec::prime(1), DomainError);
   CHECK_THROWS_AS(FieldSpec::prime(9), DomainError);
   CHECK_THROWS_AS(FieldSpec::prime(65537), DomainError);
   CHECK_THROWS_AS(FieldSpec::binary(0), DomainError);
   CHECK_THROWS_AS(FieldSpec::binary(17), DomainError);
   // x^8 + 1 = (x + 1)^8
   CHECK_THROWS_AS(FieldSpec::binary(8, 0x101), DomainError);
   CHECK_THROWS_AS(FieldElement(FieldSpec::prime(5), 5), DomainError);

   const auto a = el(FieldSpec::prime(5), 1);
   const auto b = el(FieldSpec::prime(7), 1);
   CHECK_THROWS_AS(a + b, DomainError);
   CHECK_THROWS_AS(a * b, DomainError);
   const auto c = el(FieldSpec::binary(8, 0x11B), 1);
   const auto d = el(FieldSpec::binary(8, 0x11D), 1);
   CHECK_THROWS_AS(c + d, DomainError);
}
