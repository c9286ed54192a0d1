/*
 * Exact information measures over equally weighted finite samples
 */

#include <choke/infotheory.h>

#include <choke/error.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace choke {

namespace {

template <typename T>
std::map<T, std::uint64_t> tally(std::span<const T> xs) {
   std::map<T, std::uint64_t> counts;
   for(const auto& x : xs) {
      ++counts[x];
   }
   return counts;
}

unsigned __int128 wide(std::uint64_t v) {
   return v;
}

}  // namespace

MutualInformation exact_mutual_information(std::span<const std::pair<std::uint64_t, std::uint64_t>> outcomes) {
   MutualInformation mi;
   mi.samples = outcomes.size();
   if(outcomes.empty()) {
      return mi;
   }

   std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(outcomes.begin(), outcomes.end());
   std::sort(sorted.begin(), sorted.end());

   std::map<std::uint64_t, std::uint64_t> count_a;
   std::map<std::uint64_t, std::uint64_t> count_b;
   for(const auto& [a, b] : sorted) {
      ++count_a[a];
      ++count_b[b];
   }

   const std::uint64_t total = sorted.size();
   // Independence holds iff c(a,b) * N == c(a) * c(b) for every pair, including
   // pairs that never occur; those require c(a) * c(b) == 0, which is impossible
   // for observed marginals, so the support must be the full product.
   std::uint64_t support = 0;
   double bits = 0.0;
   for(std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while(j < sorted.size() && sorted[j] == sorted[i]) {
         ++j;
      }
      const std::uint64_t c_ab = j - i;
      const std::uint64_t c_a = count_a[sorted[i].first];
      const std::uint64_t c_b = count_b[sorted[i].second];
      if(wide(c_ab) * total != wide(c_a) * c_b) {
         mi.exactly_zero = false;
      }
      bits += static_cast<double>(c_ab) / static_cast<double>(total) *
              std::log2(static_cast<double>(c_ab) * static_cast<double>(total) /
                        (static_cast<double>(c_a) * static_cast<double>(c_b)));
      ++support;
      i = j;
   }
   if(support != count_a.size() * count_b.size()) {
      mi.exactly_zero = false;
   }
   mi.bits = mi.exactly_zero ? 0.0 : bits;
   return mi;
}

Fraction statistical_distance(std::span<const std::uint64_t> p, std::span<const std::uint64_t> q) {
   if(p.empty() || q.empty()) {
      throw DomainError("statistical_distance of an empty sample");
   }
   const auto cp = tally(p);
   const auto cq = tally(q);
   const unsigned __int128 np = p.size();
   const unsigned __int128 nq = q.size();

   unsigned __int128 num = 0;
   auto ip = cp.begin();
   auto iq = cq.begin();
   while(ip != cp.end() || iq != cq.end()) {
      unsigned __int128 a = 0;
      unsigned __int128 b = 0;
      if(iq == cq.end() || (ip != cp.end() && ip->first < iq->first)) {
         a = ip->second * nq;
         ++ip;
      } else if(ip == cp.end() || iq->first < ip->first) {
         b = iq->second * np;
         ++iq;
      } else {
         a = ip->second * nq;
         b = iq->second * np;
         ++ip;
         ++iq;
      }
      num += a > b ? a - b : b - a;
   }
   unsigned __int128 den = 2 * np * nq;
   auto g = num;
   auto h = den;
   while(h != 0) {
      const auto t = g % h;
      g = h;
      h = t;
   }
   if(num == 0) {
      return Fraction{0, 1};
   }
   num /= g;
   den /= g;
   if(den > UINT64_MAX) {
      throw ResourceError("statistical distance denominator overflows 64 bits");
   }
   return Fraction{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

}  // namespace choke
