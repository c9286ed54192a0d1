/*
 * Individually secure linear codes
 */

#include <choke/iscode.h>

#include <choke/error.h>

#include <algorithm>
#include <sstream>

namespace choke {

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
   std::vector<std::vector<std::size_t>> out;
   if(k > n) {
      return out;
   }
   std::vector<std::size_t> idx(k);
   for(std::size_t i = 0; i != k; ++i) {
      idx[i] = i;
   }
   while(true) {
      out.push_back(idx);
      std::size_t i = k;
      while(i > 0 && idx[i - 1] == n - k + (i - 1)) {
         --i;
      }
      if(i == 0) {
         break;
      }
      ++idx[i - 1];
      for(std::size_t t = i; t != k; ++t) {
         idx[t] = idx[t - 1] + 1;
      }
   }
   return out;
}

bool subset_reveals_key(const Matrix& g, std::span<const std::size_t> subset, std::size_t key) {
   if(key >= g.rows()) {
      throw DomainError("key index out of range");
   }
   if(subset.empty()) {
      return false;
   }
   std::vector<std::uint32_t> e(g.rows(), 0);
   e[key] = 1;
   return solve_linear(g.select_columns(subset), e).has_value();
}

SecurityReport verify_individual_security(const Matrix& g, std::size_t w) {
   if(!g.is_square()) {
      throw DomainError("generator matrix must be square");
   }
   const std::size_t n = g.rows();
   if(w >= n) {
      throw DomainError("security parameter w=" + std::to_string(w) + " must be below n=" + std::to_string(n));
   }
   for(const auto& subset : subsets_of_size(n, w)) {
      for(std::size_t j = 0; j != n; ++j) {
         if(subset_reveals_key(g, subset, j)) {
            return SecurityReport{false, LeakWitness{subset, j}};
         }
      }
   }
   return SecurityReport{};
}

MutualInformation mi_oracle(const Matrix& g, std::size_t key, std::span<const std::size_t> subset) {
   if(!g.is_square()) {
      throw DomainError("generator matrix must be square");
   }
   const std::size_t n = g.rows();
   if(key >= n) {
      throw DomainError("key index out of range");
   }
   for(auto s : subset) {
      if(s >= n) {
         throw DomainError("coded position out of range");
      }
   }
   const auto& f = g.spec();
   const std::uint64_t q = f.order();
   std::uint64_t total = 1;
   for(std::size_t i = 0; i != n; ++i) {
      total *= q;
      if(total > kMiEnumerationBound) {
         throw ResourceError("mi_oracle: q^n exceeds the enumeration bound");
      }
   }

   std::vector<std::pair<std::uint64_t, std::uint64_t>> outcomes;
   outcomes.reserve(total);
   std::vector<std::uint32_t> k(n, 0);
   for(std::uint64_t idx = 0; idx != total; ++idx) {
      std::uint64_t rest = idx;
      for(std::size_t i = 0; i != n; ++i) {
         k[i] = static_cast<std::uint32_t>(rest % q);
         rest /= q;
      }
      std::uint64_t observed = 0;
      for(auto col : subset) {
         std::uint32_t x = 0;
         for(std::size_t i = 0; i != n; ++i) {
            x = f.add(x, f.mul(k[i], g(i, col)));
         }
         observed = observed * q + x;
      }
      outcomes.emplace_back(k[key], observed);
   }
   return exact_mutual_information(outcomes);
}

Matrix vandermonde(const FieldSpec& spec, std::span<const std::uint32_t> points) {
   const std::size_t n = points.size();
   Matrix v(spec, n, n);
   for(std::size_t j = 0; j != n; ++j) {
      if(points[j] >= spec.order()) {
         throw DomainError("evaluation point out of range");
      }
      std::uint32_t power = 1;
      for(std::size_t i = 0; i != n; ++i) {
         v(i, j) = power;
         power = spec.mul(power, points[j]);
      }
   }
   return v;
}

GeneratorMatrix GeneratorMatrix::from_matrix(Matrix entries, std::size_t w) {
   if(!entries.is_square() || entries.rows() < 2) {
      throw ConstructionError("generator matrix must be square with n >= 2");
   }
   const std::size_t n = entries.rows();
   if(w < 1 || w > n - 1) {
      throw ConstructionError("security parameter must satisfy 1 <= w <= n-1");
   }
   Matrix inverse = [&] {
      try {
         return matrix_inverse(entries);
      } catch(const NotInvertibleError&) {
         throw ConstructionError("generator matrix is singular");
      }
   }();
   const auto report = verify_individual_security(entries, w);
   if(!report.pass) {
      throw ConstructionError("generator matrix is not individually secure for w=" + std::to_string(w));
   }
   return GeneratorMatrix(std::move(entries), std::move(inverse), w);
}

namespace {

// Advances a strictly increasing point set over {1..q-1} to its lexicographic successor.
bool next_point_set(std::vector<std::uint32_t>& pts, std::uint32_t q) {
   const std::size_t n = pts.size();
   std::size_t i = n;
   while(i > 0 && pts[i - 1] == q - 1 - (n - i)) {
      --i;
   }
   if(i == 0) {
      return false;
   }
   ++pts[i - 1];
   for(std::size_t t = i; t != n; ++t) {
      pts[t] = pts[t - 1] + 1;
   }
   return true;
}

}  // namespace

GeneratorMatrix build_generator(std::size_t n,
                                std::size_t w,
                                const FieldSpec& spec,
                                std::optional<std::vector<std::uint32_t>> points) {
   if(n < 2) {
      throw ConstructionError("n must be at least 2 (w >= 1 requires w <= n-1)");
   }
   if(w < 1 || w > n - 1) {
      throw ConstructionError("security parameter must satisfy 1 <= w <= n-1");
   }
   if(spec.order() <= n) {
      throw ConstructionError("field " + spec.to_string() + " has fewer than n distinct nonzero points");
   }

   std::vector<std::uint32_t> candidate;
   if(points) {
      if(points->size() != n) {
         throw DomainError("expected " + std::to_string(n) + " evaluation points");
      }
      auto sorted = *points;
      std::sort(sorted.begin(), sorted.end());
      if(std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() == 0 ||
         sorted.back() >= spec.order()) {
         throw DomainError("evaluation points must be distinct, nonzero field elements");
      }
      candidate = *points;
   } else {
      for(std::size_t i = 0; i != n; ++i) {
         candidate.push_back(static_cast<std::uint32_t>(i + 1));
      }
   }

   std::vector<std::uint32_t> cursor = candidate;
   std::sort(cursor.begin(), cursor.end());
   for(std::size_t attempt = 0; attempt != kMaxPointSetCandidates; ++attempt) {
      Matrix v = vandermonde(spec, candidate);
      if(verify_individual_security(v, w).pass) {
         return GeneratorMatrix::from_matrix(std::move(v), w);
      }
      if(!next_point_set(cursor, spec.order())) {
         break;
      }
      candidate = cursor;
   }
   throw ConstructionError("no individually secure point set found for n=" + std::to_string(n) +
                           ", w=" + std::to_string(w) + " over " + spec.to_string());
}

CodedBlock encode(const KeyBlock& keys, const Matrix& g) {
   if(!g.is_square() || keys.rows() != g.rows() || keys.spec() != g.spec()) {
      throw DomainError("encode: key block does not match the generator shape or field");
   }
   return CodedBlock(g.transpose() * keys.symbols());
}

CodedBlock encode(const KeyBlock& keys, const GeneratorMatrix& g) {
   return encode(keys, g.entries());
}

KeyBlock decode(const CodedBlock& coded, const GeneratorMatrix& g) {
   if(coded.rows() != g.n() || coded.spec() != g.spec()) {
      throw DomainError("decode: coded block does not match the generator shape or field");
   }
   return KeyBlock(g.inverse().transpose() * coded.symbols());
}

GeneratorText read_generator_text(const std::string& text) {
   std::istringstream in(text);
   auto fail = [](const std::string& why) -> ParseError {
      return ParseError(ParseErrorKind::BadValue, "generator file: " + why);
   };
   std::string field_line;
   if(!std::getline(in, field_line)) {
      throw fail("missing field spec");
   }
   const auto spec = FieldSpec::parse(field_line);
   long long n = 0;
   long long w = 0;
   if(!(in >> n) || n < 1 || n > 4096) {
      throw fail("bad n");
   }
   if(!(in >> w) || w < 0) {
      throw fail("bad w");
   }
   std::vector<std::uint32_t> values;
   for(long long i = 0; i != n * n; ++i) {
      long long v = 0;
      if(!(in >> v)) {
         throw fail("expected " + std::to_string(n * n) + " entries");
      }
      if(v < 0 || v >= spec.order()) {
         throw fail("entry " + std::to_string(v) + " out of range");
      }
      values.push_back(static_cast<std::uint32_t>(v));
   }
   std::string extra;
   if(in >> extra) {
      throw fail("trailing data");
   }
   return GeneratorText{Matrix(spec, n, n, std::move(values)), static_cast<std::size_t>(w)};
}

std::string write_generator_text(const Matrix& entries, std::size_t w) {
   std::ostringstream out;
   out << entries.spec().to_string() << "\n" << entries.rows() << "\n" << w << "\n";
   for(std::size_t r = 0; r != entries.rows(); ++r) {
      for(std::size_t c = 0; c != entries.cols(); ++c) {
         out << (c ? " " : "") << entries(r, c);
      }
      out << "\n";
   }
   return out.str();
}

std::string key_block_to_text(const KeyBlock& keys) {
   std::ostringstream out;
   out << keys.spec().to_string() << "\n";
   for(std::size_t r = 0; r != keys.rows(); ++r) {
      const auto row = keys.row(r);
      for(std::size_t c = 0; c != row.size(); ++c) {
         out << (c ? " " : "") << row[c];
      }
      out << "\n";
   }
   return out.str();
}

KeyBlock key_block_from_text(const std::string& text) {
   std::istringstream in(text);
   std::string line;
   if(!std::getline(in, line)) {
      throw ParseError(ParseErrorKind::BadValue, "key file: missing field spec");
   }
   const auto spec = FieldSpec::parse(line);
   std::vector<std::uint32_t> values;
   std::size_t rows = 0;
   std::size_t cols = 0;
   while(std::getline(in, line)) {
      std::istringstream row(line);
      std::size_t count = 0;
      long long v = 0;
      while(row >> v) {
         if(v < 0 || v >= spec.order()) {
            throw ParseError(ParseErrorKind::BadValue, "key file: symbol out of range");
         }
         values.push_back(static_cast<std::uint32_t>(v));
         ++count;
      }
      if(!row.eof()) {
         throw ParseError(ParseErrorKind::BadValue, "key file: non-numeric symbol");
      }
      if(count == 0) {
         continue;
      }
      if(rows != 0 && count != cols) {
         throw ParseError(ParseErrorKind::BadValue, "key file: rows differ in length");
      }
      cols = count;
      ++rows;
   }
   if(rows == 0) {
      throw ParseError(ParseErrorKind::BadValue, "key file: no keys");
   }
   return KeyBlock(Matrix(spec, rows, cols, std::move(values)));
}

GeneratorMatrix GeneratorMatrix::parse_text(const std::string& text) {
   auto parsed = read_generator_text(text);
   return from_matrix(std::move(parsed.entries), parsed.w);
}

std::string GeneratorMatrix::to_text() const {
   return write_generator_text(m_entries, m_w);
}

}  // namespace choke
