/*
 * Individually secure linear codes
 *
 * Session keys are row vectors: a KeyBlock holds n keys (rows) of d field
 * symbols each, and every column k of the block is coded as x = k * G.
 * Column j of G therefore defines coded symbol X_j, the plaintext handed
 * to KEM_j. A code is individually secure against w observed symbols when
 * no w columns of G span a standard basis vector e_j; for uniform keys this
 * is exactly I(k_j; X_S) = 0 for every |S| = w and every j.
 *
 * All indices in this API are 0-based.
 */

#ifndef CHOKE_ISCODE_H_
#define CHOKE_ISCODE_H_

#include <choke/gf.h>
#include <choke/infotheory.h>
#include <choke/matrix.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace choke {

template <typename Tag>
class SymbolBlock {
   public:
      explicit SymbolBlock(Matrix symbols) : m_symbols(std::move(symbols)) {}

      SymbolBlock(const FieldSpec& spec, std::size_t rows, std::size_t symbols_per_row) :
            m_symbols(spec, rows, symbols_per_row) {}

      const FieldSpec& spec() const { return m_symbols.spec(); }

      std::size_t rows() const { return m_symbols.rows(); }

      /// Symbols per row (the key length d).
      std::size_t length() const { return m_symbols.cols(); }

      std::span<const std::uint32_t> row(std::size_t r) const { return m_symbols.row(r); }

      const Matrix& symbols() const { return m_symbols; }

      Matrix& symbols() { return m_symbols; }

      bool operator==(const SymbolBlock&) const = default;

   private:
      Matrix m_symbols;
};

/// n session keys, one per row.
using KeyBlock = SymbolBlock<struct KeyBlockTag>;
/// n coded symbols X_1..X_n, one per row; row j is the input to KEM_j.
using CodedBlock = SymbolBlock<struct CodedBlockTag>;

struct LeakWitness {
      std::vector<std::size_t> subset;
      std::size_t key = 0;

      bool operator==(const LeakWitness&) const = default;
};

struct SecurityReport {
      bool pass = true;
      std::optional<LeakWitness> failing;
};

/// True iff e_key lies in the column span of g restricted to `subset`, i.e. the
/// observed coded symbols determine k_key.
bool subset_reveals_key(const Matrix& g, std::span<const std::size_t> subset, std::size_t key);

/// Checks every column subset of size exactly w, in lexicographic order, against every key.
/// Throws DomainError unless g is square and w < n.
SecurityReport verify_individual_security(const Matrix& g, std::size_t w);

/// Exact I(k_key; X_subset) for uniform keys, by enumerating all q^n key vectors.
/// Throws ResourceError when q^n > kMiEnumerationBound.
MutualInformation mi_oracle(const Matrix& g, std::size_t key, std::span<const std::size_t> subset);

inline constexpr std::uint64_t kMiEnumerationBound = 10'000'000;

/// Square matrix with entry (i, j) = points[j]^i.
Matrix vandermonde(const FieldSpec& spec, std::span<const std::uint32_t> points);

class GeneratorMatrix {
   public:
      /// Validates invertibility, 1 <= w <= n-1 and individual security.
      /// Throws ConstructionError on any failure.
      static GeneratorMatrix from_matrix(Matrix entries, std::size_t w);

      /// Canonical text form: field spec, n, w, then one row of decimal entries per line.
      static GeneratorMatrix parse_text(const std::string& text);

      std::string to_text() const;

      std::size_t n() const { return m_entries.rows(); }

      std::size_t w() const { return m_w; }

      const FieldSpec& spec() const { return m_entries.spec(); }

      const Matrix& entries() const { return m_entries; }

      const Matrix& inverse() const { return m_inverse; }

   private:
      GeneratorMatrix(Matrix entries, Matrix inverse, std::size_t w) :
            m_entries(std::move(entries)), m_inverse(std::move(inverse)), m_w(w) {}

      Matrix m_entries;
      Matrix m_inverse;
      std::size_t m_w;
};

/// Unverified contents of a generator text file.
struct GeneratorText {
      Matrix entries;
      std::size_t w;
};

/// Throws ParseError on malformed input; does not check security.
GeneratorText read_generator_text(const std::string& text);
std::string write_generator_text(const Matrix& entries, std::size_t w);

/// Bound on candidate point sets tried by build_generator.
inline constexpr std::size_t kMaxPointSetCandidates = 10'000;

/// Vandermonde generator on n distinct nonzero points. When the candidate set
/// fails verification the next point set in lexicographic order is tried.
/// Without explicit points the search starts at {1, 2, ..., n}.
GeneratorMatrix build_generator(std::size_t n,
                                std::size_t w,
                                const FieldSpec& spec,
                                std::optional<std::vector<std::uint32_t>> points = std::nullopt);

/// X = K * G applied column-wise.
CodedBlock encode(const KeyBlock& keys, const GeneratorMatrix& g);
CodedBlock encode(const KeyBlock& keys, const Matrix& g);

/// K = X * G^-1 applied column-wise.
KeyBlock decode(const CodedBlock& coded, const GeneratorMatrix& g);

/// Text form of a key block: field spec line, then one row of decimal symbols per key.
std::string key_block_to_text(const KeyBlock& keys);
/// Throws ParseError on malformed input.
KeyBlock key_block_from_text(const std::string& text);

/// Every k-subset of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k);

}  // namespace choke

#endif
