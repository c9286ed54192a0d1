/*
 * Dense matrices over a FieldSpec
 */

#ifndef CHOKE_MATRIX_H_
#define CHOKE_MATRIX_H_

#include <choke/gf.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace choke {

class Matrix {
   public:
      Matrix(const FieldSpec& spec, std::size_t rows, std::size_t cols);

      /// Row-major values; throws DomainError on shape or range errors.
      Matrix(const FieldSpec& spec, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> values);

      static Matrix identity(const FieldSpec& spec, std::size_t n);

      /// Convenience for literals: {{1, 1}, {1, 2}}.
      static Matrix from_rows(const FieldSpec& spec, const std::vector<std::vector<std::uint32_t>>& rows);

      const FieldSpec& spec() const { return m_spec; }

      std::size_t rows() const { return m_rows; }

      std::size_t cols() const { return m_cols; }

      bool is_square() const { return m_rows == m_cols; }

      std::uint32_t operator()(std::size_t r, std::size_t c) const { return m_values[r * m_cols + c]; }

      std::uint32_t& operator()(std::size_t r, std::size_t c) { return m_values[r * m_cols + c]; }

      FieldElement at(std::size_t r, std::size_t c) const;

      void set(std::size_t r, std::size_t c, const FieldElement& v);

      std::span<const std::uint32_t> row(std::size_t r) const { return {m_values.data() + r * m_cols, m_cols}; }

      std::span<const std::uint32_t> values() const { return m_values; }

      Matrix transpose() const;

      /// Submatrix keeping the listed columns, in the given order.
      Matrix select_columns(std::span<const std::size_t> cols) const;

      bool operator==(const Matrix&) const = default;

   private:
      FieldSpec m_spec;
      std::size_t m_rows;
      std::size_t m_cols;
      std::vector<std::uint32_t> m_values;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Gauss-Jordan inverse; throws NotInvertibleError when singular, DomainError when not square.
Matrix matrix_inverse(const Matrix& m);

std::size_t matrix_rank(const Matrix& m);

/// Solves a * x = target for x (length a.cols()), if a solution exists.
std::optional<std::vector<std::uint32_t>> solve_linear(const Matrix& a, std::span<const std::uint32_t> target);

}  // namespace choke

#endif
