/*
 * Dense matrices over a FieldSpec
 */

#include <choke/matrix.h>

#include <choke/error.h>

#include <utility>

namespace choke {

Matrix::Matrix(const FieldSpec& spec, std::size_t rows, std::size_t cols) :
      m_spec(spec), m_rows(rows), m_cols(cols), m_values(rows * cols, 0) {}

Matrix::Matrix(const FieldSpec& spec, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> values) :
      m_spec(spec), m_rows(rows), m_cols(cols), m_values(std::move(values)) {
   if(m_values.size() != rows * cols) {
      throw DomainError("matrix value count does not match shape");
   }
   for(auto v : m_values) {
      if(v >= spec.order()) {
         throw DomainError("matrix entry " + std::to_string(v) + " out of range for " + spec.to_string());
      }
   }
}

Matrix Matrix::identity(const FieldSpec& spec, std::size_t n) {
   Matrix m(spec, n, n);
   for(std::size_t i = 0; i != n; ++i) {
      m(i, i) = 1;
   }
   return m;
}

Matrix Matrix::from_rows(const FieldSpec& spec, const std::vector<std::vector<std::uint32_t>>& rows) {
   const std::size_t r = rows.size();
   const std::size_t c = r == 0 ? 0 : rows.front().size();
   std::vector<std::uint32_t> values;
   values.reserve(r * c);
   for(const auto& row : rows) {
      if(row.size() != c) {
         throw DomainError("ragged matrix rows");
      }
      values.insert(values.end(), row.begin(), row.end());
   }
   return Matrix(spec, r, c, std::move(values));
}

FieldElement Matrix::at(std::size_t r, std::size_t c) const {
   return FieldElement(m_spec, (*this)(r, c));
}

void Matrix::set(std::size_t r, std::size_t c, const FieldElement& v) {
   if(v.spec() != m_spec) {
      throw DomainError("field mismatch in matrix assignment");
   }
   (*this)(r, c) = v.value();
}

Matrix Matrix::transpose() const {
   Matrix t(m_spec, m_cols, m_rows);
   for(std::size_t r = 0; r != m_rows; ++r) {
      for(std::size_t c = 0; c != m_cols; ++c) {
         t(c, r) = (*this)(r, c);
      }
   }
   return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
   Matrix s(m_spec, m_rows, cols.size());
   for(std::size_t k = 0; k != cols.size(); ++k) {
      if(cols[k] >= m_cols) {
         throw DomainError("column index out of range");
      }
      for(std::size_t r = 0; r != m_rows; ++r) {
         s(r, k) = (*this)(r, cols[k]);
      }
   }
   return s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
   if(a.spec() != b.spec() || a.cols() != b.rows()) {
      throw DomainError("matrix product shape or field mismatch");
   }
   const auto& f = a.spec();
   Matrix out(f, a.rows(), b.cols());
   for(std::size_t i = 0; i != a.rows(); ++i) {
      for(std::size_t k = 0; k != a.cols(); ++k) {
         const auto aik = a(i, k);
         if(aik == 0) {
            continue;
         }
         for(std::size_t j = 0; j != b.cols(); ++j) {
            out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
         }
      }
   }
   return out;
}

namespace {

// Reduces m to reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t pivot_cols) {
   const auto& f = m.spec();
   std::vector<std::size_t> pivots;
   std::size_t row = 0;
   for(std::size_t col = 0; col != pivot_cols && row != m.rows(); ++col) {
      std::size_t p = row;
      while(p != m.rows() && m(p, col) == 0) {
         ++p;
      }
      if(p == m.rows()) {
         continue;
      }
      if(p != row) {
         for(std::size_t c = 0; c != m.cols(); ++c) {
            std::swap(m(p, c), m(row, c));
         }
      }
      const auto scale = f.inv(m(row, col));
      for(std::size_t c = 0; c != m.cols(); ++c) {
         m(row, c) = f.mul(m(row, c), scale);
      }
      for(std::size_t r = 0; r != m.rows(); ++r) {
         const auto factor = m(r, col);
         if(r == row || factor == 0) {
            continue;
         }
         for(std::size_t c = 0; c != m.cols(); ++c) {
            m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
         }
      }
      pivots.push_back(col);
      ++row;
   }
   return pivots;
}

}  // namespace

Matrix matrix_inverse(const Matrix& m) {
   if(!m.is_square()) {
      throw DomainError("matrix_inverse requires a square matrix");
   }
   const std::size_t n = m.rows();
   Matrix aug(m.spec(), n, 2 * n);
   for(std::size_t r = 0; r != n; ++r) {
      for(std::size_t c = 0; c != n; ++c) {
         aug(r, c) = m(r, c);
      }
      aug(r, n + r) = 1;
   }
   if(row_reduce(aug, n).size() != n) {
      throw NotInvertibleError("matrix is singular over " + m.spec().to_string());
   }
   Matrix inv(m.spec(), n, n);
   for(std::size_t r = 0; r != n; ++r) {
      for(std::size_t c = 0; c != n; ++c) {
         inv(r, c) = aug(r, n + c);
      }
   }
   return inv;
}

std::size_t matrix_rank(const Matrix& m) {
   Matrix work = m;
   return row_reduce(work, m.cols()).size();
}

std::optional<std::vector<std::uint32_t>> solve_linear(const Matrix& a, std::span<const std::uint32_t> target) {
   if(target.size() != a.rows()) {
      throw DomainError("solve_linear: target length does not match row count");
   }
   Matrix aug(a.spec(), a.rows(), a.cols() + 1);
   for(std::size_t r = 0; r != a.rows(); ++r) {
      for(std::size_t c = 0; c != a.cols(); ++c) {
         aug(r, c) = a(r, c);
      }
      aug(r, a.cols()) = target[r];
   }
   const auto pivots = row_reduce(aug, a.cols());
   // Inconsistent iff some zero row of the reduced system has a nonzero right-hand side.
   for(std::size_t r = pivots.size(); r != a.rows(); ++r) {
      if(aug(r, a.cols()) != 0) {
         return std::nullopt;
      }
   }
   std::vector<std::uint32_t> x(a.cols(), 0);
   for(std::size_t r = 0; r != pivots.size(); ++r) {
      x[pivots[r]] = aug(r, a.cols());
   }
   return x;
}

}  // namespace choke
