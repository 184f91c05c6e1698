#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace isomat {

/// Dense matrix over GF(2). Rows are bit-packed into 64-bit words; addition
/// of rows or columns is XOR. Values are treated as immutable once built
/// (the mutating setters are only used during construction).
class BitMatrix {
 public:
  BitMatrix() : rows_(0), cols_(0), words_per_row_(0) {}

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows),
        cols_(cols),
        words_per_row_((cols + 63) / 64),
        data_(rows * ((cols + 63) / 64), 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static BitMatrix zero(std::size_t n) { return BitMatrix(n, n); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return (data_[i * words_per_row_ + j / 64] >> (j % 64)) & 1u;
  }

  void set(std::size_t i, std::size_t j, bool v) {
    check_index(i, j);
    std::uint64_t& w = data_[i * words_per_row_ + j / 64];
    if (v)
      w |= std::uint64_t{1} << (j % 64);
    else
      w &= ~(std::uint64_t{1} << (j % 64));
  }

  /// Column j as a bitmask over rows. Requires rows <= 64, which covers
  /// everything at desk scale.
  std::uint64_t column_mask(std::size_t j) const {
    if (rows_ > 64) throw std::invalid_argument("column_mask: more than 64 rows");
    if (j >= cols_) throw std::invalid_argument("column_mask: column out of range");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      if (get(i, j)) m |= std::uint64_t{1} << i;
    return m;
  }

  std::vector<std::uint64_t> column_masks() const {
    std::vector<std::uint64_t> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = column_mask(j);
    return out;
  }

  /// Keeps the listed columns, in the given order.
  BitMatrix select_columns(const std::vector<std::size_t>& cols) const {
    BitMatrix out(rows_, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= cols_) throw std::invalid_argument("select_columns: out of range");
      for (std::size_t i = 0; i < rows_; ++i)
        if (get(i, cols[k])) out.set(i, k, true);
    }
    return out;
  }

  BitMatrix remove_row(std::size_t row) const {
    if (row >= rows_) throw std::invalid_argument("remove_row: out of range");
    BitMatrix out(rows_ - 1, cols_);
    for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
      if (i == row) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) out.set(oi, j, true);
      ++oi;
    }
    return out;
  }

  bool operator==(const BitMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const BitMatrix& o) const { return !(*this == o); }

 private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::invalid_argument("BitMatrix: index out of range");
  }

  std::size_t rows_, cols_, words_per_row_;
  std::vector<std::uint64_t> data_;
};

/// Incremental Gaussian eliminator over column masks (columns live in
/// GF(2)^rows, rows <= 64). Basis vectors are kept in echelon form.
class Eliminator {
 public:
  std::uint64_t reduce(std::uint64_t v) const {
    for (std::uint64_t b : basis_)
      if (v & lowest_bit(b)) v ^= b;
    return v;
  }

  /// Reduces v and, if independent of the current basis, inserts it.
  /// Returns true when v was independent.
  bool insert(std::uint64_t v) {
    v = reduce(v);
    if (v == 0) return false;
    // Keep echelon form: clear the new pivot from existing basis vectors.
    std::uint64_t p = lowest_bit(v);
    for (std::uint64_t& b : basis_)
      if (b & p) b ^= v;
    basis_.push_back(v);
    return true;
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  static std::uint64_t lowest_bit(std::uint64_t x) { return x & (~x + 1); }
  std::vector<std::uint64_t> basis_;
};

inline std::size_t rank(const BitMatrix& b) {
  if (b.rows() <= 64) {
    Eliminator e;
    for (std::size_t j = 0; j < b.cols(); ++j) e.insert(b.column_mask(j));
    return e.rank();
  }
  // Wide fallback: row echelon on packed rows, done bit by bit.
  std::vector<std::vector<bool>> m(b.rows(), std::vector<bool>(b.cols()));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m[i][j] = b.get(i, j);
  std::size_t r = 0;
  for (std::size_t j = 0; j < b.cols() && r < b.rows(); ++j) {
    std::size_t piv = r;
    while (piv < b.rows() && !m[piv][j]) ++piv;
    if (piv == b.rows()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < b.rows(); ++i)
      if (i != r && m[i][j])
        for (std::size_t k = 0; k < b.cols(); ++k) m[i][k] = m[i][k] != m[r][k];
    ++r;
  }
  return r;
}

inline bool is_dependent_columns(const BitMatrix& b, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return false;
  Eliminator e;
  for (std::size_t j : subset) {
    if (j >= b.cols()) throw std::invalid_argument("is_dependent_columns: column out of range");
    if (!e.insert(b.column_mask(j))) return true;
  }
  return false;
}

/// XOR-adds kappa to every column of b whose pivot_row entry is 1. The
/// represented matroid is unchanged (kappa must be 0 in pivot_row, and some
/// column must actually have a 1 there).
inline BitMatrix column_add_transform(const BitMatrix& b, std::size_t pivot_row,
                                      const std::vector<bool>& kappa) {
  if (pivot_row >= b.rows()) throw std::invalid_argument("column_add_transform: bad pivot row");
  if (kappa.size() != b.rows())
    throw std::invalid_argument("column_add_transform: kappa length mismatch");
  if (kappa[pivot_row])
    throw std::invalid_argument("column_add_transform: kappa nonzero in pivot row");
  bool pivot_hit = false;
  for (std::size_t j = 0; j < b.cols() && !pivot_hit; ++j) pivot_hit = b.get(pivot_row, j);
  if (!pivot_hit)
    throw std::invalid_argument("column_add_transform: no column has a 1 in pivot row");
  BitMatrix out = b;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    if (!b.get(pivot_row, j)) continue;
    for (std::size_t i = 0; i < b.rows(); ++i)
      if (kappa[i]) out.set(i, j, !out.get(i, j));
  }
  return out;
}

struct StandardRep {
  std::vector<std::size_t> column_order;  // position k of the result holds original column column_order[k]
  BitMatrix matrix;
};

/// Standard representation [I_r | A] with the lexicographically first column
/// basis. Rank 0 and full rank come back as 0_n and I_n.
inline StandardRep standard_representation(const BitMatrix& b) {
  const std::size_t n = b.cols();
  Eliminator e;
  std::vector<std::size_t> basis_cols, other_cols;
  for (std::size_t j = 0; j < n; ++j) {
    if (e.insert(b.column_mask(j)))
      basis_cols.push_back(j);
    else
      other_cols.push_back(j);
  }
  const std::size_t r = basis_cols.size();
  std::vector<std::size_t> order = basis_cols;
  order.insert(order.end(), other_cols.begin(), other_cols.end());

  if (r == 0) return {order, BitMatrix::zero(n)};
  if (r == n) return {order, BitMatrix::identity(n)};

  // Express each non-basis column in the chosen basis by re-eliminating
  // with coefficient tracking.
  std::vector<std::uint64_t> basis_vecs, basis_coeffs;  // coeff bits over basis positions
  for (std::size_t k = 0; k < r; ++k) {
    std::uint64_t v = b.column_mask(basis_cols[k]);
    std::uint64_t c = std::uint64_t{1} << k;
    for (std::size_t t = 0; t < basis_vecs.size(); ++t) {
      std::uint64_t p = basis_vecs[t] & (~basis_vecs[t] + 1);
      if (v & p) {
        v ^= basis_vecs[t];
        c ^= basis_coeffs[t];
      }
    }
    basis_vecs.push_back(v);
    basis_coeffs.push_back(c);
  }
  BitMatrix out(r, n);
  for (std::size_t k = 0; k < r; ++k) out.set(k, k, true);
  for (std::size_t t = 0; t < other_cols.size(); ++t) {
    std::uint64_t v = b.column_mask(other_cols[t]);
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < r; ++k) {
      std::uint64_t p = basis_vecs[k] & (~basis_vecs[k] + 1);
      if (v & p) {
        v ^= basis_vecs[k];
        c ^= basis_coeffs[k];
      }
    }
    // v must be zero here: other_cols are in the span of the basis.
    for (std::size_t k = 0; k < r; ++k)
      if ((c >> k) & 1) out.set(k, r + t, true);
  }
  return {order, out};
}

// --- matrix text format: one '0'/'1' line per row, blank line or EOF ends ---

inline std::string format_matrix(const BitMatrix& b) {
  std::string s;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) s += b.get(i, j) ? '1' : '0';
    s += '\n';
  }
  return s;
}

inline BitMatrix parse_matrix(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;
    lines.push_back(line);
  }
  if (lines.empty()) return BitMatrix();
  const std::size_t cols = lines[0].size();
  BitMatrix out(lines.size(), cols);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].size() != cols)
      throw std::invalid_argument("parse_matrix: ragged row at line " + std::to_string(i + 1));
    for (std::size_t j = 0; j < cols; ++j) {
      char c = lines[i][j];
      if (c != '0' && c != '1')
        throw std::invalid_argument("parse_matrix: bad character at line " + std::to_string(i + 1));
      if (c == '1') out.set(i, j, true);
    }
  }
  return out;
}

inline BitMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

}  // namespace isomat
