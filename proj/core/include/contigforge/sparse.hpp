#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "contigforge/errors.hpp"

namespace contigforge {

template <class T>
struct Triple {
  std::int64_t row = 0;
  std::int64_t col = 0;
  T value{};
};

/// Compressed sparse column matrix in canonical form: col_ptr non-decreasing,
/// row indices strictly increasing within each column.
template <class T>
struct CscMatrix {
  std::int64_t n_rows = 0;
  std::int64_t n_cols = 0;
  std::vector<std::int64_t> col_ptr;  // size n_cols + 1
  std::vector<std::int64_t> row_idx;  // size nnz
  std::vector<T> values;              // size nnz

  CscMatrix() : col_ptr(1, 0) {}
  CscMatrix(std::int64_t rows, std::int64_t cols)
      : n_rows(rows), n_cols(cols), col_ptr(cols + 1, 0) {}

  std::int64_t nnz() const { return static_cast<std::int64_t>(row_idx.size()); }
  std::int64_t col_degree(std::int64_t c) const { return col_ptr[c + 1] - col_ptr[c]; }

  /// Entry lookup by (row, col); returns nullptr when absent.
  const T* find(std::int64_t r, std::int64_t c) const {
    const auto first = row_idx.begin() + col_ptr[c];
    const auto last = row_idx.begin() + col_ptr[c + 1];
    const auto it = std::lower_bound(first, last, r);
    if (it == last || *it != r) return nullptr;
    return &values[it - row_idx.begin()];
  }

  static CscMatrix from_triples(std::int64_t rows, std::int64_t cols,
                                std::vector<Triple<T>> triples) {
    for (const auto& t : triples) {
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
        throw OutOfBounds("triple outside matrix bounds");
      }
    }
    std::sort(triples.begin(), triples.end(), [](const Triple<T>& a, const Triple<T>& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    CscMatrix m(rows, cols);
    m.row_idx.reserve(triples.size());
    m.values.reserve(triples.size());
    std::int64_t prev_col = -1, prev_row = -1;
    for (auto& t : triples) {
      if (t.col == prev_col && t.row == prev_row) {
        throw DimensionMismatch("duplicate nonzero in triple list");
      }
      m.row_idx.push_back(t.row);
      m.values.push_back(std::move(t.value));
      for (std::int64_t c = prev_col + 1; c <= t.col; ++c) {
        m.col_ptr[c] = m.nnz() - 1;
      }
      prev_col = t.col;
      prev_row = t.row;
    }
    for (std::int64_t c = prev_col + 1; c <= cols; ++c) m.col_ptr[c] = m.nnz();
    return m;
  }

  std::vector<Triple<T>> to_triples() const {
    std::vector<Triple<T>> out;
    out.reserve(row_idx.size());
    for (std::int64_t c = 0; c < n_cols; ++c) {
      for (std::int64_t k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
        out.push_back({row_idx[k], c, values[k]});
      }
    }
    return out;
  }

  bool valid() const {
    if (static_cast<std::int64_t>(col_ptr.size()) != n_cols + 1) return false;
    if (col_ptr.front() != 0 || col_ptr.back() != nnz()) return false;
    if (values.size() != row_idx.size()) return false;
    for (std::int64_t c = 0; c < n_cols; ++c) {
      if (col_ptr[c] > col_ptr[c + 1]) return false;
      for (std::int64_t k = col_ptr[c] + 1; k < col_ptr[c + 1]; ++k) {
        if (row_idx[k - 1] >= row_idx[k]) return false;
      }
    }
    for (std::int64_t r : row_idx) {
      if (r < 0 || r >= n_rows) return false;
    }
    return true;
  }
};

/// Doubly compressed sparse column: only occupied columns carry a pointer
/// entry, which keeps hypersparse blocks proportional to nnz.
template <class T>
struct DcscMatrix {
  std::int64_t n_rows = 0;
  std::int64_t n_cols = 0;
  std::vector<std::int64_t> occ_cols;  // occupied column ids, ascending
  std::vector<std::int64_t> col_ptr;   // size occ_cols.size() + 1
  std::vector<std::int64_t> row_idx;
  std::vector<T> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(row_idx.size()); }

  static DcscMatrix from_csc(const CscMatrix<T>& m) {
    DcscMatrix d;
    d.n_rows = m.n_rows;
    d.n_cols = m.n_cols;
    d.col_ptr.push_back(0);
    for (std::int64_t c = 0; c < m.n_cols; ++c) {
      if (m.col_ptr[c + 1] > m.col_ptr[c]) {
        d.occ_cols.push_back(c);
        d.col_ptr.push_back(m.col_ptr[c + 1]);
      }
    }
    d.row_idx = m.row_idx;
    d.values = m.values;
    return d;
  }

  CscMatrix<T> to_csc() const {
    CscMatrix<T> m(n_rows, n_cols);
    m.row_idx = row_idx;
    m.values = values;
    std::size_t occ = 0;
    for (std::int64_t c = 0; c < n_cols; ++c) {
      if (occ < occ_cols.size() && occ_cols[occ] == c) {
        m.col_ptr[c + 1] = col_ptr[occ + 1];
        ++occ;
      } else {
        m.col_ptr[c + 1] = m.col_ptr[c];
      }
    }
    return m;
  }
};

/// One distributed-matrix block. Hypersparse blocks (fewer than half the
/// columns occupied) are held in DCSC form, denser ones in plain CSC; the
/// two representations are interchangeable without loss.
template <class T>
class Block {
 public:
  Block() = default;

  static Block adopt(CscMatrix<T> m) {
    Block b;
    std::int64_t occupied = 0;
    for (std::int64_t c = 0; c < m.n_cols; ++c) {
      occupied += m.col_ptr[c + 1] > m.col_ptr[c];
    }
    b.dcsc_ = 2 * occupied < m.n_cols;
    if (b.dcsc_) {
      b.d_ = DcscMatrix<T>::from_csc(m);
      b.c_ = CscMatrix<T>();
    } else {
      b.c_ = std::move(m);
    }
    return b;
  }

  bool is_dcsc() const { return dcsc_; }
  std::int64_t nnz() const { return dcsc_ ? d_.nnz() : c_.nnz(); }

  CscMatrix<T> csc() const { return dcsc_ ? d_.to_csc() : c_; }

  std::vector<Triple<T>> to_triples() const { return csc().to_triples(); }

 private:
  bool dcsc_ = false;
  CscMatrix<T> c_;
  DcscMatrix<T> d_;
};

}  // namespace contigforge
