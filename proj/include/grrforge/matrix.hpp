#pragma once

// Small dense matrices over a FieldCtx, dimension at most 12.
//
// Entries are field-element encodings (see field.hpp).  Vectors follow the
// column convention: a matrix acts on the left, w = M v.  Every matrix also
// has a packed canonical key -- the row-major entry tuple packed into a
// 192-bit integer, earlier entries more significant -- which doubles as the
// hash key and the total order used when picking canonical coset members.

#include <array>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/field.hpp"

namespace grrforge {

inline constexpr int kMaxDim = 12;

struct Mat {
  u8 n = 0;
  std::array<u16, kMaxDim * kMaxDim> a{};  // row-major, tail stays zero

  u16& at(int i, int j) { return a[size_t(i) * n + j]; }
  u16 at(int i, int j) const { return a[size_t(i) * n + j]; }
  bool operator==(const Mat&) const = default;
};

using Vec = std::array<u16, kMaxDim>;

inline Mat mat_zero(int n) {
  Mat m;
  m.n = u8(n);
  return m;
}

inline Mat mat_identity(int n) {
  Mat m = mat_zero(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

inline bool mat_is_identity(const Mat& m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

inline Mat mat_mul(const FieldCtx& F, const Mat& A, const Mat& B) {
  const int n = A.n;
  Mat C = mat_zero(n);
  if (F.q() == 2) {
    // Rows as bit masks: C.row[i] = xor of B rows selected by A's row bits.
    std::array<u16, kMaxDim> brow{};
    for (int j = 0; j < n; ++j) {
      u16 r = 0;
      for (int k = 0; k < n; ++k) r |= u16(B.at(j, k) << k);
      brow[size_t(j)] = r;
    }
    for (int i = 0; i < n; ++i) {
      u16 acc = 0;
      for (int j = 0; j < n; ++j)
        if (A.at(i, j)) acc ^= brow[size_t(j)];
      for (int k = 0; k < n; ++k) C.at(i, k) = (acc >> k) & 1;
    }
    return C;
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      u16 aik = A.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < n; ++j) {
        u16 b = B.at(k, j);
        if (b) C.at(i, j) = u16(F.add(C.at(i, j), F.mul(aik, b)));
      }
    }
  }
  return C;
}

inline Vec mat_vec(const FieldCtx& F, const Mat& M, const Vec& v) {
  Vec w{};
  for (int i = 0; i < M.n; ++i) {
    Fe acc = 0;
    for (int j = 0; j < M.n; ++j) acc = F.add(acc, F.mul(M.at(i, j), v[size_t(j)]));
    w[size_t(i)] = u16(acc);
  }
  return w;
}

inline Mat mat_transpose(const Mat& M) {
  Mat T = mat_zero(M.n);
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j) T.at(j, i) = M.at(i, j);
  return T;
}

inline Mat mat_add(const FieldCtx& F, const Mat& A, const Mat& B) {
  Mat C = mat_zero(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C.at(i, j) = u16(F.add(A.at(i, j), B.at(i, j)));
  return C;
}

// Gaussian elimination kernel shared by det/rank/inv.
inline int mat_eliminate(const FieldCtx& F, Mat& M, Fe* det_out, Mat* inv_out) {
  const int n = M.n;
  Mat inv = mat_identity(n);
  Fe det = 1;
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (M.at(r, col) != 0) { piv = r; break; }
    if (piv < 0) { det = 0; continue; }
    if (piv != rank) {
      for (int j = 0; j < n; ++j) {
        std::swap(M.a[size_t(piv) * n + j], M.a[size_t(rank) * n + j]);
        std::swap(inv.a[size_t(piv) * n + j], inv.a[size_t(rank) * n + j]);
      }
      det = F.neg(det);
    }
    Fe p = M.at(rank, col);
    det = F.mul(det, p);
    Fe pinv = F.inv(p);
    for (int j = 0; j < n; ++j) {
      M.at(rank, j) = u16(F.mul(M.at(rank, j), pinv));
      inv.at(rank, j) = u16(F.mul(inv.at(rank, j), pinv));
    }
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      Fe f = M.at(r, col);
      if (!f) continue;
      for (int j = 0; j < n; ++j) {
        M.at(r, j) = u16(F.sub(M.at(r, j), F.mul(f, M.at(rank, j))));
        inv.at(r, j) = u16(F.sub(inv.at(r, j), F.mul(f, inv.at(rank, j))));
      }
    }
    ++rank;
  }
  if (rank < n) det = 0;
  if (det_out) *det_out = det;
  if (inv_out) *inv_out = inv;
  return rank;
}

inline Fe mat_det(const FieldCtx& F, Mat M) {
  Fe det = 0;
  mat_eliminate(F, M, &det, nullptr);
  return det;
}

inline int mat_rank(const FieldCtx& F, Mat M) {
  return mat_eliminate(F, M, nullptr, nullptr);
}

inline Mat mat_inv(const FieldCtx& F, Mat M) {
  Fe det = 0;
  Mat inv;
  mat_eliminate(F, M, &det, &inv);
  if (det == 0) throw DomainError("matrix is singular");
  return inv;
}

inline Mat mat_scale(const FieldCtx& F, Fe c, const Mat& M) {
  Mat C = mat_zero(M.n);
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j) C.at(i, j) = u16(F.mul(c, M.at(i, j)));
  return C;
}

inline Mat mat_pow(const FieldCtx& F, Mat M, Bi e) {
  if (e < 0) throw DomainError("negative matrix power");
  Mat r = mat_identity(M.n);
  while (e > 0) {
    if ((e & 1) != 0) r = mat_mul(F, r, M);
    M = mat_mul(F, M, M);
    e >>= 1;
  }
  return r;
}

// ---- packed keys ---------------------------------------------------------------

// Row-major entries packed into a 192-bit big-endian-ish integer: comparing
// keys word 0 first is exactly lexicographic comparison of the entry tuple.
struct Key {
  std::array<u64, 3> w{};
  bool operator==(const Key&) const = default;
  bool operator<(const Key& o) const {
    if (w[0] != o.w[0]) return w[0] < o.w[0];
    if (w[1] != o.w[1]) return w[1] < o.w[1];
    return w[2] < o.w[2];
  }
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    u64 h = 0x9e3779b97f4a7c15ULL;
    for (u64 v : k.w) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
      h ^= h >> 29;
    }
    return size_t(h);
  }
};

inline u32 entry_bits(const FieldCtx& F, int n) {
  u32 b = F.bits_per_entry();
  if (u64(n) * n * b > 192) throw DomainError("matrix too wide for packed keys");
  return b;
}

inline Key pack_key(const FieldCtx& F, const Mat& M) {
  const u32 b = entry_bits(F, M.n);
  Key k;
  for (int i = 0; i < M.n * M.n; ++i) {
    // 192-bit shift left by b, then or the next entry into the low bits.
    k.w[0] = (k.w[0] << b) | (k.w[1] >> (64 - b));
    k.w[1] = (k.w[1] << b) | (k.w[2] >> (64 - b));
    k.w[2] = (k.w[2] << b) | M.a[size_t(i)];
  }
  return k;
}

inline Mat unpack_key(const FieldCtx& F, int n, Key k) {
  const u32 b = entry_bits(F, n);
  const u64 mask = (u64(1) << b) - 1;
  Mat M = mat_zero(n);
  for (int i = n * n - 1; i >= 0; --i) {
    M.a[size_t(i)] = u16(k.w[2] & mask);
    k.w[2] = (k.w[2] >> b) | (k.w[1] << (64 - b));
    k.w[1] = (k.w[1] >> b) | (k.w[0] << (64 - b));
    k.w[0] >>= b;
  }
  return M;
}

// ---- literals --------------------------------------------------------------------

// Matrix literal: rows joined by ';', entries within a row by ','.
// Example over gf(2): "1,0;1,1".
inline Mat parse_mat(const FieldCtx& F, const std::string& text) {
  std::vector<std::vector<Fe>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<Fe> vals;
    std::stringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(cell, &pos);
      } catch (const std::exception&) {
        throw DomainError("bad matrix entry '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(u8(cell[pos]))) ++pos;
      if (pos != cell.size()) throw DomainError("bad matrix entry '" + cell + "'");
      F.check(Fe(v));
      vals.push_back(Fe(v));
    }
    if (!vals.empty()) rows.push_back(std::move(vals));
  }
  if (rows.empty() || rows.size() > kMaxDim) throw DomainError("matrix literal has a bad shape");
  for (const auto& r : rows)
    if (r.size() != rows.size()) throw DomainError("matrix literal is not square");
  Mat M = mat_zero(int(rows.size()));
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j) M.at(i, j) = u16(rows[size_t(i)][size_t(j)]);
  return M;
}

inline std::string mat_literal(const Mat& M) {
  std::string s;
  for (int i = 0; i < M.n; ++i) {
    if (i) s += ';';
    for (int j = 0; j < M.n; ++j) {
      if (j) s += ',';
      s += std::to_string(M.at(i, j));
    }
  }
  return s;
}

}  // namespace grrforge
