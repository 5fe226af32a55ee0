#pragma once

// Cellular homology of cubical subcomplexes of a box: GF(2) boundary
// matrices and ranks, exact integer Betti numbers and torsion for small
// complexes, and the null-homology test for lattice loops.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <vector>

#include "plaqperc/bitvector.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/sampling.hpp"
#include "plaqperc/union_find.hpp"

namespace plaqperc {

// Which edges accompany a set of plaquettes. FullSkeleton is the percolation
// convention (every edge and vertex of the box is present); PlaquetteUnion is
// the union of the closed plaquettes only.
enum class EdgeConvention { FullSkeleton, PlaquetteUnion };

struct SubComplex {
  BoxSpec box;
  std::array<BitVector, 4> cells;

  SubComplex() = default;
  explicit SubComplex(const BoxSpec& b) : box(b) {
    for (int d = 0; d < 4; ++d) cells[d] = BitVector(b.cell_count(d));
  }

  // Every cell of the box up to dimension max_dim.
  static SubComplex full(const BoxSpec& b, int max_dim = 3) {
    SubComplex s(b);
    for (int d = 0; d <= max_dim; ++d) s.cells[d] = BitVector(b.cell_count(d), true);
    return s;
  }

  static SubComplex from_plaquettes(const BoxSpec& b, const BitVector& plaquettes,
                                    EdgeConvention conv = EdgeConvention::PlaquetteUnion) {
    SubComplex s(b);
    s.cells[2] = plaquettes;
    if (conv == EdgeConvention::FullSkeleton) {
      s.cells[0] = BitVector(b.cell_count(0), true);
      s.cells[1] = BitVector(b.cell_count(1), true);
    }
    s.close();
    return s;
  }

  bool contains(const CellId& c) const {
    const auto idx = box.find(c);
    return idx && cells[c.dim].test(*idx);
  }
  void insert(const CellId& c) { cells[c.dim].set(box.index(c)); }

  std::size_t count(int dim) const { return cells[dim].count(); }

  // Adds every face of every included cell.
  void close() {
    for (int d = 3; d >= 1; --d) {
      cells[d].for_each_set([&](std::size_t i) {
        for (const auto& f : incident_faces(box.cell(d, i)))
          cells[d - 1].set(box.index_unchecked(f));
      });
    }
  }

  bool is_closed() const {
    for (int d = 3; d >= 1; --d) {
      bool ok = true;
      cells[d].for_each_set([&](std::size_t i) {
        if (!ok) return;
        for (const auto& f : incident_faces(box.cell(d, i)))
          if (!cells[d - 1].test(box.index_unchecked(f))) ok = false;
      });
      if (!ok) return false;
    }
    return true;
  }

  SubComplex& operator|=(const SubComplex& o) {
    for (int d = 0; d < 4; ++d) cells[d] |= o.cells[d];
    return *this;
  }
};

// Sparse GF(2) boundary operator. Rows and columns are listed by their cell
// index within the box; columns hold sorted local row positions.
struct BoundaryMatrixGF2 {
  int k = 1;
  std::vector<std::size_t> row_cells;
  std::vector<std::size_t> col_cells;
  std::vector<std::vector<std::uint32_t>> columns;

  std::size_t rows() const { return row_cells.size(); }
  std::size_t cols() const { return col_cells.size(); }
};

inline BoundaryMatrixGF2 boundary_matrix(const SubComplex& complex, int k) {
  if (k != 1 && k != 2) throw InvalidArgument("boundary_matrix supports k = 1 or 2");
  if (!complex.is_closed()) throw InvalidArgument("subcomplex is not closed under faces");
  BoundaryMatrixGF2 m;
  m.k = k;
  m.row_cells = complex.cells[k - 1].set_indices();
  m.col_cells = complex.cells[k].set_indices();
  std::vector<std::uint32_t> local(complex.box.cell_count(k - 1), UINT32_MAX);
  for (std::size_t r = 0; r < m.row_cells.size(); ++r)
    local[m.row_cells[r]] = static_cast<std::uint32_t>(r);
  m.columns.reserve(m.col_cells.size());
  for (auto ci : m.col_cells) {
    std::vector<std::uint32_t> col;
    for (const auto& f : incident_faces(complex.box.cell(k, ci)))
      col.push_back(local[complex.box.index_unchecked(f)]);
    std::sort(col.begin(), col.end());
    m.columns.push_back(std::move(col));
  }
  return m;
}

namespace detail {

inline void xor_sorted(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                       std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(scratch));
  a.swap(scratch);
}

// Column reduction over GF(2) keyed on the lowest (largest) row of each column.
class Gf2ColumnReducer {
 public:
  explicit Gf2ColumnReducer(std::size_t row_count) : pivot_(row_count, UINT32_MAX) {}

  // Reduces a column against the stored pivots. Returns true if it becomes a
  // new pivot column (i.e. it is independent of the columns added so far).
  bool add(std::vector<std::uint32_t> col) {
    reduce(col);
    if (col.empty()) return false;
    pivot_[col.back()] = static_cast<std::uint32_t>(reduced_.size());
    reduced_.push_back(std::move(col));
    return true;
  }

  // True if the column lies in the span of the columns added so far.
  bool in_span(std::vector<std::uint32_t> col) {
    reduce(col);
    return col.empty();
  }

  std::size_t rank() const { return reduced_.size(); }

 private:
  void reduce(std::vector<std::uint32_t>& col) {
    while (!col.empty()) {
      const std::uint32_t p = pivot_[col.back()];
      if (p == UINT32_MAX) return;
      xor_sorted(col, reduced_[p], scratch_);
    }
  }

  std::vector<std::uint32_t> pivot_;
  std::vector<std::vector<std::uint32_t>> reduced_;
  std::vector<std::uint32_t> scratch_;
};

// Rank of the edge-vertex incidence of the complex: V minus the number of
// connected components of its 1-skeleton. This holds over every coefficient ring.
inline std::size_t boundary1_rank(const SubComplex& c) {
  const std::size_t nv = c.box.cell_count(0);
  UnionFind uf(nv);
  c.cells[1].for_each_set([&](std::size_t i) {
    const CellId e = c.box.cell(1, i);
    uf.unite(static_cast<std::uint32_t>(c.box.index_unchecked({0, e.anchor, 0})),
             static_cast<std::uint32_t>(c.box.index_unchecked({0, e.anchor + unit(e.axis), 0})));
  });
  const std::size_t absent = nv - c.count(0);
  const std::size_t components = uf.components() - absent;
  return c.count(0) - components;
}

}  // namespace detail

inline std::size_t rank_gf2(const BoundaryMatrixGF2& m) {
  detail::Gf2ColumnReducer red(m.rows());
  for (const auto& col : m.columns) red.add(col);
  return red.rank();
}

// The column-reduction engine indexes rows by global edge index so the
// boundary matrix never needs to be materialized.
inline std::size_t boundary2_rank_gf2(const SubComplex& c) {
  detail::Gf2ColumnReducer red(c.box.cell_count(1));
  std::vector<std::uint32_t> col;
  c.cells[2].for_each_set([&](std::size_t i) {
    col.clear();
    for (const auto& f : incident_faces(c.box.cell(2, i)))
      col.push_back(static_cast<std::uint32_t>(c.box.index_unchecked(f)));
    std::sort(col.begin(), col.end());
    red.add(col);
  });
  return red.rank();
}

// dim ker d1 - rank d2 over GF(2).
inline std::size_t rank_h1_gf2(const SubComplex& c) {
  if (!c.is_closed()) throw InvalidArgument("subcomplex is not closed under faces");
  const std::size_t cycles = c.count(1) - detail::boundary1_rank(c);
  return cycles - boundary2_rank_gf2(c);
}

// Number of bounded components of R^3 minus the complex, computed by
// face-adjacency of unit cubes through plaquettes not in the complex. By
// Alexander duality this is the second Betti number of the complex.
inline std::size_t complement_bounded_components(const SubComplex& c) {
  const BoxSpec& box = c.box;
  const std::size_t ncubes = box.cell_count(3);
  const auto outside = static_cast<std::uint32_t>(ncubes);
  UnionFind uf(ncubes + 1);
  for (std::size_t i = 0; i < box.cell_count(2); ++i) {
    if (c.cells[2].test(i)) continue;
    const CellId pl = box.cell(2, i);
    const auto [below, above] = adjacent_cube_anchors(pl);
    const bool has_below = pl.anchor[pl.axis] > box.lo[pl.axis];
    const bool has_above = pl.anchor[pl.axis] < box.hi[pl.axis];
    const auto node = [&](bool has, const Vec3& a) {
      return has ? static_cast<std::uint32_t>(box.cube_index(a)) : outside;
    };
    uf.unite(node(has_below, below), node(has_above, above));
  }
  // Cubes belonging to the complex are not part of the complement.
  std::size_t solid = c.count(3);
  return uf.components() - 1 - solid;
}

// Alternative H1 rank from the Euler characteristic, b0 and the Alexander-dual b2.
// Valid for complexes without 3-cells.
inline std::size_t rank_h1_by_duality(const SubComplex& c) {
  if (c.count(3) != 0) throw InvalidArgument("rank_h1_by_duality expects a 2-complex");
  const auto v = static_cast<long long>(c.count(0));
  const auto e = static_cast<long long>(c.count(1));
  const auto f = static_cast<long long>(c.count(2));
  const auto b0 = v - static_cast<long long>(detail::boundary1_rank(c));
  const auto b2 = static_cast<long long>(complement_bounded_components(c));
  return static_cast<std::size_t>(b0 + b2 - (v - e + f));
}

struct IntegerHomology {
  std::size_t betti1 = 0;
  std::vector<std::int64_t> torsion;  // elementary divisors > 1 of d2
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer elimination overflow");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer elimination overflow");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer elimination overflow");
  return r;
}

// Smith normal form diagonal of a dense integer matrix (row-major). Returns the
// nonzero invariant factors in divisibility order.
inline std::vector<std::int64_t> smith_diagonal(std::vector<std::vector<std::int64_t>> a) {
  std::vector<std::int64_t> diag;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pr = rows, pc = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
          best = std::llabs(a[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const std::int64_t q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j)
          a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const std::int64_t q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i)
          a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // The pivot must divide the whole trailing block.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] = checked_add(a[t][k], a[i][k]);
            clean = false;
            break;
          }
    }
    diag.push_back(std::llabs(a[t][t]));
    ++t;
  }
  return diag;
}

// Oriented boundary of a plaquette: +e_u(a) + e_v(a+u) - e_u(a+v) - e_v(a).
inline std::array<std::pair<CellId, int>, 4> oriented_plaquette_boundary(const CellId& pl) {
  const auto [u, v] = tangent_axes(pl.axis);
  return {{{{1, pl.anchor, u}, +1},
           {{1, pl.anchor + unit(u), v}, +1},
           {{1, pl.anchor + unit(v), u}, -1},
           {{1, pl.anchor, v}, -1}}};
}

}  // namespace detail

inline constexpr std::size_t kIntegerHomologyCellGuard = 20000;

namespace detail {

using IntegerEntry = std::pair<std::uint32_t, std::int64_t>;

struct IntegerRank {
  std::size_t rank = 0;
  std::vector<std::int64_t> torsion;  // invariant factors > 1
};

// Rank and invariant factors of a sparse integer matrix given by sorted columns.
inline IntegerRank integer_rank(std::vector<std::vector<IntegerEntry>> cols, std::size_t row_count) {
  using Entry = IntegerEntry;
  std::vector<std::vector<std::uint32_t>> row_cols(row_count);
  for (std::uint32_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, v] : cols[j]) row_cols[r].push_back(j);
  std::vector<bool> col_alive(cols.size(), true), row_alive(row_count, true);

  const auto entry_at = [&](std::uint32_t j, std::uint32_t r) -> std::int64_t {
    const auto& col = cols[j];
    auto it = std::lower_bound(col.begin(), col.end(), Entry{r, std::numeric_limits<std::int64_t>::min()});
    return (it != col.end() && it->first == r) ? it->second : 0;
  };

  IntegerRank out;
  bool progress = true;
  std::vector<Entry> merged;
  while (progress) {
    progress = false;
    for (std::uint32_t j = 0; j < cols.size(); ++j) {
      if (!col_alive[j]) continue;
      std::uint32_t pr = UINT32_MAX;
      std::int64_t pv = 0;
      for (const auto& [r, v] : cols[j])
        if (row_alive[r] && (v == 1 || v == -1)) {
          pr = r;
          pv = v;
          break;
        }
      if (pr == UINT32_MAX) continue;
      const std::vector<Entry> pivot_col = cols[j];
      for (const auto other : std::vector<std::uint32_t>(row_cols[pr])) {
        if (other == j || !col_alive[other]) continue;
        const std::int64_t w = entry_at(other, pr);
        if (w == 0) continue;
        const std::int64_t factor = detail::checked_mul(w, pv);
        merged.clear();
        auto a = cols[other].begin(), ae = cols[other].end();
        auto b = pivot_col.begin(), be = pivot_col.end();
        while (a != ae || b != be) {
          if (b == be || (a != ae && a->first < b->first)) {
            merged.push_back(*a++);
          } else if (a == ae || b->first < a->first) {
            merged.push_back({b->first, detail::checked_mul(-factor, b->second)});
            row_cols[b->first].push_back(other);
            ++b;
          } else {
            const std::int64_t v =
                detail::checked_sub(a->second, detail::checked_mul(factor, b->second));
            if (v != 0) merged.push_back({a->first, v});
            ++a;
            ++b;
          }
        }
        cols[other].swap(merged);
      }
      col_alive[j] = false;
      row_alive[pr] = false;
      ++out.rank;
      progress = true;
    }
  }

  // Residual block without unit entries.
  std::vector<std::uint32_t> rrows;
  std::vector<std::uint32_t> rcols;
  std::vector<std::uint32_t> rpos(row_count, UINT32_MAX);
  for (std::uint32_t j = 0; j < cols.size(); ++j) {
    if (!col_alive[j]) continue;
    bool nonzero = false;
    for (const auto& [r, v] : cols[j])
      if (row_alive[r] && v != 0) {
        nonzero = true;
        if (rpos[r] == UINT32_MAX) {
          rpos[r] = static_cast<std::uint32_t>(rrows.size());
          rrows.push_back(r);
        }
      }
    if (nonzero) rcols.push_back(j);
  }
  if (!rcols.empty()) {
    std::vector<std::vector<std::int64_t>> dense(rrows.size(),
                                                 std::vector<std::int64_t>(rcols.size(), 0));
    for (std::size_t jj = 0; jj < rcols.size(); ++jj)
      for (const auto& [r, v] : cols[rcols[jj]])
        if (row_alive[r]) dense[rpos[r]][jj] = v;
    for (auto d : detail::smith_diagonal(std::move(dense))) {
      ++out.rank;
      if (d > 1) out.torsion.push_back(d);
    }
  }
  return out;
}

}  // namespace detail

// Exact H1 over Z: Betti number and torsion coefficients. Unit pivots are
// eliminated sparsely; whatever remains goes through a dense Smith normal form.
inline IntegerHomology betti_torsion_integer(const SubComplex& c,
                                              std::size_t guard = kIntegerHomologyCellGuard) {
  if (!c.is_closed()) throw InvalidArgument("subcomplex is not closed under faces");
  const std::size_t total = c.count(0) + c.count(1) + c.count(2) + c.count(3);
  if (total > guard) throw GuardExceeded("integer homology size guard exceeded");

  using Entry = std::pair<std::uint32_t, std::int64_t>;
  const auto edge_ids = c.cells[1].set_indices();
  std::vector<std::uint32_t> local(c.box.cell_count(1), UINT32_MAX);
  for (std::size_t r = 0; r < edge_ids.size(); ++r) local[edge_ids[r]] = static_cast<std::uint32_t>(r);

  std::vector<std::vector<Entry>> cols;
  c.cells[2].for_each_set([&](std::size_t i) {
    std::vector<Entry> col;
    for (const auto& [edge, sign] : detail::oriented_plaquette_boundary(c.box.cell(2, i)))
      col.push_back({local[c.box.index_unchecked(edge)], sign});
    std::sort(col.begin(), col.end());
    cols.push_back(std::move(col));
  });

  const auto rank = detail::integer_rank(std::move(cols), edge_ids.size());
  IntegerHomology out;
  out.torsion = rank.torsion;
  const std::size_t cycles = c.count(1) - detail::boundary1_rank(c);
  out.betti1 = cycles - rank.rank;
  return out;
}

// True if the loop's edge chain is a GF(2) boundary of open plaquettes.
inline bool is_null_homologous(const Loop& loop, const PlaquetteConfig& cfg) {
  const BoxSpec& box = cfg.box;
  for (const auto& v : loop.vertices())
    for (int i = 0; i < 3; ++i)
      if (v[i] <= box.lo[i] || v[i] >= box.hi[i])
        throw InvalidArgument("loop leaves the box interior");
  detail::Gf2ColumnReducer red(box.cell_count(1));
  std::vector<std::uint32_t> col;
  cfg.open.for_each_set([&](std::size_t i) {
    col.clear();
    for (const auto& f : incident_faces(box.cell(2, i)))
      col.push_back(static_cast<std::uint32_t>(box.index_unchecked(f)));
    std::sort(col.begin(), col.end());
    red.add(col);
  });
  std::vector<std::uint32_t> target;
  for (const auto& e : loop.edges()) target.push_back(static_cast<std::uint32_t>(box.index_unchecked(e)));
  std::sort(target.begin(), target.end());
  return red.in_span(std::move(target));
}

}  // namespace plaqperc
