#pragma once

// Dense shortest-augmenting-path linear assignment (Jonker & Volgenant,
// Computing 38, 1987): column reduction, reduction transfer, two passes of
// augmenting row reduction, then Dijkstra augmentation for the remaining
// free rows. The cost is supplied as a callable so callers can choose
// between a precomputed matrix and on-the-fly evaluation.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace akt {

struct LapSolution {
  std::vector<std::size_t> row_to_col;
  std::vector<std::size_t> col_to_row;
  // Row and column potentials: c(i,j) - u[i] - v[j] >= 0, with equality on
  // assigned pairs.
  std::vector<double> u;
  std::vector<double> v;
};

template <class CostFn>
LapSolution solve_lap(std::size_t n, CostFn&& cost) {
  using Index = std::ptrdiff_t;
  constexpr Index kFree = -1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Index dim = static_cast<Index>(n);

  std::vector<Index> rowsol(n, kFree), colsol(n, kFree);
  std::vector<double> v(n, 0.0);
  std::vector<Index> free_rows;
  free_rows.reserve(n);
  {
    // Column reduction, reverse order.
    std::vector<int> matches(n, 0);
    for (Index j = dim - 1; j >= 0; --j) {
      double min = cost(0, j);
      Index imin = 0;
      for (Index i = 1; i < dim; ++i) {
        const double c = cost(i, j);
        if (c < min) {
          min = c;
          imin = i;
        }
      }
      v[j] = min;
      if (++matches[imin] == 1) {
        rowsol[imin] = j;
        colsol[j] = imin;
      } else if (v[j] < v[rowsol[imin]]) {
        const Index j1 = rowsol[imin];
        rowsol[imin] = j;
        colsol[j] = imin;
        colsol[j1] = kFree;
      } else {
        colsol[j] = kFree;
      }
    }
    // Reduction transfer.
    for (Index i = 0; i < dim; ++i) {
      if (matches[i] == 0) {
        free_rows.push_back(i);
      } else if (matches[i] == 1) {
        const Index j1 = rowsol[i];
        double min = kInf;
        for (Index j = 0; j < dim; ++j)
          if (j != j1) min = std::min(min, cost(i, j) - v[j]);
        if (min < kInf) v[j1] -= min;
      }
    }
  }

  // Augmenting row reduction, two passes. Each chain step is bounded so
  // floating-point near-ties cannot stall; leftovers go to augmentation.
  const std::int64_t step_cap = 8 * static_cast<std::int64_t>(n) + 64;
  for (int pass = 0; pass < 2 && !free_rows.empty() && dim > 1; ++pass) {
    std::size_t k = 0;
    const std::size_t prev_free = free_rows.size();
    std::size_t num_free = 0;
    std::int64_t steps = 0;
    while (k < prev_free) {
      const Index i = free_rows[k++];
      double umin = cost(i, 0) - v[0];
      Index j1 = 0, j2 = 0;
      double usubmin = kInf;
      for (Index j = 1; j < dim; ++j) {
        const double h = cost(i, j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }
      Index i0 = colsol[j1];
      const bool strict = umin < usubmin;
      if (strict) {
        v[j1] -= usubmin - umin;
      } else if (i0 != kFree) {
        j1 = j2;
        i0 = colsol[j2];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 != kFree) {
        rowsol[i0] = kFree;
        if (strict && ++steps < step_cap)
          free_rows[--k] = i0;
        else
          free_rows[num_free++] = i0;
      }
    }
    free_rows.resize(num_free);
  }

  // Augmentation.
  std::vector<Index> collist(n), pred(n);
  std::vector<double> d(n);
  for (const Index free_row : free_rows) {
    for (Index j = 0; j < dim; ++j) {
      d[j] = cost(free_row, j) - v[j];
      pred[j] = free_row;
      collist[j] = j;
    }
    Index low = 0, up = 0, last = 0, end_of_path = 0;
    double min = 0.0;
    bool found = false;
    while (!found) {
      if (up == low) {
        last = low - 1;
        min = d[collist[up++]];
        for (Index k = up; k < dim; ++k) {
          const Index j = collist[k];
          const double h = d[j];
          if (h <= min) {
            if (h < min) {
              up = low;
              min = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (Index k = low; k < up; ++k) {
          if (colsol[collist[k]] == kFree) {
            end_of_path = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const Index j1 = collist[low++];
        const Index i = colsol[j1];
        const double h = cost(i, j1) - v[j1] - min;
        for (Index k = up; k < dim; ++k) {
          const Index j = collist[k];
          const double v2 = cost(i, j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == min) {
              if (colsol[j] == kFree) {
                end_of_path = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    }
    for (Index k = 0; k <= last; ++k) {
      const Index j1 = collist[k];
      v[j1] += d[j1] - min;
    }
    Index i;
    do {
      i = pred[end_of_path];
      colsol[end_of_path] = i;
      std::swap(end_of_path, rowsol[i]);
    } while (i != free_row);
  }

  LapSolution out;
  out.row_to_col.resize(n);
  out.col_to_row.resize(n);
  out.u.resize(n);
  out.v = std::move(v);
  for (Index i = 0; i < dim; ++i) {
    const Index j = rowsol[i];
    out.row_to_col[i] = static_cast<std::size_t>(j);
    out.col_to_row[j] = static_cast<std::size_t>(i);
    out.u[i] = cost(i, j) - out.v[j];
  }
  return out;
}

}  // namespace akt
