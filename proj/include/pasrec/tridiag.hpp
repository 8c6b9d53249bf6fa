#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "pasrec/errors.hpp"

namespace pasrec {

/// Tridiagonal system in three-band storage. Row i reads
///   lower[i-1]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i],
/// so lower and upper have one entry less than diag.
template <class T>
struct Tridiag {
  std::vector<T> lower;
  std::vector<T> diag;
  std::vector<T> upper;
};

/// Thomas elimination with partial pivoting (row swaps introduce a second
/// superdiagonal, as in LAPACK's gttrf). Throws SINGULAR_SYSTEM when a pivot
/// magnitude falls below tol_pivot. The bands and rhs are consumed.
template <class T>
std::vector<T> solve_tridiag(Tridiag<T> m, std::vector<T> rhs,
                             double tol_pivot) {
  const std::size_t n = m.diag.size();
  if (n == 0 || m.lower.size() != n - 1 || m.upper.size() != n - 1 ||
      rhs.size() != n) {
    fail(errc::domain_error, "tridiagonal bands have inconsistent sizes");
  }

  // fill-in band created by row swaps
  std::vector<T> upper2(n > 2 ? n - 2 : 0, T{});

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const T di = m.diag[i];
    const T ui = m.upper[i];
    const T li = m.lower[i];
    if (std::abs(di) >= std::abs(li)) {
      if (std::abs(di) < tol_pivot) {
        fail(errc::singular_system, "pivot " + std::to_string(std::abs(di)) +
                                        " below tolerance at row " +
                                        std::to_string(i));
      }
      const T fac = li / di;
      m.diag[i + 1] -= fac * ui;
      rhs[i + 1] -= fac * rhs[i];
    } else {
      // swap rows i and i+1, then eliminate
      const T fac = di / li;  // |fac| <= 1
      m.diag[i] = li;
      const T new_u = m.diag[i + 1];
      const T new_u2 = (i + 2 < n) ? m.upper[i + 1] : T{};
      m.diag[i + 1] = ui - fac * new_u;
      if (i + 2 < n) {
        m.upper[i + 1] = -fac * new_u2;
        upper2[i] = new_u2;
      }
      m.upper[i] = new_u;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= fac * rhs[i];
    }
  }
  if (std::abs(m.diag[n - 1]) < tol_pivot) {
    fail(errc::singular_system, "pivot " +
                                    std::to_string(std::abs(m.diag[n - 1])) +
                                    " below tolerance at last row");
  }

  std::vector<T> x(n);
  x[n - 1] = rhs[n - 1] / m.diag[n - 1];
  if (n >= 2) {
    x[n - 2] = (rhs[n - 2] - m.upper[n - 2] * x[n - 1]) / m.diag[n - 2];
  }
  for (std::size_t ip = n; ip >= 3; --ip) {
    const std::size_t i = ip - 3;
    x[i] = (rhs[i] - m.upper[i] * x[i + 1] - upper2[i] * x[i + 2]) / m.diag[i];
  }
  return x;
}

}  // namespace pasrec
