#include "flatspin/snf.hpp"

#include <algorithm>
#include <tuple>

namespace flatspin {

namespace {

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

// Smallest nonzero |entry| in d[t.., t..]; ties: lowest row, then column.
bool find_pivot(const IntMatrix& d, std::size_t t, std::size_t& pi,
                std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0)
        continue;
      Int a = abs_int(d(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

bool cross_clear(const IntMatrix& d, std::size_t t) {
  for (std::size_t i = t + 1; i < d.rows(); ++i)
    if (d(i, t) != 0) return false;
  for (std::size_t j = t + 1; j < d.cols(); ++j)
    if (d(t, j) != 0) return false;
  return true;
}

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfDecomposition s{IntMatrix::identity(m), a, IntMatrix::identity(n)};
  IntMatrix& d = s.d;
  const std::size_t steps = std::min(m, n);

  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      std::size_t pi, pj;
      if (!find_pivot(d, t, pi, pj))
        return s;  // remaining block is zero
      d.swap_rows(t, pi);
      s.u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.v.swap_cols(t, pj);

      for (std::size_t i = t + 1; i < m; ++i)
        if (d(i, t) != 0) {
          Int q = d(i, t) / d(t, t);
          if (q != 0) {
            d.add_row(i, t, -q);
            s.u.add_row(i, t, -q);
          }
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (d(t, j) != 0) {
          Int q = d(t, j) / d(t, t);
          if (q != 0) {
            d.add_col(j, t, -q);
            s.v.add_col(j, t, -q);
          }
        }
      if (!cross_clear(d, t))
        continue;  // remainders left; re-pick a smaller pivot

      // Divisibility: d(t,t) must divide everything below-right.
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n && fixed; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, 1);
            s.u.add_row(t, i, 1);
            fixed = false;
          }
      if (!fixed)
        continue;
      if (d(t, t) < 0) {
        d.negate_row(t);
        s.u.negate_row(t);
      }
      break;
    }
  }
  return s;
}

std::vector<IntVector> left_kernel_basis(const IntMatrix& a) {
  SnfDecomposition s = smith_normal_form(a);
  std::vector<IntVector> basis;
  const std::size_t diag = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (i >= diag || s.d(i, i) == 0)
      basis.push_back(s.u.row(i));
  return basis;
}

Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols())
    fail("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0)
    return 1;
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0)
        ++p;
      if (p == n)
        return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

namespace {

// Direct SNF-based path: b' = U*b; zero rows of D demand integral b';
// otherwise back-substitute y_i = b'_i / d_i and x = V*y.
TorusSolve torus_solve_direct(const IntMatrix& a, const RatVector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfDecomposition s = smith_normal_form(a);
  RatVector bp(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (s.u(i, j) != 0)
        bp[i] += Rat(s.u(i, j)) * b[j];
  }
  const std::size_t diag = std::min(m, n);

  // Violated kernel rows; prefer the sparsest certificate, then row order.
  std::size_t best = std::size_t(-1);
  std::size_t best_support = 0, best_first = 0;
  for (std::size_t i = 0; i < m; ++i) {
    bool zero_row = (i >= diag) || s.d(i, i) == 0;
    if (!zero_row || is_integer(bp[i]))
      continue;
    std::size_t support = 0, first = m;
    for (std::size_t j = 0; j < m; ++j)
      if (s.u(i, j) != 0) {
        ++support;
        if (first == m) first = j;
      }
    if (best == std::size_t(-1) ||
        std::tie(support, first, i) < std::tie(best_support, best_first, best)) {
      best = i;
      best_support = support;
      best_first = first;
    }
  }
  TorusSolve out;
  if (best != std::size_t(-1)) {
    out.solvable = false;
    for (std::size_t j = 0; j < m; ++j)
      if (s.u(best, j) != 0)
        out.certificate.emplace_back(j, s.u(best, j));
    return out;
  }

  out.solvable = true;
  RatVector y(n);
  for (std::size_t i = 0; i < diag; ++i)
    if (s.d(i, i) != 0)
      y[i] = bp[i] / Rat(s.d(i, i));
  out.solution.assign(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    Rat x;
    for (std::size_t j = 0; j < n; ++j)
      if (s.v(i, j) != 0)
        x += Rat(s.v(i, j)) * y[j];
    out.solution[i] = mod1(x);
  }
  return out;
}

}  // namespace

TorusEliminator::TorusEliminator(std::size_t cols, Int scale)
    : cols_(cols), scale_(std::move(scale)),
      pivot_slot_(cols + 1, std::size_t(-1)) {
  if (scale_ <= 0)
    fail("TorusEliminator: scale must be positive");
}

namespace {

// ca*a + cb*b over sorted sparse rows, dropping zero entries.
void add_scaled(const std::vector<std::pair<std::size_t, Int>>& a,
                const Int& ca,
                const std::vector<std::pair<std::size_t, Int>>& b,
                const Int& cb,
                std::vector<std::pair<std::size_t, Int>>& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      Int v = ca * a[i].second;
      if (v != 0)
        out.emplace_back(a[i].first, std::move(v));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      Int v = cb * b[j].second;
      if (v != 0)
        out.emplace_back(b[j].first, std::move(v));
      ++j;
    } else {
      Int v = ca * a[i].second + cb * b[j].second;
      if (v != 0)
        out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
}

}  // namespace

void TorusEliminator::add(const IntVector& row, const Rat& rhs,
                          std::size_t tag) {
  if (row.size() != cols_)
    fail("TorusEliminator: row size mismatch");
  Rat aug = Rat(scale_) * rhs;
  if (!is_integer(aug))
    fail("TorusEliminator: scale does not clear rhs denominator");
  SparseRow r;
  for (std::size_t j = 0; j < cols_; ++j)
    if (row[j] != 0)
      r.emplace_back(j, row[j]);
  if (numerator(aug) != 0)
    r.emplace_back(cols_, numerator(aug));

  // Untracked probe first: a row that dies by divisible reductions alone is
  // redundant and needs no combination bookkeeping. Almost every row of the
  // quadratically large pairwise systems takes this path.
  {
    SparseRow probe = r, scratch;
    bool tracked_path = false;
    while (!probe.empty()) {
      std::size_t slot = pivot_slot_[probe.front().first];
      if (slot == std::size_t(-1)) {
        tracked_path = true;  // would insert a new basis row
        break;
      }
      const Row& p = rows_[slot];
      const Int& pc = p.v.front().second;
      if (probe.front().second % pc != 0) {
        tracked_path = true;  // would mix the basis row (gcd step)
        break;
      }
      Int q = probe.front().second / pc;
      add_scaled(probe, Int(1), p.v, -q, scratch);
      probe.swap(scratch);
    }
    if (!tracked_path)
      return;
  }

  std::map<std::size_t, Int> combo{{tag, Int(1)}};

  SparseRow scratch;
  while (!r.empty()) {
    std::size_t c = r.front().first;
    std::size_t slot = pivot_slot_[c];
    if (slot == std::size_t(-1)) {
      if (r.front().second < 0) {
        for (auto& [j, v] : r) v = -v;
        for (auto& [k, v] : combo) v = -v;
      }
      pivot_slot_[c] = rows_.size();
      rows_.push_back(Row{std::move(r), std::move(combo), c});
      return;
    }
    Row& p = rows_[slot];
    const Int& pc = p.v.front().second;
    const Int& rc = r.front().second;
    if (rc % pc == 0) {
      Int q = rc / pc;
      add_scaled(r, Int(1), p.v, -q, scratch);
      r.swap(scratch);
      for (const auto& [k, v] : p.combo)
        combo[k] -= q * v;
    } else {
      // gcd step: unimodular 2x2 mix of the basis row and the incoming row
      Int x, y, g;
      {
        Int a0 = pc, b0 = rc;
        Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (b0 != 0) {
          Int q = a0 / b0;
          Int tmp = a0 - q * b0; a0 = b0; b0 = tmp;
          tmp = s0 - q * s1; s0 = s1; s1 = tmp;
          tmp = t0 - q * t1; t0 = t1; t1 = tmp;
        }
        if (a0 < 0) { a0 = -a0; s0 = -s0; t0 = -t0; }
        g = a0; x = s0; y = t0;  // x*pc + y*rc = g
      }
      Int pc_g = pc / g, rc_g = rc / g;
      SparseRow new_p, new_r;
      add_scaled(p.v, x, r, y, new_p);
      add_scaled(r, pc_g, p.v, -rc_g, new_r);
      std::map<std::size_t, Int> new_pc = p.combo, new_rc;
      for (auto& [k, v] : new_pc) v *= x;
      for (const auto& [k, v] : combo) new_pc[k] += y * v;
      for (const auto& [k, v] : combo) new_rc[k] = pc_g * v;
      for (const auto& [k, v] : p.combo) new_rc[k] -= rc_g * v;
      p.v = std::move(new_p);
      p.combo = std::move(new_pc);
      r = std::move(new_r);
      combo = std::move(new_rc);
    }
    // the leading entry at column c is now eliminated
  }
  // row reduced to zero: redundant, drop it (combo not needed)
}

IntMatrix TorusEliminator::matrix() const {
  IntMatrix a(rows_.size(), cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i].v)
      if (j < cols_)
        a(i, j) = v;
  return a;
}

RatVector TorusEliminator::rhs() const {
  RatVector b(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    b[i] = 0;
    if (!rows_[i].v.empty() && rows_[i].v.back().first == cols_)
      b[i] = Rat(rows_[i].v.back().second, scale_);
  }
  return b;
}

std::vector<std::pair<std::size_t, Int>> TorusEliminator::expand(
    const std::vector<std::pair<std::size_t, Int>>& compressed) const {
  std::map<std::size_t, Int> acc;
  for (const auto& [slot, coeff] : compressed)
    for (const auto& [tag, v] : rows_[slot].combo)
      acc[tag] += coeff * v;
  std::vector<std::pair<std::size_t, Int>> out;
  for (auto& [tag, v] : acc)
    if (v != 0)
      out.emplace_back(tag, v);
  return out;
}

TorusSolve torus_solve(const IntMatrix& a, const RatVector& b) {
  if (a.rows() != b.size())
    fail("torus_solve: row/rhs count mismatch");
  const std::size_t m = a.rows(), n = a.cols();
  if (m <= std::max<std::size_t>(256, 3 * n))
    return torus_solve_direct(a, b);

  Int scale = 1;
  for (const auto& q : b)
    scale = boost::multiprecision::lcm(scale, denominator(q));
  TorusEliminator elim(n, scale);
  for (std::size_t i = 0; i < m; ++i)
    elim.add(a.row(i), b[i], i);
  TorusSolve reduced = torus_solve_direct(elim.matrix(), elim.rhs());
  if (reduced.solvable)
    return reduced;
  TorusSolve out;
  out.solvable = false;
  out.certificate = elim.expand(reduced.certificate);
  return out;
}

}  // namespace flatspin
