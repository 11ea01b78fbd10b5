#include "flatspin/f2.hpp"

#include <algorithm>

namespace flatspin {

void F2Eliminator::grow_combos(std::size_t n) {
  for (auto& r : rows_)
    if (r.combo.size() < n) {
      F2Vec bigger(n);
      for (std::size_t i = r.combo.first_set(); i != F2Vec::npos;
           i = r.combo.first_set(i + 1))
        bigger.set(i, true);
      r.combo = std::move(bigger);
    }
}

void F2Eliminator::add(F2Vec row, bool rhs, std::size_t tag) {
  if (contradiction_)
    return;  // first contradiction is kept; later rows are irrelevant
  if (row.size() != vars_)
    fail("F2Eliminator: row size mismatch");
  std::size_t slot = tags_.size();
  F2Vec combo(slot + 1);
  combo.set(slot, true);

  std::size_t c = row.first_set();
  while (c != F2Vec::npos) {
    std::size_t s = c < pivot_slot_.size() ? pivot_slot_[c] : npos_;
    if (s == npos_)
      break;
    const Row& p = rows_[s];
    row ^= p.v;
    rhs ^= p.rhs;
    if (combo.size() < p.combo.size()) {
      F2Vec bigger(p.combo.size());
      for (std::size_t i = combo.first_set(); i != F2Vec::npos;
           i = combo.first_set(i + 1))
        bigger.set(i, true);
      combo = std::move(bigger);
    }
    combo ^= p.combo;
    c = row.first_set(c);  // bit c was cleared by the xor
  }

  if (c == F2Vec::npos) {
    if (rhs) {
      tags_.push_back(tag);
      grow_combos(tags_.size());
      contradiction_ = std::move(combo);
    }
    return;  // redundant row, nothing tracked
  }

  tags_.push_back(tag);
  grow_combos(tags_.size());
  if (pivot_slot_.size() <= c)
    pivot_slot_.resize(c + 1, npos_);
  pivot_slot_[c] = rows_.size();
  rows_.push_back(Row{std::move(row), rhs, std::move(combo), c});
}

std::vector<std::size_t> F2Eliminator::certificate() const {
  if (!contradiction_)
    fail("F2Eliminator: no contradiction recorded");
  std::vector<std::size_t> out;
  for (std::size_t i = contradiction_->first_set(); i != F2Vec::npos;
       i = contradiction_->first_set(i + 1))
    out.push_back(tags_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

F2Vec F2Eliminator::solution() const {
  if (contradiction_)
    fail("F2Eliminator: system is inconsistent");
  F2Vec x(vars_);
  // Back-substitute in decreasing pivot order; free variables stay 0.
  std::vector<const Row*> by_pivot(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    by_pivot[i] = &rows_[i];
  std::sort(by_pivot.begin(), by_pivot.end(),
            [](const Row* a, const Row* b) { return a->pivot > b->pivot; });
  for (const Row* r : by_pivot) {
    bool v = r->rhs;
    for (std::size_t j = r->v.first_set(r->pivot + 1); j != F2Vec::npos;
         j = r->v.first_set(j + 1))
      v ^= x.get(j);
    x.set(r->pivot, v);
  }
  return x;
}

std::vector<F2Vec> F2Eliminator::kernel_basis() const {
  std::vector<bool> is_pivot(vars_, false);
  for (const Row& r : rows_)
    is_pivot[r.pivot] = true;
  std::vector<const Row*> by_pivot;
  for (const Row& r : rows_)
    by_pivot.push_back(&r);
  std::sort(by_pivot.begin(), by_pivot.end(),
            [](const Row* a, const Row* b) { return a->pivot > b->pivot; });

  std::vector<F2Vec> basis;
  for (std::size_t f = 0; f < vars_; ++f) {
    if (is_pivot[f])
      continue;
    F2Vec x(vars_);
    x.set(f, true);
    for (const Row* r : by_pivot) {
      bool v = false;
      for (std::size_t j = r->v.first_set(r->pivot + 1); j != F2Vec::npos;
           j = r->v.first_set(j + 1))
        v ^= x.get(j);
      x.set(r->pivot, v);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

F2Solve f2_solve(std::size_t vars, const std::vector<F2Vec>& a,
                 const std::vector<bool>& b) {
  if (a.size() != b.size())
    fail("f2_solve: row/rhs count mismatch");
  for (const auto& row : a)
    if (row.size() != vars)
      fail("f2_solve: ragged rows");
  F2Eliminator elim(vars);
  for (std::size_t i = 0; i < a.size(); ++i)
    elim.add(a[i], b[i], i);
  F2Solve out;
  out.consistent = elim.consistent();
  if (out.consistent) {
    out.solution = elim.solution();
    out.kernel = elim.kernel_basis();
  } else {
    out.certificate = elim.certificate();
  }
  return out;
}

}  // namespace flatspin
