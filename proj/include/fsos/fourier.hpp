#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/fft.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// Dense time-domain values of a function on G, indexed by element index.
class GroupFunction {
 public:
  GroupFunction(GroupSpec spec, std::vector<cplx> values)
      : spec_(std::move(spec)), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(spec_.order()))
      throw ArgumentError("GroupFunction: value array length != |G|");
  }

  static GroupFunction zero(const GroupSpec& spec) {
    return GroupFunction(spec, std::vector<cplx>(static_cast<std::size_t>(spec.order())));
  }

  const GroupSpec& spec() const { return spec_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx operator()(index_t x) const { return values_[static_cast<std::size_t>(x)]; }

  double max_abs() const {
    double m = 0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double max_imag() const {
    double m = 0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
  }
  bool is_real(double tol = 1e-9) const { return max_imag() <= tol * (1.0 + max_abs()); }

  /// Minimum of the real parts, with its location.
  std::pair<double, index_t> real_min() const {
    double m = values_[0].real();
    index_t arg = 0;
    for (index_t i = 1; i < spec_.order(); ++i) {
      double v = values_[static_cast<std::size_t>(i)].real();
      if (v < m) {
        m = v;
        arg = i;
      }
    }
    return {m, arg};
  }

 private:
  GroupSpec spec_;
  std::vector<cplx> values_;
};

/// Sparse character-indexed coefficients: f = sum_chi fhat(chi) chi.
/// Only nonzero entries are stored; iteration order is ascending character
/// index (deterministic).
class FourierExpansion {
 public:
  FourierExpansion() = default;
  explicit FourierExpansion(GroupSpec spec) : spec_(std::move(spec)), has_spec_(true) {}

  const GroupSpec& spec() const {
    if (!has_spec_) throw ArgumentError("FourierExpansion: unset group");
    return spec_;
  }

  void set(index_t chi, cplx value) {
    auto it = lookup_.find(chi);
    if (it == lookup_.end()) {
      lookup_.emplace(chi, entries_.size());
      entries_.emplace_back(chi, value);
      sorted_ = entries_.size() <= 1 ||
                (sorted_ && entries_[entries_.size() - 2].first < chi);
    } else {
      entries_[it->second].second = value;
    }
  }
  void add(index_t chi, cplx value) {
    auto it = lookup_.find(chi);
    if (it == lookup_.end())
      set(chi, value);
    else
      entries_[it->second].second += value;
  }
  void set(const Character& chi, cplx value) {
    if (chi.spec() != spec()) throw ArgumentError("FourierExpansion: mixed groups");
    set(chi.index(), value);
  }

  cplx coeff(index_t chi) const {
    auto it = lookup_.find(chi);
    return it == lookup_.end() ? cplx(0, 0) : entries_[it->second].second;
  }
  cplx coeff(const Character& chi) const { return coeff(chi.index()); }
  bool has(index_t chi) const { return lookup_.count(chi) > 0; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Entries as (character index, coefficient), ascending index.
  const std::vector<std::pair<index_t, cplx>>& entries() const {
    ensure_sorted();
    return entries_;
  }

  CharacterSet support() const {
    ensure_sorted();
    CharacterSet s(spec_);
    for (const auto& [chi, c] : entries_) s.insert_index(chi);
    return s;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [chi, c] : entries_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Drop entries with |coefficient| <= threshold.
  void prune(double threshold) {
    std::vector<std::pair<index_t, cplx>> kept;
    kept.reserve(entries_.size());
    for (const auto& e : entries_)
      if (std::abs(e.second) > threshold) kept.push_back(e);
    entries_ = std::move(kept);
    rebuild_lookup();
  }

  /// Conjugate symmetry fhat(chi^{-1}) = conj(fhat(chi)), i.e. real-valuedness.
  bool is_conjugate_symmetric(double tol = 1e-12) const {
    double scale = 1.0 + max_abs_coeff();
    for (const auto& [chi, c] : entries_)
      if (std::abs(coeff(spec_.neg(chi)) - std::conj(c)) > tol * scale) return false;
    return true;
  }

  /// The translate a*f: coefficient of a*chi is fhat(chi).
  FourierExpansion translated(index_t a) const {
    FourierExpansion out(spec_);
    for (const auto& [chi, c] : entries_) out.set(spec_.add(a, chi), c);
    return out;
  }

  /// Pointwise evaluation sum_chi fhat(chi) chi(x); O(|supp|).
  cplx eval_at(index_t x) const {
    cplx acc = 0;
    for (const auto& [chi, c] : entries_) acc += c * spec_.eval(chi, x);
    return acc;
  }

 private:
  void ensure_sorted() const {
    if (sorted_) return;
    auto* self = const_cast<FourierExpansion*>(this);
    std::sort(self->entries_.begin(), self->entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    self->rebuild_lookup();
    self->sorted_ = true;
  }
  void rebuild_lookup() {
    lookup_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) lookup_.emplace(entries_[i].first, i);
  }

  GroupSpec spec_;
  bool has_spec_ = false;
  mutable bool sorted_ = true;
  std::vector<std::pair<index_t, cplx>> entries_;
  std::unordered_map<index_t, std::size_t> lookup_;
};

/// fhat(chi) = (1/|G|) sum_x f(x) conj(chi(x)), via the mixed-radix FFT.
/// Entries with |fhat| below prune_rel * max|f| are dropped.
inline FourierExpansion forward_transform(const GroupFunction& f, double prune_rel = 1e-12) {
  std::vector<cplx> data = f.values();
  detail::multidim_dft(f.spec(), data, /*inverse=*/false);
  const double scale = 1.0 / static_cast<double>(f.spec().order());
  const double threshold = prune_rel * f.max_abs();
  FourierExpansion e(f.spec());
  for (index_t chi = 0; chi < f.spec().order(); ++chi) {
    cplx c = data[static_cast<std::size_t>(chi)] * scale;
    if (std::abs(c) > threshold) e.set(chi, c);
  }
  return e;
}

/// f(x) = sum_chi fhat(chi) chi(x), via the inverse FFT (no normalization).
inline GroupFunction inverse_transform(const FourierExpansion& e) {
  std::vector<cplx> data(static_cast<std::size_t>(e.spec().order()), cplx(0, 0));
  for (const auto& [chi, c] : e.entries()) data[static_cast<std::size_t>(chi)] = c;
  detail::multidim_dft(e.spec(), data, /*inverse=*/true);
  return GroupFunction(e.spec(), std::move(data));
}

/// h(x) = sqrt(max(f(x), 0)) for real f with min f >= -tol (relative);
/// anything lower throws NotNonnegative with the witness point.
inline GroupFunction pointwise_sqrt(const GroupFunction& f, double tol = 1e-9) {
  double scale = 1.0 + f.max_abs();
  if (!f.is_real(tol)) throw ArgumentError("pointwise_sqrt: function is not real-valued");
  auto [mn, arg] = f.real_min();
  if (mn < -tol * scale) throw NotNonnegativeError(arg, mn);
  std::vector<cplx> h(f.values().size());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = std::sqrt(std::max(f.values()[i].real(), 0.0));
  return GroupFunction(f.spec(), std::move(h));
}

/// Degree of a character: min(l, N-l) on a single cyclic factor, Hamming
/// weight on Z_2^n, and max over per-factor cyclic degrees otherwise (the
/// mixed-group case is a convention of this library; the notion is standard
/// only in the first two cases).
inline index_t character_degree(const GroupSpec& spec, index_t chi) {
  const auto& orders = spec.orders();
  bool all_two = std::all_of(orders.begin(), orders.end(),
                             [](index_t n) { return n == 2; });
  index_t deg = 0;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    index_t n = orders[j];
    index_t l = chi % n;
    index_t d = std::min(l, n - l);
    deg = all_two ? deg + d : std::max(deg, d);
    chi /= n;
  }
  return deg;
}

/// Degree of an expansion = max degree over its support; empty expansion -> 0.
inline index_t degree(const FourierExpansion& e) {
  index_t d = 0;
  for (const auto& [chi, c] : e.entries())
    d = std::max(d, character_degree(e.spec(), chi));
  return d;
}

}  // namespace fsos
