#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fsos/errors.hpp"

namespace fsos {

using cplx = std::complex<double>;
using index_t = std::int64_t;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// A finite abelian group Z_{n_1} x ... x Z_{n_k}.
///
/// Elements and characters are both addressed by mixed-radix indices with the
/// first coordinate least significant:
///   index(x) = sum_j x_j * prod_{i<j} n_i.
/// The same indexing is used for the dual group (exponent tuples), so an
/// index identifies an element of G and a character of G interchangeably.
class GroupSpec {
 public:
  GroupSpec() = default;

  explicit GroupSpec(std::vector<index_t> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw ArgumentError("GroupSpec: need at least one factor");
    order_ = 1;
    strides_.resize(orders_.size());
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      if (orders_[j] < 2) throw ArgumentError("GroupSpec: every order must be >= 2");
      strides_[j] = order_;
      if (order_ > (std::numeric_limits<index_t>::max)() / orders_[j])
        throw SizeLimitError("GroupSpec: group order overflows the index range");
      order_ *= orders_[j];
    }
  }

  /// Z_n
  static GroupSpec cyclic(index_t n) { return GroupSpec({n}); }
  /// Z_n^k
  static GroupSpec power(index_t n, std::size_t k) {
    return GroupSpec(std::vector<index_t>(k, n));
  }

  const std::vector<index_t>& orders() const { return orders_; }
  index_t order() const { return order_; }
  std::size_t factors() const { return orders_.size(); }

  bool operator==(const GroupSpec& o) const { return orders_ == o.orders_; }
  bool operator!=(const GroupSpec& o) const { return !(*this == o); }

  index_t index_of(const std::vector<index_t>& coords) const {
    if (coords.size() != orders_.size())
      throw ArgumentError("GroupSpec: coordinate tuple has wrong length");
    index_t idx = 0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      index_t c = mod(coords[j], orders_[j]);
      idx += c * strides_[j];
    }
    return idx;
  }

  std::vector<index_t> coords_of(index_t index) const {
    check_index(index);
    std::vector<index_t> c(orders_.size());
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      c[j] = index % orders_[j];
      index /= orders_[j];
    }
    return c;
  }

  /// Componentwise sum of two indices (group law of G and of its dual).
  index_t add(index_t a, index_t b) const {
    check_index(a);
    check_index(b);
    index_t out = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      index_t n = orders_[j];
      index_t s = (a % n) + (b % n);
      if (s >= n) s -= n;
      out += s * strides_[j];
      a /= n;
      b /= n;
    }
    return out;
  }

  /// Componentwise negation (inverse in G and in its dual).
  index_t neg(index_t a) const {
    check_index(a);
    index_t out = 0;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      index_t n = orders_[j];
      index_t c = a % n;
      out += (c == 0 ? 0 : n - c) * strides_[j];
      a /= n;
    }
    return out;
  }

  index_t sub(index_t a, index_t b) const { return add(a, neg(b)); }

  /// chi_l(x) = exp(2 pi i sum_j l_j x_j / n_j), by indices.
  cplx eval(index_t chi, index_t x) const {
    check_index(chi);
    check_index(x);
    double phase = 0.0;  // in turns
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      index_t n = orders_[j];
      index_t l = chi % n, c = x % n;
      phase += static_cast<double>((l * c) % n) / static_cast<double>(n);
      chi /= n;
      x /= n;
    }
    double a = 2.0 * kPi * phase;
    return {std::cos(a), std::sin(a)};
  }

  static index_t mod(index_t v, index_t n) {
    index_t r = v % n;
    return r < 0 ? r + n : r;
  }

 private:
  void check_index(index_t i) const {
    if (i < 0 || i >= order_) throw ArgumentError("GroupSpec: index out of range");
  }

  std::vector<index_t> orders_;
  std::vector<index_t> strides_;
  index_t order_ = 0;
};

/// An element of G, stored as reduced coordinates.
class GroupElement {
 public:
  GroupElement(GroupSpec spec, std::vector<index_t> coords)
      : spec_(std::move(spec)) {
    if (coords.size() != spec_.factors())
      throw ArgumentError("GroupElement: wrong number of coordinates");
    for (std::size_t j = 0; j < coords.size(); ++j)
      coords.at(j) = GroupSpec::mod(coords[j], spec_.orders()[j]);
    coords_ = std::move(coords);
  }

  static GroupElement from_index(const GroupSpec& spec, index_t idx) {
    return GroupElement(spec, spec.coords_of(idx));
  }

  const GroupSpec& spec() const { return spec_; }
  const std::vector<index_t>& coords() const { return coords_; }
  index_t index() const { return spec_.index_of(coords_); }

  bool operator==(const GroupElement& o) const {
    return spec_ == o.spec_ && coords_ == o.coords_;
  }

 private:
  GroupSpec spec_;
  std::vector<index_t> coords_;
};

/// A character of G, stored as its exponent tuple (l_1, ..., l_k).
///
/// Products are componentwise exponent addition mod n_j; the identity chi_0
/// has all exponents zero. Characters are never tabulated by value.
class Character {
 public:
  Character(GroupSpec spec, std::vector<index_t> exponents)
      : spec_(std::move(spec)) {
    if (exponents.size() != spec_.factors())
      throw ArgumentError("Character: wrong number of exponents");
    for (std::size_t j = 0; j < exponents.size(); ++j)
      exponents.at(j) = GroupSpec::mod(exponents[j], spec_.orders()[j]);
    exponents_ = std::move(exponents);
  }

  static Character from_index(const GroupSpec& spec, index_t idx) {
    return Character(spec, spec.coords_of(idx));
  }
  static Character identity(const GroupSpec& spec) {
    return Character(spec, std::vector<index_t>(spec.factors(), 0));
  }

  const GroupSpec& spec() const { return spec_; }
  const std::vector<index_t>& exponents() const { return exponents_; }
  index_t index() const { return spec_.index_of(exponents_); }

  Character operator*(const Character& o) const {
    require_same_spec(o);
    return from_index(spec_, spec_.add(index(), o.index()));
  }
  Character inverse() const { return from_index(spec_, spec_.neg(index())); }
  bool is_identity() const {
    return std::all_of(exponents_.begin(), exponents_.end(),
                       [](index_t e) { return e == 0; });
  }

  bool operator==(const Character& o) const {
    return spec_ == o.spec_ && exponents_ == o.exponents_;
  }
  bool operator!=(const Character& o) const { return !(*this == o); }

  void require_same_spec(const Character& o) const {
    if (spec_ != o.spec_) throw ArgumentError("characters live on different groups");
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(exponents_[j]);
    }
    return s + ")";
  }

 private:
  GroupSpec spec_;
  std::vector<index_t> exponents_;
};

/// chi(x) with a shared-group check. Modulus is exactly 1 up to rounding.
inline cplx char_eval(const Character& chi, const GroupElement& x) {
  if (chi.spec() != x.spec())
    throw ArgumentError("char_eval: character and element live on different groups");
  return chi.spec().eval(chi.index(), x.index());
}

/// An ordered, duplicate-free set of characters over one group.
class CharacterSet {
 public:
  CharacterSet() = default;
  explicit CharacterSet(GroupSpec spec) : spec_(std::move(spec)), has_spec_(true) {}

  CharacterSet(GroupSpec spec, const std::vector<index_t>& indices)
      : spec_(std::move(spec)), has_spec_(true) {
    for (index_t i : indices) insert_index(i);
  }

  static CharacterSet from_characters(const std::vector<Character>& chars) {
    if (chars.empty()) throw ArgumentError("CharacterSet: empty character list");
    CharacterSet s(chars.front().spec());
    for (const auto& c : chars) s.insert(c);
    return s;
  }

  /// The whole dual group, in index order.
  static CharacterSet full_dual(const GroupSpec& spec) {
    CharacterSet s(spec);
    for (index_t i = 0; i < spec.order(); ++i) s.insert_index(i);
    return s;
  }

  const GroupSpec& spec() const {
    if (!has_spec_) throw ArgumentError("CharacterSet: unset group");
    return spec_;
  }

  void insert(const Character& c) {
    if (c.spec() != spec()) throw ArgumentError("CharacterSet: mixed groups");
    insert_index(c.index());
  }
  void insert_index(index_t i) {
    if (present_.insert(i).second) indices_.push_back(i);
  }

  bool contains_index(index_t i) const { return present_.count(i) > 0; }
  bool contains(const Character& c) const { return contains_index(c.index()); }

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<index_t>& indices() const { return indices_; }

  Character at(std::size_t pos) const {
    return Character::from_index(spec_, indices_.at(pos));
  }
  std::vector<Character> characters() const {
    std::vector<Character> out;
    out.reserve(indices_.size());
    for (index_t i : indices_) out.push_back(Character::from_index(spec_, i));
    return out;
  }

  /// chi in S implies chi^{-1} in S.
  bool is_symmetric() const {
    for (index_t i : indices_)
      if (!contains_index(spec_.neg(i))) return false;
    return true;
  }

  /// Closed under products and inverses, and contains chi_0.
  bool is_subgroup() const {
    if (!contains_index(0)) return false;
    for (index_t a : indices_)
      for (index_t b : indices_)
        if (!contains_index(spec_.add(a, b))) return false;
    return is_symmetric();
  }

  CharacterSet sorted() const {
    CharacterSet out(spec_);
    std::vector<index_t> idx = indices_;
    std::sort(idx.begin(), idx.end());
    for (index_t i : idx) out.insert_index(i);
    return out;
  }

  /// The translate a*S.
  CharacterSet translated(index_t a) const {
    CharacterSet out(spec_);
    for (index_t i : indices_) out.insert_index(spec_.add(a, i));
    return out;
  }

  bool operator==(const CharacterSet& o) const {
    if (spec_ != o.spec_ || size() != o.size()) return false;
    for (index_t i : indices_)
      if (!o.contains_index(i)) return false;
    return true;
  }

 private:
  GroupSpec spec_;
  bool has_spec_ = false;
  std::vector<index_t> indices_;
  std::unordered_set<index_t> present_;
};

/// Closure of a nonempty set under products and inverses. Contains chi_0;
/// the result size divides |G| (Lagrange). Output sorted by character index.
inline CharacterSet subgroup_generated(const CharacterSet& s) {
  if (s.empty()) throw ArgumentError("subgroup_generated: empty generating set");
  const GroupSpec& spec = s.spec();
  std::unordered_set<index_t> closure{0};
  std::vector<index_t> frontier{0};
  std::vector<index_t> gens;
  for (index_t g : s.indices()) {
    gens.push_back(g);
    gens.push_back(spec.neg(g));
  }
  while (!frontier.empty()) {
    index_t a = frontier.back();
    frontier.pop_back();
    for (index_t g : gens) {
      index_t b = spec.add(a, g);
      if (closure.insert(b).second) frontier.push_back(b);
    }
  }
  std::vector<index_t> out(closure.begin(), closure.end());
  std::sort(out.begin(), out.end());
  return CharacterSet(spec, out);
}

/// The |G|/|H| cosets of a subgroup H, each sorted, listed by ascending
/// canonical representative (= smallest member index).
inline std::vector<CharacterSet> cosets(const CharacterSet& h) {
  if (!h.is_subgroup()) throw ArgumentError("cosets: input is not a subgroup");
  const GroupSpec& spec = h.spec();
  std::vector<CharacterSet> out;
  std::vector<bool> seen(static_cast<std::size_t>(spec.order()), false);
  for (index_t rep = 0; rep < spec.order(); ++rep) {
    if (seen[static_cast<std::size_t>(rep)]) continue;
    std::vector<index_t> coset;
    for (index_t g : h.indices()) coset.push_back(spec.add(rep, g));
    std::sort(coset.begin(), coset.end());
    for (index_t c : coset) seen[static_cast<std::size_t>(c)] = true;
    out.push_back(CharacterSet(spec, coset));
  }
  return out;
}

/// G_1 x G_2 with the character lift (chi_1, chi_2) -> chi of the product.
struct ProductGroup {
  GroupSpec spec;  // concatenated orders
  GroupSpec left;
  GroupSpec right;

  Character lift(const Character& c1, const Character& c2) const {
    if (c1.spec() != left || c2.spec() != right)
      throw ArgumentError("ProductGroup::lift: wrong component groups");
    std::vector<index_t> e = c1.exponents();
    e.insert(e.end(), c2.exponents().begin(), c2.exponents().end());
    return Character(spec, e);
  }
  GroupElement lift_element(const GroupElement& x1, const GroupElement& x2) const {
    if (x1.spec() != left || x2.spec() != right)
      throw ArgumentError("ProductGroup::lift_element: wrong component groups");
    std::vector<index_t> c = x1.coords();
    c.insert(c.end(), x2.coords().begin(), x2.coords().end());
    return GroupElement(spec, c);
  }
  index_t lift_index(index_t i1, index_t i2) const {
    return i1 + left.order() * i2;
  }
};

inline ProductGroup product_group(const GroupSpec& g1, const GroupSpec& g2) {
  std::vector<index_t> orders = g1.orders();
  orders.insert(orders.end(), g2.orders().begin(), g2.orders().end());
  return ProductGroup{GroupSpec(orders), g1, g2};
}

}  // namespace fsos
