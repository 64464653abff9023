#pragma once

// Finite sets of field elements and the set algebra built on them: sumsets,
// difference sets, product sets, images under univariate quadratics and
// iterated sumsets.

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fflab/bitset.hpp"
#include "fflab/budget.hpp"
#include "fflab/field.hpp"

namespace fflab {

/// Finite fields up to this order get the dense bitmap representation.
inline constexpr std::uint64_t dense_order_limit = 1ULL << 20;

inline bool dense_eligible(const FieldSpec& field) {
  return field.is_finite() && field.order() <= dense_order_limit;
}

/// Sorted, duplicate-free set of canonical elements of one domain.
class ESet {
 public:
  explicit ESet(FieldSpec field) : field_(field) {}

  /// Validates membership, then sorts and removes duplicates.
  static ESet from(FieldSpec field, std::vector<Elem> elements) {
    for (const auto& e : elements) {
      if (!field.contains(e)) throw Error(Errc::domain_mismatch, "element " + format_elem(field, e) + " not canonical");
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    ESet s(field);
    s.elements_ = std::move(elements);
    return s;
  }

  /// Reduces raw integers into the field first.
  static ESet from_ints(FieldSpec field, std::initializer_list<std::int64_t> values) {
    std::vector<Elem> out;
    out.reserve(values.size());
    for (auto v : values) out.push_back(field.from_int(v));
    return from(field, std::move(out));
  }

  static ESet from_bitset(FieldSpec field, const DenseBitset& bits) {
    ESet s(field);
    s.elements_.reserve(bits.count());
    bits.for_each([&](std::uint64_t i) { s.elements_.push_back(field.from_index(i)); });
    return s;
  }

  static ESet whole_field(FieldSpec field) {
    if (!field.is_finite()) throw Error(Errc::unsupported, "the integer line is infinite");
    ESet s(field);
    s.elements_.reserve(field.order());
    for (std::uint64_t i = 0; i < field.order(); ++i) s.elements_.push_back(field.from_index(i));
    return s;
  }

  const FieldSpec& field() const noexcept { return field_; }
  std::span<const Elem> elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }
  const Elem& operator[](std::size_t i) const noexcept { return elements_[i]; }

  bool contains(Elem e) const { return std::binary_search(elements_.begin(), elements_.end(), e); }

  DenseBitset to_bitset() const {
    DenseBitset bits(field_.order());
    for (const auto& e : elements_) bits.set(field_.index(e));
    return bits;
  }

  friend bool operator==(const ESet& a, const ESet& b) {
    return a.field_ == b.field_ && a.elements_ == b.elements_;
  }

 private:
  FieldSpec field_;
  std::vector<Elem> elements_;
};

/// u(x) = c2 x^2 + c1 x + c0.
struct Univariate {
  Elem c2{}, c1{}, c0{};

  friend bool operator==(const Univariate&, const Univariate&) = default;

  Elem operator()(const FieldSpec& f, Elem x) const { return f.add(f.mul(f.add(f.mul(c2, x), c1), x), c0); }

  int degree() const noexcept {
    if (c2 != Elem{}) return 2;
    if (c1 != Elem{}) return 1;
    return c0 != Elem{} ? 0 : -1;
  }

  static Univariate identity() { return {{}, {1, 0}, {}}; }
  static Univariate square() { return {{1, 0}, {}, {}}; }
};

enum class SetOp { sum, difference, product };
enum class Repr { automatic, dense, sorted };

namespace detail {

inline void require_same_domain(const ESet& a, const ESet& b) {
  if (!(a.field() == b.field())) throw Error(Errc::domain_mismatch, "sets live in different domains");
}

inline Elem apply(const FieldSpec& f, SetOp op, Elem a, Elem b) {
  switch (op) {
    case SetOp::sum: return f.add(a, b);
    case SetOp::difference: return f.sub(a, b);
    case SetOp::product: return f.mul(a, b);
  }
  return {};
}

inline ESet negate(const ESet& a) {
  std::vector<Elem> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(a.field().neg(e));
  return ESet::from(a.field(), std::move(out));
}

inline ESet combine_sorted(SetOp op, const ESet& a, const ESet& b) {
  const auto& f = a.field();
  std::vector<Elem> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    check_deadline();
    for (const auto& y : b) out.push_back(apply(f, op, x, y));
  }
  return ESet::from(f, std::move(out));
}

inline ESet combine_dense(SetOp op, const ESet& a, const ESet& b) {
  const auto& f = a.field();
  DenseBitset out(f.order());
  if (f.is_prime_field() && op != SetOp::product) {
    // a + b = union over x in a of (b rotated by x); iterate over the smaller side.
    const ESet rhs = op == SetOp::difference ? negate(b) : b;
    const bool a_small = a.size() <= rhs.size();
    const ESet& small = a_small ? a : rhs;
    const ESet& large = a_small ? rhs : a;
    const std::uint64_t words = (f.p() + 63) / 64;
    if (large.size() > words) {
      const DenseBitset base = large.to_bitset();
      for (const auto& x : small) {
        check_deadline();
        out.or_rotated(base, static_cast<std::uint64_t>(x.u));
        if (out.all()) break;
      }
      return ESet::from_bitset(f, out);
    }
  }
  for (const auto& x : a) {
    check_deadline();
    for (const auto& y : b) out.set(f.index(apply(f, op, x, y)));
  }
  return ESet::from_bitset(f, out);
}

}  // namespace detail

/// {x op y : x in a, y in b}. Empty inputs give an empty result.
inline ESet combine(SetOp op, const ESet& a, const ESet& b, Repr repr = Repr::automatic) {
  detail::require_same_domain(a, b);
  if (a.empty() || b.empty()) return ESet(a.field());
  bool dense = dense_eligible(a.field());
  if (repr == Repr::dense) {
    if (!dense) throw Error(Errc::invalid_argument, "dense representation needs a small finite field");
  } else if (repr == Repr::sorted) {
    dense = false;
  }
  return dense ? detail::combine_dense(op, a, b) : detail::combine_sorted(op, a, b);
}

inline ESet sumset(const ESet& a, const ESet& b) { return combine(SetOp::sum, a, b); }
inline ESet difference_set(const ESet& a, const ESet& b) { return combine(SetOp::difference, a, b); }
inline ESet product_set(const ESet& a, const ESet& b) { return combine(SetOp::product, a, b); }

/// {u(a) : a in A}.
inline ESet image(const ESet& a, const Univariate& u) {
  const auto& f = a.field();
  std::vector<Elem> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(u(f, x));
  return ESet::from(f, std::move(out));
}

/// The d-fold sumset D + ... + D, evaluated left to right. Stops early once
/// the running set is the whole field.
inline ESet iterated_sumset(const ESet& d_set, int d, Repr repr = Repr::automatic) {
  if (d < 1) throw Error(Errc::invalid_argument, "iterated sumset needs d >= 1");
  ESet acc = d_set;
  const auto order = d_set.field().order();
  for (int i = 1; i < d; ++i) {
    if (order != 0 && acc.size() == order) break;
    acc = combine(SetOp::sum, acc, d_set, repr);
  }
  return acc;
}

/// "0,1,6"; extension elements as "u+v*w".
inline std::string to_string(const ESet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += format_elem(s.field(), s[i]);
  }
  return out;
}

inline ESet parse_set(const FieldSpec& field, std::string_view text) {
  std::vector<Elem> out;
  text = detail::trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_elem(field, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return ESet::from(field, std::move(out));
}

}  // namespace fflab
