#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <type_traits>
#include <utility>
#include <string>
#include <unordered_map>
#include <vector>

#include "honeycomb/errors.hpp"

namespace honeycomb {

class FieldElement;

// F_p or F_{p^2} with arithmetic tables. Instances are interned, so two
// elements belong to the same field iff their field pointers are equal.
class FiniteField {
 public:
  static const FiniteField& get(std::uint32_t p, int degree = 1);

  std::uint32_t prime() const { return p_; }
  int degree() const { return degree_; }
  std::uint32_t size() const { return n_; }
  // w^2 = s + t*w
  std::uint32_t omega_sq_const() const { return s_; }
  std::uint32_t omega_sq_lin() const { return t_; }

  FieldElement element(std::int64_t a, std::int64_t b = 0) const;
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_code(std::uint32_t code) const;

  std::uint16_t add(std::uint16_t x, std::uint16_t y) const { return add_[x * n_ + y]; }
  std::uint16_t mul(std::uint16_t x, std::uint16_t y) const { return mul_[x * n_ + y]; }
  std::uint16_t neg(std::uint16_t x) const { return neg_[x]; }
  std::uint16_t inv(std::uint16_t x) const;
  bool is_unit(std::uint16_t x) const { return x != 0 && inv_[x] != 0; }
  // False only for p = 2, degree 2, where w^2 = 1 gives the local ring F_2[w]/(w+1)^2.
  bool is_field() const { return !(p_ == 2 && degree_ == 2); }
  std::uint16_t sub(std::uint16_t x, std::uint16_t y) const { return add(x, neg(y)); }

  std::string name() const;

 private:
  FiniteField(std::uint32_t p, int degree);

  std::uint32_t p_;
  int degree_;
  std::uint32_t n_;
  std::uint32_t s_ = 0;
  std::uint32_t t_ = 0;
  std::vector<std::uint16_t> add_, mul_, neg_, inv_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const FiniteField* field, std::uint16_t code) : field_(field), code_(code) {}

  const FiniteField& field() const;
  std::uint32_t a() const { return code_ % field().prime(); }
  std::uint32_t b() const { return code_ / field().prime(); }
  std::uint16_t code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  bool valid() const { return field_ != nullptr; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  std::string str() const;

 private:
  const FiniteField* check(const FieldElement& o) const;

  const FiniteField* field_ = nullptr;
  std::uint16_t code_ = 0;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double zero_like(double) { return 0.0; }
  static double one_like(double) { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double pivot_score(double x) { return std::fabs(x); }
  static double inverse(double x) {
    if (x == 0.0) throw DivisionByZero("real zero");
    return 1.0 / x;
  }
};

template <>
struct ScalarTraits<FieldElement> {
  static FieldElement zero_like(const FieldElement& x) { return x.field().zero(); }
  static FieldElement one_like(const FieldElement& x) { return x.field().one(); }
  static bool is_zero(const FieldElement& x) { return x.is_zero(); }
  static double pivot_score(const FieldElement& x) { return x.field().is_unit(x.code()) ? 1.0 : 0.0; }
  static FieldElement inverse(const FieldElement& x) { return x.inv(); }
};

template <class S>
class Matrix4 {
 public:
  using Scalar = S;

  Matrix4() = default;
  explicit Matrix4(const std::array<S, 16>& e) : e_(e) {}

  static Matrix4 filled(const S& value) {
    Matrix4 m;
    m.e_.fill(value);
    return m;
  }
  static Matrix4 identity(const S& one) {
    Matrix4 m = filled(ScalarTraits<S>::zero_like(one));
    for (int i = 0; i < 4; ++i) m(i, i) = one;
    return m;
  }
  static Matrix4 diagonal(const std::array<S, 4>& d) {
    Matrix4 m = filled(ScalarTraits<S>::zero_like(d[0]));
    for (int i = 0; i < 4; ++i) m(i, i) = d[i];
    return m;
  }

  S& operator()(int r, int c) { return e_[r * 4 + c]; }
  const S& operator()(int r, int c) const { return e_[r * 4 + c]; }
  const std::array<S, 16>& entries() const { return e_; }

  Matrix4 operator*(const Matrix4& o) const {
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        S acc = (*this)(i, 0) * o(0, j);
        for (int k = 1; k < 4; ++k) acc = acc + (*this)(i, k) * o(k, j);
        m(i, j) = acc;
      }
    return m;
  }
  Matrix4 operator+(const Matrix4& o) const {
    Matrix4 m;
    for (int i = 0; i < 16; ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
  }
  Matrix4 operator-(const Matrix4& o) const {
    Matrix4 m;
    for (int i = 0; i < 16; ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
  }
  Matrix4 scaled(const S& s) const {
    Matrix4 m;
    for (int i = 0; i < 16; ++i) m.e_[i] = e_[i] * s;
    return m;
  }
  Matrix4 transpose() const {
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = (*this)(j, i);
    return m;
  }
  bool operator==(const Matrix4& o) const { return e_ == o.e_; }
  bool operator!=(const Matrix4& o) const { return !(*this == o); }

  S one() const { return ScalarTraits<S>::one_like(e_[0]); }
  Matrix4 identity_like() const { return identity(one()); }

  Matrix4 inverse() const {
    using T = ScalarTraits<S>;
    Matrix4 a = *this;
    Matrix4 inv = identity_like();
    for (int col = 0; col < 4; ++col) {
      int piv = col;
      double best = T::pivot_score(a(col, col));
      for (int r = col + 1; r < 4; ++r) {
        double sc = T::pivot_score(a(r, col));
        if (sc > best) {
          best = sc;
          piv = r;
        }
      }
      if (best == 0.0 || (std::is_same_v<S, double> && best < 1e-300)) throw Singular("matrix is not invertible");
      if (piv != col)
        for (int j = 0; j < 4; ++j) {
          std::swap(a(col, j), a(piv, j));
          std::swap(inv(col, j), inv(piv, j));
        }
      S pinv = T::inverse(a(col, col));
      for (int j = 0; j < 4; ++j) {
        a(col, j) = a(col, j) * pinv;
        inv(col, j) = inv(col, j) * pinv;
      }
      for (int r = 0; r < 4; ++r) {
        if (r == col || T::is_zero(a(r, col))) continue;
        S f = a(r, col);
        for (int j = 0; j < 4; ++j) {
          a(r, j) = a(r, j) - f * a(col, j);
          inv(r, j) = inv(r, j) - f * inv(col, j);
        }
      }
    }
    return inv;
  }

  S determinant() const {
    using T = ScalarTraits<S>;
    Matrix4 a = *this;
    S det = one();
    for (int col = 0; col < 4; ++col) {
      int piv = -1;
      double best = 0.0;
      for (int r = col; r < 4; ++r) {
        double sc = T::pivot_score(a(r, col));
        if (sc > best) {
          best = sc;
          piv = r;
        }
      }
      if (piv < 0) return T::zero_like(det);
      if (piv != col) {
        for (int j = 0; j < 4; ++j) std::swap(a(col, j), a(piv, j));
        det = T::zero_like(det) - det;
      }
      det = det * a(col, col);
      S pinv = T::inverse(a(col, col));
      for (int r = col + 1; r < 4; ++r) {
        S f = a(r, col) * pinv;
        for (int j = col; j < 4; ++j) a(r, j) = a(r, j) - f * a(col, j);
      }
    }
    return det;
  }

 private:
  std::array<S, 16> e_{};
};

using RealMatrix = Matrix4<double>;
using FieldMatrix = Matrix4<FieldElement>;
using Vec4 = std::array<double, 4>;

RealMatrix real_identity();
RealMatrix minkowski_form();
FieldMatrix minkowski_form(const FiniteField& field);
FieldMatrix field_identity(const FiniteField& field);

bool eq_within(const RealMatrix& m, const RealMatrix& n, double eps);
double max_abs(const RealMatrix& m);
double max_abs_diff(const RealMatrix& m, const RealMatrix& n);

Vec4 act(const RealMatrix& m, const Vec4& v);
double minkowski_dot(const Vec4& x, const Vec4& y);
bool vec_eq_within(const Vec4& x, const Vec4& y, double eps);

constexpr double kGeomEps = 1e-7;
constexpr double kQuantum = 1e-6;

bool is_minkowski_isometry(const RealMatrix& m, double eps = kGeomEps);
bool is_minkowski_isometry(const FieldMatrix& m);

bool is_identity(const RealMatrix& m, double eps = kGeomEps);
bool is_identity(const FieldMatrix& m);

std::optional<int> element_order(const RealMatrix& m, int cap, double eps = kGeomEps);
std::optional<int> element_order(const FieldMatrix& m, int cap);

// Dedup key for group enumeration.
using RealKey = std::array<std::int64_t, 16>;
using FieldKey = std::array<std::uint16_t, 16>;
RealKey quantize(const RealMatrix& m, double step = kQuantum);
FieldKey field_key(const FieldMatrix& m);

struct KeyHash {
  template <class K>
  std::size_t operator()(const K& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

template <class M>
struct GroupKeyOf;
template <>
struct GroupKeyOf<RealMatrix> {
  using type = RealKey;
  static RealKey key(const RealMatrix& m) { return quantize(m); }
};
template <>
struct GroupKeyOf<FieldMatrix> {
  using type = FieldKey;
  static FieldKey key(const FieldMatrix& m) { return field_key(m); }
};

// Breadth-first closure of a finitely generated matrix group. Elements are
// stored in discovery order; words[i] is the shortlex-least generator word
// whose left-to-right product equals elements[i].
template <class M>
class GroupEnumeration {
 public:
  using Key = typename GroupKeyOf<M>::type;

  std::vector<M> elements;
  std::vector<std::vector<int>> words;
  std::vector<M> generators;

  std::size_t size() const { return elements.size(); }
  std::optional<std::size_t> find(const M& m) const {
    auto it = index_.find(GroupKeyOf<M>::key(m));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const M& m) const {
    auto i = find(m);
    if (!i) throw Error("element not in enumerated group");
    return *i;
  }
  // Right multiplication table by generator g, computed lazily.
  std::size_t times_generator(std::size_t i, int g) const { return index_of(elements[i] * generators[g]); }

  void insert(const M& m, std::vector<int> word) {
    index_.emplace(GroupKeyOf<M>::key(m), elements.size());
    elements.push_back(m);
    words.push_back(std::move(word));
  }

 private:
  std::unordered_map<Key, std::size_t, KeyHash> index_;
};

template <class M>
GroupEnumeration<M> generate_group(const std::vector<M>& gens, std::size_t cap = 1000000) {
  if (gens.empty()) throw Error("generate_group needs at least one generator");
  GroupEnumeration<M> g;
  g.generators = gens;
  g.insert(gens[0].identity_like(), {});
  for (std::size_t head = 0; head < g.elements.size(); ++head) {
    for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
      M next = g.elements[head] * gens[k];
      if (g.find(next)) continue;
      if (g.elements.size() >= cap) throw CapExceeded("group larger than " + std::to_string(cap));
      std::vector<int> w = g.words[head];
      w.push_back(k);
      g.insert(next, std::move(w));
    }
  }
  return g;
}

template <class M>
M word_product(const std::vector<M>& gens, const std::vector<int>& word) {
  M m = gens.at(0).identity_like();
  for (int k : word) m = m * gens.at(k);
  return m;
}

std::string to_string(const RealMatrix& m);
std::string to_string(const FieldMatrix& m);

}  // namespace honeycomb
