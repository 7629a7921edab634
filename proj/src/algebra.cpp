#include "honeycomb/algebra.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace honeycomb {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint32_t smallest_nonresidue(std::uint32_t p) {
  for (std::uint32_t s = 2; s < p; ++s) {
    bool square = false;
    for (std::uint32_t x = 1; x < p && !square; ++x) square = (x * x) % p == s;
    if (!square) return s;
  }
  throw Error("no quadratic non-residue mod " + std::to_string(p));
}

}  // namespace

const FiniteField& FiniteField::get(std::uint32_t p, int degree) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<FiniteField>> cache;
  if (!is_prime(p)) throw Error("field characteristic must be prime, got " + std::to_string(p));
  if (degree != 1 && degree != 2) throw Error("only degree 1 or 2 fields are supported");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, degree}];
  if (!slot) slot.reset(new FiniteField(p, degree));
  return *slot;
}

FiniteField::FiniteField(std::uint32_t p, int degree) : p_(p), degree_(degree) {
  n_ = degree == 1 ? p : p * p;
  if (n_ > 1024) throw Error("field too large for table arithmetic: " + std::to_string(n_));
  if (degree == 2) {
    if (p == 2) {
      s_ = 1;
      t_ = 0;
    } else {
      s_ = smallest_nonresidue(p);
      t_ = 0;
    }
  }
  add_.resize(n_ * n_);
  mul_.resize(n_ * n_);
  neg_.resize(n_);
  inv_.assign(n_, 0);
  for (std::uint32_t x = 0; x < n_; ++x) {
    std::uint32_t xa = x % p, xb = x / p;
    neg_[x] = static_cast<std::uint16_t>((p - xa) % p + ((p - xb) % p) * p);
    for (std::uint32_t y = 0; y < n_; ++y) {
      std::uint32_t ya = y % p, yb = y / p;
      add_[x * n_ + y] = static_cast<std::uint16_t>((xa + ya) % p + ((xb + yb) % p) * p);
      // (xa + xb w)(ya + yb w) = xa ya + (xa yb + xb ya) w + xb yb (s + t w)
      std::uint64_t bb = (std::uint64_t)xb * yb % p;
      std::uint64_t ra = ((std::uint64_t)xa * ya + bb * s_) % p;
      std::uint64_t rb = ((std::uint64_t)xa * yb + (std::uint64_t)xb * ya + bb * t_) % p;
      mul_[x * n_ + y] = static_cast<std::uint16_t>(ra + rb * p);
    }
  }
  for (std::uint32_t x = 1; x < n_; ++x)
    for (std::uint32_t y = 1; y < n_; ++y)
      if (mul_[x * n_ + y] == 1) {
        inv_[x] = static_cast<std::uint16_t>(y);
        break;
      }
}

std::uint16_t FiniteField::inv(std::uint16_t x) const {
  if (x == 0) throw DivisionByZero("inverse of zero in " + name());
  if (!inv_[x]) throw DivisionByZero("non-unit " + std::to_string(x) + " in " + name());
  return inv_[x];
}

FieldElement FiniteField::element(std::int64_t a, std::int64_t b) const {
  std::int64_t p = p_;
  a = ((a % p) + p) % p;
  b = ((b % p) + p) % p;
  if (degree_ == 1 && b != 0) throw Error("degree-1 element with nonzero w coordinate");
  return FieldElement(this, static_cast<std::uint16_t>(a + b * p));
}

FieldElement FiniteField::zero() const { return FieldElement(this, 0); }
FieldElement FiniteField::one() const { return FieldElement(this, 1); }
FieldElement FiniteField::from_code(std::uint32_t code) const {
  if (code >= n_) throw Error("field code out of range");
  return FieldElement(this, static_cast<std::uint16_t>(code));
}

std::string FiniteField::name() const { return "F_" + std::to_string(n_); }

const FiniteField& FieldElement::field() const {
  if (!field_) throw Error("uninitialized field element");
  return *field_;
}

const FiniteField* FieldElement::check(const FieldElement& o) const {
  if (!field_ || !o.field_) throw Error("uninitialized field element");
  if (field_ != o.field_) throw FieldMismatch(field_->name() + " vs " + o.field_->name());
  return field_;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  auto f = check(o);
  return FieldElement(f, f->add(code_, o.code_));
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  auto f = check(o);
  return FieldElement(f, f->sub(code_, o.code_));
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  auto f = check(o);
  return FieldElement(f, f->mul(code_, o.code_));
}
FieldElement FieldElement::operator-() const { return FieldElement(field_, field().neg(code_)); }
FieldElement FieldElement::inv() const { return FieldElement(field_, field().inv(code_)); }
bool FieldElement::operator==(const FieldElement& o) const {
  check(o);
  return code_ == o.code_;
}

std::string FieldElement::str() const {
  if (!field_) return "?";
  if (field_->degree() == 1) return std::to_string(a());
  return std::to_string(a()) + "+" + std::to_string(b()) + "w";
}

RealMatrix real_identity() { return RealMatrix::identity(1.0); }
RealMatrix minkowski_form() { return RealMatrix::diagonal({1.0, 1.0, 1.0, -1.0}); }
FieldMatrix field_identity(const FiniteField& field) { return FieldMatrix::identity(field.one()); }
FieldMatrix minkowski_form(const FiniteField& field) {
  auto one = field.one();
  return FieldMatrix::diagonal({one, one, one, -one});
}

double max_abs(const RealMatrix& m) {
  double r = 0;
  for (double x : m.entries()) r = std::max(r, std::fabs(x));
  return r;
}

double max_abs_diff(const RealMatrix& m, const RealMatrix& n) {
  double r = 0;
  for (int i = 0; i < 16; ++i) r = std::max(r, std::fabs(m.entries()[i] - n.entries()[i]));
  return r;
}

bool eq_within(const RealMatrix& m, const RealMatrix& n, double eps) { return max_abs_diff(m, n) <= eps; }

Vec4 act(const RealMatrix& m, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += m(i, j) * v[j];
  return r;
}

double minkowski_dot(const Vec4& x, const Vec4& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]; }

bool vec_eq_within(const Vec4& x, const Vec4& y, double eps) {
  for (int i = 0; i < 4; ++i)
    if (std::fabs(x[i] - y[i]) > eps) return false;
  return true;
}

bool is_minkowski_isometry(const RealMatrix& m, double eps) {
  RealMatrix inv = m.inverse();
  RealMatrix a = minkowski_form();
  return eq_within(inv, a * m.transpose() * a, eps * (1.0 + max_abs(m) * max_abs(m)));
}

bool is_minkowski_isometry(const FieldMatrix& m) {
  FieldMatrix inv = m.inverse();
  FieldMatrix a = minkowski_form(m(0, 0).field());
  return inv == a * m.transpose() * a;
}

bool is_identity(const RealMatrix& m, double eps) { return eq_within(m, real_identity(), eps); }
bool is_identity(const FieldMatrix& m) { return m == m.identity_like(); }

std::optional<int> element_order(const RealMatrix& m, int cap, double eps) {
  RealMatrix x = m;
  for (int k = 1; k <= cap; ++k) {
    if (is_identity(x, eps)) return k;
    x = x * m;
  }
  return std::nullopt;
}

std::optional<int> element_order(const FieldMatrix& m, int cap) {
  FieldMatrix x = m;
  for (int k = 1; k <= cap; ++k) {
    if (is_identity(x)) return k;
    x = x * m;
  }
  return std::nullopt;
}

RealKey quantize(const RealMatrix& m, double step) {
  RealKey k;
  for (int i = 0; i < 16; ++i) k[i] = static_cast<std::int64_t>(std::llround(m.entries()[i] / step));
  return k;
}

FieldKey field_key(const FieldMatrix& m) {
  FieldKey k;
  for (int i = 0; i < 16; ++i) k[i] = m.entries()[i].code();
  return k;
}

std::string to_string(const RealMatrix& m) {
  std::ostringstream os;
  os.precision(6);
  for (int i = 0; i < 4; ++i) {
    os << (i ? "; " : "[");
    for (int j = 0; j < 4; ++j) os << (j ? " " : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

std::string to_string(const FieldMatrix& m) {
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    os << (i ? "; " : "[");
    for (int j = 0; j < 4; ++j) os << (j ? " " : "") << m(i, j).str();
  }
  os << "]";
  return os.str();
}

}  // namespace honeycomb
