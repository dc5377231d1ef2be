#include "keq/finite_field.hpp"

#include <cstdint>

#include "keq/caps.hpp"
#include "keq/error.hpp"

namespace keq {

namespace {

using Poly = std::vector<std::uint32_t>;  // coefficients, constant term first

Poly decode(std::uint32_t v, std::uint32_t p, std::uint32_t len) {
  Poly out(len, 0);
  for (std::uint32_t i = 0; i < len && v; ++i) {
    out[i] = v % p;
    v /= p;
  }
  return out;
}

std::uint32_t encode(const Poly& c, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
  return v;
}

std::size_t poly_deg(const Poly& a) {
  std::size_t d = a.size();
  while (d > 0 && a[d - 1] == 0) --d;
  return d == 0 ? 0 : d - 1;  // degree of zero polynomial treated as 0
}

bool poly_is_zero(const Poly& a) {
  for (auto c : a)
    if (c) return false;
  return true;
}

// a mod b over GF(p); b must be nonzero.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  std::size_t db = poly_deg(b);
  std::uint32_t lead_inv = 1;
  {  // inverse of b's leading coefficient mod p (p prime, small)
    std::uint32_t lead = b[db];
    for (std::uint32_t x = 1; x < p; ++x)
      if (lead * x % p == 1) { lead_inv = x; break; }
  }
  while (!poly_is_zero(a) && poly_deg(a) >= db) {
    std::size_t da = poly_deg(a);
    std::uint32_t factor = a[da] * lead_inv % p;
    std::size_t shift = da - db;
    for (std::size_t i = 0; i <= db; ++i) {
      std::uint64_t sub = static_cast<std::uint64_t>(factor) * b[i] % p;
      a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - sub) % p);
    }
  }
  return a;
}

// Irreducibility over GF(p) by trial division with every monic polynomial of
// degree 1..deg/2. Candidate degrees here are <= 12, so the divisor pool is
// tiny.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  std::size_t deg = poly_deg(f);
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t v = 0; v < count; ++v) {
      Poly div = decode(static_cast<std::uint32_t>(v), p, static_cast<std::uint32_t>(d));
      div.push_back(1);  // monic of degree d
      if (poly_is_zero(poly_mod(f, div, p))) return false;
    }
  }
  return true;
}

}  // namespace

FiniteField::FiniteField(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
  q_ = 1;
  for (std::uint32_t i = 0; i < k_; ++i) q_ *= p_;
}

FiniteField FiniteField::make(std::uint32_t q) {
  if (q < 2 || q > kMaxAlphabet) throw Error("make_field: order out of range [2, 4096]");
  // factor q as p^k
  std::uint32_t p = 0;
  std::uint32_t rest = q;
  for (std::uint32_t f = 2; f * f <= rest; ++f) {
    if (rest % f == 0) {
      p = f;
      while (rest % f == 0) rest /= f;
      break;
    }
  }
  if (p == 0) p = rest, rest = 1;
  if (rest != 1) throw Error("make_field: not a prime power");
  std::uint32_t k = 0;
  for (std::uint32_t v = q; v > 1; v /= p) ++k;

  if (k == 1) return FiniteField(p, 1, {});

  // Lexicographically least monic irreducible of degree k: scan candidates by
  // the integer encoding of their non-leading coefficients.
  std::uint64_t limit = 1;
  for (std::uint32_t i = 0; i < k; ++i) limit *= p;
  for (std::uint64_t v = 0; v < limit; ++v) {
    Poly f = decode(static_cast<std::uint32_t>(v), p, k);
    f.push_back(1);
    if (is_irreducible(f, p)) {
      f.pop_back();
      return FiniteField(p, k, std::move(f));
    }
  }
  throw Error("make_field: no irreducible modulus found");  // unreachable
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) return (a + b) % p_;
  std::uint32_t out = 0;
  std::uint32_t scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    out += (a % p_ + b % p_) % p_ * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const {
  if (k_ == 1) return (p_ - a % p_) % p_;
  std::uint32_t out = 0;
  std::uint32_t scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    out += (p_ - a % p_) % p_ * scale;
    a /= p_;
    scale *= p_;
  }
  return out;
}

std::uint32_t FiniteField::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  Poly pa = decode(a, p_, k_);
  Poly pb = decode(b, p_, k_);
  // schoolbook product, then reduce with x^k = -modulus(x)
  std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (!pa[i]) continue;
    for (std::uint32_t j = 0; j < k_; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] +
          static_cast<std::uint64_t>(pa[i]) * pb[j]) % p_);
  }
  for (std::size_t i = prod.size(); i-- > k_;) {
    std::uint32_t c = prod[i];
    if (!c) continue;
    prod[i] = 0;
    for (std::uint32_t j = 0; j < k_; ++j) {
      std::uint64_t sub_ = static_cast<std::uint64_t>(c) * modulus_[j] % p_;
      prod[i - k_ + j] = static_cast<std::uint32_t>((prod[i - k_ + j] + p_ - sub_) % p_);
    }
  }
  prod.resize(k_);
  return encode(prod, p_);
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1;
  std::uint32_t b = a;
  while (e) {
    if (e & 1u) r = mul(r, b);
    e >>= 1u;
    if (e) b = mul(b, b);
  }
  return r;
}

std::uint32_t FiniteField::inv(std::uint32_t a) const {
  if (a == 0) throw Error("field inverse of zero");
  return pow(a, q_ - 2);
}

Permutation affine_permutation(const FiniteField& f, std::uint32_t a, std::uint32_t b) {
  if (a >= f.order() || b >= f.order()) throw Error("affine_permutation: coefficient out of range");
  if (a == 0) throw Error("affine_permutation: not invertible");
  std::vector<Symbol> img(f.order());
  for (std::uint32_t x = 0; x < f.order(); ++x) img[x] = f.add(f.mul(a, x), b);
  return Permutation(std::move(img));
}

}  // namespace keq
