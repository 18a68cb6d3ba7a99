#include "ccq/ff.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ccq/errors.hpp"

namespace ccq {

namespace {

Word mulmod(Word a, Word b, Word m) {
  return static_cast<Word>(static_cast<unsigned __int128>(a) * b % m);
}

Word powmod(Word a, Word e, Word m) {
  Word r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::vector<Word> distinct_prime_factors(Word n) {
  std::vector<Word> out;
  for (Word q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(Word n) {
  if (n < 2) return false;
  for (Word q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  Word d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is exact below 3.3e24.
  for (Word a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    Word x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(Word p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

Word PrimeField::pow(Word a, std::uint64_t e) const noexcept { return powmod(a, e, p_); }

Word PrimeField::inv(Word a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

Word PrimeField::from_int(std::int64_t v) const noexcept {
  auto r = static_cast<__int128>(v) % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  return static_cast<Word>(r);
}

std::int64_t PrimeField::to_signed(Word a) const noexcept {
  return a > p_ / 2 ? -static_cast<std::int64_t>(p_ - a) : static_cast<std::int64_t>(a);
}

Word FieldElement::check(const FieldElement& o) const {
  if (!(o.f_ == f_)) throw std::invalid_argument("field mismatch");
  return o.v_;
}

Polynomial::Polynomial(const PrimeField& f, std::vector<Word> coeffs) : f_(f), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= f_.p();
  normalize();
}

void Polynomial::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Word Polynomial::eval(Word x) const noexcept {
  Word r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = f_.add(f_.mul(r, x), *it);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial(f_, {});
  std::vector<Word> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_.add(r[i + j], f_.mul(c_[i], o.c_[j]));
  return Polynomial(f_, std::move(r));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Word> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.add(coeff(i), o.coeff(i));
  return Polynomial(f_, std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Word> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.sub(coeff(i), o.coeff(i));
  return Polynomial(f_, std::move(r));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Word> rem = c_;
  const int dd = d.degree();
  if (degree() < dd) return {Polynomial(f_, {}), *this};
  std::vector<Word> q(static_cast<std::size_t>(degree() - dd + 1), 0);
  const Word lead_inv = f_.inv(d.c_.back());
  for (int i = degree(); i >= dd; --i) {
    const Word c = f_.mul(rem[static_cast<std::size_t>(i)], lead_inv);
    q[static_cast<std::size_t>(i - dd)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j) {
      auto& slot = rem[static_cast<std::size_t>(i - dd + j)];
      slot = f_.sub(slot, f_.mul(c, d.c_[static_cast<std::size_t>(j)]));
    }
  }
  return {Polynomial(f_, std::move(q)), Polynomial(f_, std::move(rem))};
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Word c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c != 1 || i == 0) os << c;
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

Word least_prime_congruent(Word N, Word lower_bound) {
  if (N == 0 || lower_bound < 2) throw std::invalid_argument("least_prime_congruent: N >= 1 and lower_bound >= 2 required");
  const Word step = 2 * N;
  const Word limit = std::numeric_limits<Word>::max() - step;
  // First candidate of the form 1 + j*step that is >= lower_bound.
  Word p = lower_bound <= 1 ? 1 : ((lower_bound - 1 + step - 1) / step) * step + 1;
  for (;;) {
    if (p >= lower_bound && is_prime(p)) return p;
    if (p > limit) throw std::overflow_error("prime search exceeded the word range");
    p += step;
  }
}

Word least_prime_at_least(Word lower_bound) {
  Word p = std::max<Word>(lower_bound, 2);
  while (!is_prime(p)) {
    if (p == std::numeric_limits<Word>::max()) throw std::overflow_error("prime search exceeded the word range");
    ++p;
  }
  return p;
}

Word primitive_root_of_unity(const PrimeField& f, Word order) {
  const Word p = f.p();
  if (order == 0 || (p - 1) % order != 0)
    throw std::invalid_argument("order " + std::to_string(order) + " does not divide p-1");
  if (order == 1) return 1;
  const auto factors = distinct_prime_factors(order);
  const Word cofactor = (p - 1) / order;
  for (Word h = 2; h < p; ++h) {
    const Word w = f.pow(h, cofactor);
    bool ok = true;
    for (Word q : factors) {
      if (f.pow(w, order / q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return w;
  }
  throw std::logic_error("no primitive root found");
}

std::vector<Word> dft(const PrimeField& f, std::span<const Word> v, Word root, Word order) {
  if (v.size() != order) throw dimension_error("dft: length " + std::to_string(v.size()) + " != order " + std::to_string(order));
  std::vector<Word> out(order, 0);
  Word wj = 1;  // root^j
  for (Word j = 0; j < order; ++j) {
    Word acc = 0;
    Word w = 1;  // root^(i*j)
    for (Word i = 0; i < order; ++i) {
      if (v[i]) acc = f.add(acc, f.mul(v[i], w));
      w = f.mul(w, wj);
    }
    out[j] = acc;
    wj = f.mul(wj, root);
  }
  return out;
}

std::vector<Word> idft(const PrimeField& f, std::span<const Word> v, Word root, Word order) {
  auto out = dft(f, v, f.inv(root), order);
  const Word scale = f.inv(order % f.p());
  for (auto& x : out) x = f.mul(x, scale);
  return out;
}

Polynomial generating_polynomial(const PrimeField& f, std::span<const Word> seq) {
  // Connection polynomial C(z) = 1 + c_1 z + ... + c_L z^L with
  // sum_{j=0}^{L} c_j s[i-j] = 0 for i >= L.
  std::vector<Word> C{1}, B{1};
  std::size_t L = 0, m = 1;
  Word b = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Word d = seq[i] % f.p();
    for (std::size_t j = 1; j <= L && j < C.size(); ++j) d = f.add(d, f.mul(C[j], seq[i - j] % f.p()));
    if (d == 0) {
      ++m;
      continue;
    }
    const Word coef = f.div(d, b);
    std::vector<Word> T = C;
    if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
    for (std::size_t j = 0; j < B.size(); ++j) C[j + m] = f.sub(C[j + m], f.mul(coef, B[j]));
    if (2 * L <= i) {
      L = i + 1 - L;
      B = std::move(T);
      b = d;
      m = 1;
    } else {
      ++m;
    }
  }
  C.resize(L + 1, 0);
  // Reverse: g(x) = x^L C(1/x), monic since c_0 = 1.
  std::vector<Word> g(L + 1, 0);
  for (std::size_t j = 0; j <= L; ++j) g[L - j] = C[j];
  return Polynomial(f, std::move(g));
}

}  // namespace ccq
