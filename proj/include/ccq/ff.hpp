#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ccq {

using Word = std::uint64_t;

/// Deterministic for all 64-bit inputs.
bool is_prime(Word n);

/// Arithmetic modulo a word-sized prime. Values are plain words in [0, p).
class PrimeField {
 public:
  explicit PrimeField(Word p);

  [[nodiscard]] Word p() const noexcept { return p_; }

  [[nodiscard]] Word add(Word a, Word b) const noexcept {
    Word s = a + b;
    return (s >= p_ || s < a) ? s - p_ : s;
  }
  [[nodiscard]] Word sub(Word a, Word b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  [[nodiscard]] Word neg(Word a) const noexcept { return a == 0 ? 0 : p_ - a; }
  [[nodiscard]] Word mul(Word a, Word b) const noexcept {
    return static_cast<Word>(static_cast<unsigned __int128>(a) * b % p_);
  }
  [[nodiscard]] Word pow(Word a, std::uint64_t e) const noexcept;
  /// Throws std::domain_error on zero.
  [[nodiscard]] Word inv(Word a) const;
  [[nodiscard]] Word div(Word a, Word b) const { return mul(a, inv(b)); }

  [[nodiscard]] Word from_int(std::int64_t v) const noexcept;
  /// Representative in (-p/2, p/2].
  [[nodiscard]] std::int64_t to_signed(Word a) const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  Word p_;
};

/// Value bound to its field, for code that prefers operator syntax.
class FieldElement {
 public:
  FieldElement(const PrimeField& f, Word v) : f_(f), v_(v % f.p()) {}

  [[nodiscard]] Word value() const noexcept { return v_; }
  [[nodiscard]] const PrimeField& field() const noexcept { return f_; }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return {a.f_, a.f_.add(a.v_, a.check(b))}; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return {a.f_, a.f_.sub(a.v_, a.check(b))}; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return {a.f_, a.f_.mul(a.v_, a.check(b))}; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return {a.f_, a.f_.div(a.v_, a.check(b))}; }
  FieldElement operator-() const { return {f_, f_.neg(v_)}; }
  [[nodiscard]] FieldElement inverse() const { return {f_, f_.inv(v_)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.v_ == b.v_ && a.f_ == b.f_; }

 private:
  Word check(const FieldElement& o) const;

  PrimeField f_;
  Word v_;
};

/// Coefficients lowest degree first; trailing zeros are always stripped so
/// the zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial(const PrimeField& f, std::vector<Word> coeffs);
  static Polynomial constant(const PrimeField& f, Word c) { return Polynomial(f, {c}); }

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
  [[nodiscard]] Word coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  [[nodiscard]] const std::vector<Word>& coeffs() const noexcept { return c_; }
  [[nodiscard]] const PrimeField& field() const noexcept { return f_; }

  [[nodiscard]] Word eval(Word x) const noexcept;
  [[nodiscard]] Polynomial operator*(const Polynomial& o) const;
  [[nodiscard]] Polynomial operator+(const Polynomial& o) const;
  [[nodiscard]] Polynomial operator-(const Polynomial& o) const;
  /// Quotient and remainder; throws std::domain_error on a zero divisor.
  [[nodiscard]] std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_ && a.f_ == b.f_; }

  [[nodiscard]] std::string to_string() const;

 private:
  void normalize();

  PrimeField f_;
  std::vector<Word> c_;
};

/// Least prime p >= lower_bound with p = 1 (mod 2N). Throws std::overflow_error
/// if the search would leave the word range.
Word least_prime_congruent(Word N, Word lower_bound);

/// Least prime p >= lower_bound.
Word least_prime_at_least(Word lower_bound);

/// A primitive root of unity of the given order. Throws std::invalid_argument
/// when order does not divide p - 1.
Word primitive_root_of_unity(const PrimeField& f, Word order);

/// Naive transform out[j] = sum_i v[i] * root^(i*j); v.size() must equal order.
std::vector<Word> dft(const PrimeField& f, std::span<const Word> v, Word root, Word order);
std::vector<Word> idft(const PrimeField& f, std::span<const Word> v, Word root, Word order);

/// Berlekamp-Massey. Returns the monic minimal generator x^e + ... + g_0 of the
/// sequence, i.e. sum_j g_j seq[i+j] = 0 for every window that fits.
Polynomial generating_polynomial(const PrimeField& f, std::span<const Word> seq);

}  // namespace ccq
