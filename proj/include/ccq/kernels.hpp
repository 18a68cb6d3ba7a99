#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ccq/ff.hpp"
#include "ccq/matrix.hpp"

namespace ccq {

/// Min-plus entries travel as words holding the two's-complement bits of an
/// int64; the maximum int64 is infinity.
inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
inline Word mp_encode(std::int64_t v) noexcept { return std::bit_cast<Word>(v); }
inline std::int64_t mp_decode(Word w) noexcept { return std::bit_cast<std::int64_t>(w); }
inline const Word kInfWord = std::bit_cast<Word>(kInf);

// Node-local dense kernels. The default versions split rows across OpenMP
// threads; serial:: keeps the reference loops they are tested against.

FieldMatrix matmul_mod(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);
/// a, b hold mp_encode'd values.
Matrix<Word> minplus(const Matrix<Word>& a, const Matrix<Word>& b);

namespace serial {
FieldMatrix matmul_mod(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b);
Matrix<Word> minplus(const Matrix<Word>& a, const Matrix<Word>& b);
}  // namespace serial

/// Commutative semiring over the field, as used by the distributed product.
struct FieldRing {
  PrimeField field;

  [[nodiscard]] Word zero() const noexcept { return 0; }
  [[nodiscard]] Word add(Word a, Word b) const noexcept { return field.add(a, b); }
  [[nodiscard]] Word scale(std::int64_t coef, Word x) const noexcept {
    return coef == 1 ? x : field.mul(field.from_int(coef), x);
  }
  [[nodiscard]] Matrix<Word> product(const Matrix<Word>& a, const Matrix<Word>& b) const { return matmul_mod(field, a, b); }
  [[nodiscard]] bool supports_negative_coefficients() const noexcept { return true; }
};

/// (min, +) over int64 with infinity. Only 0/1 coefficients make sense here,
/// so only the trivial bilinear algorithm is accepted.
struct MinPlusRing {
  [[nodiscard]] Word zero() const noexcept { return kInfWord; }
  [[nodiscard]] Word add(Word a, Word b) const noexcept { return mp_decode(a) <= mp_decode(b) ? a : b; }
  [[nodiscard]] Word scale(std::int64_t coef, Word x) const {
    if (coef != 1) throw std::invalid_argument("min-plus semiring only admits unit coefficients");
    return x;
  }
  [[nodiscard]] Matrix<Word> product(const Matrix<Word>& a, const Matrix<Word>& b) const { return minplus(a, b); }
  [[nodiscard]] bool supports_negative_coefficients() const noexcept { return false; }
};

}  // namespace ccq
