#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aengine/numeric.hpp"

namespace aengine {

/// Index/sign conventions for Bernoulli numbers.
///
/// ModernEven is the canonical table (B1 = -1/2). SumOfPowers differs only at
/// index 1 (B1 = +1/2). LovelaceOdd names the nonzero even-index values by odd
/// indices: B^L_{2k-1} = B_{2k}.
enum class BernoulliConvention { ModernEven, SumOfPowers, LovelaceOdd };

struct InvalidIndex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ArityMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonIntegerResult : std::logic_error {
  using std::logic_error::logic_error;
};

/// Truncated exponential generating function x/(e^x - 1) = sum c_m x^m,
/// with c_m = B_m / m!.
struct EgfSeries {
  std::uint32_t order = 0;
  std::vector<Rational> coefficients;  // c_0 .. c_order
};

/// One term of the alternating sum inside De Morgan's direct formula, kept
/// unreduced as printed: sign * numerator / denominator with
/// numerator = Δ^k 0^n and denominator = 2^(k+1).
struct DeMorganTerm {
  std::uint32_t k = 0;
  int sign = 1;
  BigInt numerator;
  BigInt denominator;

  Rational value() const { return Rational(sign < 0 ? BigInt(-numerator) : numerator, denominator); }
};

/// B_m under ModernEven, from sum_{j=0..m} C(m+1, j) B_j = 0. Memoized and
/// safe to call concurrently.
Rational bernoulli_modern(std::uint32_t m);

Rational bernoulli(BernoulliConvention conv, std::int64_t index);

/// Maps a convention-specific index to the modern index holding its
/// magnitude. Throws InvalidIndex.
std::uint32_t modern_index(BernoulliConvention conv, std::int64_t index);

/// Solves the general-form recurrence for B^L_{2n-1} given
/// prev = [B^L_1, B^L_3, ..., B^L_{2n-3}].
///
/// The coefficient of B^L_{2k-1} is the falling product 2n(2n-1)...(2n-2k+2)
/// over (2k)!; each coefficient extends the previous one by two factors.
Rational eq8_next(std::span<const Rational> prev, std::uint32_t n);

/// [B^L_1, B^L_3, ..., B^L_{2 n_max - 1}].
std::vector<Rational> eq8_sequence(std::uint32_t n_max);

/// Δ^k 0^n = sum_{j=0..k} (-1)^(k-j) C(k, j) j^n.
BigInt finite_diff_zero(std::uint32_t k, std::uint32_t n);

/// Terms k = 0..n of sum (-1)^k Δ^k 0^n / 2^(k+1). Zero terms are included.
std::vector<DeMorganTerm> demorgan_terms(std::uint32_t n);

/// B_{n+1} = -(n+1)/(2^(n+1) - 1) * sum_k (-1)^k Δ^k 0^n / 2^(k+1).
Rational demorgan_bernoulli(std::uint32_t n);

EgfSeries egf_coefficients(std::uint32_t order);

/// sum_{k=1..x} k^p by Faulhaber's formula with SumOfPowers numbers.
/// Throws NonIntegerResult if the rational result is not integral.
BigInt faulhaber_sum(std::uint32_t p, std::uint64_t x);

}  // namespace aengine
