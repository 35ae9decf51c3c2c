#include "aengine/bernoulli.hpp"

#include <mutex>

namespace aengine {

namespace {

class ModernTable {
 public:
  Rational get(std::uint32_t m) {
    std::lock_guard lock(mutex_);
    while (values_.size() <= m) extend();
    return values_[m];
  }

 private:
  void extend() {
    const auto m = static_cast<std::uint32_t>(values_.size());
    if (m == 0) {
      values_.emplace_back(1);
      return;
    }
    // C(m+1, m) B_m = -sum_{j<m} C(m+1, j) B_j, and C(m+1, m) = m + 1.
    Rational acc;
    for (std::uint32_t j = 0; j < m; ++j) {
      if (values_[j].is_zero()) continue;
      acc += Rational(binomial(m + 1, j)) * values_[j];
    }
    values_.push_back(-acc / Rational(static_cast<long long>(m) + 1));
  }

  std::mutex mutex_;
  std::vector<Rational> values_;
};

ModernTable& modern_table() {
  static ModernTable table;
  return table;
}

}  // namespace

Rational bernoulli_modern(std::uint32_t m) { return modern_table().get(m); }

std::uint32_t modern_index(BernoulliConvention conv, std::int64_t index) {
  if (index < 0) throw InvalidIndex("Bernoulli index must be nonnegative");
  switch (conv) {
    case BernoulliConvention::ModernEven:
    case BernoulliConvention::SumOfPowers:
      return static_cast<std::uint32_t>(index);
    case BernoulliConvention::LovelaceOdd:
      if (index % 2 == 0) {
        throw InvalidIndex("Lovelace convention requires an odd index >= 1, got " +
                           std::to_string(index));
      }
      return static_cast<std::uint32_t>(index + 1);
  }
  throw InvalidIndex("unknown convention");
}

Rational bernoulli(BernoulliConvention conv, std::int64_t index) {
  const std::uint32_t m = modern_index(conv, index);
  if (conv == BernoulliConvention::SumOfPowers && m == 1) return Rational(1, 2);
  return bernoulli_modern(m);
}

Rational eq8_next(std::span<const Rational> prev, std::uint32_t n) {
  if (n == 0) throw ArityMismatch("eq8_next requires n >= 1");
  if (prev.size() != n - 1) {
    throw ArityMismatch("eq8_next(n=" + std::to_string(n) + ") expects " +
                        std::to_string(n - 1) + " preceding values, got " +
                        std::to_string(prev.size()));
  }
  const long long two_n = 2LL * n;
  Rational sum = Rational(-1, 2) * Rational(two_n - 1, two_n + 1);

  Rational coeff(two_n, 2);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    if (i > 0) {
      // A_{2k+1} = A_{2k-1} (2n-2k+1)(2n-2k) / ((2k+1)(2k+2)), k = i.
      const long long k = static_cast<long long>(i);
      coeff *= Rational((two_n - 2 * k + 1) * (two_n - 2 * k), (2 * k + 1) * (2 * k + 2));
    }
    sum += prev[i] * coeff;
  }
  // The last term enters with coefficient 1.
  return -sum;
}

std::vector<Rational> eq8_sequence(std::uint32_t n_max) {
  std::vector<Rational> out;
  out.reserve(n_max);
  for (std::uint32_t n = 1; n <= n_max; ++n) out.push_back(eq8_next(out, n));
  return out;
}

BigInt finite_diff_zero(std::uint32_t k, std::uint32_t n) {
  BigInt sum = 0;
  for (std::uint32_t j = 0; j <= k; ++j) {
    BigInt term = binomial(k, j) * ipow(BigInt(j), n);
    if ((k - j) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

std::vector<DeMorganTerm> demorgan_terms(std::uint32_t n) {
  std::vector<DeMorganTerm> terms;
  terms.reserve(n + 1);
  BigInt denominator = 2;
  for (std::uint32_t k = 0; k <= n; ++k) {
    terms.push_back({k, k % 2 == 0 ? 1 : -1, finite_diff_zero(k, n), denominator});
    denominator *= 2;
  }
  return terms;
}

Rational demorgan_bernoulli(std::uint32_t n) {
  if (n == 0) throw InvalidIndex("demorgan_bernoulli requires n >= 1");
  Rational brace;
  for (const auto& term : demorgan_terms(n)) brace += term.value();
  const BigInt two_pow = ipow(BigInt(2), n + 1);
  return Rational(BigInt(-(static_cast<long long>(n) + 1)), two_pow - 1) * brace;
}

EgfSeries egf_coefficients(std::uint32_t order) {
  // Reciprocal of (e^x - 1)/x = sum_{m>=0} x^m / (m+1)!.
  std::vector<Rational> divisor;
  divisor.reserve(order + 1);
  BigInt fact = 1;
  for (std::uint32_t m = 0; m <= order; ++m) {
    fact *= m + 1;
    divisor.emplace_back(BigInt(1), fact);
  }

  EgfSeries series;
  series.order = order;
  series.coefficients.reserve(order + 1);
  series.coefficients.emplace_back(1);
  for (std::uint32_t m = 1; m <= order; ++m) {
    Rational acc;
    for (std::uint32_t j = 1; j <= m; ++j) acc += divisor[j] * series.coefficients[m - j];
    series.coefficients.push_back(-acc);
  }
  return series;
}

BigInt faulhaber_sum(std::uint32_t p, std::uint64_t x) {
  const BigInt bx = x;
  Rational sum;
  for (std::uint32_t j = 0; j <= p; ++j) {
    const Rational b = bernoulli(BernoulliConvention::SumOfPowers, j);
    if (b.is_zero()) continue;
    sum += Rational(binomial(p + 1, j)) * b * Rational(ipow(bx, p + 1 - j));
  }
  sum /= Rational(static_cast<long long>(p) + 1);
  if (!sum.is_integer()) {
    throw NonIntegerResult("Faulhaber sum for p=" + std::to_string(p) + ", x=" +
                           std::to_string(x) + " is not an integer: " + sum.str());
  }
  return sum.numerator();
}

}  // namespace aengine
