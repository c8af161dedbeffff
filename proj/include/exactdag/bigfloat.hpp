#pragma once

// Thin RAII value wrapper around an MPFR number. Only the handful of
// operations the evaluator, the magnitude enclosures and the oracles need.

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace exactdag {

using Precision = mpfr_prec_t;

class BigFloat {
public:
  explicit BigFloat(Precision prec = 53) {
    mpfr_init2(value_, clamp(prec));
    mpfr_set_zero(value_, 1);
  }

  BigFloat(double d, Precision prec) {
    mpfr_init2(value_, clamp(prec));
    mpfr_set_d(value_, d, MPFR_RNDN);
  }

  /// Exact conversion: the precision is 53 bits, enough for any double.
  static BigFloat exact(double d) { return BigFloat(d, 53); }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
  }

  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }

  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }

  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  Precision precision() const { return mpfr_get_prec(value_); }

  /// Discards the value.
  void set_precision(Precision prec) { mpfr_set_prec(value_, clamp(prec)); }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  bool is_inf() const { return mpfr_inf_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  /// MPFR exponent: for nonzero finite x, 2^(e-1) <= |x| < 2^e.
  mpfr_exp_t exponent() const { return mpfr_get_exp(value_); }

  /// True iff |x| is an exact power of two.
  bool is_power_of_two() const {
    if (!is_finite() || is_zero()) return false;
    return mpfr_cmp_ui_2exp(value_, 1, exponent() - 1) == 0 ||
           mpfr_cmp_si_2exp(value_, -1, exponent() - 1) == 0;
  }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const {
    return mpfr_get_d(value_, rnd);
  }

  std::string to_string(int digits = 20) const {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), value_);
    std::string out = buf ? buf : "";
    mpfr_free_str(buf);
    return out;
  }

  static Precision clamp(Precision prec) {
    return std::clamp<Precision>(prec, MPFR_PREC_MIN, MPFR_PREC_MAX);
  }

private:
  mpfr_t value_;
};

inline int compare(const BigFloat& a, const BigFloat& b) {
  return mpfr_cmp(a.get(), b.get());
}

inline int compare_abs(const BigFloat& a, const BigFloat& b) {
  return mpfr_cmpabs(a.get(), b.get());
}

/// Upper bound for log2|x| as an integer e with |x| <= 2^e (tight when |x|
/// is a power of two). Undefined for zero; callers check first.
inline long ceil_log2_abs(const BigFloat& x) {
  long e = static_cast<long>(x.exponent());
  return x.is_power_of_two() ? e - 1 : e;
}

/// Lower bound: 2^e <= |x|.
inline long floor_log2_abs(const BigFloat& x) {
  return static_cast<long>(x.exponent()) - 1;
}

/// 2^e as a BigFloat (exact).
inline BigFloat pow2(long e, Precision prec = 32) {
  BigFloat r(prec);
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}

} // namespace exactdag
