#pragma once

// Software simulation of reduced-precision floating-point arithmetic.
//
// All values are stored as native doubles.  "Computing in format f" means
// that the result of every scalar operation is rounded to the nearest value
// representable in f (ties to even), with IEEE-style overflow to infinity and
// gradual underflow.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mpsylv/matrix.hpp"

namespace mpsylv {

using Complex = std::complex<double>;

class FpFormat {
 public:
  constexpr FpFormat(int significand_bits, int exponent_bits,
                     bool supports_subnormals = true)
      : t_(significand_bits), e_(exponent_bits), subnormals_(supports_subnormals) {}

  constexpr int significand_bits() const { return t_; }
  constexpr int exponent_bits() const { return e_; }
  constexpr bool supports_subnormals() const { return subnormals_; }

  constexpr int emax() const { return (1 << (e_ - 1)) - 1; }
  constexpr int emin() const { return 1 - emax(); }

  /// 2^-t.
  double unit_roundoff() const { return std::ldexp(1.0, -t_); }
  /// (2 - 2^(1-t)) * 2^emax.
  double max_finite() const { return std::ldexp(2.0 - std::ldexp(1.0, 1 - t_), emax()); }
  double min_normal() const { return std::ldexp(1.0, emin()); }
  double min_subnormal() const { return std::ldexp(1.0, emin() - t_ + 1); }

  /// Canonical short name for predefined formats, "t<t>e<e>" otherwise.
  std::string name() const;

  friend constexpr bool operator==(const FpFormat&, const FpFormat&) = default;

 private:
  int t_;
  int e_;
  bool subnormals_;
};

namespace formats {
inline constexpr FpFormat bfloat16{8, 8};
inline constexpr FpFormat binary16{11, 5};
inline constexpr FpFormat tf32{11, 8};
// 24-bit custom format: TF32 exponent range with 16 significand bits.
inline constexpr FpFormat b24{16, 8};
inline constexpr FpFormat binary32{24, 8};
inline constexpr FpFormat binary64{53, 11};
}  // namespace formats

/// Looks up "bfloat16", "binary16", "tf32", "b24", "binary32", "binary64"
/// (plus a few aliases) or an explicit "t,e" pair such as "16,8".
std::optional<FpFormat> parse_format(std::string_view text);

/// Round-to-nearest-even into `fmt`, via scaling.  Valid for every format
/// with t <= 53 and emax <= 1023; used directly by tests as the reference
/// path for the fast paths taken by round_to.
double round_generic(double x, const FpFormat& fmt);

/// Nearest value of `fmt`; total function (NaN -> NaN, overflow -> +-inf,
/// below half the smallest subnormal -> signed zero).
double round_to(double x, const FpFormat& fmt);

/// Tally of arithmetic performed by the kernels.  Kernels add their operation
/// counts once per call; one complex operation counts as one flop.
struct FlopCounter {
  std::atomic<std::uint64_t> low{0};
  std::atomic<std::uint64_t> high{0};

  void reset() {
    low = 0;
    high = 0;
  }
};

/// Which tally of a FlopCounter an execution context charges.
enum class FlopBucket { low, high };

/// Immutable arithmetic context: every scalar result is rounded to `format`.
class PrecisionContext {
 public:
  explicit PrecisionContext(FpFormat format, FlopCounter* counter = nullptr,
                            FlopBucket bucket = FlopBucket::high);

  const FpFormat& format() const { return format_; }
  double unit_roundoff() const { return u_; }
  bool is_exact_binary64() const { return kind_ == Kind::identity; }

  /// Same format, different flop accounting.
  PrecisionContext with_counter(FlopCounter* counter, FlopBucket bucket) const {
    return PrecisionContext(format_, counter, bucket);
  }

  double round(double x) const {
    switch (kind_) {
      case Kind::identity:
        return x;
      case Kind::binary32:
        return static_cast<double>(static_cast<float>(x));
      default:
        return round_generic(x, format_);
    }
  }
  Complex round(Complex z) const { return {round(z.real()), round(z.imag())}; }

  /// The exact sum is s + e (two-sum); e only matters when s is a tie.
  double add(double a, double b) const {
    const double s = a + b;
    if (kind_ == Kind::identity) return s;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return e == 0.0 ? round(s) : round_with_tail(s, e);
  }
  double sub(double a, double b) const { return add(a, -b); }
  double mul(double a, double b) const { return round(a * b); }
  double div(double a, double b) const { return round(a / b); }
  double sqrt(double a) const { return round(std::sqrt(a)); }
  /// sqrt(a^2 + b^2) as a single rounded operation.
  double hypot(double a, double b) const { return round(std::hypot(a, b)); }

  Complex add(Complex a, Complex b) const {
    return {add(a.real(), b.real()), add(a.imag(), b.imag())};
  }
  Complex sub(Complex a, Complex b) const {
    return {sub(a.real(), b.real()), sub(a.imag(), b.imag())};
  }
  Complex mul(Complex a, Complex b) const {
    if (kind_ == Kind::identity) {
      return {a.real() * b.real() - a.imag() * b.imag(),
              a.real() * b.imag() + a.imag() * b.real()};
    }
    return {sub(mul(a.real(), b.real()), mul(a.imag(), b.imag())),
            add(mul(a.real(), b.imag()), mul(a.imag(), b.real()))};
  }
  Complex mul(double a, Complex b) const { return {mul(a, b.real()), mul(a, b.imag())}; }
  /// Smith's algorithm.
  Complex div(Complex a, Complex b) const;
  Complex div(Complex a, double b) const { return {div(a.real(), b), div(a.imag(), b)}; }
  double abs(Complex a) const { return hypot(a.real(), a.imag()); }

  /// a + b*c
  Complex fma_like(Complex a, Complex b, Complex c) const { return add(a, mul(b, c)); }

  /// Rounds s + e where |e| is below half an ulp of s in binary64.
  double round_with_tail(double s, double e) const;

  void count(std::uint64_t flops) const {
    if (counter_ == nullptr) return;
    if (bucket_ == FlopBucket::low)
      counter_->low.fetch_add(flops, std::memory_order_relaxed);
    else
      counter_->high.fetch_add(flops, std::memory_order_relaxed);
  }

 private:
  enum class Kind { identity, binary32, generic };

  FpFormat format_;
  double u_;
  Kind kind_;
  FlopCounter* counter_;
  FlopBucket bucket_;
};

struct RoundedMatrix {
  Matrix matrix;
  bool overflow = false;  ///< some entry rounded to +-inf
};

/// Entry of a low-precision region: rounds real and imaginary parts of every
/// entry.  Overflow is reported, not thrown.
RoundedMatrix round_matrix(const Matrix& m, const FpFormat& fmt);

}  // namespace mpsylv
