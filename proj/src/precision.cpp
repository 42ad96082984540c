#include "mpsylv/precision.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "mpsylv/matrix.hpp"

namespace mpsylv {

std::string FpFormat::name() const {
  if (*this == formats::bfloat16) return "bfloat16";
  if (*this == formats::binary16) return "binary16";
  if (*this == formats::tf32) return "tf32";
  if (*this == formats::b24) return "b24";
  if (*this == formats::binary32) return "binary32";
  if (*this == formats::binary64) return "binary64";
  return "t" + std::to_string(t_) + "e" + std::to_string(e_);
}

std::optional<FpFormat> parse_format(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  if (key == "bfloat16" || key == "bf16") return formats::bfloat16;
  if (key == "binary16" || key == "fp16" || key == "half") return formats::binary16;
  if (key == "tf32" || key == "tensorfloat-32" || key == "tensorfloat32") return formats::tf32;
  if (key == "b24") return formats::b24;
  if (key == "binary32" || key == "fp32" || key == "single") return formats::binary32;
  if (key == "binary64" || key == "fp64" || key == "double") return formats::binary64;

  // explicit "t,e" or "t:e"
  const auto sep = key.find_first_of(",:");
  if (sep == std::string::npos) return std::nullopt;
  int t = 0;
  int e = 0;
  const char* begin = key.data();
  const char* end = key.data() + key.size();
  auto [p1, ec1] = std::from_chars(begin, begin + sep, t);
  auto [p2, ec2] = std::from_chars(begin + sep + 1, end, e);
  if (ec1 != std::errc() || ec2 != std::errc() || p1 != begin + sep || p2 != end) {
    return std::nullopt;
  }
  if (t < 2 || t > 53 || e < 2 || e > 11) return std::nullopt;
  return FpFormat(t, e);
}

double round_generic(double x, const FpFormat& fmt) {
  if (!std::isfinite(x) || x == 0.0) return x;

  int e2 = 0;
  std::frexp(x, &e2);  // |x| = f * 2^e2, f in [0.5, 1)
  const int exponent = std::max(e2 - 1, fmt.emin());
  const int scale = fmt.significand_bits() - 1 - exponent;
  // x * 2^scale has at most t integer bits; nearbyint rounds ties to even in
  // the default rounding mode.
  double r = std::ldexp(std::nearbyint(std::ldexp(x, scale)), -scale);

  if (std::fabs(r) > fmt.max_finite()) {
    return std::copysign(std::numeric_limits<double>::infinity(), x);
  }
  if (!fmt.supports_subnormals() && std::fabs(r) < fmt.min_normal()) {
    return std::copysign(0.0, x);
  }
  return r;
}

double round_to(double x, const FpFormat& fmt) {
  return PrecisionContext(fmt).round(x);
}

PrecisionContext::PrecisionContext(FpFormat format, FlopCounter* counter, FlopBucket bucket)
    : format_(format), u_(format.unit_roundoff()), counter_(counter), bucket_(bucket) {
  if (format == formats::binary64) {
    kind_ = Kind::identity;
  } else if (format == formats::binary32) {
    kind_ = Kind::binary32;
  } else {
    kind_ = Kind::generic;
  }
}

double PrecisionContext::round_with_tail(double s, double e) const {
  const double r = round(s);
  if (r == s || std::isnan(s)) return r;
  if (std::isinf(r)) {
    // s sits exactly on the overflow threshold and the tail pulls it back
    const double mf = std::copysign(format_.max_finite(), s);
    const double half = std::ldexp(1.0, format_.emax() - format_.significand_bits());
    if (std::abs(s - mf) == half && std::signbit(e) != std::signbit(s)) return mf;
    return r;
  }
  const double d = s - r;
  const double o = s + d;
  if (o - s != d || round(o) != o) return r;  // not a tie
  return (e > 0) == (o > r) ? o : r;
}

Complex PrecisionContext::div(Complex a, Complex b) const {
  const double ar = a.real(), ai = a.imag();
  const double br = b.real(), bi = b.imag();
  if (std::fabs(br) >= std::fabs(bi)) {
    const double r = div(bi, br);
    const double den = add(br, mul(bi, r));
    return {div(add(ar, mul(ai, r)), den), div(sub(ai, mul(ar, r)), den)};
  }
  const double r = div(br, bi);
  const double den = add(bi, mul(br, r));
  return {div(add(mul(ar, r), ai), den), div(sub(mul(ai, r), ar), den)};
}

RoundedMatrix round_matrix(const Matrix& m, const FpFormat& fmt) {
  const PrecisionContext ctx(fmt);
  RoundedMatrix out{Matrix(m.rows(), m.cols()), false};
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Complex z = ctx.round(m.data()[k]);
    if (std::isinf(z.real()) || std::isinf(z.imag())) out.overflow = true;
    out.matrix.data()[k] = z;
  }
  return out;
}

}  // namespace mpsylv
