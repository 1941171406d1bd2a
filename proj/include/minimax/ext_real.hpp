#ifndef MINIMAX_EXT_REAL_HPP
#define MINIMAX_EXT_REAL_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "minimax/errors.hpp"

namespace minimax {

/// Extended real number: a finite double or one of the two infinities.
/// NaN is never representable.
class ExtReal {
public:
  enum class Tag { Finite, PosInf, NegInf };

  constexpr ExtReal() noexcept = default;
  ExtReal(double v) : tag_(Tag::Finite), value_(v) {  // NOLINT: implicit from double is intended
    if (std::isnan(v)) throw ExtRealArithmeticError("NaN is not an extended real");
    if (std::isinf(v)) {
      tag_ = v > 0 ? Tag::PosInf : Tag::NegInf;
      value_ = 0.0;
    }
  }

  static constexpr ExtReal pos_inf() noexcept { return ExtReal(Tag::PosInf); }
  static constexpr ExtReal neg_inf() noexcept { return ExtReal(Tag::NegInf); }

  constexpr Tag tag() const noexcept { return tag_; }
  constexpr bool is_finite() const noexcept { return tag_ == Tag::Finite; }
  constexpr bool is_pos_inf() const noexcept { return tag_ == Tag::PosInf; }
  constexpr bool is_neg_inf() const noexcept { return tag_ == Tag::NegInf; }

  /// Finite value; throws for infinities.
  double value() const {
    if (!is_finite()) throw ExtRealArithmeticError("value() of an infinite extended real");
    return value_;
  }

  /// Value as a double with infinities mapped to +-HUGE_VAL.
  constexpr double to_double() const noexcept {
    switch (tag_) {
      case Tag::PosInf: return std::numeric_limits<double>::infinity();
      case Tag::NegInf: return -std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend constexpr std::strong_ordering operator<=>(const ExtReal& l, const ExtReal& r) noexcept {
    auto rank = [](Tag t) { return t == Tag::NegInf ? 0 : (t == Tag::Finite ? 1 : 2); };
    if (l.tag_ != r.tag_) return rank(l.tag_) <=> rank(r.tag_);
    if (l.tag_ != Tag::Finite) return std::strong_ordering::equal;
    if (l.value_ < r.value_) return std::strong_ordering::less;
    if (l.value_ > r.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend constexpr bool operator==(const ExtReal& l, const ExtReal& r) noexcept {
    return (l <=> r) == std::strong_ordering::equal;
  }

  friend ExtReal operator-(const ExtReal& v) {
    switch (v.tag_) {
      case Tag::PosInf: return neg_inf();
      case Tag::NegInf: return pos_inf();
      default: return ExtReal(-v.value_);
    }
  }

  friend ExtReal operator+(const ExtReal& l, const ExtReal& r) {
    if ((l.is_pos_inf() && r.is_neg_inf()) || (l.is_neg_inf() && r.is_pos_inf()))
      throw ExtRealArithmeticError("(+inf) + (-inf) is undefined");
    if (!l.is_finite()) return l;
    if (!r.is_finite()) return r;
    return ExtReal(l.value_ + r.value_);
  }
  friend ExtReal operator-(const ExtReal& l, const ExtReal& r) { return l + (-r); }

  std::string to_string() const {
    switch (tag_) {
      case Tag::PosInf: return "+inf";
      case Tag::NegInf: return "-inf";
      default: break;
    }
    return fmt::format("{}", value_);
  }

private:
  constexpr explicit ExtReal(Tag t) noexcept : tag_(t) {}

  Tag tag_ = Tag::Finite;
  double value_ = 0.0;
};

}  // namespace minimax

#endif  // MINIMAX_EXT_REAL_HPP
