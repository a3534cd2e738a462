#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace locint {

using Rational = boost::rational<std::int64_t>;

/// Nonnegative measure value: an exact rational, a 64-bit float, or +infinity.
/// Scenarios declare one arithmetic mode; mixing modes in arithmetic is a
/// programming error and asserts.
class Weight {
 public:
  enum class Mode { Rational, Float };

  Weight() : mode_(Mode::Rational), rat_(0), flt_(0.0), infinite_(false) {}

  static Weight rational(Rational r);
  static Weight real(double v);
  static Weight infinity(Mode mode);
  static Weight zero(Mode mode);

  /// Parses "inf" or a decimal string like "2", "0.5", "-1" (rejected: negative).
  /// In rational mode the decimal expansion is taken exactly (d digits -> n/10^d).
  static Weight parse(const std::string& text, Mode mode);

  Mode mode() const { return mode_; }
  bool is_infinite() const { return infinite_; }
  bool is_zero() const;
  Rational rat() const { return rat_; }
  double to_double() const;
  std::string to_string() const;

  Weight operator+(const Weight& other) const;
  bool operator==(const Weight& other) const;
  bool operator!=(const Weight& other) const { return !(*this == other); }
  bool operator<=(const Weight& other) const;

  /// Equality up to tolerance in float mode; exact in rational mode.
  bool approx_equals(const Weight& other, double tol) const;

 private:
  Mode mode_;
  Rational rat_;
  double flt_;
  bool infinite_;
};

}  // namespace locint
