#include "locint/weight.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "locint/error.hpp"

namespace locint {

Weight Weight::rational(Rational r) {
  if (r < 0) throw Error(ErrorKind::SchemaViolation, "negative measure value");
  Weight w;
  w.mode_ = Mode::Rational;
  w.rat_ = r;
  return w;
}

Weight Weight::real(double v) {
  if (v < 0.0 || std::isnan(v))
    throw Error(ErrorKind::SchemaViolation, "negative or NaN measure value");
  Weight w;
  w.mode_ = Mode::Float;
  if (std::isinf(v)) {
    w.infinite_ = true;
  } else {
    w.flt_ = v;
  }
  return w;
}

Weight Weight::infinity(Mode mode) {
  Weight w;
  w.mode_ = mode;
  w.infinite_ = true;
  return w;
}

Weight Weight::zero(Mode mode) {
  Weight w;
  w.mode_ = mode;
  return w;
}

Weight Weight::parse(const std::string& text, Mode mode) {
  if (text == "inf") return infinity(mode);
  if (mode == Mode::Float) {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size())
      throw Error(ErrorKind::ParseError, "bad weight literal '" + text + "'");
    return real(v);
  }
  // Rational mode: integer part, optional fractional digits, optional "p/q".
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = std::stoll(text.substr(slash + 1));
    if (den <= 0) throw Error(ErrorKind::ParseError, "bad denominator in '" + text + "'");
    return rational(Rational(num, den));
  }
  auto dot = text.find('.');
  std::int64_t integer = 0;
  std::int64_t frac = 0;
  std::int64_t scale = 1;
  try {
    if (dot == std::string::npos) {
      integer = std::stoll(text);
    } else {
      integer = std::stoll(text.substr(0, dot));
      std::string digits = text.substr(dot + 1);
      if (digits.empty()) throw std::invalid_argument("empty fraction");
      frac = std::stoll(digits);
      for (std::size_t i = 0; i < digits.size(); ++i) scale *= 10;
    }
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad weight literal '" + text + "'");
  }
  if (integer < 0 || frac < 0)
    throw Error(ErrorKind::SchemaViolation, "negative measure value '" + text + "'");
  return rational(Rational(integer) + Rational(frac, scale));
}

bool Weight::is_zero() const {
  if (infinite_) return false;
  return mode_ == Mode::Rational ? rat_ == Rational(0) : flt_ == 0.0;
}

double Weight::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  if (mode_ == Mode::Rational)
    return static_cast<double>(rat_.numerator()) / static_cast<double>(rat_.denominator());
  return flt_;
}

std::string Weight::to_string() const {
  if (infinite_) return "inf";
  if (mode_ == Mode::Rational) {
    std::ostringstream os;
    os << rat_.numerator();
    if (rat_.denominator() != 1) os << "/" << rat_.denominator();
    return os.str();
  }
  std::ostringstream os;
  os.precision(17);
  os << flt_;
  return os.str();
}

Weight Weight::operator+(const Weight& other) const {
  assert(mode_ == other.mode_);
  if (infinite_ || other.infinite_) return infinity(mode_);
  if (mode_ == Mode::Rational) return rational(rat_ + other.rat_);
  return real(flt_ + other.flt_);
}

bool Weight::operator==(const Weight& other) const {
  if (mode_ != other.mode_) return false;
  if (infinite_ || other.infinite_) return infinite_ == other.infinite_;
  return mode_ == Mode::Rational ? rat_ == other.rat_ : flt_ == other.flt_;
}

bool Weight::operator<=(const Weight& other) const {
  assert(mode_ == other.mode_);
  if (other.infinite_) return true;
  if (infinite_) return false;
  return mode_ == Mode::Rational ? rat_ <= other.rat_ : flt_ <= other.flt_;
}

bool Weight::approx_equals(const Weight& other, double tol) const {
  if (mode_ == Mode::Rational || other.mode_ == Mode::Rational) return *this == other;
  if (infinite_ || other.infinite_) return infinite_ == other.infinite_;
  return std::abs(flt_ - other.flt_) <= tol;
}

}  // namespace locint
