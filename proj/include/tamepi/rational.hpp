#ifndef TAMEPI_RATIONAL_HPP_
#define TAMEPI_RATIONAL_HPP_

// Exact rationals, p-adic valuations and the Chinese remainder theorem.

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "error.hpp"

namespace tamepi {

  using BigInt = boost::multiprecision::cpp_int;

  inline BigInt parse_integer(std::string_view s) {
    std::size_t i = 0;
    bool        neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i == s.size()) {
      throw Error("malformed integer \"" + std::string(s) + "\"");
    }
    BigInt v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw Error("malformed integer \"" + std::string(s) + "\"");
      }
      v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  }

  inline std::string to_string(BigInt const& n) {
    return n.str();
  }

  // Numerator and denominator are kept coprime with a positive denominator.
  class Rational {
   public:
    Rational() = default;
    Rational(long long n) : num_(n) {}  // NOLINT(runtime/explicit)
    Rational(BigInt n) : num_(std::move(n)) {}  // NOLINT(runtime/explicit)
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
      if (den_ == 0) {
        throw Error("rational with zero denominator");
      }
      normalize();
    }

    BigInt const& numerator() const noexcept {
      return num_;
    }
    BigInt const& denominator() const noexcept {
      return den_;
    }
    bool is_zero() const noexcept {
      return num_ == 0;
    }
    bool is_integer() const noexcept {
      return den_ == 1;
    }

    Rational operator-() const {
      Rational r = *this;
      r.num_     = -r.num_;
      return r;
    }
    Rational inverse() const {
      if (is_zero()) {
        throw Error("inverse of zero");
      }
      return Rational(den_, num_);
    }

    friend Rational operator+(Rational const& a, Rational const& b) {
      return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(Rational const& a, Rational const& b) {
      return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(Rational const& a, Rational const& b) {
      return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(Rational const& a, Rational const& b) {
      if (b.is_zero()) {
        throw Error("division by zero");
      }
      return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(Rational const& b) {
      return *this = *this + b;
    }
    Rational& operator-=(Rational const& b) {
      return *this = *this - b;
    }
    Rational& operator*=(Rational const& b) {
      return *this = *this * b;
    }

    friend bool operator==(Rational const& a, Rational const& b) {
      return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(Rational const& a, Rational const& b) {
      BigInt lhs = a.num_ * b.den_;
      BigInt rhs = b.num_ * a.den_;
      if (lhs < rhs) {
        return std::strong_ordering::less;
      }
      if (lhs > rhs) {
        return std::strong_ordering::greater;
      }
      return std::strong_ordering::equal;
    }

    // "n/d", or "n" when d = 1; the sign sits on the numerator.
    std::string to_string() const {
      if (den_ == 1) {
        return num_.str();
      }
      return num_.str() + "/" + den_.str();
    }

    static Rational parse(std::string_view s) {
      auto slash = s.find('/');
      if (slash == std::string_view::npos) {
        return Rational(parse_integer(s));
      }
      auto den = s.substr(slash + 1);
      if (!den.empty() && (den[0] == '-' || den[0] == '+')) {
        throw Error("malformed rational \"" + std::string(s) + "\"");
      }
      return Rational(parse_integer(s.substr(0, slash)), parse_integer(den));
    }

   private:
    void normalize() {
      if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
      }
      BigInt g = gcd(num_, den_);
      if (g > 1) {
        num_ /= g;
        den_ /= g;
      }
    }

    BigInt num_ = 0;
    BigInt den_ = 1;
  };

  inline std::ostream& operator<<(std::ostream& os, Rational const& q) {
    return os << q.to_string();
  }

  inline bool is_prime(BigInt const& n) {
    if (n < 2) {
      return false;
    }
    for (unsigned d : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
      if (n == d) {
        return true;
      }
      if (n % d == 0) {
        return false;
      }
    }
    return boost::multiprecision::miller_rabin_test(n, 32);
  }

  // A rational prime. Construction checks primality.
  class Prime {
   public:
    explicit Prime(long long p) : value_(p) {
      if (!is_prime(BigInt(p))) {
        throw Error(std::to_string(p) + " is not prime");
      }
    }
    long long value() const noexcept {
      return value_;
    }
    BigInt big() const {
      return BigInt(value_);
    }
    friend auto operator<=>(Prime, Prime) = default;

   private:
    long long value_;
  };

  inline BigInt power(BigInt const& base, unsigned long e) {
    BigInt r = 1;
    BigInt b = base;
    while (e != 0) {
      if (e & 1u) {
        r *= b;
      }
      e >>= 1;
      if (e != 0) {
        b *= b;
      }
    }
    return r;
  }

  inline long valuation(BigInt n, BigInt const& p) {
    if (n == 0) {
      throw Error("valuation of zero is infinite");
    }
    if (n < 0) {
      n = -n;
    }
    long v = 0;
    while (n % p == 0) {
      n /= p;
      ++v;
    }
    return v;
  }

  // Exponent of p in q; negative when p divides the denominator.
  inline long valuation(Rational const& q, Prime p) {
    if (q.is_zero()) {
      throw Error("valuation of zero is infinite");
    }
    BigInt pb = p.big();
    return valuation(q.numerator(), pb) - valuation(q.denominator(), pb);
  }

  inline long valuation(Rational const& q, long long p) {
    return valuation(q, Prime(p));
  }

  struct Congruence {
    BigInt residue;
    BigInt modulus;
  };

  namespace detail {
    // Returns x with a*x = 1 mod m; requires gcd(a, m) = 1.
    inline BigInt mod_inverse(BigInt a, BigInt const& m) {
      BigInt old_r = ((a % m) + m) % m, r = m;
      BigInt old_s = 1, s = 0;
      while (r != 0) {
        BigInt q   = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r      = r;
        r          = tmp;
        tmp        = old_s - q * s;
        old_s      = s;
        s          = tmp;
      }
      return ((old_s % m) + m) % m;
    }
  }  // namespace detail

  // Unique x in [0, prod moduli) with x = residue mod modulus for each pair.
  inline BigInt crt(std::span<Congruence const> pairs) {
    if (pairs.empty()) {
      throw Error("crt needs at least one congruence");
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].modulus <= 0) {
        throw Error("crt modulus must be positive, got " + pairs[i].modulus.str());
      }
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        if (gcd(pairs[i].modulus, pairs[j].modulus) != 1) {
          throw Error("crt moduli " + pairs[i].modulus.str() + " (entry "
                      + std::to_string(i + 1) + ") and " + pairs[j].modulus.str()
                      + " (entry " + std::to_string(j + 1) + ") are not coprime");
        }
      }
    }
    BigInt x = ((pairs[0].residue % pairs[0].modulus) + pairs[0].modulus)
               % pairs[0].modulus;
    BigInt m = pairs[0].modulus;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      BigInt const& mi = pairs[i].modulus;
      BigInt        ri = ((pairs[i].residue % mi) + mi) % mi;
      BigInt        t  = (((ri - x) % mi) + mi) % mi;
      t                = (t * detail::mod_inverse(m, mi)) % mi;
      x += m * t;
      m *= mi;
    }
    return x;
  }

  inline BigInt crt(std::vector<Congruence> const& pairs) {
    return crt(std::span<Congruence const>(pairs));
  }

}  // namespace tamepi

#endif  // TAMEPI_RATIONAL_HPP_
