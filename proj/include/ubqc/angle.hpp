#pragma once

#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>

namespace ubqc {

// An angle on the pi/4 lattice, stored as a count of eighths of 2*pi
// (i.e. value = eighths * pi/4). All protocol angles -- theta, theta~,
// phi, phi', delta and the Z-pad keys -- live on this lattice, so angle
// arithmetic is exact integer arithmetic mod 8.
class Angle {
  public:
    constexpr Angle() : eighths_(0) {}
    constexpr explicit Angle(int eighths) : eighths_(norm(eighths)) {}

    constexpr int eighths() const { return eighths_; }

    static constexpr Angle pi() { return Angle(4); }

    constexpr Angle operator+(Angle o) const { return Angle(eighths_ + o.eighths_); }
    constexpr Angle operator-(Angle o) const { return Angle(eighths_ - o.eighths_); }
    constexpr Angle operator-() const { return Angle(-eighths_); }

    constexpr Angle& operator+=(Angle o) { eighths_ = norm(eighths_ + o.eighths_); return *this; }

    // (-1)^bit * angle
    constexpr Angle signed_by(int bit) const { return bit ? -*this : *this; }
    // angle + bit * pi
    constexpr Angle plus_pi_if(int bit) const { return Angle(eighths_ + 4 * bit); }

    double radians() const { return eighths_ * (M_PI / 4.0); }
    std::complex<double> phase() const { return std::polar(1.0, radians()); }

    constexpr auto operator<=>(const Angle&) const = default;

  private:
    static constexpr int norm(int e) { return ((e % 8) + 8) % 8; }
    int eighths_;
};

} // namespace ubqc
