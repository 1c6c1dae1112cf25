#include "ofem/geometry.hpp"

#include <cmath>
#include <limits>

namespace ofem
{
namespace
{
constexpr double pi = std::numbers::pi;

// Periodic trapezoid rule, doubled until two successive values agree.
template <typename F>
double periodic_integral(F &&f, double period)
{
  int n = 64;
  auto sum = [&](int m) {
    double s = 0.0;
    const double h = period / m;
    for (int i = 0; i < m; ++i)
      s += f(i * h);
    return s * h;
  };
  double prev = sum(n);
  for (int it = 0; it < 12; ++it)
  {
    n *= 2;
    const double cur = sum(n);
    if (std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur)))
      return cur;
    prev = cur;
  }
  return prev;
}
} // namespace

BoundaryCurve BoundaryCurve::unit_circle()
{
  return BoundaryCurve(CurveKind::unit_circle, 1.0, 1.0);
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b)
{
  if (!(a > 0.0) || !(b > 0.0))
    throw Error("ellipse semi-axes must be positive");
  return BoundaryCurve(CurveKind::ellipse, a, b);
}

std::string BoundaryCurve::name() const
{
  if (kind_ == CurveKind::unit_circle)
    return "unit-circle";
  return "ellipse(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
}

Vec2 BoundaryCurve::derivative(double t, int k) const
{
  const double phase = t + 0.5 * pi * (k % 4);
  return Vec2(a_ * std::cos(phase), b_ * std::sin(phase));
}

Vec2 BoundaryCurve::point(double t) const
{
  return Vec2(a_ * std::cos(t), b_ * std::sin(t));
}

CurvePoint BoundaryCurve::eval(double t) const
{
  const double c = std::cos(t);
  const double s = std::sin(t);
  return CurvePoint{Vec2(a_ * c, b_ * s), Vec2(-a_ * s, b_ * c),
                    Vec2(-a_ * c, -b_ * s)};
}

double BoundaryCurve::speed(double t) const
{
  return eval(t).dx.norm();
}

Vec2 BoundaryCurve::unit_tangent(double t) const
{
  return eval(t).dx.normalized();
}

Vec2 BoundaryCurve::outward_normal(double t) const
{
  const Vec2 d = eval(t).dx;
  return Vec2(d.y(), -d.x()) / d.norm();
}

double BoundaryCurve::curvature(double t) const
{
  const CurvePoint p = eval(t);
  const double sp = p.dx.norm();
  return (p.ddx.x() * p.dx.y() - p.ddx.y() * p.dx.x()) / (sp * sp * sp);
}

double BoundaryCurve::arc_length() const
{
  return periodic_integral([this](double t) { return speed(t); }, period());
}

double BoundaryCurve::signed_area() const
{
  return 0.5 * periodic_integral(
                   [this](double t) {
                     const CurvePoint p = eval(t);
                     return cross(p.x, p.dx);
                   },
                   period());
}

ObliqueField ObliqueField::rotate_normal(double angle)
{
  return ObliqueField(ObliqueKind::rotate_normal, angle);
}

ObliqueField ObliqueField::tangential()
{
  return ObliqueField(ObliqueKind::tangential, 0.5 * pi);
}

ObliqueField ObliqueField::polar_spiral()
{
  return ObliqueField(ObliqueKind::polar_spiral, 0.0);
}

std::string ObliqueField::name() const
{
  switch (kind_)
  {
  case ObliqueKind::rotate_normal:
    return "rotate(" + std::to_string(angle_) + ")";
  case ObliqueKind::tangential:
    return "tangential";
  case ObliqueKind::polar_spiral:
    return "polar-spiral";
  }
  return "?";
}

ObliqueSample ObliqueField::at(const BoundaryCurve &curve, double t) const
{
  const CurvePoint p = curve.eval(t);
  const double sp = p.dx.norm();
  const Vec2 tau = p.dx / sp;
  // d tau / ds = -chi * perp(tau) with the boundary curvature convention.
  const double chi = (p.ddx.x() * p.dx.y() - p.ddx.y() * p.dx.x()) / (sp * sp * sp);
  const Vec2 dtau_ds = -chi * perp(tau);

  switch (kind_)
  {
  case ObliqueKind::rotate_normal:
  case ObliqueKind::tangential:
  {
    // n = -perp(tau); l = R(angle) n.
    const double ca = std::cos(angle_);
    const double sa = std::sin(angle_);
    Mat2 rot;
    rot << ca, -sa, sa, ca;
    const Vec2 n = -perp(tau);
    const Vec2 dn_ds = -perp(dtau_ds);
    return ObliqueSample{rot * n, rot * dn_ds, 0.0};
  }
  case ObliqueKind::polar_spiral:
  {
    const double phi = std::atan2(p.x.y(), p.x.x());
    const double dphi_ds = cross(p.x, p.dx) / p.x.squaredNorm() / sp;
    const double ang = 2.0 * phi + 0.25 * pi;
    const Vec2 l(std::cos(ang), std::sin(ang));
    // Angle of n is angle(tau) - pi/2, whose arc-length rate is -chi.
    return ObliqueSample{l, 2.0 * dphi_ds * perp(l), 2.0 * dphi_ds + chi};
  }
  }
  return {};
}

double chi0(const BoundaryCurve &curve, const ObliqueField &field, int samples)
{
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i)
  {
    const double t = curve.period() * i / samples;
    m = std::min(m, field.at(curve, t).theta_dot - curve.curvature(t));
  }
  if (!(m > 0.0))
    throw NonPositiveChi0("chi0 = " + std::to_string(m) +
                          " is not positive for " + curve.name() + " with " +
                          field.name());
  return m;
}

double winding_number(const BoundaryCurve &curve, const ObliqueField &field)
{
  const double total = periodic_integral(
      [&](double t) { return field.at(curve, t).theta_dot * curve.speed(t); },
      curve.period());
  return total / (2.0 * pi);
}

} // namespace ofem
