#pragma once

#include "ofem/common.hpp"

#include <numbers>
#include <string>

namespace ofem
{
/// Position and first two parameter derivatives of a boundary curve.
struct CurvePoint
{
  Vec2 x;
  Vec2 dx;
  Vec2 ddx;
};

enum class CurveKind
{
  unit_circle,
  ellipse
};

/// Closed, anticlockwise, C-infinity boundary curve x(t), t in [0, T).
///
/// The parameter t is the natural angle-like parameter, not arc length.
/// All arc-length quantities are obtained by dividing by |x'(t)|.
class BoundaryCurve
{
public:
  static BoundaryCurve unit_circle();
  /// x(t) = (a cos t, b sin t).
  static BoundaryCurve ellipse(double a, double b);

  CurveKind kind() const { return kind_; }
  double semi_axis_a() const { return a_; }
  double semi_axis_b() const { return b_; }
  double period() const { return 2.0 * std::numbers::pi; }
  std::string name() const;

  CurvePoint eval(double t) const;
  Vec2 point(double t) const;
  /// k-th parameter derivative of x, any k >= 0.
  Vec2 derivative(double t, int k) const;

  double speed(double t) const;
  Vec2 unit_tangent(double t) const;
  /// n = (x'_2, -x'_1) / |x'|.
  Vec2 outward_normal(double t) const;
  /// Curvature with the convention chi = (x''_1 x'_2 - x''_2 x'_1)/|x'|^3,
  /// negative on convex anticlockwise boundaries.
  double curvature(double t) const;

  /// Total arc length by periodic trapezoid doubling.
  double arc_length() const;
  /// (1/2) closed integral of (x1 dx2 - x2 dx1).
  double signed_area() const;
  /// Area enclosed by the curve, pi a b.
  double enclosed_area() const { return std::numbers::pi * a_ * b_; }

private:
  BoundaryCurve(CurveKind kind, double a, double b) : kind_(kind), a_(a), b_(b)
  {
  }

  CurveKind kind_;
  double a_;
  double b_;
};

enum class ObliqueKind
{
  rotate_normal,
  tangential,
  polar_spiral
};

/// Evaluation of an oblique field at a boundary parameter.
struct ObliqueSample
{
  Vec2 l;
  /// d l / ds (arc length).
  Vec2 dl_ds;
  /// Arc-length rate of the oriented angle from n to l.
  double theta_dot;
};

/// Unit vector field on the boundary.
///
/// rotate_normal(alpha): l = R(alpha) n.
/// tangential: l = x'/|x'|, the normal rotated by pi/2.
/// polar_spiral: l = (cos(2 phi + pi/4), sin(2 phi + pi/4)) with phi the
/// polar angle of x(t).
class ObliqueField
{
public:
  static ObliqueField rotate_normal(double angle);
  static ObliqueField tangential();
  static ObliqueField polar_spiral();

  ObliqueKind kind() const { return kind_; }
  double angle() const { return angle_; }
  std::string name() const;

  ObliqueSample at(const BoundaryCurve &curve, double t) const;
  Vec2 direction(const BoundaryCurve &curve, double t) const
  {
    return at(curve, t).l;
  }

private:
  ObliqueField(ObliqueKind kind, double angle) : kind_(kind), angle_(angle) {}

  ObliqueKind kind_;
  double angle_;
};

/// min over the boundary of (theta_dot - chi), sampled at `samples` points.
/// Throws NonPositiveChi0 if the minimum is not positive.
double chi0(const BoundaryCurve &curve, const ObliqueField &field,
            int samples = 2048);

/// (theta(T) - theta(0)) / 2 pi obtained by integrating theta_dot ds.
double winding_number(const BoundaryCurve &curve, const ObliqueField &field);

} // namespace ofem
