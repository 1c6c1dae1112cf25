#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ofem
{
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Value, gradient and Hessian of a scalar field at one point.
struct Jet
{
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();

  Jet &operator+=(const Jet &o)
  {
    value += o.value;
    grad += o.grad;
    hess += o.hess;
    return *this;
  }
};

inline Jet operator*(double a, const Jet &j)
{
  return Jet{a * j.value, a * j.grad, a * j.hess};
}

inline Jet operator-(const Jet &a, const Jet &b)
{
  return Jet{a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}

/// Anticlockwise quarter turn: perp(v) = (-v2, v1).
inline Vec2 perp(const Vec2 &v)
{
  return Vec2(-v.y(), v.x());
}

inline double cross(const Vec2 &a, const Vec2 &b)
{
  return a.x() * b.y() - a.y() * b.x();
}

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define OFEM_DEFINE_ERROR(Name)                                                \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    using Error::Error;                                                        \
  };

OFEM_DEFINE_ERROR(NonPositiveChi0)
OFEM_DEFINE_ERROR(InvalidCoarseMesh)
OFEM_DEFINE_ERROR(CKViolation)
OFEM_DEFINE_ERROR(SingularJacobian)
OFEM_DEFINE_ERROR(UnsupportedDegree)
OFEM_DEFINE_ERROR(BadEpsilonTilde)
OFEM_DEFINE_ERROR(SingularSystem)
OFEM_DEFINE_ERROR(MissingExactSolution)
OFEM_DEFINE_ERROR(ConfigError)

#undef OFEM_DEFINE_ERROR

} // namespace ofem
