#include "ofem/hermite.hpp"

namespace ofem
{
Vec2 hermite::reference_vertex(int a)
{
  switch (a)
  {
  case 1:
    return Vec2(1.0, 0.0);
  case 2:
    return Vec2(0.0, 1.0);
  default:
    return Vec2(0.0, 0.0);
  }
}

BasisJets monomial_jets(const Vec2 &p)
{
  const double x = p.x();
  const double y = p.y();
  BasisJets m;
  auto set = [&m](int k, double v, double gx, double gy, double hxx, double hxy,
                  double hyy) {
    m[k].value = v;
    m[k].grad = Vec2(gx, gy);
    m[k].hess << hxx, hxy, hxy, hyy;
  };
  set(0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
  set(1, x, 1.0, 0.0, 0.0, 0.0, 0.0);
  set(2, y, 0.0, 1.0, 0.0, 0.0, 0.0);
  set(3, x * x, 2.0 * x, 0.0, 2.0, 0.0, 0.0);
  set(4, x * y, y, x, 0.0, 1.0, 0.0);
  set(5, y * y, 0.0, 2.0 * y, 0.0, 0.0, 2.0);
  set(6, x * x * x, 3.0 * x * x, 0.0, 6.0 * x, 0.0, 0.0);
  set(7, x * x * y, 2.0 * x * y, x * x, 2.0 * y, 2.0 * x, 0.0);
  set(8, x * y * y, y * y, 2.0 * x * y, 0.0, 2.0 * y, 2.0 * x);
  set(9, y * y * y, 0.0, 3.0 * y * y, 0.0, 0.0, 6.0 * y);
  return m;
}

LocalVector ReferenceHermite::dofs_of(const std::array<Jet, 3> &vertex_jets,
                                      double centroid_value)
{
  LocalVector d;
  for (int a = 0; a < 3; ++a)
  {
    d(hermite::value_dof(a)) = vertex_jets[a].value;
    d(hermite::grad_dof(a, 0)) = vertex_jets[a].grad.x();
    d(hermite::grad_dof(a, 1)) = vertex_jets[a].grad.y();
  }
  d(hermite::centroid_dof) = centroid_value;
  return d;
}

ReferenceHermite::ReferenceHermite()
{
  // Vandermonde: row i = dof functional i applied to monomial j.
  LocalMatrix vdm;
  std::array<BasisJets, 3> at_vertex;
  for (int a = 0; a < 3; ++a)
    at_vertex[a] = monomial_jets(hermite::reference_vertex(a));
  const BasisJets at_centroid = monomial_jets(hermite::reference_centroid());
  for (int j = 0; j < hermite::n_dofs; ++j)
  {
    std::array<Jet, 3> vj{at_vertex[0][j], at_vertex[1][j], at_vertex[2][j]};
    vdm.col(j) = dofs_of(vj, at_centroid[j].value);
  }
  coeff_ = vdm.inverse();
}

const ReferenceHermite &ReferenceHermite::instance()
{
  static const ReferenceHermite element;
  return element;
}

BasisJets ReferenceHermite::eval(const Vec2 &p) const
{
  const BasisJets m = monomial_jets(p);
  BasisJets phi;
  for (int k = 0; k < hermite::n_dofs; ++k)
  {
    Jet acc;
    for (int j = 0; j < hermite::n_dofs; ++j)
    {
      const double c = coeff_(j, k);
      if (c != 0.0)
        acc += c * m[j];
    }
    phi[k] = acc;
  }
  return phi;
}

} // namespace ofem
