#include "ofem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ofem
{
namespace
{
// Dunavant symmetric rules, refined by Newton iteration on the moment
// equations to full double precision. Weights are already scaled by the
// reference area 1/2.
struct Orbit3
{
  double a;
  double w;
};
struct Orbit6
{
  double a;
  double b;
  double w;
};

void add_centroid(TriangleRule &r, double w)
{
  r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  r.weights.push_back(w);
}

// Barycentric (a, a, 1 - 2a) and its rotations; reference coordinates are
// (lambda_2, lambda_3).
void add_orbit3(TriangleRule &r, const Orbit3 &o)
{
  const double c = 1.0 - 2.0 * o.a;
  const double l[3][3] = {{o.a, o.a, c}, {c, o.a, o.a}, {o.a, c, o.a}};
  for (const auto &b : l)
  {
    r.points.emplace_back(b[1], b[2]);
    r.weights.push_back(o.w);
  }
}

void add_orbit6(TriangleRule &r, const Orbit6 &o)
{
  const double c = 1.0 - o.a - o.b;
  const double l[6][3] = {{o.a, o.b, c}, {o.a, c, o.b}, {o.b, o.a, c},
                          {o.b, c, o.a}, {c, o.a, o.b}, {c, o.b, o.a}};
  for (const auto &b : l)
  {
    r.points.emplace_back(b[1], b[2]);
    r.weights.push_back(o.w);
  }
}

TriangleRule make_degree10()
{
  TriangleRule r;
  r.degree = 10;
  add_centroid(r, 0.045408995191376790048);
  add_orbit3(r, {0.48557763338365737737, 0.018362978878233352359});
  add_orbit3(r, {0.1094815754850370548, 0.022660529717763967391});
  add_orbit6(r, {0.14170721941487995476, 0.30793983876412095017,
                 0.036378958422710054302});
  add_orbit6(r, {0.025003534762686386074, 0.24667256063990269392,
                 0.014163621265528742418});
  add_orbit6(r, {0.0095408154002994575802, 0.066803251012200265774,
                 0.00471083348186641173});
  return r;
}

TriangleRule make_degree12()
{
  TriangleRule r;
  r.degree = 12;
  add_orbit3(r, {0.48821738977380488256, 0.012865533220227667709});
  add_orbit3(r, {0.43972439229446027298, 0.021846272269019201068});
  add_orbit3(r, {0.27121038501211592235, 0.031429112108942550177});
  add_orbit3(r, {0.12757614554158592467, 0.017398056465354471495});
  add_orbit3(r, {0.021317350453210370247, 0.0030831305257795086169});
  add_orbit6(r, {0.11534349453469799917, 0.27571326968551419397,
                 0.020185778883190464759});
  add_orbit6(r, {0.02283833222225702961, 0.28132558098993954825,
                 0.011178386601151722856});
  add_orbit6(r, {0.025734050548330228168, 0.11625191590759714124,
                 0.0086581155543294461858});
  return r;
}

TriangleRule make_degree14()
{
  TriangleRule r;
  r.degree = 14;
  add_orbit3(r, {0.48896391036217863868, 0.01094179068471444532});
  add_orbit3(r, {0.41764471934045392251, 0.016394176772062675321});
  add_orbit3(r, {0.27347752830883865975, 0.025887052253645793157});
  add_orbit3(r, {0.17720553241254343696, 0.021081294368496508769});
  add_orbit3(r, {0.061799883090872601267, 0.0072168498348883338009});
  add_orbit3(r, {0.019390961248701048178, 0.0024617018012000408409});
  add_orbit6(r, {0.057124757403647939036, 0.17226668782135557838,
                 0.012332876606281836981});
  add_orbit6(r, {0.092916249356971824758, 0.33686145979634500174,
                 0.019285755393530341614});
  add_orbit6(r, {0.014646950055654409671, 0.29837288213625775297,
                 0.007218154056766920248});
  add_orbit6(r, {0.0012683309328720250872, 0.1189744976969568454,
                 0.0025051144192503358849});
  return r;
}
} // namespace

const TriangleRule &triangle_quadrature(int degree)
{
  static const TriangleRule d10 = make_degree10();
  static const TriangleRule d12 = make_degree12();
  static const TriangleRule d14 = make_degree14();
  if (degree < 0 || degree > 14)
    throw UnsupportedDegree("no triangle rule of degree " +
                            std::to_string(degree));
  if (degree <= 10)
    return d10;
  if (degree <= 12)
    return d12;
  return d14;
}

IntervalRule interval_quadrature(int n)
{
  if (n < 1 || n > 64)
    throw UnsupportedDegree("no Gauss rule with " + std::to_string(n) +
                            " points");
  IntervalRule r;
  r.degree = 2 * n - 1;
  r.points.resize(n);
  r.weights.resize(n);
  // Newton on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[i] = 0.5 * (1.0 - x);
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

} // namespace ofem
