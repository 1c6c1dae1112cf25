#include "ofem/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ofem
{
namespace
{
constexpr double width = 640, height = 480;
constexpr double left = 80, right = 150, top = 50, bottom = 60;

std::string num(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

struct Axes
{
  double x0, x1, y0, y1; // decades

  double px(double lh) const { return left + (lh - x0) / (x1 - x0) * (width - left - right); }
  double py(double le) const { return top + (y1 - le) / (y1 - y0) * (height - top - bottom); }
};

struct Series
{
  const char *label;
  const char *color;
  double ConvergenceRow::*error;
};

constexpr std::array<Series, 3> series{{{"L2", "#1f77b4", &ConvergenceRow::l2},
                                        {"H1", "#2ca02c", &ConvergenceRow::h1},
                                        {"H2 (broken)", "#d62728", &ConvergenceRow::h2}}};

// Slope-2 triangle in log space hanging below the last segment of a curve.
std::array<std::array<double, 2>, 3> triangle(const ConvergenceReport &r, double ConvergenceRow::*e)
{
  const auto &a = r.rows[r.rows.size() - 2];
  const auto &b = r.rows.back();
  const double xa = std::log10(a.h), xb = std::log10(b.h);
  const double base = std::log10(b.*e) - 0.4;
  return {{{xb, base}, {xa, base}, {xa, base + 2.0 * (xa - xb)}}};
}
} // namespace

void write_convergence_svg(std::ostream &os, const ConvergenceReport &report,
                           const std::string &title)
{
  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  auto extend = [&](double x, double y) {
    lx0 = std::min(lx0, x);
    lx1 = std::max(lx1, x);
    ly0 = std::min(ly0, y);
    ly1 = std::max(ly1, y);
  };
  for (const auto &row : report.rows)
    for (const auto &s : series)
      if (row.*s.error > 0.0)
        extend(std::log10(row.h), std::log10(row.*s.error));
  const bool triangles = report.rows.size() >= 2;
  if (triangles)
    for (const auto &s : series)
      if (report.rows.back().*s.error > 0.0 && report.rows[report.rows.size() - 2].*s.error > 0.0)
        for (const auto &p : triangle(report, s.error))
          extend(p[0], p[1]);
  if (lx0 > lx1)
    lx0 = -1, lx1 = 0, ly0 = -1, ly1 = 0;
  // Decade bounds, ignoring roundoff just past a power of ten.
  const auto lo = [](double x) { return std::floor(x + 1e-9); };
  const auto hi = [](double x) { return std::ceil(x - 1e-9); };
  const Axes ax{lo(lx0), std::max(hi(lx1), lo(lx0) + 1), lo(ly0), std::max(hi(ly1), lo(ly0) + 1)};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(width / 2) << "\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";

  // Frame, grid and decade ticks.
  const double fx0 = ax.px(ax.x0), fx1 = ax.px(ax.x1), fy0 = ax.py(ax.y0), fy1 = ax.py(ax.y1);
  os << "<g stroke=\"#ddd\">\n";
  for (double d = ax.x0; d <= ax.x1; d += 1.0)
    os << "<line x1=\"" << num(ax.px(d)) << "\" y1=\"" << num(fy1) << "\" x2=\""
       << num(ax.px(d)) << "\" y2=\"" << num(fy0) << "\"/>\n";
  for (double d = ax.y0; d <= ax.y1; d += 1.0)
    os << "<line x1=\"" << num(fx0) << "\" y1=\"" << num(ax.py(d)) << "\" x2=\"" << num(fx1)
       << "\" y2=\"" << num(ax.py(d)) << "\"/>\n";
  os << "</g>\n";
  os << "<rect x=\"" << num(fx0) << "\" y=\"" << num(fy1) << "\" width=\"" << num(fx1 - fx0)
     << "\" height=\"" << num(fy0 - fy1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = ax.x0; d <= ax.x1; d += 1.0)
    os << "<text x=\"" << num(ax.px(d)) << "\" y=\"" << num(fy0 + 18)
       << "\" text-anchor=\"middle\">10<tspan dy=\"-6\" font-size=\"9\">" << static_cast<int>(d)
       << "</tspan></text>\n";
  for (double d = ax.y0; d <= ax.y1; d += 1.0)
    os << "<text x=\"" << num(fx0 - 8) << "\" y=\"" << num(ax.py(d) + 4)
       << "\" text-anchor=\"end\">10<tspan dy=\"-6\" font-size=\"9\">" << static_cast<int>(d)
       << "</tspan></text>\n";
  os << "<text x=\"" << num((fx0 + fx1) / 2) << "\" y=\"" << num(height - 15)
     << "\" text-anchor=\"middle\">h (max h_K)</text>\n";
  os << "<text x=\"20\" y=\"" << num((fy0 + fy1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << num((fy0 + fy1) / 2) << ")\">error</text>\n";

  // Curves.
  for (const auto &s : series)
  {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto &row : report.rows)
      if (row.*s.error > 0.0)
      {
        os << (first ? "" : " ") << num(ax.px(std::log10(row.h))) << ','
           << num(ax.py(std::log10(row.*s.error)));
        first = false;
      }
    os << "\"/>\n";
    for (const auto &row : report.rows)
      if (row.*s.error > 0.0)
        os << "<circle cx=\"" << num(ax.px(std::log10(row.h))) << "\" cy=\""
           << num(ax.py(std::log10(row.*s.error))) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
  }

  // Reference triangles.
  if (triangles)
    for (const auto &s : series)
    {
      if (!(report.rows.back().*s.error > 0.0 && report.rows[report.rows.size() - 2].*s.error > 0.0))
        continue;
      const auto t = triangle(report, s.error);
      os << "<polygon fill=\"none\" stroke=\"" << s.color << "\" stroke-dasharray=\"4 3\" points=\"";
      for (int i = 0; i < 3; ++i)
        os << (i ? " " : "") << num(ax.px(t[i][0])) << ',' << num(ax.py(t[i][1]));
      os << "\"/>\n";
      os << "<text x=\"" << num(ax.px(t[1][0]) + 5) << "\" y=\""
         << num((ax.py(t[1][1]) + ax.py(t[2][1])) / 2 + 4) << "\" fill=\"" << s.color
         << "\">2</text>\n";
      os << "<text x=\"" << num((ax.px(t[0][0]) + ax.px(t[1][0])) / 2) << "\" y=\""
         << num(ax.py(t[0][1]) + 14) << "\" text-anchor=\"middle\" fill=\"" << s.color
         << "\">1</text>\n";
    }

  // Legend.
  const double lx = width - right + 15;
  for (std::size_t i = 0; i < series.size(); ++i)
  {
    const double y = top + 20 + 20 * static_cast<double>(i);
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(y) << "\" x2=\"" << num(lx + 20)
       << "\" y2=\"" << num(y) << "\" stroke=\"" << series[i].color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(y + 4) << "\">" << series[i].label
       << "</text>\n";
  }
  os << "<text x=\"" << num(lx) << "\" y=\"" << num(top + 90)
     << "\" font-size=\"10\">dashed: slope 2</text>\n";
  os << "</svg>\n";
}

} // namespace ofem
