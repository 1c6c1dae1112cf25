#include "config.hpp"

#include <cmath>
#include <numbers>

namespace ofem::cli
{
RunConfig builtin_config(int id)
{
  const Experiment x = builtin_experiment(id);
  RunConfig c;
  c.experiment = id;
  if (x.problem.curve.kind() == CurveKind::unit_circle)
    c.domain = "disk";
  else
  {
    c.domain = "ellipse";
    c.semi_a = x.problem.curve.semi_axis_a();
    c.semi_b = x.problem.curve.semi_axis_b();
  }
  c.coefficient = x.coefficient;
  switch (x.problem.field.kind())
  {
  case ObliqueKind::rotate_normal:
    c.oblique = "rotate";
    c.angle = x.problem.field.angle();
    break;
  case ObliqueKind::tangential:
    c.oblique = "tangential";
    break;
  case ObliqueKind::polar_spiral:
    c.oblique = "polar-spiral";
    break;
  }
  c.solution = x.solution;
  c.epsilon = x.problem.epsilon;
  c.first_level = x.first_level;
  c.last_level = x.last_level;
  c.n_boundary = x.n_boundary;
  return c;
}

namespace
{
template <class T> T get(const nlohmann::json &j, const char *key)
{
  try
  {
    return j.at(key).get<T>();
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void apply_domain(RunConfig &c, const nlohmann::json &d)
{
  const std::string kind = d.is_string() ? d.get<std::string>() : get<std::string>(d, "kind");
  if (kind == "disk")
  {
    c.domain = "disk";
    c.semi_a = c.semi_b = 1.0;
  }
  else if (kind == "ellipse")
  {
    c.domain = "ellipse";
    c.semi_a = d.is_object() && d.contains("a") ? get<double>(d, "a") : 2.0;
    c.semi_b = d.is_object() && d.contains("b") ? get<double>(d, "b") : 1.0;
    if (!(c.semi_a > 0 && c.semi_b > 0))
      throw ConfigError("ellipse semi-axes must be positive");
  }
  else
    throw ConfigError("unknown domain '" + kind + "'");
}

void apply_oblique(RunConfig &c, const nlohmann::json &o)
{
  const std::string kind = o.is_string() ? o.get<std::string>() : get<std::string>(o, "kind");
  if (kind == "rotate")
    c.angle = o.is_object() && o.contains("angle") ? get<double>(o, "angle") : 0.0;
  else if (kind != "tangential" && kind != "polar-spiral")
    throw ConfigError("unknown oblique field '" + kind + "'");
  c.oblique = kind;
}
} // namespace

void apply_json(RunConfig &c, const nlohmann::json &j)
{
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  if (j.contains("experiment"))
    c = builtin_config(get<int>(j, "experiment"));
  for (const auto &[key, value] : j.items())
  {
    if (key == "experiment")
      continue;
    if (key == "domain")
      apply_domain(c, value);
    else if (key == "coefficient")
    {
      const std::string s = get<std::string>(j, "coefficient");
      if (s == "identity")
        c.coefficient = CoefficientKind::identity;
      else if (s == "checkerboard")
        c.coefficient = CoefficientKind::checkerboard;
      else
        throw ConfigError("unknown coefficient '" + s + "'");
    }
    else if (key == "oblique")
      apply_oblique(c, value);
    else if (key == "solution")
      c.solution = solution_from_name(get<std::string>(j, "solution"));
    else if (key == "epsilon")
      c.epsilon = get<double>(j, "epsilon");
    else if (key == "epsilon_tilde")
      c.epsilon_tilde = get<double>(j, "epsilon_tilde");
    else if (key == "levels")
    {
      const auto l = get<std::vector<int>>(j, "levels");
      if (l.size() != 2)
        throw ConfigError("levels must be [first, last]");
      c.first_level = l[0];
      c.last_level = l[1];
    }
    else if (key == "n_boundary")
      c.n_boundary = get<int>(j, "n_boundary");
    else if (key == "volume_degree")
      c.volume_degree = get<int>(j, "volume_degree");
    else if (key == "edge_points")
      c.edge_points = get<int>(j, "edge_points");
    else if (key == "out")
      c.out = get<std::string>(j, "out");
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
}

std::pair<int, int> parse_levels(const std::string &text)
{
  const auto dots = text.find("..");
  try
  {
    std::size_t used = 0;
    if (dots == std::string::npos)
    {
      const int l = std::stoi(text, &used);
      if (used != text.size())
        throw ConfigError("");
      return {l, l};
    }
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const int first = std::stoi(a, &used);
    if (used != a.size())
      throw ConfigError("");
    const int last = std::stoi(b, &used);
    if (used != b.size())
      throw ConfigError("");
    return {first, last};
  }
  catch (const std::exception &)
  {
    throw ConfigError("levels must look like A..B, got '" + text + "'");
  }
}

ProblemSpec make_problem(const RunConfig &c)
{
  if (c.first_level < 0 || c.last_level < c.first_level)
    throw ConfigError("empty level range");
  const BoundaryCurve curve = c.domain == "disk" ? BoundaryCurve::unit_circle()
                                                 : BoundaryCurve::ellipse(c.semi_a, c.semi_b);
  const ObliqueField field = c.oblique == "rotate"       ? ObliqueField::rotate_normal(c.angle)
                             : c.oblique == "tangential" ? ObliqueField::tangential()
                                                         : ObliqueField::polar_spiral();
  ProblemSpec p = ofem::make_problem(curve, field, c.coefficient, c.solution, c.epsilon);
  p.epsilon_tilde = c.epsilon_tilde;
  p.volume_degree = c.volume_degree;
  p.edge_points = c.edge_points;
  if (c.experiment)
  {
    const RunConfig base = builtin_config(*c.experiment);
    if (base.domain == c.domain && base.semi_a == c.semi_a && base.semi_b == c.semi_b &&
        base.coefficient == c.coefficient && base.oblique == c.oblique &&
        base.angle == c.angle && base.solution == c.solution)
      p.exact->c = builtin_experiment(*c.experiment).exact_c;
  }
  stabilization_factor(p.epsilon, p.scheme_epsilon());
  return p;
}

nlohmann::json to_json(const RunConfig &c)
{
  nlohmann::json j;
  if (c.experiment)
    j["experiment"] = *c.experiment;
  j["domain"] = c.domain == "disk"
                    ? nlohmann::json{{"kind", "disk"}}
                    : nlohmann::json{{"kind", "ellipse"}, {"a", c.semi_a}, {"b", c.semi_b}};
  j["coefficient"] = coefficient_name(c.coefficient);
  j["oblique"] = c.oblique == "rotate" ? nlohmann::json{{"kind", "rotate"}, {"angle", c.angle}}
                                       : nlohmann::json{{"kind", c.oblique}};
  j["solution"] = solution_name(c.solution);
  j["epsilon"] = c.epsilon;
  j["epsilon_tilde"] = c.epsilon_tilde.value_or(c.epsilon);
  j["levels"] = {c.first_level, c.last_level};
  j["n_boundary"] = c.n_boundary;
  j["volume_degree"] = c.volume_degree;
  j["edge_points"] = c.edge_points;
  return j;
}

} // namespace ofem::cli
