#include "config.hpp"

#include "ofem/checks.hpp"
#include "ofem/plot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace ofem;
namespace fs = std::filesystem;

namespace
{
struct CommonOptions
{
  int experiment = 0;
  std::string config_path;
  std::string levels;
  std::optional<double> epsilon_tilde;
  std::string out;
};

cli::RunConfig resolve(const CommonOptions &o)
{
  cli::RunConfig c = cli::builtin_config(o.experiment > 0 ? o.experiment : 1);
  if (!o.config_path.empty())
  {
    std::ifstream in(o.config_path);
    if (!in)
      throw ConfigError("cannot read config '" + o.config_path + "'");
    nlohmann::json j;
    try
    {
      j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
      throw ConfigError(std::string("bad JSON in config: ") + e.what());
    }
    // --experiment replaces the file's base experiment; its other keys still apply.
    if (o.experiment > 0 && j.is_object())
      j.erase("experiment");
    cli::apply_json(c, j);
  }
  if (!o.levels.empty())
    std::tie(c.first_level, c.last_level) = cli::parse_levels(o.levels);
  if (o.epsilon_tilde)
    c.epsilon_tilde = o.epsilon_tilde;
  if (!o.out.empty())
    c.out = o.out;
  return c;
}

std::ofstream open_out(const fs::path &p)
{
  std::ofstream f(p);
  if (!f)
    throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

int run(const CommonOptions &o, bool dump_mesh, bool dump_matrix)
{
  const cli::RunConfig c = resolve(o);
  const ProblemSpec problem = cli::make_problem(c);
  const fs::path dir(c.out);
  fs::create_directories(dir);

  std::vector<double> residuals;
  std::vector<long> fills;
  const ConvergenceReport report = run_convergence(
      problem, c.n_boundary, c.first_level, c.last_level, [&](const LevelResult &r) {
        residuals.push_back(r.solution.residual);
        fills.push_back(r.solution.fill);
        std::fprintf(stderr, "level %d: %d dofs, %.2f s\n", r.row.level, r.row.n_dofs,
                     r.row.seconds);
        if (r.row.level == c.last_level)
        {
          if (dump_mesh)
          {
            auto f = open_out(dir / "mesh.txt");
            write_mesh(f, r.mesh);
          }
          if (dump_matrix)
          {
            auto f = open_out(dir / "system.mtx");
            write_matrix_market(f, r.system.matrix);
          }
        }
      });

  std::printf("%-5s %-9s %-7s %-10s %-5s %-10s %-5s %-10s %-5s %-12s\n", "level", "h", "dofs",
              "L2", "eoc", "H1", "eoc", "H2", "eoc", "c_h");
  for (const auto &r : report.rows)
    std::printf("%-5d %-9.4f %-7d %-10.3e %-5.2f %-10.3e %-5.2f %-10.3e %-5.2f %-12.6f\n", r.level,
                r.h, r.n_dofs, r.l2, r.l2_order, r.h1, r.h1_order, r.h2, r.h2_order, r.c_h);
  std::printf("exact c = %.6f\n", report.exact_c);

  {
    auto f = open_out(dir / "report.csv");
    report.write_csv(f);
  }
  {
    auto f = open_out(dir / "convergence.svg");
    std::string title = c.experiment ? "Experiment " + std::to_string(*c.experiment) : "custom";
    title += ": " + solution_name(c.solution) + ", " + coefficient_name(c.coefficient) + ", " +
             c.oblique;
    write_convergence_svg(f, report, title);
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i)
  {
    const ConvergenceRow &r = report.rows[i];
    rows.push_back({{"level", r.level}, {"h", r.h}, {"n_dofs", r.n_dofs}, {"l2", r.l2},
                    {"l2_order", r.l2_order}, {"h1", r.h1}, {"h1_order", r.h1_order},
                    {"h2", r.h2}, {"h2_order", r.h2_order}, {"c_h", r.c_h},
                    {"residual", residuals[i]}, {"fill", fills[i]}, {"seconds", r.seconds}});
  }
  const nlohmann::json summary{
      {"config", cli::to_json(c)},
      {"exact_c", report.exact_c},
      {"stabilization_factor", stabilization_factor(problem.epsilon, problem.scheme_epsilon())},
      {"c_h_error", std::abs(report.rows.back().c_h - report.exact_c)},
      {"rows", rows}};
  auto f = open_out(dir / "summary.json");
  f << summary.dump(2) << '\n';
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

int check(const std::string &name, const std::string &out)
{
  std::vector<std::string> names{name};
  if (name == "all")
    names = {"mt-identity", "coercivity", "interpolation", "poincare", "mesh"};
  nlohmann::json results = nlohmann::json::array();
  bool pass = true;
  for (const auto &n : names)
  {
    const CheckResult r = run_check(n);
    std::fprintf(stderr, "%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                 r.detail.c_str());
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto &[k, v] : r.metrics)
      metrics[k] = v;
    results.push_back({{"check", r.name}, {"pass", r.pass}, {"metrics", metrics},
                       {"detail", r.detail}});
    pass = pass && r.pass;
  }
  const nlohmann::json summary{{"pass", pass}, {"checks", results}};
  std::cout << summary.dump(2) << '\n';
  if (!out.empty())
  {
    fs::create_directories(out);
    auto f = open_out(fs::path(out) / "summary.json");
    f << summary.dump(2) << '\n';
  }
  return pass ? 0 : 1;
}

int mesh_dump(const CommonOptions &o, int level)
{
  cli::RunConfig c = resolve(o);
  const ProblemSpec problem = cli::make_problem(c);
  const CurvedMesh mesh = mesh_at_level(problem.curve, c.n_boundary, level);
  const MeshDiagnostics d = validate(mesh);
  std::fprintf(stderr,
               "%zu vertices, %zu triangles, %zu edges; sigma %.3f, max c_K %.3f, h in [%.4f, "
               "%.4f], c2..c4 %.3g %.3g %.3g\n",
               mesh.n_vertices(), mesh.n_triangles(), mesh.edges().size(), d.sigma, d.max_ck,
               d.min_h, d.max_h, d.regularity[0], d.regularity[1], d.regularity[2]);
  for (const auto &v : d.violations)
    std::fprintf(stderr, "violation: %s\n", v.c_str());
  if (o.out.empty() || o.out == "-")
    write_mesh(std::cout, mesh);
  else
  {
    auto f = open_out(o.out);
    write_mesh(f, mesh);
  }
  return d.ok() ? 0 : 1;
}

void add_common(CLI::App *app, CommonOptions &o, bool with_levels)
{
  app->add_option("--experiment", o.experiment, "built-in experiment 1-4")
      ->check(CLI::Range(1, 4));
  app->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  if (with_levels)
  {
    app->add_option("--levels", o.levels, "refinement levels A..B");
    app->add_option("--epsilon-tilde", o.epsilon_tilde, "scheme parameter (default: epsilon)");
  }
}
} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"C0 cubic Hermite FEM for non-divergence elliptic problems with oblique "
               "boundary conditions on curved domains"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool dump_mesh = false, dump_matrix = false;
  auto *run_cmd = app.add_subcommand("run", "convergence study over refinement levels");
  add_common(run_cmd, run_opts, true);
  run_cmd->add_option("--out", run_opts.out, "output directory (default: out)");
  run_cmd->add_flag("--mesh", dump_mesh, "also write mesh.txt for the finest level");
  run_cmd->add_flag("--matrix", dump_matrix,
                    "also write the finest bordered system as system.mtx");

  std::string check_name, check_out;
  auto *check_cmd = app.add_subcommand("check", "property suites");
  check_cmd
      ->add_option("name", check_name, "mt-identity | coercivity | interpolation | poincare | mesh | all")
      ->required()
      ->check(CLI::IsMember({"mt-identity", "coercivity", "interpolation", "poincare", "mesh", "all"}));
  check_cmd->add_option("--out", check_out, "directory for summary.json");

  CommonOptions dump_opts;
  int dump_level = 0;
  auto *dump_cmd = app.add_subcommand("mesh-dump", "write the mesh of one level");
  add_common(dump_cmd, dump_opts, false);
  dump_cmd->add_option("--level", dump_level, "refinement level")->check(CLI::NonNegativeNumber);
  dump_cmd->add_option("--out", dump_opts.out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  try
  {
    if (*run_cmd)
      return run(run_opts, dump_mesh, dump_matrix);
    if (*check_cmd)
      return check(check_name, check_out);
    return mesh_dump(dump_opts, dump_level);
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
