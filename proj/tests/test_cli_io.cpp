#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "chemotaxis/chemotaxis.hpp"

using namespace chemotaxis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chemotaxis_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CHEMOTAXIS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesSectionsAndSweep) {
  const auto parsed = parse_config_text(
      "# comment\n[meta]\nlabel = demo\n[params]\nchi = 2.5\nnonlocal = true\n[mesh]\nh = 0.1\n"
      "[run]\ndt = 1e-4\n[sweep]\nparams.c = 1e-3, 1\nparams.gamma = 1.1,1.4,1.75\n");
  EXPECT_EQ(parsed.label, "demo");
  EXPECT_EQ(parsed.run.params.chi, 2.5);
  EXPECT_TRUE(parsed.run.params.nonlocal);
  EXPECT_EQ(parsed.run.mesh.h, 0.1);
  EXPECT_EQ(parsed.run.dt, 1e-4);
  ASSERT_EQ(parsed.sweep.size(), 2u);
  EXPECT_EQ(parsed.sweep[1].values.size(), 3u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[params]\nchi = 1\nbogus = 2\n"), 3);
  EXPECT_EQ(line_of("[params]\nchi = abc\n"), 2);
  EXPECT_EQ(line_of("chi = 1\n"), 1);
  EXPECT_EQ(line_of("[params\n"), 1);
  EXPECT_EQ(line_of("[params]\n\nnonlocal = maybe\n"), 3);
  EXPECT_EQ(line_of("[sweep]\nparams.c = 1, x\n"), 2);
  EXPECT_EQ(line_of("[mesh]\nkind = torus\n"), 2);
}

TEST(Config, EchoRoundTripIsExact) {
  for (const auto& preset : builtin_presets()) {
    const auto parsed = load_preset(preset.name);
    const std::string echo = to_config_text(parsed.run, parsed.sweep, parsed.label);
    EXPECT_EQ(echo, to_config_text(parsed.run, parsed.sweep, parsed.label));
    const auto again = parse_config_text(echo);
    EXPECT_EQ(to_config_text(again.run, again.sweep, again.label), echo) << preset.name;
  }
}

TEST(Config, EchoKeepsFullPrecision) {
  RunConfig cfg;
  cfg.params.chi = 0.1 + 0.2;
  cfg.dt = std::nextafter(1e-5, 1.0);
  const auto back = parse_config_text(to_config_text(cfg)).run;
  EXPECT_EQ(back.params.chi, cfg.params.chi);
  EXPECT_EQ(back.dt, cfg.dt);
}

TEST(Presets, KnownAndUnknown) {
  EXPECT_GE(builtin_presets().size(), 7u);
  for (const auto& p : builtin_presets()) EXPECT_NO_THROW(load_preset(p.name).run.validate()) << p.name;
  EXPECT_THROW(find_preset("fig9"), std::invalid_argument);
}

TEST(SeriesCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  TimeSeries s;
  double t = 0.0;
  for (int i = 0; i < 50; ++i) {
    DiagnosticsRow r;
    t += d(rng) * 1e-5;
    r.t = t;
    r.max_u = std::exp(30.0 * d(rng));
    r.min_u = d(rng) * 1e-300;
    r.mass = d(rng);
    r.max_v = d(rng);
    r.min_v = -d(rng);
    r.max_w = d(rng);
    r.min_w = d(rng);
    r.clamped_mass = d(rng) * 1e-17;
    r.solver_iters = static_cast<long>(d(rng) * 1000);
    r.damping_residual = d(rng);
    s.push(r);
  }
  const auto back = io::parse_series_csv(io::series_csv(s));
  ASSERT_EQ(back.rows.size(), s.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].t, s.rows[i].t);
    EXPECT_EQ(back.rows[i].max_u, s.rows[i].max_u);
    EXPECT_EQ(back.rows[i].min_u, s.rows[i].min_u);
    EXPECT_EQ(back.rows[i].min_v, s.rows[i].min_v);
    EXPECT_EQ(back.rows[i].clamped_mass, s.rows[i].clamped_mass);
    EXPECT_EQ(back.rows[i].solver_iters, s.rows[i].solver_iters);
  }
  EXPECT_EQ(io::series_csv(back), io::series_csv(s));
}

TEST(SeriesCsv, RejectsMalformed) {
  EXPECT_THROW(io::parse_series_csv("t,max_u\n"), std::runtime_error);
  EXPECT_THROW(io::parse_series_csv(std::string(io::kSeriesHeader) + "\n1,2,3\n"), std::runtime_error);
}

TEST(Svg, WellFormedAndSelfContained) {
  const std::string svg = svg::line_plot({{"a<b", {0, 1, 2}, {1, 100, 1e4}}, {"c", {0, 2}, {5, 0}}}, {"max & more"});
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("max &amp; more"), std::string::npos);
  EXPECT_EQ(svg.find("<script"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
  EXPECT_NE(svg.find("1e4"), std::string::npos);
  std::size_t opened = 0, closed = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++opened;
  for (std::size_t p = svg.find("\"/>"); p != std::string::npos; p = svg.find("\"/>", p + 1)) ++closed;
  EXPECT_EQ(opened, 2u);
  EXPECT_GE(closed, opened);
}

TEST(Vtk, Structure) {
  const Mesh m = build_ball_mesh(2, 1.0, 0.2);
  const Field u = initial_condition(m, "gauss2d");
  std::ostringstream os;
  io::write_vtk(os, m, {{"u", &u}});
  const std::string s = os.str();
  const std::size_t n = m.num_cells();
  EXPECT_NE(s.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(s.find("POINTS " + std::to_string(4 * n) + " double"), std::string::npos);
  EXPECT_NE(s.find("CELLS " + std::to_string(n) + " " + std::to_string(5 * n)), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA " + std::to_string(n)), std::string::npos);
  EXPECT_NE(s.find("SCALARS u double 1"), std::string::npos);
  std::size_t lines = 0;
  for (char ch : s) lines += ch == '\n';
  // header 4, points, cells, cell types, cell data 3 + values
  EXPECT_EQ(lines, 4 + 1 + 4 * n + 1 + n + 1 + n + 3 + n);
}

TEST(Sweep, CartesianProduct) {
  const auto parsed = parse_config_text("[sweep]\nparams.c = 1, 2, 3\nparams.gamma = 1.1, 1.4, 1.75\n");
  const auto points = expand_sweep(parsed.run, parsed.sweep);
  ASSERT_EQ(points.size(), 9u);
  EXPECT_EQ(points[0].config.params.c, 1.0);
  EXPECT_EQ(points[0].config.params.gamma, 1.1);
  EXPECT_EQ(points[1].config.params.gamma, 1.4);
  EXPECT_EQ(points[3].config.params.c, 2.0);
  EXPECT_EQ(points[8].label(), "params.c=3 params.gamma=1.75");
  for (std::size_t i = 0; i < points.size(); ++i) EXPECT_EQ(points[i].index, i);
}

TEST(Sweep, WritesOutputsAndRecordsFailures) {
  const fs::path dir = scratch("sweep");
  auto parsed = parse_config_text(
      "[meta]\nlabel = tiny\n[params]\nc = 0\n[mesh]\nh = 0.2\n[run]\ndt = 1e-3\nt_end = 5e-3\nsnapshot_every = 5\n"
      "[sweep]\nparams.chi = 0, 1, -1\n");
  const auto outcomes = run_sweep(parsed, dir, 2);
  ASSERT_EQ(outcomes.size(), 3u);
  EXPECT_TRUE(outcomes[0].verdict.has_value());
  EXPECT_TRUE(outcomes[1].verdict.has_value());
  EXPECT_FALSE(outcomes[2].verdict.has_value());
  EXPECT_NE(outcomes[2].error.find("chi"), std::string::npos);
  for (const char* f : {"sweep.csv", "maxu.svg", "config.echo", "run_000/series.csv", "run_000/verdict.txt",
                        "run_000/maxu.svg", "run_000/config.echo", "run_000/snapshot_000000.vtk",
                        "run_000/snapshot_000005.vtk"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string csv = io::read_text_file((dir / "sweep.csv").string());
  EXPECT_EQ(csv.rfind("run,params.chi,status", 0), 0u);
  EXPECT_NE(csv.find(",failed,"), std::string::npos);
  const auto series = io::parse_series_csv(io::read_text_file((dir / "run_001/series.csv").string()));
  EXPECT_EQ(series.rows.size(), 6u);
  fs::remove_all(dir);
}

TEST(Expression, Evaluates) {
  EXPECT_DOUBLE_EQ(Expression("1 + 2*3")(0, 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression("2^3^2")(0, 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression("-x^2")(3, 0, 0), -9.0);
  EXPECT_DOUBLE_EQ(Expression("r")(3, 4, 0), 5.0);
  EXPECT_NEAR(Expression("500*exp(-35*(x^2+y^2))")(0.1, 0.2, 0), 500 * std::exp(-1.75), 1e-12);
  EXPECT_THROW(Expression("1 +"), std::invalid_argument);
  EXPECT_THROW(Expression("foo(1)"), std::invalid_argument);
  EXPECT_THROW(Expression("(1"), std::invalid_argument);
}

TEST(Cli, RegimeExitCodes) {
  EXPECT_EQ(run_cli("regime --preset fig2a"), 0);
  EXPECT_EQ(run_cli("regime --preset fig2b"), 2);
  EXPECT_EQ(run_cli("regime --preset fig2a --override params.gamma=1.4"), 2);
  EXPECT_EQ(run_cli("regime --preset fig2a --override params.nope=1"), 1);
  const fs::path dir = scratch("cli");
  io::write_text_file((dir / "bad.ini").string(), "[params]\nchi = ?\n");
  EXPECT_EQ(run_cli("regime --config " + (dir / "bad.ini").string()), 1);
  EXPECT_EQ(run_cli("regime --config " + (dir / "missing.ini").string()), 1);
  fs::remove_all(dir);
}

TEST(Cli, RunWritesArtifacts) {
  const fs::path dir = scratch("cli_run");
  EXPECT_EQ(run_cli("run --preset diffusion --override run.t_end=1e-3 --override mesh.h=0.1 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "series.csv"));
  EXPECT_TRUE(fs::exists(dir / "verdict.txt"));
  const std::string verdict = io::read_text_file((dir / "verdict.txt").string());
  EXPECT_EQ(verdict.rfind("blew_up=false", 0), 0u);
  fs::remove_all(dir);
}

TEST(Examples, ConfigsParseAndValidate) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(CHEMOTAXIS_EXAMPLES)) {
    if (entry.path().extension() != ".ini") continue;
    ++seen;
    const auto parsed = parse_config_text(io::read_text_file(entry.path().string()));
    for (const auto& point : expand_sweep(parsed.run, parsed.sweep))
      EXPECT_NO_THROW(point.config.validate()) << entry.path();
    EXPECT_FALSE(parsed.label.empty()) << entry.path();
  }
  EXPECT_GE(seen, 3u);
}
