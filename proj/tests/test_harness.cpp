#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "umuscl/harness.hpp"

using namespace umuscl;

namespace {

ConfigMap parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config_text(is);
}

ConvergenceReport small_report() {
  ConvergenceReport r;
  r.title = "demo";
  r.variables = {"u"};
  r.summary_variable = "u";
  for (int n : {16, 32, 64}) {
    ReportRow row;
    row.n = n;
    row.nodes = n;
    row.h = 1.0 / n;
    row.l1 = {3.0 * std::pow(row.h, 2)};
    row.l2 = {std::pow(row.h, 2)};
    row.linf = {0.1 / 3.0};
    row.alt_l1 = 2.0 * row.l1[0];
    r.add_row(row);
  }
  return r;
}

}  // namespace

TEST(FitOrder, PowerLaws) {
  const std::vector<double> h{0.1, 0.05, 0.025};
  for (double p : {2.0, 3.0}) {
    std::vector<double> e;
    for (double x : h) e.push_back(7.0 * std::pow(x, p));
    const OrderFit f = fit_order(h, e);
    ASSERT_TRUE(f.summary.has_value());
    EXPECT_NEAR(*f.summary, p, 1e-12);
    ASSERT_EQ(f.pairs.size(), 2u);
    EXPECT_NEAR(*f.pairs[0], p, 1e-12);
  }
}

TEST(FitOrder, UndefinedAndInvalid) {
  EXPECT_THROW(fit_order({0.1}, {1.0}), std::invalid_argument);
  EXPECT_THROW(fit_order({0.1, 0.05}, {1.0}), std::invalid_argument);
  const OrderFit f = fit_order({0.1, 0.05, 0.025}, {1e-3, 0.0, 1e-5});
  EXPECT_FALSE(f.pairs[0].has_value());
  EXPECT_FALSE(f.summary.has_value());
  EXPECT_FALSE(fit_order({0.1, 0.05}, {NAN, 1.0}).summary.has_value());
}

TEST(Config, ParsesCommentsAndOverrides) {
  ConfigMap m = parse("# header\nproblem = unsteady-advection\nflavor=fvc  # trailing\n\ngrids = 63,127\n");
  EXPECT_EQ(m.at("problem"), "unsteady-advection");
  EXPECT_EQ(m.at("flavor"), "fvc");
  apply_override(m, "kappa=1/2");
  const CaseConfig c = make_config(m);
  EXPECT_TRUE(c.is_1d());
  EXPECT_EQ(c.scheme1d.flavor, Flavor1D::FVC);
  EXPECT_EQ(c.scheme1d.kappa, 0.5);
  EXPECT_EQ(c.grids, (std::vector<int>{63, 127}));
  EXPECT_EQ(c.nsteps, 800);
  EXPECT_THROW(apply_override(m, "novalue"), ConfigError);
  EXPECT_THROW(parse("just words\n"), ConfigError);
}

TEST(Config, RejectsUnknownKeysAndBadGrids) {
  EXPECT_THROW(make_config(parse("problem=mms\nkapa=0.5\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=mms\ngrids=32,32\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=mms\ngrids=64,32\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=mms\ngrids=\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=mms\nscheme=umuscl-ssq\nkappa=0\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=nowhere\n")), ConfigError);
  EXPECT_THROW(make_config(parse("problem=mms\nkappa=abc\n")), ConfigError);
}

TEST(Config, TwoDimensionalDefaults) {
  const CaseConfig c = make_config(parse("problem=mms\ngrid=right-triangle\n"));
  EXPECT_FALSE(c.is_1d());
  EXPECT_EQ(c.family, GridFamily::RightTriangle);
  EXPECT_EQ(c.disc.kappa_s, 0.25);
  EXPECT_EQ(c.disc.flux, FluxKind::Rusanov);
  EXPECT_EQ(c.grids.front(), 32);
  const CaseConfig v = make_config(parse("problem=vortex\n"));
  EXPECT_EQ(v.disc.flux, FluxKind::Roe);
  EXPECT_NEAR(v.dt * v.nsteps, 36.0, 1e-12);
}

TEST(Report, MixedSemanticsRejected) {
  ConvergenceReport r = small_report();
  ReportRow row = r.rows.back();
  row.n = 128;
  row.semantics = Semantics::CellAverage;
  EXPECT_THROW(r.add_row(row), ConfigError);
}

TEST(Report, CsvRoundTrip) {
  const ConvergenceReport r = small_report();
  std::stringstream ss;
  write_report(ss, r, ReportFormat::Csv);
  const ConvergenceReport back = read_report_csv(ss);
  EXPECT_EQ(back.title, r.title);
  EXPECT_EQ(back.summary_variable, "u");
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].n, r.rows[i].n);
    EXPECT_EQ(back.rows[i].h, r.rows[i].h);
    EXPECT_EQ(back.rows[i].l1, r.rows[i].l1);
    EXPECT_EQ(back.rows[i].linf, r.rows[i].linf);
    EXPECT_EQ(back.rows[i].alt_l1, r.rows[i].alt_l1);
  }
  EXPECT_NEAR(*back.summary_order(), 2.0, 1e-12);
}

TEST(Report, MarkdownHasOneRowPerGrid) {
  std::stringstream ss;
  write_report(ss, small_report(), ReportFormat::Markdown);
  int rows = 0;
  std::string line;
  while (std::getline(ss, line))
    if (line.starts_with("| ") && std::isdigit(static_cast<unsigned char>(line[2]))) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Report, GnuplotPairs) {
  std::stringstream ss;
  write_report(ss, small_report(), ReportFormat::GnuplotDat);
  int pairs = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    double h = 0, e = 0;
    std::istringstream ls(line);
    ASSERT_TRUE(ls >> h >> e) << line;
    ++pairs;
  }
  EXPECT_EQ(pairs, 3);
}

TEST(Report, UnwritablePath) {
  EXPECT_THROW(emit_report(small_report(), ReportFormat::Csv, "/nonexistent-dir/x/report.csv"), std::runtime_error);
}

TEST(Study, SteadyAdvectionFdIsThirdOrder) {
  const CaseConfig c = make_config(parse("problem=steady-advection\nflavor=fd\nkappa=1/3\n"));
  const ConvergenceReport r = run_convergence_study(c);
  ASSERT_EQ(r.rows.size(), 4u);
  ASSERT_TRUE(r.summary_order().has_value());
  EXPECT_NEAR(*r.summary_order(), 3.0, 0.15);
}

TEST(Study, SteadyBurgersFdIsSecondOrder) {
  const CaseConfig c = make_config(parse("problem=steady-burgers\nflavor=fd\nkappa=1/3\n"));
  const ConvergenceReport r = run_convergence_study(c);
  EXPECT_NEAR(*r.summary_order(), 2.0, 0.15);
}

TEST(Study, RerunsAreByteIdentical) {
  const CaseConfig c = make_config(parse("problem=mms\ngrid=tri-irregular\nseed=3\ngrids=12,16\n"));
  std::stringstream a, b;
  write_report(a, run_convergence_study(c), ReportFormat::Csv);
  write_report(b, run_convergence_study(c), ReportFormat::Csv);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Study, FailureNamesTheGrid) {
  const CaseConfig c = make_config(parse("problem=steady-burgers\ngrids=4,16\n"));
  try {
    run_convergence_study(c);
    FAIL() << "expected a failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("n=4"), std::string::npos) << e.what();
  }
}

TEST(Study, WritesOutputFile) {
  const auto dir = std::filesystem::temp_directory_path() / "umuscl_harness_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "trunc").string();
  const CaseConfig c =
      make_config(parse("study=truncation\nproblem=mms-scalar\ngrids=16,32\nformat=dat\noutput=" + prefix + "\n"));
  const ConvergenceReport r = run_convergence_study(c);
  EXPECT_EQ(r.summary_variable, "total");
  EXPECT_TRUE(std::filesystem::exists(prefix + ".dat"));
  std::filesystem::remove_all(dir);
}

TEST(Study, JumpProbeOnQuadraticField) {
  const CaseConfig c = make_config(parse("study=jump\nfield=quadratic\nlsq=quadratic\nkappa=1/2\ngrids=16,24\n"));
  const ConvergenceReport r = run_convergence_study(c);
  for (double e : r.errors("jump", Norm::Linf)) EXPECT_LE(e, 1e-10);
  for (double e : r.errors("error", Norm::Linf)) EXPECT_LE(e, 1e-10);
}
