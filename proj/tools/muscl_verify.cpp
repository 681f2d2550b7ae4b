// muscl-verify: command-line front end for the solvers, studies and probes.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "umuscl/harness.hpp"
#include "umuscl/mesh.hpp"

using namespace umuscl;

namespace {

// Options that map one-to-one onto configuration keys.
struct KeyOptions {
  std::map<std::string, std::string> flags;
  std::string config_path;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { flags[key] = v; }, help);
  }
  void add_common(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file");
    app->add_option("--set", sets, "extra key=value overrides, applied last");
  }
  // `defaults` fill keys that neither the file nor the flags set
  ConfigMap build(std::vector<std::pair<std::string, std::string>> defaults = {}) const {
    ConfigMap map = config_path.empty() ? ConfigMap{} : load_config_file(config_path);
    for (const auto& [k, v] : defaults) map.try_emplace(k, v);
    for (const auto& [k, v] : flags) map[k] = v;
    for (const std::string& s : sets) apply_override(map, s);
    return map;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification driver for U-MUSCL edge-based schemes"};
  app.require_subcommand(1);

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a grid, print its summary, optionally write it");
  std::string mesh_grid = "quad", mesh_out;
  int mesh_nx = 8, mesh_ny = 0;
  std::uint64_t mesh_seed = 1;
  mesh_cmd->add_option("--grid", mesh_grid, "quad | tri-right | tri-equi | tri-irregular");
  mesh_cmd->add_option("--nx", mesh_nx, "nodes in x");
  mesh_cmd->add_option("--ny", mesh_ny, "nodes in y (default nx)");
  mesh_cmd->add_option("--seed", mesh_seed, "perturbation seed (irregular family)");
  mesh_cmd->add_option("--out", mesh_out, "write the mesh in ASCII form");

  // run1d
  auto* run1d_cmd = app.add_subcommand("run1d", "one 1D run");
  KeyOptions k1;
  k1.add_common(run1d_cmd);
  for (auto [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--problem", "problem"}, {"--flavor", "flavor"}, {"--kappa", "kappa"}, {"--theta", "theta"},
           {"--kappa-s", "kappa_s"}, {"--kappa3", "kappa3"}, {"--semantics", "semantics"}, {"--source", "source"},
           {"--mass-matrix", "mass_matrix"}, {"--norm", "norm"}, {"--n", "grids"}, {"--dt", "dt"},
           {"--nsteps", "nsteps"}, {"--cfl", "cfl"}, {"--t-final", "t_final"}, {"--drop", "drop"}})
    k1.add(run1d_cmd, flag, key, key);
  std::string profile_path, out1d_path;
  run1d_cmd->add_option("--profile", profile_path, "write x, u, exact columns");
  run1d_cmd->add_option("--out", out1d_path, "also write the CSV line to this file");

  // run2d
  auto* run2d_cmd = app.add_subcommand("run2d", "one 2D run");
  KeyOptions k2;
  k2.add_common(run2d_cmd);
  for (auto [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--case", "problem"}, {"--scheme", "scheme"}, {"--kappa", "kappa"}, {"--theta", "theta"},
           {"--kappa-s", "kappa_s"}, {"--flux", "flux"}, {"--grid", "grid"}, {"--n", "grids"}, {"--seed", "seed"},
           {"--C", "C"}, {"--law", "law"}, {"--lsq", "lsq"}, {"--dt", "dt"}, {"--nsteps", "nsteps"},
           {"--drop", "drop"}, {"--entropy-fix", "entropy_fix"}})
    k2.add(run2d_cmd, flag, key, key);
  std::string dump_path;
  run2d_cmd->add_option("--dump", dump_path, "write node id, x, y, rho, u, v, p");

  // study
  auto* study_cmd = app.add_subcommand("study", "convergence study from a configuration");
  KeyOptions ks;
  ks.add_common(study_cmd);
  std::vector<std::string> study_kv;
  study_cmd->add_option("overrides", study_kv, "key=value overrides");
  std::string study_format = "markdown";
  study_cmd->add_option("--print", study_format, "stdout format: csv | gnuplot-dat | markdown");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "truncation-error or jump/error probe over a grid sequence");
  KeyOptions kp;
  kp.add_common(probe_cmd);
  std::string probe_kind = "te";
  probe_cmd->add_option("--kind", probe_kind, "te | jump")->check(CLI::IsMember({"te", "jump"}));
  for (auto [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--case", "problem"}, {"--scheme", "scheme"}, {"--kappa", "kappa"}, {"--theta", "theta"},
           {"--kappa-s", "kappa_s"}, {"--grid", "grid"}, {"--grids", "grids"}, {"--lsq", "lsq"},
           {"--field", "field"}, {"--law", "law"}, {"--C", "C"}, {"--seed", "seed"}})
    kp.add(probe_cmd, flag, key, key);

  // identities
  auto* id_cmd = app.add_subcommand("identities", "discrete metric identities on one grid");
  std::string id_grid = "tri-right";
  int id_n = 16;
  std::uint64_t id_seed = 1;
  id_cmd->add_option("--grid", id_grid, "grid family");
  id_cmd->add_option("--n", id_n, "nodes per direction");
  id_cmd->add_option("--seed", id_seed, "perturbation seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh_cmd) {
      const Mesh mesh = generate_grid(parse_grid_family(mesh_grid), mesh_nx, mesh_ny > 0 ? mesh_ny : mesh_nx, {},
                                      mesh_seed);
      const DualMetrics m = compute_dual_metrics(mesh);
      double vol = 0.0;
      for (double v : m.volume) vol += v;
      std::printf("family=%s nodes=%d edges=%d elements=%d volume=%.15g h=%.10g\n",
                  std::string(to_string(mesh.family())).c_str(), mesh.num_nodes(), mesh.num_edges(),
                  mesh.num_elements(), vol, mesh.spacing());
      if (!mesh_out.empty()) {
        std::ofstream out(mesh_out);
        if (!out) throw std::runtime_error("cannot write '" + mesh_out + "'");
        write_mesh(out, mesh);
      }
      return 0;
    }

    if (*run1d_cmd) {
      ConfigMap map = k1.build({{"grids", "64"}});
      const CaseConfig cfg = make_config(map);
      if (!cfg.is_1d()) throw ConfigError("run1d needs a 1D problem");
      if (cfg.grids.size() != 1) throw ConfigError("run1d takes a single grid");
      const int n = cfg.grids.front();
      const Run1DResult r = run_1d(cfg, n);
      const Case1D c = cfg.case1d();
      std::vector<double> ex(n);
      for (int i = 0; i < n; ++i) ex[i] = c.exact(cfg.norm, r.grid.x(i), r.grid.h, r.time);
      const ErrorNorms e = error_norms_1d(r.u, ex);
      char csv[512];
      std::snprintf(csv, sizeof csv, "n,h,l1_error,linf_error,l2_error,semantics,iterations\n%d,%.17g,%.17g,%.17g,%.17g,%s,%d\n",
                    n, r.grid.h, e.l1, e.linf, e.l2, std::string(to_string(cfg.norm)).c_str(), r.iterations);
      std::fputs(csv, stdout);
      if (!out1d_path.empty()) {
        std::ofstream out(out1d_path);
        if (!out) throw std::runtime_error("cannot write '" + out1d_path + "'");
        out << csv;
      }
      if (!profile_path.empty()) {
        std::ofstream out(profile_path);
        if (!out) throw std::runtime_error("cannot write '" + profile_path + "'");
        char buf[128];
        for (int i = 0; i < n; ++i) {
          std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", r.grid.x(i), r.u[i], ex[i]);
          out << buf;
        }
      }
      return 0;
    }

    if (*run2d_cmd) {
      ConfigMap map = k2.build({{"problem", "mms"}, {"grids", "32"}});
      const CaseConfig cfg = make_config(map);
      if (cfg.is_1d()) throw ConfigError("run2d needs a 2D case");
      if (cfg.grids.size() != 1) throw ConfigError("run2d takes a single grid");
      const Run2DResult r = run_case_2d(make_run2d_spec(cfg, cfg.grids.front()));
      const bool euler = parse_case_2d(cfg.problem) != Case2DKind::MmsScalar;
      const std::vector<std::string> names = euler ? std::vector<std::string>{"rho", "u", "v", "p"}
                                                   : std::vector<std::string>{"u"};
      std::printf("n,nodes,h");
      for (const auto& v : names) std::printf(",l1_%s,linf_%s", v.c_str(), v.c_str());
      std::printf("\n%d,%d,%.17g", cfg.grids.front(), r.nodes, r.h);
      for (std::size_t v = 0; v < names.size(); ++v) std::printf(",%.17g,%.17g", r.errors.l1[v], r.errors.linf[v]);
      std::printf("\n");
      if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        if (!out) throw std::runtime_error("cannot write '" + dump_path + "'");
        char buf[256];
        for (int i = 0; i < r.nodes; ++i) {
          const Point p = r.mesh.node(i);
          const Vec4& w = r.w[i];
          if (euler)
            std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g\n", i, p.x, p.y, w[0], w[1], w[2],
                          w[3]);
          else
            std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", i, p.x, p.y, w[0]);
          out << buf;
        }
      }
      return 0;
    }

    if (*study_cmd) {
      ConfigMap map = ks.build();
      for (const std::string& s : study_kv) apply_override(map, s);
      const CaseConfig cfg = make_config(map);
      const ConvergenceReport rep = run_convergence_study(cfg);
      write_report(std::cout, rep, parse_report_format(study_format));
      return 0;
    }

    if (*probe_cmd) {
      ConfigMap map = kp.build();
      map["study"] = probe_kind == "te" ? "truncation" : "jump";
      const CaseConfig cfg = make_config(map);
      const ConvergenceReport rep = run_convergence_study(cfg);
      write_report(std::cout, rep, ReportFormat::Markdown);
      std::cout << "\n";
      write_report(std::cout, rep, ReportFormat::Csv);
      return 0;
    }

    if (*id_cmd) {
      const Mesh mesh = generate_grid(parse_grid_family(id_grid), id_n, id_n, {}, id_seed);
      const DualMetrics m = compute_dual_metrics(mesh);
      const MetricIdentityReport r = metric_identity_report(mesh, m);
      std::printf("grid=%s n=%d nodes_checked=%d\n", id_grid.c_str(), id_n, r.nodes_checked);
      std::printf("sum_normals      %.3e\n", r.sum_normals);
      std::printf("first_moment_x   %.3e\n", r.first_moment_x);
      std::printf("first_moment_y   %.3e\n", r.first_moment_y);
      auto opt = [](const char* name, const std::optional<double>& v) {
        if (v) std::printf("%-16s %.3e\n", name, *v);
        else std::printf("%-16s n/a (not a simplex grid)\n", name);
      };
      opt("moment_xx", r.moment_xx);
      opt("moment_yy", r.moment_yy);
      opt("moment_xy", r.moment_xy);
      std::printf("partial_volumes  %.3e\n", r.partial_volume_sum);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "muscl-verify: %s\n", e.what());
    return 1;
  }
  return 0;
}
