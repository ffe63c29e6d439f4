// Command-line front end: convergence studies, the 1D multiscale compression
// study, and raw dumps of the assembled operators.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "l1dg/driver.hpp"
#include "l1dg/io.hpp"

namespace {

using nlohmann::json;

int run_converge(const std::string& problem_name, const std::vector<int>& Ns, double tau,
                 double alpha, std::optional<double> lambda, std::optional<double> tol,
                 long max_iter, const std::string& out_dir) {
  const l1dg::Problem problem = l1dg::make_problem(problem_name);
  l1dg::StudyConfig cfg;
  cfg.tau = tau;
  cfg.alpha = alpha;
  cfg.lambda = lambda;
  cfg.eps_stop = tol;
  cfg.max_iterations = max_iter;
  const l1dg::ErrorReport report = l1dg::run_convergence(problem, Ns, cfg);
  const std::string csv = l1dg::error_report_csv(report);
  std::cout << csv;

  bool all_converged = true;
  json j;
  j["problem"] = problem_name;
  j["tau"] = tau;
  j["alpha"] = alpha;
  j["rows"] = json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"N", r.N},
                         {"l2", r.l2},
                         {"h1", r.h1},
                         {"h2", r.h2},
                         {"q_l2", r.q_l2},
                         {"linf", r.linf},
                         {"iterations", r.iterations},
                         {"converged", r.converged}});
    all_converged = all_converged && r.converged;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    l1dg::write_text_file(out_dir + "/" + problem_name + ".csv", csv);
    l1dg::write_text_file(out_dir + "/" + problem_name + ".json", j.dump(2) + "\n");
  }
  if (!all_converged) {
    std::cerr << "error: iteration did not converge on at least one level\n";
    return 2;
  }
  return 0;
}

int run_multiscale_cmd(double t, double kink_n, int level, const std::vector<double>& thresholds,
                       double tau, const std::string& out_dir) {
  l1dg::StudyConfig cfg;
  cfg.tau = tau;
  const l1dg::MultiscaleStudy study = l1dg::run_multiscale(t, kink_n, level, thresholds, cfg);
  std::cout << "level " << study.level << "  single-scale l2 error " << study.single_scale_error
            << "\n";
  std::cout << "threshold,l2_error,sparsity_percent\n";
  json j;
  j["t"] = t;
  j["kink_n"] = kink_n;
  j["level"] = study.level;
  j["single_scale_error"] = study.single_scale_error;
  j["rows"] = json::array();
  for (const auto& r : study.rows) {
    std::cout << r.threshold << "," << r.l2_error << "," << r.sparsity_percent << "\n";
    j["rows"].push_back({{"threshold", r.threshold},
                         {"l2_error", r.l2_error},
                         {"sparsity_percent", r.sparsity_percent}});
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    l1dg::write_text_file(out_dir + "/multiscale.json", j.dump(2) + "\n");
    l1dg::write_text_file(out_dir + "/multiscale_coefficients.txt",
                          l1dg::vector_to_text(study.coefficients));
  }
  if (!study.converged) {
    std::cerr << "error: iteration did not converge\n";
    return 2;
  }
  return 0;
}

int run_dump(const std::string& problem_name, int n, double tau, const std::string& out_dir) {
  const l1dg::Problem problem = l1dg::make_problem(problem_name);
  const l1dg::Mesh mesh = problem.build_mesh(n);
  const l1dg::DofLayout layout = l1dg::DofLayout::of(mesh);
  const l1dg::AssembledSystem sys =
      l1dg::assemble_system(mesh, layout, problem.coeff, problem.exact.f, problem.exact.g, tau);
  if (out_dir.empty()) {
    std::cout << l1dg::dump_mesh(mesh);
    std::cout << "B\n" << l1dg::sparse_to_coo(sys.B);
    std::cout << "b\n" << l1dg::vector_to_text(sys.b);
    std::cout << "L\n" << l1dg::sparse_to_coo(sys.L);
    std::cout << "d\n" << l1dg::vector_to_text(sys.d);
  } else {
    std::filesystem::create_directories(out_dir);
    l1dg::write_text_file(out_dir + "/mesh.txt", l1dg::dump_mesh(mesh));
    l1dg::write_text_file(out_dir + "/B.coo", l1dg::sparse_to_coo(sys.B));
    l1dg::write_text_file(out_dir + "/b.txt", l1dg::vector_to_text(sys.b));
    l1dg::write_text_file(out_dir + "/L.coo", l1dg::sparse_to_coo(sys.L));
    l1dg::write_text_file(out_dir + "/d.txt", l1dg::vector_to_text(sys.d));
    std::cout << "wrote mesh.txt B.coo b.txt L.coo d.txt to " << out_dir << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L1-stabilized mixed DG solver for non-divergence form elliptic problems"};
  app.require_subcommand(1);

  // converge
  auto* conv = app.add_subcommand("converge", "run a mesh-refinement study");
  std::string problem_name;
  std::vector<int> Ns{4, 8, 16, 32, 64};
  double tau = 1.0, alpha = 1.0;
  double lambda_in = -1.0, tol_in = -1.0;
  long max_iter = 200000;
  std::string out_dir;
  conv->add_option("--problem", problem_name, "problem name (e.g. square-constant)")->required();
  conv->add_option("--n", Ns, "comma-separated mesh sizes")->delimiter(',');
  conv->add_option("--tau", tau, "penalty weight");
  conv->add_option("--alpha", alpha, "proximity step parameter");
  conv->add_option("--lambda", lambda_in, "override the automatic lambda");
  conv->add_option("--tol", tol_in, "stopping tolerance");
  conv->add_option("--max-iter", max_iter, "iteration cap per level");
  conv->add_option("--out", out_dir, "output directory for csv/json");

  // multiscale
  auto* multi = app.add_subcommand("multiscale", "1D kink compression study");
  double t = 1.0 / 6.0, kink_n = 3.0, ms_tau = 1.0;
  int level = 7;
  std::vector<double> thresholds{1e-2, 1e-3, 1e-4};
  std::string ms_out;
  multi->add_option("--t", t, "kink location in (0,1)");
  multi->add_option("--kink-n", kink_n, "kink exponent");
  multi->add_option("--level", level, "dyadic refinement level J (mesh has 2^J cells)");
  multi->add_option("--thresholds", thresholds, "comma-separated truncation thresholds")->delimiter(',');
  multi->add_option("--tau", ms_tau, "penalty weight");
  multi->add_option("--out", ms_out, "output directory");

  // dump
  auto* dump = app.add_subcommand("dump", "write the mesh and assembled operators");
  std::string dump_problem;
  int dump_n = 4;
  double dump_tau = 1.0;
  std::string dump_out;
  dump->add_option("--problem", dump_problem, "problem name")->required();
  dump->add_option("--n", dump_n, "mesh size")->required();
  dump->add_option("--tau", dump_tau, "penalty weight");
  dump->add_option("--out", dump_out, "output directory (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed())
      return run_converge(problem_name, Ns, tau, alpha,
                          lambda_in > 0 ? std::optional<double>(lambda_in) : std::nullopt,
                          tol_in > 0 ? std::optional<double>(tol_in) : std::nullopt, max_iter,
                          out_dir);
    if (multi->parsed()) return run_multiscale_cmd(t, kink_n, level, thresholds, ms_tau, ms_out);
    if (dump->parsed()) return run_dump(dump_problem, dump_n, dump_tau, dump_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
