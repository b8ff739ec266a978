#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"
#include "hmlab/io.hpp"

namespace {

using namespace hmlab;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
};

RunConfig load_config(const GlobalArgs& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = parse_config_file(g.config_path);
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (g.seed >= 0) cfg.seed = g.seed;
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

ManifoldModel calibrated_model(const RunConfig& cfg) {
  ManifoldModel model = model_from_config(cfg);
  calibrate_inversion(model, spectral_setup_from_config(cfg));
  return model;
}

int cmd_model(const RunConfig& cfg) {
  ManifoldModel model = calibrated_model(cfg);
  std::cout << "kind: " << cfg.model_kind << "\n"
            << "n: " << model.dimension() << "\n"
            << "rho: " << format_double(model.rho()) << "\n"
            << "r_max: " << format_double(model.r_max()) << "\n"
            << "grid_size: " << model.grid().size() << "\n";
  std::cout << "density samples:\n";
  for (double r : {0.5, 1.0, 2.0, 5.0})
    std::cout << "  A(" << format_double(r)
              << ") = " << format_double(model.density(r)) << "\n";
  const SpectralState& st = spectral_state(model);
  std::cout << "kappa: " << format_double(st.kappa()) << "\n"
            << "calibration_defect: " << format_double(st.calibration_defect())
            << "\n";
  return 0;
}

int cmd_eigen(const RunConfig& cfg, const std::string& lambda_str) {
  ManifoldModel model = model_from_config(cfg);
  const cplx lambda = parse_complex(lambda_str);
  RadialEigenfunction phi = radial_eigenfunction(model, lambda);
  const std::string path = out_path(cfg, "eigen.csv");
  write_eigen_csv(path, phi, model);
  std::cout << "lambda: " << format_complex(lambda) << "\n"
            << "ode_residual: " << format_double(phi.ode_residual) << "\n"
            << "csv: " << path << "\n";
  return 0;
}

int cmd_transform(const RunConfig& cfg, const std::string& input,
                  bool roundtrip) {
  ManifoldModel model = calibrated_model(cfg);
  RadialFunction f = read_radial_csv(input, model);
  SpectralFunction spec = spherical_transform_grid(model, f);
  const std::string spec_path = out_path(cfg, "spectral.csv");
  write_spectral_csv(spec_path, spec);
  std::cout << "spectral_csv: " << spec_path << "\n";
  if (roundtrip) {
    RadialFunction back = inverse_transform(model, spec);
    const std::string back_path = out_path(cfg, "roundtrip.csv");
    write_radial_csv(back_path, back);
    double num = 0.0, den = 0.0;
    const RadialGrid& grid = model.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double wA = grid.weights[i] * model.density(grid.nodes[i]);
      num += wA * std::norm(back.values[i] - f.values[i]);
      den += wA * std::norm(f.values[i]);
    }
    if (den == 0.0) throw InputError("transform --roundtrip: zero input");
    std::cout << "roundtrip_csv: " << back_path << "\n"
              << "l2_defect: " << format_double(std::sqrt(num / den)) << "\n";
  }
  return 0;
}

int cmd_heat(const RunConfig& cfg, double t, const std::string& kernel_out) {
  ManifoldModel model = calibrated_model(cfg);
  RadialFunction h = heat_kernel_profile(model, t);
  const cplx mass = radial_integral(model, h);
  std::cout << "t: " << format_double(t) << "\n"
            << "kernel_mass: " << format_complex(mass) << "\n"
            << "kernel_at_1: "
            << format_complex(RadialInterpolant(h.grid->nodes, h.values)(1.0))
            << "\n";
  if (!kernel_out.empty()) {
    write_radial_csv(kernel_out, h);
    std::cout << "kernel_csv: " << kernel_out << "\n";
  }
  return 0;
}

std::vector<Rotation> parse_rotation_list(const std::string& s) {
  std::vector<Rotation> rotations;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) rotations.push_back(parse_rotation(item));
  if (rotations.empty()) throw InputError("empty rotation list");
  return rotations;
}

int cmd_certify(const RunConfig& cfg, const std::string& mult_path, double p,
                const std::string& lambda0_str, const std::string& rotations) {
  ManifoldModel model = calibrated_model(cfg);
  Multiplier mult = read_multiplier_file(mult_path, model);
  const cplx lambda0 = parse_complex(lambda0_str);
  const cplx nu = symbol_eval(model, mult, lambda0);
  ChaosCertificate cert = certify_mixing(model, mult, nu, lambda0, p);
  std::vector<Rotation> rots = parse_rotation_list(rotations);
  attach_roots(cert,
               find_unimodular_roots(model, mult, nu, lambda0, rots, p));
  const std::string path = out_path(cfg, "certificate.json");
  write_certificate_json(path, cert);
  std::cout << "certificate: " << path << "\n"
            << "verdict: " << to_string(cert.verdict) << "\n";
  return cert.verdict == Verdict::inconclusive ? 1 : 0;
}

int cmd_periodic(const RunConfig& cfg, const std::string& mult_path,
                 const std::string& rotation_str, double p,
                 const std::string& lambda0_str, bool verify) {
  ManifoldModel model = calibrated_model(cfg);
  Multiplier mult = read_multiplier_file(mult_path, model);
  const cplx lambda0 = parse_complex(lambda0_str);
  const cplx nu = symbol_eval(model, mult, lambda0);
  const Rotation rot = parse_rotation(rotation_str);
  const Rotation rots[] = {rot};
  auto roots = find_unimodular_roots(model, mult, nu, lambda0, rots, p);
  if (!roots.front().found) {
    std::cout << "root: not found at resolution (best residual "
              << format_double(roots.front().residual) << ")\n";
    return 1;
  }
  const double centers[] = {0.0};
  const cplx coeffs[] = {cplx(1.0)};
  PeriodicPoint point = build_periodic_point(roots, centers, coeffs);
  std::cout << "lambda: " << format_complex(roots.front().lambda) << "\n"
            << "residual: " << format_double(roots.front().residual) << "\n"
            << "period: " << point.period << "\n"
            << "diagonal_defect: "
            << format_double(diagonal_defect(model, mult, nu, point)) << "\n";
  if (verify) {
    const double defect = verify_periodic(model, mult, point, nu);
    std::cout << "kernel_defect: " << format_double(defect) << "\n"
              << "verified: " << (defect < 1e-2 ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_orbit(const RunConfig& cfg, const std::string& mult_path,
              const std::string& nu_str, int steps, double p,
              const std::string& lambdas_str) {
  ManifoldModel model = calibrated_model(cfg);
  Multiplier mult = read_multiplier_file(mult_path, model);
  const cplx nu = parse_complex(nu_str);
  PeriodicPoint state;
  std::stringstream ss(lambdas_str);
  std::string item;
  while (std::getline(ss, item, ','))
    state.terms.push_back({parse_complex(item), Rotation{0, 1}, 0.0, 1.0});
  if (state.terms.empty()) throw InputError("orbit: empty component list");
  OrbitRecord rec = simulate_orbit(model, mult, nu, state, steps, p);
  const std::string path = out_path(cfg, "orbit.csv");
  write_orbit_csv(path, rec);
  std::cout << "orbit_csv: " << path << "\n";
  for (const std::string& label : rec.labels)
    std::cout << "component: " << label << "\n";
  if (rec.overflowed) std::cout << "overflow: stopped early\n";
  return 0;
}

int cmd_heat_sweep(const RunConfig& cfg, double p, double t0,
                   const std::string& c_list_path) {
  ManifoldModel model = calibrated_model(cfg);
  std::ifstream in(c_list_path);
  if (!in) throw InputError("cannot open '" + c_list_path + "'");
  std::vector<cplx> cs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    cs.push_back(parse_complex(line));
  }
  if (cs.empty()) throw InputError("empty c list '" + c_list_path + "'");

  const Multiplier mult = heat_multiplier(t0);
  std::vector<HeatSweepRow> rows;
  for (cplx c : cs) {
    HeatSweepRow row;
    row.c = c;
    row.c_p = chaos_threshold(model, p);
    row.above_threshold = c.real() > row.c_p;
    if (!row.above_threshold) {
      row.s = row.t = std::nan("");
      row.verdict = "below_threshold";
    } else {
      const cplx lambda = solve_strip_parameter(model, p, c);
      row.s = lambda.real();
      row.t = lambda.imag();
      const cplx nu = std::exp(-c * t0);
      ChaosCertificate cert = certify_mixing(model, mult, nu, lambda, p);
      row.verdict = to_string(cert.verdict);
    }
    rows.push_back(row);
  }
  const std::string path = out_path(cfg, "heat_sweep.csv");
  write_heat_sweep_csv(path, rows);
  std::cout << "heat_sweep_csv: " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for radial harmonic analysis and "
               "multiplier dynamics on model manifolds"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "seed recorded in outputs");

  auto* sc_model = app.add_subcommand("model", "report model and calibration");

  std::string lambda_str = "1";
  auto* sc_eigen = app.add_subcommand("eigen", "radial eigenfunction profile");
  sc_eigen->add_option("--lambda", lambda_str, "spectral parameter RE[+IMi]")
      ->required();

  std::string input_csv;
  bool roundtrip = false;
  auto* sc_transform =
      app.add_subcommand("transform", "spherical Fourier transform");
  sc_transform->add_option("--input", input_csv, "radial profile CSV")
      ->required();
  sc_transform->add_flag("--roundtrip", roundtrip, "also invert and report defect");

  double heat_t = 1.0;
  std::string kernel_out;
  auto* sc_heat = app.add_subcommand("heat", "heat kernel diagnostics");
  sc_heat->add_option("--t", heat_t, "heat time")->required();
  sc_heat->add_option("--kernel-out", kernel_out, "kernel profile CSV path");

  std::string mult_path, lambda0_str, rotations_str = "0/1,1/24";
  double p_exp = 4.0;
  auto* sc_certify = app.add_subcommand("certify", "chaos certificate");
  sc_certify->add_option("--multiplier", mult_path, "multiplier JSON")
      ->required();
  sc_certify->add_option("--p", p_exp, "Lebesgue exponent")->required();
  sc_certify->add_option("--lambda0", lambda0_str, "base spectral point")
      ->required();
  sc_certify->add_option("--rotations", rotations_str,
                         "comma-separated rotations for root search");

  std::string rotation_str;
  bool verify = false;
  std::string p_mult_path, p_lambda0_str;
  double p_exp2 = 4.0;
  auto* sc_periodic = app.add_subcommand("periodic", "periodic point from a "
                                         "unimodular root");
  sc_periodic->add_option("--multiplier", p_mult_path, "multiplier JSON")
      ->required();
  sc_periodic->add_option("--rotation", rotation_str, "rotation P/Q")
      ->required();
  sc_periodic->add_option("--p", p_exp2, "Lebesgue exponent")->required();
  sc_periodic->add_option("--lambda0", p_lambda0_str, "base spectral point")
      ->required();
  sc_periodic->add_flag("--verify", verify, "kernel-side verification");

  std::string o_mult_path, nu_str, o_lambdas = "0.5";
  int steps = 50;
  double o_p = 2.0;
  auto* sc_orbit = app.add_subcommand("orbit", "orbit norm simulation");
  sc_orbit->add_option("--multiplier", o_mult_path, "multiplier JSON")
      ->required();
  sc_orbit->add_option("--nu", nu_str, "normalization RE+IMi")->required();
  sc_orbit->add_option("--steps", steps, "iteration count")->required();
  sc_orbit->add_option("--p", o_p, "norm exponent");
  sc_orbit->add_option("--lambdas", o_lambdas,
                       "comma-separated component spectral points");

  double hs_p = 4.0, hs_t0 = 1.0;
  std::string c_list_path;
  auto* sc_sweep = app.add_subcommand("heat-sweep", "threshold sweep over c");
  sc_sweep->add_option("--p", hs_p, "Lebesgue exponent")->required();
  sc_sweep->add_option("--t0", hs_t0, "heat time")->required();
  sc_sweep->add_option("--c-list", c_list_path, "file with one c per line")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_config(g);
    if (sc_model->parsed()) return cmd_model(cfg);
    if (sc_eigen->parsed()) return cmd_eigen(cfg, lambda_str);
    if (sc_transform->parsed()) return cmd_transform(cfg, input_csv, roundtrip);
    if (sc_heat->parsed()) return cmd_heat(cfg, heat_t, kernel_out);
    if (sc_certify->parsed())
      return cmd_certify(cfg, mult_path, p_exp, lambda0_str, rotations_str);
    if (sc_periodic->parsed())
      return cmd_periodic(cfg, p_mult_path, rotation_str, p_exp2,
                          p_lambda0_str, verify);
    if (sc_orbit->parsed())
      return cmd_orbit(cfg, o_mult_path, nu_str, steps, o_p, o_lambdas);
    if (sc_sweep->parsed()) return cmd_heat_sweep(cfg, hs_p, hs_t0, c_list_path);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
