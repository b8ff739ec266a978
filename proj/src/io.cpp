#include "hmlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

using nlohmann::json;

json parse_json_or_throw(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + what);
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path,
                                               const std::string& header,
                                               std::size_t ncols) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw InputError("CSV '" + path + "': expected header '" + header +
                     "', found '" + line + "'");
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        throw InputError("CSV '" + path + "' line " + std::to_string(lineno) +
                         ": bad number '" + cell + "'");
      }
    }
    if (row.size() != ncols)
      throw InputError("CSV '" + path + "' line " + std::to_string(lineno) +
                       ": expected " + std::to_string(ncols) + " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw InputError(std::string("config field '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j = parse_json_or_throw(text, "config");
  RunConfig cfg;
  if (j.contains("model")) {
    const json& m = j["model"];
    if (m.contains("kind")) cfg.model_kind = m["kind"].get<std::string>();
    cfg.dimension = int(get_num(m, "n", cfg.dimension));
    cfg.r_max = get_num(m, "r_max", cfg.r_max);
    cfg.grid_size = int(get_num(m, "grid_size", cfg.grid_size));
  }
  if (j.contains("spectral")) {
    const json& s = j["spectral"];
    cfg.lambda_max = get_num(s, "lambda_max", cfg.lambda_max);
    cfg.spectral_nodes = int(get_num(s, "num_nodes", cfg.spectral_nodes));
  }
  if (j.contains("tolerances")) {
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number() || v.get<double>() <= 0.0)
        throw InputError("tolerance '" + k + "' must be a positive number");
      cfg.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("output_dir"))
    cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<long long>();
  if (cfg.grid_size < 16 || cfg.grid_size > (1 << 20))
    throw InputError("grid_size must lie in [16, 2^20]");
  if (cfg.spectral_nodes < 16 || cfg.spectral_nodes > (1 << 20))
    throw InputError("spectral num_nodes must lie in [16, 2^20]");
  if (cfg.r_max <= 0.0 || cfg.lambda_max <= 0.0)
    throw InputError("r_max and lambda_max must be positive");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  return parse_config_text(slurp(path));
}

ManifoldModel model_from_config(const RunConfig& cfg) {
  if (cfg.model_kind == "hyperbolic")
    return build_model(ModelKind::hyperbolic, cfg.dimension, cfg.r_max,
                       cfg.grid_size);
  throw UnsupportedModelError("unknown model kind '" + cfg.model_kind + "'");
}

SpectralSetup spectral_setup_from_config(const RunConfig& cfg) {
  SpectralSetup setup;
  setup.lambda_max = cfg.lambda_max;
  setup.num_nodes = std::size_t(cfg.spectral_nodes);
  return setup;
}

void write_radial_csv(const std::string& path, const RadialFunction& f) {
  auto out = open_out(path);
  out << "r,re,im\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out << format_double(f.grid->nodes[i]) << ","
        << format_double(f.values[i].real()) << ","
        << format_double(f.values[i].imag()) << "\n";
}

RadialFunction read_radial_csv(const std::string& path,
                               const ManifoldModel& model) {
  const auto rows = read_csv_rows(path, "r,re,im", 3);
  if (rows.size() < 2) throw InputError("CSV '" + path + "': too few samples");
  std::vector<double> radii;
  std::vector<cplx> values;
  for (const auto& row : rows) {
    if (!radii.empty() && row[0] <= radii.back())
      throw InputError("CSV '" + path + "': radii must increase");
    radii.push_back(row[0]);
    values.push_back(cplx(row[1], row[2]));
  }
  RadialFunction f;
  f.grid = model.grid_ptr();
  f.label = std::filesystem::path(path).stem().string();
  const auto& nodes = model.grid().nodes;
  bool on_grid = radii.size() == nodes.size();
  for (std::size_t i = 0; on_grid && i < nodes.size(); ++i)
    on_grid = std::abs(radii[i] - nodes[i]) <= 1e-9 * (1.0 + nodes[i]);
  if (on_grid) {
    f.values = std::move(values);
  } else {
    const RadialInterpolant itp(radii, values);
    f.values.reserve(nodes.size());
    for (double r : nodes) f.values.push_back(itp(r));
  }
  return f;
}

void write_eigen_csv(const std::string& path, const RadialEigenfunction& phi,
                     const ManifoldModel& model) {
  auto out = open_out(path);
  out << "r,re_phi,im_phi,re_dphi,im_dphi\n";
  const auto& nodes = model.grid().nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out << format_double(nodes[i]) << ","
        << format_double(phi.values[i].real()) << ","
        << format_double(phi.values[i].imag()) << ","
        << format_double(phi.derivative_values[i].real()) << ","
        << format_double(phi.derivative_values[i].imag()) << "\n";
}

void write_ctable_csv(const std::string& path,
                      const std::vector<CFunctionSample>& table) {
  auto out = open_out(path);
  out << "lambda,re_c,im_c,residual\n";
  for (const auto& s : table)
    out << format_double(s.lambda) << "," << format_double(s.c_value.real())
        << "," << format_double(s.c_value.imag()) << ","
        << format_double(s.fit_residual) << "\n";
}

void write_spectral_csv(const std::string& path, const SpectralFunction& spec) {
  auto out = open_out(path);
  out << "lambda_re,lambda_im,re,im\n";
  for (std::size_t j = 0; j < spec.values.size(); ++j)
    out << format_double(spec.lambda_nodes[j].real()) << ","
        << format_double(spec.lambda_nodes[j].imag()) << ","
        << format_double(spec.values[j].real()) << ","
        << format_double(spec.values[j].imag()) << "\n";
}

void write_axial_csv(const std::string& path, const AxialField& field) {
  auto out = open_out(path);
  out << "r,theta,re,im\n";
  for (std::size_t i = 0; i < field.grid->size(); ++i)
    for (std::size_t j = 0; j < field.theta_nodes.size(); ++j)
      out << format_double(field.grid->nodes[i]) << ","
          << format_double(field.theta_nodes[j]) << ","
          << format_double(field.at(i, j).real()) << ","
          << format_double(field.at(i, j).imag()) << "\n";
}

void write_orbit_csv(const std::string& path, const OrbitRecord& rec) {
  auto out = open_out(path);
  out << "step,norm,log_norm\n";
  for (std::size_t n = 0; n < rec.norms.size(); ++n)
    out << n << "," << format_double(rec.norms[n]) << ","
        << format_double(rec.log_norms[n]) << "\n";
}

void write_heat_sweep_csv(const std::string& path,
                          const std::vector<HeatSweepRow>& rows) {
  auto out = open_out(path);
  out << "c_re,c_im,c_p,above_threshold,s,t,verdict\n";
  for (const auto& row : rows)
    out << format_double(row.c.real()) << "," << format_double(row.c.imag())
        << "," << format_double(row.c_p) << ","
        << (row.above_threshold ? "true" : "false") << ","
        << format_double(row.s) << "," << format_double(row.t) << ","
        << row.verdict << "\n";
}

RadialMeasure read_measure_json_text(const std::string& text,
                                     const ManifoldModel& model,
                                     const std::string& base_dir) {
  json j = parse_json_or_throw(text, "measure");
  RadialMeasure mu;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw InputError("measure: atoms must be a list");
    for (const json& a : j["atoms"]) {
      RadialMeasure::Atom atom;
      if (!a.contains("r")) throw InputError("measure atom: missing r");
      atom.r = a["r"].get<double>();
      atom.mass = cplx(get_num(a, "mass_re", 0.0), get_num(a, "mass_im", 0.0));
      if (atom.r < 0.0) throw InputError("measure atom: negative radius");
      mu.atoms.push_back(atom);
    }
  }
  if (j.contains("density_csv") && !j["density_csv"].is_null()) {
    const std::string rel = j["density_csv"].get<std::string>();
    mu.density_part = read_radial_csv(resolve(base_dir, rel), model);
  }
  return mu;
}

RadialMeasure read_measure_file(const std::string& path,
                                const ManifoldModel& model) {
  return read_measure_json_text(
      slurp(path), model, std::filesystem::path(path).parent_path().string());
}

Multiplier read_multiplier_json_text(const std::string& text,
                                     const ManifoldModel& model,
                                     const std::string& base_dir) {
  json j = parse_json_or_throw(text, "multiplier");
  if (!j.contains("kind")) throw InputError("multiplier: missing kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "heat") {
    if (!j.contains("t")) throw InputError("heat multiplier: missing t");
    return heat_multiplier(j["t"].get<double>());
  }
  if (kind == "sphere_mean") {
    if (!j.contains("r0")) throw InputError("sphere_mean multiplier: missing r0");
    return sphere_mean_multiplier(j["r0"].get<double>());
  }
  if (kind == "conv_kernel") {
    if (!j.contains("csv")) throw InputError("conv_kernel multiplier: missing csv");
    const std::string rel = j["csv"].get<std::string>();
    return kernel_multiplier(read_radial_csv(resolve(base_dir, rel), model),
                             std::filesystem::path(rel).stem().string());
  }
  if (kind == "conv_measure") {
    if (!j.contains("measure"))
      throw InputError("conv_measure multiplier: missing measure");
    return measure_multiplier(
        read_measure_json_text(j["measure"].dump(), model, base_dir));
  }
  throw InputError("unknown multiplier kind '" + kind + "'");
}

Multiplier read_multiplier_file(const std::string& path,
                                const ManifoldModel& model) {
  return read_multiplier_json_text(
      slurp(path), model, std::filesystem::path(path).parent_path().string());
}

std::string certificate_to_json(const ChaosCertificate& cert) {
  auto cplx_json = [](cplx z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
  };
  json j;
  j["nu"] = cplx_json(cert.nu);
  j["lambda0"] = cplx_json(cert.lambda0);
  j["p"] = cert.p;
  j["margin"] = cert.margin;
  j["u_plus"] = json::array();
  for (cplx z : cert.u_plus) j["u_plus"].push_back(cplx_json(z));
  j["u_minus"] = json::array();
  for (cplx z : cert.u_minus) j["u_minus"].push_back(cplx_json(z));
  j["roots"] = json::array();
  for (const UnimodularRoot& r : cert.roots) {
    j["roots"].push_back({{"rotation", format_rotation(r.rotation)},
                          {"lambda", cplx_json(r.lambda)},
                          {"residual", r.residual},
                          {"found", r.found},
                          {"iterations", r.iterations}});
  }
  j["verdict"] = to_string(cert.verdict);
  return j.dump(2) + "\n";
}

void write_certificate_json(const std::string& path,
                            const ChaosCertificate& cert) {
  auto out = open_out(path);
  out << certificate_to_json(cert);
}

}  // namespace hmlab
