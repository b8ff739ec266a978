#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmlab/chaos.hpp"

namespace hmlab {

struct RunConfig {
  std::string model_kind = "hyperbolic";
  int dimension = 3;
  double r_max = 12.0;
  int grid_size = 1024;
  double lambda_max = 50.0;
  int spectral_nodes = 2048;
  std::map<std::string, double> tolerances;
  std::string output_dir = ".";
  long long seed = 0;
};

// Reads the shared JSON config; missing fields keep their defaults.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

ManifoldModel model_from_config(const RunConfig& cfg);
SpectralSetup spectral_setup_from_config(const RunConfig& cfg);

// CSV emission, full double precision ("%.17g") throughout.
void write_radial_csv(const std::string& path, const RadialFunction& f);
// Accepts samples on any increasing radius set; resampled onto the model
// grid when the radii differ from it.
RadialFunction read_radial_csv(const std::string& path,
                               const ManifoldModel& model);

void write_eigen_csv(const std::string& path, const RadialEigenfunction& phi,
                     const ManifoldModel& model);
void write_ctable_csv(const std::string& path,
                      const std::vector<CFunctionSample>& table);
void write_spectral_csv(const std::string& path, const SpectralFunction& spec);
void write_axial_csv(const std::string& path, const AxialField& field);
void write_orbit_csv(const std::string& path, const OrbitRecord& rec);

struct HeatSweepRow {
  cplx c;
  double c_p = 0.0;
  bool above_threshold = false;
  double s = 0.0;  // nan when below threshold
  double t = 0.0;
  std::string verdict;
};
void write_heat_sweep_csv(const std::string& path,
                          const std::vector<HeatSweepRow>& rows);

// `{ "atoms": [{"r":..,"mass_re":..,"mass_im":..}], "density_csv": path-or-null }`
RadialMeasure read_measure_json_text(const std::string& text,
                                     const ManifoldModel& model,
                                     const std::string& base_dir = ".");
RadialMeasure read_measure_file(const std::string& path,
                                const ManifoldModel& model);

// `{"kind":"heat","t":1.0}` / `{"kind":"sphere_mean","r0":1.0}` /
// `{"kind":"conv_kernel","csv":"g.csv"}` / `{"kind":"conv_measure","measure":{..}}`
Multiplier read_multiplier_json_text(const std::string& text,
                                     const ManifoldModel& model,
                                     const std::string& base_dir = ".");
Multiplier read_multiplier_file(const std::string& path,
                                const ManifoldModel& model);

std::string certificate_to_json(const ChaosCertificate& cert);
void write_certificate_json(const std::string& path,
                            const ChaosCertificate& cert);

}  // namespace hmlab
