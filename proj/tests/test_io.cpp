#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"

using namespace hmlab;
using namespace hmlab::testing;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config defaults and overrides") {
  RunConfig cfg = parse_config_text("{}");
  CHECK(cfg.model_kind == "hyperbolic");
  CHECK(cfg.dimension == 3);
  CHECK(cfg.r_max == doctest::Approx(12.0));
  CHECK(cfg.grid_size == 1024);

  cfg = parse_config_text(
      "{\"model\":{\"kind\":\"hyperbolic\",\"n\":2,\"r_max\":8.0,"
      "\"grid_size\":256},\"spectral\":{\"lambda_max\":30.0,"
      "\"num_nodes\":512},\"seed\":7,"
      "\"tolerances\":{\"calibration\":1e-4}}");
  CHECK(cfg.dimension == 2);
  CHECK(cfg.r_max == doctest::Approx(8.0));
  CHECK(cfg.grid_size == 256);
  CHECK(cfg.spectral_nodes == 512);
  CHECK(cfg.seed == 7);
  CHECK(cfg.tolerances.at("calibration") == doctest::Approx(1e-4));

  ManifoldModel m = model_from_config(cfg);
  CHECK(m.dimension() == 2);
  CHECK(m.grid().size() == 256);
  SpectralSetup setup = spectral_setup_from_config(cfg);
  CHECK(setup.num_nodes == 512);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config_text("{oops"), InputError);
  CHECK_THROWS_AS(parse_config_text("{\"model\":{\"grid_size\":4}}"),
                  InputError);
  CHECK_THROWS_AS(parse_config_text("{\"model\":{\"grid_size\":2097153}}"),
                  InputError);
  CHECK_THROWS_AS(parse_config_text("{\"model\":{\"r_max\":-1.0}}"),
                  InputError);
  CHECK_THROWS_AS(
      parse_config_text("{\"tolerances\":{\"calibration\":-1.0}}"),
      InputError);
  RunConfig one = parse_config_text("{\"model\":{\"n\":1}}");
  CHECK_THROWS_AS(model_from_config(one), InputError);
  RunConfig flat = parse_config_text("{\"model\":{\"kind\":\"flat\"}}");
  CHECK_THROWS_AS(model_from_config(flat), UnsupportedModelError);
  CHECK_THROWS_AS(parse_config_file(tmp_path("no_such_file.json")),
                  InputError);
}

TEST_CASE("radial csv round trip on the model grid") {
  FileGuard fg{tmp_path("hmlab_radial.csv")};
  RadialFunction f = make_radial(h3(), [](double r) {
    return cplx(std::exp(-r * r), 0.1 * r);
  });
  write_radial_csv(fg.path, f);
  RadialFunction back = read_radial_csv(fg.path, h3());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    CHECK(std::abs(back.values[i] - f.values[i]) < 1e-15);
}

TEST_CASE("radial csv resamples off-grid radii") {
  FileGuard fg{tmp_path("hmlab_offgrid.csv")};
  {
    std::ofstream out(fg.path);
    out << "r,re,im\n";
    for (int k = 0; k <= 600; ++k) {
      const double r = 12.0 * k / 600.0;
      out << r << "," << std::exp(-r * r / 4.0) << ",0\n";
    }
  }
  RadialFunction f = read_radial_csv(fg.path, h3());
  REQUIRE(f.values.size() == h3().grid().size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double r = h3().grid().nodes[i];
    CHECK(std::abs(f.values[i] - cplx(std::exp(-r * r / 4.0))) < 1e-3);
  }
}

TEST_CASE("radial csv rejects malformed input") {
  FileGuard fg{tmp_path("hmlab_bad.csv")};
  {
    std::ofstream out(fg.path);
    out << "r,re,im\n1.0,0.5,0\n0.5,0.2,0\n";  // radii not increasing
  }
  CHECK_THROWS_AS(read_radial_csv(fg.path, h3()), InputError);
  {
    std::ofstream out(fg.path);
    out << "x,y\n";
  }
  CHECK_THROWS_AS(read_radial_csv(fg.path, h3()), InputError);
  CHECK_THROWS_AS(read_radial_csv(tmp_path("missing.csv"), h3()), InputError);
}

TEST_CASE("csv writers emit the documented headers") {
  FileGuard eig{tmp_path("hmlab_eigen.csv")};
  write_eigen_csv(eig.path, radial_eigenfunction(h3(), cplx(1.0)), h3());
  std::ifstream in(eig.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,re_phi,im_phi,re_dphi,im_dphi");

  FileGuard spec{tmp_path("hmlab_spec.csv")};
  RadialFunction f =
      make_radial(h3(), [](double r) { return std::exp(-r * r); });
  write_spectral_csv(spec.path, spherical_transform_grid(h3(), f));
  std::ifstream in2(spec.path);
  std::getline(in2, line);
  CHECK(line == "lambda_re,lambda_im,re,im");

  FileGuard orb{tmp_path("hmlab_orbit.csv")};
  OrbitRecord rec;
  rec.norms = {1.0, 2.0};
  rec.log_norms = {0.0, std::log(2.0)};
  write_orbit_csv(orb.path, rec);
  std::ifstream in3(orb.path);
  std::getline(in3, line);
  CHECK(line == "step,norm,log_norm");
  std::getline(in3, line);
  CHECK(line.substr(0, 2) == "0,");

  FileGuard sweep{tmp_path("hmlab_sweep.csv")};
  HeatSweepRow row;
  row.c = cplx(1.0, 0.0);
  row.c_p = 0.75;
  row.above_threshold = true;
  row.s = 0.4;
  row.t = 0.4;
  row.verdict = "chaotic_certified";
  write_heat_sweep_csv(sweep.path, {row});
  std::ifstream in4(sweep.path);
  std::getline(in4, line);
  CHECK(line == "c_re,c_im,c_p,above_threshold,s,t,verdict");
  std::getline(in4, line);
  CHECK(line.find("chaotic_certified") != std::string::npos);
}

TEST_CASE("measure json parsing") {
  RadialMeasure mu = read_measure_json_text(
      "{\"atoms\":[{\"r\":1.0,\"mass_re\":2.0,\"mass_im\":-0.5}]}", h3());
  REQUIRE(mu.atoms.size() == 1);
  CHECK(mu.atoms[0].r == doctest::Approx(1.0));
  CHECK(mu.atoms[0].mass == cplx(2.0, -0.5));
  CHECK(!mu.density_part.has_value());

  CHECK_THROWS_AS(read_measure_json_text("{bad", h3()), InputError);
  CHECK_THROWS_AS(
      read_measure_json_text("{\"atoms\":[{\"r\":-1.0,\"mass_re\":1.0}]}",
                             h3()),
      InputError);
}

TEST_CASE("measure json with a density csv") {
  FileGuard fg{tmp_path("hmlab_density.csv")};
  RadialFunction f =
      make_radial(h3(), [](double r) { return std::exp(-r * r); });
  write_radial_csv(fg.path, f);
  RadialMeasure mu = read_measure_json_text(
      "{\"atoms\":[],\"density_csv\":\"" + fg.path + "\"}", h3());
  REQUIRE(mu.density_part.has_value());
  CHECK(std::abs(mu.density_part->values[0] - f.values[0]) < 1e-15);
}

TEST_CASE("multiplier json file round trip") {
  FileGuard fg{tmp_path("hmlab_mult.json")};
  {
    std::ofstream out(fg.path);
    out << "{\"kind\":\"heat\",\"t\":0.5}";
  }
  Multiplier m = read_multiplier_file(fg.path, h3());
  CHECK(m.kind == MultiplierKind::heat);
  CHECK(m.t == doctest::Approx(0.5));

  FileGuard kern{tmp_path("hmlab_kernel.csv")};
  write_radial_csv(kern.path, gaussian_bump(h3(), 0.8));
  Multiplier mk = read_multiplier_json_text(
      "{\"kind\":\"conv_kernel\",\"csv\":\"" + kern.path + "\"}", h3());
  CHECK(mk.kind == MultiplierKind::conv_kernel);
  REQUIRE(mk.kernel.has_value());

  Multiplier mm = read_multiplier_json_text(
      "{\"kind\":\"conv_measure\",\"measure\":{\"atoms\":"
      "[{\"r\":1.0,\"mass_re\":1.0}]}}",
      h3());
  CHECK(mm.kind == MultiplierKind::conv_measure);
  REQUIRE(mm.measure.has_value());
  CHECK(mm.measure->atoms.size() == 1);

  CHECK_THROWS_AS(read_multiplier_json_text("{\"kind\":\"heat\",\"t\":-1}",
                                            h3()),
                  InputError);
}

TEST_CASE("certificate json has the expected fields") {
  ChaosCertificate cert;
  cert.nu = cplx(0.2, 0.1);
  cert.lambda0 = cplx(0.5);
  cert.p = 4.0;
  cert.margin = 1e-3;
  cert.u_plus = {cplx(1.0, 0.1)};
  cert.u_minus = {cplx(0.1, -0.2)};
  UnimodularRoot root;
  root.rotation = Rotation{1, 24};
  root.lambda = cplx(0.55, -0.23);
  root.residual = 1e-12;
  root.found = true;
  cert.roots.push_back(root);
  cert.verdict = Verdict::chaotic_certified;

  FileGuard fg{tmp_path("hmlab_cert.json")};
  write_certificate_json(fg.path, cert);
  std::ifstream in(fg.path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"verdict\": \"chaotic_certified\"") != std::string::npos);
  CHECK(text.find("\"rotation\": \"1/24\"") != std::string::npos);
  CHECK(text.find("\"u_plus\"") != std::string::npos);
  CHECK(text.find("\"p\": 4.0") != std::string::npos);
}
