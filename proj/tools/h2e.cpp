// h2e: H2 Hartree-Fock / full-CI scans, occupation entropy and CHSH demos.
//
//   h2e scan --basis sto-3g --rmin 0.7 --rmax 10 --points 40 --out curve.csv
//   h2e point -R 1.4 --basis 6-31gss
//   h2e bell --state singlet
//
// Exit codes: 0 success, 1 usage error, 2 computation failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "h2e/h2e.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct ScanOptions {
  std::string basis = "sto-3g";
  double r_min = 0.7;
  double r_max = 10.0;
  int points = 40;
  bool log_grid = false;
  std::string unit = "bohr";
  bool rescale = false;
  double far_point = 20.0;
  std::string out;
  std::string format = "csv";
};

struct PointOptions {
  double r = 1.4;
  std::string basis = "sto-3g";
  std::string unit = "bohr";
  std::string dump_integrals;
  std::string dump_ci;
  bool scf_trace = false;
};

struct BellOptions {
  std::string state = "singlet";
  double resolution = 1.0;
};

h2e::BasisSet basis_from(const std::string& name, const std::string& dir) {
  return dir.empty() ? h2e::load_basis(name) : h2e::load_basis(name, dir);
}

int run_scan(const ScanOptions& o, const std::string& basis_dir) {
  h2e::ScanConfig cfg;
  cfg.basis_name = o.basis;
  cfg.r_min = o.r_min;
  cfg.r_max = o.r_max;
  cfg.n_points = o.points;
  cfg.grid = o.log_grid ? h2e::GridKind::logarithmic : h2e::GridKind::linear;
  cfg.unit = o.unit == "angstrom" ? h2e::LengthUnit::angstrom : h2e::LengthUnit::bohr;
  cfg.far_point_bohr = o.far_point > 0.0 ? std::optional<double>(o.far_point) : std::nullopt;
  cfg.output_path = o.out;
  cfg.format = o.format == "json" ? h2e::OutputFormat::json : h2e::OutputFormat::csv;
  cfg.rescale = o.rescale;
  try {
    cfg.validate();
  } catch (const h2e::DomainError& e) {
    std::cerr << "h2e scan: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto basis = basis_from(cfg.basis_name, basis_dir);
  const auto result = h2e::run_scan(cfg, basis);
  for (const auto& f : result.failures)
    std::cerr << "h2e scan: R = " << f.r_bohr << " failed: " << f.message << '\n';
  if (result.points.empty()) {
    std::cerr << "h2e scan: every point failed\n";
    return kExitFailure;
  }
  h2e::emit(result.points, cfg.format, cfg.output_path, result.failures);
  return 0;
}

int run_point(const PointOptions& o, const std::string& basis_dir) {
  const double r = o.unit == "angstrom" ? o.r * h2e::kBohrPerAngstrom : o.r;
  const auto basis = basis_from(o.basis, basis_dir);
  const auto calc = h2e::compute_h2_point(r, basis);
  h2e::write_report(std::cout, r, basis.name, calc);
  if (o.scf_trace) h2e::write_scf_trace(std::cerr, calc.scf);
  if (!o.dump_integrals.empty()) {
    std::ofstream f(o.dump_integrals);
    if (!f) throw h2e::Error("cannot open '" + o.dump_integrals + "'");
    h2e::write_integrals(f, calc.integrals);
  }
  if (!o.dump_ci.empty()) {
    std::ofstream f(o.dump_ci);
    if (!f) throw h2e::Error("cannot open '" + o.dump_ci + "'");
    h2e::write_ci_vector(f, calc.ci);
  }
  return 0;
}

int run_bell(const BellOptions& o) {
  h2e::write_bell_report(std::cout, h2e::bell_demo(o.state, o.resolution));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hartree-Fock / full-CI entanglement and correlation for H2"};
  app.require_subcommand(1);

  std::string basis_dir;
  if (const char* env = std::getenv("H2E_BASIS_DIR")) basis_dir = env;
  app.add_option("--basis-dir", basis_dir, "Directory holding <name>.gbs basis files")
      ->envname("H2E_BASIS_DIR");

  const std::map<std::string, std::string> units{{"bohr", "bohr"}, {"angstrom", "angstrom"}};

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Dissociation scan of H2");
  scan_cmd->add_option("--basis", scan.basis, "sto-3g, 6-31gss or a basis file path");
  scan_cmd->add_option("--rmin", scan.r_min, "Smallest R");
  scan_cmd->add_option("--rmax", scan.r_max, "Largest grid R");
  scan_cmd->add_option("--points", scan.points, "Grid points between rmin and rmax");
  scan_cmd->add_flag("--log-grid", scan.log_grid, "Logarithmic spacing");
  scan_cmd->add_option("--unit", scan.unit, "Unit of rmin/rmax")->check(CLI::IsMember(units));
  scan_cmd->add_flag("--rescale", scan.rescale, "Add the entropy column rescaled to E_corr at the last point");
  scan_cmd->add_option("--far-point", scan.far_point,
                       "Extra point in Bohr appended beyond rmax (0 disables)");
  scan_cmd->add_option("--out", scan.out, "Output file")->required();
  scan_cmd->add_option("--format", scan.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  PointOptions point;
  auto* point_cmd = app.add_subcommand("point", "Single-point calculation");
  point_cmd->add_option("-R", point.r, "Internuclear distance")->required();
  point_cmd->add_option("--basis", point.basis, "sto-3g, 6-31gss or a basis file path");
  point_cmd->add_option("--unit", point.unit, "Unit of R")->check(CLI::IsMember(units));
  point_cmd->add_option("--dump-integrals", point.dump_integrals, "Write AO integrals to a file");
  point_cmd->add_option("--dump-ci", point.dump_ci, "Write the CI vector to a file");
  point_cmd->add_flag("--scf-trace", point.scf_trace, "Print SCF iterations to stderr");

  BellOptions bell;
  auto* bell_cmd = app.add_subcommand("bell", "CHSH maximum for a two-spin state");
  bell_cmd->add_option("--state", bell.state, "singlet, product or dissociation")
      ->check(CLI::IsMember({"singlet", "product", "dissociation"}));
  bell_cmd->add_option("--resolution", bell.resolution, "Final angular step in degrees")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*scan_cmd) return run_scan(scan, basis_dir);
    if (*point_cmd) return run_point(point, basis_dir);
    if (*bell_cmd) return run_bell(bell);
  } catch (const h2e::ConfigurationError& e) {
    std::cerr << "h2e: " << e.what() << '\n';
    return kExitUsage;
  } catch (const h2e::Error& e) {
    std::cerr << "h2e: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "h2e: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
