#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "h2e/basis.hpp"
#include "h2e/bell.hpp"
#include "h2e/correlation.hpp"
#include "h2e/errors.hpp"
#include "h2e/fci.hpp"
#include "h2e/integrals.hpp"
#include "h2e/molecule.hpp"
#include "h2e/scf.hpp"

// Molecule -> integrals -> RHF -> FCI -> occupations/entropy, for single
// geometries and for dissociation scans of H2.

namespace h2e {

/// Level shifts (Hartree) tried in turn when plain Roothaan fails.
inline constexpr double kFallbackLevelShifts[] = {0.5, 1.0, 2.0};

/// Everything produced for one geometry; kept together for the debug dumps.
struct PointCalculation {
  Molecule molecule;
  AOBasis ao;
  IntegralSet integrals;
  SCFResult scf;
  CIResult ci;
  CorrelationReport report;
};

inline PointCalculation compute_point(const Molecule& mol, const BasisSet& basis,
                                      const SCFSettings& settings = {}) {
  auto ao = build_ao_basis(mol, basis);
  auto ints = compute_all(ao, mol);
  auto scf = run_rhf(ints, mol, settings);
  // Near dissociation the Roothaan map swaps sigma_g/sigma_u each step with
  // no energy change, so damping never triggers. A virtual level shift keeps
  // the core-guess occupation and has the same fixed point.
  for (double shift : kFallbackLevelShifts) {
    if (scf.converged || settings.level_shift >= shift) break;
    SCFSettings shifted = settings;
    shifted.level_shift = shift;
    scf = run_rhf(ints, mol, shifted);
  }
  if (!scf.converged) {
    const auto& last = scf.trace.back();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "SCF not converged after %d iterations (last E = %.12f, dE = %.3e, rms dD = %.3e)",
                  scf.iterations, last.energy, last.delta_energy, last.rms_density_change);
    throw ConvergenceError(buf);
  }
  auto ci = run_fci(ints, scf, mol);
  auto report = make_report(ci);
  return {mol, std::move(ao), std::move(ints), std::move(scf), std::move(ci), std::move(report)};
}

inline PointCalculation compute_h2_point(double r_bohr, const BasisSet& basis,
                                         const SCFSettings& settings = {}) {
  return compute_point(make_h2(r_bohr), basis, settings);
}

inline CorrelationReport run_single_point(double r_bohr, const BasisSet& basis,
                                          const SCFSettings& settings = {}) {
  return compute_h2_point(r_bohr, basis, settings).report;
}

inline CorrelationReport run_single_point(double r_bohr, const std::string& basis_name) {
  return run_single_point(r_bohr, load_basis(basis_name));
}

enum class GridKind { linear, logarithmic };
enum class LengthUnit { bohr, angstrom };
enum class OutputFormat { csv, json };

struct ScanConfig {
  std::string basis_name = "sto-3g";
  double r_min = 0.7;  // in `unit`
  double r_max = 10.0;
  int n_points = 40;
  GridKind grid = GridKind::linear;
  LengthUnit unit = LengthUnit::bohr;
  /// Extra point appended beyond r_max (Bohr); the rescaling reference.
  std::optional<double> far_point_bohr = 20.0;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  bool rescale = false;
  SCFSettings scf;

  void validate() const {
    if (!(r_min > 0.0)) throw DomainError("r_min must be positive");
    if (!(r_max > r_min)) throw DomainError("r_max must exceed r_min");
    if (n_points < 2) throw DomainError("a scan needs at least 2 points");
    if (far_point_bohr && !(*far_point_bohr > 0.0)) throw DomainError("far point must be positive");
  }
};

/// Scan geometries in Bohr, ascending.
inline std::vector<double> scan_grid(const ScanConfig& cfg) {
  cfg.validate();
  const double f = cfg.unit == LengthUnit::angstrom ? kBohrPerAngstrom : 1.0;
  const double lo = cfg.r_min * f, hi = cfg.r_max * f;
  std::vector<double> r(static_cast<std::size_t>(cfg.n_points));
  for (int i = 0; i < cfg.n_points; ++i) {
    const double t = static_cast<double>(i) / (cfg.n_points - 1);
    r[static_cast<std::size_t>(i)] =
        cfg.grid == GridKind::linear ? lo + t * (hi - lo) : lo * std::pow(hi / lo, t);
  }
  r.back() = hi;
  if (cfg.far_point_bohr && *cfg.far_point_bohr > hi) r.push_back(*cfg.far_point_bohr);
  return r;
}

struct CurvePoint {
  double r_bohr = 0.0;
  double e_hf = 0.0, e_fci = 0.0, e_corr = 0.0;
  double entropy = 0.0;
  std::optional<double> rescaled_entropy;
  std::vector<double> occupations;  // descending
};

struct ScanFailure {
  double r_bohr = 0.0;
  std::string message;
};

struct ScanResult {
  std::vector<CurvePoint> points;
  std::vector<ScanFailure> failures;
};

/// Runs every grid point; a failing point is recorded and skipped. With
/// `rescale`, the entropy is scaled to meet E_corr at the last point.
inline ScanResult run_scan(const ScanConfig& cfg, const BasisSet& basis) {
  ScanResult out;
  for (double r : scan_grid(cfg)) {
    try {
      const auto rep = run_single_point(r, basis, cfg.scf);
      CurvePoint p{r, rep.e_hf, rep.e_fci, rep.e_corr, rep.entropy, std::nullopt, {}};
      p.occupations.assign(rep.occupations.n.data(),
                           rep.occupations.n.data() + rep.occupations.n.size());
      out.points.push_back(std::move(p));
    } catch (const Error& e) {
      out.failures.push_back({r, e.what()});
    }
  }
  if (cfg.rescale && !out.points.empty()) {
    std::vector<double> s, ec;
    for (const auto& p : out.points) {
      s.push_back(p.entropy);
      ec.push_back(p.e_corr);
    }
    const auto scaled = rescale_entropy(s, ec);
    for (std::size_t i = 0; i < scaled.size(); ++i) out.points[i].rescaled_entropy = scaled[i];
  }
  return out;
}

inline ScanResult run_scan(const ScanConfig& cfg) { return run_scan(cfg, load_basis(cfg.basis_name)); }

namespace detail {
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// Header `R_bohr,E_HF,E_FCI,E_corr,entropy_bits,entropy_rescaled,n_1,...`;
/// the rescaled column is empty when rescaling is off.
inline void emit_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  std::size_t nocc = 0;
  for (const auto& p : points) nocc = std::max(nocc, p.occupations.size());
  out << "R_bohr,E_HF,E_FCI,E_corr,entropy_bits,entropy_rescaled";
  for (std::size_t k = 1; k <= nocc; ++k) out << ",n_" << k;
  out << '\n';
  for (const auto& p : points) {
    out << detail::fmt17(p.r_bohr) << ',' << detail::fmt17(p.e_hf) << ','
        << detail::fmt17(p.e_fci) << ',' << detail::fmt17(p.e_corr) << ','
        << detail::fmt17(p.entropy) << ',';
    if (p.rescaled_entropy) out << detail::fmt17(*p.rescaled_entropy);
    for (std::size_t k = 0; k < nocc; ++k) {
      out << ',';
      if (k < p.occupations.size()) out << detail::fmt17(p.occupations[k]);
    }
    out << '\n';
  }
}

inline nlohmann::json to_json(const CurvePoint& p) {
  nlohmann::json j;
  j["R_bohr"] = p.r_bohr;
  j["E_HF"] = p.e_hf;
  j["E_FCI"] = p.e_fci;
  j["E_corr"] = p.e_corr;
  j["entropy_bits"] = p.entropy;
  j["entropy_rescaled"] = p.rescaled_entropy ? nlohmann::json(*p.rescaled_entropy) : nlohmann::json();
  j["occupations"] = p.occupations;
  return j;
}

inline void emit_json(std::ostream& out, const std::vector<CurvePoint>& points,
                      const std::vector<ScanFailure>& failures = {}) {
  nlohmann::json doc;
  doc["points"] = nlohmann::json::array();
  for (const auto& p : points) doc["points"].push_back(to_json(p));
  doc["failures"] = nlohmann::json::array();
  for (const auto& f : failures) doc["failures"].push_back({{"R_bohr", f.r_bohr}, {"error", f.message}});
  out << doc.dump(2) << '\n';
}

inline void emit(const std::vector<CurvePoint>& points, OutputFormat format, const std::string& path,
                 const std::vector<ScanFailure>& failures = {}) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file '" + path + "'");
  if (format == OutputFormat::csv)
    emit_csv(out, points);
  else
    emit_json(out, points, failures);
  out.flush();
  if (!out) throw Error("write failed for output file '" + path + "'");
}

inline void write_report(std::ostream& out, double r_bohr, const std::string& basis,
                         const PointCalculation& calc) {
  const auto& r = calc.report;
  out << "R_bohr        " << detail::fmt17(r_bohr) << '\n'
      << "basis         " << basis << '\n'
      << "n_basis       " << calc.ao.size() << '\n'
      << "scf_iter      " << calc.scf.iterations << '\n'
      << "E_HF          " << detail::fmt17(r.e_hf) << '\n'
      << "E_FCI         " << detail::fmt17(r.e_fci) << '\n'
      << "E_corr        " << detail::fmt17(r.e_corr) << '\n'
      << "entropy_bits  " << detail::fmt17(r.entropy) << '\n'
      << "K12           " << detail::fmt17(r.k12) << '\n';
  if (r.closed_form)
    out << "closed_form   delta " << detail::fmt17(r.closed_form->delta) << " E_corr "
        << detail::fmt17(r.closed_form->e_corr) << '\n';
  out << "occupations  ";
  for (Eigen::Index i = 0; i < r.occupations.n.size(); ++i)
    out << ' ' << detail::fmt17(r.occupations.n(i));
  out << '\n';
}

struct BellDemo {
  std::string state_name;
  bell::CHSHReport grid;
  double closed_form = 0.0;
};

inline bell::TwoQubitState named_spin_state(const std::string& name) {
  if (name == "singlet") return bell::singlet();
  if (name == "product") return bell::product_updown();
  if (name == "dissociation") return bell::dissociation_spin_state();
  throw DomainError("unknown spin state '" + name + "' (singlet|product|dissociation)");
}

inline BellDemo bell_demo(const std::string& state_name, double resolution_deg = 1.0) {
  const auto state = named_spin_state(state_name);
  return {state_name, bell::chsh_max_grid(state, resolution_deg), bell::chsh_max_closed_form(state)};
}

inline void write_bell_report(std::ostream& out, const BellDemo& demo) {
  const auto vec = [](const bell::UnitVector3& v) {
    return detail::fmt17(v.x()) + ' ' + detail::fmt17(v.y()) + ' ' + detail::fmt17(v.z());
  };
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", demo.grid.value);
  const auto& s = demo.grid.settings;
  out << "state         " << demo.state_name << '\n'
      << "chsh_max      " << buf << "  (" << detail::fmt17(demo.grid.value) << ")\n"
      << "closed_form   " << detail::fmt17(demo.closed_form) << '\n'
      << "a             " << vec(s.a) << '\n'
      << "d             " << vec(s.d) << '\n'
      << "b             " << vec(s.b) << '\n'
      << "c             " << vec(s.c) << '\n'
      << "violated      " << (demo.grid.violated ? "true" : "false") << '\n';
}

}  // namespace h2e
