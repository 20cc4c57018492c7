#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "h2e/errors.hpp"
#include "h2e/molecule.hpp"

#ifndef H2E_DEFAULT_BASIS_DIR
#define H2E_DEFAULT_BASIS_DIR "data/basis"
#endif

namespace h2e {

struct PrimitiveGaussian {
  double exponent = 1.0;     // Bohr^-2
  double coefficient = 1.0;  // weight on the normalized primitive, as read
};

/// A contracted shell. Coefficients are kept exactly as they appear in the
/// basis file; `normalization` rescales the whole contraction to unit norm.
struct Shell {
  std::size_t center_index = 0;
  int angular_momentum = 0;
  std::vector<PrimitiveGaussian> primitives;
  bool normalized = false;
  double normalization = 1.0;
};

struct BasisSet {
  std::string name;
  std::map<std::string, std::vector<Shell>> shells_per_element;

  const std::vector<Shell>& shells_for(const std::string& element) const;
};

namespace detail {

inline double double_factorial(int n) {
  double r = 1.0;
  for (; n > 1; n -= 2) r *= n;
  return r;
}

inline std::string canonical_symbol(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    out.push_back(static_cast<char>(i == 0 ? std::toupper(c) : std::tolower(c)));
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

/// Fortran-style D exponents are accepted alongside E.
inline bool parse_real(std::string tok, double& out) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

inline bool parse_int(const std::string& tok, int& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_roundtrip(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace detail

/// Overlap of two normalized same-centre primitives with equal Cartesian
/// powers of total degree l.
inline double same_center_primitive_overlap(double a, double b, int l) {
  return std::pow(2.0 * std::sqrt(a * b) / (a + b), l + 1.5);
}

/// Norm of a primitive x^i y^j z^k exp(-a r^2).
inline double primitive_normalization(double a, int i, int j, int k) {
  const int l = i + j + k;
  return std::pow(2.0 * a / std::numbers::pi, 0.75) * std::pow(4.0 * a, 0.5 * l) /
         std::sqrt(detail::double_factorial(2 * i - 1) *
                   detail::double_factorial(2 * j - 1) *
                   detail::double_factorial(2 * k - 1));
}

inline void normalize_shell(Shell& shell) {
  double s = 0.0;
  for (const auto& p : shell.primitives)
    for (const auto& q : shell.primitives)
      s += p.coefficient * q.coefficient *
           same_center_primitive_overlap(p.exponent, q.exponent,
                                         shell.angular_momentum);
  if (!(s > 0.0)) throw DomainError("contracted shell has zero norm");
  shell.normalization = 1.0 / std::sqrt(s);
  shell.normalized = true;
}

inline const std::vector<Shell>& BasisSet::shells_for(const std::string& element) const {
  const auto it = shells_per_element.find(detail::canonical_symbol(element));
  if (it == shells_per_element.end())
    throw ConfigurationError("basis set '" + name + "' has no entry for element " +
                             element);
  return it->second;
}

/// Parses a Gaussian94-format basis document (element blocks terminated by
/// `****`, S/P/SP shells only).
inline BasisSet parse_basis(std::string_view text, std::string name = {}) {
  BasisSet out;
  out.name = std::move(name);

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  std::size_t i = 0;
  auto next_content = [&](std::size_t& lineno) -> std::string_view {
    while (i < lines.size()) {
      auto l = detail::trim(lines[i]);
      lineno = ++i;
      if (l.empty() || l.front() == '!' || l.front() == '#') continue;
      return l;
    }
    lineno = lines.size();
    return {};
  };

  std::size_t lineno = 0;
  for (;;) {
    auto line = next_content(lineno);
    if (line.empty()) break;
    if (line == "****") continue;

    const auto head = detail::split_ws(line);
    int zero = -1;
    if (head.size() != 2 || !detail::parse_int(head[1], zero) || zero != 0 ||
        !std::isalpha(static_cast<unsigned char>(head[0][0])))
      throw ParseError(lineno, "expected element header '<symbol> 0', got '" +
                                   std::string(line) + "'");
    const auto symbol = detail::canonical_symbol(head[0]);
    if (out.shells_per_element.count(symbol))
      throw ParseError(lineno, "duplicate block for element " + symbol);
    const std::size_t block_line = lineno;

    std::vector<Shell> shells;
    for (;;) {
      line = next_content(lineno);
      if (line.empty())
        throw ParseError(lineno, "unterminated block for element " + symbol);
      if (line == "****") break;

      const auto tok = detail::split_ws(line);
      int nprim = 0;
      double scale = 1.0;
      if (tok.size() != 3 || !detail::parse_int(tok[1], nprim) || nprim <= 0 ||
          !detail::parse_real(tok[2], scale) || !(scale > 0.0))
        throw ParseError(lineno, "expected shell line '<type> <n_prim> <scale>'");
      const auto type = detail::lower(tok[0]);
      std::vector<int> ls;
      if (type == "s") {
        ls = {0};
      } else if (type == "p") {
        ls = {1};
      } else if (type == "sp" || type == "l") {
        ls = {0, 1};
      } else if (type.size() == 1 && std::string_view("dfghi").find(type[0]) !=
                                         std::string_view::npos) {
        throw UnsupportedError("line " + std::to_string(lineno) + ": " + tok[0] +
                               " shells are not supported (s and p only)");
      } else {
        throw ParseError(lineno, "unknown shell type '" + tok[0] + "'");
      }

      std::vector<Shell> group(ls.size());
      for (std::size_t g = 0; g < ls.size(); ++g) group[g].angular_momentum = ls[g];
      const std::size_t ncols = 1 + ls.size();
      for (int p = 0; p < nprim; ++p) {
        line = next_content(lineno);
        const auto cols = detail::split_ws(line);
        if (cols.size() != ncols)
          throw ParseError(lineno, "expected " + std::to_string(ncols) +
                                       " columns in primitive line");
        double expo = 0.0;
        if (!detail::parse_real(cols[0], expo) || !(expo > 0.0))
          throw ParseError(lineno, "bad exponent '" + cols[0] + "'");
        expo *= scale * scale;
        for (std::size_t g = 0; g < ls.size(); ++g) {
          double c = 0.0;
          if (!detail::parse_real(cols[1 + g], c))
            throw ParseError(lineno, "bad coefficient '" + cols[1 + g] + "'");
          group[g].primitives.push_back({expo, c});
        }
      }
      for (auto& s : group) {
        normalize_shell(s);
        shells.push_back(std::move(s));
      }
    }

    if (std::none_of(shells.begin(), shells.end(),
                     [](const Shell& s) { return s.angular_momentum == 0; }))
      throw ParseError(block_line, "element " + symbol + " has no s shell");
    out.shells_per_element.emplace(symbol, std::move(shells));
  }

  if (out.shells_per_element.empty()) throw ParseError(0, "no element blocks");
  return out;
}

/// Writes the basis back in the same text layout. Coefficients are the raw
/// file values, so parse(serialize(b)) reproduces b bit for bit.
inline std::string serialize_basis(const BasisSet& basis) {
  std::ostringstream out;
  out << "****\n";
  for (const auto& [symbol, shells] : basis.shells_per_element) {
    out << symbol << "     0\n";
    for (const auto& s : shells) {
      out << (s.angular_momentum == 0 ? "S" : "P") << "   " << s.primitives.size()
          << "   1.00\n";
      for (const auto& p : s.primitives)
        out << "      " << detail::format_roundtrip(p.exponent) << "   "
            << detail::format_roundtrip(p.coefficient) << "\n";
    }
    out << "****\n";
  }
  return out.str();
}

/// Directory searched for named basis sets: $H2E_BASIS_DIR if set, else the
/// data directory of the source tree.
inline std::filesystem::path default_basis_dir() {
  if (const char* env = std::getenv("H2E_BASIS_DIR"); env && *env) return env;
  return H2E_DEFAULT_BASIS_DIR;
}

/// Accepts a basis name (`sto-3g`, `6-31gss`, `6-31g**`) looked up in `dir`,
/// or a path to a basis file.
inline BasisSet load_basis(const std::string& name_or_path,
                           const std::filesystem::path& dir = default_basis_dir()) {
  namespace fs = std::filesystem;
  fs::path path = name_or_path;
  std::string name = name_or_path;
  if (!fs::is_regular_file(path)) {
    auto stem = detail::lower(name_or_path);
    for (std::size_t pos; (pos = stem.find('*')) != std::string::npos;)
      stem.replace(pos, 1, "s");
    path = dir / (stem + ".gbs");
    name = stem;
    if (!fs::is_regular_file(path))
      throw ConfigurationError("basis set '" + name_or_path + "' not found (looked for " +
                               path.string() + ")");
  }
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open basis file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_basis(ss.str(), name);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

/// One Cartesian component of a contracted shell placed on a nucleus.
/// `coefficients` already include primitive and contraction normalization.
struct BasisFunction {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::array<int, 3> powers{0, 0, 0};
  std::vector<double> exponents;
  std::vector<double> coefficients;
  std::size_t shell_index = 0;

  int angular_momentum() const { return powers[0] + powers[1] + powers[2]; }
};

struct AOBasis {
  std::vector<Shell> shells;  // center_index refers to Molecule::atoms()
  std::vector<BasisFunction> functions;

  std::size_t size() const noexcept { return functions.size(); }
  const BasisFunction& operator[](std::size_t i) const { return functions[i]; }
};

inline std::vector<std::array<int, 3>> cartesian_components(int l) {
  std::vector<std::array<int, 3>> out;
  for (int i = l; i >= 0; --i)
    for (int j = l - i; j >= 0; --j) out.push_back({i, j, l - i - j});
  return out;
}

/// Atoms in input order, shells in file order, components x, y, z.
inline AOBasis build_ao_basis(const Molecule& mol, const BasisSet& basis) {
  AOBasis ao;
  for (std::size_t a = 0; a < mol.atoms().size(); ++a) {
    const auto& atom = mol.atoms()[a];
    for (Shell shell : basis.shells_for(atom.element)) {
      shell.center_index = a;
      if (!shell.normalized) normalize_shell(shell);
      const std::size_t si = ao.shells.size();
      for (const auto& pw : cartesian_components(shell.angular_momentum)) {
        BasisFunction f;
        f.center = atom.position;
        f.powers = pw;
        f.shell_index = si;
        for (const auto& p : shell.primitives) {
          f.exponents.push_back(p.exponent);
          f.coefficients.push_back(shell.normalization * p.coefficient *
                                   primitive_normalization(p.exponent, pw[0], pw[1], pw[2]));
        }
        ao.functions.push_back(std::move(f));
      }
      ao.shells.push_back(std::move(shell));
    }
  }
  if (2 * ao.size() < static_cast<std::size_t>(mol.n_electrons()))
    throw ConfigurationError("basis too small for " + std::to_string(mol.n_electrons()) +
                             " electrons");
  return ao;
}

}  // namespace h2e
