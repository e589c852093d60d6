#pragma once

// Parameter/eccentricity grid scans and their CSV/JSON tables.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "configurations.hpp"
#include "ode.hpp"
#include "trace.hpp"

namespace erestab {

enum class FamilyKind { Kepler, Lagrange, Euler, AlphaEta, Gon };

inline FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "kepler") return FamilyKind::Kepler;
  if (s == "lagrange") return FamilyKind::Lagrange;
  if (s == "euler") return FamilyKind::Euler;
  if (s == "alphaeta") return FamilyKind::AlphaEta;
  if (s == "gon") return FamilyKind::Gon;
  throw ValidationError("unknown family '" + s + "'");
}

inline std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Kepler: return "kepler";
    case FamilyKind::Lagrange: return "lagrange";
    case FamilyKind::Euler: return "euler";
    case FamilyKind::AlphaEta: return "alphaeta";
    case FamilyKind::Gon: return "gon";
  }
  return "?";
}

/// Name of the swept parameter for each family.
inline std::string sweep_parameter(FamilyKind k) {
  switch (k) {
    case FamilyKind::AlphaEta: return "eta";
    case FamilyKind::Kepler: return "none";
    default: return "beta";  // beta_L, beta_E, or 1/m for the gon
  }
}

using ParamMap = std::map<std::string, double>;

/// Parses "k=v,k=v" into a map; values must be numbers.
inline ParamMap parse_params(const std::string& text) {
  ParamMap out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("parameter '" + item + "' is not of the form key=value");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size())
      throw ValidationError("parameter '" + key + "' has a non-numeric value '" + val + "'");
    out[key] = v;
  }
  return out;
}

namespace detail {
inline double require(const ParamMap& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw ValidationError("missing parameter '" + key + "'");
  return it->second;
}
inline double optional(const ParamMap& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}
inline int as_int(double v, const std::string& key) {
  if (v != std::floor(v)) throw ValidationError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}
}  // namespace detail

/// Builds a family from named parameters (beta; alpha, eta; n, m or beta, optional l).
inline FamilySpec family_from_params(FamilyKind kind, const ParamMap& p) {
  FamilySpec spec;
  switch (kind) {
    case FamilyKind::Kepler: spec = family::Kepler{}; break;
    case FamilyKind::Lagrange: spec = family::Lagrange{detail::require(p, "beta")}; break;
    case FamilyKind::Euler: spec = family::Euler{detail::require(p, "beta")}; break;
    case FamilyKind::AlphaEta: spec = family::AlphaEta{detail::require(p, "alpha"), detail::require(p, "eta")}; break;
    case FamilyKind::Gon: {
      const int n = detail::as_int(detail::optional(p, "n", 9), "n");
      double m;
      if (p.count("m")) m = p.at("m");
      else {
        const double b = detail::require(p, "beta");
        if (!(b > 0)) throw ValidationError("gon beta = 1/m must be positive");
        m = 1 / b;
      }
      std::optional<int> l;
      if (p.count("l")) l = detail::as_int(p.at("l"), "l");
      spec = family::Gon{n, m, l};
      break;
    }
  }
  validate(spec);
  return spec;
}

/// Fixed parameters plus the swept one at value x.
inline FamilySpec family_at(FamilyKind kind, ParamMap fixed, double x) {
  if (kind == FamilyKind::AlphaEta) {
    fixed.try_emplace("alpha", 1.5);
    fixed["eta"] = x;
  } else if (kind == FamilyKind::Gon) {
    fixed.erase("m");
    fixed["beta"] = x;
  } else if (kind != FamilyKind::Kepler) {
    fixed["beta"] = x;
  }
  return family_from_params(kind, fixed);
}

/// Edge of the gon region in beta = 1/m at eccentricity e (0 when the region is empty there).
inline double gon_bound_beta_for(int n, double target) {
  double hi = 1 / (2 * q_max(n));  // beta above this is outside by definition
  if (xi_gon(n, 1 / hi) < target) return hi;
  double lo = 0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid > 0 && xi_gon(n, 1 / mid) < target) lo = mid;
    else hi = mid;
  }
  return lo;
}

inline double gon_bound_beta(int n, Eccentricity e, double e0 = 0.1) {
  return gon_bound_beta_for(n, 1 / std::sqrt(g_tilde(e, e0)));
}

/// The analytic region boundary at e, expressed in the swept parameter (beta, or zeta for the (alpha, eta) family).
inline double region_bound(FamilyKind kind, const ParamMap& fixed, Eccentricity e, double e0 = 0.1, bool use_g = false) {
  switch (kind) {
    case FamilyKind::Lagrange: return bound_curve(BoundFamily::Lagrange, e, use_g, e0);
    case FamilyKind::Euler: return bound_curve(BoundFamily::Euler, e, use_g, e0);
    case FamilyKind::AlphaEta: return bound_curve(BoundFamily::AlphaEta, e, use_g, e0);
    case FamilyKind::Gon: return gon_bound_beta(detail::as_int(detail::optional(fixed, "n", 9), "n"), e, e0);
    case FamilyKind::Kepler: break;
  }
  throw ValidationError("the Kepler family has no bound curve");
}

/// Whether the swept value x lies in the family's analytic region, given the boundary value at this e.
inline bool inside_region(FamilyKind kind, const ParamMap& fixed, double x, double boundary) {
  switch (kind) {
    case FamilyKind::Lagrange:
    case FamilyKind::Euler: return x >= 0 && x < boundary;
    case FamilyKind::AlphaEta: return zeta(detail::optional(fixed, "alpha", 1.5), x) < boundary;
    case FamilyKind::Gon: return x > 0 && x < boundary;
    case FamilyKind::Kepler: return false;
  }
  return false;
}

struct ScanRequest {
  FamilyKind family = FamilyKind::Lagrange;
  ParamMap fixed;
  double param_min = 0, param_max = 1;
  int param_samples = 2;
  double e_min = 0, e_max = 0.9;
  int e_samples = 2;
  double rel_tol = 1e-12, abs_tol = 1e-12, classify_tol = 1e-7;
  bool overlay_bounds = false;
  double e0 = 0.1;
  unsigned workers = 0;  // 0: available parallelism
};

struct ScanRow {
  std::string family;
  double param = 0, e = 0;
  std::vector<std::string> classes;  // one tag per block, or {"failed"}
  bool inside_bound = false;
  std::optional<double> bound;
  std::vector<std::complex<double>> eigenvalues;
  bool all_stable = false;  // every block linearly stable (not part of the table)

  std::string class_tag() const {
    std::string s;
    for (std::size_t i = 0; i < classes.size(); ++i) s += (i ? "|" : "") + classes[i];
    return s;
  }
};

inline void validate(const ScanRequest& r) {
  if (r.param_samples < 2 || r.e_samples < 2) throw ValidationError("each axis needs at least 2 samples");
  if (!(r.param_min <= r.param_max) || !(r.e_min <= r.e_max))
    throw ValidationError("axis ranges must satisfy min <= max");
  if (r.param_min == r.param_max && r.e_min == r.e_max) throw ValidationError("empty scan range");
  if (!(r.e_min >= 0 && r.e_max <= 0.99)) throw ValidationError("scan eccentricities must lie in [0, 0.99]");
  if (r.family == FamilyKind::Kepler) throw ValidationError("the Kepler family has no parameter to scan");
  family_at(r.family, r.fixed, r.param_min);
  family_at(r.family, r.fixed, r.param_max);
  validate_e0(r.e0);
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = (i == n - 1) ? b : a + (b - a) * i / (n - 1);
  return v;
}

/// Eigenvalues of every block, blocks in order, each block sorted by (re, im).
inline std::vector<std::complex<double>> block_eigenvalues(const MonodromyResult& r) {
  std::vector<std::complex<double>> out;
  for (const auto& b : r.blocks) {
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(b.matrix, false).eigenvalues();
    std::vector<std::complex<double>> v(ev.data(), ev.data() + ev.size());
    std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

inline std::string block_tag(const BlockReport& b) {
  if (b.classification) return to_string(*b.classification);
  return b.linearly_stable ? "stable" : "unstable";
}

/// One row per grid point, parameter-major; a failed integration yields a row tagged "failed".
inline std::vector<ScanRow> scan(const ScanRequest& req) {
  validate(req);
  const auto params = linspace(req.param_min, req.param_max, req.param_samples);
  const auto es = linspace(req.e_min, req.e_max, req.e_samples);

  // the boundary depends on e only
  std::vector<double> boundary(es.size(), 0.0);
  for (std::size_t j = 0; j < es.size(); ++j) boundary[j] = region_bound(req.family, req.fixed, es[j], req.e0);

  std::vector<ScanRow> rows(params.size() * es.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < rows.size(); idx = next++) {
      const std::size_t i = idx / es.size(), j = idx % es.size();
      ScanRow& row = rows[idx];
      row.family = to_string(req.family);
      row.param = params[i];
      row.e = es[j];
      row.inside_bound = inside_region(req.family, req.fixed, params[i], boundary[j]);
      if (req.overlay_bounds) row.bound = boundary[j];
      try {
        const auto sys = essential_system(family_at(req.family, req.fixed, params[i]), es[j]);
        const auto res = integrate_fundamental(sys, 2 * std::numbers::pi, req.rel_tol, req.abs_tol, req.classify_tol).result();
        row.all_stable = true;
        for (const auto& b : res.blocks) {
          row.classes.push_back(block_tag(b));
          row.all_stable = row.all_stable && b.linearly_stable;
        }
        row.eigenvalues = block_eigenvalues(res);
      } catch (const NumericFailure&) {
        row.classes = {"failed"};
        row.eigenvalues.clear();
        row.all_stable = false;
      }
    }
  };
  const unsigned n = req.workers ? req.workers : std::max(1u, std::thread::hardware_concurrency());
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

// ------------------------------------------------------------------ tables

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError("malformed number '" + s + "' in table");
  return v;
}

/// CSV with header family,param,e,class,inside_bound[,bound],eig1_re,eig1_im,...
inline std::string to_csv(const std::vector<ScanRow>& rows) {
  std::size_t neig = 0;
  bool with_bound = false;
  for (const auto& r : rows) {
    neig = std::max(neig, r.eigenvalues.size());
    with_bound = with_bound || r.bound.has_value();
  }
  std::ostringstream os;
  os << "family,param,e,class,inside_bound";
  if (with_bound) os << ",bound";
  for (std::size_t i = 1; i <= neig; ++i) os << ",eig" << i << "_re,eig" << i << "_im";
  os << "\n";
  for (const auto& r : rows) {
    os << r.family << ',' << format_double(r.param) << ',' << format_double(r.e) << ',' << r.class_tag() << ','
       << (r.inside_bound ? 1 : 0);
    if (with_bound) os << ',' << (r.bound ? format_double(*r.bound) : "");
    for (std::size_t i = 0; i < neig; ++i) {
      if (i < r.eigenvalues.size())
        os << ',' << format_double(r.eigenvalues[i].real()) << ',' << format_double(r.eigenvalues[i].imag());
      else
        os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<ScanRow> from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty table");
  const auto header = split(line, ',');
  if (header.size() < 5 || header[0] != "family" || header[1] != "param" || header[2] != "e" || header[3] != "class" ||
      header[4] != "inside_bound")
    throw ValidationError("table header is not a scan header");
  const bool with_bound = header.size() > 5 && header[5] == "bound";
  const std::size_t eig0 = with_bound ? 6 : 5;
  if ((header.size() - eig0) % 2 != 0) throw ValidationError("eigenvalue columns must come in re/im pairs");
  std::vector<ScanRow> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw ValidationError("row has " + std::to_string(f.size()) + " fields, header has " + std::to_string(header.size()));
    ScanRow r;
    r.family = f[0];
    r.param = parse_double(f[1]);
    r.e = parse_double(f[2]);
    r.classes = split(f[3], '|');
    if (f[4] != "0" && f[4] != "1") throw ValidationError("inside_bound must be 0 or 1");
    r.inside_bound = f[4] == "1";
    if (with_bound && !f[5].empty()) r.bound = parse_double(f[5]);
    for (std::size_t c = eig0; c + 1 < f.size(); c += 2) {
      if (f[c].empty() && f[c + 1].empty()) continue;
      r.eigenvalues.emplace_back(parse_double(f[c]), parse_double(f[c + 1]));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json to_json(const std::vector<ScanRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o;
    o["family"] = r.family;
    o["param"] = r.param;
    o["e"] = r.e;
    o["class"] = r.class_tag();
    o["inside_bound"] = r.inside_bound;
    if (r.bound) o["bound"] = *r.bound;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      o["eig" + std::to_string(i + 1) + "_re"] = r.eigenvalues[i].real();
      o["eig" + std::to_string(i + 1) + "_im"] = r.eigenvalues[i].imag();
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace erestab
