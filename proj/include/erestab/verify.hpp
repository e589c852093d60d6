#pragma once

// Verification suites: each check compares a measured value with an expected one at a pinned tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hill.hpp"
#include "scan.hpp"
#include "trace.hpp"

namespace erestab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0, expected = 0, tol = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  double seconds = 0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void append(const SuiteReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    seconds += other.seconds;
  }
};

inline std::string format_check(const CheckResult& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %s measured=%.10g expected=%.10g tol=%.3g%s%s", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.measured, c.expected, c.tol, c.detail.empty() ? "" : " ", c.detail.c_str());
  return buf;
}

namespace detail {

/// |measured - expected| <= tol.
inline CheckResult near(std::string name, double measured, double expected, double tol, std::string detail = {}) {
  return {std::move(name), std::abs(measured - expected) <= tol, measured, expected, tol, std::move(detail)};
}

/// measured <= limit.
inline CheckResult at_most(std::string name, double measured, double limit, std::string detail = {}) {
  return {std::move(name), measured <= limit, measured, limit, 0.0, std::move(detail)};
}

/// |a - b| / max(|a|, |b|) <= tol, reported as the relative difference.
inline CheckResult relative(std::string name, double a, double b, double tol) {
  const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  return {std::move(name), rel <= tol, rel, 0.0, tol, "values " + format_double(a) + " " + format_double(b)};
}

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

template <class F>
SuiteReport timed(const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport r{name, {}, {}, 0.0};
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

// ------------------------------------------------------------------ Kepler

/// max over an n-point theta grid on [0, 2 pi] of the max-entry difference between gamma_Kep and the ODE solution.
inline double kepler_deviation(Eccentricity e, int n_samples = 32) {
  if (n_samples < 2) throw ValidationError("need at least 2 grid points");
  EssentialSystem sys;
  sys.e = e;
  sys.blocks.push_back({2, Matrix(kepler_R())});
  const double two_pi = 2 * std::numbers::pi;
  const auto sol = integrate_fundamental(sys, two_pi, 1e-13, 1e-13);
  double worst = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double th = two_pi * i / (n_samples - 1);
    worst = std::max(worst, (gamma_kep(e, th).matrix - sol.at(th)).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline SuiteReport verify_kepler(const std::vector<double>& es = {0.0, 0.3, 0.6, 0.9}, double tol = 1e-8) {
  return detail::timed("kepler", [&](SuiteReport& r) {
    for (double e : es)
      r.checks.push_back(detail::at_most("kepler.closed_vs_ode e=" + detail::fmt("%g", e), kepler_deviation(e), tol));
  });
}

// ------------------------------------------------------------------ indices

inline SuiteReport verify_indices() {
  return detail::timed("indices", [](SuiteReport& r) {
    const SturmLiouvilleSpec base{2, Matrix(kepler_R()), 0.0};
    for (double e : {0.0, 0.5, 0.9})
      for (int omega : {1, -1}) {
        SturmLiouvilleSpec s = base;
        s.e = e;
        const int want_m = omega == 1 ? 0 : 2, want_n = omega == 1 ? 3 : 0;
        const std::string name = "indices.kepler e=" + detail::fmt("%g", e) + " omega=" + std::to_string(omega);
        try {
          const auto res = morse_index(s, omega);
          const bool ok = res.morse == want_m && res.nullity == want_n;
          r.checks.push_back({name, ok, double(res.morse * 10 + res.nullity), double(want_m * 10 + want_n), 0.0,
                              "(morse, nullity) = (" + std::to_string(res.morse) + ", " + std::to_string(res.nullity) +
                                  ") at K = " + std::to_string(res.K) + " and " + std::to_string(2 * res.K)});
        } catch (const IndexNotConverged& x) {
          r.checks.push_back({name, false, double(x.fine.morse * 10 + x.fine.nullity), double(want_m * 10 + want_n),
                              0.0, "index changed between truncation levels"});
        }
      }
  });
}

// ------------------------------------------------------------------ traces

/// Direct-G, half-trace quadrature and closed form for D_L and D-tilde.
inline SuiteReport verify_trace_agreement(const std::vector<double>& es = {0.1, 0.3, 0.5, 0.7}, double tol = 1e-5) {
  return detail::timed("traces", [&](SuiteReport& r) {
    for (double e : es) {
      const std::string at = " e=" + detail::fmt("%g", e);
      const auto bp = boundary_data(e, Half::Plus), bm = boundary_data(e, Half::Minus);

      const auto DL = d_lagrange(e);
      const double dp = trace_F_and_F2(DL, e, bp).second, dm = trace_F_and_F2(DL, e, bm).second;
      const double hp = f_half(DL, e, Half::Plus), hm = f_half(DL, e, Half::Minus);
      const double cp = fL_plus(e), cm = fL_minus(e);
      r.checks.push_back(detail::relative("traces.DL.plus direct_vs_half" + at, dp, hp, tol));
      r.checks.push_back(detail::relative("traces.DL.plus direct_vs_closed" + at, dp, cp, tol));
      r.checks.push_back(detail::relative("traces.DL.minus direct_vs_half" + at, dm, hm, tol));
      r.checks.push_back(detail::relative("traces.DL.minus direct_vs_closed" + at, dm, cm, tol));
      const double verbatim = f_half(DL, e, Half::Minus, MinusIndexSet::Verbatim);
      r.notes.push_back("NOTE traces.DL.minus" + at + ": printed index range gives " + format_double(verbatim) +
                        ", direct-G gives " + format_double(dm) +
                        "; direct-G is authoritative and the half trace uses rows {1,2}, columns {3,4}");

      const auto Dt = d_tilde(e);
      const double tp = trace_F_and_F2(Dt, e, bp).second, tm = trace_F_and_F2(Dt, e, bm).second;
      const double htp = f_half(Dt, e, Half::Plus), htm = f_half(Dt, e, Half::Minus);
      const double ct = f_tilde(e);
      r.checks.push_back(detail::relative("traces.Dtilde.plus direct_vs_half" + at, tp, htp, tol));
      r.checks.push_back(detail::relative("traces.Dtilde.minus direct_vs_half" + at, tm, htm, tol));
      r.checks.push_back(detail::relative("traces.Dtilde.minus direct_vs_closed" + at, tm, ct, tol));
      r.checks.push_back(detail::at_most("traces.Dtilde.plus_below_minus" + at, tp, tm,
                                         "the plus half is dominated, so f-tilde bounds both halves"));
    }
  });
}

/// Caption numbers of the Lagrange, Euler and (alpha, eta) figures.
inline SuiteReport verify_captions(double tol = 5e-4) {
  return detail::timed("captions", [&](SuiteReport& r) {
    using closed::Rho2Variant;
    auto lagrange = [](double g) {
      const double s = 3 - 1 / std::sqrt(g);
      return 9 - s * s;
    };
    auto euler = [](double g) { return 1 / (2 * std::sqrt(g)); };
    const double g0 = gL_minus(0.0), gc = gL_minus_variant(0.1, Rho2Variant::Check),
                 gh = gL_minus_variant(0.1, Rho2Variant::Hat);
    r.checks.push_back(detail::near("captions.lagrange.intercept", lagrange(g0), 0.7469, tol));
    r.checks.push_back(detail::near("captions.lagrange.e0_check", lagrange(gc), 0.4077, tol));
    r.checks.push_back(detail::near("captions.lagrange.e0_hat", lagrange(gh), 0.4006, tol));
    r.checks.push_back(detail::near("captions.euler.intercept", euler(g0), 0.0636, tol));
    r.checks.push_back(detail::near("captions.euler.e0_check", euler(gc), 0.0344, tol));
    r.checks.push_back(detail::near("captions.euler.e0_hat", euler(gh), 0.0338, tol));
    r.checks.push_back(detail::near("captions.alphaeta.f_intercept", 1 / std::sqrt(f_tilde(0.0)), 0.0523, tol));
    r.checks.push_back(detail::near("captions.alphaeta.g_intercept", 1 / std::sqrt(g_tilde(0.0)), 0.0193, tol));
    r.checks.push_back(detail::near("captions.alphaeta.e0_check", 1 / std::sqrt(g_tilde_check(0.1)), 0.0189, tol));
    r.checks.push_back(detail::near("captions.alphaeta.e0_hat", 1 / std::sqrt(g_tilde_hat(0.1)), 0.0187, tol));
  });
}

// ------------------------------------------------------------------ (1+9)-gon

inline SuiteReport verify_gon9(double tol = 5e-4) {
  return detail::timed("gon9", [&](SuiteReport& r) {
    r.checks.push_back(detail::near("gon9.q_max", q_max(9), 4.9047, 1e-4));
    r.checks.push_back(detail::near("gon9.intercept", gon_bound_beta(9, 0.0), 0.00445, tol));
    r.checks.push_back(
        detail::near("gon9.e0_check", gon_bound_beta_for(9, 1 / std::sqrt(g_tilde_check(0.1))), 0.00418, tol));
    r.checks.push_back(
        detail::near("gon9.e0_hat", gon_bound_beta_for(9, 1 / std::sqrt(g_tilde_hat(0.1))), 0.00422, tol));
    const auto env = alpha_eta_envelope(9, 1 / 0.00445);
    const auto& c = env.blocks.front().plus;
    r.notes.push_back("NOTE gon9: at m = 1/0.00445 the l = 1 corner alone gives zeta = " +
                      detail::fmt("%.6g", zeta(c.alpha_hat, c.eta_hat)) + ", while the largest corner over all blocks gives " +
                      detail::fmt("%.6g", xi_gon(9, 1 / 0.00445)) + " against 1/sqrt(g-tilde(0)) = " +
                      detail::fmt("%.6g", 1 / std::sqrt(g_tilde(0.0))));
  });
}

// ------------------------------------------------------------------ domination and brackets

inline SuiteReport verify_domination(int samples = 50, double e_max = 0.95, double e0 = 0.1) {
  return detail::timed("bounds", [&](SuiteReport& r) {
    double worst_p = -INFINITY, worst_m = -INFINITY, worst_t = -INFINITY, worst_b = -INFINITY;
    std::string where_b;
    for (double e : linspace(0.0, e_max, samples)) {
      worst_p = std::max(worst_p, fL_plus(e) / gL_plus(e, e0) - 1);
      worst_m = std::max(worst_m, fL_minus(e) / gL_minus(e, e0) - 1);
      worst_t = std::max(worst_t, f_tilde(e) / g_tilde(e, e0) - 1);
      const auto rho = rho_integrals(e);
      const auto b = rho_bracket(e, e0);
      const double viol = std::max({b.rho1_lo - rho.rho1, rho.rho1 - b.rho1_hi, b.rho2_lo - rho.rho2,
                                    rho.rho2 - b.rho2_hi, rho.rho3 - b.rho3_hi}) /
                          std::max(1.0, rho.rho3);
      if (viol > worst_b) {
        worst_b = viol;
        where_b = "worst at e=" + detail::fmt("%g", e);
      }
    }
    r.checks.push_back(detail::at_most("bounds.fL_plus_le_gL_plus", worst_p, 1e-12, "max of f/g - 1"));
    r.checks.push_back(detail::at_most("bounds.fL_minus_le_gL_minus", worst_m, 1e-12, "max of f/g - 1, equal at e = 0"));
    r.checks.push_back(detail::at_most("bounds.f_tilde_le_g_tilde", worst_t, 1e-12, "max of f/g - 1"));
    r.checks.push_back(detail::at_most("bounds.rho_brackets", worst_b, 1e-12, where_b));
  });
}

// ------------------------------------------------------------------ region consistency

/// Grid points inside the region whose 8 neighbours (those present) are inside too, with param > 0.
inline std::vector<std::size_t> strict_interior(const std::vector<ScanRow>& rows, int param_samples, int e_samples) {
  std::vector<std::size_t> out;
  for (int i = 0; i < param_samples; ++i)
    for (int j = 0; j < e_samples; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * e_samples + j;
      if (!rows[idx].inside_bound || !(rows[idx].param > 0)) continue;
      bool all = true;
      for (int di = -1; di <= 1 && all; ++di)
        for (int dj = -1; dj <= 1 && all; ++dj) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= param_samples || b >= e_samples) continue;
          all = rows[static_cast<std::size_t>(a) * e_samples + b].inside_bound;
        }
      if (all) out.push_back(idx);
    }
  return out;
}

/// Runs a 20x20 scan and checks the class of every strictly interior point.
inline CheckResult region_check(const std::string& name, const ScanRequest& req,
                                const std::function<bool(const ScanRow&)>& expected, const std::string& what) {
  const auto rows = scan(req);
  const auto inner = strict_interior(rows, req.param_samples, req.e_samples);
  int bad = 0;
  std::string first;
  for (auto idx : inner)
    if (!expected(rows[idx])) {
      if (!bad++) first = " first at param=" + format_double(rows[idx].param) + " e=" + format_double(rows[idx].e) +
                          " class=" + rows[idx].class_tag();
    }
  return {name, bad == 0 && !inner.empty(), double(bad), 0.0, 0.0,
          std::to_string(inner.size()) + " interior points expected " + what + first};
}

inline SuiteReport verify_regions(unsigned workers = 0) {
  return detail::timed("regions", [&](SuiteReport& r) {
    ScanRequest q;
    q.param_samples = q.e_samples = 20;
    q.e_min = 0;
    q.e_max = 0.9;
    q.workers = workers;

    q.family = FamilyKind::Lagrange;
    q.param_min = 0;
    q.param_max = 1;
    r.checks.push_back(region_check("regions.lagrange", q, [](const ScanRow& x) { return x.class_tag() == "EE"; }, "EE"));

    q.family = FamilyKind::Euler;
    q.param_max = 0.06;
    r.checks.push_back(region_check("regions.euler", q, [](const ScanRow& x) { return x.class_tag() == "EH"; }, "EH"));

    q.family = FamilyKind::Gon;
    q.fixed = {{"n", 9}};
    q.param_min = 5e-5;
    q.param_max = 1.2e-3;
    q.classify_tol = 1e-6;
    r.checks.push_back(region_check("regions.gon9", q, [](const ScanRow& x) { return x.all_stable; },
                                    "every block linearly stable"));
  });
}

// ------------------------------------------------------------------ properties

namespace detail {
inline std::vector<FamilySpec> property_families() {
  return {family::Lagrange{0.5}, family::Lagrange{8.0}, family::Euler{0.03}, family::Euler{1.0},
          family::AlphaEta{1.5, 0.02}, family::Gon{9, 1000.0, std::nullopt}, family::Kepler{}};
}

/// Largest distance from lambda^{-1} and conj(lambda) to the spectrum, over the spectrum.
/// A pair (w, z) is compared through whichever of w - z and 1/w - 1/z is better conditioned.
inline double quadruple_defect(const std::vector<cplx>& ev) {
  double worst = 0;
  auto dist = [&](cplx z) {
    double d = INFINITY;
    for (const auto& w : ev) {
      const double direct = std::abs(w - z) / std::max(1.0, std::abs(z));
      const double inverted = std::abs(1.0 / w - 1.0 / z) / std::max(1.0, 1 / std::abs(z));
      d = std::min(d, std::min(direct, inverted));
    }
    return d;
  };
  for (const auto& l : ev) worst = std::max({worst, dist(1.0 / l), dist(std::conj(l))});
  return worst;
}
}  // namespace detail

inline SuiteReport verify_properties() {
  return detail::timed("properties", [](SuiteReport& r) {
    constexpr double integrator_tol = 1e-12;
    double worst_sym = 0, worst_quad = 0;
    for (const auto& f : detail::property_families())
      for (double e : {0.0, 0.3, 0.6, 0.9}) {
        const auto res = monodromy(essential_system(f, e));
        for (const auto& b : res.blocks) {
          const double scale = std::max(1.0, b.matrix.cwiseAbs().maxCoeff());
          worst_sym = std::max(worst_sym, symplectic_defect(b.matrix) / (scale * scale));
          if (!std::holds_alternative<family::Kepler>(f))
            worst_quad = std::max(worst_quad, detail::quadruple_defect(eigenvalues(b.matrix)));
        }
      }
    r.checks.push_back(detail::at_most("properties.symplecticity", worst_sym, 100 * integrator_tol,
                                       "max |M^T J M - J| / max(1, |M|)^2"));
    r.checks.push_back(detail::at_most("properties.eigen_quadruples", worst_quad, 1e-6,
                                       "distance from 1/lambda and conj(lambda) to the spectrum"));

    double worst_herm = 0;
    for (const auto& f : {FamilySpec{family::Lagrange{2.0}}, FamilySpec{family::Gon{9, 500.0, std::nullopt}}})
      for (double e : {0.0, 0.5, 0.9})
        for (const auto& b : essential_system(f, e).blocks)
          for (int omega : {1, -1}) {
            const auto h = assemble_hill({b.k, b.R, e}, omega, 16);
            const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
            worst_herm = std::max(worst_herm, (h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() / scale);
          }
    r.checks.push_back(detail::at_most("properties.hill_hermitian", worst_herm, 1e-12));

    int mismatches = 0;
    std::string detail_text;
    for (double e : {0.0, 0.3, 0.7})
      for (int omega : {1, -1}) {
        const Matrix R1 = essential_R(family::Lagrange{0.5}).front(), R2 = essential_R(family::Euler{1.0}).front();
        Matrix R = Matrix::Zero(4, 4);
        R.topLeftCorner(2, 2) = R1;
        R.bottomRightCorner(2, 2) = R2;
        const auto a = count_index({2, R1, e}, omega, 64), b = count_index({2, R2, e}, omega, 64);
        const auto c = count_index({4, R, e}, omega, 64);
        if (c.morse != a.morse + b.morse || c.nullity != a.nullity + b.nullity) {
          ++mismatches;
          detail_text += " e=" + detail::fmt("%g", e) + " omega=" + std::to_string(omega);
        }
      }
    r.checks.push_back({"properties.index_additivity", mismatches == 0, double(mismatches), 0.0, 0.0,
                        mismatches ? "mismatch at" + detail_text : "block-diagonal morse and nullity equal the sums"});

    double worst_imag = 0;
    for (double e : {0.0, 0.5})
      for (int omega : {1, -1})
        for (const auto& k : generalized_eigs({2, Matrix(1.5 * Matrix::Identity(2, 2)), e}, Matrix(n_tilde()), omega, 32))
          worst_imag = std::max(worst_imag, std::abs(k.imag()));
    r.checks.push_back(detail::at_most("properties.generalized_eigs_real", worst_imag, 1e-7,
                                       "positive base, bump N-tilde / (1 + e cos theta)"));
  });
}

// ------------------------------------------------------------------ suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"kepler", "traces", "indices", "gon9", "all"};
  return n;
}

inline SuiteReport run_suite(const std::string& name) {
  if (name == "kepler") return verify_kepler();
  if (name == "indices") return verify_indices();
  if (name == "traces") {
    SuiteReport r = verify_trace_agreement();
    r.append(verify_captions());
    return r;
  }
  if (name == "gon9") return verify_gon9();
  if (name == "all") {
    SuiteReport r{"all", {}, {}, 0.0};
    for (const char* s : {"kepler", "traces", "indices", "gon9"}) r.append(run_suite(s));
    return r;
  }
  throw ValidationError("unknown suite '" + name + "'");
}

}  // namespace erestab
