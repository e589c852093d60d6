// erestab: command-line front end for the stability library.

#include <CLI11.hpp>
#include <erestab/erestab.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace erestab;

namespace {

constexpr int kOk = 0, kValidation = 1, kNumeric = 2, kVerifyFailed = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw ValidationError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ','))
    if (!item.empty()) out.push_back(parse_double(item));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

nlohmann::json matrix_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

int report(const SuiteReport& r) {
  for (const auto& c : r.checks) std::cout << format_check(c) << "\n";
  for (const auto& n : r.notes) std::cout << n << "\n";
  std::cout << (r.passed() ? "PASS" : "FAIL") << " suite " << r.suite << " (" << r.checks.size() << " checks, "
            << format_double(r.seconds) << " s)\n";
  return r.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear stability of elliptic relative equilibria"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  int rc = kOk;

  // kepler-verify
  auto* kv = app.add_subcommand("kepler-verify", "Closed-form Kepler fundamental solution against the ODE");
  std::string kv_e = "0,0.3,0.6,0.9";
  double kv_tol = 1e-8;
  kv->add_option("--e", kv_e, "comma-separated eccentricities");
  kv->add_option("--tol", kv_tol, "maximum allowed deviation");
  kv->callback([&] {
    std::vector<double> es = parse_list(kv_e);
    for (double e : es) Eccentricity{e};
    if (!(kv_tol > 0)) throw ValidationError("--tol must be positive");
    rc = report(verify_kepler(es, kv_tol));
  });

  // monodromy
  auto* mo = app.add_subcommand("monodromy", "Monodromy matrix and spectral class of a family");
  std::string mo_family, mo_params;
  double mo_e = 0, mo_tol = 1e-7;
  bool mo_json = false;
  mo->add_option("--family", mo_family, "kepler|lagrange|euler|alphaeta|gon")->required();
  mo->add_option("--params", mo_params, "k=v,... (beta; alpha,eta; n,m or beta, optional l)");
  mo->add_option("--e", mo_e, "eccentricity")->required();
  mo->add_option("--classify-tol", mo_tol, "classification tolerance");
  mo->add_flag("--json", mo_json, "emit JSON");
  mo->callback([&] {
    const auto spec = family_from_params(family_kind_from_string(mo_family), parse_params(mo_params));
    const auto sys = essential_system(spec, mo_e);
    const auto res = monodromy(sys, mo_tol);
    nlohmann::json out;
    out["family"] = family_label(spec);
    out["e"] = mo_e;
    out["matrix"] = matrix_json(res.matrix);
    out["blocks"] = nlohmann::json::array();
    for (const auto& b : res.blocks) {
      nlohmann::json jb;
      jb["matrix"] = matrix_json(b.matrix);
      jb["class"] = block_tag(b);
      jb["linearly_stable"] = b.linearly_stable;
      jb["symplectic_defect"] = symplectic_defect(b.matrix);
      nlohmann::json ev = nlohmann::json::array();
      for (const auto& l : eigenvalues(b.matrix)) ev.push_back({l.real(), l.imag()});
      jb["eigenvalues"] = ev;
      out["blocks"].push_back(jb);
    }
    out["steps"] = res.stats.steps;
    out["warnings"] = res.warnings;
    if (mo_json) {
      std::cout << out.dump(2) << "\n";
      return;
    }
    std::cout << "family " << family_label(spec) << " e=" << format_double(mo_e) << "\n";
    for (std::size_t i = 0; i < res.blocks.size(); ++i) {
      const auto& b = res.blocks[i];
      std::cout << "block " << i + 1 << " class=" << block_tag(b) << " linearly_stable=" << b.linearly_stable
                << " symplectic_defect=" << format_double(symplectic_defect(b.matrix)) << "\n"
                << b.matrix << "\neigenvalues:";
      for (const auto& l : eigenvalues(b.matrix)) std::cout << " (" << format_double(l.real()) << "," << format_double(l.imag()) << ")";
      std::cout << "\n";
    }
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  });

  // bounds
  auto* bo = app.add_subcommand("bounds", "Tabulate the analytic stability boundary");
  std::string bo_family, bo_out, bo_params;
  double bo_emin = 0, bo_emax = 0.9, bo_e0 = 0.1;
  int bo_samples = 50;
  bool bo_use_g = false;
  bo->add_option("--family", bo_family, "lagrange|euler|alphaeta|gon")->required();
  bo->add_option("--params", bo_params, "fixed parameters (gon: n)");
  bo->add_option("--e-min", bo_emin, "smallest eccentricity");
  bo->add_option("--e-max", bo_emax, "largest eccentricity");
  bo->add_option("--samples", bo_samples, "number of eccentricities");
  bo->add_flag("--use-g", bo_use_g, "use the piecewise g-bounds instead of the exact traces");
  bo->add_option("--e0", bo_e0, "switch point of the piecewise g-bounds");
  bo->add_option("--out", bo_out, "CSV output path, '-' for stdout")->required();
  bo->callback([&] {
    const auto kind = family_kind_from_string(bo_family);
    if (kind == FamilyKind::Kepler) throw ValidationError("the Kepler family has no bound curve");
    if (bo_samples < 2) throw ValidationError("--samples must be at least 2");
    if (!(bo_emin <= bo_emax)) throw ValidationError("--e-min must not exceed --e-max");
    Eccentricity{bo_emin};
    Eccentricity{bo_emax};
    validate_e0(bo_e0);
    const auto fixed = parse_params(bo_params);
    std::ostringstream os;
    os << "family,e,bound\n";
    for (double e : linspace(bo_emin, bo_emax, bo_samples))
      os << bo_family << ',' << format_double(e) << ',' << format_double(region_bound(kind, fixed, e, bo_e0, bo_use_g))
         << "\n";
    write_text(bo_out, os.str());
  });

  // trace
  auto* tr = app.add_subcommand("trace", "Tr(F^2) of one half of the Z2 splitting");
  std::string tr_pert, tr_half, tr_method;
  double tr_e = 0;
  tr->add_option("--perturbation", tr_pert, "dl|de|dtilde")->required()->check(CLI::IsMember({"dl", "de", "dtilde"}));
  tr->add_option("--e", tr_e, "eccentricity")->required();
  tr->add_option("--half", tr_half, "plus|minus")->required()->check(CLI::IsMember({"plus", "minus"}));
  tr->add_option("--method", tr_method, "closed|quadrature|direct")
      ->required()
      ->check(CLI::IsMember({"closed", "quadrature", "direct"}));
  tr->callback([&] {
    const Eccentricity e = tr_e;
    const Half h = tr_half == "plus" ? Half::Plus : Half::Minus;
    const PerturbationD D = tr_pert == "dl" ? d_lagrange(e) : tr_pert == "de" ? d_euler(e) : d_tilde(e);
    double v = 0;
    if (tr_method == "direct") {
      v = trace_F_and_F2(D, e, boundary_data(e, h)).second;
    } else if (tr_method == "quadrature") {
      v = f_half(D, e, h);
    } else if (tr_pert == "dtilde") {
      if (h == Half::Plus) throw ValidationError("no closed form for the plus half of D-tilde; use quadrature or direct");
      v = f_tilde(e);
    } else {
      v = h == Half::Plus ? fL_plus(e) : fL_minus(e);
    }
    std::cout << "perturbation=" << tr_pert << " e=" << format_double(tr_e) << " half=" << tr_half
              << " method=" << tr_method << " value=" << format_double(v) << "\n";
  });

  // index
  auto* ix = app.add_subcommand("index", "omega-Morse index and nullity by Hill's method");
  std::string ix_family, ix_params;
  double ix_e = 0, ix_null_tol = 1e-8;
  int ix_omega = 1, ix_modes = 0;
  ix->add_option("--family", ix_family, "kepler|lagrange|euler|alphaeta|gon")->required();
  ix->add_option("--params", ix_params, "k=v,...");
  ix->add_option("--e", ix_e, "eccentricity")->required();
  ix->add_option("--omega", ix_omega, "1 or -1")->required()->check(CLI::IsMember({1, -1}));
  ix->add_option("--modes", ix_modes, "Fourier truncation K (default 128 for 2x2 blocks, 192 for 4x4)");
  ix->add_option("--null-tol", ix_null_tol, "nullity threshold, relative to the potential size");
  ix->callback([&] {
    const auto spec = family_from_params(family_kind_from_string(ix_family), parse_params(ix_params));
    std::optional<int> K;
    if (ix_modes) K = ix_modes;
    const auto sys = essential_system(spec, ix_e);
    const auto r = morse_index(sys, ix_omega, K, ix_null_tol);
    std::cout << "family=" << family_label(spec) << " e=" << format_double(ix_e) << " omega=" << ix_omega
              << " morse=" << r.morse << " nullity=" << r.nullity << " K=" << r.K << "\nsmallest |eigenvalues|:";
    for (double l : r.smallest_abs_eigs) std::cout << " " << format_double(l);
    std::cout << "\n";
  });

  // scan
  auto* sc = app.add_subcommand("scan", "Classify a parameter/eccentricity grid");
  ScanRequest req;
  std::string sc_family, sc_params, sc_out;
  sc->add_option("--family", sc_family, "lagrange|euler|alphaeta|gon")->required();
  sc->add_option("--params", sc_params, "fixed parameters (alphaeta: alpha; gon: n, l)");
  sc->add_option("--param-min", req.param_min, "smallest swept parameter")->required();
  sc->add_option("--param-max", req.param_max, "largest swept parameter")->required();
  sc->add_option("--param-samples", req.param_samples, "number of parameter values")->required();
  sc->add_option("--e-min", req.e_min, "smallest eccentricity")->required();
  sc->add_option("--e-max", req.e_max, "largest eccentricity")->required();
  sc->add_option("--e-samples", req.e_samples, "number of eccentricities")->required();
  sc->add_flag("--overlay-bounds", req.overlay_bounds, "add the boundary value at each e as a column");
  sc->add_option("--e0", req.e0, "switch point of the piecewise g-bounds");
  sc->add_option("--classify-tol", req.classify_tol, "classification tolerance");
  sc->add_option("--workers", req.workers, "worker threads (0: available parallelism)");
  sc->add_option("--out", sc_out, "output path (.json for JSON, otherwise CSV; '-' for stdout)")->required();
  sc->callback([&] {
    req.family = family_kind_from_string(sc_family);
    req.fixed = parse_params(sc_params);
    const auto rows = scan(req);
    write_text(sc_out, ends_with(sc_out, ".json") ? to_json(rows).dump(2) + "\n" : to_csv(rows));
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.class_tag() == "failed";
    if (failed) std::cerr << "warning: " << failed << " grid points failed to integrate\n";
  });

  // render
  auto* re = app.add_subcommand("render", "Render a scan table as SVG");
  std::string re_in, re_out;
  re->add_option("--in", re_in, "scan CSV")->required();
  re->add_option("--out", re_out, "SVG output path")->required();
  re->callback([&] { write_text(re_out, render_region(from_csv(read_text(re_in)))); });

  // verify
  auto* ve = app.add_subcommand("verify", "Run a verification suite");
  std::string ve_suite = "all";
  ve->add_option("--suite", ve_suite, "kepler|traces|indices|gon9|all")
      ->check(CLI::IsMember({"kepler", "traces", "indices", "gon9", "all"}));
  ve->callback([&] { rc = report(run_suite(ve_suite)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const InvalidState& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return rc;
}
