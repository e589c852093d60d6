#pragma once

// Deterministic SVG rendering of a scan table.

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scan.hpp"

namespace erestab {

inline const std::map<std::string, std::string>& class_palette() {
  static const std::map<std::string, std::string> p{
      {"EE", "#4c9a2a"},       {"EH", "#e0a526"},       {"HH", "#c0392b"},    {"CS", "#8e44ad"},
      {"Degenerate", "#7f8c8d"}, {"stable", "#2e86c1"}, {"unstable", "#d35400"}, {"failed", "#000000"},
  };
  return p;
}

/// A grid point with several blocks is drawn by its single tag when all blocks agree, else by linear stability.
inline std::string display_class(const ScanRow& r) {
  std::set<std::string> tags(r.classes.begin(), r.classes.end());
  if (tags.size() == 1) return *tags.begin();
  if (tags.count("failed")) return "failed";
  const bool stable = std::all_of(r.classes.begin(), r.classes.end(), [](const std::string& c) {
    return c == "EE" || c == "stable";
  });
  return stable ? "stable" : "unstable";
}

namespace detail {
inline std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3f", v);
  return b;
}
inline std::string tick(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}
}  // namespace detail

inline std::string render_region(const std::vector<ScanRow>& rows) {
  if (rows.empty()) throw ValidationError("cannot render an empty table");
  constexpr double W = 800, H = 600, L = 80, R = 140, T = 40, B = 70;
  const double pw = W - L - R, ph = H - T - B;

  std::vector<double> ps, es;
  for (const auto& r : rows) {
    ps.push_back(r.param);
    es.push_back(r.e);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());

  auto half_step = [](const std::vector<double>& v) { return v.size() > 1 ? (v.back() - v.front()) / (v.size() - 1) / 2 : 0.5; };
  const double dp = half_step(ps), de = half_step(es);
  const double x0 = ps.front() - dp, x1 = ps.back() + dp, y0 = es.front() - de, y1 = es.back() + de;
  auto X = [&](double p) { return L + (p - x0) / (x1 - x0) * pw; };
  auto Y = [&](double e) { return T + ph - (e - y0) / (y1 - y0) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  const double cw = 2 * dp / (x1 - x0) * pw, ch = 2 * de / (y1 - y0) * ph;
  for (const auto& r : rows) {
    const auto& colour = class_palette().at(class_palette().count(display_class(r)) ? display_class(r) : "failed");
    s += "<rect x=\"" + detail::num(X(r.param) - cw / 2) + "\" y=\"" + detail::num(Y(r.e) - ch / 2) + "\" width=\"" +
         detail::num(cw) + "\" height=\"" + detail::num(ch) + "\" fill=\"" + colour + "\"" +
         (r.inside_bound ? " stroke=\"#ffffff\" stroke-width=\"0.6\"" : "") + "/>\n";
  }

  // bound curve: the boundary value at each e, drawn where it is in parameter units
  const std::string fam = rows.front().family;
  if (fam != "alphaeta") {
    std::map<double, double> curve;
    for (const auto& r : rows)
      if (r.bound) curve[r.e] = *r.bound;
    if (curve.size() >= 2) {
      s += "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" points=\"";
      bool first = true;
      for (const auto& [e, b] : curve) {
        const double bx = std::clamp(b, x0, x1);
        s += (first ? "" : " ") + detail::num(X(bx)) + "," + detail::num(Y(e));
        first = false;
      }
      s += "\"/>\n";
    }
  }

  s += "<rect x=\"" + detail::num(L) + "\" y=\"" + detail::num(T) + "\" width=\"" + detail::num(pw) + "\" height=\"" +
       detail::num(ph) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double p = x0 + (x1 - x0) * i / 4, e = y0 + (y1 - y0) * i / 4;
    s += "<text x=\"" + detail::num(X(p)) + "\" y=\"" + detail::num(T + ph + 20) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + detail::tick(p) + "</text>\n";
    s += "<text x=\"" + detail::num(L - 8) + "\" y=\"" + detail::num(Y(e) + 4) +
         "\" font-size=\"12\" text-anchor=\"end\">" + detail::tick(e) + "</text>\n";
  }
  const std::string xlabel = fam == "alphaeta" ? "eta" : fam == "gon" ? "beta = 1/m" : "beta";
  s += "<text x=\"" + detail::num(L + pw / 2) + "\" y=\"" + detail::num(H - 25) +
       "\" font-size=\"14\" text-anchor=\"middle\">" + fam + ": " + xlabel + "</text>\n";
  s += "<text x=\"20\" y=\"" + detail::num(T + ph / 2) + "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
       detail::num(T + ph / 2) + ")\">e</text>\n";

  std::set<std::string> used;
  for (const auto& r : rows) used.insert(display_class(r));
  double ly = T + 10;
  for (const auto& [name, colour] : class_palette()) {
    if (!used.count(name)) continue;
    s += "<rect x=\"" + detail::num(W - R + 20) + "\" y=\"" + detail::num(ly) + "\" width=\"14\" height=\"14\" fill=\"" +
         colour + "\"/>\n";
    s += "<text x=\"" + detail::num(W - R + 40) + "\" y=\"" + detail::num(ly + 12) + "\" font-size=\"12\">" + name +
         "</text>\n";
    ly += 22;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace erestab
