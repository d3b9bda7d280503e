#pragma once

// Trace serialisation (CSV, JSON lines) and a small self-contained SVG line plot.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "mee/dynamics.hpp"

namespace mee::io {

/// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf.data(), res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

inline constexpr const char* kTraceHeader =
    "t,a,b,c,d,concurrence,mee,mee_singular,entropy,purity,C1,C2,C3,alpha,fidelity_phi1";

/// One trace row in header order; `time_scale` converts t to the reported axis (gamma t).
inline std::vector<std::string> trace_fields(const Sample& s, double time_scale) {
  std::vector<std::string> f;
  f.push_back(format_double(s.t * time_scale));
  if (s.x_form) {
    f.push_back(format_double(s.x.a));
    f.push_back(format_double(s.x.b));
    f.push_back(format_double(s.x.c));
    f.push_back(format_double(s.x.d));
  } else {
    f.insert(f.end(), 4, std::string{});
  }
  f.push_back(format_double(s.concurrence));
  f.push_back(format_optional(s.mee));
  f.push_back(s.mee ? (s.mee_singular ? "1" : "0") : "");
  f.push_back(format_double(s.entropy));
  f.push_back(format_double(s.purity));
  if (s.bell) {
    f.push_back(format_double(s.bell->c1));
    f.push_back(format_double(s.bell->c2));
    f.push_back(format_double(s.bell->c3));
  } else {
    f.insert(f.end(), 3, std::string{});
  }
  f.push_back(format_optional(s.alpha));
  f.push_back(format_optional(s.fidelity_phi1));
  return f;
}

inline void write_csv(std::ostream& os, const Trajectory& traj, double time_scale) {
  os << kTraceHeader << '\n';
  for (const auto& s : traj.samples) {
    const auto f = trace_fields(s, time_scale);
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << '\n';
  }
}

/// Same fields as the CSV; absent values are written as null.
inline void write_jsonl(std::ostream& os, const Trajectory& traj, double time_scale) {
  static const std::array<const char*, 15> names{"t",      "a",       "b",       "c",     "d",
                                                 "concurrence", "mee", "mee_singular", "entropy", "purity",
                                                 "C1",     "C2",      "C3",      "alpha", "fidelity_phi1"};
  for (const auto& s : traj.samples) {
    const auto f = trace_fields(s, time_scale);
    os << '{';
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) os << ',';
      os << '"' << names[i] << "\":";
      if (f[i].empty())
        os << "null";
      else if (i == 7)
        os << (f[i] == "1" ? "true" : "false");
      else
        os << f[i];
    }
    os << "}\n";
  }
}

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

namespace detail {

/// Tick step from {1, 2, 5} x 10^k giving at most `max_ticks` intervals.
inline double nice_step(double span, int max_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

inline std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << (std::abs(v) < 1e-12 ? 0.0 : v);
  return os.str();
}

}  // namespace detail

/// Line plot with a fixed 800x500 viewBox; axes span the data extents.
inline void write_svg(std::ostream& os, const std::string& title, const std::string& x_label,
                      const std::vector<double>& x, const std::vector<Series>& series) {
  constexpr double W = 800, H = 500, L = 70, R = 160, T = 40, B = 60;
  const double x0 = x.empty() ? 0.0 : x.front();
  double x1 = x.empty() ? 1.0 : x.back();
  if (x1 <= x0) x1 = x0 + 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) {
        y0 = std::min(y0, v);
        y1 = std::max(y1, v);
      }
  const double xs = detail::nice_step(x1 - x0, 10);
  const double ys = detail::nice_step(y1 - y0, 8);
  y1 = std::ceil(y1 / ys - 1e-9) * ys;
  y0 = std::floor(y0 / ys + 1e-9) * ys;

  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "<text x=\"" << detail::fixed(W / 2 - R / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
     << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n";
  os << "</g>\n<g font-size=\"12\">\n";
  for (double v = std::ceil(x0 / xs - 1e-9) * xs; v <= x1 + 1e-9 * xs; v += xs) {
    const auto p = detail::fixed(px(v));
    os << "<line x1=\"" << p << "\" y1=\"" << H - B << "\" x2=\"" << p << "\" y2=\"" << H - B + 5
       << "\" stroke=\"black\"/><text x=\"" << p << "\" y=\"" << H - B + 20 << "\" text-anchor=\"middle\">"
       << detail::fixed(v, xs < 1 ? 2 : 0) << "</text>\n";
  }
  for (double v = y0; v <= y1 + 1e-9 * ys; v += ys) {
    const auto p = detail::fixed(py(v));
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << p << "\" x2=\"" << L << "\" y2=\"" << p
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << p << "\" text-anchor=\"end\" dy=\"4\">"
       << detail::fixed(v) << "</text>\n";
  }
  os << "<text x=\"" << detail::fixed((L + W - R) / 2) << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label
     << "</text>\n</g>\n";

  double legend_y = T + 10;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << detail::fixed(px(x[i])) << ',' << detail::fixed(py(s.y[i])) << (i + 1 < n ? " " : "");
    }
    os << "\"/>\n";
    os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << legend_y << "\" x2=\"" << W - R + 40 << "\" y2=\"" << legend_y
       << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/><text x=\"" << W - R + 45 << "\" y=\"" << legend_y
       << "\" dy=\"4\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 20;
  }
  os << "</svg>\n";
}

}  // namespace mee::io
