#include "kpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace kpp {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 50.0;

std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool ok() const { return std::isfinite(lo) && std::isfinite(hi); }
  void pad() {
    if (!ok()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-300) {
      const double w = std::max(1.0, std::abs(hi)) * 0.5;
      lo -= w;
      hi += w;
    }
  }
};

/// Render one chart's body translated to (0, y_off) inside an outer SVG.
void render_body(std::ostringstream& out, const ChartSpec& spec, double y_off) {
  Range rx, ry;
  for (const auto& c : spec.curves) {
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      const double y = c.y[i];
      if (!std::isfinite(c.x[i]) || !std::isfinite(y)) continue;
      if (spec.log_y && !(y > 0.0)) continue;
      rx.absorb(c.x[i]);
      ry.absorb(spec.log_y ? std::log10(y) : y);
    }
  }
  rx.pad();
  ry.pad();

  const double px0 = kMarginL, px1 = kWidth - kMarginR;
  const double py0 = kHeight - kMarginB, py1 = kMarginT;  // y grows downward in SVG
  const auto to_px = [&](double x) { return px0 + (x - rx.lo) / (rx.hi - rx.lo) * (px1 - px0); };
  const auto to_py = [&](double y) { return py0 + (y - ry.lo) / (ry.hi - ry.lo) * (py1 - py0); };

  out << "<g transform=\"translate(0," << num6(y_off) << ")\">\n";
  out << "<rect x=\"" << num6(px0) << "\" y=\"" << num6(py1) << "\" width=\"" << num6(px1 - px0)
      << "\" height=\"" << num6(py0 - py1)
      << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << num6(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"monospace\" font-size=\"15\">" << escape(spec.title) << "</text>\n";
  out << "<text x=\"" << num6(kWidth / 2) << "\" y=\"" << num6(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num6((py0 + py1) / 2)
      << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << num6((py0 + py1) / 2) << ")\">" << escape(spec.y_label)
      << "</text>\n";

  // Four ticks per axis, value labels in %.6g.
  for (int k = 0; k <= 3; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 3.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 3.0;
    out << "<text x=\"" << num6(to_px(fx)) << "\" y=\"" << num6(py0 + 16)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" << num6(fx)
        << "</text>\n";
    const double fy_label = spec.log_y ? std::pow(10.0, fy) : fy;
    out << "<text x=\"" << num6(px0 - 6) << "\" y=\"" << num6(to_py(fy) + 3)
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" << num6(fy_label)
        << "</text>\n";
  }

  int li = 0;
  for (const auto& c : spec.curves) {
    out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
    bool open = false;
    std::string run;
    const auto flush = [&] {
      if (open) out << run;
      run.clear();
      open = false;
    };
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      double y = c.y[i];
      const bool usable =
          std::isfinite(c.x[i]) && std::isfinite(y) && (!spec.log_y || y > 0.0);
      if (!usable) {
        flush();
        continue;
      }
      if (spec.log_y) y = std::log10(y);
      run += num6(to_px(c.x[i])) + "," + num6(to_py(y)) + " ";
      open = true;
    }
    flush();
    out << "\"/>\n";
    if (!c.label.empty()) {
      const double ly = py1 + 16.0 + 16.0 * li++;
      out << "<line x1=\"" << num6(px1 - 150) << "\" y1=\"" << num6(ly - 4) << "\" x2=\""
          << num6(px1 - 126) << "\" y2=\"" << num6(ly - 4) << "\" stroke=\"" << c.color
          << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << num6(px1 - 120) << "\" y=\"" << num6(ly)
          << "\" font-family=\"monospace\" font-size=\"11\">" << escape(c.label) << "</text>\n";
    }
  }
  out << "</g>\n";
}

}  // namespace

std::string svg_chart(const ChartSpec& spec) { return svg_panels({spec}); }

std::string svg_panels(const std::vector<ChartSpec>& specs) {
  const double total_h = kHeight * static_cast<double>(std::max<std::size_t>(1, specs.size()));
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num6(kWidth) << " "
      << num6(total_h) << "\" width=\"" << num6(kWidth) << "\" height=\"" << num6(total_h)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double y_off = 0.0;
  for (const auto& spec : specs) {
    render_body(out, spec, y_off);
    y_off += kHeight;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace kpp
