#include "jla/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace jla {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

struct Series {
  std::vector<double> x, y;
  std::string color;
  std::string label;
  bool dashed = false;
};

struct HLine {
  double y;
  std::string color;
};

class SvgFigure {
 public:
  SvgFigure(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)),
        xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void add_hline(double y, std::string color) {
    hlines_.push_back({y, std::move(color)});
  }

  void render(std::ostream& out) const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series_) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    for (const HLine& h : hlines_) {
      ymin = std::min(ymin, h.y);
      ymax = std::max(ymax, h.y);
    }
    if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; }
    if (!std::isfinite(ymin)) { ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) { xmax += 1; xmin -= 1; }
    if (ymax - ymin < 1e-12) { ymax += 1; ymin -= 1; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
      return kLeft + (x - xmin) / (xmax - xmin) * (kW - kLeft - kRight);
    };
    auto py = [&](double y) {
      return kH - kBottom - (y - ymin) / (ymax - ymin) * (kH - kTop - kBottom);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
        << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"18\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << title_ << "</text>\n";

    // axes box and ticks
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << kW - kLeft - kRight << "\" height=\"" << kH - kTop - kBottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double tx : ticks(xmin, xmax)) {
      out << "<line x1=\"" << fmt(px(tx)) << "\" y1=\"" << kH - kBottom
          << "\" x2=\"" << fmt(px(tx)) << "\" y2=\"" << kH - kBottom + 5
          << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << fmt(px(tx)) << "\" y=\"" << kH - kBottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << fmt(tx) << "</text>\n";
    }
    for (double ty : ticks(ymin, ymax)) {
      out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(ty))
          << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(py(ty))
          << "\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(ty)) << "\" x2=\""
          << kW - kRight << "\" y2=\"" << fmt(py(ty))
          << "\" stroke=\"#e0e0e0\"/>\n";
      out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(ty) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << fmt(ty) << "</text>\n";
    }
    out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << xlabel_ << "</text>\n";
    out << "<text x=\"16\" y=\"" << kH / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 16 "
        << kH / 2 << ")\">" << ylabel_ << "</text>\n";

    for (const HLine& h : hlines_) {
      out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(h.y)) << "\" x2=\""
          << kW - kRight << "\" y2=\"" << fmt(py(h.y)) << "\" stroke=\""
          << h.color << "\" stroke-dasharray=\"6,3\"/>\n";
    }

    for (const Series& s : series_) {
      out << "<path d=\"";
      bool pen_down = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          pen_down = false;
          continue;
        }
        out << (pen_down ? 'L' : 'M') << fmt(px(s.x[i])) << ' '
            << fmt(py(s.y[i]));
        pen_down = true;
      }
      out << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
      if (s.dashed) out << " stroke-dasharray=\"4,3\"";
      out << "/>\n";
    }

    // legend
    double ly = kTop + 14;
    for (const Series& s : series_) {
      if (s.label.empty()) continue;
      out << "<line x1=\"" << kW - kRight - 150 << "\" y1=\"" << fmt(ly - 4)
          << "\" x2=\"" << kW - kRight - 125 << "\" y2=\"" << fmt(ly - 4)
          << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>\n";
      out << "<text x=\"" << kW - kRight - 120 << "\" y=\"" << fmt(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
          << "</text>\n";
      ly += 15;
    }
    out << "</svg>\n";
  }

 private:
  static constexpr double kW = 720, kH = 420;
  static constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

  static std::vector<double> ticks(double lo, double hi) {
    const double range = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(range / 5.0)));
    if (range / step > 10) step *= 2;
    if (range / step > 10) step *= 2.5;
    if (range / step > 10) step *= 2;
    std::vector<double> out;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-9 * range; t += step) out.push_back(t);
    return out;
  }

  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
  std::vector<HLine> hlines_;
};

std::vector<double> column_t(const SimTrace& trace) {
  std::vector<double> t;
  t.reserve(trace.records.size());
  for (const auto& r : trace.records) t.push_back(r.t);
  return t;
}

std::vector<double> column(const SimTrace& trace,
                           double (*get)(const TraceRecord&, int), int i) {
  std::vector<double> v;
  v.reserve(trace.records.size());
  for (const auto& r : trace.records) v.push_back(get(r, i));
  return v;
}

void write_svg(const std::string& path, const SvgFigure& fig,
               std::vector<std::string>& written) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot open " + path);
  fig.render(out);
  written.push_back(path);
}

}  // namespace

std::vector<std::string> render_trace_plots(const SimTrace& trace,
                                            const std::string& stem) {
  std::vector<std::string> written;
  const int n = trace.n_joints;
  const auto t = column_t(trace);

  {
    SvgFigure fig("Joint positions", "t [s]", "angle [deg]");
    for (int i = 0; i < n; ++i) {
      fig.add({t,
               column(trace, [](const TraceRecord& r, int j) {
                 return rad_to_deg(r.q[j]);
               }, i),
               kPalette[i % 6], "q_" + std::to_string(i), false});
      fig.add({t,
               column(trace, [](const TraceRecord& r, int j) {
                 return rad_to_deg(r.q_d[j]);
               }, i),
               kPalette[i % 6], "q_d_" + std::to_string(i), true});
      if (trace.limits_min.size() == n) {
        fig.add_hline(rad_to_deg(trace.limits_min[i]), "#888888");
        fig.add_hline(rad_to_deg(trace.limits_max[i]), "#888888");
      }
    }
    write_svg(stem + "_positions.svg", fig, written);
  }

  {
    SvgFigure fig("Control torques", "t [s]", "torque [N*m]");
    for (int i = 0; i < n; ++i) {
      fig.add({t,
               column(trace, [](const TraceRecord& r, int j) {
                 return r.tau[j];
               }, i),
               kPalette[i % 6], "tau_" + std::to_string(i), false});
      fig.add({t,
               column(trace, [](const TraceRecord& r, int j) {
                 return r.tau_raw[j];
               }, i),
               kPalette[i % 6], "tau_raw_" + std::to_string(i), true});
    }
    write_svg(stem + "_torques.svg", fig, written);
  }

  {
    SvgFigure fig("External force", "t [s]", "force [N]");
    std::vector<double> mag;
    mag.reserve(trace.records.size());
    for (const auto& r : trace.records) mag.push_back(r.f_ext.norm());
    fig.add({t, mag, kPalette[0], "|F|", false});
    write_svg(stem + "_force.svg", fig, written);
  }

  bool any_v = false;
  for (const auto& r : trace.records) any_v = any_v || std::isfinite(r.V);
  if (any_v) {
    SvgFigure fig("Lyapunov function", "t [s]", "V [J], Vdot [J/s]");
    fig.add({t,
             column(trace, [](const TraceRecord& r, int) { return r.V; }, 0),
             kPalette[0], "V", false});
    fig.add({t,
             column(trace,
                    [](const TraceRecord& r, int) { return r.V_dot_numeric; },
                    0),
             kPalette[1], "Vdot (numeric)", false});
    write_svg(stem + "_lyapunov.svg", fig, written);
  }

  return written;
}

}  // namespace jla
