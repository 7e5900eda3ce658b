#include "otsense/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace otsense {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double nice_top(double v) {
  if (!(v > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= v) return m * mag;
  }
  return 10.0 * mag;
}

void header(std::string& s, double w, double h) {
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void line(std::string& s, double x1, double y1, double x2, double y2, const char* style) {
  s += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" " +
       style + "/>\n";
}

void text(std::string& s, double x, double y, const std::string& t, const char* extra = "") {
  s += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" " + extra + ">" + esc(t) + "</text>\n";
}

void y_axis(std::string& s, double left, double top, double bottom, double right, double ymax) {
  line(s, left, top, left, bottom, "stroke=\"black\"");
  line(s, left, bottom, right, bottom, "stroke=\"black\"");
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    const double y = bottom - (bottom - top) * i / 4.0;
    line(s, left - 4, y, left, y, "stroke=\"black\"");
    if (i > 0) line(s, left, y, right, y, "stroke=\"#dddddd\"");
    text(s, left - 6, y + 4, tick(v), "text-anchor=\"end\"");
  }
}

}  // namespace

std::string indices_svg(const IndexEstimate& est, std::optional<double> threshold) {
  const double n = static_cast<double>(std::max<std::size_t>(est.inputs.size(), 1));
  const double left = 60, top = 40, plot_h = 300, bar_w = 36, gap = 24;
  const double plot_w = n * (bar_w + gap) + gap;
  const double width = left + plot_w + 30, height = top + plot_h + 90;
  const double bottom = top + plot_h;

  double ymax = 0.0;
  for (const auto& in : est.inputs) {
    ymax = std::max(ymax, in.index);
    if (est.bootstrap) {
      if (const auto* e = est.bootstrap->find(in.name, est.method)) ymax = std::max(ymax, e->ci_high);
    }
  }
  if (threshold) ymax = std::max(ymax, *threshold);
  ymax = nice_top(ymax * 1.05);
  const auto ypos = [&](double v) { return bottom - plot_h * std::clamp(v, 0.0, ymax) / ymax; };

  std::string s;
  header(s, width, height);
  text(s, left, 22, "Sensitivity indices (" + est.method + ")", "font-size=\"14\"");
  y_axis(s, left, top, bottom, left + plot_w, ymax);

  for (std::size_t i = 0; i < est.inputs.size(); ++i) {
    const auto& in = est.inputs[i];
    const double x = left + gap + static_cast<double>(i) * (bar_w + gap);
    const double y = ypos(in.index);
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) + "\" height=\"" +
         num(bottom - y) + "\" fill=\"#4c78a8\"><title>" + esc(in.name) + ": " + tick(in.index) +
         "</title></rect>\n";
    if (est.bootstrap) {
      if (const auto* e = est.bootstrap->find(in.name, est.method)) {
        const double cx = x + bar_w / 2.0;
        const double lo = ypos(e->ci_low), hi = ypos(e->ci_high);
        line(s, cx, lo, cx, hi, "stroke=\"black\" stroke-width=\"1.5\"");
        line(s, cx - 8, lo, cx + 8, lo, "stroke=\"black\" stroke-width=\"1.5\"");
        line(s, cx - 8, hi, cx + 8, hi, "stroke=\"black\" stroke-width=\"1.5\"");
      }
    }
    const double lx = x + bar_w / 2.0, ly = bottom + 14;
    s += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" text-anchor=\"end\" transform=\"rotate(-45 " + num(lx) +
         " " + num(ly) + ")\">" + esc(in.name) + "</text>\n";
  }
  if (threshold) {
    const double y = ypos(*threshold);
    line(s, left, y, left + plot_w, y, "stroke=\"#d62728\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"");
    text(s, left + plot_w - 4, y - 4, "threshold " + tick(*threshold), "text-anchor=\"end\" fill=\"#d62728\"");
  }
  s += "</svg>\n";
  return s;
}

std::string separations_svg(const IndexEstimate& est, const std::vector<std::string>& inputs) {
  std::vector<const InputIndex*> panels;
  for (const auto& in : est.inputs) {
    if (inputs.empty() || std::find(inputs.begin(), inputs.end(), in.name) != inputs.end()) panels.push_back(&in);
  }
  const std::size_t cols = std::min<std::size_t>(3, std::max<std::size_t>(panels.size(), 1));
  const std::size_t rows = (panels.size() + cols - 1) / std::max<std::size_t>(cols, 1);
  const double pw = 280, ph = 220;
  const double width = pw * static_cast<double>(cols), height = ph * static_cast<double>(std::max<std::size_t>(rows, 1));

  double ymax = 0.0;
  for (const auto* p : panels) {
    for (double v : p->separations) ymax = std::max(ymax, v);
  }
  ymax = nice_top(ymax * 1.05);

  std::string s;
  header(s, width, height);
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& in = *panels[k];
    const double ox = pw * static_cast<double>(k % cols), oy = ph * static_cast<double>(k / cols);
    const double left = ox + 55, right = ox + pw - 15, top = oy + 30, bottom = oy + ph - 35;
    text(s, (left + right) / 2.0, oy + 18, in.name, "text-anchor=\"middle\" font-size=\"13\"");
    y_axis(s, left, top, bottom, right, ymax);
    if (in.representatives.empty()) continue;
    const auto [xmin_it, xmax_it] = std::minmax_element(in.representatives.begin(), in.representatives.end());
    double xmin = *xmin_it, xmax = *xmax_it;
    if (xmax == xmin) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    const auto px = [&](double v) { return left + (right - left) * (v - xmin) / (xmax - xmin); };
    const auto py = [&](double v) { return bottom - (bottom - top) * std::clamp(v, 0.0, ymax) / ymax; };
    text(s, left, bottom + 16, tick(xmin), "text-anchor=\"start\"");
    text(s, right, bottom + 16, tick(xmax), "text-anchor=\"end\"");
    std::string pts;
    for (std::size_t h = 0; h < in.separations.size(); ++h) {
      pts += num(px(in.representatives[h])) + "," + num(py(in.separations[h])) + " ";
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#4c78a8\" stroke-width=\"1.5\"/>\n";
    for (std::size_t h = 0; h < in.separations.size(); ++h) {
      s += "<circle cx=\"" + num(px(in.representatives[h])) + "\" cy=\"" + num(py(in.separations[h])) +
           "\" r=\"2.5\" fill=\"#4c78a8\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace otsense
