#include "topoprobe/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace topo {

namespace {

// Fixed decimal places keep the output stable and diff-friendly.
std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_scatter_svg(std::ostream& os, const std::vector<SvgSeries>& series,
                       const SvgOptions& options) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      lo_x = std::min(lo_x, s.x[i]);
      hi_x = std::max(hi_x, s.x[i]);
      lo_y = std::min(lo_y, s.y[i]);
      hi_y = std::max(hi_y, s.y[i]);
    }
  if (!std::isfinite(lo_x)) { lo_x = 0; hi_x = 1; lo_y = 0; hi_y = 1; }
  if (std::isfinite(options.hline)) {
    lo_y = std::min(lo_y, options.hline);
    hi_y = std::max(hi_y, options.hline);
  }
  if (hi_x == lo_x) { hi_x += 0.5; lo_x -= 0.5; }
  if (hi_y == lo_y) { hi_y += 0.5; lo_y -= 0.5; }
  double pad_x = 0.05 * (hi_x - lo_x), pad_y = 0.05 * (hi_y - lo_y);
  lo_x -= pad_x; hi_x += pad_x; lo_y -= pad_y; hi_y += pad_y;
  if (options.equal_axes) {
    lo_x = lo_y = std::min(lo_x, lo_y);
    hi_x = hi_y = std::max(hi_x, hi_y);
  }

  const double ml = 56, mr = 16, mt = options.title.empty() ? 16 : 34, mb = 44;
  const double W = options.width, H = options.height;
  const double plot_w = W - ml - mr, plot_h = H - mt - mb;
  auto px = [&](double x) { return ml + (x - lo_x) / (hi_x - lo_x) * plot_w; };
  auto py = [&](double y) { return mt + (hi_y - y) / (hi_y - lo_y) * plot_h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
     << options.height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\""
     << options.height << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    os << "<text x=\"" << fmt(W / 2) << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">" << options.title << "</text>\n";

  os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(plot_w)
     << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double fx = lo_x + (hi_x - lo_x) * i / 4.0;
    const double fy = lo_y + (hi_y - lo_y) * i / 4.0;
    os << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << fmt(mt + plot_h) << "\" x2=\""
       << fmt(px(fx)) << "\" y2=\"" << fmt(mt + plot_h + 4) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(mt + plot_h + 16)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
       << fmt_tick(fx) << "</text>\n";
    os << "<line x1=\"" << fmt(ml - 4) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\"" << fmt(ml)
       << "\" y2=\"" << fmt(py(fy)) << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << fmt(ml - 7) << "\" y=\"" << fmt(py(fy) + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
       << fmt_tick(fy) << "</text>\n";
  }
  if (!options.x_label.empty())
    os << "<text x=\"" << fmt(ml + plot_w / 2) << "\" y=\"" << fmt(H - 8)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << options.x_label << "</text>\n";
  if (!options.y_label.empty())
    os << "<text x=\"14\" y=\"" << fmt(mt + plot_h / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 14 " << fmt(mt + plot_h / 2) << ")\">"
       << options.y_label << "</text>\n";

  if (options.diagonal) {
    const double lo = std::max(lo_x, lo_y), hi = std::min(hi_x, hi_y);
    if (hi > lo)
      os << "<line x1=\"" << fmt(px(lo)) << "\" y1=\"" << fmt(py(lo)) << "\" x2=\""
         << fmt(px(hi)) << "\" y2=\"" << fmt(py(hi)) << "\" stroke=\"#999\"/>\n";
  }
  if (std::isfinite(options.hline)) {
    os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py(options.hline)) << "\" x2=\""
       << fmt(ml + plot_w) << "\" y2=\"" << fmt(py(options.hline))
       << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    if (!options.hline_label.empty())
      os << "<text x=\"" << fmt(ml + plot_w - 4) << "\" y=\"" << fmt(py(options.hline) - 4)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
         << options.hline_label << "</text>\n";
  }

  double legend_y = mt + 14;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double cx = px(s.x[i]), cy = py(s.y[i]);
      const double r = s.size.empty() ? 3.0 : std::max(1.0, s.size[i]);
      switch (s.marker % 3) {
        case 0:
          os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
             << "\" fill=\"" << s.color << "\" fill-opacity=\"0.75\"/>\n";
          break;
        case 1:
          os << "<rect x=\"" << fmt(cx - r) << "\" y=\"" << fmt(cy - r) << "\" width=\""
             << fmt(2 * r) << "\" height=\"" << fmt(2 * r) << "\" fill=\"" << s.color
             << "\" fill-opacity=\"0.75\"/>\n";
          break;
        default:
          os << "<path d=\"M " << fmt(cx) << ' ' << fmt(cy - r) << " L " << fmt(cx - r) << ' '
             << fmt(cy + r) << " L " << fmt(cx + r) << ' ' << fmt(cy + r)
             << " Z\" fill=\"" << s.color << "\" fill-opacity=\"0.75\"/>\n";
      }
    }
    if (!s.name.empty()) {
      os << "<text x=\"" << fmt(ml + plot_w - 8) << "\" y=\"" << fmt(legend_y)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
         << s.color << "\">" << s.name << "</text>\n";
      legend_y += 14;
    }
  }
  os << "</svg>\n";
}

}  // namespace topo
