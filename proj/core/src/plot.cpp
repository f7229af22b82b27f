#include "gpwtdg/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace gpwtdg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

struct LogRange {
  double lo = 0.0, hi = 1.0;
  double span() const { return hi - lo; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string pow10_label(int e) { return "1e" + std::to_string(e); }

}  // namespace

void write_loglog_svg(std::ostream& out, const std::vector<PlotSeries>& series,
                      const PlotOptions& opt) {
  LogRange xr{1e300, -1e300}, yr{1e300, -1e300};
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!(p[0] > 0.0) || !(p[1] > 0.0) || !std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
      xr.lo = std::min(xr.lo, std::log10(p[0]));
      xr.hi = std::max(xr.hi, std::log10(p[0]));
      yr.lo = std::min(yr.lo, std::log10(p[1]));
      yr.hi = std::max(yr.hi, std::log10(p[1]));
    }
  if (xr.lo > xr.hi) {
    xr = {0.0, 1.0};
    yr = {-1.0, 0.0};
  }
  const double pad = 0.25;
  xr.lo -= pad;
  xr.hi += pad;
  yr.lo -= pad;
  yr.hi += pad;
  if (xr.span() < 1e-9) xr.hi = xr.lo + 1.0;
  if (yr.span() < 1e-9) yr.hi = yr.lo + 1.0;

  const double ml = 72, mr = 24, mt = 40, mb = 56;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto X = [&](double lx) { return ml + (lx - xr.lo) / xr.span() * pw; };
  auto Y = [&](double ly) { return mt + (yr.hi - ly) / yr.span() * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    out << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << opt.title << "</text>\n";

  // frame and decade grid
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(std::ceil(xr.lo)); e <= static_cast<int>(std::floor(xr.hi)); ++e) {
    out << "<line x1=\"" << X(e) << "\" y1=\"" << mt << "\" x2=\"" << X(e) << "\" y2=\""
        << mt + ph << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << X(e) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << pow10_label(e) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(yr.lo)); e <= static_cast<int>(std::floor(yr.hi)); ++e) {
    out << "<line x1=\"" << ml << "\" y1=\"" << Y(e) << "\" x2=\"" << ml + pw << "\" y2=\""
        << Y(e) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << ml - 6 << "\" y=\"" << Y(e) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << pow10_label(e)
        << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << opt.x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << opt.y_label << "</text>\n";

  // dotted reference lines error ~ x^{-order}, anchored to the data corner
  for (size_t r = 0; r < opt.reference_orders.size(); ++r) {
    const int order = opt.reference_orders[r];
    const double x0 = xr.lo + pad, x1 = xr.hi - pad;
    const double y0 = yr.lo + pad + 0.12 * static_cast<double>(r);
    const double y1 = y0 + order * (x1 - x0);  // through (x1, y0): slope -order toward +x
    out << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(y1) << "\" x2=\"" << X(x1) << "\" y2=\""
        << Y(y0) << "\" stroke=\"#888888\" stroke-dasharray=\"2,4\"/>\n"
        << "<text x=\"" << X(x0) + 4 << "\" y=\"" << Y(y1) + 12
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#666666\">order " << order
        << "</text>\n";
  }

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string path;
    for (const auto& p : series[s].points) {
      if (!(p[0] > 0.0) || !(p[1] > 0.0)) continue;
      const double px = X(std::log10(p[0])), py = Y(std::log10(p[1]));
      path += (path.empty() ? "M" : " L") + std::string(" ") + fmt(px) + " " + fmt(py);
      out << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    if (!path.empty())
      out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    out << "<rect x=\"" << ml + pw - 170 << "\" y=\"" << mt + 10 + 18 * s
        << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << ml + pw - 152 << "\" y=\"" << mt + 16 + 18 * s
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace gpwtdg
