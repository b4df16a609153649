#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace posenc::cli {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string line_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                           const std::vector<Series>& series) {
  const double left = 60, right = 160, top = 40, bottom = 90;
  const double plot_w = std::max<double>(240.0, 90.0 * categories.size());
  const double plot_h = 260;
  const double width = left + plot_w + right, height = top + plot_h + bottom;
  auto x_of = [&](std::size_t i) {
    return categories.size() < 2 ? left + plot_w / 2
                                 : left + plot_w * static_cast<double>(i) /
                                              static_cast<double>(categories.size() - 1);
  };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
    << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << fmt(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = k / 5.0, y = y_of(v);
    o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left + plot_w)
      << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
      << fmt(v) << "</text>\n";
  }
  for (std::size_t i = 0; i < categories.size(); ++i)
    o << "<text x=\"" << fmt(x_of(i)) << "\" y=\"" << fmt(top + plot_h + 18)
      << "\" text-anchor=\"middle\">" << xml_escape(categories[i]) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].values.size(); ++i)
      o << (i ? " " : "") << fmt(x_of(i)) << ',' << fmt(y_of(series[s].values[i]));
    o << "\"/>\n";
    for (std::size_t i = 0; i < series[s].values.size(); ++i)
      o << "<circle cx=\"" << fmt(x_of(i)) << "\" cy=\"" << fmt(y_of(series[s].values[i]))
        << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(s);
    o << "<rect x=\"" << fmt(left + plot_w + 16) << "\" y=\"" << fmt(ly) << "\" width=\"10\" "
      << "height=\"10\" fill=\"" << colour << "\"/>\n"
      << "<text x=\"" << fmt(left + plot_w + 32) << "\" y=\"" << fmt(ly + 9) << "\">"
      << xml_escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heat_grid_svg(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<std::vector<std::size_t>>& counts) {
  const double cell = 48, left = 90, top = 60;
  const double n = static_cast<double>(labels.size());
  const double width = left + cell * n + 30, height = top + cell * n + 50;
  std::size_t peak = 1;
  for (const auto& row : counts)
    for (auto v : row) peak = std::max(peak, v);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
    << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << fmt(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n"
    << "<text x=\"" << fmt(left + cell * n / 2) << "\" y=\"40\" text-anchor=\"middle\">"
    << "predicted</text>\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = static_cast<double>(i);
    o << "<text x=\"" << fmt(left + cell * (p + 0.5)) << "\" y=\"" << fmt(top - 4)
      << "\" text-anchor=\"middle\">" << xml_escape(labels[i]) << "</text>\n"
      << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + cell * (p + 0.5) + 4)
      << "\" text-anchor=\"end\">" << xml_escape(labels[i]) << "</text>\n";
  }
  for (std::size_t r = 0; r < counts.size(); ++r)
    for (std::size_t c = 0; c < counts[r].size(); ++c) {
      const double frac = static_cast<double>(counts[r][c]) / static_cast<double>(peak);
      const int shade = static_cast<int>(255.0 * (1.0 - frac));
      char colour[16];
      std::snprintf(colour, sizeof colour, "#%02x%02xff", shade, shade);
      const double x = left + cell * static_cast<double>(c);
      const double y = top + cell * static_cast<double>(r);
      o << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell)
        << "\" height=\"" << fmt(cell) << "\" fill=\"" << colour << "\" stroke=\"#888\"/>\n"
        << "<text x=\"" << fmt(x + cell / 2) << "\" y=\"" << fmt(y + cell / 2 + 4)
        << "\" text-anchor=\"middle\" fill=\"" << (frac > 0.6 ? "white" : "black") << "\">"
        << counts[r][c] << "</text>\n";
    }
  o << "<text x=\"14\" y=\"" << fmt(top + cell * n / 2) << "\" transform=\"rotate(-90 14 "
    << fmt(top + cell * n / 2) << ")\" text-anchor=\"middle\">truth</text>\n"
    << "</svg>\n";
  return o.str();
}

}  // namespace posenc::cli
