#include "discgan/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "discgan/errors.hpp"

namespace discgan::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kRealColor = "#f28e2b";
constexpr const char* kGenColor = "#4e79a7";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

void axes(std::ostringstream& out, double y_max) {
  const double x0 = kLeft, y0 = kHeight - kBottom, x1 = kWidth - kRight;
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y0)
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = y0 - (y0 - kTop) * k / 4.0;
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(y_max * k / 4.0)
        << "</text>\n";
  }
}

void legend(std::ostringstream& out) {
  const double x = kWidth - kRight - 150;
  out << "<rect x=\"" << num(x) << "\" y=\"34\" width=\"12\" height=\"12\" fill=\"" << kRealColor << "\"/>\n";
  out << "<text x=\"" << num(x + 16) << "\" y=\"44\">real</text>\n";
  out << "<rect x=\"" << num(x + 70) << "\" y=\"34\" width=\"12\" height=\"12\" fill=\"" << kGenColor << "\"/>\n";
  out << "<text x=\"" << num(x + 86) << "\" y=\"44\">generated</text>\n";
}

void bar(std::ostringstream& out, double x, double w, double frac, double y_max, const char* color, double opacity) {
  const double y0 = kHeight - kBottom;
  const double h = y_max > 0.0 ? (y0 - kTop) * frac / y_max : 0.0;
  out << "<rect x=\"" << num(x) << "\" y=\"" << num(y0 - h) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" fill=\"" << color << "\" fill-opacity=\"" << num(opacity) << "\"/>\n";
}

}  // namespace

int sturges_bins(std::size_t n) {
  if (n <= 1) return 10;
  return std::max(10, static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1);
}

std::string histogram_svg(const std::string& title, std::span<const double> real, std::span<const double> gen) {
  if (real.empty() || gen.empty()) throw ArgumentError("histogram of '" + title + "' needs non-empty samples");
  double lo = std::min(*std::min_element(real.begin(), real.end()), *std::min_element(gen.begin(), gen.end()));
  double hi = std::max(*std::max_element(real.begin(), real.end()), *std::max_element(gen.begin(), gen.end()));
  if (!(hi > lo)) hi = lo + 1.0;
  const int bins = sturges_bins(real.size());
  auto fractions = [&](std::span<const double> xs) {
    std::vector<double> f(static_cast<std::size_t>(bins), 0.0);
    for (double x : xs) {
      auto b = static_cast<int>((x - lo) / (hi - lo) * bins);
      f[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1.0;
    }
    for (double& v : f) v /= static_cast<double>(xs.size());
    return f;
  };
  const auto fr = fractions(real);
  const auto fg = fractions(gen);
  const double y_max = std::max(*std::max_element(fr.begin(), fr.end()), *std::max_element(fg.begin(), fg.end()));

  std::ostringstream out;
  open_svg(out, title);
  axes(out, y_max);
  const double w = (kWidth - kLeft - kRight) / bins;
  for (int b = 0; b < bins; ++b) {
    const double x = kLeft + w * b;
    bar(out, x, w, fr[static_cast<std::size_t>(b)], y_max, kRealColor, 0.6);
    bar(out, x, w, fg[static_cast<std::size_t>(b)], y_max, kGenColor, 0.6);
  }
  const double y0 = kHeight - kBottom;
  for (int k = 0; k <= 4; ++k) {
    const double x = kLeft + (kWidth - kLeft - kRight) * k / 4.0;
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
        << num(lo + (hi - lo) * k / 4.0) << "</text>\n";
  }
  legend(out);
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart_svg(const std::string& title, std::span<const std::string> real,
                          std::span<const std::string> gen) {
  if (real.empty() || gen.empty()) throw ArgumentError("bar chart of '" + title + "' needs non-empty samples");
  std::map<std::string, std::pair<double, double>> freq;
  for (const auto& s : real) freq[s].first += 1.0;
  for (const auto& s : gen) freq[s].second += 1.0;
  double y_max = 0.0;
  for (auto& [k, v] : freq) {
    v.first /= static_cast<double>(real.size());
    v.second /= static_cast<double>(gen.size());
    y_max = std::max({y_max, v.first, v.second});
  }

  std::ostringstream out;
  open_svg(out, title);
  axes(out, y_max);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(freq.size());
  const double w = slot * 0.4;
  const double y0 = kHeight - kBottom;
  int i = 0;
  for (const auto& [label, v] : freq) {
    const double x = kLeft + slot * i + slot * 0.1;
    bar(out, x, w, v.first, y_max, kRealColor, 1.0);
    bar(out, x + w, w, v.second, y_max, kGenColor, 1.0);
    out << "<text x=\"" << num(x + w) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">" << escape(label)
        << "</text>\n";
    ++i;
  }
  legend(out);
  out << "</svg>\n";
  return out.str();
}

}  // namespace discgan::cli
