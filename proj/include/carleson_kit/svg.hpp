#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "carleson_kit/contour.hpp"

namespace carleson_kit {

/// Unit circle, the dyadic squares touched by the construction, zeros and contour polylines.
inline std::string contour_svg(const Region& region, const std::vector<std::vector<cplx>>& polylines, int size = 640) {
  std::ostringstream os;
  double half = 0.5 * size;
  double scale = half / 1.05;
  auto px = [&](cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", half + scale * z.real(), half - scale * z.imag());
    return std::string(buf);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 " << size
     << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<circle cx=\"" << num(half) << "\" cy=\"" << num(half) << "\" r=\"" << num(scale)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  auto square_path = [&](const Arc& a) {
    double r0 = std::max(0.0, 1.0 - a.normalized_length());
    double t0 = a.start(), t1 = a.start() + std::min(a.length, kTwoPi);
    int n = std::max(2, static_cast<int>(std::ceil((t1 - t0) / 0.02)));
    std::string d = "M" + px(std::polar(r0, t0));
    for (int k = 1; k <= n; ++k) d += " L" + px(std::polar(r0, t0 + (t1 - t0) * k / n));
    d += " L" + px(std::polar(1.0, t1));
    for (int k = n - 1; k >= 0; --k) d += " L" + px(std::polar(1.0, t0 + (t1 - t0) * k / n));
    return d + " Z";
  };
  os << "<g fill=\"none\" stroke=\"#9aa7b8\" stroke-width=\"0.6\">\n";
  std::vector<std::uint64_t> keys;
  for (const auto& gen : region.generations)
    for (const auto& j : gen)
      for (const auto& [key, idx] : j.witnesses) {
        (void)idx;
        keys.push_back(key);
      }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (auto key : keys) {
    DyadicArc a{static_cast<int>(key >> 58), key & ((std::uint64_t{1} << 58) - 1)};
    if (a.depth == 0) continue;
    os << "<path d=\"" << square_path(a.arc()) << "\"/>\n";
  }
  os << "</g>\n<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.2\">\n";
  for (const auto& p : polylines) {
    if (p.size() < 2) continue;
    std::string d = "M" + px(p.front());
    for (std::size_t i = 1; i < p.size(); ++i) d += " L" + px(p[i]);
    os << "<path d=\"" << d << "\"/>\n";
  }
  os << "</g>\n<g fill=\"#1f3a93\">\n";
  for (cplx z : region.zeros) {
    std::string c = px(z);
    auto comma = c.find(',');
    os << "<circle cx=\"" << c.substr(0, comma) << "\" cy=\"" << c.substr(comma + 1) << "\" r=\"2\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace carleson_kit
