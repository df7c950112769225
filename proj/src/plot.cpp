#include "cgclosure/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace cgc {

namespace {

constexpr double kSize = 480;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x == 0 ? 0.0 : x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"') out += "&quot;";
    else if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out += ch;
  }
  return out;
}

std::string exact_points(const std::vector<QVec>& pts) {
  std::string out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += to_string(pts[i]);
  }
  return out;
}

struct View {
  double x0, x1, y0, y1;

  double sx(double x) const { return (x - x0) / (x1 - x0) * kSize; }
  double sy(double y) const { return (y1 - y) / (y1 - y0) * kSize; }
  std::string point(double x, double y) const { return fmt(sx(x)) + "," + fmt(sy(y)); }
};

using Pt = std::pair<double, double>;

std::vector<Pt> to_doubles(const std::vector<QVec>& pts) {
  std::vector<Pt> out;
  for (const auto& p : pts) out.emplace_back(p[0].to_double(), p[1].to_double());
  return out;
}

/// Counter-clockwise order around the centroid; the input is in convex position.
std::vector<Pt> cyclic(std::vector<Pt> pts) {
  double cx = 0, cy = 0;
  for (auto [x, y] : pts) cx += x, cy += y;
  cx /= pts.size();
  cy /= pts.size();
  std::stable_sort(pts.begin(), pts.end(), [&](const Pt& a, const Pt& b) {
    return std::atan2(a.second - cy, a.first - cx) < std::atan2(b.second - cy, b.first - cx);
  });
  return pts;
}

std::string points_attr(const View& v, const std::vector<Pt>& pts) {
  std::string out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += v.point(pts[i].first, pts[i].second);
  }
  return out;
}

/// Polygon, segment or dot for a polytope of dimension 2, 1 or 0.
std::string polytope_element(const View& v, const Polytope& p, const std::string& cls, const std::string& style) {
  std::string data = " data-vertices=\"" + escape(exact_points(p.vertices())) + "\"";
  auto pts = to_doubles(p.vertices());
  if (p.dim() == 0)
    return "<circle class=\"" + cls + "\" cx=\"" + fmt(v.sx(pts[0].first)) + "\" cy=\"" + fmt(v.sy(pts[0].second)) +
           "\" r=\"3.000000\"" + data + " " + style + "/>\n";
  if (p.dim() == 1)
    return "<polyline class=\"" + cls + "\" points=\"" + points_attr(v, pts) + "\"" + data + " " + style + "/>\n";
  return "<polygon class=\"" + cls + "\" points=\"" + points_attr(v, cyclic(pts)) + "\"" + data + " " + style + "/>\n";
}

/// Clips c.x = rhs to the view box; empty when the line misses it.
std::vector<Pt> clip_line(const View& v, double a, double b, double r) {
  std::vector<Pt> hits;
  auto add = [&](double x, double y) {
    const double tol = 1e-9 * (v.x1 - v.x0);
    if (x < v.x0 - tol || x > v.x1 + tol || y < v.y0 - tol || y > v.y1 + tol) return;
    for (auto& h : hits)
      if (std::abs(h.first - x) < tol && std::abs(h.second - y) < tol) return;
    hits.emplace_back(x, y);
  };
  if (b != 0) {
    add(v.x0, (r - a * v.x0) / b);
    add(v.x1, (r - a * v.x1) / b);
  }
  if (a != 0) {
    add((r - b * v.y0) / a, v.y0);
    add((r - b * v.y1) / a, v.y1);
  }
  if (hits.size() > 2) hits.resize(2);
  return hits;
}

}  // namespace

std::string plot2d(const ConvexBody& body, const std::vector<CGCut>& cuts, const Polytope& closure) {
  if (body.dim() != 2)
    throw Error(ErrorKind::NotPlottable, "plot needs a 2D body, got dimension " + std::to_string(body.dim()));
  if (!closure.is_empty() && closure.ambient_dim() != 2)
    throw Error(ErrorKind::NotPlottable, "closure is not planar");

  double hx = body.support(ZVec{1, 0}).to_double(), lx = -body.support(ZVec{-1, 0}).to_double();
  double hy = body.support(ZVec{0, 1}).to_double(), ly = -body.support(ZVec{0, -1}).to_double();
  double cx = (hx + lx) / 2, cy = (hy + ly) / 2;
  double half = std::max({hx - lx, hy - ly, 1.0}) * 0.6 + 0.5;
  View v{cx - half, cx + half, cy - half, cy + half};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kSize) << "\" height=\"" << fmt(kSize)
      << "\" viewBox=\"0 0 " << fmt(kSize) << " " << fmt(kSize) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(kSize) << "\" height=\"" << fmt(kSize) << "\" fill=\"white\"/>\n";

  const std::string outline = "fill=\"none\" stroke=\"black\" stroke-width=\"2\"";
  if (const auto* p = std::get_if<Polytope>(&body.shape())) {
    out << polytope_element(v, *p, "body", outline);
  } else if (const auto* b = std::get_if<Ball>(&body.shape())) {
    double r = b->radius.get_d() / (v.x1 - v.x0) * kSize;
    out << "<circle class=\"body\" cx=\"" << fmt(v.sx(b->center[0].get_d())) << "\" cy=\""
        << fmt(v.sy(b->center[1].get_d())) << "\" r=\"" << fmt(r) << "\" data-center=\""
        << escape(to_string(to_qvec(b->center))) << "\" data-radius=\"" << to_string(b->radius) << "\" " << outline
        << "/>\n";
  } else {
    // Boundary c + L u, |u| = 1, with shape = L L^T.
    const auto& e = std::get<Ellipse2D>(body.shape());
    double a = e.shape[0][0].get_d(), bb = e.shape[0][1].get_d(), c = e.shape[1][1].get_d();
    double l11 = std::sqrt(a), l21 = bb / l11, l22 = std::sqrt(c - l21 * l21);
    std::vector<Pt> pts;
    for (int i = 0; i < 96; ++i) {
      double t = 2 * std::numbers::pi * i / 96;
      double ux = std::cos(t), uy = std::sin(t);
      pts.emplace_back(e.center[0].get_d() + l11 * ux, e.center[1].get_d() + l21 * ux + l22 * uy);
    }
    out << "<polygon class=\"body\" points=\"" << points_attr(v, pts) << "\" data-center=\""
        << escape(to_string(to_qvec(e.center))) << "\" " << outline << "/>\n";
  }

  for (const auto& cut : cuts) {
    if (cut.c.size() != 2) throw Error(ErrorKind::NotPlottable, "cut is not planar");
    auto seg = clip_line(v, cut.c[0].get_d(), cut.c[1].get_d(), cut.rhs.get_d());
    std::string data = "data-c=\"" + escape(to_string(cut.c)) + "\" data-rhs=\"" + cut.rhs.get_str() + "\"";
    if (seg.size() < 2) {
      out << "<line class=\"cut\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0\" visibility=\"hidden\" " << data << "/>\n";
      continue;
    }
    out << "<line class=\"cut\" x1=\"" << fmt(v.sx(seg[0].first)) << "\" y1=\"" << fmt(v.sy(seg[0].second))
        << "\" x2=\"" << fmt(v.sx(seg[1].first)) << "\" y2=\"" << fmt(v.sy(seg[1].second)) << "\" " << data
        << " stroke=\"#c03030\" stroke-width=\"1\"/>\n";
  }

  if (closure.is_empty())
    out << "<text class=\"annotation\" x=\"8\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">closure empty</text>\n";
  else
    out << polytope_element(v, closure, "closure",
                            "fill=\"#3060c0\" fill-opacity=\"0.35\" stroke=\"#3060c0\" stroke-width=\"2\"");
  out << "</svg>\n";
  return out.str();
}

}  // namespace cgc
