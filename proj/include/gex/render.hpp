#pragma once

#include "gex/dsl/eval.hpp"

#include <cstdio>
#include <set>

namespace gex::render {

struct Style {
  double width = 640;
  double margin = 0.12;
  const char* gergonne = "#1a9641";
  const char* point = "#222222";
  const char* line = "#4575b4";
  const char* circle = "#d73027";
};

namespace detail {

struct Box {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  void add(double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

/// Clips the line to the box; false when it misses.
inline bool clip(const Line<double>& l, const Box& b, Point<double>& p, Point<double>& q) {
  Point<double> o{-l.a * l.c, -l.b * l.c};
  Point<double> d = l.direction();
  double t0 = -1e300, t1 = 1e300;
  auto side = [&](double pos, double dir, double lo, double hi) {
    if (std::abs(dir) < 1e-15) return pos >= lo && pos <= hi;
    double u = (lo - pos) / dir, v = (hi - pos) / dir;
    if (u > v) std::swap(u, v);
    t0 = std::max(t0, u);
    t1 = std::min(t1, v);
    return t0 <= t1;
  };
  if (!side(o.x, d.x, b.x0, b.x1) || !side(o.y, d.y, b.y0, b.y1)) return false;
  p = o + d * t0;
  q = o + d * t1;
  return true;
}

}  // namespace detail

/// SVG 1.1 drawing of a script evaluated on one triangle. Every bound point,
/// line and circle is drawn; points defined by gergonne(...) are filled green.
inline std::string svg(const dsl::Script& script, const Triangle<double>& t, const Style& st = {}) {
  auto env = dsl::evaluate<double>(script, t);

  std::set<std::string> gergonne;
  for (const auto& s : script.body) {
    if (auto* a = std::get_if<dsl::Assignment>(&s); a && a->value.op == dsl::Expr::Op::Call && a->value.text == "gergonne")
      gergonne.insert(a->name);
  }

  std::vector<std::pair<std::string, Point<double>>> points;
  std::vector<std::pair<std::string, Line<double>>> lines;
  std::vector<std::pair<std::string, Circle<double>>> circles;
  for (const auto& [name, v] : env.bindings) {
    if (auto* p = std::get_if<Point<double>>(&v)) points.emplace_back(name, *p);
    if (auto* l = std::get_if<Line<double>>(&v)) lines.emplace_back(name, *l);
    if (auto* c = std::get_if<Circle<double>>(&v)) circles.emplace_back(name, *c);
  }

  detail::Box box;
  for (const auto& [n, p] : points) box.add(p.x, p.y);
  double diam = std::max(box.x1 - box.x0, box.y1 - box.y0);
  // Circles much larger than the triangle would shrink it to a dot.
  for (const auto& [n, c] : circles) {
    if (c.radius > 2 * diam) continue;
    box.add(c.center.x - c.radius, c.center.y - c.radius);
    box.add(c.center.x + c.radius, c.center.y + c.radius);
  }
  double pad = st.margin * std::max(box.x1 - box.x0, box.y1 - box.y0);
  box.x0 -= pad;
  box.y0 -= pad;
  box.x1 += pad;
  box.y1 += pad;
  double k = st.width / (box.x1 - box.x0);
  double h = (box.y1 - box.y0) * k;
  auto X = [&](double x) { return detail::num((x - box.x0) * k); };
  auto Y = [&](double y) { return detail::num((box.y1 - y) * k); };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::num(st.width) +
         "\" height=\"" + detail::num(h) + "\" viewBox=\"0 0 " + detail::num(st.width) + " " + detail::num(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<polygon class=\"triangle\" points=\"";
  for (int i = 0; i < 3; ++i) {
    const auto& p = t.vertex(static_cast<Vertex>(i));
    out += (i ? " " : "") + X(p.x) + "," + Y(p.y);
  }
  out += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  for (const auto& [n, c] : circles) {
    out += "<circle class=\"circle\" data-name=\"" + n + "\" cx=\"" + X(c.center.x) + "\" cy=\"" + Y(c.center.y) +
           "\" r=\"" + detail::num(c.radius * k) + "\" fill=\"none\" stroke=\"" + st.circle + "\"/>\n";
  }

  double on_tol = 1e-9 * std::max(diam, 1.0);
  for (const auto& [n, l] : lines) {
    // Span the bound points on the line when there are two; otherwise cross the view.
    double lo = 1e300, hi = -1e300;
    for (const auto& [pn, p] : points) {
      if (std::abs(l.eval(p)) > on_tol) continue;
      double s = dot(p, l.direction());
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    Point<double> p, q;
    if (hi - lo > on_tol) {
      Point<double> o{-l.a * l.c, -l.b * l.c};
      p = o + l.direction() * lo;
      q = o + l.direction() * hi;
    } else if (!detail::clip(l, box, p, q)) {
      continue;
    }
    out += "<line class=\"line\" data-name=\"" + n + "\" x1=\"" + X(p.x) + "\" y1=\"" + Y(p.y) + "\" x2=\"" + X(q.x) +
           "\" y2=\"" + Y(q.y) + "\" stroke=\"" + st.line + "\"/>\n";
  }

  for (const auto& [n, p] : points) {
    bool g = gergonne.count(n) > 0;
    out += std::string("<circle class=\"") + (g ? "point gergonne" : "point") + "\" data-name=\"" + n + "\" cx=\"" +
           X(p.x) + "\" cy=\"" + Y(p.y) + "\" r=\"3.50\" fill=\"" + (g ? st.gergonne : st.point) + "\"/>\n";
    out += "<text x=\"" + detail::num((p.x - box.x0) * k + 5) + "\" y=\"" + detail::num((box.y1 - p.y) * k - 5) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + n + "</text>\n";
  }
  return out + "</svg>\n";
}

}  // namespace gex::render
