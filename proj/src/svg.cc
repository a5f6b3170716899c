#include "fme/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fme/error.h"

namespace fme {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Rgb {
  double r, g, b;
};

std::string Hex(const Rgb& c) {
  char buf[8];
  auto ch = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); };
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", ch(c.r), ch(c.g), ch(c.b));
  return buf;
}

Rgb Lerp(const Rgb& a, const Rgb& b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

constexpr Rgb kLightBlue{222, 235, 247};
constexpr Rgb kDarkBlue{8, 48, 107};
constexpr Rgb kWhite{247, 247, 247};
constexpr Rgb kRed{178, 24, 43};
constexpr Rgb kBlue{33, 102, 172};

// Linear map from a data interval to a pixel interval.
struct Scale {
  double d0, d1, p0, p1;
  double operator()(double v) const { return p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
};

Scale MakeScale(double lo, double hi, double p0, double p1, double pad = 0.05) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double extra = (hi - lo) * pad;
  return {lo - extra, hi + extra, p0, p1};
}

struct Area {
  double left, top, right, bottom;
};

class Svg {
 public:
  Svg() {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
           "height=\"480\" viewBox=\"0 0 640 480\">\n"
           "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  }

  void Text(double x, double y, std::string_view text, const char* anchor = "middle",
            int size = 11, const char* extra = "") {
    out_ += "<text x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" text-anchor=\"" + anchor +
            "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) + "\"" +
            extra + ">" + XmlEscape(text) + "</text>\n";
  }

  void Line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1, const char* extra = "") {
    out_ += "<line x1=\"" + Num(x1) + "\" y1=\"" + Num(y1) + "\" x2=\"" + Num(x2) +
            "\" y2=\"" + Num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            Num(width) + "\"" + extra + "/>\n";
  }

  void Rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    out_ += "<rect x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" width=\"" + Num(w) +
            "\" height=\"" + Num(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
            "\"/>\n";
  }

  void Polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill) {
    out_ += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out_ += ' ';
      out_ += Num(pts[i].first) + "," + Num(pts[i].second);
    }
    out_ += "\" fill=\"" + fill + "\" stroke=\"#ffffff\" stroke-width=\"0.50\"/>\n";
  }

  void Polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    out_ += "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out_ += ' ';
      out_ += Num(pts[i].first) + "," + Num(pts[i].second);
    }
    out_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.50\"/>\n";
  }

  void Arrow(double x1, double y1, double x2, double y2) {
    Line(x1, y1, x2, y2, "#000000", 1.5);
    const double angle = std::atan2(y2 - y1, x2 - x1);
    const double len = 7, spread = 0.45;
    std::vector<std::pair<double, double>> head = {
        {x2, y2},
        {x2 - len * std::cos(angle - spread), y2 - len * std::sin(angle - spread)},
        {x2 - len * std::cos(angle + spread), y2 - len * std::sin(angle + spread)}};
    out_ += "<polygon points=\"";
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (i) out_ += ' ';
      out_ += Num(head[i].first) + "," + Num(head[i].second);
    }
    out_ += "\" fill=\"#000000\"/>\n";
  }

  void Raw(const std::string& s) { out_ += s; }

  std::string Finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

void Axes(Svg& svg, const Area& a, const Scale& x, const Scale& y, const std::string& x_label,
          const std::string& y_label) {
  svg.Line(a.left, a.bottom, a.right, a.bottom, "#333333");
  svg.Line(a.left, a.top, a.left, a.bottom, "#333333");
  for (int i = 0; i <= 4; ++i) {
    const double xv = x.d0 + (x.d1 - x.d0) * i / 4.0;
    const double px = x(xv);
    svg.Line(px, a.bottom, px, a.bottom + 4, "#333333");
    svg.Text(px, a.bottom + 16, Label(xv));
    const double yv = y.d0 + (y.d1 - y.d0) * i / 4.0;
    const double py = y(yv);
    svg.Line(a.left - 4, py, a.left, py, "#333333");
    svg.Text(a.left - 6, py + 4, Label(yv), "end");
  }
  svg.Text((a.left + a.right) / 2, a.bottom + 34, x_label, "middle", 12);
  const double cy = (a.top + a.bottom) / 2;
  svg.Text(a.left - 48, cy, y_label, "middle", 12,
           (" transform=\"rotate(-90 " + Num(a.left - 48) + " " + Num(cy) + ")\"").c_str());
}

void Hexagons(Svg& svg, const PlotData& plot, const Scale& x, const Scale& y) {
  const double sqrt3 = std::numbers::sqrt3;
  const double size = 1.0 / (static_cast<double>(plot.resolution) * sqrt3);
  const double uspan = plot.u_max - plot.u_min, vspan = plot.v_max - plot.v_min;
  std::size_t max_count = 1;
  double max_abs = 0;
  for (const auto& b : plot.bins) {
    max_count = std::max(max_count, b.count);
    max_abs = std::max(max_abs, std::abs(b.mean_fme));
  }
  for (const auto& b : plot.bins) {
    const double cx = size * sqrt3 * (b.q + b.r / 2.0);
    const double cy = size * 1.5 * b.r;
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 6; ++k) {
      const double angle = std::numbers::pi / 180.0 * (60.0 * k - 30.0);
      const double nx = cx + size * std::cos(angle);
      const double ny = cy + size * std::sin(angle);
      const double u = uspan > 0 ? plot.u_min + nx * uspan : plot.u_min + (nx - cx);
      const double v = vspan > 0 ? plot.v_min + ny * vspan : plot.v_min + (ny - cy);
      pts.emplace_back(x(u), y(v));
    }
    Rgb fill;
    if (plot.kind == PlotKind::kUnivariate) {
      fill = Lerp(kLightBlue, kDarkBlue,
                  static_cast<double>(b.count) / static_cast<double>(max_count));
    } else {
      const double t = max_abs > 0 ? b.mean_fme / max_abs : 0.0;
      fill = t >= 0 ? Lerp(kWhite, kBlue, t) : Lerp(kWhite, kRed, -t);
    }
    svg.Polygon(pts, Hex(fill));
  }
}

Scale LatticeScale(double lo, double hi, std::size_t resolution, double p0, double p1) {
  // Leave room for the outermost hexagons.
  const double pad = hi > lo ? 1.0 / static_cast<double>(resolution) : 0.0;
  return MakeScale(lo - (hi - lo) * pad, hi + (hi - lo) * pad, p0, p1, 0.0);
}

std::string HexPlot(const PlotData& plot) {
  if (plot.bins.empty() || plot.resolution == 0) throw ValidationError("no bins to draw");
  Svg svg;
  svg.Text(kWidth / 2, 26, plot.title, "middle", 15);
  const Area a{80, 60, 600, 410};
  const Scale x = LatticeScale(plot.u_min, plot.u_max, plot.resolution, a.left, a.right);
  Scale y = LatticeScale(plot.v_min, plot.v_max, plot.resolution, a.bottom, a.top);
  if (plot.kind == PlotKind::kUnivariate) {
    y = LatticeScale(std::min(plot.v_min, plot.ame), std::max(plot.v_max, plot.ame),
                     plot.resolution, a.bottom, a.top);
  }
  Axes(svg, a, x, y, plot.x_label, plot.y_label);
  Hexagons(svg, plot, x, y);
  if (plot.kind == PlotKind::kUnivariate) {
    svg.Line(a.left, y(plot.ame), a.right, y(plot.ame), "#d7301f", 1.5,
             " stroke-dasharray=\"6 3\"");
    std::vector<std::pair<double, double>> line;
    for (const auto& [u, v] : plot.smoother) line.emplace_back(x(u), y(v));
    if (line.size() > 1) svg.Polyline(line, "#e6550d");
    if (!plot.arrows.empty()) {
      const double h = plot.arrows[0].step;
      const double from = h > 0 ? plot.u_min : plot.u_max;
      svg.Arrow(x(from), a.top + 12, x(from + h), a.top + 12);
    }
  } else {
    if (plot.arrows.size() == 2) {
      const double fx = plot.arrows[0].step > 0 ? plot.u_min : plot.u_max;
      svg.Arrow(x(fx), a.top + 12, x(fx + plot.arrows[0].step), a.top + 12);
      const double fy = plot.arrows[1].step > 0 ? plot.v_min : plot.v_max;
      svg.Arrow(a.right - 12, y(fy), a.right - 12, y(fy + plot.arrows[1].step));
    }
  }
  std::string caption = "AME: " + Label(plot.ame) + "   n = " + std::to_string(plot.n);
  if (plot.anlm_display) caption += "   ANLM (NLM < 0 shown as 0): " + Label(*plot.anlm_display);
  svg.Text(kWidth / 2, 44, caption, "middle", 11);
  return svg.Finish();
}

void HistogramPanel(Svg& svg, const Area& a, const Histogram& h, std::optional<double> mark,
                    const std::string& x_label) {
  if (h.counts.empty()) throw ValidationError("no histogram bins to draw");
  const double lo = h.start, hi = h.start + h.width * static_cast<double>(h.counts.size());
  std::size_t top = 1;
  for (std::size_t c : h.counts) top = std::max(top, c);
  const Scale x = MakeScale(std::min(lo, mark.value_or(lo)), std::max(hi, mark.value_or(hi)),
                            a.left, a.right);
  const Scale y{0, static_cast<double>(top) * 1.05, a.bottom, a.top};
  Axes(svg, a, x, y, x_label, "count");
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] == 0) continue;
    const double x0 = x(lo + h.width * static_cast<double>(i));
    const double x1 = x(lo + h.width * static_cast<double>(i + 1));
    const double y1 = y(static_cast<double>(h.counts[i]));
    svg.Rect(x0, y1, x1 - x0, a.bottom - y1, "#6baed6", "#ffffff");
  }
  if (mark) svg.Line(x(*mark), a.top, x(*mark), a.bottom, "#d7301f", 1.5, " stroke-dasharray=\"6 3\"");
}

std::string HistogramPlot(const PlotData& plot) {
  if (!plot.fme_histogram) throw ValidationError("no histogram to draw");
  Svg svg;
  svg.Text(kWidth / 2, 26, plot.title, "middle", 15);
  std::string caption = "AME: " + Label(plot.ame) + "   n = " + std::to_string(plot.n);
  if (plot.nlm_histogram) {
    caption += "   ANLM (NLM < 0 shown as 0): " + Label(plot.anlm_display.value_or(0));
    HistogramPanel(svg, Area{70, 60, 310, 410}, *plot.fme_histogram, plot.ame, "FME");
    HistogramPanel(svg, Area{390, 60, 620, 410}, *plot.nlm_histogram, plot.anlm_display,
                   "NLM");
  } else {
    HistogramPanel(svg, Area{80, 60, 600, 410}, *plot.fme_histogram, plot.ame, plot.x_label);
  }
  svg.Text(kWidth / 2, 44, caption, "middle", 11);
  return svg.Finish();
}

struct TreeBox {
  const nlohmann::ordered_json* node;
  int depth;
  double x;
};

double LayoutTree(const nlohmann::ordered_json& node, int depth, double& next_leaf,
                  std::vector<TreeBox>& boxes, std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t index = boxes.size();
  boxes.push_back({&node, depth, 0});
  double x;
  if (!node.contains("left")) {
    x = next_leaf;
    next_leaf += 1;
  } else {
    const std::size_t left = boxes.size();
    const double lx = LayoutTree(node["left"], depth + 1, next_leaf, boxes, edges);
    edges.emplace_back(index, left);
    const std::size_t right = boxes.size();
    const double rx = LayoutTree(node["right"], depth + 1, next_leaf, boxes, edges);
    edges.emplace_back(index, right);
    x = (lx + rx) / 2;
  }
  boxes[index].x = x;
  return x;
}

std::string TreePlot(const PlotData& plot) {
  if (plot.tree.is_null() || !plot.tree.contains("tree")) {
    throw ValidationError("no partition tree to draw");
  }
  std::vector<TreeBox> boxes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double leaves = 0;
  LayoutTree(plot.tree["tree"], 0, leaves, boxes, edges);
  int max_depth = 0;
  for (const auto& b : boxes) max_depth = std::max(max_depth, b.depth);
  const double slot = (kWidth - 40) / std::max(1.0, leaves);
  const double row = max_depth > 0 ? (kHeight - 140) / max_depth : 0;
  auto px = [&](const TreeBox& b) { return 20 + slot * (b.x + 0.5); };
  auto py = [&](const TreeBox& b) { return 70 + row * b.depth; };
  Svg svg;
  svg.Text(kWidth / 2, 26, plot.title, "middle", 15);
  svg.Text(kWidth / 2, 44, "AME (Global): " + Label(plot.ame), "middle", 11);
  for (const auto& [parent, child] : edges) {
    const TreeBox& p = boxes[parent];
    const TreeBox& c = boxes[child];
    svg.Line(px(p), py(p) + 22, px(c), py(c) - 22, "#666666");
    const auto& split = (*p.node)["split"];
    const bool is_left = &(*p.node)["left"] == c.node;
    const std::string rule = split[is_left ? "left" : "right"].get<std::string>();
    svg.Text((px(p) + px(c)) / 2, (py(p) + py(c)) / 2, rule, "middle", 10);
  }
  const double w = std::min(120.0, slot - 6);
  for (const auto& b : boxes) {
    const auto& n = *b.node;
    svg.Rect(px(b) - w / 2, py(b) - 22, w, 44, "#f0f0f0", "#333333");
    svg.Text(px(b), py(b) - 8, "n = " + std::to_string(n["n"].get<std::size_t>()), "middle", 10);
    svg.Text(px(b), py(b) + 5, "cAME = " + Label(n["came"].get<double>()), "middle", 10);
    svg.Text(px(b), py(b) + 18, "SD = " + Label(n["sd_fme"].get<double>()), "middle", 10);
  }
  return svg.Finish();
}

}  // namespace

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      switch (c) {
        case '&':
          out += "&amp;";
          break;
        case '<':
          out += "&lt;";
          break;
        case '>':
          out += "&gt;";
          break;
        case '"':
          out += "&quot;";
          break;
        case '\'':
          out += "&apos;";
          break;
        default:
          if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') {
            out += "&#xFFFD;";
          } else {
            out += static_cast<char>(c);
          }
      }
      ++i;
      continue;
    }
    int len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 0;
    uint32_t cp = 0xFFFD;
    if (len > 0 && i + len <= s.size()) {
      cp = c & (0x7F >> len);
      for (int k = 1; k < len; ++k) {
        const auto cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
          cp = 0xFFFD;
          len = k;
          break;
        }
        cp = (cp << 6) | (cc & 0x3F);
      }
    } else {
      len = 1;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "&#x%X;", static_cast<unsigned>(cp));
    out += buf;
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string RenderSvg(const PlotData& plot) {
  switch (plot.kind) {
    case PlotKind::kUnivariate:
    case PlotKind::kBivariate:
      return HexPlot(plot);
    case PlotKind::kHigherOrder:
    case PlotKind::kCategorical:
      return HistogramPlot(plot);
    case PlotKind::kPartitionTree:
      return TreePlot(plot);
  }
  throw ValidationError("unknown plot kind");
}

void WriteSvg(const PlotData& plot, const std::filesystem::path& path) {
  const std::string text = RenderSvg(plot);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace fme
