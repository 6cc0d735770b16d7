#include "invperc/svg.hpp"

#include <cstdio>
#include <stdexcept>

namespace invperc::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

Document::Document(double width, double height, long primitive_limit)
    : width_(width), height_(height), limit_(primitive_limit) {}

void Document::bump() {
  if (++primitives_ > limit_)
    throw std::runtime_error(
        "svg: scene exceeds the primitive limit; downsample the window or "
        "render a sub-region");
}

void Document::rect(double x, double y, double w, double h,
                    const std::string& fill) {
  bump();
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
}

void Document::line(double x1, double y1, double x2, double y2,
                    const std::string& stroke, double stroke_width) {
  bump();
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
           "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(stroke_width) + "\" stroke-linecap=\"round\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill) {
  bump();
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
           "\" fill=\"" + fill + "\"/>\n";
}

void Document::polyline(const std::vector<std::pair<double, double>>& points,
                        const std::string& stroke, double stroke_width) {
  bump();
  body_ += "<polyline points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += " ";
    body_ += num(points[i].first) + "," + num(points[i].second);
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(stroke_width) + "\" stroke-linejoin=\"round\"/>\n";
}

std::string Document::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) +
         "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
         num(height_) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" fill=\"#ffffff\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

std::string palette_color(long long key) {
  static const char* kColors[] = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
      "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
  long long idx = key % 16;
  if (idx < 0) idx += 16;
  return kColors[idx];
}

}  // namespace invperc::svg
