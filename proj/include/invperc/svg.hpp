#pragma once

#include <string>
#include <vector>

namespace invperc::svg {

// Minimal deterministic SVG builder; coordinates are emitted with fixed
// precision so identical scenes serialize byte-identically.
class Document {
 public:
  Document(double width, double height, long primitive_limit = 10000000);

  void rect(double x, double y, double w, double h, const std::string& fill);
  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double stroke_width);
  void circle(double cx, double cy, double r, const std::string& fill);
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke, double stroke_width);

  long primitive_count() const { return primitives_; }
  std::string str() const;

 private:
  double width_, height_;
  long limit_;
  long primitives_ = 0;
  std::string body_;

  void bump();
};

// Deterministic palette keyed by an integer (cluster level, cycle index).
std::string palette_color(long long key);

}  // namespace invperc::svg
