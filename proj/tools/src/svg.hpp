#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace sbflow_tools {

// Minimal SVG 1.1 document builder: enough for histogram bars, density
// polylines, axes and labels. Coordinates are raw pixels; callers do their
// own data-to-pixel mapping.
class SvgCanvas {
 public:
  SvgCanvas(int width, int height);

  void comment(const std::string& text);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width = 1.5);
  void circle(double cx, double cy, double r, const std::string& fill);
  void text(double x, double y, const std::string& content, int size = 11,
            const std::string& anchor = "start");

  std::string str() const;

 private:
  int width_;
  int height_;
  std::ostringstream body_;
};

}  // namespace sbflow_tools
