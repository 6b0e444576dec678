#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

CsvWriter::~CsvWriter() {
  if (open_) out_.close();
}

void CsvWriter::separator() {
  if (!line_.empty()) line_ += ',';
}

void CsvWriter::header(std::span<const std::string> names) {
  for (const auto& n : names) {
    separator();
    line_ += n;
  }
  end_row();
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) {
    separator();
    line_ += n;
  }
  end_row();
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  if (v == 0.0) v = 0.0;
  fmt::format_to(std::back_inserter(line_), "{:.17g}", v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::uint64_t v) {
  separator();
  fmt::format_to(std::back_inserter(line_), "{}", v);
  return *this;
}

void CsvWriter::end_row() {
  line_ += '\n';
  out_ << line_;
  line_.clear();
}

void CsvWriter::close() {
  out_.close();
  open_ = false;
  if (!out_) throw IoError(fmt::format("failed writing '{}'", path_.string()));
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double frac(double v) const { return (v - lo) / (hi - lo); }
};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color_for(double v, double lo, double hi) {
  int r = 0, g = 0, b = 0;
  if (lo < 0.0 && hi > 0.0) {
    const double m = std::max(-lo, hi);
    const double t = std::clamp(v / m, -1.0, 1.0);
    if (t >= 0) {
      r = 255;
      g = b = static_cast<int>(255 * (1.0 - t));
    } else {
      b = 255;
      r = g = static_cast<int>(255 * (1.0 + t));
    }
  } else {
    const double t = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    r = static_cast<int>(255 * t);
    g = static_cast<int>(80 + 240 * t * (1.0 - t));
    b = static_cast<int>(255 * (1.0 - t));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

class Svg {
 public:
  explicit Svg(const std::filesystem::path& path) : path_(path) {
    body_ = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        kWidth, kHeight);
  }
  void raw(std::string_view s) { body_ += s; }
  void text(double x, double y, std::string_view s, std::string_view anchor = "middle") {
    body_ += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"{}\">{}</text>\n", x, y,
                         anchor, escape(s));
  }
  void frame(std::string_view title, std::string_view xl, std::string_view yl, const Range& xr,
             const Range& yr) {
    body_ += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
    text(kWidth / 2, 22, title);
    text(kWidth / 2, kHeight - 10, xl);
    body_ += fmt::format(
        "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">"
        "{1}</text>\n",
        kHeight / 2, escape(yl));
    text(kLeft, kHeight - kBottom + 16, fmt::format("{:.4g}", xr.lo));
    text(kWidth - kRight, kHeight - kBottom + 16, fmt::format("{:.4g}", xr.hi));
    text(kLeft - 4, kHeight - kBottom, fmt::format("{:.4g}", yr.lo), "end");
    text(kLeft - 4, kTop + 10, fmt::format("{:.4g}", yr.hi), "end");
  }
  static double px(const Range& r, double v) { return kLeft + r.frac(v) * (kWidth - kLeft - kRight); }
  static double py(const Range& r, double v) {
    return kHeight - kBottom - r.frac(v) * (kHeight - kTop - kBottom);
  }
  void save() {
    body_ += "</svg>\n";
    std::ofstream out(path_);
    out << body_;
    if (!out) throw IoError(fmt::format("cannot write '{}'", path_.string()));
  }

 private:
  std::filesystem::path path_;
  std::string body_;
};

constexpr std::string_view kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_line_plot(const std::filesystem::path& path, std::string_view title,
                     std::string_view x_label, std::string_view y_label,
                     const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.settle();
  yr.settle();
  Svg svg(path);
  svg.frame(title, x_label, y_label, xr, yr);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const auto color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      fmt::format_to(std::back_inserter(pts), "{:.2f},{:.2f} ", Svg::px(xr, s.x[i]),
                     Svg::py(yr, s.y[i]));
    }
    svg.raw(fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                        color, pts));
    if (!s.name.empty()) {
      svg.raw(fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"{}\">{}</text>\n",
                          kWidth - kRight - 120, kTop + 16 + 14 * static_cast<double>(k), color,
                          escape(s.name)));
    }
  }
  svg.save();
}

void write_cell_plot(const std::filesystem::path& path, std::string_view title,
                     std::span<const double> x, std::span<const double> y,
                     std::span<const double> values, double cell_w, double cell_h) {
  Range xr, yr, vr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xr.add(x[i] - cell_w / 2);
    xr.add(x[i] + cell_w / 2);
    yr.add(y[i] - cell_h / 2);
    yr.add(y[i] + cell_h / 2);
    vr.add(values[i]);
  }
  xr.settle();
  yr.settle();
  vr.settle();
  Svg svg(path);
  svg.frame(fmt::format("{} [{:.4g}, {:.4g}]", title, vr.lo, vr.hi), "x (m)", "y (m)", xr, yr);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = Svg::px(xr, x[i] - cell_w / 2);
    const double x1 = Svg::px(xr, x[i] + cell_w / 2);
    const double y0 = Svg::py(yr, y[i] + cell_h / 2);
    const double y1 = Svg::py(yr, y[i] - cell_h / 2);
    svg.raw(fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                        x0, y0, x1 - x0 + 0.3, y1 - y0 + 0.3, color_for(values[i], vr.lo, vr.hi)));
  }
  svg.save();
}

void write_heatmap(const std::filesystem::path& path, std::string_view title,
                   std::string_view x_label, std::string_view y_label, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const Eigen::MatrixXd& values) {
  std::vector<double> cx, cy, cv;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      cx.push_back(x[i]);
      cy.push_back(y[j]);
      cv.push_back(values(i, j));
    }
  }
  Range xr, yr, vr;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    xr.add(cx[i]);
    yr.add(cy[i]);
    vr.add(cv[i]);
  }
  xr.settle();
  yr.settle();
  vr.settle();
  Svg svg(path);
  svg.frame(title, x_label, y_label, xr, yr);
  const double pw = (kWidth - kLeft - kRight) / static_cast<double>(std::max<Eigen::Index>(x.size() - 1, 1));
  const double ph = (kHeight - kTop - kBottom) / static_cast<double>(std::max<Eigen::Index>(y.size() - 1, 1));
  for (std::size_t i = 0; i < cx.size(); ++i) {
    svg.raw(fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                        Svg::px(xr, cx[i]) - pw / 2, Svg::py(yr, cy[i]) - ph / 2, pw + 0.3,
                        ph + 0.3, color_for(cv[i], 0.0, vr.hi)));
  }
  svg.save();
}

}  // namespace slipgen::cli
