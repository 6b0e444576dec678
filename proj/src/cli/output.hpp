#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace slipgen::cli {

/// Comma-separated writer. Doubles are written with 17 significant digits so
/// that files round-trip and re-runs are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(std::span<const std::string> names);
  void header(std::initializer_list<std::string_view> names);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(std::uint64_t v);
  void end_row();
  void close();

 private:
  void separator();
  std::filesystem::path path_;
  std::ofstream out_;
  std::string line_;
  bool open_ = true;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG renderings; CSV files are the authoritative output.
void write_line_plot(const std::filesystem::path& path, std::string_view title,
                     std::string_view x_label, std::string_view y_label,
                     const std::vector<Series>& series);

/// Filled cells centred on (x_i, y_i) coloured by value (diverging about zero
/// when values change sign, sequential otherwise).
void write_cell_plot(const std::filesystem::path& path, std::string_view title,
                     std::span<const double> x, std::span<const double> y,
                     std::span<const double> values, double cell_w, double cell_h);

/// Contour-free heat map of values(i, j) over the grid x[i], y[j].
void write_heatmap(const std::filesystem::path& path, std::string_view title,
                   std::string_view x_label, std::string_view y_label, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const Eigen::MatrixXd& values);

}  // namespace slipgen::cli
