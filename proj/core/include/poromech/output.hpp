#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "poromech/mesh.hpp"

namespace poromech {

/// Legacy ASCII VTK polydata: polygons with cell `pressure` and point
/// `displacement`.
void write_vtk(std::ostream& out, const PolyMesh& mesh, const Eigen::VectorXd& pressure,
               const Eigen::VectorXd& displacement, const std::string& title = "poromech");
void write_vtk_file(const std::string& path, const PolyMesh& mesh, const Eigen::VectorXd& pressure,
                    const Eigen::VectorXd& displacement, const std::string& title = "poromech");

/// Matrix Market coordinate format (real general).
void write_matrix_market(std::ostream& out, const Eigen::SparseMatrix<double>& A);
void write_matrix_market_file(const std::string& path, const Eigen::SparseMatrix<double>& A);

/// Minimal CSV writer: header on construction, one row per call.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(const std::string& v);
  /// Ends the current row.
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace poromech
