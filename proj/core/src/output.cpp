#include "poromech/output.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "poromech/error.hpp"

namespace poromech {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_vtk(std::ostream& out, const PolyMesh& mesh, const Eigen::VectorXd& pressure,
               const Eigen::VectorXd& displacement, const std::string& title) {
  if (pressure.size() != mesh.num_cells() || displacement.size() != 2 * mesh.num_vertices())
    throw Error(ErrorKind::invalid_argument, "fields do not match the mesh");
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec2& x : mesh.vertices()) out << format_double(x.x()) << ' ' << format_double(x.y()) << " 0\n";
  std::size_t total = 0;
  for (int k = 0; k < mesh.num_cells(); ++k) total += mesh.cell_vertices(k).size() + 1;
  out << "POLYGONS " << mesh.num_cells() << ' ' << total << '\n';
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const auto& vs = mesh.cell_vertices(k);
    out << vs.size();
    for (int v : vs) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_DATA " << mesh.num_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.num_cells(); ++k) out << format_double(pressure(k)) << '\n';
  out << "POINT_DATA " << mesh.num_vertices() << "\nVECTORS displacement double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << format_double(displacement(2 * v)) << ' ' << format_double(displacement(2 * v + 1)) << " 0\n";
}

void write_vtk_file(const std::string& path, const PolyMesh& mesh, const Eigen::VectorXd& pressure,
                    const Eigen::VectorXd& displacement, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  write_vtk(out, mesh, pressure, displacement, title);
}

void write_matrix_market(std::ostream& out, const Eigen::SparseMatrix<double>& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
}

void write_matrix_market_file(const std::string& path, const Eigen::SparseMatrix<double>& A) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  write_matrix_market(out, A);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ >= columns_) throw Error(ErrorKind::internal, "CSV row has too many fields");
  if (filled_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw Error(ErrorKind::internal, "CSV row has too few fields");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace poromech
