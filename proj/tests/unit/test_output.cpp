#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <poromech/error.hpp>
#include <poromech/mesh_generators.hpp>
#include <poromech/output.hpp>

namespace poromech {
namespace {

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    double v;
    const std::uint64_t b = bits(rng);
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-3.0), "-3");
  EXPECT_EQ(format_double(1e-300), "1e-300");
}

TEST(Vtk, StructureAndValues) {
  const PolyMesh mesh = build_cartesian(2, 1);
  const Eigen::VectorXd p = Eigen::Vector2d(1.5, -2.0);
  Eigen::VectorXd u(2 * mesh.num_vertices());
  for (int i = 0; i < u.size(); ++i) u(i) = 0.25 * i;
  std::ostringstream out;
  write_vtk(out, mesh, p, u, "demo");

  std::istringstream in(out.str());
  std::string line, word;
  std::getline(in, line);
  EXPECT_EQ(line, "# vtk DataFile Version 3.0");
  std::getline(in, line);
  EXPECT_EQ(line, "demo");
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "DATASET POLYDATA");
  int n = 0;
  in >> word >> n >> word;
  EXPECT_EQ(n, 6);
  for (int v = 0; v < n; ++v) {
    double x, y, z;
    in >> x >> y >> z;
    EXPECT_EQ(x, mesh.vertex(v).x());
    EXPECT_EQ(y, mesh.vertex(v).y());
    EXPECT_EQ(z, 0.0);
  }
  int cells = 0, total = 0;
  in >> word >> cells >> total;
  EXPECT_EQ(word, "POLYGONS");
  EXPECT_EQ(cells, 2);
  EXPECT_EQ(total, 10);
  for (int k = 0; k < cells; ++k) {
    int m = 0;
    in >> m;
    ASSERT_EQ(m, 4);
    for (int i = 0; i < m; ++i) {
      int v;
      in >> v;
      EXPECT_EQ(v, mesh.cell_vertices(k)[i]);
    }
  }
  in >> word >> n >> word >> word >> word >> n >> word >> word;
  EXPECT_EQ(word, "default");
  double pk;
  in >> pk;
  EXPECT_EQ(pk, 1.5);
  in >> pk;
  EXPECT_EQ(pk, -2.0);
  EXPECT_NE(out.str().find("VECTORS displacement double\n0 0.25 0\n0.5 0.75 0\n"), std::string::npos);

  EXPECT_THROW(write_vtk(out, mesh, Eigen::VectorXd::Zero(3), u), Error);
  EXPECT_THROW(write_vtk_file("/nonexistent/dir/x.vtk", mesh, p, u), Error);
}

TEST(MatrixMarket, ReadBackMatchesMatrix) {
  Eigen::SparseMatrix<double> A(3, 4);
  A.insert(0, 0) = 1.0;
  A.insert(2, 1) = -0.1;
  A.insert(1, 3) = 1e-20;
  A.makeCompressed();
  std::ostringstream out;
  write_matrix_market(out, A);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real general");
  int r, c, nnz;
  in >> r >> c >> nnz;
  EXPECT_EQ(r, 3);
  EXPECT_EQ(c, 4);
  ASSERT_EQ(nnz, 3);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(r, c);
  for (int i = 0; i < nnz; ++i) {
    int row, col;
    double v;
    in >> row >> col >> v;
    B(row - 1, col - 1) = v;
  }
  EXPECT_EQ((B - Eigen::MatrixXd(A)).norm(), 0.0);
}

TEST(Csv, RowsAndFieldCounts) {
  std::ostringstream out;
  CsvWriter csv(out, {"name", "n", "value"});
  csv << std::string("a") << 3 << 0.1;
  csv.end_row();
  csv << std::string("b") << -1 << 2.0;
  csv.end_row();
  EXPECT_EQ(out.str(), "name,n,value\na,3,0.1\nb,-1,2\n");
  csv << 1.0;
  EXPECT_THROW(csv.end_row(), Error);
  csv << 2.0 << 3.0;
  EXPECT_THROW(csv << 4.0, Error);
}

}  // namespace
}  // namespace poromech
