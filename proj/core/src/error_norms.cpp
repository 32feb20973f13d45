#include "poromech/error_norms.hpp"

#include <cmath>

#include "poromech/error.hpp"
#include "poromech/quadrature.hpp"

namespace poromech {

ErrorAccumulator::ErrorAccumulator(const PolyMesh& mesh, const std::vector<CellGeometry>& geometry, double G,
                                   double lambda, int quadrature_order)
    : mesh_(mesh), geometry_(geometry), C_(elasticity_voigt(G, lambda)), order_(quadrature_order) {
  if (static_cast<int>(geometry.size()) != mesh.num_cells())
    throw Error(ErrorKind::invalid_argument, "geometry does not match the mesh");
  local_.reserve(geometry.size());
  for (const auto& g : geometry) local_.push_back(build_local_vem(g, G, lambda));
}

void ErrorAccumulator::add(double dt, double t, const Eigen::VectorXd& u_h, const Eigen::VectorXd& p_h,
                           const ScalarField& p_exact, const VectorField& u_exact) {
  if (u_h.size() != 2 * mesh_.num_vertices() || p_h.size() != mesh_.num_cells())
    throw Error(ErrorKind::invalid_argument, "state does not match the mesh");
  double ep = 0.0, eu = 0.0, es = 0.0;
  for (int k = 0; k < mesh_.num_cells(); ++k) {
    const CellGeometry& g = geometry_[k];
    const LocalVem& v = local_[k];
    const auto& verts = mesh_.cell_vertices(k);
    const double pk = p_h(k);
    ep += integrate(g, [&](const Vec2& x) { const double d = p_exact(x, t) - pk; return d * d; }, order_);

    const Vec2 u_mean = cell_average(g, [&](const Vec2& x) { return u_exact(x, t); }, order_);
    Eigen::VectorXd uk(2 * verts.size()), ik(2 * verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
      uk(2 * i) = u_h(2 * verts[i]);
      uk(2 * i + 1) = u_h(2 * verts[i] + 1);
      const Vec2 ue = u_exact(mesh_.vertex(verts[i]), t);
      ik(2 * i) = ue.x();
      ik(2 * i + 1) = ue.y();
    }
    Vec2 uh_mean;
    uh_mean.x() = v.mean_row.dot(uk(Eigen::seq(0, Eigen::last, 2)));
    uh_mean.y() = v.mean_row.dot(uk(Eigen::seq(1, Eigen::last, 2)));
    eu += g.area * (u_mean - uh_mean).squaredNorm();

    const Eigen::Vector3d ds = C_ * (v.strain * (ik - uk));
    es += g.area * (ds(0) * ds(0) + ds(1) * ds(1) + 2.0 * ds(2) * ds(2));
  }
  last_p2_ = ep;
  sum_p_ += dt * ep;
  sum_u_ += dt * eu;
  sum_s_ += dt * es;
}

double ErrorAccumulator::e_p() const { return std::sqrt(sum_p_); }
double ErrorAccumulator::e_u() const { return std::sqrt(sum_u_); }
double ErrorAccumulator::e_sigma() const { return std::sqrt(sum_s_); }

double observed_rate(double x1, double e1, double x2, double e2) {
  if (!(x1 > 0.0 && x2 > 0.0 && e1 > 0.0 && e2 > 0.0) || x1 == x2)
    throw Error(ErrorKind::invalid_argument, "rates need positive, distinct abscissae and positive errors");
  return std::log(e2 / e1) / std::log(x2 / x1);
}

}  // namespace poromech
