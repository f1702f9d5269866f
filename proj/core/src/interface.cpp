#include "robinfsi/interface.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "robinfsi/errors.hpp"

namespace robinfsi {

void InterfaceCoupling::scatter_to_solid(std::span<const double> x,
                                         std::span<double> y, double s) const {
  for (size_t k = 0; k < fluid_dofs.size(); ++k)
    y[solid_dofs[k]] += s * x[fluid_dofs[k]];
}

void InterfaceCoupling::scatter_to_fluid(std::span<const double> x,
                                         std::span<double> y, double s) const {
  for (size_t k = 0; k < fluid_dofs.size(); ++k)
    y[fluid_dofs[k]] += s * x[solid_dofs[k]];
}

InterfaceCoupling build_interface_coupling(const FESpace& fluid_v,
                                           const FESpace& solid_v,
                                           const InterfaceMap& imap) {
  InterfaceCoupling ic;
  const Mesh& fm = fluid_v.mesh();
  const Mesh& sm = solid_v.mesh();

  std::map<int, int> fluid_to_solid;
  for (int k = 0; k < imap.size(); ++k) {
    const Vec2 a = fm.nodes[imap.fluid_nodes[k]];
    const Vec2 b = sm.nodes[imap.solid_nodes[k]];
    const double scale = 1.0 + norm(a);
    if (norm(a - b) > 1e-12 * scale)
      fail(ErrorCode::ValidationError, "interface node pair coordinates differ");
    fluid_to_solid[imap.fluid_nodes[k]] = imap.solid_nodes[k];
    ic.fluid_sdofs.push_back(imap.fluid_nodes[k]);
    ic.solid_sdofs.push_back(imap.solid_nodes[k]);
  }

  const bool p2_pair =
      fluid_v.family() == Family::P2 && solid_v.family() == Family::P2;
  if ((fluid_v.family() == Family::P2) != (solid_v.family() == Family::P2))
    fail(ErrorCode::ValidationError,
         "interface trace spaces do not match (P2 on one side only)");

  if (p2_pair) {
    for (const auto& e : fm.boundary) {
      if (e.tag != BoundaryTag::Interface) continue;
      const auto ita = fluid_to_solid.find(e.a);
      const auto itb = fluid_to_solid.find(e.b);
      if (ita == fluid_to_solid.end() || itb == fluid_to_solid.end())
        fail(ErrorCode::ValidationError, "interface edge endpoint not paired");
      ic.fluid_sdofs.push_back(fluid_v.edge_scalar_dof(e.a, e.b));
      ic.solid_sdofs.push_back(solid_v.edge_scalar_dof(ita->second, itb->second));
    }
  }

  for (size_t k = 0; k < ic.fluid_sdofs.size(); ++k)
    for (int c = 0; c < fluid_v.components(); ++c) {
      ic.fluid_dofs.push_back(fluid_v.dof(ic.fluid_sdofs[k], c));
      ic.solid_dofs.push_back(solid_v.dof(ic.solid_sdofs[k], c));
    }

  ic.mg_fluid = assemble_boundary_mass(fluid_v, BoundaryTag::Interface, fm);
  ic.mg_solid = assemble_boundary_mass(solid_v, BoundaryTag::Interface, sm);
  return ic;
}

InterfaceNorms::InterfaceNorms(const InterfaceCoupling& ic,
                               std::vector<int> active)
    : active_(std::move(active)), n_(static_cast<int>(active_.size())) {
  std::sort(active_.begin(), active_.end());
  m_dense_.assign(static_cast<size_t>(n_) * n_, 0.0);
  std::map<int, int> pos;
  for (int i = 0; i < n_; ++i) pos[active_[i]] = i;
  const auto ro = ic.mg_fluid.row_offsets();
  const auto ci = ic.mg_fluid.col_indices();
  const auto v = ic.mg_fluid.values();
  for (int i = 0; i < n_; ++i) {
    const int row = active_[i];
    for (int k = ro[row]; k < ro[row + 1]; ++k) {
      auto it = pos.find(ci[k]);
      if (it != pos.end()) m_dense_[static_cast<size_t>(i) * n_ + it->second] = v[k];
    }
  }
  // dense Cholesky of the (small SPD) interface mass
  chol_ = m_dense_;
  for (int j = 0; j < n_; ++j) {
    double d = chol_[static_cast<size_t>(j) * n_ + j];
    for (int k = 0; k < j; ++k) {
      const double l = chol_[static_cast<size_t>(j) * n_ + k];
      d -= l * l;
    }
    if (d <= 0.0) fail(ErrorCode::Singular, "interface mass not SPD");
    const double dj = std::sqrt(d);
    chol_[static_cast<size_t>(j) * n_ + j] = dj;
    for (int i = j + 1; i < n_; ++i) {
      double s = chol_[static_cast<size_t>(i) * n_ + j];
      for (int k = 0; k < j; ++k)
        s -= chol_[static_cast<size_t>(i) * n_ + k] *
             chol_[static_cast<size_t>(j) * n_ + k];
      chol_[static_cast<size_t>(i) * n_ + j] = s / dj;
    }
  }
}

double InterfaceNorms::norm_sq(std::span<const double> coeffs) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_; ++j)
      row += m_dense_[static_cast<size_t>(i) * n_ + j] * coeffs[active_[j]];
    acc += coeffs[active_[i]] * row;
  }
  return acc;
}

double InterfaceNorms::dual_norm_sq(std::span<const double> dual) const {
  // λ = M⁻¹ T, value = TᵀM⁻¹T via forward/backward substitution
  std::vector<double> y(n_);
  for (int i = 0; i < n_; ++i) {
    double s = dual[active_[i]];
    for (int k = 0; k < i; ++k) s -= chol_[static_cast<size_t>(i) * n_ + k] * y[k];
    y[i] = s / chol_[static_cast<size_t>(i) * n_ + i];
  }
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) acc += y[i] * y[i];
  return acc;
}

}  // namespace robinfsi
