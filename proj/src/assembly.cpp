#include "ks3d/assembly.hpp"

#include <array>

#include "ks3d/error.hpp"
#include "ks3d/quadrature.hpp"

namespace ks3d {
namespace {

constexpr int kMaxLocal = 32;

struct LocalBasis {
  int n = 0;
  std::array<int, kMaxLocal> dofs{};
  std::array<Vec3, kMaxLocal> values{};
  std::array<Mat3, kMaxLocal> grads{};
};

// Builds a symmetric global matrix from per-cell local matrices; `kernel`
// fills the upper triangle for one quadrature point.
template <typename Kernel>
SparseMatrix assemble_symmetric(const VelocitySpace& space, int degree, bool need_values,
                                bool need_grads, Kernel&& kernel) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = rule_for_degree(degree);
  const int n = space.local_count();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * n * n);
  LocalBasis lb;
  lb.n = n;
  Eigen::MatrixXd local(n, n);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    space.cell_dofs(c, std::span(lb.dofs.data(), n));
    local.setZero();
    const double vol = mesh.cell_volume(c);
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(c, rule.points[q],
                 need_values ? std::span(lb.values.data(), n) : std::span<Vec3>(),
                 need_grads ? std::span(lb.grads.data(), n) : std::span<Mat3>());
      const double w = rule.weights[q] * vol;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) local(i, j) += w * kernel(lb, i, j);
    }
    for (int i = 0; i < n; ++i) {
      if (lb.dofs[i] == kNoDof) continue;
      for (int j = i; j < n; ++j) {
        if (lb.dofs[j] == kNoDof) continue;
        triplets.push_back({lb.dofs[i], lb.dofs[j], local(i, j)});
        if (lb.dofs[i] != lb.dofs[j] || i != j) {
          triplets.push_back({lb.dofs[j], lb.dofs[i], local(i, j)});
        }
      }
    }
  }
  const int nd = space.total_dofs();
  return SparseMatrix::from_triplets(nd, nd, triplets);
}

double eps_product(const Mat3& a, const Mat3& b) {
  const Mat3 ea = 0.5 * (a + a.transpose());
  const Mat3 eb = 0.5 * (b + b.transpose());
  return (ea.array() * eb.array()).sum();
}

}  // namespace

SparseMatrix assemble_a(const VelocitySpace& space, double mu) {
  if (!(mu > 0.0)) throw Error(Errc::InvalidInput, "viscosity must be positive");
  return assemble_symmetric(space, kStiffnessDegree, false, true,
                            [mu](const LocalBasis& lb, int i, int j) {
                              return 2.0 * mu * eps_product(lb.grads[i], lb.grads[j]);
                            });
}

SparseMatrix assemble_gram(const VelocitySpace& space, GramKind kind) {
  switch (kind) {
    case GramKind::Mass:
      return assemble_symmetric(space, kMassDegree, true, false,
                                [](const LocalBasis& lb, int i, int j) {
                                  return lb.values[i].dot(lb.values[j]);
                                });
    case GramKind::Grad:
      return assemble_symmetric(space, kStiffnessDegree, false, true,
                                [](const LocalBasis& lb, int i, int j) {
                                  return (lb.grads[i].array() * lb.grads[j].array()).sum();
                                });
    case GramKind::Eps:
      return assemble_symmetric(space, kStiffnessDegree, false, true,
                                [](const LocalBasis& lb, int i, int j) {
                                  return eps_product(lb.grads[i], lb.grads[j]);
                                });
  }
  throw Error(Errc::InvalidInput, "unknown Gram kind");
}

double gram_form(const VelocitySpace& space, const VectorXd& coefficients, GramKind kind) {
  const Mesh& mesh = space.mesh();
  if (coefficients.size() != space.total_dofs()) throw Error(Errc::ShapeMismatch, "gram_form");
  const bool values = kind == GramKind::Mass;
  const QuadratureRule& rule = rule_for_degree(values ? kMassDegree : kStiffnessDegree);
  const int n = space.local_count();
  LocalBasis lb;
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    space.cell_dofs(c, std::span(lb.dofs.data(), n));
    double cell = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(c, rule.points[q], values ? std::span(lb.values.data(), n) : std::span<Vec3>(),
                 values ? std::span<Mat3>() : std::span(lb.grads.data(), n));
      if (values) {
        Vec3 v = Vec3::Zero();
        for (int i = 0; i < n; ++i)
          if (lb.dofs[i] != kNoDof) v += coefficients[lb.dofs[i]] * lb.values[i];
        cell += rule.weights[q] * v.squaredNorm();
      } else {
        Mat3 g = Mat3::Zero();
        for (int i = 0; i < n; ++i)
          if (lb.dofs[i] != kNoDof) g += coefficients[lb.dofs[i]] * lb.grads[i];
        if (kind == GramKind::Eps) g = 0.5 * (g + g.transpose()).eval();
        cell += rule.weights[q] * g.squaredNorm();
      }
    }
    total += cell * mesh.cell_volume(c);
  }
  return total;
}

SparseMatrix assemble_b(const VelocitySpace& space) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = rule_for_degree(kDivergenceDegree);
  const int n = space.local_count();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * n);
  LocalBasis lb;
  std::array<double, kMaxLocal> local{};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    space.cell_dofs(c, std::span(lb.dofs.data(), n));
    local.fill(0.0);
    const double vol = mesh.cell_volume(c);
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(c, rule.points[q], {}, std::span(lb.grads.data(), n));
      for (int i = 0; i < n; ++i) local[i] -= rule.weights[q] * vol * lb.grads[i].trace();
    }
    for (int i = 0; i < n; ++i) {
      if (lb.dofs[i] != kNoDof) triplets.push_back({lb.dofs[i], c, local[i]});
    }
  }
  return SparseMatrix::from_triplets(space.total_dofs(), mesh.num_cells(), triplets);
}

VectorXd pressure_mass(const Mesh& mesh) {
  VectorXd w(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) w[c] = mesh.cell_volume(c);
  return w;
}

VectorXd assemble_load(const VelocitySpace& space, const VectorField& body,
                       const TractionField& traction) {
  const Mesh& mesh = space.mesh();
  const int n = space.local_count();
  VectorXd out = VectorXd::Zero(space.total_dofs());
  LocalBasis lb;
  if (body) {
    const QuadratureRule& rule = rule_for_degree(kLoadDegree);
    for (int c = 0; c < mesh.num_cells(); ++c) {
      space.cell_dofs(c, std::span(lb.dofs.data(), n));
      const double vol = mesh.cell_volume(c);
      for (int q = 0; q < rule.size(); ++q) {
        space.eval(c, rule.points[q], std::span(lb.values.data(), n), {});
        const Vec3 gx = body(mesh.map_to_physical(c, rule.points[q]));
        const double w = rule.weights[q] * vol;
        for (int i = 0; i < n; ++i) {
          if (lb.dofs[i] != kNoDof) out[lb.dofs[i]] += w * gx.dot(lb.values[i]);
        }
      }
    }
  }
  if (traction) {
    const FaceQuadratureRule& rule = face_rule_for_degree(kTractionDegree);
    for (int f = 0; f < mesh.num_faces(); ++f) {
      const Face& face = mesh.face(f);
      if (face.label != BoundaryLabel::Neumann) continue;
      const int c = face.plus_cell;
      space.cell_dofs(c, std::span(lb.dofs.data(), n));
      for (int q = 0; q < rule.size(); ++q) {
        const Vec3 x = face_point(mesh, f, rule.points[q]);
        space.eval(c, barycentric_in_cell(mesh, c, x), std::span(lb.values.data(), n), {});
        const Vec3 t = traction(x, face.normal);
        const double w = rule.weights[q] * face.area;
        for (int i = 0; i < n; ++i) {
          if (lb.dofs[i] != kNoDof) out[lb.dofs[i]] += w * t.dot(lb.values[i]);
        }
      }
    }
  }
  return out;
}

FiniteElementFunction StokesSystem::expand(const VectorXd& free_values) const {
  FiniteElementFunction out = lifting;
  for (std::size_t k = 0; k < free.size(); ++k) out.coefficients[free[k]] += free_values[k];
  return out;
}

StokesSystem apply_dirichlet(std::shared_ptr<const VelocitySpace> space, const SparseMatrix& a_full,
                             const SparseMatrix& b_full, const VectorXd& f_full,
                             const FiniteElementFunction& lifting, double mu) {
  const int nd = space->total_dofs();
  if (a_full.rows() != nd || b_full.rows() != nd || f_full.size() != nd ||
      lifting.coefficients.size() != nd) {
    throw Error(Errc::ShapeMismatch, "apply_dirichlet: sizes do not match the space");
  }
  StokesSystem sys;
  sys.space = space;
  sys.mu = mu;
  sys.lifting = lifting;
  sys.free = space->free_dofs();
  for (int d : sys.free) {
    if (lifting.coefficients[d] != 0.0) {
      throw Error(Errc::InconsistentLifting,
                  "lifting is nonzero at free dof " + std::to_string(d));
    }
  }
  std::vector<int> cells(b_full.cols());
  for (int c = 0; c < b_full.cols(); ++c) cells[c] = c;
  sys.a = a_full.submatrix(sys.free, sys.free);
  sys.b = b_full.submatrix(sys.free, cells);
  const VectorXd al = matvec(a_full, lifting.coefficients);
  sys.f.resize(static_cast<Eigen::Index>(sys.free.size()));
  for (std::size_t k = 0; k < sys.free.size(); ++k) sys.f[k] = f_full[sys.free[k]] - al[sys.free[k]];
  sys.g = -matvec_transpose(b_full, lifting.coefficients);
  return sys;
}

StokesSystem assemble_stokes(std::shared_ptr<const VelocitySpace> space, double mu,
                             const VectorField& body, const TractionField& traction,
                             const VectorField& dirichlet_data) {
  const SparseMatrix a = assemble_a(*space, mu);
  const SparseMatrix b = assemble_b(*space);
  const VectorXd f = assemble_load(*space, body, traction);
  FiniteElementFunction lift =
      dirichlet_data ? dirichlet_lifting(space, dirichlet_data)
                     : FiniteElementFunction{space, VectorXd::Zero(space->total_dofs())};
  return apply_dirichlet(space, a, b, f, lift, mu);
}

}  // namespace ks3d
