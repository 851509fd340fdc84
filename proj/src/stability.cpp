#include "ks3d/stability.hpp"

#include <cmath>

#include "ks3d/assembly.hpp"
#include "ks3d/error.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/quadrature.hpp"

namespace ks3d {

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Stable ? "stable" : "degenerate";
}

namespace {

StabilityReport make_report(std::string quantity, const VelocitySpace& space, const EigenPair& e) {
  StabilityReport r;
  r.quantity = std::move(quantity);
  r.space = std::string(to_string(space.kind()));
  r.constant = std::sqrt(std::max(e.value, 0.0));
  r.vector = e.vector;
  r.eigen_residual = e.relative_residual;
  r.verdict = r.constant <= kDegenerateThreshold ? Verdict::Degenerate : Verdict::Stable;
  return r;
}

std::vector<int> all_cells(const Mesh& mesh) {
  std::vector<int> c(mesh.num_cells());
  for (int i = 0; i < mesh.num_cells(); ++i) c[i] = i;
  return c;
}

}  // namespace

StabilityReport korn_constant(const std::shared_ptr<const VelocitySpace>& space,
                              const EigenOptions& options) {
  const std::vector<int> free = space->free_dofs();
  if (free.empty()) throw Error(Errc::InvalidInput, "no free velocity dofs");
  const SparseMatrix e = assemble_gram(*space, GramKind::Eps).submatrix(free, free);
  const SparseMatrix mass = assemble_gram(*space, GramKind::Mass).submatrix(free, free);
  const SparseMatrix grad = assemble_gram(*space, GramKind::Grad).submatrix(free, free);
  const MatrixXd none;
  EigenPair pair;
  if (static_cast<int>(free.size()) <= options.dense_limit) {
    pair = smallest_generalized_eigenpair_dense(e.to_dense(), mass.to_dense() + grad.to_dense(), none);
  } else {
    std::vector<Triplet> t;
    for (const SparseMatrix* m : {&mass, &grad})
      for (int r = 0; r < m->rows(); ++r)
        for (int k = m->row_ptr()[r]; k < m->row_ptr()[r + 1]; ++k)
          t.push_back({r, m->col_idx()[k], m->values()[k]});
    const SparseMatrix sum = SparseMatrix::from_triplets(mass.rows(), mass.cols(), t);
    pair = smallest_generalized_eigenpair(e, sum, none, options);
  }
  // Rayleigh quotient as sums of squares: accurate to O(eps^2) near a kernel.
  VectorXd full = VectorXd::Zero(space->total_dofs());
  for (std::size_t k = 0; k < free.size(); ++k) full[free[k]] = pair.vector[k];
  const double num = gram_form(*space, full, GramKind::Eps);
  const double den = gram_form(*space, full, GramKind::Mass) + gram_form(*space, full, GramKind::Grad);
  pair.value = num / den;
  return make_report("korn", *space, pair);
}

StabilityReport infsup_constant(const std::shared_ptr<const VelocitySpace>& space,
                                const EigenOptions& options) {
  const Mesh& mesh = space->mesh();
  const std::vector<int> free = space->free_dofs();
  if (free.empty()) throw Error(Errc::InvalidInput, "no free velocity dofs");
  const SparseMatrix grad = assemble_gram(*space, GramKind::Grad).submatrix(free, free);
  const SparseMatrix b = assemble_b(*space).submatrix(free, all_cells(mesh));
  const VectorXd w = pressure_mass(mesh);
  const int np = mesh.num_cells();
  MatrixXd deflate;
  if (!mesh.has_neumann_boundary()) deflate = VectorXd::Ones(np);
  const SpdFactorization fact(grad);
  EigenPair pair;
  if (np <= options.dense_limit && static_cast<int>(free.size()) <= 4 * options.dense_limit) {
    const MatrixXd bd = b.to_dense();
    MatrixXd x(bd.rows(), np);
    for (int j = 0; j < np; ++j) x.col(j) = fact.solve(bd.col(j));
    MatrixXd s = bd.transpose() * x;
    s = 0.5 * (s + s.transpose());
    pair = smallest_generalized_eigenpair_dense(s, MatrixXd(w.asDiagonal()), deflate);
  } else {
    LinearOperator apply = [&](const VectorXd& p) -> VectorXd {
      return matvec_transpose(b, fact.solve(matvec(b, p)));
    };
    pair = smallest_eigenpair_operator(apply, w, deflate, options);
  }
  const VectorXd bq = matvec(b, pair.vector);
  pair.value = bq.dot(fact.solve(bq)) / pair.vector.dot(w.cwiseProduct(pair.vector));
  return make_report("infsup", *space, pair);
}

BResidual b_residual(const VelocitySpace& space, const VectorXd& q) {
  const Mesh& mesh = space.mesh();
  const std::vector<int> free = space.free_dofs();
  const SparseMatrix b = assemble_b(space).submatrix(free, all_cells(mesh));
  const VectorXd r = matvec(b, q);
  BResidual out;
  for (int i = 0; i < r.size(); ++i) {
    if (std::abs(r[i]) > out.max_abs || out.dof < 0) {
      out.max_abs = std::abs(r[i]);
      out.dof = free[i];
    }
  }
  return out;
}

InfSupCounterexample counterexample_infsup(double shift) {
  auto mesh = std::make_shared<const Mesh>(octahedron_patch(all_dirichlet()));
  auto space = std::make_shared<const VelocitySpace>(mesh, VelocitySpaceKind::P1P1NC);
  InfSupCounterexample out;
  out.q = VectorXd::Constant(mesh->num_cells(), -shift);
  for (const auto& jkl : {std::array{1, 1, 1}, std::array{1, 1, 2}, std::array{2, 2, 1},
                          std::array{2, 2, 2}}) {
    out.q[octahedron_cell(jkl[0], jkl[1], jkl[2])] += 1.0;
  }
  const VectorXd w = pressure_mass(*mesh);
  out.q_norm = std::sqrt(out.q.cwiseProduct(out.q).dot(w));
  out.residual = b_residual(*space, out.q);
  if (out.residual.max_abs > 1e-13 * std::max(1.0, out.q_norm)) {
    throw Error(Errc::AssertionFailed,
                "b_h(phi_i, q) = " + std::to_string(out.residual.max_abs) + " at velocity dof " +
                    std::to_string(out.residual.dof));
  }
  out.infsup = infsup_constant(space).constant;
  return out;
}

namespace {

// The four rigid motions on the wedge cells, in cell order.
Vec3 wedge_motion(int cell, double a, const Vec3& x) {
  switch (cell) {
    case 0: return {0.0, a - 3 * a * x[2], -a + 3 * a * x[1]};
    case 1: return {0.0, -a + 3 * a * x[2], -a - 3 * a * x[1]};
    case 2: return {0.0, -a - 3 * a * x[2], a + 3 * a * x[1]};
    default: return {0.0, a + 3 * a * x[2], a - 3 * a * x[1]};
  }
}

}  // namespace

KornCounterexample counterexample_korn(KornVariant variant, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw Error(Errc::InvalidInput, "parameter a must be nonzero");
  KornCounterexample out;
  out.variant = variant;
  out.a = a;
  if (variant == KornVariant::Tensor) {
    auto mesh = std::make_shared<const Mesh>(korn_pyramid(all_dirichlet()));
    auto space = std::make_shared<const VelocitySpace>(mesh, VelocitySpaceKind::P1NCNC);
    out.korn = korn_constant(space).constant;
    if (!(out.korn <= 1e-10)) {
      throw Error(Errc::AssertionFailed,
                  "tensor variant: Korn constant " + std::to_string(out.korn) + " is not zero");
    }
    return out;
  }

  auto mesh = std::make_shared<const Mesh>(korn_wedge(all_dirichlet()));
  auto space = std::make_shared<const VelocitySpace>(mesh, VelocitySpaceKind::P1NCNC);
  const double scale = std::abs(a);

  // Face means of the formulas from each incident cell (affine, so the
  // centroid value is the mean).
  out.phi = VectorXd::Zero(space->total_dofs());
  for (int f = 0; f < mesh->num_faces(); ++f) {
    const Face& face = mesh->face(f);
    const Vec3 plus = wedge_motion(face.plus_cell, a, face.centroid);
    if (face.is_boundary()) {
      out.max_boundary_mean = std::max(out.max_boundary_mean, plus.norm());
    } else {
      const Vec3 minus = wedge_motion(face.minus_cell, a, face.centroid);
      out.max_interior_jump = std::max(out.max_interior_jump, (plus - minus).norm());
    }
    // P1NC dofs are numbered by face.
    for (int comp = 1; comp < 3; ++comp) out.phi[space->block_offset(comp) + f] = plus[comp];
  }
  out.eps_norm = std::sqrt(gram_form(*space, out.phi, GramKind::Eps));
  out.grad_norm = std::sqrt(gram_form(*space, out.phi, GramKind::Grad));

  const StabilityReport korn = korn_constant(space);
  out.korn = korn.constant;
  const std::vector<int> free = space->free_dofs();
  VectorXd phi_free(static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) phi_free[k] = out.phi[free[k]];
  out.cosine = std::abs(phi_free.dot(korn.vector)) / (phi_free.norm() * korn.vector.norm());

  if (!(out.eps_norm <= 1e-12 * scale)) {
    throw Error(Errc::AssertionFailed, "(i) elementwise strain of phi does not vanish");
  }
  if (!(out.max_interior_jump <= 1e-13 * scale)) {
    throw Error(Errc::AssertionFailed, "(ii) interior face-mean jump of phi does not vanish");
  }
  if (!(out.max_boundary_mean <= 1e-13 * scale)) {
    throw Error(Errc::AssertionFailed, "(iii) boundary face mean of phi does not vanish");
  }
  if (!(out.grad_norm >= scale)) {
    throw Error(Errc::AssertionFailed, "(iv) ||grad_h phi|| is below |a|");
  }
  if (!(out.korn <= 1e-10)) {
    throw Error(Errc::AssertionFailed, "wedge: Korn constant " + std::to_string(out.korn) +
                                           " is not zero");
  }
  return out;
}

double divergence_means(const FiniteElementFunction& u_h) {
  const VelocitySpace& space = *u_h.space;
  const Mesh& mesh = space.mesh();
  const VectorXd bt = matvec_transpose(assemble_b(space), u_h.coefficients);
  double m = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) m = std::max(m, std::abs(bt[c]) / mesh.cell_volume(c));
  return m;
}

double oscillation(const VectorField& g, const Mesh& mesh) {
  const QuadratureRule& rule = rule_for_degree(8);
  std::vector<Vec3> values(rule.size());
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Vec3 mean = Vec3::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      values[q] = g(mesh.map_to_physical(c, rule.points[q]));
      mean += rule.weights[q] * values[q];
    }
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * (values[q] - mean).squaredNorm();
    total += s * mesh.cell_volume(c);
  }
  return std::sqrt(total);
}

double oscillation(const ScalarField& g, const Mesh& mesh) {
  return oscillation([&](const Vec3& x) { return Vec3(g(x), 0.0, 0.0); }, mesh);
}

}  // namespace ks3d
