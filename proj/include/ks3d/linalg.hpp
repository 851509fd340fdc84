#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ks3d {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Sums duplicates. Entries are accumulated in the order given, so the
  /// result is deterministic for a deterministic triplet sequence.
  [[nodiscard]] static SparseMatrix from_triplets(int rows, int cols,
                                                  const std::vector<Triplet>& triplets);
  [[nodiscard]] static SparseMatrix identity(int n);
  [[nodiscard]] static SparseMatrix from_dense(const MatrixXd& dense, double drop = 0.0);

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] long long nnz() const noexcept { return static_cast<long long>(values_.size()); }
  [[nodiscard]] const std::vector<int>& row_ptr() const noexcept { return row_ptr_; }
  [[nodiscard]] const std::vector<int>& col_idx() const noexcept { return col_idx_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  [[nodiscard]] double coeff(int i, int j) const;
  [[nodiscard]] SparseMatrix transpose() const;
  [[nodiscard]] MatrixXd to_dense() const;
  [[nodiscard]] Eigen::SparseMatrix<double> to_eigen() const;
  /// Exact value-level symmetry (no tolerance).
  [[nodiscard]] bool is_symmetric() const;

  /// Rows `row_set` and columns `col_set`, renumbered in the given order.
  [[nodiscard]] SparseMatrix submatrix(const std::vector<int>& row_set,
                                       const std::vector<int>& col_set) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// y = M x. Throws Error(ShapeMismatch).
[[nodiscard]] VectorXd matvec(const SparseMatrix& m, const VectorXd& x);
/// y = M^T x. Throws Error(ShapeMismatch).
[[nodiscard]] VectorXd matvec_transpose(const SparseMatrix& m, const VectorXd& x);

void write_matrix_market(std::ostream& out, const SparseMatrix& m);
[[nodiscard]] SparseMatrix read_matrix_market(std::istream& in);

/// Sparse Cholesky factorization (CHOLMOD simplicial) with residual-checked
/// solves and iterative refinement.
class SpdFactorization {
 public:
  /// Throws Error(Indefinite) if A is not numerically positive definite.
  explicit SpdFactorization(const SparseMatrix& a);
  ~SpdFactorization();
  SpdFactorization(const SpdFactorization&) = delete;
  SpdFactorization& operator=(const SpdFactorization&) = delete;

  /// Throws Error(NotConverged) if ||Ax - b|| > tol ||b|| after refinement.
  [[nodiscard]] VectorXd solve(const VectorXd& b, double tol = 1e-12) const;
  [[nodiscard]] int size() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

[[nodiscard]] VectorXd solve_spd(const SparseMatrix& a, const VectorXd& b, double tol = 1e-12);

struct SaddleOptions {
  double tol = 1e-10;
  /// Constants are in the kernel of B (no Neumann boundary).
  bool pressure_nullspace = false;
  /// Pressure mass diagonal |T|; used as preconditioner and for the mean.
  /// Empty means all ones.
  VectorXd pressure_weights;
  int max_iterations = 2000;
};

struct SaddleSolution {
  VectorXd u;
  VectorXd p;
  /// ||(f - Au - Bp, g - B^T u)|| / ||(f, g)|| (g projected when the pressure
  /// nullspace is active).
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Solves [A B; B^T 0] [u; p] = [f; g] by preconditioned CG on the pressure
/// Schur complement B^T A^{-1} B with a sparse Cholesky inner solve.
///
/// With pressure_nullspace the constant component of the pressure equation
/// is discarded and p is returned with zero weighted mean. Throws
/// Error(SingularSaddle) when the Schur complement has a kernel beyond the
/// constants, Error(NotConverged) when the block residual exceeds tol.
[[nodiscard]] SaddleSolution solve_saddle(const SparseMatrix& a, const SparseMatrix& b,
                                          const VectorXd& f, const VectorXd& g,
                                          const SaddleOptions& options = {});

struct EigenPair {
  double value = 0.0;
  VectorXd vector;
  /// ||S v - value M v|| / ||M v||.
  double relative_residual = 0.0;
};

struct EigenOptions {
  double tol = 1e-9;
  /// Problems up to this size are solved densely.
  int dense_limit = 2000;
  int max_steps = 400;
  unsigned seed = 12345;
};

/// Smallest eigenpair of S v = lambda M v on the M-orthogonal complement of
/// the columns of `deflate`. Dense for n <= dense_limit, otherwise
/// shift-invert Lanczos with a Cholesky factorization of S (requires
/// S positive definite and no deflation).
[[nodiscard]] EigenPair smallest_generalized_eigenpair(const SparseMatrix& s,
                                                       const SparseMatrix& m,
                                                       const MatrixXd& deflate = MatrixXd(),
                                                       const EigenOptions& options = {});

[[nodiscard]] EigenPair smallest_generalized_eigenpair_dense(const MatrixXd& s,
                                                             const MatrixXd& m,
                                                             const MatrixXd& deflate = MatrixXd());

using LinearOperator = std::function<VectorXd(const VectorXd&)>;

/// Smallest eigenpair of S v = lambda diag(m) v where S is only available
/// as an operator, by Lanczos with full reorthogonalization in the
/// diag(m) inner product.
[[nodiscard]] EigenPair smallest_eigenpair_operator(const LinearOperator& apply_s,
                                                    const VectorXd& m_diag,
                                                    const MatrixXd& deflate = MatrixXd(),
                                                    const EigenOptions& options = {});

}  // namespace ks3d
