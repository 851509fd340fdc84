#include "ks3d/linalg.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ks3d/error.hpp"

namespace ks3d {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMatrix m(rows, cols);
  std::vector<int> count(rows + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error(Errc::ShapeMismatch, "triplet index out of range");
    }
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<int> order(triplets.size());
  {
    std::vector<int> fill(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < triplets.size(); ++k) order[fill[triplets[k].row]++] = static_cast<int>(k);
  }
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (int r = 0; r < rows; ++r) {
    auto begin = order.begin() + count[r];
    auto end = order.begin() + count[r + 1];
    std::stable_sort(begin, end, [&](int a, int b) { return triplets[a].col < triplets[b].col; });
    for (auto it = begin; it != end; ++it) {
      const Triplet& t = triplets[*it];
      if (static_cast<int>(m.col_idx_.size()) > m.row_ptr_[r] && m.col_idx_.back() == t.col) {
        m.values_.back() += t.value;
      } else {
        m.col_idx_.push_back(t.col);
        m.values_.push_back(t.value);
      }
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, t);
}

SparseMatrix SparseMatrix::from_dense(const MatrixXd& dense, double drop) {
  std::vector<Triplet> t;
  for (int i = 0; i < dense.rows(); ++i)
    for (int j = 0; j < dense.cols(); ++j)
      if (std::abs(dense(i, j)) > drop) t.push_back({i, j, dense(i, j)});
  return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()), t);
}

double SparseMatrix::coeff(int i, int j) const {
  auto begin = col_idx_.begin() + row_ptr_[i];
  auto end = col_idx_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<int> count(cols_ + 1, 0);
  for (int c : col_idx_) ++count[c + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  t.row_ptr_ = count;
  t.col_idx_.resize(col_idx_.size());
  t.values_.resize(values_.size());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int pos = fill[col_idx_[k]]++;
      t.col_idx_[pos] = r;
      t.values_[pos] = values_[k];
    }
  }
  return t;
}

MatrixXd SparseMatrix::to_dense() const {
  MatrixXd d = MatrixXd::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) = values_[k];
  return d;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.emplace_back(r, col_idx_[k], values_[k]);
  Eigen::SparseMatrix<double> out(rows_, cols_);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

bool SparseMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  const SparseMatrix t = transpose();
  return t.row_ptr_ == row_ptr_ && t.col_idx_ == col_idx_ && t.values_ == values_;
}

SparseMatrix SparseMatrix::submatrix(const std::vector<int>& row_set,
                                     const std::vector<int>& col_set) const {
  std::vector<int> col_map(cols_, -1);
  for (std::size_t j = 0; j < col_set.size(); ++j) col_map[col_set[j]] = static_cast<int>(j);
  SparseMatrix s(static_cast<int>(row_set.size()), static_cast<int>(col_set.size()));
  s.row_ptr_.assign(row_set.size() + 1, 0);
  std::vector<std::pair<int, double>> row;
  for (std::size_t i = 0; i < row_set.size(); ++i) {
    const int r = row_set[i];
    row.clear();
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = col_map[col_idx_[k]];
      if (c >= 0) row.emplace_back(c, values_[k]);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [c, v] : row) {
      s.col_idx_.push_back(c);
      s.values_.push_back(v);
    }
    s.row_ptr_[i + 1] = static_cast<int>(s.col_idx_.size());
  }
  return s;
}

VectorXd matvec(const SparseMatrix& m, const VectorXd& x) {
  if (x.size() != m.cols()) throw Error(Errc::ShapeMismatch, "matvec: vector length");
  VectorXd y(m.rows());
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& v = m.values();
  for (int r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (int k = rp[r]; k < rp[r + 1]; ++k) s += v[k] * x[ci[k]];
    y[r] = s;
  }
  return y;
}

VectorXd matvec_transpose(const SparseMatrix& m, const VectorXd& x) {
  if (x.size() != m.rows()) throw Error(Errc::ShapeMismatch, "matvec_transpose: vector length");
  VectorXd y = VectorXd::Zero(m.cols());
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& v = m.values();
  for (int r = 0; r < m.rows(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k) y[ci[k]] += v[k] * x[r];
  return y;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  out.precision(17);
  for (int r = 0; r < m.rows(); ++r)
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      out << r + 1 << ' ' << m.col_idx()[k] + 1 << ' ' << m.values()[k] << '\n';
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw Error(Errc::ParseError, "missing MatrixMarket banner");
  }
  const bool symmetric = line.find("symmetric") != std::string::npos;
  if (line.find("coordinate") == std::string::npos) {
    throw Error(Errc::ParseError, "only coordinate format is supported");
  }
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream head(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (!(head >> rows >> cols >> nnz)) throw Error(Errc::ParseError, "bad size line");
  std::vector<Triplet> t;
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw Error(Errc::ParseError, "truncated entry list");
    if (i < 1 || i > rows || j < 1 || j > cols) throw Error(Errc::ParseError, "entry out of range");
    t.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if (symmetric && i != j) t.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
  }
  return SparseMatrix::from_triplets(static_cast<int>(rows), static_cast<int>(cols), t);
}

struct SpdFactorization::Impl {
  Eigen::SparseMatrix<double> a;
  Eigen::CholmodSimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt;
};

SpdFactorization::SpdFactorization(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw Error(Errc::ShapeMismatch, "SPD factorization of a non-square matrix");
  impl_->a = a.to_eigen();
  if (a.rows() == 0) return;
  impl_->llt.compute(impl_->a);
  if (impl_->llt.info() != Eigen::Success) {
    throw Error(Errc::Indefinite, "Cholesky factorization failed (matrix not positive definite)");
  }
}

SpdFactorization::~SpdFactorization() = default;

int SpdFactorization::size() const noexcept { return static_cast<int>(impl_->a.rows()); }

VectorXd SpdFactorization::solve(const VectorXd& b, double tol) const {
  if (b.size() != impl_->a.rows()) throw Error(Errc::ShapeMismatch, "solve: rhs length");
  if (b.size() == 0) return b;
  const double bnorm = b.norm();
  if (bnorm == 0.0) return VectorXd::Zero(b.size());
  VectorXd x = impl_->llt.solve(b);
  VectorXd r = b - impl_->a * x;
  for (int it = 0; it < 3 && r.norm() > tol * bnorm; ++it) {
    x += impl_->llt.solve(r);
    r = b - impl_->a * x;
  }
  if (!(r.norm() <= tol * bnorm)) {
    throw Error(Errc::NotConverged, "SPD solve residual " + std::to_string(r.norm() / bnorm) +
                                        " above tolerance");
  }
  return x;
}

VectorXd solve_spd(const SparseMatrix& a, const VectorXd& b, double tol) {
  return SpdFactorization(a).solve(b, tol);
}

namespace {

VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

struct LanczosResult {
  double theta = 0.0;
  VectorXd x;
  double estimate = 0.0;
};

// Extreme Ritz pair of `op`, self-adjoint in the inner product <x, W y>.
// `dw` holds W-orthonormal columns that are projected out of every vector.
LanczosResult lanczos_extreme(const LinearOperator& op, const LinearOperator& wmul,
                              const VectorXd& start, const MatrixXd& dw, bool smallest,
                              int max_steps, double tol) {
  const int n = static_cast<int>(start.size());
  auto project = [&](VectorXd& v) {
    if (dw.cols() > 0) v -= dw * (dw.transpose() * wmul(v));
  };
  const int k_max = std::min<int>(max_steps, n - static_cast<int>(dw.cols()));
  MatrixXd q(n, std::max(k_max, 1));
  MatrixXd wq(n, std::max(k_max, 1));
  std::vector<double> alpha;
  std::vector<double> beta;
  VectorXd v = start;
  project(v);
  VectorXd wv = wmul(v);
  double norm = std::sqrt(std::max(v.dot(wv), 0.0));
  if (norm == 0.0) throw Error(Errc::NotConverged, "Lanczos start vector vanishes");
  LanczosResult best;
  for (int j = 0; j < k_max; ++j) {
    q.col(j) = v / norm;
    wq.col(j) = wv / norm;
    VectorXd w = op(q.col(j));
    project(w);
    alpha.push_back(w.dot(wq.col(j)));
    for (int pass = 0; pass < 2; ++pass) {
      const VectorXd c = wq.leftCols(j + 1).transpose() * w;
      w -= q.leftCols(j + 1) * c;
      project(w);
    }
    wv = wmul(w);
    const double b = std::sqrt(std::max(w.dot(wv), 0.0));
    const bool last = j + 1 == k_max;
    const bool exhausted = b <= 1e-14 * std::abs(alpha.back()) || b == 0.0;
    if (j % 4 == 3 || last || exhausted) {
      const int m = j + 1;
      MatrixXd t = MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
      for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
      const int idx = smallest ? 0 : m - 1;
      best.theta = es.eigenvalues()[idx];
      const VectorXd y = es.eigenvectors().col(idx);
      best.estimate = exhausted ? 0.0 : b * std::abs(y[m - 1]);
      best.x = q.leftCols(m) * y;
      const double scale = std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[m - 1]));
      if (exhausted || best.estimate <= tol * scale) return best;
    }
    if (last) break;
    beta.push_back(b);
    v = w;
    norm = b;
  }
  return best;
}

MatrixXd w_orthonormalize(const MatrixXd& d, const LinearOperator& wmul) {
  MatrixXd out = d;
  for (int j = 0; j < out.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) out.col(j) -= out.col(i) * out.col(i).dot(wmul(out.col(j)));
    }
    const double n = std::sqrt(out.col(j).dot(wmul(out.col(j))));
    if (n == 0.0) throw Error(Errc::InvalidInput, "deflation basis is rank deficient");
    out.col(j) /= n;
  }
  return out;
}

// Lowest eigenvalues of B^T B against diag(w) on the complement of `dw`; only
// used as a one-sided rank probe (Ritz values bound the minimum from above).
double kernel_probe_ratio(const SparseMatrix& b, const VectorXd& w, const MatrixXd& deflate) {
  const int n = b.cols();
  if (n == 0 || n - deflate.cols() <= 0) return 1.0;
  if (n <= 1000) {
    const MatrixXd bd = b.to_dense();
    VectorXd s = w.cwiseSqrt().cwiseInverse();
    MatrixXd g = s.asDiagonal() * (bd.transpose() * bd) * s.asDiagonal();
    if (deflate.cols() > 0) {
      MatrixXd d = w.cwiseSqrt().asDiagonal() * deflate;
      Eigen::HouseholderQR<MatrixXd> qr(d);
      const MatrixXd qfull = qr.householderQ() * MatrixXd::Identity(n, n);
      const MatrixXd z = qfull.rightCols(n - deflate.cols());
      g = z.transpose() * g * z;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    return top > 0.0 ? es.eigenvalues().minCoeff() / top : 0.0;
  }
  const VectorXd winv = w.cwiseInverse();
  LinearOperator op = [&](const VectorXd& x) -> VectorXd {
    return winv.cwiseProduct(matvec_transpose(b, matvec(b, x)));
  };
  LinearOperator wmul = [&](const VectorXd& x) -> VectorXd { return w.cwiseProduct(x); };
  const MatrixXd dw = w_orthonormalize(deflate, wmul);
  const VectorXd start = random_vector(n, 4242u);
  const LanczosResult lo = lanczos_extreme(op, wmul, start, dw, true, 150, 1e-6);
  const LanczosResult hi = lanczos_extreme(op, wmul, start, dw, false, 40, 1e-3);
  return hi.theta > 0.0 ? lo.theta / hi.theta : 0.0;
}

}  // namespace

SaddleSolution solve_saddle(const SparseMatrix& a, const SparseMatrix& b, const VectorXd& f,
                            const VectorXd& g, const SaddleOptions& options) {
  const int nu = a.rows();
  const int np = b.cols();
  if (a.cols() != nu || b.rows() != nu || f.size() != nu || g.size() != np) {
    throw Error(Errc::ShapeMismatch, "solve_saddle: inconsistent block sizes");
  }
  VectorXd w = options.pressure_weights.size() == np ? options.pressure_weights
                                                      : VectorXd::Ones(np);
  SaddleSolution out;
  out.u = VectorXd::Zero(nu);
  out.p = VectorXd::Zero(np);
  const SpdFactorization fact(a);
  if (np == 0) {
    out.u = fact.solve(f);
    const double fn = f.norm();
    out.relative_residual = fn > 0.0 ? (f - matvec(a, out.u)).norm() / fn : 0.0;
    return out;
  }

  MatrixXd nullspace;
  if (options.pressure_nullspace) nullspace = VectorXd::Ones(np);
  if (kernel_probe_ratio(b, w, nullspace) <= 1e-12) {
    throw Error(Errc::SingularSaddle,
                "pressure Schur complement is singular (inf-sup condition fails)");
  }

  VectorXd gg = g;
  if (options.pressure_nullspace) gg.array() -= gg.mean();

  const double inner_tol = 1e-13;
  auto schur = [&](const VectorXd& p) -> VectorXd {
    return matvec_transpose(b, fact.solve(matvec(b, p), inner_tol));
  };
  const VectorXd a_inv_f = fact.solve(f, inner_tol);
  VectorXd rhs = matvec_transpose(b, a_inv_f) - gg;
  if (options.pressure_nullspace) rhs.array() -= rhs.mean();

  // PCG with diag(w) preconditioner. Every residual stays orthogonal to the
  // constants, so the iterates stay w-weighted mean free.
  const double rhs_norm = rhs.norm();
  VectorXd p = VectorXd::Zero(np);
  if (rhs_norm > 0.0) {
    VectorXd r = rhs;
    VectorXd z = r.cwiseQuotient(w);
    VectorXd d = z;
    double rz = r.dot(z);
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      if (r.norm() <= 1e-13 * rhs_norm) break;
      VectorXd sd = schur(d);
      if (options.pressure_nullspace) sd.array() -= sd.mean();
      const double curv = d.dot(sd);
      if (!(curv > 0.0)) {
        throw Error(Errc::SingularSaddle, "Schur complement breakdown in CG");
      }
      const double step = rz / curv;
      p += step * d;
      r -= step * sd;
      z = r.cwiseQuotient(w);
      const double rz_new = r.dot(z);
      d = z + (rz_new / rz) * d;
      rz = rz_new;
    }
    out.iterations = it;
  }
  if (options.pressure_nullspace) p.array() -= p.dot(w) / w.sum();
  out.p = p;
  out.u = fact.solve(f - matvec(b, p), inner_tol);

  const VectorXd r1 = f - matvec(a, out.u) - matvec(b, out.p);
  VectorXd r2 = gg - matvec_transpose(b, out.u);
  if (options.pressure_nullspace) r2.array() -= r2.mean();
  const double denom = std::sqrt(f.squaredNorm() + gg.squaredNorm());
  const double num = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  out.relative_residual = denom > 0.0 ? num / denom : num;
  if (!(out.relative_residual <= options.tol)) {
    throw Error(Errc::NotConverged, "saddle residual " + std::to_string(out.relative_residual) +
                                        " above tolerance");
  }
  return out;
}

EigenPair smallest_generalized_eigenpair_dense(const MatrixXd& s, const MatrixXd& m,
                                               const MatrixXd& deflate) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n || m.rows() != n || m.cols() != n ||
      (deflate.cols() > 0 && deflate.rows() != n)) {
    throw Error(Errc::ShapeMismatch, "eigenproblem shapes");
  }
  const int k = static_cast<int>(deflate.cols());
  if (n - k <= 0) throw Error(Errc::InvalidInput, "deflation leaves an empty space");
  MatrixXd z;
  if (k > 0) {
    const MatrixXd md = m * deflate;
    Eigen::HouseholderQR<MatrixXd> qr(md);
    const MatrixXd qfull = qr.householderQ() * MatrixXd::Identity(n, n);
    z = qfull.rightCols(n - k);
  } else {
    z = MatrixXd::Identity(n, n);
  }
  MatrixXd sz = z.transpose() * s * z;
  MatrixXd mz = z.transpose() * m * z;
  sz = 0.5 * (sz + sz.transpose());
  mz = 0.5 * (mz + mz.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(sz, mz);
  if (es.info() != Eigen::Success) throw Error(Errc::NotConverged, "dense generalized eigensolver failed");
  EigenPair out;
  out.value = es.eigenvalues()[0];
  out.vector = z * es.eigenvectors().col(0);
  const VectorXd mv = m * out.vector;
  out.vector /= std::sqrt(out.vector.dot(mv));
  const VectorXd mv2 = m * out.vector;
  out.relative_residual = (s * out.vector - out.value * mv2).norm() / mv2.norm();
  return out;
}

EigenPair smallest_generalized_eigenpair(const SparseMatrix& s, const SparseMatrix& m,
                                         const MatrixXd& deflate, const EigenOptions& options) {
  const int n = s.rows();
  if (n <= options.dense_limit) {
    return smallest_generalized_eigenpair_dense(s.to_dense(), m.to_dense(), deflate);
  }
  if (deflate.cols() > 0) {
    throw Error(Errc::InvalidInput, "shift-invert path does not support deflation");
  }
  // Largest eigenvalue of S^{-1} M, self-adjoint in the M inner product.
  const SpdFactorization fact(s);
  LinearOperator wmul = [&](const VectorXd& x) -> VectorXd { return matvec(m, x); };
  LinearOperator op = [&](const VectorXd& x) -> VectorXd { return fact.solve(matvec(m, x), 1e-12); };
  VectorXd start = random_vector(n, options.seed);
  EigenPair out;
  double internal_tol = 1e-11;
  for (int restart = 0; restart < 8; ++restart) {
    const LanczosResult r =
        lanczos_extreme(op, wmul, start, MatrixXd(), false, options.max_steps, internal_tol);
    out.value = 1.0 / r.theta;
    out.vector = r.x;
    const VectorXd mv = matvec(m, out.vector);
    out.vector /= std::sqrt(out.vector.dot(mv));
    const VectorXd mv2 = matvec(m, out.vector);
    out.relative_residual = (matvec(s, out.vector) - out.value * mv2).norm() / mv2.norm();
    if (out.relative_residual <= options.tol) return out;
    start = out.vector;
    internal_tol *= 0.1;
  }
  throw Error(Errc::NotConverged, "shift-invert Lanczos did not reach the eigen residual tolerance");
}

EigenPair smallest_eigenpair_operator(const LinearOperator& apply_s, const VectorXd& m_diag,
                                      const MatrixXd& deflate, const EigenOptions& options) {
  const int n = static_cast<int>(m_diag.size());
  const VectorXd minv = m_diag.cwiseInverse();
  LinearOperator wmul = [&](const VectorXd& x) -> VectorXd { return m_diag.cwiseProduct(x); };
  LinearOperator op = [&](const VectorXd& x) -> VectorXd { return minv.cwiseProduct(apply_s(x)); };
  const MatrixXd dw = deflate.cols() > 0 ? w_orthonormalize(deflate, wmul) : MatrixXd();
  VectorXd start = random_vector(n, options.seed);
  EigenPair out;
  double internal_tol = 1e-11;
  for (int restart = 0; restart < 12; ++restart) {
    const LanczosResult r =
        lanczos_extreme(op, wmul, start, dw, true, options.max_steps, internal_tol);
    out.value = r.theta;
    out.vector = r.x;
    out.vector /= std::sqrt(out.vector.dot(wmul(out.vector)));
    const VectorXd mv = wmul(out.vector);
    out.relative_residual = (apply_s(out.vector) - out.value * mv).norm() / mv.norm();
    if (out.relative_residual <= options.tol) return out;
    start = out.vector;
    internal_tol *= 0.1;
  }
  throw Error(Errc::NotConverged, "Lanczos did not reach the eigen residual tolerance");
}

}  // namespace ks3d
