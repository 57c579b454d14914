#include "romtopt/sparse.hpp"

#include <cholmod.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace romtopt {

AssemblyPattern::AssemblyPattern(int size, int dofs_per_elem, std::span<const int> scatter)
    : size_(size), k_(dofs_per_elem), scatter_(scatter.begin(), scatter.end()) {
  if (size < 0 || dofs_per_elem < 1 || scatter.size() % dofs_per_elem != 0) {
    throw std::invalid_argument("inconsistent assembly scatter map");
  }
  elem_count_ = static_cast<int>(scatter.size() / dofs_per_elem);

  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(scatter.size() * k_);
  for (int e = 0; e < elem_count_; ++e) {
    auto dofs = element_scatter(e);
    for (int a = 0; a < k_; ++a) {
      if (dofs[a] >= size_) throw std::invalid_argument("scatter index out of range");
      if (dofs[a] < 0) continue;
      for (int b = 0; b < k_; ++b) {
        if (dofs[b] >= 0) entries.emplace_back(dofs[a], dofs[b], 0.0);
      }
    }
  }
  structure_.resize(size_, size_);
  structure_.setFromTriplets(entries.begin(), entries.end());
  structure_.makeCompressed();

  const int* outer = structure_.outerIndexPtr();
  const int* inner = structure_.innerIndexPtr();
  slots_.assign(static_cast<std::size_t>(elem_count_) * k_ * k_, -1);
  for (int e = 0; e < elem_count_; ++e) {
    auto dofs = element_scatter(e);
    for (int a = 0; a < k_; ++a) {
      if (dofs[a] < 0) continue;
      for (int b = 0; b < k_; ++b) {
        if (dofs[b] < 0) continue;
        const int col = dofs[b];
        const int* first = inner + outer[col];
        const int* last = inner + outer[col + 1];
        const int* it = std::lower_bound(first, last, dofs[a]);
        slots_[(static_cast<std::size_t>(e) * k_ + a) * k_ + b] = static_cast<int>(it - inner);
      }
    }
  }
}

SparseMatrix AssemblyPattern::assemble(const Matrix& elem_matrix,
                                       std::span<const double> scales) const {
  if (elem_matrix.rows() != k_ || elem_matrix.cols() != k_) {
    throw std::invalid_argument("element matrix has wrong dimensions");
  }
  if (static_cast<int>(scales.size()) != elem_count_) {
    throw std::invalid_argument("expected " + std::to_string(elem_count_) +
                                " element scale factors, got " + std::to_string(scales.size()));
  }
  SparseMatrix A = structure_;
  double* values = A.valuePtr();
  const int kk = k_ * k_;
  for (int e = 0; e < elem_count_; ++e) {
    const double s = scales[e];
    const int* slot = slots_.data() + static_cast<std::size_t>(e) * kk;
    for (int a = 0; a < k_; ++a) {
      for (int b = 0; b < k_; ++b) {
        const int idx = slot[a * k_ + b];
        if (idx >= 0) values[idx] += s * elem_matrix(a, b);
      }
    }
  }
  return A;
}

namespace {

cholmod_sparse view_upper(const SparseMatrix& A) {
  cholmod_sparse s{};
  s.nrow = static_cast<size_t>(A.rows());
  s.ncol = static_cast<size_t>(A.cols());
  s.nzmax = static_cast<size_t>(A.nonZeros());
  s.p = const_cast<int*>(A.outerIndexPtr());
  s.i = const_cast<int*>(A.innerIndexPtr());
  s.nz = nullptr;
  s.x = const_cast<double*>(A.valuePtr());
  s.z = nullptr;
  s.stype = 1;
  s.itype = CHOLMOD_INT;
  s.xtype = CHOLMOD_REAL;
  s.dtype = CHOLMOD_DOUBLE;
  s.sorted = 1;
  s.packed = 1;
  return s;
}

void configure(cholmod_common& c) {
  cholmod_start(&c);
  c.nmethods = 1;
  c.method[0].ordering = CHOLMOD_AMD;
  c.postorder = 1;
  c.final_ll = 1;
  c.supernodal = CHOLMOD_AUTO;
  c.print = 0;
  c.error_handler = nullptr;
}

void require_compressed(const SparseMatrix& A) {
  if (!A.isCompressed()) throw std::invalid_argument("sparse matrix must be compressed");
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix must be square");
}

}  // namespace

struct SymbolicFactorization::Impl {
  cholmod_common common{};
  cholmod_factor* factor = nullptr;
};

SymbolicFactorization::SymbolicFactorization(const SparseMatrix& A)
    : impl_(std::make_unique<Impl>()), n_(static_cast<int>(A.rows())) {
  require_compressed(A);
  configure(impl_->common);
  cholmod_sparse view = view_upper(A);
  impl_->factor = cholmod_analyze(&view, &impl_->common);
  if (impl_->factor == nullptr) {
    cholmod_finish(&impl_->common);
    throw std::runtime_error("symbolic analysis failed");
  }
  outer_.assign(A.outerIndexPtr(), A.outerIndexPtr() + A.outerSize() + 1);
  inner_.assign(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
}

SymbolicFactorization::~SymbolicFactorization() {
  if (impl_) {
    cholmod_free_factor(&impl_->factor, &impl_->common);
    cholmod_finish(&impl_->common);
  }
}

bool SymbolicFactorization::matches(const SparseMatrix& A) const {
  if (A.rows() != n_ || A.nonZeros() != static_cast<long>(inner_.size())) return false;
  return std::equal(outer_.begin(), outer_.end(), A.outerIndexPtr()) &&
         std::equal(inner_.begin(), inner_.end(), A.innerIndexPtr());
}

struct SpdFactorization::Impl {
  cholmod_common common{};
  cholmod_factor* factor = nullptr;
  ~Impl() {
    cholmod_free_factor(&factor, &common);
    cholmod_finish(&common);
  }
};

SpdFactorization::SpdFactorization(const SparseMatrix& A,
                                   std::shared_ptr<const SymbolicFactorization> symbolic)
    : impl_(std::make_unique<Impl>()), symbolic_(std::move(symbolic)), n_(static_cast<int>(A.rows())) {
  require_compressed(A);
  if (!symbolic_ || !symbolic_->matches(A)) {
    symbolic_ = std::make_shared<const SymbolicFactorization>(A);
  }
  configure(impl_->common);
  cholmod_common& c = impl_->common;
  impl_->factor = cholmod_copy_factor(symbolic_->impl_->factor, &c);
  cholmod_sparse view = view_upper(A);
  cholmod_factorize(&view, impl_->factor, &c);
  const cholmod_factor* L = impl_->factor;
  if (c.status == CHOLMOD_NOT_POSDEF || static_cast<long>(L->minor) < n_) {
    throw IndefiniteMatrixError("matrix is not positive definite (non-positive pivot at column " +
                                std::to_string(L->minor) + ")");
  }
  if (c.status < CHOLMOD_OK) throw std::runtime_error("sparse Cholesky factorization failed");

  // Pivot d_j = L_jj^2 against the diagonal entry it was eliminated from.
  const Vector diag = A.diagonal();
  const int* perm = static_cast<const int*>(L->Perm);
  const double* x = static_cast<const double*>(L->x);
  double ratio = std::numeric_limits<double>::infinity();
  auto check = [&](int col, double ljj) {
    const double a = diag[perm[col]];
    ratio = std::min(ratio, a > 0.0 ? ljj * ljj / a : 0.0);
  };
  if (L->is_super) {
    const int* super = static_cast<const int*>(L->super);
    const int* pi = static_cast<const int*>(L->pi);
    const int* px = static_cast<const int*>(L->px);
    for (std::size_t s = 0; s < L->nsuper; ++s) {
      const int nsrow = pi[s + 1] - pi[s];
      for (int jj = 0; jj < super[s + 1] - super[s]; ++jj) {
        check(super[s] + jj, x[px[s] + jj + static_cast<std::size_t>(jj) * nsrow]);
      }
    }
  } else {
    const int* p = static_cast<const int*>(L->p);
    for (int j = 0; j < n_; ++j) check(j, x[p[j]]);
  }
  min_pivot_ratio_ = n_ > 0 ? ratio : 1.0;
  if (min_pivot_ratio_ < kSingularPivotRatio) {
    throw IndefiniteMatrixError("matrix is numerically singular (pivot ratio " +
                                std::to_string(min_pivot_ratio_) + ")");
  }
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

long SpdFactorization::factor_nonzeros() const {
  const cholmod_factor* L = impl_->factor;
  if (L->is_super) return static_cast<long>(L->xsize);
  long nnz = 0;
  const int* cnt = static_cast<const int*>(L->nz);
  for (int j = 0; j < n_; ++j) nnz += cnt[j];
  return nnz;
}

Vector SpdFactorization::solve(const Vector& rhs) const {
  if (rhs.size() != n_) {
    throw std::invalid_argument("right-hand side has size " + std::to_string(rhs.size()) +
                                ", expected " + std::to_string(n_));
  }
  if (n_ == 0) return Vector();
  cholmod_common c;
  configure(c);
  cholmod_dense b{};
  b.nrow = static_cast<size_t>(n_);
  b.ncol = 1;
  b.nzmax = static_cast<size_t>(n_);
  b.d = static_cast<size_t>(n_);
  b.x = const_cast<double*>(rhs.data());
  b.z = nullptr;
  b.xtype = CHOLMOD_REAL;
  b.dtype = CHOLMOD_DOUBLE;
  cholmod_dense* x = cholmod_solve(CHOLMOD_A, impl_->factor, &b, &c);
  if (x == nullptr) {
    cholmod_finish(&c);
    throw std::runtime_error("sparse triangular solve failed");
  }
  Vector out = Eigen::Map<const Vector>(static_cast<const double*>(x->x), n_);
  cholmod_free_dense(&x, &c);
  cholmod_finish(&c);
  return out;
}

SpdFactorization factorize(const SparseMatrix& A,
                           std::shared_ptr<const SymbolicFactorization> symbolic) {
  return SpdFactorization(A, std::move(symbolic));
}

}  // namespace romtopt
