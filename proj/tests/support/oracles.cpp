#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace oracle {

std::array<int, 4> Grid::elem_nodes(int e) const {
  const int i = e % nx;
  const int j = e / nx;
  return {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
}

namespace {

const double kGauss = 1.0 / std::sqrt(3.0);

// Reference square [-1,1]^2, nodes (-1,-1), (1,-1), (1,1), (-1,1).
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

double shape(int a, double xi, double eta) { return 0.25 * (1 + kXi[a] * xi) * (1 + kEta[a] * eta); }
double dshape_dxi(int a, double eta) { return 0.25 * kXi[a] * (1 + kEta[a] * eta); }
double dshape_deta(int a, double xi) { return 0.25 * kEta[a] * (1 + kXi[a] * xi); }

template <class F>
Matrix integrate(int n, double h, F&& integrand) {
  Matrix out = Matrix::Zero(n, n);
  const double jac = h * h / 4.0;
  for (double xi : {-kGauss, kGauss}) {
    for (double eta : {-kGauss, kGauss}) out += jac * integrand(xi, eta);
  }
  return out;
}

}  // namespace

Matrix quadrature_stiffness(double E0, double nu, double h, bool plane_strain) {
  Eigen::Matrix3d D;
  if (plane_strain) {
    const double c = E0 / ((1 + nu) * (1 - 2 * nu));
    D << c * (1 - nu), c * nu, 0, c * nu, c * (1 - nu), 0, 0, 0, c * (1 - 2 * nu) / 2;
  } else {
    const double c = E0 / (1 - nu * nu);
    D << c, c * nu, 0, c * nu, c, 0, 0, 0, c * (1 - nu) / 2;
  }
  return integrate(8, h, [&](double xi, double eta) {
    Matrix B = Matrix::Zero(3, 8);
    for (int a = 0; a < 4; ++a) {
      const double dx = dshape_dxi(a, eta) * 2.0 / h;
      const double dy = dshape_deta(a, xi) * 2.0 / h;
      B(0, 2 * a) = dx;
      B(1, 2 * a + 1) = dy;
      B(2, 2 * a) = dy;
      B(2, 2 * a + 1) = dx;
    }
    return Matrix(B.transpose() * D * B);
  });
}

Matrix quadrature_laplacian(double h) {
  return integrate(4, h, [&](double xi, double eta) {
    Matrix G(2, 4);
    for (int a = 0; a < 4; ++a) {
      G(0, a) = dshape_dxi(a, eta) * 2.0 / h;
      G(1, a) = dshape_deta(a, xi) * 2.0 / h;
    }
    return Matrix(G.transpose() * G);
  });
}

Matrix quadrature_mass(double h) {
  return integrate(4, h, [&](double xi, double eta) {
    Vector N(4);
    for (int a = 0; a < 4; ++a) N[a] = shape(a, xi, eta);
    return Matrix(N * N.transpose());
  });
}

Matrix vector_scatter(const Grid& g, int e) {
  Matrix P = Matrix::Zero(2 * g.nodes(), 8);
  const auto nodes = g.elem_nodes(e);
  for (int a = 0; a < 4; ++a) {
    P(2 * nodes[a], 2 * a) = 1.0;
    P(2 * nodes[a] + 1, 2 * a + 1) = 1.0;
  }
  return P;
}

Matrix scalar_scatter(const Grid& g, int e) {
  Matrix Q = Matrix::Zero(g.nodes(), 4);
  const auto nodes = g.elem_nodes(e);
  for (int a = 0; a < 4; ++a) Q(nodes[a], a) = 1.0;
  return Q;
}

Matrix selector(int n, const std::vector<int>& keep) {
  Matrix S = Matrix::Zero(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t i = 0; i < keep.size(); ++i) S(static_cast<Eigen::Index>(i), keep[i]) = 1.0;
  return S;
}

Matrix dense_stiffness(const Grid& g, const Matrix& Ke, const Vector& scale, const std::vector<int>& free) {
  Matrix K = Matrix::Zero(2 * g.nodes(), 2 * g.nodes());
  for (int e = 0; e < g.elems(); ++e) {
    const Matrix P = vector_scatter(g, e);
    K += scale[e] * P * Ke * P.transpose();
  }
  const Matrix S = selector(2 * g.nodes(), free);
  return S * K * S.transpose();
}

Matrix dense_helmholtz(const Grid& g, double r) {
  const Matrix He = r * r * quadrature_laplacian(g.h) + quadrature_mass(g.h);
  Matrix H = Matrix::Zero(g.nodes(), g.nodes());
  for (int e = 0; e < g.elems(); ++e) {
    const Matrix Q = scalar_scatter(g, e);
    H += Q * He * Q.transpose();
  }
  return H;
}

Matrix dense_filter(const Grid& g, double r) {
  const Matrix H = dense_helmholtz(g, r);
  const Vector be = quadrature_mass(g.h) * Vector::Ones(4);
  Matrix B = Matrix::Zero(g.nodes(), g.elems());
  Matrix Avg = Matrix::Zero(g.elems(), g.nodes());
  for (int e = 0; e < g.elems(); ++e) {
    const Matrix Q = scalar_scatter(g, e);
    B.col(e) = Q * be;
    Avg.row(e) = 0.25 * (Q * Vector::Ones(4)).transpose();
  }
  return Avg * H.fullPivLu().solve(B);
}

Cantilever cantilever(int nx, int ny, double h) {
  Cantilever c;
  c.grid = {nx, ny, h};
  const Grid& g = c.grid;
  Vector f = Vector::Zero(2 * g.nodes());
  for (int j = 0; j <= ny; ++j) {
    const double w = (j == 0 || j == ny) ? h / 2 : h;
    f[2 * g.node(nx, j) + 1] -= w;
  }
  for (int n = 0; n < g.nodes(); ++n) {
    if (n % (nx + 1) == 0) continue;
    c.free.push_back(2 * n);
    c.free.push_back(2 * n + 1);
  }
  c.load = selector(2 * g.nodes(), c.free) * f;
  return c;
}

DenseModel dense_model(int nx, int ny, double h, double r, const Vector& psi) {
  DenseModel d;
  d.problem = cantilever(nx, ny, h);
  const Grid& g = d.problem.grid;
  d.filter = dense_filter(g, r);
  d.rho = d.filter * psi;
  d.alpha.resize(g.elems());
  d.dalpha.resize(g.elems());
  for (int e = 0; e < g.elems(); ++e) {
    d.alpha[e] = alpha(d.rho[e]);
    d.dalpha[e] = dalpha(d.rho[e]);
  }
  const Matrix Ke = quadrature_stiffness(1.0, 0.3, h);
  d.K = dense_stiffness(g, Ke, d.alpha, d.problem.free);
  const Matrix S = selector(2 * g.nodes(), d.problem.free);
  for (int e = 0; e < g.elems(); ++e) {
    const Matrix P = S * vector_scatter(g, e);
    d.Kq.push_back(P * Ke * P.transpose());
  }
  return d;
}

RomErrorCheck rom_error_check(const DenseModel& m, const Matrix& phi, bool compliance) {
  RomErrorCheck c;
  const Matrix& K = m.K;
  const Vector& f = m.problem.load;
  const Eigen::Index N = K.rows();
  const int ne = static_cast<int>(m.rho.size());
  const Matrix Kinv = K.inverse();
  const Matrix Khat = phi.transpose() * K * phi;
  auto galerkin = [&](const Vector& rhs) -> Vector { return phi * Khat.ldlt().solve(phi.transpose() * rhs); };
  auto dj_du = [&](const Vector& u) -> Vector { return compliance ? f : Vector(f + u); };
  auto j = [&](const Vector& u) { return compliance ? f.dot(u) : f.dot(u) + 0.5 * u.squaredNorm() + m.rho.squaredNorm(); };
  // Hessian of j in u; the mean-value integrals are exact for a constant Hessian.
  const Matrix Hjj = compliance ? Matrix(Matrix::Zero(N, N)) : Matrix(Matrix::Identity(N, N));

  c.u = Kinv * f;
  c.u_k = galerkin(f);
  c.lambda = Kinv * dj_du(c.u);
  c.lambda_k = galerkin(dj_du(c.u_k));
  c.J = j(c.u);
  c.J_k = j(c.u_k);
  const Vector r = K * c.u_k - f;
  const Vector r_adj = K * c.lambda_k - dj_du(c.u_k);
  c.residual = r.norm();
  c.adjoint_residual = r_adj.norm();
  c.sigma_min = sigma_min_spd(K);

  auto energy = [&](const Vector& v) { return std::sqrt(v.dot(K * v)); };
  c.primal = {energy(c.u - c.u_k), c.residual / std::sqrt(c.sigma_min)};

  const Matrix A = spd_power(K, -0.5) * Hjj * Kinv;
  const Matrix B = Kinv * (0.5 * Hjj) * Kinv;
  c.adjoint = {energy(c.lambda - c.lambda_k), c.adjoint_residual / std::sqrt(c.sigma_min) + sigma_max(A) * c.residual};
  c.output = {std::abs(c.J - c.J_k),
              c.residual * c.adjoint_residual / c.sigma_min + sigma_max(B) * c.residual * c.residual};
  c.output_simple = {std::abs(c.J - c.J_k), c.lambda.norm() * c.residual + sigma_max(B) * c.residual * c.residual};

  // Gradients by the adjoint formula with the true and the reduced states.
  auto gradient = [&](const Vector& u, const Vector& lam) {
    Vector s(ne);
    for (int q = 0; q < ne; ++q) s[q] = (compliance ? 0.0 : 2.0 * m.rho[q]) - m.dalpha[q] * u.dot(m.Kq[q] * lam);
    return Vector(m.filter.transpose() * s);
  };
  c.grad = gradient(c.u, c.lambda);
  c.grad_k = gradient(c.u_k, c.lambda_k);

  // G_qs = lambda_k^T d^2 r / d rho_q d u_s, R_qi = d r_i / d rho_q at u*.
  Matrix G(ne, N), R(ne, N);
  for (int q = 0; q < ne; ++q) {
    G.row(q) = m.dalpha[q] * (m.Kq[q] * c.lambda_k).transpose();
    R.row(q) = m.dalpha[q] * (m.Kq[q] * c.u).transpose();
  }
  const Matrix C = -m.filter.transpose() * (-G - R * Kinv * Hjj) * Kinv;
  const Matrix D = m.filter.transpose() * R * Kinv;
  c.gradient = {(c.grad - c.grad_k).norm(), sigma_max(C) * c.residual + sigma_max(D) * c.adjoint_residual};
  return c;
}

double alpha(double rho, double rho_min, double p) { return rho_min + (1 - rho_min) * std::pow(rho, p); }
double dalpha(double rho, double rho_min, double p) { return (1 - rho_min) * p * std::pow(rho, p - 1); }

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double step) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    g[i] = (f(xp) - f(xm)) / (2 * step);
  }
  return g;
}

Vector projection_by_enumeration(const Vector& y, const Vector& w, double V) {
  const int n = static_cast<int>(y.size());
  int patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;
  Vector best;
  double best_val = std::numeric_limits<double>::infinity();
  for (int pat = 0; pat < patterns; ++pat) {
    std::vector<int> state(n);  // 0 free, 1 at lower bound, 2 at upper bound
    for (int i = 0, p = pat; i < n; ++i, p /= 3) state[i] = p % 3;
    for (bool volume_active : {false, true}) {
      double lam = 0.0;
      if (volume_active) {
        double fixed = 0.0, num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
          if (state[i] == 2) fixed += w[i];
          if (state[i] == 0) {
            num += w[i] * y[i];
            den += w[i] * w[i];
          }
        }
        if (den == 0.0) continue;
        lam = (num + fixed - V) / den;
        if (lam < 0.0) continue;
      }
      Vector x(n);
      for (int i = 0; i < n; ++i) x[i] = state[i] == 0 ? y[i] - lam * w[i] : (state[i] == 1 ? 0.0 : 1.0);
      bool feasible = w.dot(x) <= V + 1e-12;
      for (int i = 0; i < n && feasible; ++i) feasible = x[i] >= -1e-15 && x[i] <= 1 + 1e-15;
      if (!feasible) continue;
      const double val = 0.5 * (x - y).squaredNorm();
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
  }
  return best;
}

Matrix spd_power(const Matrix& A, double power) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Vector d = es.eigenvalues().array().pow(power);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double sigma_max(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()[0];
}

double sigma_min_spd(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  return es.eigenvalues()[0];
}

Vector uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace oracle
