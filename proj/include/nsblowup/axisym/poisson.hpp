#pragma once

// Dirichlet solves of (alpha I - beta L3) u = f on the unknown nodes of a
// grid. alpha = 0, beta = 1 is the stream-function Poisson problem
// -L3 phi1 = omega1; alpha = 1, beta = c gives the implicit diffusion step.

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "nsblowup/axisym/operators.hpp"

namespace nsblowup::axisym {

enum class PoissonMethod { gauss_seidel_sor, conjugate_gradient_like, sparse_lu };

inline std::string_view to_string(PoissonMethod m) {
  switch (m) {
    case PoissonMethod::gauss_seidel_sor: return "gauss_seidel_sor";
    case PoissonMethod::conjugate_gradient_like: return "conjugate_gradient_like";
    case PoissonMethod::sparse_lu: return "sparse_lu";
  }
  return "?";
}

inline PoissonMethod poisson_method_from_string(std::string_view s) {
  for (auto m : {PoissonMethod::gauss_seidel_sor, PoissonMethod::conjugate_gradient_like, PoissonMethod::sparse_lu})
    if (to_string(m) == s) return m;
  throw InvalidParams("unknown poisson method '" + std::string(s) + "'");
}

struct PoissonConfig {
  PoissonMethod method = PoissonMethod::sparse_lu;
  double tol = 1e-10;
  int max_iters = 50000;
  double sor_omega = 1.7;

  void validate() const {
    if (!(tol > 0.0)) throw InvalidParams("poisson tol must be positive");
    if (!(sor_omega > 0.0 && sor_omega < 2.0)) throw InvalidParams("sor_omega must lie in (0, 2)");
    if (max_iters < 1) throw InvalidParams("poisson max_iters must be positive");
  }
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  ///< relative, see EllipticSolver::relative_residual
};

class EllipticSolver {
 public:
  EllipticSolver(const Grid2D& g, double alpha, double beta, PoissonConfig cfg)
      : g_(g), alpha_(alpha), beta_(beta), cfg_(cfg), index_(static_cast<std::size_t>(g.size()), -1) {
    cfg_.validate();
    int n = 0;
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nz; ++j)
        if (g.is_unknown(i, j)) index_[flat(i, j)] = n++;
    unknowns_ = n;
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nz; ++j)
        if (g.is_unknown(i, j)) diag_max_ = std::max(diag_max_, std::abs(stencil(i, j)[0].coef));
    if (cfg_.method != PoissonMethod::gauss_seidel_sor) factor();
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const SolveStats& last() const { return last_; }

  /// Solves with Dirichlet data taken from the non-unknown nodes of `bc`.
  /// `guess` seeds the SOR iteration.
  Field2D solve(const Field2D& f, const Field2D& bc, const Field2D* guess = nullptr) {
    Field2D u = guess ? *guess : bc;
    copy_boundary(g_, bc, u);
    if (cfg_.method == PoissonMethod::gauss_seidel_sor) {
      sor(u, f);
    } else {
      Eigen::VectorXd b(unknowns_);
      for (int i = 0; i < g_.nr; ++i)
        for (int j = 0; j < g_.nz; ++j) {
          const int k = index_[flat(i, j)];
          if (k < 0) continue;
          double rhs = f(i, j);
          for (const auto& e : stencil(i, j))
            if (e.coef != 0.0 && index_[flat(e.i, e.j)] < 0) rhs -= e.coef * u(e.i, e.j);
          b[k] = rhs;
        }
      Eigen::VectorXd x;
      if (lu_) {
        x = lu_->solve(b);
        last_.iterations = 1;
      } else {
        x = iter_->solve(b);
        last_.iterations = static_cast<int>(iter_->iterations());
      }
      for (int i = 0; i < g_.nr; ++i)
        for (int j = 0; j < g_.nz; ++j)
          if (const int k = index_[flat(i, j)]; k >= 0) u(i, j) = x[k];
    }
    last_.residual = relative_residual(u, f);
    if (!(last_.residual <= cfg_.tol))
      throw NoConvergence(std::string("elliptic solve (") + std::string(to_string(cfg_.method)) +
                              ") missed its tolerance",
                          last_.iterations, last_.residual);
    return u;
  }

  /// max |f - A u| over unknowns, divided by max|f| + max|diag| * max|u|.
  double relative_residual(const Field2D& u, const Field2D& f) const {
    double res = 0.0;
    for (int i = 0; i < g_.nr; ++i)
      for (int j = 0; j < g_.nz; ++j)
        if (g_.is_unknown(i, j)) res = std::max(res, std::abs(f(i, j) - apply(u, i, j)));
    double fmax = 0.0;
    for (int i = 0; i < g_.nr; ++i)
      for (int j = 0; j < g_.nz; ++j)
        if (g_.is_unknown(i, j)) fmax = std::max(fmax, std::abs(f(i, j)));
    const double scale = fmax + diag_max_ * u.max_abs();
    return scale > 0.0 ? res / scale : res;
  }

  /// (alpha I - beta L3) u at an unknown node.
  double apply(const Field2D& u, int i, int j) const {
    double s = 0.0;
    for (const auto& e : stencil(i, j)) s += e.coef * u(e.i, e.j);
    return s;
  }

 private:
  struct Entry {
    int i = 0;
    int j = 0;
    double coef = 0.0;
  };

  std::size_t flat(int i, int j) const { return static_cast<std::size_t>(i) * g_.nz + j; }

  /// Centre first, then neighbours.
  std::array<Entry, 5> stencil(int i, int j) const {
    const double hr2 = g_.hr() * g_.hr(), hz2 = g_.hz() * g_.hz();
    std::array<Entry, 5> s{};
    if (i == 0 && g_.has_axis()) {
      s[0] = {i, j, alpha_ + beta_ * (8.0 / hr2 + 2.0 / hz2)};
      s[1] = {i + 1, j, -beta_ * 8.0 / hr2};
      s[2] = {i, j, 0.0};
    } else {
      const double r = g_.r(i);
      const double c = 3.0 / (2.0 * r * g_.hr());
      s[0] = {i, j, alpha_ + beta_ * (2.0 / hr2 + 2.0 / hz2)};
      s[1] = {i + 1, j, -beta_ * (1.0 / hr2 + c)};
      s[2] = {i - 1, j, -beta_ * (1.0 / hr2 - c)};
    }
    s[3] = {i, j + 1, -beta_ / hz2};
    s[4] = {i, j - 1, -beta_ / hz2};
    return s;
  }

  void factor() {
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < g_.nr; ++i)
      for (int j = 0; j < g_.nz; ++j) {
        const int k = index_[flat(i, j)];
        if (k < 0) continue;
        for (const auto& e : stencil(i, j)) {
          const int c = index_[flat(e.i, e.j)];
          if (c >= 0 && e.coef != 0.0) trips.emplace_back(k, c, e.coef);
        }
      }
    matrix_.resize(unknowns_, unknowns_);
    matrix_.setFromTriplets(trips.begin(), trips.end());
    matrix_.makeCompressed();
    if (cfg_.method == PoissonMethod::sparse_lu) {
      lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
      lu_->compute(matrix_);
      if (lu_->info() != Eigen::Success) throw NoConvergence("sparse LU factorisation failed", 0, 0.0);
    } else {
      iter_ = std::make_unique<Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>>();
      iter_->setTolerance(cfg_.tol * 1e-2);
      iter_->setMaxIterations(cfg_.max_iters);
      iter_->compute(matrix_);
      if (iter_->info() != Eigen::Success) throw NoConvergence("incomplete LU preconditioner failed", 0, 0.0);
    }
  }

  void sor(Field2D& u, const Field2D& f) {
    const double w = cfg_.sor_omega;
    constexpr int kCheckEvery = 10;
    for (int it = 1; it <= cfg_.max_iters; ++it) {
      for (int colour = 0; colour < 2; ++colour)
        for (int i = 0; i < g_.nr; ++i)
          for (int j = 0; j < g_.nz; ++j) {
            if (((i + j) & 1) != colour || !g_.is_unknown(i, j)) continue;
            const auto s = stencil(i, j);
            double off = 0.0;
            for (std::size_t e = 1; e < s.size(); ++e) off += s[e].coef * u(s[e].i, s[e].j);
            u(i, j) = (1.0 - w) * u(i, j) + w * (f(i, j) - off) / s[0].coef;
          }
      last_.iterations = it;
      if (it % kCheckEvery == 0 && relative_residual(u, f) <= cfg_.tol) return;
    }
  }

  Grid2D g_;
  double alpha_;
  double beta_;
  PoissonConfig cfg_;
  std::vector<int> index_;
  int unknowns_ = 0;
  double diag_max_ = 0.0;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  std::unique_ptr<Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>> iter_;
  SolveStats last_;
};

/// -L3 phi1 = omega1 with Dirichlet data from the boundary nodes of `bc`.
inline Field2D poisson_solve(const Field2D& omega1, const Grid2D& g, const Field2D& bc, const PoissonConfig& cfg) {
  EllipticSolver solver(g, 0.0, 1.0, cfg);
  return solver.solve(omega1, bc);
}

}  // namespace nsblowup::axisym
