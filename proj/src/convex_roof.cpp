#include "qit/convex_roof.hpp"

#include <algorithm>
#include <cmath>

#include "qit/entanglement.hpp"
#include "qit/random.hpp"

namespace qit {

Matrix EnsembleDecomposition::mixture() const {
  if (members.empty()) throw Error("empty ensemble");
  const int d = members.front().dim();
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto& a = members[j].amplitudes();
    out += weights[j] * (a * a.adjoint());
  }
  return out;
}

namespace {

struct Problem {
  Layout layout;
  Layout cut_layout;
  Labels cut;
  Matrix scaled;  // columns sqrt(l_i) e_i
  int rank = 0;
  int m = 0;
};

Problem make_problem(const DensityMatrix& rho, const Labels& cut, int ensemble_size) {
  Problem p;
  p.layout = rho.layout();
  if (cut.empty() || cut.size() >= p.layout.size()) throw Error("cut must be a proper nonempty subset");
  p.cut_layout = p.layout.subset(cut);
  p.cut = p.cut_layout.labels();
  const auto es = eig_hermitian(rho.matrix());
  while (p.rank < es.values.size() && es.values(p.rank) > tol::rank) ++p.rank;
  p.scaled = es.vectors.leftCols(p.rank);
  for (int i = 0; i < p.rank; ++i) p.scaled.col(i) *= std::sqrt(es.values(i));
  p.m = ensemble_size > 0 ? ensemble_size : p.rank * p.rank;
  if (p.m < p.rank) throw Error("eof_convex_roof: ensemble size below rank");
  return p;
}

// Objective and Euclidean gradient (with respect to Re tr(X^dagger dV)).
double evaluate(const Problem& p, const Matrix& v, Matrix* grad) {
  const Matrix w = p.scaled * v.transpose();
  double f = 0;
  if (grad) grad->setZero(p.m, p.rank);
  for (int j = 0; j < p.m; ++j) {
    const Vector wj = w.col(j);
    const double q = wj.squaredNorm();
    if (q <= 1e-300) continue;
    const auto es = eig_hermitian(reduced_matrix(wj, p.layout, p.cut));
    const double logq = std::log(q);
    RealVector g(es.values.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      const double a = es.values(k);
      if (a > 1e-14 * q) {
        f -= a * std::log(a);
        g(k) = logq - std::log(a);
      } else {
        g(k) = 0.0;
      }
    }
    f += q * logq;
    if (grad) {
      const Matrix gj = es.vectors * g.asDiagonal() * es.vectors.adjoint();
      const Vector y = apply_local(gj, p.cut_layout, wj, p.layout);
      grad->row(j) = 2.0 * (p.scaled.adjoint() * y).transpose();
    }
  }
  return std::max(f, 0.0);
}

Matrix retract(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double real_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

Matrix riemannian(const Matrix& v, const Matrix& g) {
  const Matrix s = v.adjoint() * g;
  return g - v * ((s + s.adjoint()) / 2.0);
}

double descend(const Problem& p, Matrix& v, const RoofOptions& opt) {
  Matrix g;
  double f = evaluate(p, v, &g);
  Matrix xi = riemannian(v, g);
  Matrix v_prev, xi_prev;
  double alpha = 0.5;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double gn2 = xi.squaredNorm();
    if (std::sqrt(gn2) < opt.gradient_tol) break;
    if (it > 0) {
      const Matrix s = v - v_prev;
      const Matrix y = xi - xi_prev;
      const double sy = std::abs(real_inner(s, y));
      if (sy > 1e-300) alpha = std::clamp(real_inner(s, s) / sy, 1e-8, 1e3);
    }
    bool accepted = false;
    Matrix v_new;
    double f_new = f;
    for (int ls = 0; ls < 50; ++ls) {
      v_new = retract(v - alpha * xi);
      f_new = evaluate(p, v_new, nullptr);
      if (f_new <= f - 1e-4 * alpha * gn2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    v_prev = v;
    xi_prev = xi;
    v = v_new;
    const double f_old = f;
    f = evaluate(p, v, &g);
    xi = riemannian(v, g);
    if (f_old - f < 1e-16 && it > 10) break;
  }
  return f;
}

EnsembleDecomposition witness_from(const Problem& p, const Matrix& v) {
  const Matrix w = p.scaled * v.transpose();
  EnsembleDecomposition e;
  for (int j = 0; j < p.m; ++j) {
    const double q = w.col(j).squaredNorm();
    if (q <= 1e-15) continue;
    e.weights.push_back(q);
    e.members.push_back(PureState::normalized(p.layout, w.col(j)));
  }
  return e;
}

}  // namespace

double roof_objective(const DensityMatrix& rho, const Labels& cut, const Matrix& v) {
  const Problem p = make_problem(rho, cut, static_cast<int>(v.rows()));
  if (v.cols() != p.rank) throw Error("roof_objective: isometry has wrong column count");
  return evaluate(p, v, nullptr);
}

RoofResult eof_convex_roof(const DensityMatrix& rho, const Labels& cut, const RoofOptions& opt) {
  const Problem p = make_problem(rho, cut, opt.ensemble_size);
  RoofResult best;
  best.value = kInfinity;
  Matrix best_v;
  const int restarts = std::max(1, opt.restarts);
  for (int k = 0; k < restarts; ++k) {
    Matrix v;
    if (k == 0) {
      v = Matrix::Identity(p.m, p.rank);
    } else {
      Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(k)));
      v = haar_unitary(p.m, rng).leftCols(p.rank);
    }
    const double f = p.rank == 1 ? evaluate(p, v, nullptr) : descend(p, v, opt);
    best.restart_values.push_back(f);
    if (f < best.value) {
      best.value = f;
      best_v = v;
    }
  }
  best.witness = witness_from(p, best_v);
  return best;
}

}  // namespace qit
