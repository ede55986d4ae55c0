#include "qit/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qit/entanglement.hpp"

namespace qit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZero = 1e-14;      // exact-zero test on amplitudes and coefficients
constexpr double kPhaseSnap = 1e-9;  // phi this close to 0 or pi is snapped

using Tensor = std::array<cplx, 8>;  // index 4a + 2b + c

void require_three_qubits(const Layout& l) {
  if (l.size() != 3) throw Error("expected three qubits, got " + to_string(l));
  for (const auto& f : l.factors())
    if (f.dim != 2) throw Error("expected three qubits, got " + to_string(l));
}

Tensor apply3(const Matrix& a, const Matrix& b, const Matrix& c, const Tensor& t) {
  Tensor out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        cplx acc = 0;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) acc += a(i, x) * b(j, y) * c(k, z) * t[4 * x + 2 * y + z];
        out[4 * i + 2 * j + k] = acc;
      }
  return out;
}

// Rows <e0|, <e1| of the first-party rotation for each root of
// det(x T0 + y T1) = 0, with (x, y) = <e0|.
std::vector<Eigen::Vector2cd> first_party_rows(const Tensor& t) {
  const cplx t0[2][2] = {{t[0], t[1]}, {t[2], t[3]}};
  const cplx t1[2][2] = {{t[4], t[5]}, {t[6], t[7]}};
  const cplx a = t0[0][0] * t0[1][1] - t0[0][1] * t0[1][0];
  const cplx c = t1[0][0] * t1[1][1] - t1[0][1] * t1[1][0];
  const cplx b = t0[0][0] * t1[1][1] + t1[0][0] * t0[1][1] - t0[0][1] * t1[1][0] -
                 t1[0][1] * t0[1][0];
  std::vector<Eigen::Vector2cd> out;
  auto push = [&](cplx x, cplx y) {
    Eigen::Vector2cd v(x, y);
    out.push_back(v / v.norm());
  };
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale <= kZero) {
    // Every combination is singular; the dominant direction of rho_P will do.
    Eigen::Matrix2cd rp;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        cplx acc = 0;
        for (int k = 0; k < 4; ++k) acc += t[4 * i + k] * std::conj(t[4 * j + k]);
        rp(i, j) = acc;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rp);
    const Eigen::Vector2cd e0 = es.eigenvectors().col(1);
    push(std::conj(e0(0)), std::conj(e0(1)));
    return out;
  }
  if (std::abs(a) <= kZero) {
    push(1.0, 0.0);
    if (std::abs(b) > kZero) push(-c, b);
    return out;
  }
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  const cplx qp = b + disc, qm = b - disc;
  const cplx q = -0.5 * (std::abs(qp) >= std::abs(qm) ? qp : qm);
  if (std::abs(q) <= kZero) {
    push(0.0, 1.0);  // double root z = 0
    return out;
  }
  push(q / a, 1.0);
  push(c / q, 1.0);
  return out;
}

struct Branch {
  std::array<double, 5> lambdas{};
  double phase = 0;
  Matrix u_p, u_s, u_r1;
  Tensor canon{};
};

Branch canonicalize(const Tensor& t, const Eigen::Vector2cd& w) {
  // w = (x, y) is <e0|; <e1| is the orthogonal row.
  Matrix ua(2, 2);
  ua << w(0), w(1), -std::conj(w(1)), std::conj(w(0));

  Tensor t2 = apply3(ua, Matrix::Identity(2, 2), Matrix::Identity(2, 2), t);
  Matrix m0(2, 2);
  m0 << t2[0], t2[1], t2[2], t2[3];
  Eigen::JacobiSVD<Matrix> svd(m0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix ub = svd.matrixU().adjoint();
  const Matrix uc = svd.matrixV().transpose();
  Tensor t3 = apply3(ua, ub, uc, t);

  // Global phase: make l0 real and nonnegative.
  const cplx g = std::abs(t3[0]) > kZero ? std::conj(t3[0]) / std::abs(t3[0]) : cplx(1.0);
  for (auto& x : t3) x *= g;

  // Local phases diag(1, e^{iA}), diag(1, e^{iB}), diag(1, e^{iC}) on P, S, R1.
  // Constraints, in priority order: t101, t110, t111 real positive, then t100
  // real when there is freedom left.
  struct Row {
    double a, b, c, rhs;
  };
  std::vector<Row> rows;
  auto want = [&](int idx, double a, double b, double c) {
    if (rows.size() < 3 && std::abs(t3[idx]) > kZero) rows.push_back({a, b, c, -std::arg(t3[idx])});
  };
  want(5, 1, 0, 1);
  want(6, 1, 1, 0);
  want(7, 1, 1, 1);
  want(4, 1, 0, 0);
  Eigen::Vector3d abc = Eigen::Vector3d::Zero();
  if (!rows.empty()) {
    Eigen::MatrixXd m(rows.size(), 3);
    Eigen::VectorXd r(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      m.row(i) << rows[i].a, rows[i].b, rows[i].c;
      r(i) = rows[i].rhs;
    }
    abc = m.completeOrthogonalDecomposition().solve(r);
  }
  Matrix da = Matrix::Identity(2, 2), db = da, dc = da;
  da(1, 1) = std::polar(1.0, abc(0));
  db(1, 1) = std::polar(1.0, abc(1));
  dc(1, 1) = std::polar(1.0, abc(2));
  const Tensor t4 = apply3(da, db, dc, t3);

  Branch br;
  br.u_p = g * da * ua;
  br.u_s = db * ub;
  br.u_r1 = dc * uc;
  br.lambdas = {std::abs(t4[0]), std::abs(t4[4]), std::abs(t4[5]), std::abs(t4[6]),
                std::abs(t4[7])};
  double phi = br.lambdas[1] > kZero ? std::arg(t4[4]) : 0.0;
  if (phi < -kPi + kPhaseSnap) phi += 2 * kPi;
  if (std::abs(phi) < kPhaseSnap) phi = 0;
  if (std::abs(phi - kPi) < kPhaseSnap) phi = kPi;
  br.phase = phi;
  br.canon = t4;
  return br;
}

Vector canonical_vector(const std::array<double, 5>& l, double phi) {
  Vector v = Vector::Zero(8);
  v(0) = l[0];
  v(4) = std::polar(l[1], phi);
  v(5) = l[2];
  v(6) = l[3];
  v(7) = l[4];
  return v;
}

}  // namespace

Vector GSDecomposition::canonical() const { return canonical_vector(lambdas, phase); }

GSDecomposition gsd(const PureState& psi) {
  require_three_qubits(psi.layout());
  Tensor t{};
  for (int i = 0; i < 8; ++i) t[i] = psi.amplitudes()(i);

  std::vector<Branch> admissible;
  for (const auto& w : first_party_rows(t)) {
    Branch br = canonicalize(t, w);
    if (br.phase >= 0 && br.phase <= kPi) admissible.push_back(std::move(br));
  }
  if (admissible.empty()) throw Error("gsd: no gauge branch with phase in [0, pi]");

  auto best = std::max_element(admissible.begin(), admissible.end(),
                               [](const Branch& x, const Branch& y) {
                                 return x.lambdas[0] < y.lambdas[0];
                               });
  GSDecomposition g;
  g.lambdas = best->lambdas;
  g.phase = best->phase;
  g.u_p = best->u_p;
  g.u_s = best->u_s;
  g.u_r1 = best->u_r1;
  g.dual = admissible.size() > 1;

  Tensor back = apply3(g.u_p, g.u_s, g.u_r1, t);
  const Vector canon = g.canonical();
  double res = 0;
  for (int i = 0; i < 8; ++i) res = std::max(res, std::abs(back[i] - canon(i)));
  g.residual = res;
  return g;
}

AppendixParams appendix_params(const GSDecomposition& g) {
  const auto& [l0, l1, l2, l3, l4] = g.lambdas;
  const cplx e = std::polar(1.0, g.phase);
  AppendixParams p;
  p.tau = 4 * l0 * l0 * l4 * l4;
  p.c_ps = 2 * l0 * l3;
  p.c_pr1 = 2 * l0 * l2;
  p.c_sr1 = 2 * std::abs(l1 * l4 * e - l2 * l3);
  p.k_ps = p.c_ps * p.c_ps + p.tau;
  p.k_pr1 = p.c_pr1 * p.c_pr1 + p.tau;
  p.k_sr1 = p.c_sr1 * p.c_sr1 + p.tau;
  p.j5 = 4 * l0 * l0 *
         (std::norm(l1 * l4 * e - l2 * l3) + l2 * l2 * l3 * l3 - l1 * l1 * l4 * l4);
  p.k5 = p.j5 + p.tau;
  p.delta_j = p.k5 * p.k5 - p.k_ps * p.k_pr1 * p.k_sr1;
  p.radicand = p.k5 * p.k5 - p.k_ps * p.k_pr1 * p.c_sr1 * p.c_sr1;

  const cplx num = l2 * l3 - l1 * l4 * e;
  if (std::abs(num) <= 1e-12) {
    p.phi5 = 0;
    p.phi5_degenerate = true;
  } else {
    p.phi5 = -std::arg(num);
    if (p.phi5 <= -kPi) p.phi5 += 2 * kPi;
  }

  if (p.k_sr1 > 0) {
    const double x = std::sin(g.phase) * (l0 * l0 - (p.tau + p.j5) / (2 * p.k_sr1));
    p.q_e = std::abs(x) <= 1e-12 ? 0 : (x > 0 ? 1 : -1);
  }
  return p;
}

PairConcurrences pair_concurrences(const PureState& psi) {
  require_three_qubits(psi.layout());
  const auto labels = psi.layout().labels();
  PairConcurrences c;
  c.ps = concurrence_2q(reduced(psi, {labels[0], labels[1]}));
  c.pr1 = concurrence_2q(reduced(psi, {labels[0], labels[2]}));
  c.sr1 = concurrence_2q(reduced(psi, {labels[1], labels[2]}));
  return c;
}

double tangle_3q(const PureState& psi) {
  const auto c = pair_concurrences(psi);
  const Matrix rp = reduced(psi, {psi.layout().labels()[0]}).matrix();
  const double det = (rp(0, 0) * rp(1, 1) - rp(0, 1) * rp(1, 0)).real();
  const double ckw = 4 * det - c.ps * c.ps - c.pr1 * c.pr1;
  const auto g = gsd(psi);
  const double canon = 4 * g.lambdas[0] * g.lambdas[0] * g.lambdas[4] * g.lambdas[4];
  if (std::abs(ckw - canon) > 1e-8) throw Error("tangle_3q: CKW and canonical tangle disagree");
  return std::max(0.0, canon);
}

}  // namespace qit
