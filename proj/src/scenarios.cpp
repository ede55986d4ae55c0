#include "qit/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qit/entanglement.hpp"
#include "qit/optimize.hpp"

namespace qit {

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  return x;
}

Matrix cnot_sp() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = 1;
  u(2, 3) = u(3, 2) = 1;
  return u;
}

Matrix weak_sp(double eta) {
  Matrix u = Matrix::Identity(4, 4);
  u(2, 2) = u(3, 3) = std::cos(eta);
  u(3, 2) = std::sin(eta);
  u(2, 3) = -std::sin(eta);
  return u;
}

Layout qubit(const std::string& label) { return Layout{{label, 2}}; }

PureState probe_zero(const std::string& label, int dim) { return PureState::basis(Layout{{label, dim}}, 0); }

Matrix computational_basis(int dim) { return Matrix::Identity(dim, dim); }

Matrix euler_unitary(double a, double b, double c) {
  auto rz = [](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -t / 2);
    m(1, 1) = std::polar(1.0, t / 2);
    return m;
  };
  Matrix ry(2, 2);
  ry << std::cos(b / 2), -std::sin(b / 2), std::sin(b / 2), std::cos(b / 2);
  return rz(a) * ry * rz(c);
}

namespace {
Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
}  // namespace

ThermoScenario null_scenario() {
  ThermoScenario sc;
  sc.h_s = diag2(0, 1);
  sc.temperature = 1;
  sc.baths.push_back({"B1", diag2(0, 1), 1});
  return sc;
}

ThermoScenario szilard_scenario(const SzilardOptions& o) {
  if (o.steps < 1 || o.bath_levels < 2) throw Error("szilard: need at least one step and two bath levels");
  ThermoScenario sc;
  sc.temperature = o.temperature;
  sc.h_s = Matrix::Zero(2, 2);
  Matrix hb = Matrix::Zero(o.bath_levels, o.bath_levels);
  for (int i = 0; i < o.bath_levels; ++i) hb(i, i) = i * o.bath_spacing * o.temperature;
  sc.baths.push_back({"B1", hb, o.temperature});
  sc.measurement.emplace(probe_zero(), UnitaryOp(Layout{{"S", 2}, {"P", 2}}, cnot_sp()),
                         std::vector<Matrix>{diag2(1, 0), diag2(0, 1)});
  sc.feedback = {UnitaryOp::identity(qubit("S")), UnitaryOp(qubit("S"), pauli_x())};
  const double top = o.top_gap * o.temperature;
  for (int j = 0; j <= o.steps; ++j) {
    sc.final_steps.push_back(Quench{diag2(0, top * (1.0 - static_cast<double>(j) / o.steps)), Matrix()});
    if (j < o.steps) sc.final_steps.push_back(Passivate{});
  }
  return sc;
}

Theorem4Result theorem4_scenario(double temperature, const UnitaryOp& u_sp, double gap, double bath_gap) {
  if (!(u_sp.support() == Layout{{"S", 2}, {"P", 2}}) && !(u_sp.support() == Layout{{"P", 2}, {"S", 2}}))
    throw Error("theorem4_scenario: interaction must act on qubits S and P");
  Theorem4Result r;
  ThermoScenario& sc = r.scenario;
  sc.temperature = temperature;
  sc.h_s = diag2(0, gap);
  sc.baths.push_back({"B1", diag2(0, bath_gap), temperature});

  const DensityMatrix rho_s = canonical_state(sc.h_s, temperature, qubit("S"));
  const PureState psr = purify(rho_s, "R1");
  if (psr.layout().dim_of("R1") != 2) throw Error("theorem4_scenario: system state must be mixed");
  const PureState joint = tensor(probe_zero(), psr);
  const PureState psi = apply_unitary(joint, u_sp);

  r.measurement = optimal_probe_measurement(psi);
  const auto chk = check_probe_measurement(psi, r.measurement.p0, r.measurement.p1);
  r.outcome_schmidt_mismatch = chk.schmidt_mismatch;

  // V: diagonal populations (descending) onto the energy eigenbasis, ground first.
  const auto eh = eig_hermitian(sc.h_s);
  const Matrix v = eh.vectors.rowwise().reverse();
  std::vector<UnitaryOp> feedback;
  for (const Matrix* p : {&r.measurement.p0, &r.measurement.p1}) {
    const Vector out = apply_local(*p, qubit("P"), psi.amplitudes(), psi.layout());
    const double prob = out.squaredNorm();
    if (prob <= 1e-12) {
      feedback.push_back(UnitaryOp::identity(qubit("S")));
      continue;
    }
    const Matrix rs = reduced_matrix(out, psi.layout(), {"S"}) / prob;
    const auto es = eig_hermitian(rs);
    if (es.values(1) <= 1e-12) r.zero_entanglement_outcome = true;
    feedback.push_back(UnitaryOp(qubit("S"), v * es.vectors.adjoint()));
  }
  sc.measurement.emplace(probe_zero(), u_sp, std::vector<Matrix>{r.measurement.p0, r.measurement.p1});
  sc.feedback = std::move(feedback);

  r.ledger = run_process(sc);
  r.slack = check_inequalities(r.ledger);
  return r;
}

Theorem5Certificate theorem5_witness(const KrausFamily& family, const DensityMatrix& rho1, int grid) {
  if (family.support.size() != 1 || family.support.dim() != 2)
    throw Error("theorem5_witness: measurement must act on a single qubit");
  if (!(rho1.layout() == family.support)) throw Error("theorem5_witness: state and measurement layouts differ");
  if (family.ops.size() != 2) throw Error("theorem5_witness: two outcomes required");

  Theorem5Certificate c;
  for (const auto& ops : family.ops) {
    Matrix x = Matrix::Zero(2, 2);
    for (const auto& m : ops) x += m * rho1.matrix() * m.adjoint();
    const double p = x.trace().real();
    c.p.push_back(p);
    c.post_states.push_back(p > 1e-12 ? Matrix(hermitian_part(x / p)) : Matrix(Matrix::Identity(2, 2) / 2.0));
  }
  if (c.p[0] <= 1e-12 || c.p[1] <= 1e-12) {
    c.lu_equivalent = true;
    return c;
  }
  const RealVector la = psd_spectrum(c.post_states[0]);
  const RealVector lb = psd_spectrum(c.post_states[1]);
  c.lu_equivalent = (la - lb).cwiseAbs().maxCoeff() <= 1e-8;
  const double avg = c.p[0] * spectrum_entropy(la) + c.p[1] * spectrum_entropy(lb);
  c.certified_gap = std::max(0.0, spectrum_entropy(c.p[0] * la + c.p[1] * lb) - avg);

  // Only the relative rotation matters; U_0 = 1, U_1 = euler(a, b, c).
  auto candidate = [&](const std::vector<double>& x) {
    const Matrix u = euler_unitary(x[0], x[1], x[2]);
    const Matrix r1 = hermitian_part(u * c.post_states[1] * u.adjoint());
    const Matrix r3 = hermitian_part(c.p[0] * c.post_states[0] + c.p[1] * r1);
    const double dsum = c.p[0] * relative_entropy(c.post_states[0], r3) + c.p[1] * relative_entropy(r1, r3);
    const double direct = von_neumann_entropy(r3) - avg;
    c.identity_residual = std::max(c.identity_residual, std::abs(direct - dsum));
    ++c.candidates;
    return dsum;
  };

  const double pi = std::numbers::pi;
  std::vector<std::pair<double, std::vector<double>>> starts;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      for (int k = 0; k < grid; ++k) {
        std::vector<double> x{2 * pi * i / grid, pi * j / std::max(1, grid - 1), 2 * pi * k / grid};
        starts.emplace_back(candidate(x), x);
      }
  std::partial_sort(starts.begin(), starts.begin() + std::min<std::size_t>(3, starts.size()), starts.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  c.optimizer_gap = starts.front().first;
  c.best_angles = starts.front().second;
  for (std::size_t s = 0; s < std::min<std::size_t>(3, starts.size()); ++s) {
    const auto res = nelder_mead(candidate, starts[s].second, 0.1, 1500, 1e-15);
    if (res.value < c.optimizer_gap) {
      c.optimizer_gap = res.value;
      c.best_angles = res.x;
    }
  }
  return c;
}

}  // namespace qit
