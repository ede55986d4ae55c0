#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qit/entanglement.hpp"
#include "qit/random.hpp"
#include "qit/scenarios.hpp"
#include "qit/thermo.hpp"

using namespace qit;
using fx::diag;

namespace {

const double kLog2 = std::log(2.0);
const Layout kSP{{"S", 2}, {"P", 2}};

MeasurementModel with_basis(const Matrix& u, const Matrix& basis) {
  return MeasurementModel::from_basis(probe_zero(), UnitaryOp(kSP, u), basis);
}

}  // namespace

TEST_SUITE("thermo") {

TEST_CASE("canonical states and free energies") {
  const DensityMatrix flat = canonical_state(Matrix::Zero(2, 2), 1.7, qubit("S"));
  CHECK(max_abs_diff(flat.matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(std::abs(free_energy(Matrix::Zero(2, 2), 1.7) + 1.7 * kLog2) < 1e-14);

  const Matrix h = diag({0, 0.8});
  CHECK(max_abs_diff(canonical_matrix(h, 1e6), diag({1, 0})) < 1e-6);
  CHECK(max_abs_diff(canonical_matrix(h, kInfinity), diag({1, 0})) == 0);
  for (double beta : {0.1, 1.0, 3.0}) {
    const Matrix c = canonical_matrix(h, beta);
    CHECK(std::abs(c(1, 1).real() - 1 / (1 + std::exp(beta * 0.8))) < 1e-14);
    CHECK(std::abs(c(0, 0).real() - 1 / (1 + std::exp(-beta * 0.8))) < 1e-14);
  }
  CHECK_THROWS_AS(canonical_state(h, 0, qubit("S")), Error);
}

TEST_CASE("cross entropy with the canonical state is at least the entropy") {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const Matrix rho = random_density_matrix(d, 1 + t % d, rng);
    const Matrix h = random_hermitian(d, rng);
    const double beta = uniform(rng, 0.0, 3.0);
    const double ce = canonical_cross_entropy(rho, h, beta);
    CHECK(ce >= von_neumann_entropy(rho) - 1e-12);
    // The log route loses relative accuracy on tiny canonical weights.
    CHECK(std::abs(ce + (rho * matrix_log_support(canonical_matrix(h, beta))).trace().real()) < 1e-8);
  }
}

TEST_CASE("I_QC: no interaction, Szilard readout, bounds") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(qubit("S"));
  const IQCResult none = i_qc(mixed, kraus_from_interaction(with_basis(Matrix::Identity(4, 4), computational_basis(2))));
  CHECK(std::abs(none.value) < 1e-14);

  const IQCResult sz = i_qc(mixed, kraus_from_interaction(with_basis(cnot_sp(), computational_basis(2))));
  CHECK(std::abs(sz.value - kLog2) < 1e-14);
  CHECK(std::abs(sz.two_form - kLog2) < 1e-14);

  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    const DensityMatrix rho = random_density(qubit("S"), 1 + t % 2, rng);
    const IQCResult r = i_qc(rho, kraus_from_interaction(with_basis(haar_unitary(4, rng), haar_unitary(2, rng))));
    double h = 0;
    for (double p : r.probabilities)
      if (p > 1e-12) h -= p * std::log(p);
    CHECK(r.value >= -1e-9);
    CHECK(r.value <= std::min(von_neumann_entropy(rho), h) + 1e-9);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("I_E: no interaction gives 0, CNOT on I/2 gives log 2") {
  const PureState psi = purify(DensityMatrix::maximally_mixed(qubit("S")), "R");
  const RoofOptions roof;
  const IEResult none = i_e(psi, {"R"}, "S", with_basis(Matrix::Identity(4, 4), computational_basis(2)), roof);
  CHECK(std::abs(none.value) < 1e-12);
  CHECK(std::abs(none.ef_after - kLog2) < 1e-12);

  const IEResult sz = i_e(psi, {"R"}, "S", with_basis(cnot_sp(), computational_basis(2)), roof);
  CHECK(sz.method == "two-qubit");
  CHECK(std::abs(sz.value - kLog2) < 1e-12);
  CHECK(sz.ef_after < 1e-12);
}

TEST_CASE("property: I_QC <= I_E for every probe basis tried") {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    const DensityMatrix rho = random_density(qubit("S"), 2, rng);
    const PureState psi = purify(rho, "R");
    const Matrix u = haar_unitary(4, rng);
    const double ie = i_e(psi, {"R"}, "S", with_basis(u, computational_basis(2)), RoofOptions{}).value;
    CHECK(ie >= -1e-9);
    CHECK(ie <= von_neumann_entropy(rho) + 1e-9);
    for (int b = 0; b < 5; ++b) {
      const double iq = i_qc(rho, kraus_from_interaction(with_basis(u, haar_unitary(2, rng)))).value;
      CHECK(iq <= ie + 1e-7);
    }
  }
}

TEST_CASE("null scenario: no work, no information, zero slack") {
  const ProcessLedger l = run_process(null_scenario());
  const SlackReport s = check_inequalities(l);
  CHECK(l.w_ext == 0);
  CHECK(std::abs(l.f_s_final - l.f_s) < 1e-14);
  CHECK(std::abs(l.beta_final - 1) < 1e-12);
  CHECK(s.new_law >= -1e-12);
  CHECK(s.old_law >= -1e-12);
  CHECK(s.conventional >= -1e-12);
  CHECK(s.new_law == s.conventional);
  CHECK(s.old_law == s.conventional);
  CHECK(s.violations.empty());
}

TEST_CASE("Szilard engine: apparent violation of the conventional law") {
  const ProcessLedger l = run_process(szilard_scenario());
  const SlackReport s = check_inequalities(l);
  CHECK(std::abs(l.i_e - kLog2) < 1e-12);
  CHECK(std::abs(l.i_qc - kLog2) < 1e-12);
  CHECK(s.conventional < 0);
  CHECK(s.new_law >= 0);
  REQUIRE(s.isothermal.has_value());
  CHECK(*s.isothermal >= 0);
  CHECK(l.energy_residual <= 1e-9);
  CHECK(l.w_ext < kLog2);
}

TEST_CASE("Szilard engine: extracted work grows with the ladder length and the bath size") {
  // With d = 8 the ladder saturates by N = 16; the finite bath is the limit.
  double last = -1;
  for (int n : {4, 16, 64}) {
    SzilardOptions o;
    o.steps = n;
    const double w = run_process(szilard_scenario(o)).w_ext;
    CHECK(w >= last - 1e-12);
    CHECK(w < kLog2);
    last = w;
  }
  last = -1;
  for (int d : {2, 4, 8}) {
    SzilardOptions o;
    o.bath_levels = d;
    const double w = run_process(szilard_scenario(o)).w_ext;
    CHECK(w > last);
    CHECK(w < kLog2);
    last = w;
  }
}

TEST_CASE("property: energy closes and S(rho_1) = S(rho_i) for unitary initial steps") {
  Rng rng(44);
  for (int t = 0; t < 50; ++t) {
    ThermoScenario sc;
    sc.h_s = random_hermitian(2, rng);
    sc.temperature = uniform(rng, 0.5, 2);
    sc.baths.push_back({"B1", random_hermitian(3, rng), uniform(rng, 0.5, 2)});
    const Layout l = sc.layout();
    sc.init_steps = {Quench{random_hermitian(2, rng), 0.3 * random_hermitian(6, rng)}, Evolve{0.7},
                     Drive{UnitaryOp(l, haar_unitary(6, rng))}, Quench{random_hermitian(2, rng), Matrix()}};
    sc.measurement.emplace(with_basis(haar_unitary(4, rng), haar_unitary(2, rng)));
    sc.final_steps = {Passivate{}, Quench{random_hermitian(2, rng), Matrix()}};
    sc.roof.restarts = 4;
    const ProcessLedger led = run_process(sc);
    CHECK(led.energy_residual <= 1e-9);
    CHECK(std::abs(led.s_1 - led.s_i) <= 1e-10);
    const SlackReport s = check_inequalities(led);
    CHECK(s.new_law >= s.old_law - 1e-7);
    CHECK(s.old_law >= -1e-7);
  }
}

TEST_CASE("final temperature solving") {
  // Pure final S state: beta' = inf, F' = ground energy, no entropy left.
  ThermoScenario sc = null_scenario();
  sc.measurement.emplace(with_basis(cnot_sp(), computational_basis(2)));
  sc.final_steps = {Passivate{}};
  sc.baths.clear();
  sc.feedback = {UnitaryOp::identity(qubit("S")), UnitaryOp(qubit("S"), pauli_x())};
  const ProcessLedger l = run_process(sc);
  CHECK(std::isinf(l.beta_final));
  CHECK(l.final_term == 0);
  CHECK(l.f_s_final == 0);

  // Declared T' is used as is.
  ThermoScenario d = null_scenario();
  d.final_temperature = 0.5;
  CHECK(std::abs(run_process(d).beta_final - 2) < 1e-15);
}

TEST_CASE("scenario validation") {
  ThermoScenario sc = null_scenario();
  sc.feedback = {UnitaryOp::identity(qubit("S"))};
  CHECK_THROWS_AS(run_process(sc), Error);

  ThermoScenario r = null_scenario();
  r.baths[0].label = "R";
  CHECK_THROWS_AS(run_process(r), Error);

  ThermoScenario c = null_scenario();
  c.final_steps = {Quench{diag({0, 1}), Matrix::Identity(4, 4)}};
  CHECK_THROWS_AS(run_process(c), Error);

  ThermoScenario h = null_scenario();
  h.h_s(0, 1) = 1;
  CHECK_THROWS_AS(run_process(h), Error);
}

TEST_CASE("equality construction: Haar, CNOT and identity interactions") {
  Rng rng(45);
  for (int t = 0; t < 30; ++t) {
    const Theorem4Result r = theorem4_scenario(1.0, UnitaryOp(kSP, haar_unitary(4, rng)));
    CHECK(r.slack.new_law >= -1e-7);
    CHECK(r.slack.new_law <= 1e-6);
    CHECK(r.ledger.canonical_distance <= 1e-9);
  }
  for (double temp : {0.3, 1.0, 4.0}) {
    const Theorem4Result c = theorem4_scenario(temp, UnitaryOp(kSP, cnot_sp()));
    CHECK(c.zero_entanglement_outcome);
    // GHZ-like outcome states: I_E is the whole entropy of rho_1^S.
    CHECK(std::abs(c.ledger.i_e - von_neumann_entropy(canonical_matrix(diag({0, 1}), 1 / temp))) < 1e-12);
    CHECK(std::abs(c.slack.new_law) <= 1e-6);
  }
  const Theorem4Result id = theorem4_scenario(1.0, UnitaryOp::identity(kSP));
  CHECK(std::abs(id.ledger.i_e) < 1e-12);
  CHECK(std::abs(id.slack.conventional) <= 1e-6);
  CHECK(std::abs(id.slack.new_law) <= 1e-6);
}

TEST_CASE("feedback gap: deterministic, weak and appendix measurements") {
  const DensityMatrix diag_rho(qubit("S"), diag({0.7, 0.3}));
  const Theorem5Certificate det =
      theorem5_witness(kraus_from_interaction(with_basis(cnot_sp(), computational_basis(2))), diag_rho, 8);
  CHECK(det.lu_equivalent);
  CHECK(det.certified_gap == 0);

  const Theorem5Certificate weak = theorem5_witness(
      kraus_from_interaction(with_basis(weak_sp(0.6), computational_basis(2))), DensityMatrix::maximally_mixed(qubit("S")));
  CHECK_FALSE(weak.lu_equivalent);
  CHECK(weak.certified_gap > 0);
  CHECK(weak.optimizer_gap >= weak.certified_gap - 1e-12);
  CHECK(weak.optimizer_gap >= 1e-4);
  CHECK(weak.identity_residual <= 1e-10);

  Rng rng(46);
  const DensityMatrix rho = random_density(qubit("S"), 2, rng);
  const UnitaryOp u(kSP, haar_unitary(4, rng));
  const OptimalMeasurement om = optimal_probe_measurement(apply_unitary(tensor(probe_zero(), purify(rho, "R1")), u));
  const Theorem5Certificate app =
      theorem5_witness(kraus_from_interaction(MeasurementModel(probe_zero(), u, {om.p0, om.p1})), rho, 12);
  CHECK(app.lu_equivalent);
  CHECK(app.optimizer_gap <= 1e-6);
}

}  // TEST_SUITE
