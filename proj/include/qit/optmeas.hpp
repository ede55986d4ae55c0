#pragma once

// Measurements induced on the system by a probe interaction, the closed-form
// optimal probe measurement for three-qubit states, and the probe basis that
// realizes a given ensemble decomposition.

#include <vector>

#include "qit/convex_roof.hpp"
#include "qit/qcore.hpp"
#include "qit/schmidt.hpp"

namespace qit {

// Probe P starts in `probe_init`, interacts with the system through
// `interaction` (support must contain P), and is read out projectively.
class MeasurementModel {
 public:
  MeasurementModel(PureState probe_init, UnitaryOp interaction, std::vector<Matrix> probe_projectors);

  // Rank-1 projectors onto the columns of a unitary on P.
  static MeasurementModel from_basis(PureState probe_init, UnitaryOp interaction, const Matrix& basis);

  const PureState& probe_init() const { return probe_init_; }
  const UnitaryOp& interaction() const { return interaction_; }
  const std::vector<Matrix>& probe_projectors() const { return projectors_; }
  const std::string& probe_label() const { return probe_label_; }
  std::size_t outcomes() const { return projectors_.size(); }
  // Support of the interaction without the probe, in support order.
  Layout system_support() const { return interaction_.support().complement({probe_label_}); }

 private:
  PureState probe_init_;
  UnitaryOp interaction_;
  std::vector<Matrix> projectors_;
  std::string probe_label_;
};

// One Kraus operator per vector |k,i_P> of each projector's spectral family:
// M_{k,i} = <k,i_P| U |0_P>, acting on system_support(). The effect of outcome
// k is D_k = sum_i M_{k,i}^dagger M_{k,i}.
struct KrausFamily {
  Layout support;
  std::vector<std::vector<Matrix>> ops;
  std::vector<Matrix> effects;

  double completeness_residual() const;
};

KrausFamily kraus_from_interaction(const MeasurementModel& m);

struct OptimalMeasurement {
  GSDecomposition gsd;
  AppendixParams params;
  double a = 0, b = 0, k = 0, theta = 0;
  int sign = -1;                // resolved value of the dotted plus-minus
  bool fallback = false;        // degenerate denominator; see optimal_probe_measurement
  bool radicand_violation = false;  // K5^2 - K_PS K_PR1 C_SR1^2 < -1e-9
  Matrix p0_gsd, p1_gsd;        // projectors in the decomposition's P basis
  Matrix p0, p1;                // same, in the input's P basis
};

// Appendix measurement on a three-qubit state with party order P, S, R1.
// When the denominator of a vanishes (to 1e-12) the decomposition-frame
// computational basis is used if it already meets the optimality conditions,
// else a direct numerical search over projective measurements is run.
OptimalMeasurement optimal_probe_measurement(const PureState& psi);

// Post-measurement checks for a projective measurement on the first party.
struct OutcomeCheck {
  double completeness = 0;       // |P0 + P1 - I|
  double idempotency = 0;        // max |Pk^2 - Pk|
  double schmidt_mismatch = 0;   // between the two outcomes' S-R1 spectra
  double eof_mismatch = 0;       // max_k |E(outcome k) - E_F(rho_SR1)|
  std::vector<double> probabilities;
};
OutcomeCheck check_probe_measurement(const PureState& psi, const Matrix& p0, const Matrix& p1);

// Orthonormal basis of P (columns) with |psi> = sum_k sqrt(q_k)|k_P>|phi^k>.
// Members of the witness live on the complement of `probe_label`.
Matrix probe_basis_from_ensemble(const PureState& psi_total, const std::string& probe_label,
                                 const EnsembleDecomposition& witness);

}  // namespace qit
