#pragma once

// Ready-made processes: the null process, the Szilard engine, the equality
// construction for a qubit system, and the feedback-gap certificate for a
// two-outcome measurement.

#include <cstdint>

#include "qit/thermo.hpp"

namespace qit {

Matrix pauli_x();
Matrix cnot_sp();                  // on (S, P), S controls
Matrix weak_sp(double eta);        // controlled rotation: M_0 = diag(1, cos eta), M_1 = diag(0, sin eta)
Layout qubit(const std::string& label);
PureState probe_zero(const std::string& label = "P", int dim = 2);
Matrix computational_basis(int dim);

// S qubit with gap 1 and a one-qubit bath, both at T = 1; nothing happens.
ThermoScenario null_scenario();

struct SzilardOptions {
  int steps = 64;           // quench-ladder length N
  int bath_levels = 8;      // d
  double bath_spacing = 0.6;  // in units of T
  double top_gap = 5.0;     // initial S gap of the ladder, in units of T
  double temperature = 1.0;
};
// Degenerate S qubit, CNOT readout into a probe qubit, flip feedback, then an
// extraction ladder: the S gap opens to top_gap and is lowered to 0 in N
// steps, each followed by a passivating S+B unitary against the bath.
ThermoScenario szilard_scenario(const SzilardOptions& o = {});

struct Theorem4Result {
  ThermoScenario scenario;
  ProcessLedger ledger;
  SlackReport slack;
  OptimalMeasurement measurement;
  // Some outcome left S pure (E = 0); the canonical matching needs beta' = inf.
  bool zero_entanglement_outcome = false;
  double outcome_schmidt_mismatch = 0;
};

// S qubit with H = diag(0, gap), one-qubit bath at the same T, identity
// thermodynamic operations, the appendix measurement on the probe and the
// feedback V V_(k) that makes rho_3^S canonical.
Theorem4Result theorem4_scenario(double temperature, const UnitaryOp& u_sp, double gap = 1.0,
                                 double bath_gap = 1.0);

struct Theorem5Certificate {
  std::vector<double> p;
  std::vector<Matrix> post_states;   // normalized rho_2^(k)
  bool lu_equivalent = false;        // equal spectra within 1e-8
  double optimizer_gap = 0;          // best sum_k p_k D(U_k rho_k U_k^dag || rho_3) found
  double certified_gap = 0;          // exact infimum from the spectra (Ky Fan bound)
  double identity_residual = 0;      // max over candidates, mixing identity
  std::vector<double> best_angles;
  int candidates = 0;
};

// Feedback-optimization certificate for a two-outcome measurement on a qubit
// S (the effects' support must be the single qubit).
Theorem5Certificate theorem5_witness(const KrausFamily& family, const DensityMatrix& rho1,
                                     int grid = 24);

// Single-qubit unitary from three Euler angles, Rz(a) Ry(b) Rz(c).
Matrix euler_unitary(double a, double b, double c);

}  // namespace qit
