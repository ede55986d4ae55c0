#pragma once

// Thermodynamic bookkeeping for a system S, finite baths B_m and a probe P.
//
// Process: rho_i (product of canonical states) -> U_init -> rho_1 -> probe
// interaction and readout (outcome k, prob p_k) -> rho_2^(k) -> feedback
// U_(k) -> rho_3 -> U_fin -> rho_f. Thermodynamic operations are schedules of
// discrete steps; every change of the S+B energy outside heat exchange with
// the baths is booked as work.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qit/convex_roof.hpp"
#include "qit/optmeas.hpp"
#include "qit/qcore.hpp"

namespace qit {

DensityMatrix canonical_state(const Matrix& h, double temperature, const Layout& layout);
Matrix canonical_matrix(const Matrix& h, double beta);
double free_energy(const Matrix& h, double temperature);
// -tr[rho log(e^{-beta H}/Z)] = beta <H> + log Z, valid for beta in [0, inf].
double canonical_cross_entropy(const Matrix& rho, const Matrix& h, double beta);

// --- schedules -------------------------------------------------------------------

// Swap the system Hamiltonian and the S-B coupling (coupling acts on the
// whole S+B layout; empty means zero). Work = tr[rho (H_before - H_after)].
struct Quench {
  Matrix h_s;
  Matrix coupling;
};
// Free evolution under the current total Hamiltonian.
struct Evolve {
  double time = 0;
};
// An externally driven unitary on part of S+B.
struct Drive {
  UnitaryOp u;
};
// The unitary that maps the current state to its passive state with respect to
// the current total Hamiltonian (maximal energy extraction).
struct Passivate {};

using Step = std::variant<Quench, Evolve, Drive, Passivate>;

struct Bath {
  std::string label;
  Matrix h;
  double temperature = 1;
};

struct ThermoScenario {
  std::string system_label = "S";
  Matrix h_s;  // system Hamiltonian at t_i
  double temperature = 1;
  std::vector<Bath> baths;
  std::vector<Step> init_steps;
  std::optional<MeasurementModel> measurement;
  std::vector<UnitaryOp> feedback;  // one per outcome; empty means identity
  std::vector<Step> final_steps;
  // T'. When unset it is solved from rho_f^S: spectrum match for a qubit,
  // energy match otherwise; a fully degenerate final H^S takes T.
  std::optional<double> final_temperature;
  RoofOptions roof{0, 16, 1, 400, 1e-11};

  Layout layout() const;  // S then the baths
  void validate() const;
};

// --- information quantities ----------------------------------------------------------

struct IQCResult {
  double value = 0;
  double two_form = 0;  // S(rho_1) - sum_k p_k S(rho_2^(k)) with sqrt(D_k) post-states
  double residual = 0;
  std::vector<double> probabilities;
};

// Two-form I_QC over the effects of `family`, embedded into rho's layout.
IQCResult i_qc(const DensityMatrix& rho1, const KrausFamily& family);

struct IEResult {
  double value = 0;
  double s_rho1 = 0;
  double ef_after = 0;
  std::string method;  // "pure", "two-qubit", "product-split", "convex-roof"
  std::optional<RoofResult> roof;
  Matrix rho_sbr;  // tr_P of the post-interaction state
  Layout sbr_layout;
};

// S(rho_1) - E_F^{SB-R}(tr_P[(U_SP x 1)(|0_P> x psi_SBR)]). `psi_sbr` must be a
// purification of rho_1 whose reference factors are `reference`.
IEResult i_e(const PureState& psi_sbr, const Labels& reference, const std::string& system_label,
             const MeasurementModel& m, const RoofOptions& roof);

// --- process ---------------------------------------------------------------------

struct ProcessLedger {
  Layout layout;
  Matrix rho_i, rho_1, rho_3, rho_f;
  std::vector<double> p;
  std::vector<Matrix> rho_2;  // normalized per outcome; empty matrix if p_k <= 1e-12
  Matrix h_s_final;

  double temperature = 1;
  std::vector<double> bath_temperatures;
  double u_s = 0, f_s = 0;              // at t_i
  double u_s_final = 0, f_s_final = 0;  // at t_f, F' at T'
  double beta_final = 0;                // 1/T'; may be +inf
  double final_term = 0;                // (U'^S - F'^S)/T' = -tr[rho_f^S log rho_can]
  double canonical_distance = 0;        // max |rho_f^S - rho_can(T')|
  std::vector<double> q;                // heat from each bath
  double w_ext = 0, w_init = 0, w_measure = 0, w_final = 0;
  double energy_residual = 0;           // W_ext + dU^S - sum Q_m

  double s_i = 0, s_1 = 0, s_2_avg = 0, s_3 = 0, s_f = 0;
  bool measured = false;
  double i_e = 0, i_qc = 0, i_qc_residual = 0;
  std::string i_e_method = "none";
};

ProcessLedger run_process(const ThermoScenario& sc);

struct SlackReport {
  double lhs = 0;           // (U - F)/T + sum Q_m/T_m
  double new_law = 0;       // (U' - F')/T' + I_E - lhs
  double old_law = 0;       // same with I_QC
  double conventional = 0;  // no information term
  std::optional<double> isothermal;  // -dF + T I_E - W_ext (one bath, T_1 = T = T')
  double lemma1 = 0;        // I_E - I_QC
  std::vector<std::string> violations;
};

inline constexpr double kSlackTol = 1e-7;
SlackReport check_inequalities(const ProcessLedger& l);

}  // namespace qit
