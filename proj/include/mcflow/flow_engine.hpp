// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcflow/jet_calculus.hpp"

namespace mcf {

enum class Scheme { explicit_euler, semi_implicit };

struct StepConfig {
  Scheme scheme = Scheme::explicit_euler;
  std::optional<double> dt;          // empty: stable_dt every step
  double safety = 0.8;               // σ in (0, 1)
  double solver_tol = 1e-10;         // relative residual, ≤ 1e-8
  int picard_iters = 1;              // metric re-freezes per step
  double t_end = 0.0;
  std::optional<double> steady_tol;  // empty: 10 h²
  long max_steps = 10'000'000;

  void validate() const;
  bool operator==(const StepConfig&) const = default;
};

/// Explicit stability limit σ h² / (2 Σ_i max_nodes g^{ii}/(θ⁻θ⁺)).
/// θ⁻θ⁺ = 1 away from curved boundaries, so on boxes this is
/// σ h² / (2 Σ_i max g^{ii}).
double stable_dt(const GraphField& field, double safety, int workers = 1);

/// f^α += dt g^{ij} ∂_i∂_j f^α at interior nodes. Throws NumericalFailure
/// naming the first node that became non-finite.
GraphField step_explicit(const GraphField& field, double dt, int workers = 1);

/// Lagged-coefficient step: freeze g̃^{ij} from the current iterate, solve
/// the m decoupled systems (I − dt L̃) f^α_new = f^α with Dirichlet data,
/// repeat picard_iters times. Throws NumericalFailure when a solve misses
/// solver_tol.
GraphField step_semi_implicit(const GraphField& field, double dt, const StepConfig& cfg,
                              int workers = 1);

/// Max over interior nodes of |g^{ij}∂_i∂_j f|.
double max_system_residual(const GraphField& field, int workers = 1);

/// max over interior nodes of |((0, (f_next − f)/dt))^⊥ − H(f)|.
double velocity_consistency(const GraphField& field, const GraphField& next, double dt,
                            int workers = 1);

enum class Termination { reached_t_end, steady_state, invariant_violation, numerical_failure };

std::string to_string(Termination reason);

/// Called after every accepted state (including t = 0). Returning false
/// stops the run with invariant_violation.
using StepObserver = std::function<bool(const GraphField& field, long step)>;

struct Trajectory {
  std::vector<GraphField> snapshots;
  Termination reason = Termination::reached_t_end;
  std::string detail;
  long steps = 0;
  double final_residual = 0.0;
  GraphField final_state;
};

/// Iterates steps from field0 until t_end, steady state, an observer veto,
/// or a numerical failure. Snapshots are kept every `snapshot_every` steps
/// plus the initial and final states.
Trajectory run(const GraphField& field0, const StepConfig& cfg, const StepObserver& observer,
               long snapshot_every, int workers = 1);

}  // namespace mcf
