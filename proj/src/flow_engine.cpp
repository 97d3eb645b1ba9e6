// SPDX-License-Identifier: Apache-2.0
#include "mcflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcflow/error.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/parallel.hpp"

namespace mcf {

void StepConfig::validate() const {
  if (!(safety > 0 && safety < 1)) throw validation_error("stepping: safety must be in (0,1)");
  if (!(solver_tol > 0 && solver_tol <= 1e-8)) {
    throw validation_error("stepping: solver_tol must be in (0, 1e-8]");
  }
  if (picard_iters < 1) throw validation_error("stepping: picard_iters must be >= 1");
  if (!(std::isfinite(t_end) && t_end >= 0)) throw validation_error("stepping: t_end must be >= 0");
  if (dt && !(std::isfinite(*dt) && *dt > 0)) throw validation_error("stepping: dt must be positive");
  if (steady_tol && !(std::isfinite(*steady_tol) && *steady_tol >= 0)) {
    throw validation_error("stepping: steady_tol must be >= 0");
  }
  if (max_steps < 1) throw validation_error("stepping: max_steps must be >= 1");
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::steady_state: return "steady_state";
    case Termination::invariant_violation: return "invariant_violation";
    case Termination::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

Small first_derivatives(const GraphField& f, const NodeStencil& st) {
  Small df(f.m, st.n);
  for (int a = 0; a < f.m; ++a) {
    for (int i = 0; i < st.n; ++i) df(a, i) = st.first[i].apply(f, a);
  }
  return df;
}

// Coefficients c_ij of the frozen operator L̃u = Σ_{i≤j} c_ij (row_ij · u):
// c_ii = g̃^{ii}, c_ij = 2 g̃^{ij} for i < j.
struct FrozenOperator {
  const Lattice* lattice = nullptr;
  int n = 0;
  double dt = 0.0;
  std::vector<double> coeff;     // per interior node, n*n (upper triangle used)
  std::vector<double> diagonal;  // of I − dt L̃

  double c(std::size_t pos, int i, int j) const { return coeff[pos * n * n + i * n + j]; }
};

FrozenOperator freeze(const GraphField& w, double dt, int workers) {
  const Lattice& lat = *w.lattice;
  FrozenOperator op;
  op.lattice = &lat;
  op.n = lat.n();
  op.dt = dt;
  const std::size_t count = lat.interior().size();
  const int n = op.n;
  op.coeff.assign(count * n * n, 0.0);
  op.diagonal.assign(count, 1.0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const NodeStencil st = node_stencil(lat, pos);
      const Metric metric = induced_metric(first_derivatives(w, st));
      const std::size_t self = lat.interior()[pos];
      double diag = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double c = (i == j ? 1.0 : 2.0) * metric.g_inv(i, j);
          op.coeff[pos * n * n + i * n + j] = c;
          const StencilRow& row = st.second[i][j];
          for (int k = 0; k < row.size; ++k) {
            if (row.terms[k].ref == self) diag += c * row.terms[k].weight;
          }
        }
      }
      op.diagonal[pos] = 1.0 - dt * diag;
    }
  });
  return op;
}

// y = (I − dt L̃) u over interior unknowns; Dirichlet references read as 0.
void apply(const FrozenOperator& op, const std::vector<double>& u, std::vector<double>& y,
           int workers) {
  const Lattice& lat = *op.lattice;
  const int n = op.n;
  parallel_for(u.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const NodeStencil st = node_stencil(lat, pos);
      double lu = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const StencilRow& row = st.second[i][j];
          double s = 0.0;
          for (int k = 0; k < row.size; ++k) {
            const std::size_t ref = row.terms[k].ref;
            if (lat.is_dirichlet(ref)) continue;
            s += row.terms[k].weight * u[static_cast<std::size_t>(lat.interior_position(ref))];
          }
          lu += op.c(pos, i, j) * s;
        }
      }
      y[pos] = u[pos] - op.dt * lu;
    }
  });
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Jacobi-preconditioned BiCGSTAB. Returns the achieved relative residual.
double bicgstab(const FrozenOperator& op, const std::vector<double>& b, std::vector<double>& x,
                double tol, int max_iters, int workers) {
  const std::size_t N = b.size();
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0.0;
  }
  std::vector<double> r(N), rhat, p(N, 0.0), v(N, 0.0), phat(N), s(N), shat(N), t(N), tmp(N);
  auto true_residual = [&]() {
    apply(op, x, tmp, workers);
    for (std::size_t i = 0; i < N; ++i) r[i] = b[i] - tmp[i];
    return norm(r) / bnorm;
  };
  double rel = true_residual();
  if (rel <= tol) return rel;
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const double rho_new = dot(rhat, r);
    if (rho_new == 0.0 || omega == 0.0) {
      rel = true_residual();
      if (rel <= tol) return rel;
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < N; ++i) {
      p[i] = r[i] + beta * (p[i] - omega * v[i]);
      phat[i] = p[i] / op.diagonal[i];
    }
    apply(op, phat, v, workers);
    alpha = rho / dot(rhat, v);
    for (std::size_t i = 0; i < N; ++i) s[i] = r[i] - alpha * v[i];
    if (norm(s) / bnorm <= tol) {
      for (std::size_t i = 0; i < N; ++i) x[i] += alpha * phat[i];
      rel = true_residual();
      if (rel <= tol) return rel;
      continue;
    }
    for (std::size_t i = 0; i < N; ++i) shat[i] = s[i] / op.diagonal[i];
    apply(op, shat, t, workers);
    const double tt = dot(t, t);
    omega = tt > 0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    if (norm(r) / bnorm <= tol) {
      rel = true_residual();
      if (rel <= tol) return rel;
    }
  }
  return true_residual();
}

}  // namespace

double stable_dt(const GraphField& field, double safety, int workers) {
  const Lattice& lat = *field.lattice;
  const int n = lat.n();
  const std::size_t count = lat.interior().size();
  std::vector<double> kappa(count * n, 0.0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const NodeStencil st = node_stencil(lat, pos);
      const Metric metric = induced_metric(first_derivatives(field, st));
      for (int i = 0; i < n; ++i) {
        const double theta = lat.link(pos, i, -1).theta * lat.link(pos, i, 1).theta;
        kappa[pos * n + i] = metric.g_inv(i, i) / theta;
      }
    }
  });
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = 0.0;
    for (std::size_t pos = 0; pos < count; ++pos) best = std::max(best, kappa[pos * n + i]);
    sum += best;
  }
  return safety * lat.h() * lat.h() / (2.0 * sum);
}

GraphField step_explicit(const GraphField& field, double dt, int workers) {
  const Lattice& lat = *field.lattice;
  const std::size_t count = lat.interior().size();
  GraphField out = field;
  out.t = field.t + dt;
  std::vector<std::uint8_t> bad(count, 0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const std::size_t node = lat.interior()[pos];
      const Jet jet = jet_from_stencil(field, node_stencil(lat, pos));
      const SmallVec r = system_residual(jet);
      auto dst = out.at(node);
      for (int a = 0; a < field.m; ++a) {
        dst[a] += dt * r(a);
        if (!std::isfinite(dst[a])) bad[pos] = 1;
      }
    }
  });
  for (std::size_t pos = 0; pos < count; ++pos) {
    if (bad[pos]) {
      const auto node = static_cast<long>(lat.interior()[pos]);
      throw NumericalFailure("step_explicit: non-finite value at node " + std::to_string(node),
                             node, 0.0);
    }
  }
  return out;
}

GraphField step_semi_implicit(const GraphField& field, double dt, const StepConfig& cfg,
                              int workers) {
  const Lattice& lat = *field.lattice;
  const std::size_t count = lat.interior().size();
  const int n = lat.n();
  constexpr int kMaxSolverIters = 5000;

  GraphField current = field;
  for (int sweep = 0; sweep < cfg.picard_iters; ++sweep) {
    const FrozenOperator op = freeze(current, dt, workers);
    GraphField next = field;
    next.t = field.t + dt;
    for (int a = 0; a < field.m; ++a) {
      std::vector<double> rhs(count), x(count);
      parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t pos = begin; pos < end; ++pos) {
          const std::size_t node = lat.interior()[pos];
          // Mixed rows reach diagonal neighbours, so any node may touch data.
          double boundary = 0.0;
          const NodeStencil st = node_stencil(lat, pos);
          for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
              const StencilRow& row = st.second[i][j];
              double s = 0.0;
              for (int k = 0; k < row.size; ++k) {
                if (lat.is_dirichlet(row.terms[k].ref)) {
                  s += row.terms[k].weight * field.value(row.terms[k].ref, a);
                }
              }
              boundary += op.c(pos, i, j) * s;
            }
          }
          rhs[pos] = field.value(node, a) + dt * boundary;
          x[pos] = current.value(node, a);
        }
      });
      const double achieved = bicgstab(op, rhs, x, cfg.solver_tol, kMaxSolverIters, workers);
      if (!(achieved <= cfg.solver_tol)) {
        std::ostringstream msg;
        msg << "step_semi_implicit: linear solve for component " << a
            << " stalled at relative residual " << achieved;
        throw NumericalFailure(msg.str(), -1, achieved);
      }
      for (std::size_t pos = 0; pos < count; ++pos) {
        next.values[lat.interior()[pos] * field.m + a] = x[pos];
      }
    }
    current = std::move(next);
  }
  return current;
}

double max_system_residual(const GraphField& field, int workers) {
  const Lattice& lat = *field.lattice;
  const std::size_t count = lat.interior().size();
  std::vector<double> res(count, 0.0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      res[pos] = system_residual(jet_from_stencil(field, node_stencil(lat, pos))).norm();
    }
  });
  double best = 0.0;
  for (double r : res) best = std::max(best, r);
  return best;
}

double velocity_consistency(const GraphField& field, const GraphField& next, double dt,
                            int workers) {
  if (field.lattice != next.lattice && !(field.lattice->spec() == next.lattice->spec())) {
    throw validation_error("velocity_consistency: mismatched lattices");
  }
  if (field.m != next.m) throw validation_error("velocity_consistency: mismatched codimension");
  const Lattice& lat = *field.lattice;
  const int n = lat.n(), m = field.m;
  const std::size_t count = lat.interior().size();
  std::vector<double> dev(count, 0.0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      const std::size_t node = lat.interior()[pos];
      const Jet jet = jet_from_stencil(field, node_stencil(lat, pos));
      const SecondFundamentalForm sff = second_fundamental_form(jet);
      AmbientVec v = AmbientVec::Zero(n + m);
      for (int a = 0; a < m; ++a) v(n + a) = (next.value(node, a) - field.value(node, a)) / dt;
      dev[pos] = (normal_projection(v, jet.df) - sff.H).norm();
    }
  });
  double best = 0.0;
  for (double d : dev) best = std::max(best, d);
  return best;
}

Trajectory run(const GraphField& field0, const StepConfig& cfg, const StepObserver& observer,
               long snapshot_every, int workers) {
  cfg.validate();
  const double h = field0.lattice->h();
  const double steady_tol = cfg.steady_tol.value_or(10.0 * h * h);
  const double t_tol = 1e-12 * std::max(1.0, cfg.t_end);

  Trajectory traj;
  GraphField f = field0;
  traj.snapshots.push_back(f);
  bool last_kept = true;
  if (observer && !observer(f, 0)) {
    traj.reason = Termination::invariant_violation;
    traj.detail = "monitor violation at t = 0";
    traj.final_state = f;
    return traj;
  }
  traj.final_residual = max_system_residual(f, workers);

  while (true) {
    if (f.t >= cfg.t_end - t_tol) {
      traj.reason = Termination::reached_t_end;
      break;
    }
    if (traj.steps >= cfg.max_steps) {
      traj.reason = Termination::numerical_failure;
      traj.detail = "step budget exhausted before t_end";
      break;
    }
    double dt = cfg.dt ? *cfg.dt : stable_dt(f, cfg.safety, workers);
    const bool final_step = f.t + dt >= cfg.t_end - t_tol;
    if (final_step) dt = cfg.t_end - f.t;
    GraphField next;
    try {
      next = cfg.scheme == Scheme::explicit_euler ? step_explicit(f, dt, workers)
                                                  : step_semi_implicit(f, dt, cfg, workers);
    } catch (const NumericalFailure& e) {
      traj.reason = Termination::numerical_failure;
      traj.detail = e.what();
      break;
    }
    if (final_step) next.t = cfg.t_end;
    f = std::move(next);
    ++traj.steps;
    traj.final_residual = max_system_residual(f, workers);
    last_kept = snapshot_every > 0 && traj.steps % snapshot_every == 0;
    if (last_kept) traj.snapshots.push_back(f);
    if (observer && !observer(f, traj.steps)) {
      traj.reason = Termination::invariant_violation;
      std::ostringstream msg;
      msg << "monitor violation at step " << traj.steps << ", t = " << f.t;
      traj.detail = msg.str();
      break;
    }
    if (traj.final_residual < steady_tol) {
      traj.reason = Termination::steady_state;
      break;
    }
  }
  if (!last_kept) traj.snapshots.push_back(f);
  traj.final_state = std::move(f);
  return traj;
}

}  // namespace mcf
