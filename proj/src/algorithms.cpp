#include "sfw/algorithms.hpp"

#include <algorithm>
#include <cmath>

namespace sfw {

namespace {

SampleBatch draw_for_iteration(SolverState& state, const Objective& obj, const RunConfig& config, long k) {
  const Index n = obj.num_samples();
  if (config.schedule.kind == ScheduleKind::FullBatch) return SampleBatch::full_set(n);
  std::uint64_t m = 0;
  try {
    m = batch_size(config.schedule, k, n);
  } catch (const ComputationError&) {
    // Past the overflow guard m > 2^53 >= n, so exact mode needs no m.
    if (config.exact_full_batches) return SampleBatch::full_set(n);
    throw;
  }
  if (config.exact_full_batches && m >= static_cast<std::uint64_t>(n)) return SampleBatch::full_set(n);
  return draw_batch(n, m, state.rng);
}

enum class Variant { Away, Pairwise };

// Shared body of the stochastic away-step and pairwise iterations once the
// batch gradient g and its Lipschitz estimate are known.
StepResult active_set_step(Variant variant, SolverState& state, const Objective& obj, const Polytope& poly,
                           const RunConfig& config, long k, SampleBatch batch, const BatchGradient& bg) {
  StepResult res;
  IterationRecord& rec = res.record;
  rec.k = k;
  rec.batch_size = batch.size;
  state.cum_stoch_grads += batch.size;

  const Vector& g = bg.gradient;
  const Vector x = state.rep.point();
  const Vertex p = poly.lmo(g);
  const auto [u, mu_u] = away_vertex(state.rep, g);

  StepTag tag = StepTag::FrankWolfe;
  double gamma_max = 1.0;
  if (variant == Variant::Away) {
    const bool fw_branch = g.dot(p.coords + u.coords - 2.0 * x) <= 0.0;
    // A singleton active set makes the away direction vanish; keep FW.
    if (fw_branch || state.rep.size() == 1) {
      res.direction = p.coords - x;
    } else {
      tag = StepTag::Away;
      res.direction = x - u.coords;
      gamma_max = mu_u / (1.0 - mu_u);
    }
  } else {
    tag = StepTag::Pairwise;
    res.direction = p.coords - u.coords;
    gamma_max = mu_u;
  }

  rec.step.tag = tag;
  rec.gamma_max = gamma_max;
  rec.directional_derivative = g.dot(res.direction);

  const bool degenerate = (variant == Variant::Pairwise && p.id == u.id) || res.direction.squaredNorm() == 0.0;
  if (!degenerate) {
    StepContext ctx;
    ctx.k = k;
    if (config.step_rule == StepRule::ExactLineSearch) ctx.curvature = obj.sampled_curvature(res.direction, batch);
    rec.gamma = step_size(g, res.direction, bg.lipschitz, gamma_max, config.step_rule, ctx);
    const auto outcome = state.rep.update(tag, rec.gamma, p, tag == StepTag::FrankWolfe ? nullptr : &u);
    if (tag == StepTag::Away) {
      rec.step.is_drop = outcome.away_dropped;
    } else if (tag == StepTag::Pairwise && outcome.away_dropped) {
      rec.step.is_drop = outcome.target_was_active;
      rec.step.is_swap = !outcome.target_was_active;
    }
  }
  rec.active_set_size = state.rep.size();
  rec.cum_stoch_grads = state.cum_stoch_grads;
  res.batch = std::move(batch);
  return res;
}

}  // namespace

StepResult asfw_step(SolverState& state, const Objective& obj, const Polytope& poly, const RunConfig& config,
                     long k) {
  SampleBatch batch = draw_for_iteration(state, obj, config, k);
  const BatchGradient bg = obj.stochastic_gradient(state.rep.point(), batch);
  return active_set_step(Variant::Away, state, obj, poly, config, k, std::move(batch), bg);
}

StepResult psfw_step(SolverState& state, const Objective& obj, const Polytope& poly, const RunConfig& config,
                     long k) {
  SampleBatch batch = draw_for_iteration(state, obj, config, k);
  const BatchGradient bg = obj.stochastic_gradient(state.rep.point(), batch);
  return active_set_step(Variant::Pairwise, state, obj, poly, config, k, std::move(batch), bg);
}

double duality_gap(const Objective& obj, const Polytope& poly, const Vector& x) {
  const Vector g = obj.full_gradient(x);
  const Vertex v = poly.lmo(g);
  return g.dot(x - v.coords);
}

RunTrace run(const Objective& obj, const Polytope& poly, const RunConfig& config) {
  validate(config);
  if (poly.dim() != obj.dim()) throw DimensionMismatch("run: polytope", obj.dim(), poly.dim());
  if (config.algorithm == Algorithm::SVRF) return svrf_run(obj, poly, config);
  if (config.algorithm == Algorithm::ProxSVRG) return prox_svrg_run(obj, poly, config);

  RunTrace trace;
  trace.label = config.label.empty() ? to_string(config.algorithm) : config.label;
  trace.algorithm = config.algorithm;
  if (is_stochastic_fw(config.algorithm) && !obj.strongly_convex())
    trace.metadata["warning"] = "objective is not strongly convex; linear-rate hypotheses fail";

  const Vertex start = poly.first_vertex();
  trace.start_vertex = start.id;
  SolverState state(start, config.seed);

  using StepFn = StepResult (*)(SolverState&, const Objective&, const Polytope&, const RunConfig&, long);
  StepFn step = nullptr;
  switch (config.algorithm) {
    case Algorithm::FW: step = &fw_step; break;
    case Algorithm::AFW: step = &afw_step; break;
    case Algorithm::PFW: step = &pfw_step; break;
    case Algorithm::ASFW: step = &asfw_step; break;
    case Algorithm::PSFW: step = &psfw_step; break;
    default: throw InvalidArgument("run: unsupported algorithm");
  }

  IterationRecord init;
  init.objective = obj.evaluate(state.rep.point());
  init.running_min = init.objective;
  init.active_set_size = 1;
  trace.records.push_back(init);
  double best = init.objective;

  Stopwatch clock;
  trace.status = RunStatus::MaxIterations;
  if (config.objective_target && init.objective <= *config.objective_target) {
    trace.status = RunStatus::TargetReached;
  } else {
    for (long k = 1; k <= config.max_iterations; ++k) {
      if (clock.seconds() >= config.time_budget) {
        trace.status = RunStatus::TimeBudget;
        break;
      }
      StepResult res;
      clock.start();
      try {
        res = step(state, obj, poly, config, k);
      } catch (const ComputationError& e) {
        clock.stop();
        trace.status = RunStatus::ScheduleExhausted;
        trace.metadata["stop_reason"] = e.what();
        break;
      }
      clock.stop();

      IterationRecord& rec = res.record;
      rec.wall_seconds = clock.seconds();
      rec.surrogate_change = 0.0;
      if (rec.gamma > 0.0) {
        // Exact for quadratics: F(x + t d) - F(x) = t <g, d> + t^2/2 d'Hd.
        const double curv = obj.sampled_curvature(res.direction, res.batch);
        rec.surrogate_change = rec.gamma * rec.directional_derivative + 0.5 * rec.gamma * rec.gamma * curv;
      }
      rec.objective = obj.evaluate(state.rep.point());
      best = std::min(best, rec.objective);
      rec.running_min = best;
      bool converged = false;
      if (k % config.gap_check_period == 0) {
        rec.duality_gap = duality_gap(obj, poly, state.rep.point());
        converged = rec.duality_gap <= config.gap_tolerance;
      }
      trace.records.push_back(rec);
      if (converged) {
        trace.status = RunStatus::GapConverged;
        break;
      }
      if (config.objective_target && rec.objective <= *config.objective_target) {
        trace.status = RunStatus::TargetReached;
        break;
      }
    }
  }

  trace.final_point = state.rep.point();
  for (const auto& [id, e] : state.rep.entries()) trace.final_weights.emplace_back(id, e.weight);
  trace.metadata["algorithm"] = to_string(config.algorithm);
  trace.metadata["step_rule"] = to_string(config.step_rule);
  if (is_stochastic_fw(config.algorithm)) trace.metadata["batch_schedule"] = to_string(config.schedule.kind);
  trace.metadata["decomposition"] = obj.decomposition();
  trace.metadata["clock"] = "monotonic wall time of algorithm work, excluding trace evaluation";
  return trace;
}

RunConfig default_reference_config() {
  RunConfig c;
  c.label = "reference";
  c.algorithm = Algorithm::AFW;
  c.step_rule = StepRule::ExactLineSearch;
  c.gap_tolerance = 1e-10;
  c.gap_check_period = 1;
  c.max_iterations = 200000;
  return c;
}

ReferenceSolution solve_reference(const Objective& obj, const Polytope& poly, const RunConfig& config) {
  const RunTrace trace = run(obj, poly, config);
  ReferenceSolution ref;
  ref.objective = trace.records.back().running_min;
  ref.iterations = trace.records.back().k;
  ref.point = trace.final_point;
  ref.gap = duality_gap(obj, poly, trace.final_point);
  ref.status = trace.status;
  return ref;
}

}  // namespace sfw
