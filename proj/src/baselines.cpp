// Deterministic Frank-Wolfe, away-step FW and pairwise FW with exact
// gradients. These double as the reference implementations against which
// the full-batch stochastic variants are checked.
#include "sfw/algorithms.hpp"

namespace sfw {

namespace {

struct Linearization {
  Vector gradient;
  Vector x;
  Vertex target;
};

Linearization linearize(const SolverState& state, const Objective& obj, const Polytope& poly) {
  Linearization lin;
  lin.x = state.rep.point();
  lin.gradient = obj.full_gradient(lin.x);
  lin.target = poly.lmo(lin.gradient);
  return lin;
}

double choose_step(const Objective& obj, const RunConfig& config, long k, const Vector& g, const Vector& d,
                   double gamma_max) {
  StepContext ctx;
  ctx.k = k;
  if (config.step_rule == StepRule::ExactLineSearch) ctx.curvature = obj.curvature(d);
  return step_size(g, d, obj.lipschitz_mean(), gamma_max, config.step_rule, ctx);
}

void finish(StepResult& res, SolverState& state, const Objective& obj) {
  state.cum_stoch_grads += static_cast<std::uint64_t>(obj.num_samples());
  res.record.batch_size = static_cast<std::uint64_t>(obj.num_samples());
  res.record.cum_stoch_grads = state.cum_stoch_grads;
  res.record.active_set_size = state.rep.size();
  res.batch = SampleBatch::full_set(obj.num_samples());
}

}  // namespace

StepResult fw_step(SolverState& state, const Objective& obj, const Polytope& poly, const RunConfig& config,
                   long k) {
  const Linearization lin = linearize(state, obj, poly);
  StepResult res;
  res.record.k = k;
  res.record.step.tag = StepTag::FrankWolfe;
  res.record.gamma_max = 1.0;
  res.direction = lin.target.coords - lin.x;
  res.record.directional_derivative = lin.gradient.dot(res.direction);
  if (res.direction.squaredNorm() > 0.0) {
    res.record.gamma = choose_step(obj, config, k, lin.gradient, res.direction, 1.0);
    state.rep.update(StepTag::FrankWolfe, res.record.gamma, lin.target, nullptr);
  }
  finish(res, state, obj);
  return res;
}

StepResult afw_step(SolverState& state, const Objective& obj, const Polytope& poly, const RunConfig& config,
                    long k) {
  const Linearization lin = linearize(state, obj, poly);
  const auto [away, mu] = away_vertex(state.rep, lin.gradient);
  const Vector& g = lin.gradient;

  StepResult res;
  res.record.k = k;
  const bool toward = g.dot(lin.target.coords + away.coords - 2.0 * lin.x) <= 0.0 || state.rep.size() == 1;
  if (toward) {
    res.record.step.tag = StepTag::FrankWolfe;
    res.record.gamma_max = 1.0;
    res.direction = lin.target.coords - lin.x;
  } else {
    res.record.step.tag = StepTag::Away;
    res.record.gamma_max = mu / (1.0 - mu);
    res.direction = lin.x - away.coords;
  }
  res.record.directional_derivative = g.dot(res.direction);
  if (res.direction.squaredNorm() > 0.0) {
    res.record.gamma = choose_step(obj, config, k, g, res.direction, res.record.gamma_max);
    const auto outcome =
        state.rep.update(res.record.step.tag, res.record.gamma, lin.target, toward ? nullptr : &away);
    res.record.step.is_drop = !toward && outcome.away_dropped;
  }
  finish(res, state, obj);
  return res;
}

StepResult pfw_step(SolverState& state, const Objective& obj, const Polytope& poly, const RunConfig& config,
                    long k) {
  const Linearization lin = linearize(state, obj, poly);
  const auto [away, mu] = away_vertex(state.rep, lin.gradient);

  StepResult res;
  res.record.k = k;
  res.record.step.tag = StepTag::Pairwise;
  res.record.gamma_max = mu;
  res.direction = lin.target.coords - away.coords;
  res.record.directional_derivative = lin.gradient.dot(res.direction);
  if (lin.target.id != away.id && res.direction.squaredNorm() > 0.0) {
    res.record.gamma = choose_step(obj, config, k, lin.gradient, res.direction, mu);
    const auto outcome = state.rep.update(StepTag::Pairwise, res.record.gamma, lin.target, &away);
    if (outcome.away_dropped) {
      res.record.step.is_drop = outcome.target_was_active;
      res.record.step.is_swap = !outcome.target_was_active;
    }
  }
  finish(res, state, obj);
  return res;
}

}  // namespace sfw
