// Epoch-based variance-reduced comparators: SVRF (Frank-Wolfe steps) and
// Prox-SVRG (projected gradient steps). Both anchor each epoch at a
// reference point whose exact gradient is the control variate.
#include "sfw/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sfw {

namespace {

struct TraceBuilder {
  RunTrace& trace;
  const Objective& obj;
  const Polytope& poly;
  const RunConfig& config;
  double best;

  void initial(const Vector& x) {
    IterationRecord init;
    init.objective = obj.evaluate(x);
    init.running_min = init.objective;
    best = init.objective;
    trace.records.push_back(init);
  }

  // Appends a record; returns true when a stopping rule fired.
  bool push(IterationRecord rec, const Vector& x, double seconds) {
    rec.wall_seconds = seconds;
    rec.objective = obj.evaluate(x);
    best = std::min(best, rec.objective);
    rec.running_min = best;
    bool stop = false;
    if (trace.records.size() % static_cast<std::size_t>(config.gap_check_period) == 0) {
      rec.duality_gap = duality_gap(obj, poly, x);
      if (rec.duality_gap <= config.gap_tolerance) {
        trace.status = RunStatus::GapConverged;
        stop = true;
      }
    }
    trace.records.push_back(rec);
    if (!stop && config.objective_target && best <= *config.objective_target) {
      trace.status = RunStatus::TargetReached;
      stop = true;
    }
    return stop;
  }
};

RunTrace make_trace(const RunConfig& config, VertexId start) {
  RunTrace trace;
  trace.label = config.label.empty() ? to_string(config.algorithm) : config.label;
  trace.algorithm = config.algorithm;
  trace.start_vertex = start;
  trace.status = RunStatus::MaxIterations;
  return trace;
}

}  // namespace

RunTrace svrf_run(const Objective& obj, const Polytope& poly, const RunConfig& config) {
  validate(config);
  const Index n = obj.num_samples();
  const Vertex start = poly.first_vertex();
  RunTrace trace = make_trace(config, start.id);
  TraceBuilder out{trace, obj, poly, config, 0.0};

  Vector x = start.coords;
  out.initial(x);
  Rng rng(config.seed);
  Stopwatch clock;
  std::uint64_t cum = 0;
  long k_global = 0;
  bool done = config.max_iterations == 0;

  for (long epoch = 1; !done; ++epoch) {
    clock.start();
    const Vector anchor = x;
    const Vector anchor_grad = obj.full_gradient(anchor);
    cum += static_cast<std::uint64_t>(n);
    clock.stop();

    const long length = svrf_epoch_length(epoch);
    for (long k = 1; k <= length; ++k) {
      if (k_global >= config.max_iterations) {
        done = true;
        break;
      }
      if (clock.seconds() >= config.time_budget) {
        trace.status = RunStatus::TimeBudget;
        done = true;
        break;
      }
      ++k_global;
      clock.start();
      const std::uint64_t m = svrf_batch_size(k);
      const SampleBatch batch = (config.exact_full_batches && m >= static_cast<std::uint64_t>(n))
                                    ? SampleBatch::full_set(n)
                                    : draw_batch(n, m, rng);
      const Vector g = obj.sampled_gradient_difference(x, anchor, batch) + anchor_grad;
      cum += 2 * batch.size;
      const Vertex v = poly.lmo(g);
      const Vector d = v.coords - x;
      const double gamma = 2.0 / (static_cast<double>(k) + 1.0);
      x += gamma * d;
      clock.stop();

      IterationRecord rec;
      rec.k = k_global;
      rec.step.tag = StepTag::FrankWolfe;
      rec.gamma = gamma;
      rec.gamma_max = 1.0;
      rec.batch_size = batch.size;
      rec.cum_stoch_grads = cum;
      rec.directional_derivative = g.dot(d);
      if (out.push(rec, x, clock.seconds())) {
        done = true;
        break;
      }
    }
  }

  trace.final_point = x;
  trace.metadata["algorithm"] = "SVRF";
  trace.metadata["parameters"] = "step 2/(k+1); batch 96(k+1); epoch length 2^(t+3)-2; anchor = last iterate";
  trace.metadata["objective_semantics"] = "running_min is the plotted quantity";
  return trace;
}

RunTrace prox_svrg_run(const Objective& obj, const Polytope& poly, const RunConfig& config) {
  validate(config);
  if (!poly.has_projection())
    throw InvalidArgument("Prox-SVRG requires a polytope with a projection routine, got " + poly.describe());
  const Index n = obj.num_samples();
  const Vertex start = poly.first_vertex();
  RunTrace trace = make_trace(config, start.id);
  TraceBuilder out{trace, obj, poly, config, 0.0};

  const double L = config.prox_lipschitz == ProxLipschitz::MaxTerm ? obj.lipschitz_max()
                                                                   : obj.full_lipschitz_power_iteration(100);
  const double eta = prox_svrg_step(L);
  const long epoch_len = prox_svrg_epoch_length(n);
  const long stride = config.record_stride > 0 ? config.record_stride : std::max<long>(1, static_cast<long>(n) / 10);

  Vector anchor = start.coords;
  Vector x = anchor;
  out.initial(x);
  Rng rng(config.seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Stopwatch clock;
  std::uint64_t cum = 0;
  long k_global = 0;
  bool done = config.max_iterations == 0;

  while (!done) {
    clock.start();
    const Vector anchor_grad = obj.full_gradient(anchor);
    cum += static_cast<std::uint64_t>(n);
    Vector sum = Vector::Zero(x.size());
    clock.stop();

    long inner = 0;
    for (; inner < epoch_len; ++inner) {
      if (k_global >= config.max_iterations) {
        done = true;
        break;
      }
      if (clock.seconds() >= config.time_budget) {
        trace.status = RunStatus::TimeBudget;
        done = true;
        break;
      }
      ++k_global;
      clock.start();
      const Index i = pick(rng);
      const Vector v = obj.term_gradient_difference(i, x, anchor) + anchor_grad;
      x = poly.project(x - eta * v);
      sum += x;
      cum += 2;
      clock.stop();

      if (k_global % stride == 0) {
        IterationRecord rec;
        rec.k = k_global;
        rec.step.tag = StepTag::Projection;
        rec.gamma = eta;
        rec.gamma_max = eta;
        rec.batch_size = 1;
        rec.cum_stoch_grads = cum;
        if (out.push(rec, x, clock.seconds())) {
          done = true;
          break;
        }
      }
    }
    if (inner == epoch_len) {
      clock.start();
      anchor = sum / static_cast<double>(epoch_len);
      x = anchor;
      clock.stop();
    }
  }

  trace.final_point = x;
  trace.metadata["algorithm"] = "ProxSVRG";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", L);
  trace.metadata["lipschitz"] = buf;
  trace.metadata["lipschitz_estimator"] = to_string(config.prox_lipschitz);
  trace.metadata["parameters"] = "step 0.1/L; epoch length 2n; batch 1; anchor = epoch average";
  return trace;
}

}  // namespace sfw
