#pragma once

#include "sfw/polytope.hpp"

#include <map>
#include <string>
#include <utility>

namespace sfw {

enum class StepTag { None, FrankWolfe, Away, Pairwise, Projection };

std::string to_string(StepTag tag);

struct StepKind {
  StepTag tag = StepTag::None;
  bool is_drop = false;
  bool is_swap = false;  // pairwise only

  std::string label() const;
};

/// Convex-combination representation of the iterate: active vertices U
/// with strictly positive weights mu summing to one, plus the cached point
/// sum mu_v v.
class VertexRepresentation {
public:
  /// Weights at or below this value after an update count as zero.
  static constexpr double kDropThreshold = 1e-12;
  /// Weights are rescaled to sum to one and the point rebuilt this often.
  static constexpr int kRenormalizePeriod = 100;

  struct Entry {
    double weight;
    Vector coords;
  };

  struct UpdateOutcome {
    bool away_dropped = false;     // the away vertex left the active set
    bool target_was_active = false;
  };

  explicit VertexRepresentation(const Vertex& start);

  const Vector& point() const { return point_; }
  std::size_t size() const { return entries_.size(); }
  bool is_active(VertexId id) const { return entries_.count(id) != 0; }
  /// Weight of the vertex, zero when inactive.
  double weight(VertexId id) const;
  const std::map<VertexId, Entry>& entries() const { return entries_; }
  double weight_sum() const;
  /// sum mu_v v recomputed from scratch.
  Vector recompute_point() const;

  /// Largest admissible step for the given direction type.
  double max_step(StepTag tag, VertexId away_id) const;

  /// Applies one step in place. `away` is required for Away and Pairwise.
  UpdateOutcome update(StepTag tag, double gamma, const Vertex& target, const Vertex* away);

private:
  void renormalize();

  std::map<VertexId, Entry> entries_;
  Vector point_;
  long updates_ = 0;
};

/// The active vertex maximizing <g, v>, with its weight. Ties go to the
/// smallest id.
std::pair<Vertex, double> away_vertex(const VertexRepresentation& rep, const Vector& g);

/// Functional form of VertexRepresentation::update.
VertexRepresentation vru_update(VertexRepresentation rep, StepTag tag, double gamma,
                                const Vertex& target, const Vertex* away);

}  // namespace sfw
