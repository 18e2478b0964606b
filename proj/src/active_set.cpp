#include "sfw/active_set.hpp"

#include <cmath>
#include <limits>

namespace sfw {

std::string to_string(StepTag tag) {
  switch (tag) {
    case StepTag::None: return "init";
    case StepTag::FrankWolfe: return "FW";
    case StepTag::Away: return "Away";
    case StepTag::Pairwise: return "Pairwise";
    case StepTag::Projection: return "Prox";
  }
  return "?";
}

std::string StepKind::label() const {
  std::string s = to_string(tag);
  if (is_swap) return s + "-swap";
  if (is_drop) return s + "-drop";
  return s;
}

VertexRepresentation::VertexRepresentation(const Vertex& start) : point_(start.coords) {
  entries_.emplace(start.id, Entry{1.0, start.coords});
}

double VertexRepresentation::weight(VertexId id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? 0.0 : it->second.weight;
}

double VertexRepresentation::weight_sum() const {
  double s = 0.0;
  for (const auto& [id, e] : entries_) s += e.weight;
  return s;
}

Vector VertexRepresentation::recompute_point() const {
  Vector x = Vector::Zero(point_.size());
  for (const auto& [id, e] : entries_) x.noalias() += e.weight * e.coords;
  return x;
}

double VertexRepresentation::max_step(StepTag tag, VertexId away_id) const {
  switch (tag) {
    case StepTag::FrankWolfe: return 1.0;
    case StepTag::Away: {
      const double mu = weight(away_id);
      return mu >= 1.0 ? std::numeric_limits<double>::infinity() : mu / (1.0 - mu);
    }
    case StepTag::Pairwise: return weight(away_id);
    default: throw InvalidArgument("max_step: not an active-set step");
  }
}

void VertexRepresentation::renormalize() {
  const double s = weight_sum();
  for (auto& [id, e] : entries_) e.weight /= s;
  point_ = recompute_point();
}

VertexRepresentation::UpdateOutcome VertexRepresentation::update(StepTag tag, double gamma,
                                                                 const Vertex& target,
                                                                 const Vertex* away) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("vru_update: gamma must be >= 0");
  if (target.coords.size() != point_.size())
    throw DimensionMismatch("vru_update: target vertex", point_.size(), target.coords.size());
  UpdateOutcome out;
  out.target_was_active = is_active(target.id);
  if (gamma == 0.0) return out;

  auto check_away = [&]() -> Entry& {
    if (away == nullptr) throw InvalidArgument("vru_update: away vertex required");
    const auto it = entries_.find(away->id);
    if (it == entries_.end()) throw InvalidArgument("vru_update: away vertex is not active");
    return it->second;
  };
  auto check_range = [&](double gmax) {
    if (gamma > gmax * (1.0 + 1e-12) + 1e-15)
      throw InvalidArgument("vru_update: gamma " + std::to_string(gamma) + " exceeds max step " +
                            std::to_string(gmax));
  };

  switch (tag) {
    case StepTag::FrankWolfe: {
      check_range(1.0);
      if (gamma >= 1.0) {
        entries_.clear();
        entries_.emplace(target.id, Entry{1.0, target.coords});
        point_ = target.coords;
        break;
      }
      point_ += gamma * (target.coords - point_);
      for (auto it = entries_.begin(); it != entries_.end();) {
        it->second.weight *= (1.0 - gamma);
        if (it->first != target.id && it->second.weight <= kDropThreshold) {
          it = entries_.erase(it);
        } else {
          ++it;
        }
      }
      auto [it, inserted] = entries_.try_emplace(target.id, Entry{0.0, target.coords});
      it->second.weight += gamma;
      break;
    }
    case StepTag::Away: {
      Entry& u = check_away();
      const double mu_u = u.weight;
      check_range(mu_u >= 1.0 ? std::numeric_limits<double>::infinity() : mu_u / (1.0 - mu_u));
      point_ += gamma * (point_ - away->coords);
      for (auto& [id, e] : entries_) {
        if (id != away->id) e.weight *= (1.0 + gamma);
      }
      u.weight = mu_u * (1.0 + gamma) - gamma;
      if (u.weight <= kDropThreshold) {
        entries_.erase(away->id);
        out.away_dropped = true;
      }
      break;
    }
    case StepTag::Pairwise: {
      Entry& u = check_away();
      check_range(u.weight);
      if (away->id == target.id) break;
      point_ += gamma * (target.coords - away->coords);
      u.weight -= gamma;
      auto [it, inserted] = entries_.try_emplace(target.id, Entry{0.0, target.coords});
      it->second.weight += gamma;
      if (entries_.at(away->id).weight <= kDropThreshold) {
        entries_.erase(away->id);
        out.away_dropped = true;
      }
      break;
    }
    default: throw InvalidArgument("vru_update: unsupported step tag");
  }

  if (entries_.size() == 1) {
    auto& only = entries_.begin()->second;
    only.weight = 1.0;
    point_ = only.coords;
  } else if (++updates_ % kRenormalizePeriod == 0) {
    renormalize();
  }
  return out;
}

std::pair<Vertex, double> away_vertex(const VertexRepresentation& rep, const Vector& g) {
  if (rep.size() == 0) throw InvalidArgument("away_vertex: empty representation");
  const VertexRepresentation::Entry* best = nullptr;
  VertexId best_id = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& [id, e] : rep.entries()) {
    const double value = g.dot(e.coords);
    if (best == nullptr || value > best_value) {
      best = &e;
      best_id = id;
      best_value = value;
    }
  }
  return {Vertex{best_id, best->coords}, best->weight};
}

VertexRepresentation vru_update(VertexRepresentation rep, StepTag tag, double gamma,
                                const Vertex& target, const Vertex* away) {
  rep.update(tag, gamma, target, away);
  return rep;
}

}  // namespace sfw
