// Copyright 2026 The admarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADMARKET_RANKING_HPP
#define ADMARKET_RANKING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "admarket/agents.hpp"
#include "admarket/errors.hpp"

namespace admarket {

/// An allocation: position j holds the agent ranked j-th by score.
/// Scores are non-increasing along the order; reads beyond the last
/// participant yield score 0.
class Ranking {
 public:
  struct Entry {
    AgentId id;
    double score;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Ranking() = default;

  explicit Ranking(std::vector<Entry> sorted_entries)
      : entries_(std::move(sorted_entries)) {
    positions_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      auto [it, inserted] = positions_.emplace(entries_[i].id, i + 1);
      if (!inserted) {
        throw ValidationError(Errc::duplicate_agent_id,
                              "agent '" + entries_[i].id + "' ranked twice");
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // 1-based position of an agent, nullopt if absent.
  std::optional<std::size_t> position_of(const AgentId& id) const {
    auto it = positions_.find(id);
    if (it == positions_.end()) return std::nullopt;
    return it->second;
  }

  const AgentId& agent_at(std::size_t position1) const {
    if (position1 == 0 || position1 > entries_.size()) {
      throw ValidationError(Errc::slot_out_of_range,
                            "no agent at position " + std::to_string(position1));
    }
    return entries_[position1 - 1].id;
  }

  // Score of the agent at `position1`; zero beyond the participant list.
  double score_at(std::size_t position1) const {
    if (position1 == 0 || position1 > entries_.size()) return 0.0;
    return entries_[position1 - 1].score;
  }

  std::vector<double> scores() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.score);
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<AgentId, std::size_t> positions_;
};

/// Rank-by-revenue ordering: score descending, ties broken by ascending
/// agent id so repeated runs allocate identically.
inline Ranking rank_by_score(std::vector<Ranking::Entry> participants) {
  for (const auto& p : participants) {
    if (!std::isfinite(p.score)) {
      throw ValidationError(Errc::nonfinite_number,
                            "agent '" + p.id + "' has a non-finite score");
    }
    if (p.score < 0.0) {
      throw ValidationError(Errc::negative_score,
                            "agent '" + p.id + "' has score < 0");
    }
  }
  std::sort(participants.begin(), participants.end(),
            [](const Ranking::Entry& a, const Ranking::Entry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  return Ranking(std::move(participants));  // ctor rejects duplicate ids
}

}  // namespace admarket

#endif  // ADMARKET_RANKING_HPP
