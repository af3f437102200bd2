#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hetrec/errors.hpp"
#include "hetrec/interaction.hpp"

namespace hetrec {

/// One evaluation case: the user's held-out ground truth and the cut instant.
/// No training record of this user may carry a timestamp >= cut.
struct EvalCase {
  std::string user_id;
  std::set<std::string> truth;
  Timestamp cut = 0;
};

struct EvalSplit {
  std::vector<InteractionRecord> train;  // survives test-leakage removal
  std::vector<EvalCase> validation;
  std::vector<EvalCase> test;

  /// Training records additionally purged of validation leakage; the graph the
  /// optimizer trains on.
  std::vector<InteractionRecord> validation_train() const {
    return remove_leakage(train, validation);
  }

  static std::vector<InteractionRecord> remove_leakage(std::span<const InteractionRecord> records,
                                                       std::span<const EvalCase> cases) {
    std::map<std::string, Timestamp> cut;
    for (const auto& c : cases) {
      auto it = cut.find(c.user_id);
      if (it == cut.end() || c.cut < it->second) cut[c.user_id] = c.cut;
    }
    std::vector<InteractionRecord> kept;
    kept.reserve(records.size());
    for (const auto& r : records) {
      auto it = cut.find(r.user_id);
      if (it != cut.end() && r.timestamp >= it->second) continue;
      kept.push_back(r);
    }
    return kept;
  }
};

/// Exhaustive post-scan: training records of any case's user at or after that
/// case's cut timestamp. Empty on a sound split.
inline std::vector<std::size_t> leakage_violations(std::span<const InteractionRecord> train,
                                                   std::span<const EvalCase> cases) {
  std::map<std::string, Timestamp> cut;
  for (const auto& c : cases) {
    auto it = cut.find(c.user_id);
    if (it == cut.end() || c.cut < it->second) cut[c.user_id] = c.cut;
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto it = cut.find(train[i].user_id);
    if (it != cut.end() && train[i].timestamp >= it->second) bad.push_back(i);
  }
  return bad;
}

namespace detail {

struct TargetEvent {
  Timestamp ts;
  std::size_t order;  // first-appearance index, the tie-break
  std::string user_id;
  std::set<std::string> items;
};

// Latest target-interaction record per user (ties by input order). Users with
// a single target record do not qualify.
inline std::vector<EvalCase> leave_one_out_cases(std::span<const InteractionRecord> records,
                                                 const std::string& target_interaction,
                                                 const std::string& target_tag) {
  struct Last {
    Timestamp ts = 0;
    std::size_t order = 0;
    std::string item;
    std::size_t count = 0;
  };
  std::map<std::string, Last> per_user;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.interaction != target_interaction || r.object_tag != target_tag) continue;
    auto& last = per_user[r.user_id];
    ++last.count;
    if (last.count == 1 || r.timestamp > last.ts || (r.timestamp == last.ts && i > last.order)) {
      last.ts = r.timestamp;
      last.order = i;
      last.item = r.object_id;
    }
  }
  std::vector<EvalCase> cases;
  for (const auto& [user, last] : per_user)
    if (last.count > 1) cases.push_back({user, {last.item}, last.ts});
  return cases;
}

inline std::vector<TargetEvent> group_events(std::span<const InteractionRecord> records,
                                             const std::string& target_interaction) {
  std::map<std::pair<std::string, Timestamp>, std::size_t> index;
  std::vector<TargetEvent> events;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.interaction != target_interaction) continue;
    auto key = std::make_pair(r.user_id, r.timestamp);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, events.size());
      events.push_back({r.timestamp, i, r.user_id, {r.object_id}});
    } else {
      events[it->second].items.insert(r.object_id);
    }
  }
  std::sort(events.begin(), events.end(), [](const TargetEvent& a, const TargetEvent& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.order < b.order;
  });
  return events;
}

// Latest ceil(fraction * events) events become cases.
inline std::vector<EvalCase> temporal_cases(std::span<const InteractionRecord> records,
                                            const std::string& target_interaction, double fraction) {
  auto events = group_events(records, target_interaction);
  if (events.size() < 2)
    throw DataError("temporal split needs at least 2 target events, got " +
                    std::to_string(events.size()));
  const auto take = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(events.size())));
  std::vector<EvalCase> cases;
  for (std::size_t i = events.size() - take; i < events.size(); ++i)
    cases.push_back({events[i].user_id, events[i].items, events[i].ts});
  return cases;
}

inline void assert_sound(const EvalSplit& split) {
  if (!leakage_violations(split.train, split.test).empty())
    throw ComputeError("internal: leakage in test split");
  const auto vt = split.validation_train();
  if (!leakage_violations(vt, split.validation).empty())
    throw ComputeError("internal: leakage in validation split");
}

}  // namespace detail

/// Leave-one-out protocol: for each user with more than one target
/// interaction, the latest becomes the test case and all of that user's
/// records from that instant on leave the training set. Validation re-applies
/// the rule to the remaining training records.
inline EvalSplit split_leave_one_out(std::span<const InteractionRecord> records,
                                     const std::string& target_interaction,
                                     const std::string& target_tag) {
  EvalSplit split;
  split.test = detail::leave_one_out_cases(records, target_interaction, target_tag);
  if (split.test.empty()) throw DataError("leave-one-out split: no qualifying users");
  split.train = EvalSplit::remove_leakage(records, split.test);
  split.validation = detail::leave_one_out_cases(split.train, target_interaction, target_tag);
  detail::assert_sound(split);
  return split;
}

/// Temporal protocol: target interactions grouped into (user, timestamp)
/// events; the latest ceil(fraction * count) events form the test cases (items
/// of one event share a ground-truth set). Validation carves the same fraction
/// out of the remaining training records.
inline EvalSplit split_temporal(std::span<const InteractionRecord> records,
                                const std::string& target_interaction, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("split fraction must lie in (0,1)");
  EvalSplit split;
  split.test = detail::temporal_cases(records, target_interaction, fraction);
  split.train = EvalSplit::remove_leakage(records, split.test);
  try {
    split.validation = detail::temporal_cases(split.train, target_interaction, fraction);
  } catch (const DataError&) {
    split.validation = {};  // too few events left for a validation carve
  }
  detail::assert_sound(split);
  return split;
}

/// Seeded uniform subsample of the requested fraction (by record count),
/// original order preserved. Fraction 1 is the identity.
inline std::vector<InteractionRecord> subsample_training(std::span<const InteractionRecord> records,
                                                         double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("sample fraction must lie in (0,1]");
  if (fraction == 1.0) return {records.begin(), records.end()};
  const auto want = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(records.size())));
  std::vector<std::size_t> idx(records.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  std::vector<InteractionRecord> out;
  out.reserve(want);
  for (std::size_t i : idx) out.push_back(records[i]);
  return out;
}

}  // namespace hetrec
