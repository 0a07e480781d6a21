#pragma once

#include "mtforge/core/types.hpp"

#include <vector>

namespace mtforge {

/// Cyclic presentation schedule: rounds[r][pos] is the candidate seated at
/// position pos in round r. Round 0 is the identity order; each later round
/// shifts every candidate one position further, so each candidate occupies
/// each position exactly once across the n rounds.
struct RotationSchedule {
    int n = 0;
    std::vector<std::vector<int>> rounds;
};

RotationSchedule rotation_schedule(int n);

/// Mean rank per candidate across rounds; winner minimizes the mean, with
/// ties broken by most rank-1 finishes, then lowest candidate index.
RankAggregate aggregate_ranks(const std::vector<RankingRound>& rounds);

} // namespace mtforge
