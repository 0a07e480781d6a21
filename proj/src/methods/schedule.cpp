#include "mtforge/methods/schedule.hpp"

#include "mtforge/core/error.hpp"

#include <algorithm>
#include <set>

namespace mtforge {

RotationSchedule rotation_schedule(int n) {
    if (n < 1) throw Error(ErrorCode::Validation, "n must be >= 1");
    RotationSchedule schedule;
    schedule.n = n;
    schedule.rounds.resize(n);
    for (int r = 0; r < n; ++r) {
        schedule.rounds[r].resize(n);
        for (int pos = 0; pos < n; ++pos)
            schedule.rounds[r][pos] = ((pos - r) % n + n) % n;
    }
    return schedule;
}

RankAggregate aggregate_ranks(const std::vector<RankingRound>& rounds) {
    if (rounds.empty()) throw Error(ErrorCode::Validation, "no rounds");

    std::set<int> candidates;
    for (const auto& [candidate, _] : rounds.front().ranks) candidates.insert(candidate);
    for (const auto& round : rounds) {
        std::set<int> these;
        for (const auto& [candidate, _] : round.ranks) these.insert(candidate);
        if (these != candidates)
            throw Error(ErrorCode::InconsistentRounds,
                        "rounds cover different candidate sets");
    }

    RankAggregate aggregate;
    std::map<int, int> first_places;
    for (int c : candidates) {
        double sum = 0;
        int firsts = 0;
        for (const auto& round : rounds) {
            int rank = round.ranks.at(c);
            sum += rank;
            if (rank == 1) ++firsts;
        }
        aggregate.avg_rank[c] = sum / static_cast<double>(rounds.size());
        first_places[c] = firsts;
    }

    double best = aggregate.avg_rank.begin()->second;
    for (const auto& [_, avg] : aggregate.avg_rank) best = std::min(best, avg);
    std::vector<int> leaders;
    for (const auto& [candidate, avg] : aggregate.avg_rank)
        if (avg == best) leaders.push_back(candidate);

    if (leaders.size() == 1) {
        aggregate.winner = leaders.front();
        return aggregate;
    }

    aggregate.tie_broken = true;
    int most_firsts = -1;
    for (int c : leaders) most_firsts = std::max(most_firsts, first_places[c]);
    std::vector<int> by_firsts;
    for (int c : leaders)
        if (first_places[c] == most_firsts) by_firsts.push_back(c);

    if (by_firsts.size() == 1) {
        aggregate.winner = by_firsts.front();
        aggregate.tie_rule_applied = TieRule::FirstPlaceCount;
    } else {
        aggregate.winner = *std::min_element(by_firsts.begin(), by_firsts.end());
        aggregate.tie_rule_applied = TieRule::LowestIndex;
    }
    return aggregate;
}

} // namespace mtforge
