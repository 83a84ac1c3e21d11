#pragma once

#include <cstdint>

namespace contour {

// Attack-economics inputs. difficulty is the Bitcoin difficulty figure;
// rig_hashrate is hashes per second per rig; block_reward is in BTC.
struct mining_params {
    double difficulty = 0;
    double joules_per_hash = 0;
    double usd_per_joule = 0;
    double rig_hashrate = 0;
    double rig_cost = 0;
    double block_reward = 0;
    double btc_usd = 0;
};

// December 2017 snapshot; historical, prices volatile.
mining_params december_2017_params();

// 2^48 * D / (2^16 - 1).
double expected_hashes_per_block(double difficulty);

// Expected hashes times J times E.
double electricity_cost_per_block(const mining_params& p);

// Rigs to find a block every seconds_per_block on average, rounded up.
uint64_t rigs_required(const mining_params& p, double seconds_per_block);

// Cost to mine k private blocks within the attack window while the victim
// is eclipsed. Forfeited rewards are reported separately: the blocks can
// never be published, so their rewards are lost, not spent.
struct splitview_cost {
    double electricity_usd = 0;
    uint64_t rigs = 0;
    double hardware_usd = 0;
    double forfeited_usd = 0;
    double total_usd = 0;
};

splitview_cost eclipse_splitview_cost(const mining_params& p, uint32_t k,
                                      double attack_window_seconds);

struct majority_cost {
    double electricity_usd_per_hour = 0;
    uint64_t rigs = 0;
    double hardware_usd = 0;
};

// Cost of wielding 51% of network_hashrate (hashes per second).
majority_cost majority_attack_cost(const mining_params& p, double network_hashrate);

} // namespace contour
