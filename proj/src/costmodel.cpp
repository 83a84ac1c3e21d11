#include <contour/costmodel.hpp>

#include <contour/errors.hpp>

#include <cmath>

namespace contour {

namespace {

constexpr double two_pow_48 = 281474976710656.0;
constexpr double nonce_space = 65535.0;

void require_positive(double value, const char* name) {
    if (!(value > 0) || !std::isfinite(value))
        fail(errc::range, std::string(name) + " must be positive");
}

void validate(const mining_params& p) {
    require_positive(p.difficulty, "difficulty");
    require_positive(p.joules_per_hash, "joules_per_hash");
    require_positive(p.usd_per_joule, "usd_per_joule");
    require_positive(p.rig_hashrate, "rig_hashrate");
    require_positive(p.rig_cost, "rig_cost");
    require_positive(p.block_reward, "block_reward");
    require_positive(p.btc_usd, "btc_usd");
}

} // namespace

mining_params december_2017_params() {
    mining_params p;
    p.difficulty = 1347001430558.0;
    p.joules_per_hash = 9.82e-11;
    p.usd_per_joule = 2.8e-8;
    p.rig_hashrate = 14e12;
    p.rig_cost = 2400.0;
    p.block_reward = 12.5;
    p.btc_usd = 11620.0;
    return p;
}

double expected_hashes_per_block(double difficulty) {
    require_positive(difficulty, "difficulty");
    return two_pow_48 * difficulty / nonce_space;
}

double electricity_cost_per_block(const mining_params& p) {
    validate(p);
    return expected_hashes_per_block(p.difficulty) * p.joules_per_hash * p.usd_per_joule;
}

uint64_t rigs_required(const mining_params& p, double seconds_per_block) {
    validate(p);
    require_positive(seconds_per_block, "seconds_per_block");
    double n = expected_hashes_per_block(p.difficulty) / (p.rig_hashrate * seconds_per_block);
    return static_cast<uint64_t>(std::ceil(n));
}

splitview_cost eclipse_splitview_cost(const mining_params& p, uint32_t k,
                                      double attack_window_seconds) {
    validate(p);
    if (k < 1) fail(errc::range, "k must be at least 1");
    require_positive(attack_window_seconds, "attack_window_seconds");

    splitview_cost out;
    out.electricity_usd = static_cast<double>(k) * electricity_cost_per_block(p);
    out.rigs = rigs_required(p, attack_window_seconds / static_cast<double>(k));
    out.hardware_usd = static_cast<double>(out.rigs) * p.rig_cost;
    out.forfeited_usd = static_cast<double>(k) * p.block_reward * p.btc_usd;
    out.total_usd = out.electricity_usd + out.hardware_usd;
    return out;
}

majority_cost majority_attack_cost(const mining_params& p, double network_hashrate) {
    validate(p);
    require_positive(network_hashrate, "network_hashrate");

    majority_cost out;
    out.electricity_usd_per_hour = network_hashrate * 3600.0 * p.joules_per_hash * p.usd_per_joule;
    // Truncates: counts whole rigs the budget fields, unlike the demand
    // ceiling in rigs_required.
    out.rigs = static_cast<uint64_t>(std::floor(network_hashrate / p.rig_hashrate));
    out.hardware_usd = static_cast<double>(out.rigs) * p.rig_cost;
    return out;
}

} // namespace contour
