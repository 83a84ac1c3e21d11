#pragma once

#include <contour/archivist.hpp>
#include <contour/auditor.hpp>
#include <contour/monitor.hpp>

#include <filesystem>
#include <vector>

namespace contour {

// Scripted deterministic runs. Each scenario builds a fresh chain, plays
// one protocol story, checks every role against it, and exports the
// artifacts (blocks, data, header stores, proofs, wallet, summary.json)
// under the work directory so the same run can be replayed through the
// CLI role commands.

// Three batches published honestly; every role agrees with every other.
struct honest_result {
    uint32_t tip_height = 0;
    digest32 tip_hash;
    std::string authority;
    size_t batches = 0;
    size_t statements = 0;
    size_t proofs_accepted = 0;
    // Commit txids in submission order; the monitor scan must find
    // exactly this set (scenario ledger oracle).
    std::vector<digest32> commit_txids;
    bool monitor_clean = false;
    bool archivist_covered_tip = false;

    bool passed() const {
        return statements > 0 && proofs_accepted == statements && monitor_clean &&
               archivist_covered_tip;
    }
};

honest_result run_honest_scenario(const std::filesystem::path& work);

// Split view: the authority forks at the tip and buries a rogue
// commitment in a private branch. The honest auditor rejects the rogue
// proof for lack of a known header; an eclipsed auditor fed only the
// fork accepts it, but its staleness alarm fires once the forged branch
// stops producing blocks.
struct splitview_result {
    uint32_t fork_height = 0;
    uint32_t rogue_commit_height = 0;
    digest32 rogue_digest;
    verify_result honest_verdict;
    verify_result eclipsed_verdict;
    verify_result genuine_verdict;
    staleness eclipsed_at_boundary = staleness::ok;
    staleness eclipsed_past_boundary = staleness::ok;
    staleness honest_past_boundary = staleness::ok;
    // Quiet seconds after the eclipsed tip at which the alarm first fires.
    int64_t alarm_after_secs = 0;

    bool passed() const {
        return !honest_verdict.accepted && honest_verdict.reason == reject_reason::unknown_header &&
               eclipsed_verdict.accepted && genuine_verdict.accepted &&
               eclipsed_at_boundary == staleness::ok &&
               eclipsed_past_boundary == staleness::eclipse_suspected &&
               honest_past_boundary == staleness::ok;
    }
};

splitview_result run_splitview_scenario(const std::filesystem::path& work);

// Withholding: one batch is committed on chain but its manifest is never
// published. Inclusion still verifies, yet the monitor flags the missing
// data, the archivist's covered tip freezes below the commitment, and
// the auditor's coverage check refuses the proof.
struct withholding_result {
    uint32_t published_height = 0;
    uint32_t withheld_height = 0;
    availability published_status = availability::unchecked;
    availability withheld_status = availability::unchecked;
    size_t monitor_alerts = 0;
    uint32_t covered_tip = 0;
    coverage published_coverage = coverage::not_covered;
    coverage withheld_coverage = coverage::covered;
    verify_result withheld_inclusion;

    bool passed() const {
        return published_status == availability::available &&
               withheld_status == availability::missing_data && monitor_alerts == 1 &&
               covered_tip == withheld_height - 1 && published_coverage == coverage::covered &&
               withheld_coverage == coverage::not_covered && withheld_inclusion.accepted;
    }
};

withholding_result run_withholding_scenario(const std::filesystem::path& work);

} // namespace contour
