#include <contour/cli.hpp>

namespace contour {

const std::vector<cli_command>& cli_command_table() {
    static const std::vector<cli_command> table = {
        {"authority commit", {"add_statement", "commit"}},
        {"authority prove", {"restore_commitment", "confirm", "prove_inclusion"}},
        {"authority manifest", {"write_manifest"}},
        {"auditor sync", {"header_store", "sync", "staleness_alarm"}},
        {"auditor verify", {"check_inclusion"}},
        {"auditor archcheck", {"check_arch_state"}},
        {"monitor scan", {"get_commits", "check_availability"}},
        {"monitor report", {"report"}},
        {"archivist serve", {"ingest", "sync_archivist", "serve_state", "serve_object"}},
        {"cost report",
         {"expected_hashes_per_block", "electricity_cost_per_block", "rigs_required",
          "eclipse_splitview_cost", "majority_attack_cost"}},
        {"sim run", {"run_honest_scenario", "run_splitview_scenario", "run_withholding_scenario"}},
        {"sim serve", {"sim_server", "submit_tx", "header_stream", "get_block"}},
        {"sim mine", {"mine_block"}},
        {"debfeed parse", {"parse_packages", "as_statements"}},
        {"debfeed diff", {"diff_batches"}},
    };
    return table;
}

} // namespace contour
