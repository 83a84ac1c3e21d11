#include <contour/scenario.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace contour {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int64_t genesis_time = 1500000000;

// Fresh chain with the authority wallet funded by a faucet payment in
// block 1. Fixed key, fixed clock: runs are byte-reproducible.
struct stage {
    sim_chain chain;
    ec_key key;
    wallet funds;
    int64_t clock = genesis_time;
    fs::path work;
    fs::path data_dir;

    explicit stage(const fs::path& w)
        : key(ec_key::from_hex(
              "00000000000000000000000000000000000000000000000000000000000a0701")),
          funds(key),
          work(w),
          data_dir(w / "data") {
        fs::create_directories(data_dir);
        funding_source miner = chain.take_miner_funds();
        transaction pay = build_payment(miner, funds.address(), 4000000000, 10000);
        chain.submit_tx(pay);
        mine();
        funds.receive(pay);
    }

    const block& mine(sim_chain::branch_id br = 0) {
        clock += 600;
        return chain.mine_block(clock, br);
    }
};

struct story_batch {
    batch b;
    commitment cmt;
    uint32_t height = 0;
};

// Commits n statements named pool/<tag>-<i>.deb in one block. When
// publish is set the statement files and manifest land in data_dir.
story_batch commit_story_batch(stage& st, const std::string& tag, size_t n, bool publish,
                               sim_chain::branch_id br = 0) {
    story_batch out;
    std::vector<std::string> contents;
    for (size_t i = 0; i < n; ++i) {
        std::string content = "payload " + tag + "-" + std::to_string(i) + "\n";
        std::string filename = "pool/" + tag + "-" + std::to_string(i) + ".deb";
        add_statement(out.b, sha256(str_span(content)), filename);
        contents.push_back(std::move(content));
    }
    sim_submitter submitter(st.chain, br);
    out.cmt = commit(out.b, submitter, st.funds, 40000);
    const block& blk = st.mine(br);
    out.height = st.chain.tip_height(br);
    confirm(out.b, blk, out.height);
    if (publish) {
        for (size_t i = 0; i < n; ++i) {
            fs::path target = st.data_dir / out.b.entries()[i].filename;
            fs::create_directories(target.parent_path());
            atomic_write_file(target, str_span(contents[i]));
        }
        write_manifest(out.b, st.data_dir);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    atomic_write_file(path, str_span(text));
}

void export_blocks(const sim_chain& chain, sim_chain::branch_id br, const fs::path& dir) {
    fs::create_directories(dir);
    for (uint32_t h = 0; h <= chain.tip_height(br); ++h) {
        bytes raw = chain.block_at(h, br).serialize();
        atomic_write_file(dir / (std::to_string(h) + ".blk"), as_span(raw));
    }
}

void export_proof(const fs::path& dir, const std::string& name, const inclusion_proof& proof,
                  const digest32& digest) {
    fs::create_directories(dir);
    bytes raw = proof.serialize();
    atomic_write_file(dir / (name + ".bin"), as_span(raw));
    write_text(dir / (name + ".digest"), digest.hex() + "\n");
}

void write_summary(const fs::path& work, const json& j) {
    write_text(work / "summary.json", j.dump(2) + "\n");
}

header_store synced_store(const stage& st, sim_chain::branch_id br, int64_t arrival) {
    header_store store =
        header_store::with_checkpoint(st.chain.block_hash_at(0, br), 0, genesis_time);
    sync(store, st.chain.header_stream(st.chain.block_hash_at(0, br), br), arrival);
    return store;
}

auditor_policy policy_for(const stage& st) {
    auditor_policy pol;
    pol.authority = st.funds.address();
    return pol;
}

} // namespace

honest_result run_honest_scenario(const fs::path& work) {
    stage st(work);
    honest_result out;
    out.authority = st.funds.address().str();

    std::vector<story_batch> published;
    const size_t sizes[] = {3, 5, 2};
    for (size_t j = 0; j < 3; ++j)
        published.push_back(commit_story_batch(st, "demo-" + std::to_string(j), sizes[j], true));
    for (int i = 0; i < 6; ++i) st.mine();

    out.tip_height = st.chain.tip_height();
    out.tip_hash = st.chain.tip_hash();
    out.batches = published.size();
    for (const story_batch& sb : published) {
        out.statements += sb.b.size();
        out.commit_txids.push_back(sb.cmt.txid);
    }

    header_store store = synced_store(st, 0, st.clock);
    auditor_policy pol = policy_for(st);
    for (size_t j = 0; j < published.size(); ++j) {
        const story_batch& sb = published[j];
        const block& blk = st.chain.block_at(sb.height);
        for (size_t i = 0; i < sb.b.size(); ++i) {
            inclusion_proof proof = prove_inclusion(sb.b, blk, i, out.tip_height);
            const digest32& digest = sb.b.entries()[i].digest;
            if (check_inclusion(store, pol, digest, proof).accepted) ++out.proofs_accepted;
            export_proof(work / "proofs", "demo-" + std::to_string(j) + "-" + std::to_string(i),
                         proof, digest);
        }
    }
    store.save(work / "store.bin");

    sim_block_source blocks(st.chain);
    scan_result scan = get_commits(blocks, pol.authority, 0, out.tip_height);
    dir_data_source data(st.data_dir);
    bool all_available = true;
    for (commitment_record& rec : scan.records) {
        check_availability(rec, data);
        all_available = all_available && rec.status == availability::available;
    }
    bool ledger_match = scan.records.size() == out.commit_txids.size();
    for (size_t i = 0; ledger_match && i < scan.records.size(); ++i)
        ledger_match = scan.records[i].txid == out.commit_txids[i];
    monitor_report rep = report(scan.records);
    out.monitor_clean = scan.complete && ledger_match && all_available && rep.alert_count() == 0;
    write_text(work / "monitor-report.txt", rep.render());

    archivist arch(work / "archive", arch_state{st.chain.block_hash_at(0), 0});
    archivist_sync_result mirrored =
        sync_archivist(arch, blocks, pol.authority, out.tip_height, data);
    out.archivist_covered_tip = mirrored.complete && mirrored.covered_after == out.tip_height;

    export_blocks(st.chain, 0, work / "blocks");
    st.funds.save(work / "wallet.json");

    json txids = json::array();
    for (const digest32& txid : out.commit_txids) txids.push_back(txid.hex());
    write_summary(work, json{{"scenario", "honest"},
                             {"tip_height", out.tip_height},
                             {"tip_hash", out.tip_hash.hex()},
                             {"authority", out.authority},
                             {"batches", out.batches},
                             {"statements", out.statements},
                             {"proofs_accepted", out.proofs_accepted},
                             {"commit_txids", txids},
                             {"monitor_clean", out.monitor_clean},
                             {"archivist_covered_tip", out.archivist_covered_tip},
                             {"passed", out.passed()}});
    return out;
}

splitview_result run_splitview_scenario(const fs::path& work) {
    stage st(work);
    splitview_result out;

    story_batch genuine = commit_story_batch(st, "genuine", 3, true);
    for (int i = 0; i < 6; ++i) st.mine();
    out.fork_height = st.chain.tip_height();

    // Private branch: the rogue commitment goes in the first adversary
    // block and six more bury it to verification depth.
    sim_chain::branch_id fork = st.chain.fork_at(out.fork_height);
    story_batch rogue = commit_story_batch(st, "rogue", 1, false, fork);
    for (int i = 0; i < 6; ++i) st.mine(fork);
    out.rogue_commit_height = rogue.height;
    out.rogue_digest = rogue.b.entries()[0].digest;

    inclusion_proof rogue_proof = prove_inclusion(
        rogue.b, st.chain.block_at(rogue.height, fork), 0, st.chain.tip_height(fork));
    inclusion_proof genuine_proof = prove_inclusion(
        genuine.b, st.chain.block_at(genuine.height), 0, st.chain.tip_height());

    // Both views sync at the same wall-clock instant; afterwards only the
    // honest chain keeps producing blocks.
    int64_t eclipse_start = st.clock;
    header_store eclipsed = synced_store(st, fork, eclipse_start);
    auditor_policy pol = policy_for(st);

    out.eclipsed_verdict = check_inclusion(eclipsed, pol, out.rogue_digest, rogue_proof);
    out.alarm_after_secs = pol.max_block_interval + 1;
    out.eclipsed_at_boundary =
        staleness_alarm(eclipsed, pol, eclipse_start + pol.max_block_interval);
    out.eclipsed_past_boundary = staleness_alarm(eclipsed, pol, eclipse_start + out.alarm_after_secs);

    header_store honest = synced_store(st, 0, eclipse_start);
    out.honest_verdict = check_inclusion(honest, pol, out.rogue_digest, rogue_proof);
    out.genuine_verdict = check_inclusion(honest, pol, genuine.b.entries()[0].digest, genuine_proof);

    // The honest view follows new blocks through the same quiet window,
    // so only the eclipsed store goes stale.
    while (st.clock < eclipse_start + pol.max_block_interval) {
        st.mine();
        sync(honest, st.chain.header_stream(honest.tip().hash), st.clock);
    }
    out.honest_past_boundary = staleness_alarm(honest, pol, eclipse_start + out.alarm_after_secs);

    honest.save(work / "store.bin");
    eclipsed.save(work / "store-eclipsed.bin");
    export_proof(work / "proofs", "genuine-0", genuine_proof, genuine.b.entries()[0].digest);
    export_proof(work / "proofs", "rogue-0", rogue_proof, out.rogue_digest);
    export_blocks(st.chain, 0, work / "blocks");
    export_blocks(st.chain, fork, work / "blocks-fork");
    st.funds.save(work / "wallet.json");

    write_summary(work,
                  json{{"scenario", "s1-splitview"},
                       {"fork_height", out.fork_height},
                       {"rogue_commit_height", out.rogue_commit_height},
                       {"rogue_digest", out.rogue_digest.hex()},
                       {"honest_verdict", reject_reason_name(out.honest_verdict.reason)},
                       {"honest_accepted", out.honest_verdict.accepted},
                       {"eclipsed_accepted", out.eclipsed_verdict.accepted},
                       {"genuine_accepted", out.genuine_verdict.accepted},
                       {"alarm_after_secs", out.alarm_after_secs},
                       {"eclipsed_alarm_fired", out.eclipsed_past_boundary ==
                                                    staleness::eclipse_suspected},
                       {"honest_alarm_fired", out.honest_past_boundary ==
                                                  staleness::eclipse_suspected},
                       {"passed", out.passed()}});
    return out;
}

withholding_result run_withholding_scenario(const fs::path& work) {
    stage st(work);
    withholding_result out;

    story_batch published = commit_story_batch(st, "published", 2, true);
    story_batch withheld = commit_story_batch(st, "withheld", 3, false);
    for (int i = 0; i < 6; ++i) st.mine();
    out.published_height = published.height;
    out.withheld_height = withheld.height;
    uint32_t tip = st.chain.tip_height();

    sim_block_source blocks(st.chain);
    auditor_policy pol = policy_for(st);
    scan_result scan = get_commits(blocks, pol.authority, 0, tip);
    dir_data_source data(st.data_dir);
    for (commitment_record& rec : scan.records) {
        check_availability(rec, data);
        if (rec.height == published.height) out.published_status = rec.status;
        if (rec.height == withheld.height) out.withheld_status = rec.status;
    }
    monitor_report rep = report(scan.records);
    out.monitor_alerts = rep.alert_count();
    write_text(work / "monitor-report.txt", rep.render());

    archivist arch(work / "archive", arch_state{st.chain.block_hash_at(0), 0});
    sync_archivist(arch, blocks, pol.authority, tip, data);
    out.covered_tip = arch.state().height;

    header_store store = synced_store(st, 0, st.clock);
    inclusion_proof published_proof =
        prove_inclusion(published.b, st.chain.block_at(published.height), 0, tip);
    inclusion_proof withheld_proof =
        prove_inclusion(withheld.b, st.chain.block_at(withheld.height), 0, tip);
    out.withheld_inclusion =
        check_inclusion(store, pol, withheld.b.entries()[0].digest, withheld_proof);
    out.published_coverage = check_arch_state(store, arch.state(), published_proof);
    out.withheld_coverage = check_arch_state(store, arch.state(), withheld_proof);

    store.save(work / "store.bin");
    export_proof(work / "proofs", "published-0", published_proof,
                 published.b.entries()[0].digest);
    export_proof(work / "proofs", "withheld-0", withheld_proof, withheld.b.entries()[0].digest);
    export_blocks(st.chain, 0, work / "blocks");
    st.funds.save(work / "wallet.json");

    write_summary(work, json{{"scenario", "s2-withholding"},
                             {"published_height", out.published_height},
                             {"withheld_height", out.withheld_height},
                             {"published_status", availability_name(out.published_status)},
                             {"withheld_status", availability_name(out.withheld_status)},
                             {"monitor_alerts", out.monitor_alerts},
                             {"covered_tip", out.covered_tip},
                             {"withheld_covered", out.withheld_coverage == coverage::covered},
                             {"withheld_inclusion_accepted", out.withheld_inclusion.accepted},
                             {"passed", out.passed()}});
    return out;
}

} // namespace contour
