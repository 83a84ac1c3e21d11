#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainfix.hpp"

#include <contour/auditor.hpp>
#include <contour/authority.hpp>

#include <random>

using namespace contour;
using namespace testsupport;

TEST_CASE("batch accepts statements and rejects duplicates") {
    batch b;
    digest32 d = sha256(str_span("one"));
    add_statement(b, d, "pool/one.deb");
    CHECK(b.size() == 1);
    CHECK_THROWS_AS(add_statement(b, d, "pool/other.deb"), error);
    CHECK_THROWS_AS(add_statement(b, sha256(str_span("two")), ""), error);
    CHECK_THROWS_AS(add_statement(b, sha256(str_span("two")), "bad\nname"), error);
    CHECK(b.size() == 1);
}

TEST_CASE("a committed batch is sealed") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(3, 0);
    CHECK_THROWS_AS(add_statement(cb.b, sha256(str_span("late")), "pool/late.deb"), error);
}

TEST_CASE("commit refuses an empty batch") {
    chain_fixture fx;
    batch b;
    sim_submitter submitter(fx.chain, fx.chain.main_branch());
    CHECK_THROWS_AS(commit(b, submitter, fx.funds, 40000), error);
}

TEST_CASE("single digest commitment carries the prefixed leaf hash") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(1, 0);
    digest32 d = sha256(str_span("stmt-0"));
    CHECK(cb.cmt.root == statement_leaf_hash(d));
    transaction tx = transaction::parse(as_span(cb.cmt.raw_tx));
    CHECK(extract_commit_root(tx) == cb.cmt.root);
}

TEST_CASE("commit transaction size is independent of batch size") {
    std::vector<size_t> sizes;
    for (size_t n : {size_t(1), size_t(1000)}) {
        chain_fixture fx;
        committed_batch cb = fx.commit_batch(n, 0);
        sizes.push_back(cb.cmt.raw_tx.size());
        CHECK(cb.cmt.raw_tx.size() >= 233);
        CHECK(cb.cmt.raw_tx.size() <= 237);
    }
    CHECK(sizes[0] <= sizes[1] + 2);
    CHECK(sizes[1] <= sizes[0] + 2);
}

namespace {

struct failing_submitter : tx_submitter {
    digest32 submit(const transaction&) override { fail(errc::rejected, "chain stalled"); }
};

} // namespace

TEST_CASE("a rejected commit leaves the batch open and the wallet intact") {
    chain_fixture fx;
    batch b;
    add_statement(b, sha256(str_span("d")), "pool/d.deb");
    int64_t before = fx.funds.balance();
    failing_submitter stalled;
    CHECK_THROWS_AS(commit(b, stalled, fx.funds, 40000), error);
    CHECK(b.status() == batch_status::open);
    CHECK(fx.funds.balance() == before);

    sim_submitter live(fx.chain, fx.chain.main_branch());
    commitment cmt = commit(b, live, fx.funds, 40000);
    CHECK(b.status() == batch_status::committed);
    CHECK(cmt.txid == transaction::parse(as_span(cmt.raw_tx)).txid());
}

TEST_CASE("commit spends the wallet and returns change") {
    chain_fixture fx;
    int64_t before = fx.funds.balance();
    fx.commit_batch(2, 0);
    CHECK(fx.funds.balance() == before - 40000);
}

TEST_CASE("confirm locates the commitment in its block") {
    chain_fixture fx;
    batch b;
    add_statement(b, sha256(str_span("x")), "pool/x.deb");
    sim_submitter submitter(fx.chain, fx.chain.main_branch());

    CHECK_THROWS_AS(confirm(b, fx.chain.block_at(0), 0), error);

    commit(b, submitter, fx.funds, 40000);
    const block& blk = fx.mine();
    const block& wrong = fx.chain.block_at(0);
    CHECK_THROWS_AS(confirm(b, wrong, 0), error);
    CHECK(b.status() == batch_status::committed);

    confirm(b, blk, fx.chain.tip_height());
    CHECK(b.status() == batch_status::confirmed);
    CHECK(b.block_hash() == blk.header.hash());
    CHECK(b.tx_index() == 1);
}

TEST_CASE("restore_commitment rehydrates a committed batch across processes") {
    chain_fixture fx;
    batch original;
    add_statement(original, sha256(str_span("x")), "pool/x.deb");
    add_statement(original, sha256(str_span("y")), "pool/y.deb");
    sim_submitter submitter(fx.chain, fx.chain.main_branch());
    commitment cmt = commit(original, submitter, fx.funds, 40000);
    const block& blk = fx.mine();

    batch restored;
    for (const manifest_entry& e : original.entries()) add_statement(restored, e.digest, e.filename);
    restore_commitment(restored, cmt.txid);
    CHECK(restored.status() == batch_status::committed);
    CHECK(restored.commit_txid() == cmt.txid);

    confirm(restored, blk, fx.chain.tip_height());
    for (uint32_t i = 0; i < 6; ++i) fx.mine();
    inclusion_proof proof = prove_inclusion(restored, blk, 1, fx.chain.tip_height());
    header_store store = fx.synced_store();
    CHECK(check_inclusion(store, fx.policy(), sha256(str_span("y")), proof).accepted);

    CHECK_THROWS_AS(restore_commitment(restored, cmt.txid), error);
    batch empty;
    CHECK_THROWS_AS(restore_commitment(empty, cmt.txid), error);

    batch lying;
    add_statement(lying, sha256(str_span("x")), "pool/x.deb");
    restore_commitment(lying, sha256(str_span("no such tx")));
    CHECK_THROWS_AS(confirm(lying, blk, fx.chain.tip_height()), error);
}

TEST_CASE("inclusion proof round trips through the auditor") {
    chain_fixture fx;

    batch b;
    for (int i = 0; i < 4; ++i)
        add_statement(b, sha256(str_span("digest-" + std::to_string(i))),
                      "pool/p" + std::to_string(i) + ".deb");
    ec_key bystander = ec_key::from_hex(
        "0000000000000000000000000000000000000000000000000000000000001b0b");
    funding_source decoy_funds = fx.chain.take_miner_funds();
    fx.chain.submit_tx(
        build_payment(decoy_funds, authority_address::from_key(bystander), 999999, 777));
    sim_submitter submitter(fx.chain, fx.chain.main_branch());
    commit(b, submitter, fx.funds, 40000);
    const block& blk = fx.mine();
    REQUIRE(blk.txs.size() == 3);
    confirm(b, blk, fx.chain.tip_height());
    for (int i = 0; i < 6; ++i) fx.mine();

    header_store store = fx.synced_store();
    for (size_t i = 0; i < 4; ++i) {
        inclusion_proof proof = prove_inclusion(b, blk, i, fx.chain.tip_height());
        digest32 d = sha256(str_span("digest-" + std::to_string(i)));
        verify_result res = check_inclusion(store, fx.policy(), d, proof);
        CHECK(res.accepted);
        CHECK(res.reason == reject_reason::none);
    }
}

TEST_CASE("prove_inclusion guards its preconditions") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(4, 6);
    const block& blk = fx.chain.block_at(cb.height);

    CHECK_THROWS_AS(prove_inclusion(cb.b, blk, 4), error);
    CHECK_THROWS_AS(prove_inclusion(cb.b, fx.chain.block_at(0), 0), error);

    SUBCASE("depth below k is refused only when a tip is supplied") {
        committed_batch shallow = fx.commit_batch(2, 3);
        const block& sblk = fx.chain.block_at(shallow.height);
        CHECK_NOTHROW(prove_inclusion(shallow.b, sblk, 0));
        CHECK_THROWS_AS(prove_inclusion(shallow.b, sblk, 0, fx.chain.tip_height()), error);
        CHECK_NOTHROW(prove_inclusion(shallow.b, sblk, 0, fx.chain.tip_height(), 3));
    }

    SUBCASE("unconfirmed batch cannot prove") {
        batch open_batch;
        add_statement(open_batch, sha256(str_span("u")), "pool/u.deb");
        CHECK_THROWS_AS(prove_inclusion(open_batch, blk, 0), error);
    }
}

TEST_CASE("proof serialization round trips byte for byte") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(5, 6);
    inclusion_proof proof = prove_inclusion(cb.b, fx.chain.block_at(cb.height), 3);

    bytes raw = proof.serialize();
    CHECK(raw.size() >= 4 + 1 + 80);
    CHECK(raw[0] == 'C');
    CHECK(raw[1] == 'N');
    CHECK(raw[2] == 'T');
    CHECK(raw[3] == 'R');
    CHECK(raw[4] == 0x01);

    inclusion_proof back = inclusion_proof::parse(as_span(raw));
    CHECK(back.serialize() == raw);
    CHECK(back.header.hash() == proof.header.hash());
    CHECK(back.tx.txid() == proof.tx.txid());
    CHECK(back.tx_branch.leaf_index == proof.tx_branch.leaf_index);
    CHECK(back.stmt_branch.siblings == proof.stmt_branch.siblings);
}

TEST_CASE("proof parsing rejects corruption") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(2, 6);
    bytes raw = prove_inclusion(cb.b, fx.chain.block_at(cb.height), 0).serialize();

    SUBCASE("bad magic") {
        bytes bad = raw;
        bad[0] = 'X';
        CHECK_THROWS_AS(inclusion_proof::parse(as_span(bad)), error);
    }
    SUBCASE("bad version") {
        bytes bad = raw;
        bad[4] = 0x02;
        CHECK_THROWS_AS(inclusion_proof::parse(as_span(bad)), error);
    }
    SUBCASE("truncated") {
        byte_span cut(raw.data(), raw.size() - 1);
        CHECK_THROWS_AS(inclusion_proof::parse(cut), error);
    }
    SUBCASE("trailing bytes") {
        bytes extra = raw;
        extra.push_back(0x00);
        CHECK_THROWS_AS(inclusion_proof::parse(as_span(extra)), error);
    }
}

TEST_CASE("manifest format writes leaf order and parses back") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(2, 0);

    auto dir = std::filesystem::temp_directory_path() / "contour-manifest-test";
    std::filesystem::create_directories(dir);
    auto path = write_manifest(cb.b, dir);
    REQUIRE(path.has_value());
    CHECK(path->filename().string() == cb.cmt.root.hex() + ".manifest");

    std::string text = slurp(*path);
    std::string expected;
    for (size_t i = 0; i < 2; ++i)
        expected += sha256(str_span("stmt-" + std::to_string(i))).hex() + " pool/pkg-" +
                    std::to_string(i) + ".deb\n";
    CHECK(text == expected);

    std::vector<manifest_entry> entries = parse_manifest(text);
    REQUIRE(entries.size() == 2);
    std::vector<digest32> digests;
    for (const manifest_entry& e : entries) digests.push_back(e.digest);
    CHECK(statement_root(digests) == cb.cmt.root);
    std::filesystem::remove_all(dir);
}

TEST_CASE("manifest parsing rejects malformed lines") {
    CHECK_THROWS_AS(parse_manifest("short line\n"), error);
    CHECK_THROWS_AS(parse_manifest(std::string(64, 'a') + "_name\n"), error);
    CHECK_THROWS_AS(parse_manifest(std::string(64, 'a') + " "), error);
    std::string ok = std::string(64, 'a') + " file\n";
    CHECK(parse_manifest(ok).size() == 1);
    CHECK(parse_manifest("").empty());
}

TEST_CASE("write_manifest refuses an open batch") {
    batch b;
    add_statement(b, sha256(str_span("d")), "pool/d.deb");
    CHECK_THROWS_AS(write_manifest(b, std::filesystem::temp_directory_path()), error);
}

TEST_CASE("selective disclosure withholds the manifest until depth k") {
    chain_fixture fx;
    committed_batch cb = fx.commit_batch(2, 3);
    auto dir = std::filesystem::temp_directory_path() / "contour-sd-test";
    std::filesystem::create_directories(dir);

    CHECK_FALSE(
        write_manifest(cb.b, dir, true, fx.chain.tip_height(), 6).has_value());
    for (int i = 0; i < 3; ++i) fx.mine();
    auto path = write_manifest(cb.b, dir, true, fx.chain.tip_height(), 6);
    CHECK(path.has_value());
    std::filesystem::remove_all(dir);
}

TEST_CASE("batch_due follows size and age policy") {
    batch_policy policy{.max_entries = 3, .max_age_secs = 100};
    batch b;
    CHECK_FALSE(batch_due(b, 0, 1000, policy));
    add_statement(b, sha256(str_span("1")), "f1");
    CHECK_FALSE(batch_due(b, 0, 99, policy));
    CHECK(batch_due(b, 0, 100, policy));
    add_statement(b, sha256(str_span("2")), "f2");
    add_statement(b, sha256(str_span("3")), "f3");
    CHECK(batch_due(b, 0, 1, policy));
}

TEST_CASE("wallet persists and restores") {
    ec_key key = ec_key::from_hex(
        "00000000000000000000000000000000000000000000000000000000deadbeef");
    wallet w(key);
    w.add_utxo({sha256d(str_span("a")), 0}, 5000);
    w.add_utxo({sha256d(str_span("b")), 3}, 7000);
    CHECK(w.balance() == 12000);
    CHECK_THROWS_AS(w.add_utxo({sha256d(str_span("a")), 0}, 5000), error);

    auto path = std::filesystem::temp_directory_path() / "contour-wallet-test.json";
    w.save(path);
    wallet back = wallet::load(path);
    CHECK(back.address() == w.address());
    CHECK(back.balance() == 12000);
    REQUIRE(back.utxos().size() == 2);
    CHECK(back.utxos()[0].prevout == w.utxos()[0].prevout);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(wallet::load(path), error);
}

TEST_CASE("wallet funding selection and return") {
    ec_key key = ec_key::from_hex(
        "00000000000000000000000000000000000000000000000000000000deadbeef");
    wallet w(key);
    w.add_utxo({sha256d(str_span("a")), 0}, 100);
    w.add_utxo({sha256d(str_span("b")), 0}, 90000);

    CHECK_THROWS_AS(w.take_funding(100000), error);
    funding_source f = w.take_funding(40001);
    CHECK(f.value == 90000);
    CHECK(w.balance() == 100);
    w.return_funding(f);
    CHECK(w.balance() == 90100);
}

TEST_CASE("end-to-end soundness over randomized batch and block sizes") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 4; ++round) {
        chain_fixture fx;
        size_t n = 1 + rng() % 300;
        size_t decoys = rng() % 8;

        batch b;
        std::vector<digest32> digests;
        for (size_t i = 0; i < n; ++i) {
            digest32 d = sha256(str_span("rnd-" + std::to_string(round) + "-" + std::to_string(i)));
            digests.push_back(d);
            add_statement(b, d, "pool/r" + std::to_string(i) + ".deb");
        }
        ec_key bystander = ec_key::from_hex(
            "0000000000000000000000000000000000000000000000000000000000001b0b");
        for (size_t i = 0; i < decoys; ++i) {
            funding_source miner = fx.chain.take_miner_funds();
            fx.chain.submit_tx(build_payment(miner, authority_address::from_key(bystander),
                                             10000 + static_cast<int64_t>(i), 500));
            fx.mine();
        }
        funding_source miner = fx.chain.take_miner_funds();
        fx.chain.submit_tx(
            build_payment(miner, authority_address::from_key(bystander), 42424, 500));

        sim_submitter submitter(fx.chain, fx.chain.main_branch());
        commit(b, submitter, fx.funds, 40000);
        const block& blk = fx.mine();
        confirm(b, blk, fx.chain.tip_height());
        for (int i = 0; i < 6; ++i) fx.mine();

        header_store store = fx.synced_store();
        size_t probe = rng() % n;
        inclusion_proof proof =
            prove_inclusion(b, blk, probe, fx.chain.tip_height());
        bytes raw = proof.serialize();
        inclusion_proof parsed = inclusion_proof::parse(as_span(raw));
        verify_result res = check_inclusion(store, fx.policy(), digests[probe], parsed);
        CHECK(res.accepted);
    }
}
