#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <contour/merkle.hpp>

using namespace contour;
using namespace testsupport;

namespace {

std::vector<digest32> stmt_digests(size_t n) {
    std::vector<digest32> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(sha256(str_span("stmt-" + std::to_string(i))));
    return out;
}

std::vector<digest32> txids(size_t n) {
    std::vector<digest32> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(sha256d(str_span("tx-" + std::to_string(i))));
    return out;
}

} // namespace

TEST_CASE("statement tree roots match fixtures") {
    auto fx = load_fixture("merkle_statement.json");
    for (const auto& c : fx["cases"]) {
        statement_tree tree(stmt_digests(c["n"]));
        CHECK(tree.root().hex() == c["root"]);
        CHECK(tree.depth() == c["depth"].get<size_t>());
    }
}

TEST_CASE("statement branches match fixtures and verify") {
    auto fx = load_fixture("merkle_statement.json");
    for (const auto& c : fx["branches"]) {
        std::vector<digest32> digests = stmt_digests(c["n"]);
        statement_tree tree(digests);
        size_t index = c["index"];
        merkle_branch br = tree.branch(index);
        CHECK(br.leaf_index == c["path_index"].get<uint64_t>());
        REQUIRE(br.siblings.size() == c["siblings"].size());
        for (size_t i = 0; i < br.siblings.size(); ++i)
            CHECK(br.siblings[i].hex() == c["siblings"][i]);
        CHECK(verify_statement_branch(digests[index], br, tree.root()));
    }
}

TEST_CASE("single digest root is its prefixed leaf hash") {
    digest32 d = sha256(str_span("only"));
    byte_writer w;
    w.u8(0x00);
    w.raw(d.span());
    CHECK(statement_root({d}) == sha256(as_span(w.data())));
    CHECK(statement_tree({d}).branch(0).siblings.empty());
}

TEST_CASE("domain separation keeps leaves and nodes apart") {
    digest32 a = sha256(str_span("a"));
    digest32 b = sha256(str_span("b"));
    CHECK(statement_leaf_hash(a) != sha256(a.span()));
    byte_writer w;
    w.raw(a.span());
    w.raw(b.span());
    CHECK(statement_node_hash(a, b) != sha256(as_span(w.data())));
    CHECK(statement_node_hash(a, b) != statement_node_hash(b, a));
}

TEST_CASE("statement branch round trip for every leaf up to 64") {
    for (size_t n = 1; n <= 64; ++n) {
        std::vector<digest32> digests = stmt_digests(n);
        statement_tree tree(digests);
        for (size_t i = 0; i < n; ++i) {
            merkle_branch br = tree.branch(i);
            CHECK(verify_statement_branch(digests[i], br, tree.root()));
        }
    }
}

TEST_CASE("promotion shortens right-edge paths") {
    std::vector<digest32> digests = stmt_digests(6);
    statement_tree tree(digests);
    CHECK(tree.branch(0).siblings.size() == 3);
    CHECK(tree.branch(5).siblings.size() == 2);
    CHECK(tree.branch(5).leaf_index == 3);
}

TEST_CASE("statement verification rejects tampering") {
    std::vector<digest32> digests = stmt_digests(16);
    statement_tree tree(digests);
    merkle_branch br = tree.branch(7);

    SUBCASE("flipped sibling byte") {
        br.siblings[2].v[0] ^= 0x01;
        CHECK_FALSE(verify_statement_branch(digests[7], br, tree.root()));
    }
    SUBCASE("wrong leaf") {
        CHECK_FALSE(verify_statement_branch(digests[8], br, tree.root()));
    }
    SUBCASE("wrong index") {
        br.leaf_index = 6;
        CHECK_FALSE(verify_statement_branch(digests[7], br, tree.root()));
    }
    SUBCASE("index bits beyond the sibling count") {
        br.leaf_index |= uint64_t(1) << br.siblings.size();
        CHECK_FALSE(verify_statement_branch(digests[7], br, tree.root()));
    }
    SUBCASE("dropped sibling") {
        br.siblings.pop_back();
        CHECK_FALSE(verify_statement_branch(digests[7], br, tree.root()));
    }
    SUBCASE("extra sibling") {
        br.siblings.push_back(digests[0]);
        CHECK_FALSE(verify_statement_branch(digests[7], br, tree.root()));
    }
    SUBCASE("wrong root") {
        digest32 other = sha256(str_span("other"));
        CHECK_FALSE(verify_statement_branch(digests[7], br, other));
    }
}

TEST_CASE("statement tree rejects bad inputs") {
    CHECK_THROWS_AS(statement_tree({}), error);
    statement_tree tree(stmt_digests(4));
    CHECK_THROWS_AS(tree.branch(4), error);
}

TEST_CASE("large statement tree matches fixture") {
    auto fx = load_fixture("merkle_statement.json");
    const auto& big = fx["big"];
    std::vector<digest32> digests = stmt_digests(big["n"]);
    statement_tree tree(digests);
    CHECK(tree.root().hex() == big["root"]);
    CHECK(tree.depth() == big["depth"].get<size_t>());
    merkle_branch br = tree.branch(big["branch_index"]);
    CHECK(br.siblings.size() == big["branch_len"].get<size_t>());
    CHECK(br.leaf_index == big["branch_path_index"].get<uint64_t>());
    CHECK(verify_statement_branch(digests[big["branch_index"]], br, tree.root()));
}

TEST_CASE("bitcoin tree roots match fixtures") {
    auto fx = load_fixture("merkle_bitcoin.json");
    for (const auto& c : fx["cases"]) {
        CHECK(bitcoin_tx_root(txids(c["n"])).hex() == c["root"]);
    }
}

TEST_CASE("bitcoin branches match fixtures and verify") {
    auto fx = load_fixture("merkle_bitcoin.json");
    for (const auto& c : fx["branches"]) {
        std::vector<digest32> ids = txids(c["n"]);
        size_t index = c["index"];
        merkle_branch br = bitcoin_tx_branch(ids, index);
        CHECK(br.leaf_index == index);
        REQUIRE(br.siblings.size() == c["siblings"].size());
        for (size_t i = 0; i < br.siblings.size(); ++i)
            CHECK(br.siblings[i].hex() == c["siblings"][i]);
        CHECK(verify_bitcoin_tx_branch(ids[index], br, bitcoin_tx_root(ids)));
    }
}

TEST_CASE("odd level duplicates its last node") {
    std::vector<digest32> ids = txids(3);
    merkle_branch br = bitcoin_tx_branch(ids, 2);
    REQUIRE(br.siblings.size() == 2);
    CHECK(br.siblings[0] == ids[2]);
    CHECK(verify_bitcoin_tx_branch(ids[2], br, bitcoin_tx_root(ids)));
}

TEST_CASE("bitcoin branch round trip for every leaf up to 33") {
    for (size_t n = 1; n <= 33; ++n) {
        std::vector<digest32> ids = txids(n);
        digest32 root = bitcoin_tx_root(ids);
        for (size_t i = 0; i < n; ++i)
            CHECK(verify_bitcoin_tx_branch(ids[i], bitcoin_tx_branch(ids, i), root));
    }
}

TEST_CASE("bitcoin verification rejects tampering") {
    std::vector<digest32> ids = txids(11);
    digest32 root = bitcoin_tx_root(ids);
    merkle_branch br = bitcoin_tx_branch(ids, 4);

    SUBCASE("flipped sibling") {
        br.siblings[1].v[5] ^= 0x80;
        CHECK_FALSE(verify_bitcoin_tx_branch(ids[4], br, root));
    }
    SUBCASE("wrong txid") {
        CHECK_FALSE(verify_bitcoin_tx_branch(ids[5], br, root));
    }
    SUBCASE("wrong index") {
        br.leaf_index = 5;
        CHECK_FALSE(verify_bitcoin_tx_branch(ids[4], br, root));
    }
    SUBCASE("sibling count mismatch") {
        br.siblings.resize(1);
        CHECK_FALSE(verify_bitcoin_tx_branch(ids[4], br, root));
    }
}

TEST_CASE("bitcoin tree rejects bad inputs") {
    CHECK_THROWS_AS(bitcoin_tx_root({}), error);
    CHECK_THROWS_AS(bitcoin_tx_branch(txids(4), 4), error);
}

TEST_CASE("large bitcoin tree matches fixture") {
    auto fx = load_fixture("merkle_bitcoin.json");
    const auto& big = fx["big"];
    std::vector<digest32> ids = txids(big["n"]);
    CHECK(bitcoin_tx_root(ids).hex() == big["root"]);
    merkle_branch br = bitcoin_tx_branch(ids, big["branch_index"]);
    CHECK(br.siblings.size() == big["branch_len"].get<size_t>());
    CHECK(verify_bitcoin_tx_branch(ids[big["branch_index"]], br, bitcoin_tx_root(ids)));
}

TEST_CASE("the two tree flavors never agree") {
    for (size_t n : {size_t(2), size_t(5), size_t(8)}) {
        std::vector<digest32> ids = txids(n);
        CHECK(bitcoin_tx_root(ids) != statement_root(ids));
    }
}
