#pragma once

#include <contour/hash.hpp>

#include <cstddef>
#include <vector>

namespace contour {

// Fold path from a leaf to the root. leaf_index encodes the path: bit i is
// set iff the node is the right child at the i-th consumed level. It equals
// the leaf position whenever no promotion touches the path; verification
// needs no tree size. Siblings are ordered leaf to root.
struct merkle_branch {
    uint64_t leaf_index = 0;
    std::vector<digest32> siblings;
};

// Commitment tree over statement digests. Leaves are hashed with a 0x00
// prefix and interior nodes with 0x01; an unpaired last node is promoted
// to the next level unchanged.
class statement_tree {
  public:
    explicit statement_tree(std::vector<digest32> digests);

    const digest32& root() const { return levels_.back().front(); }
    size_t leaf_count() const { return levels_.front().size(); }
    size_t depth() const { return levels_.size() - 1; }
    merkle_branch branch(size_t index) const;

  private:
    std::vector<std::vector<digest32>> levels_;
};

digest32 statement_leaf_hash(const digest32& digest);
digest32 statement_node_hash(const digest32& left, const digest32& right);
digest32 statement_root(const std::vector<digest32>& digests);
bool verify_statement_branch(const digest32& digest, const merkle_branch& branch,
                             const digest32& root);

// Transaction tree with Bitcoin consensus semantics: double SHA-256, no
// domain separation, odd levels duplicate their last node.
digest32 bitcoin_tx_root(const std::vector<digest32>& txids);
merkle_branch bitcoin_tx_branch(const std::vector<digest32>& txids, size_t index);
bool verify_bitcoin_tx_branch(const digest32& txid, const merkle_branch& branch,
                              const digest32& root);

} // namespace contour
