#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "streamnet/block.hpp"

namespace streamnet {

// Replayable UTXO state machine. Conflicts are resolved purely by replay
// position: the earlier spend of an output wins, later ones are rejected.
// Blocks carrying a bundle_id apply all-or-nothing; transactions inside a
// bundle may chain (spend outputs created earlier in the same bundle).
// A decided txn id is final; re-occurrences of the same id are skipped.
class UtxoState {
  public:
    struct Entry {
        std::string addr;
        uint64_t amount = 0;
    };

    // Replays one block's payload on top of the current state.
    void apply_block(const BlockHeader& h);

    uint64_t balance(const std::string& addr) const;
    uint64_t total_unspent() const;
    uint64_t issued() const { return issued_; }

    const std::map<OutputRef, Entry>& unspent() const { return unspent_; }
    const std::map<OutputRef, TxnId>& spent_by() const { return spent_by_; }
    const std::set<TxnId>& rejected() const { return rejected_; }
    const std::set<TxnId>& accepted() const { return accepted_; }
    bool decided(const TxnId& id) const { return accepted_.count(id) || rejected_.count(id); }

    // Per-txn decision log in replay sequence, for prefix checks.
    const std::vector<std::pair<TxnId, bool>>& decisions() const { return decisions_; }

    // Line-delimited `txn_id:index<TAB>addr<TAB>amount`, ordered by output ref.
    std::string export_lines() const;

  private:
    struct TxnEffects;
    bool stage_txn(const Transaction& t, struct BundleStaging& staging) const;

    std::map<OutputRef, Entry> unspent_;
    std::map<OutputRef, TxnId> spent_by_;
    std::set<TxnId> accepted_;
    std::set<TxnId> rejected_;
    std::vector<std::pair<TxnId, bool>> decisions_;
    uint64_t issued_ = 0;
};

using PayloadSource = std::function<const BlockHeader*(const BlockId&)>;

// Pure replay of `order` over `base`. Every id must resolve through `blocks`.
UtxoState apply_order(const std::vector<BlockId>& order, const PayloadSource& blocks,
                      const UtxoState& base = UtxoState{});

// True iff the replay that produced `longer` made identical decisions on the
// whole decision log of `shorter`.
bool prefix_consistent(const UtxoState& shorter, const UtxoState& longer);

}  // namespace streamnet
