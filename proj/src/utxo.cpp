#include "streamnet/utxo.hpp"

#include <sstream>
#include <stdexcept>

namespace streamnet {

// Uncommitted effects of the bundle being validated. Lookups see the base
// state minus consumed plus created, so bundle txns can chain.
struct BundleStaging {
    std::map<OutputRef, UtxoState::Entry> created;
    std::map<OutputRef, std::pair<UtxoState::Entry, TxnId>> consumed;  // entry + spender
    uint64_t issued_delta = 0;
    std::vector<TxnId> txn_ids;
};

bool UtxoState::stage_txn(const Transaction& t, BundleStaging& s) const {
    TxnId id = txn_id(t);
    s.txn_ids.push_back(id);

    if (t.inputs.empty()) {
        // Mint: only ever valid while nothing has been issued.
        if (issued_ + s.issued_delta != 0) return false;
        uint64_t total = 0;
        for (const auto& o : t.outputs) total += o.amount;
        if (total == 0) return false;
        s.issued_delta += total;
        for (uint32_t i = 0; i < t.outputs.size(); ++i)
            s.created[{id, i}] = Entry{t.outputs[i].addr, t.outputs[i].amount};
        return true;
    }

    uint64_t in_sum = 0, out_sum = 0;
    std::set<OutputRef> seen;
    for (const auto& ref : t.inputs) {
        if (!seen.insert(ref).second) return false;  // same output twice in one txn
        const Entry* e = nullptr;
        if (auto it = s.created.find(ref); it != s.created.end())
            e = &it->second;
        else if (s.consumed.count(ref))
            return false;  // spent earlier in this bundle
        else if (auto it2 = unspent_.find(ref); it2 != unspent_.end())
            e = &it2->second;
        if (!e) return false;                          // unknown or already spent
        if (e->addr != t.claimed_sender) return false; // simulated authorization
        in_sum += e->amount;
    }
    for (const auto& o : t.outputs) out_sum += o.amount;
    if (in_sum != out_sum) return false;  // full spend, no fees

    for (const auto& ref : t.inputs) {
        if (auto it = s.created.find(ref); it != s.created.end()) {
            s.consumed[ref] = {it->second, id};
            s.created.erase(it);
        } else {
            s.consumed[ref] = {unspent_.at(ref), id};
        }
    }
    for (uint32_t i = 0; i < t.outputs.size(); ++i)
        s.created[{id, i}] = Entry{t.outputs[i].addr, t.outputs[i].amount};
    return true;
}

void UtxoState::apply_block(const BlockHeader& h) {
    // Bundle blocks are one atomic group; otherwise each txn stands alone.
    std::vector<std::pair<size_t, size_t>> groups;
    if (!h.bundle_id.empty() && !h.payload.empty())
        groups.emplace_back(0, h.payload.size());
    else
        for (size_t i = 0; i < h.payload.size(); ++i) groups.emplace_back(i, i + 1);

    for (auto [lo, hi] : groups) {
        BundleStaging s;
        bool ok = true;
        bool all_dup = true;
        for (size_t i = lo; i < hi && ok; ++i) {
            TxnId id = txn_id(h.payload[i]);
            if (decided(id)) continue;  // replays of a decided txn are inert
            all_dup = false;
            ok = stage_txn(h.payload[i], s);
        }
        if (all_dup) continue;
        if (ok) {
            for (const auto& [ref, ce] : s.consumed) {
                unspent_.erase(ref);
                spent_by_[ref] = ce.second;
            }
            for (const auto& [ref, e] : s.created) unspent_[ref] = e;
            issued_ += s.issued_delta;
            for (const auto& id : s.txn_ids) {
                accepted_.insert(id);
                decisions_.emplace_back(id, true);
            }
        } else {
            for (size_t i = lo; i < hi; ++i) {
                TxnId id = txn_id(h.payload[i]);
                if (decided(id)) continue;
                rejected_.insert(id);
                decisions_.emplace_back(id, false);
            }
        }
    }
}

uint64_t UtxoState::balance(const std::string& addr) const {
    uint64_t total = 0;
    for (const auto& [ref, e] : unspent_)
        if (e.addr == addr) total += e.amount;
    return total;
}

uint64_t UtxoState::total_unspent() const {
    uint64_t total = 0;
    for (const auto& [ref, e] : unspent_) total += e.amount;
    return total;
}

std::string UtxoState::export_lines() const {
    std::ostringstream os;
    for (const auto& [ref, e] : unspent_)
        os << to_hex(ref.txn) << ':' << ref.index << '\t' << e.addr << '\t' << e.amount << '\n';
    return os.str();
}

UtxoState apply_order(const std::vector<BlockId>& order, const PayloadSource& blocks,
                      const UtxoState& base) {
    UtxoState state = base;
    for (const auto& id : order) {
        const BlockHeader* h = blocks(id);
        if (!h) throw std::invalid_argument("apply_order: no payload for block " + to_hex(id));
        state.apply_block(*h);
    }
    return state;
}

bool prefix_consistent(const UtxoState& shorter, const UtxoState& longer) {
    const auto& a = shorter.decisions();
    const auto& b = longer.decisions();
    if (a.size() > b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace streamnet
