#include "streamnet/workload.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "streamnet/rng.hpp"

namespace streamnet {

std::string account_name(uint32_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "acct%04u", index);
    return buf;
}

namespace {

// Fisher-Yates on the workload rng; std::shuffle is not seed-stable across
// library versions.
template <typename T>
void shuffle_vec(std::vector<T>& v, DetRng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

Workload build_workload(const WorkloadSpec& spec, uint32_t n_nodes) {
    if (n_nodes == 0) throw std::invalid_argument("workload: need at least one node");
    if (spec.group1 == 0 || spec.group1 >= spec.n_accounts)
        throw std::invalid_argument("workload: need 0 < group1 < n_accounts");
    uint32_t group2 = spec.n_accounts - spec.group1;
    if (group2 < 2) throw std::invalid_argument("workload: spend group needs >= 2 accounts");

    DetRng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 1);
    Workload w;
    w.queues.resize(n_nodes);

    // Genesis block carries the coinbase mint.
    Transaction coinbase;
    coinbase.claimed_sender = "coinbase";
    coinbase.outputs.push_back({w.genesis_account, spec.coinbase});
    w.genesis.sender_addr = "genesis";
    w.genesis.timestamp = 0;
    w.genesis.tag = "genesis";
    w.genesis.payload.push_back(coinbase);
    TxnId coinbase_id = txn_id(coinbase);

    // Spread txn_count spends evenly over the funded accounts.
    std::vector<uint32_t> spends_per_acct(spec.group1, spec.txn_count / spec.group1);
    for (uint32_t i = 0; i < spec.txn_count % spec.group1; ++i) ++spends_per_acct[i];

    // Ramp bundle: txn i spends the running change output and funds account i
    // with spends_per_acct[i] outputs of spend_amount each. Ids are final here
    // because the bundle fields are set before hashing.
    GenBatch ramp;
    ramp.bundle_id = "ramp";
    uint64_t remaining = spec.coinbase;
    OutputRef change_ref{coinbase_id, 0};
    std::vector<std::vector<OutputRef>> funding(spec.group1);
    for (uint32_t i = 0; i < spec.group1; ++i) {
        Transaction t;
        t.claimed_sender = w.genesis_account;
        t.inputs.push_back(change_ref);
        uint64_t funded = static_cast<uint64_t>(spends_per_acct[i]) * spec.spend_amount;
        if (funded >= remaining) throw std::invalid_argument("workload: coinbase too small");
        for (uint32_t j = 0; j < spends_per_acct[i]; ++j)
            t.outputs.push_back({account_name(i), spec.spend_amount});
        remaining -= funded;
        t.outputs.push_back({w.genesis_account, remaining});
        t.bundle_index = i;
        t.bundle_last = spec.group1 - 1;
        TxnId id = txn_id(t);
        for (uint32_t j = 0; j < spends_per_acct[i]; ++j) funding[i].push_back({id, j});
        change_ref = {id, static_cast<uint32_t>(t.outputs.size()) - 1};
        ramp.txns.push_back(std::move(t));
    }

    // Execution spends: one single-input transaction per funded output.
    std::vector<Transaction> primaries;
    primaries.reserve(spec.txn_count);
    for (uint32_t i = 0; i < spec.group1; ++i) {
        for (const auto& ref : funding[i]) {
            Transaction t;
            t.claimed_sender = account_name(i);
            t.inputs.push_back(ref);
            uint32_t partner = spec.group1 + static_cast<uint32_t>(rng.below(group2));
            t.outputs.push_back({account_name(partner), spec.spend_amount});
            primaries.push_back(std::move(t));
        }
    }
    shuffle_vec(primaries, rng);

    // Conflict twins: first n_conflicts of the shuffled primaries get a double
    // spend of the same input to a different recipient. Pairs are recovered
    // after dealing by the shared input, since bundle placement changes ids.
    size_t n_conflicts =
        static_cast<size_t>(spec.conflict_fraction * static_cast<double>(primaries.size()) + 0.5);
    if (n_conflicts > primaries.size()) n_conflicts = primaries.size();
    std::vector<OutputRef> victim_refs;
    std::vector<Transaction> twins;
    twins.reserve(n_conflicts);
    for (size_t vi = 0; vi < n_conflicts; ++vi) {
        const Transaction& p = primaries[vi];
        uint32_t old_partner = static_cast<uint32_t>(std::stoul(p.outputs[0].addr.substr(4)));
        Transaction t = p;
        uint32_t partner;
        do {
            partner = spec.group1 + static_cast<uint32_t>(rng.below(group2));
        } while (partner == old_partner);
        t.outputs[0].addr = account_name(partner);
        victim_refs.push_back(p.inputs[0]);
        twins.push_back(std::move(t));
    }
    shuffle_vec(twins, rng);

    w.queues[0].push_back(std::move(ramp));

    // Chunk into bundles and deal round-robin; twins start one node over so a
    // conflicting pair races across the network instead of sharing a block.
    // Ids are final only once bundle fields are assigned, so they are recorded
    // here.
    std::map<OutputRef, std::vector<TxnId>> by_input;
    uint64_t bundle_serial = 0;
    auto deal = [&](std::vector<Transaction>& txns, uint32_t node_offset) {
        uint32_t node = node_offset % n_nodes;
        for (size_t at = 0; at < txns.size(); at += spec.bundle_size) {
            GenBatch batch;
            size_t hi = std::min(txns.size(), at + spec.bundle_size);
            if (spec.bundle_size > 1) {
                char buf[24];
                std::snprintf(buf, sizeof buf, "b%06llu",
                              static_cast<unsigned long long>(bundle_serial++));
                batch.bundle_id = buf;
            }
            for (size_t i = at; i < hi; ++i) {
                Transaction t = std::move(txns[i]);
                if (spec.bundle_size > 1) {
                    t.bundle_index = static_cast<uint32_t>(i - at);
                    t.bundle_last = static_cast<uint32_t>(hi - at - 1);
                }
                TxnId id = txn_id(t);
                w.exec_ids.push_back(id);
                by_input[t.inputs[0]].push_back(id);
                batch.txns.push_back(std::move(t));
            }
            w.queues[node].push_back(std::move(batch));
            node = (node + 1) % n_nodes;
        }
    };
    deal(primaries, 0);
    deal(twins, 1);
    w.submitted = w.exec_ids.size();

    for (const auto& ref : victim_refs) {
        const auto& ids = by_input.at(ref);
        if (ids.size() != 2) throw std::logic_error("workload: conflict pair not unique");
        w.conflicts.push_back({ids[0], ids[1]});
    }

    return w;
}

}  // namespace streamnet
