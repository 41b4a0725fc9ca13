#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamnet/block.hpp"

namespace streamnet {

struct WorkloadSpec {
    uint32_t n_accounts = 1000;
    uint32_t group1 = 500;        // ramp-up recipients; the rest receive spends
    uint32_t txn_count = 5000;
    uint32_t bundle_size = 20;    // 1 = single-transaction blocks
    double conflict_fraction = 0.1;
    uint64_t spend_amount = 2;
    uint64_t coinbase = 1'000'000'000;
    uint64_t seed = 1;
};

// One generation unit: what a node packs into its next block.
struct GenBatch {
    std::string bundle_id;  // empty = independent txns
    std::vector<Transaction> txns;
};

struct ConflictPair {
    TxnId a{};
    TxnId b{};
};

// Deterministic two-phase workload. Ramp-up: the genesis block mints the
// coinbase, and one atomic bundle (node 0's first batch, bundle id "ramp")
// chains change outputs to fund every ramp account with enough independent
// outputs for its spends. Execution: each funded account pays spend-group
// accounts one output per txn; a deterministic subset gets a conflicting twin
// spending the same output to a different recipient, queued on another node.
struct Workload {
    BlockHeader genesis;                        // trunk/branch null, coinbase payload
    std::vector<std::vector<GenBatch>> queues;  // per node
    std::vector<TxnId> exec_ids;                // primaries + twins
    std::vector<ConflictPair> conflicts;
    uint64_t submitted = 0;                     // |exec_ids|
    std::string genesis_account = "genesis";
};

Workload build_workload(const WorkloadSpec& spec, uint32_t n_nodes);

// The account name scheme shared by workload and reports.
std::string account_name(uint32_t index);

}  // namespace streamnet
