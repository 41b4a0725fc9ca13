#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamnet/hash.hpp"

namespace streamnet {

// Reference to one output of a prior transaction.
struct OutputRef {
    TxnId txn{};
    uint32_t index = 0;

    auto operator<=>(const OutputRef&) const = default;
};

struct TxOutput {
    std::string addr;
    uint64_t amount = 0;

    bool operator==(const TxOutput&) const = default;
};

// Authorization is simulated: claimed_sender must match the owning address of
// every input. A transaction with no inputs mints (coinbase); minting is only
// accepted while total issuance is zero.
struct Transaction {
    std::string claimed_sender;
    std::vector<OutputRef> inputs;
    std::vector<TxOutput> outputs;
    // Position bookkeeping when part of a bundle; 0/0 for standalone txns.
    uint32_t bundle_index = 0;
    uint32_t bundle_last = 0;

    bool operator==(const Transaction&) const = default;
};

// Canonical block header. Field order and encoding are fixed: variable-length
// fields are length-prefixed (u32 LE), integers are serialized little-endian.
// trunk = parent edge, branch = reference edge; zero hash means absent
// (genesis only).
struct BlockHeader {
    std::string sender_addr;
    uint64_t timestamp = 0;    // ms
    std::string bundle_id;     // empty = no bundle
    BlockId trunk{};
    BlockId branch{};
    std::string tag;
    uint64_t attach_ts = 0;    // ms
    uint64_t nonce = 0;
    std::vector<Transaction> payload;

    bool operator==(const BlockHeader&) const = default;
};

void put_u32_le(std::vector<uint8_t>& out, uint32_t v);
void put_u64_le(std::vector<uint8_t>& out, uint64_t v);

std::vector<uint8_t> serialize_txn(const Transaction& t);
std::vector<uint8_t> serialize_header(const BlockHeader& h);

// txn_id = SHA-256 of the canonical transaction serialization.
TxnId txn_id(const Transaction& t);
// BlockId = SHA-256 of the canonical header serialization (nonce included).
BlockId hash_block(const BlockHeader& h);

// Proof of work: the block hash must start with `difficulty_bits` zero bits.
bool pow_ok(const BlockId& id, int difficulty_bits);

struct PowResult {
    uint64_t nonce = 0;
    uint64_t attempts = 0;  // hash evaluations spent, for cost accounting
    BlockId id{};
};

// Scans nonces from h.nonce upward until the difficulty is met. Deterministic:
// same header bytes, same result.
PowResult pow_search(BlockHeader& h, int difficulty_bits);

}  // namespace streamnet
