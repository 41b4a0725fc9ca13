#include "streamnet/config.hpp"

#include <map>
#include <set>
#include <sstream>

namespace streamnet {

namespace {

std::string mode_name(GossipMode m) {
    return m == GossipMode::Signal ? "signal" : "mail";
}

// Assigns one knob. Throws ConfigError for unknown keys and bad enum values;
// lets std number-parsing exceptions escape for the caller to wrap.
void assign(RunConfig& cfg, const std::string& key, const std::string& val) {
    if (key == "topology") cfg.topology = val;
    else if (key == "topology_file") cfg.topology_file = val;
    else if (key == "txns") cfg.txns = static_cast<uint32_t>(std::stoul(val));
    else if (key == "bundle_size") cfg.bundle_size = static_cast<uint32_t>(std::stoul(val));
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "alpha") cfg.alpha = std::stod(val);
    else if (key == "difficulty") cfg.difficulty = std::stoi(val);
    else if (key == "pow_us_per_attempt") cfg.pow_us_per_attempt = std::stoull(val);
    else if (key == "gen_fixed_us") cfg.gen_fixed_us = std::stoull(val);
    else if (key == "latency_ms") cfg.latency_ms = std::stoull(val);
    else if (key == "jitter_ms") cfg.jitter_ms = std::stoull(val);
    else if (key == "drop_rate") cfg.drop_rate = std::stod(val);
    else if (key == "mode") {
        if (val == "signal") cfg.mode = GossipMode::Signal;
        else if (val == "mail") cfg.mode = GossipMode::Mail;
        else throw ConfigError("mode must be signal or mail");
    } else if (key == "forward_every") cfg.forward_every = std::stoull(val);
    else if (key == "forward_h") cfg.forward_h = std::stoull(val);
    else if (key == "timeout_hops") cfg.timeout_hops = std::stoull(val);
    else if (key == "accounts") cfg.accounts = static_cast<uint32_t>(std::stoul(val));
    else if (key == "group1") cfg.group1 = static_cast<uint32_t>(std::stoul(val));
    else if (key == "conflict_fraction") cfg.conflict_fraction = std::stod(val);
    else if (key == "spend_amount") cfg.spend_amount = std::stoull(val);
    else if (key == "coinbase") cfg.coinbase = std::stoull(val);
    else if (key == "block_count") cfg.block_count = static_cast<uint32_t>(std::stoul(val));
    else if (key == "gen_rate") cfg.gen_rate = std::stod(val);
    else if (key == "tie_break") {
        if (val == "smaller") cfg.tie_break = TieBreak::SmallerId;
        else if (val == "larger") cfg.tie_break = TieBreak::LargerId;
        else throw ConfigError("tie_break must be smaller or larger");
    } else if (key == "top_combine") {
        if (val == "max") cfg.top_combine = TopCombine::Max;
        else if (val == "min") cfg.top_combine = TopCombine::Min;
        else throw ConfigError("top_combine must be max or min");
    } else if (key == "walk_edges") {
        if (val == "approvers") cfg.walk_edges = WalkEdges::Approvers;
        else if (val == "children") cfg.walk_edges = WalkEdges::ParentalChildren;
        else throw ConfigError("walk_edges must be approvers or children");
    } else if (key == "trace") cfg.trace = val == "1" || val == "true";
    else if (key == "out_dir") cfg.out_dir = val;
    else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

std::string RunConfig::effective_text() const {
    std::map<std::string, std::string> kv;
    kv["topology"] = topology;
    kv["topology_file"] = topology_file;
    kv["txns"] = std::to_string(txns);
    kv["bundle_size"] = std::to_string(bundle_size);
    kv["seed"] = std::to_string(seed);
    {
        std::ostringstream os;
        os << alpha;
        kv["alpha"] = os.str();
    }
    kv["difficulty"] = std::to_string(difficulty);
    kv["pow_us_per_attempt"] = std::to_string(pow_us_per_attempt);
    kv["gen_fixed_us"] = std::to_string(gen_fixed_us);
    kv["latency_ms"] = std::to_string(latency_ms);
    kv["jitter_ms"] = std::to_string(jitter_ms);
    {
        std::ostringstream os;
        os << drop_rate;
        kv["drop_rate"] = os.str();
    }
    kv["mode"] = mode_name(mode);
    kv["forward_every"] = std::to_string(forward_every);
    kv["forward_h"] = std::to_string(forward_h);
    kv["timeout_hops"] = std::to_string(timeout_hops);
    kv["accounts"] = std::to_string(accounts);
    kv["group1"] = std::to_string(group1);
    {
        std::ostringstream os;
        os << conflict_fraction;
        kv["conflict_fraction"] = os.str();
    }
    kv["spend_amount"] = std::to_string(spend_amount);
    kv["coinbase"] = std::to_string(coinbase);
    kv["block_count"] = std::to_string(block_count);
    {
        std::ostringstream os;
        os << gen_rate;
        kv["gen_rate"] = os.str();
    }
    kv["tie_break"] = tie_break == TieBreak::SmallerId ? "smaller" : "larger";
    kv["top_combine"] = top_combine == TopCombine::Max ? "max" : "min";
    kv["walk_edges"] = walk_edges == WalkEdges::Approvers ? "approvers" : "children";
    kv["trace"] = trace ? "1" : "0";
    kv["out_dir"] = out_dir;

    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string RunConfig::config_hash() const {
    return to_hex(sha256(effective_text()));
}

void RunConfig::validate() const {
    if (topology_file.empty() && topology.empty()) throw ConfigError("no topology given");
    if (txns == 0 && block_count == 0) throw ConfigError("txns must be positive");
    if (bundle_size == 0) throw ConfigError("bundle_size must be positive");
    if (alpha < 0) throw ConfigError("alpha must be nonnegative");
    if (difficulty < 0 || difficulty > 28) throw ConfigError("difficulty out of range [0,28]");
    if (drop_rate < 0 || drop_rate >= 1) throw ConfigError("drop_rate must be in [0,1)");
    if (forward_h < 1) throw ConfigError("forward_h must be >= 1");
    if (timeout_hops < 1) throw ConfigError("timeout_hops must be >= 1");
    if (accounts == 0 || group1 == 0 || group1 >= accounts)
        throw ConfigError("need 0 < group1 < accounts");
    if (accounts - group1 < 2) throw ConfigError("spend group needs at least 2 accounts");
    if (conflict_fraction < 0 || conflict_fraction > 1)
        throw ConfigError("conflict_fraction must be in [0,1]");
    if (spend_amount == 0) throw ConfigError("spend_amount must be positive");
    if (gen_rate < 0) throw ConfigError("gen_rate must be nonnegative");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        assign(cfg, key, value);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad value for '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text, const std::string& filename) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    auto fail = [&](const std::string& msg) {
        throw ConfigError(filename + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0) fail("expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        if (!seen.insert(key).second) fail("duplicate key '" + key + "'");

        try {
            assign(cfg, key, val);
        } catch (const ConfigError& e) {
            fail(e.what());
        } catch (const std::exception&) {
            fail("bad value for '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(filename + ": " + e.what());
    }
    return cfg;
}

}  // namespace streamnet
