#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamnet {

// Undirected connected link graph the simulator runs on.
struct Topology {
    std::string name;
    uint32_t n_nodes = 0;
    std::vector<std::pair<uint32_t, uint32_t>> links;  // a < b, unique

    size_t n_links() const { return links.size(); }
    bool has_cycle() const { return links.size() >= n_nodes; }  // connected graph
    std::vector<std::vector<uint32_t>> adjacency() const;

    // Connected, no self-loops, no duplicate links, ids in range; throws
    // std::invalid_argument otherwise.
    void validate() const;
};

// The seven built-in shapes: 3-clique, 4-clique, 7-clique, 7-star, 4-circle,
// 7-circle, 7-bridge (a 4-clique and a 3-clique joined by one link).
const std::vector<std::string>& builtin_topology_names();
Topology make_topology(const std::string& name);

// File format: a `nodes=N` header line, then one `node_a<TAB>node_b` line per
// link. '#' starts a comment line. Throws with the offending line number.
Topology parse_topology_file(const std::string& text, const std::string& filename = "topology");
std::string format_topology(const Topology& t);

}  // namespace streamnet
