#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ridemarket {

using NodeId = std::int64_t;

/// Directed road graph with positive edge lengths and a single constant
/// vehicle speed. Strong connectivity is enforced at construction, so every
/// travel-time query has a finite answer.
///
/// Immutable after construction and safe to share across concurrent pricing
/// rollouts. With node_count() <= the all-pairs threshold the full distance
/// table is prefilled; otherwise per-source rows are computed on demand
/// behind a shared mutex.
class RoadNetwork {
public:
    struct Node {
        NodeId id;
        double x_m;
        double y_m;
    };
    struct Edge {
        NodeId from;
        NodeId to;
        double length_m;
    };

    static constexpr std::size_t kDefaultAllPairsThreshold = 2000;

    RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges, double speed_mps,
                std::size_t all_pairs_threshold = kDefaultAllPairsThreshold);

    // Copies restart with an empty row cache; the mutex itself never moves.
    RoadNetwork(const RoadNetwork& other);
    RoadNetwork& operator=(const RoadNetwork& other);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    double speed_mps() const { return speed_mps_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_node(NodeId id) const { return index_.count(id) != 0; }
    /// Dense index of a node id; throws InputError for unknown ids.
    std::size_t node_index(NodeId id) const;
    NodeId node_id(std::size_t index) const { return nodes_[index].id; }

    /// Minimal path length in meters between two node ids.
    double shortest_path_length(NodeId origin, NodeId destination) const;
    /// shortest_path_length / speed, in seconds.
    double shortest_travel_time(NodeId origin, NodeId destination) const;

    /// Hot-path variants addressed by dense index (skip the id lookup).
    double path_length_by_index(std::size_t from, std::size_t to) const;
    double travel_time_by_index(std::size_t from, std::size_t to) const {
        return path_length_by_index(from, to) / speed_mps_;
    }

private:
    const std::vector<double>& source_row(std::size_t from) const;
    std::vector<double> dijkstra_row(std::size_t from) const;

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    double speed_mps_;
    std::unordered_map<NodeId, std::size_t> index_;

    // CSR adjacency
    std::vector<std::size_t> adj_offset_;
    std::vector<std::pair<std::size_t, double>> adj_;

    // Prefilled all-pairs table (meters), row-major, when small enough.
    std::vector<double> all_pairs_;
    bool prefilled_ = false;

    // On-demand per-source rows for large graphs.
    mutable std::shared_mutex cache_mutex_;
    mutable std::unordered_map<std::size_t, std::vector<double>> row_cache_;
};

/// Bidirectional lattice with rows x cols nodes and the given edge length.
/// Node ids are row-major, starting at 0.
RoadNetwork generate_grid(int rows, int cols, double edge_length_m, double speed_mps);

/// Load a network file (see docs/file-formats in the README): a `speed_mps`
/// header key plus `[nodes]` and `[edges]` sections with named columns.
/// Violations are rejected with line-level diagnostics.
RoadNetwork load_network(const std::filesystem::path& path);

/// Write the same format back; load_network(save_network(net)) preserves
/// travel times exactly.
void save_network(const RoadNetwork& net, const std::filesystem::path& path);

} // namespace ridemarket
