#pragma once

#include "hlnc/broadcast.hpp"
#include "hlnc/packet_set.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hlnc {

/// Hypergraph over packets: one hyperedge per unfinished receiver, holding
/// the packets that receiver has not decoded yet.
class Hypergraph {
public:
    struct Edge {
        int receiver = 0; // index of the receiver this edge models
        PacketSet vertices;
    };

    Hypergraph() = default;
    /// Edges are numbered as receivers 0, 1, ... Empty edges are rejected.
    explicit Hypergraph(std::vector<PacketSet> edges);
    Hypergraph(std::vector<Edge> edges, PacketSet extra_vertices);

    /// One edge per receiver that still wants something.
    static Hypergraph from_states(const std::vector<ReceiverDecoder>& receivers);
    /// One edge per nonempty SFM row.
    static Hypergraph from_sfm(const Sfm& sfm);

    const std::vector<Edge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    bool empty() const { return edges_.empty(); }
    /// Union of the edges plus any explicitly added isolated vertices.
    PacketSet vertices() const { return vertices_; }

    /// Same receivers, each edge a subset of the matching edge in `super`.
    bool is_subgraph_of(const Hypergraph& super) const;

private:
    std::vector<Edge> edges_;
    PacketSet vertices_;
};

struct VertexCover {
    PacketSet cover;
    /// Vertices in the order the greedy pass picked them (before pruning).
    std::vector<int> picked;
};

bool covers(const Hypergraph& h, PacketSet cover);
/// Covers every edge and dropping any one vertex uncovers some edge.
bool is_minimal_cover(const Hypergraph& h, PacketSet cover);
/// Receivers whose edge meets the cover in exactly one vertex.
std::vector<int> single_incidence_receivers(const Hypergraph& h, PacketSet cover);

/// Greedy-by-popularity cover followed by a reverse-order prune.
///
/// Each step picks the vertex lying on the most remaining edges (lowest
/// index on ties), then drops the edges it covers; weights are recomputed on
/// what is left. The prune walks the picks backwards and removes any vertex
/// whose removal keeps every edge covered, so the result is a minimal cover
/// and at least one edge meets it exactly once.
///
/// Throws InvalidInput on an empty hypergraph.
VertexCover minimal_vertex_cover(const Hypergraph& h);

struct StrongColoring {
    std::vector<PacketSet> classes;
};

inline constexpr int kMaxColoringVertices = 20;

/// Every class meets every edge at most once.
bool is_strong_coloring(const Hypergraph& h, const StrongColoring& c);

/// Exhaustive search for a partition of h.vertices() into `colors` classes
/// meeting every edge at most once. Colors are assigned in canonical order
/// (a vertex may open at most one new class), so each partition is visited
/// once. Throws InstanceTooLarge past kMaxColoringVertices vertices.
std::optional<StrongColoring> strong_coloring_bruteforce(const Hypergraph& h, int colors);

struct PerfectSolution {
    bool exists = false;
    /// When exists: one coding set per transmission.
    std::vector<PacketSet> coding_sets;
};

/// Erasure-free existence of a transmission sequence that lets every
/// unfinished receiver decode one new packet per slot. Defined for SFMs
/// whose nonempty rows all have the same size r, via size-r strong
/// colorability of the wants hypergraph. Throws NotSupported otherwise.
PerfectSolution perfect_solution_exists(const Sfm& sfm);

/// Text fixture format: one hyperedge per line, whitespace separated
/// one-based vertex numbers; blank lines and '#' comments are ignored.
std::vector<PacketSet> parse_edge_list(std::istream& in);
std::vector<PacketSet> parse_edge_list(const std::string& text);
void write_edge_list(std::ostream& out, const std::vector<PacketSet>& edges);

} // namespace hlnc
