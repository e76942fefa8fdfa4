#include "hlnc/hypergraph.hpp"

#include "hlnc/errors.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>

namespace hlnc {

Hypergraph::Hypergraph(std::vector<PacketSet> edges)
{
    edges_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].empty())
            throw InvalidInput("hyperedges must be nonempty");
        edges_.push_back({static_cast<int>(i), edges[i]});
        vertices_ |= edges[i];
    }
}

Hypergraph::Hypergraph(std::vector<Edge> edges, PacketSet extra_vertices)
    : edges_(std::move(edges)), vertices_(extra_vertices)
{
    for (const auto& e : edges_) {
        if (e.vertices.empty())
            throw InvalidInput("hyperedges must be nonempty");
        vertices_ |= e.vertices;
    }
}

Hypergraph Hypergraph::from_states(const std::vector<ReceiverDecoder>& receivers)
{
    std::vector<Edge> edges;
    for (std::size_t n = 0; n < receivers.size(); ++n) {
        const PacketSet w = receivers[n].wants_now();
        if (!w.empty())
            edges.push_back({static_cast<int>(n), w});
    }
    return Hypergraph(std::move(edges), PacketSet{});
}

Hypergraph Hypergraph::from_sfm(const Sfm& sfm)
{
    std::vector<Edge> edges;
    for (int n = 0; n < sfm.receivers(); ++n)
        if (!sfm.wants(n).empty())
            edges.push_back({n, sfm.wants(n)});
    return Hypergraph(std::move(edges), PacketSet{});
}

bool Hypergraph::is_subgraph_of(const Hypergraph& super) const
{
    if (edges_.size() != super.edges_.size())
        return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].receiver != super.edges_[i].receiver)
            return false;
        if (!edges_[i].vertices.is_subset_of(super.edges_[i].vertices))
            return false;
    }
    return true;
}

bool covers(const Hypergraph& h, PacketSet cover)
{
    return std::all_of(h.edges().begin(), h.edges().end(),
                       [&](const Hypergraph::Edge& e) { return e.vertices.intersects(cover); });
}

bool is_minimal_cover(const Hypergraph& h, PacketSet cover)
{
    if (!covers(h, cover))
        return false;
    bool minimal = true;
    cover.for_each([&](int v) {
        PacketSet smaller = cover;
        smaller.erase(v);
        if (covers(h, smaller))
            minimal = false;
    });
    return minimal;
}

std::vector<int> single_incidence_receivers(const Hypergraph& h, PacketSet cover)
{
    std::vector<int> out;
    for (const auto& e : h.edges())
        if ((e.vertices & cover).size() == 1)
            out.push_back(e.receiver);
    return out;
}

VertexCover minimal_vertex_cover(const Hypergraph& h)
{
    if (h.empty())
        throw InvalidInput("cannot cover an empty hypergraph");

    std::vector<PacketSet> remaining;
    remaining.reserve(h.edges().size());
    for (const auto& e : h.edges())
        remaining.push_back(e.vertices);

    VertexCover result;
    while (!remaining.empty()) {
        std::array<int, kMaxPackets> weight{};
        for (const auto& e : remaining)
            e.for_each([&](int v) { ++weight[v]; });
        int best = 0;
        for (int v = 1; v < kMaxPackets; ++v)
            if (weight[v] > weight[best])
                best = v;
        result.picked.push_back(best);
        result.cover.insert(best);
        std::erase_if(remaining, [&](PacketSet e) { return e.contains(best); });
    }

    for (auto it = result.picked.rbegin(); it != result.picked.rend(); ++it) {
        PacketSet smaller = result.cover;
        smaller.erase(*it);
        if (covers(h, smaller))
            result.cover = smaller;
    }
    return result;
}

bool is_strong_coloring(const Hypergraph& h, const StrongColoring& c)
{
    PacketSet seen;
    for (const auto& cls : c.classes) {
        if (seen.intersects(cls))
            return false;
        seen |= cls;
    }
    if (seen != h.vertices())
        return false;
    for (const auto& e : h.edges())
        for (const auto& cls : c.classes)
            if ((e.vertices & cls).size() > 1)
                return false;
    return true;
}

namespace {

struct ColoringSearch {
    std::vector<int> order;
    std::array<PacketSet, kMaxPackets> neighbours{};
    std::vector<PacketSet> classes;
    int colors = 0;

    bool assign(std::size_t i, int used)
    {
        if (i == order.size())
            return true;
        const int v = order[i];
        const int limit = std::min(used + 1, colors);
        for (int c = 0; c < limit; ++c) {
            if (classes[c].intersects(neighbours[v]))
                continue;
            classes[c].insert(v);
            if (assign(i + 1, std::max(used, c + 1)))
                return true;
            classes[c].erase(v);
        }
        return false;
    }
};

} // namespace

std::optional<StrongColoring> strong_coloring_bruteforce(const Hypergraph& h, int colors)
{
    if (colors < 1)
        throw InvalidInput("color count must be positive");
    const PacketSet vertices = h.vertices();
    if (vertices.size() > kMaxColoringVertices)
        throw InstanceTooLarge("strong coloring search is limited to " + std::to_string(kMaxColoringVertices) +
                               " vertices, got " + std::to_string(vertices.size()));

    // Two vertices sharing an edge need different colors.
    ColoringSearch s;
    s.colors = colors;
    s.classes.assign(static_cast<std::size_t>(colors), PacketSet{});
    for (const auto& e : h.edges())
        e.vertices.for_each([&](int v) { s.neighbours[v] |= e.vertices - PacketSet{v}; });

    // Highest-degree vertices first fail fastest.
    s.order = vertices.indices();
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](int a, int b) { return s.neighbours[a].size() > s.neighbours[b].size(); });

    if (!s.assign(0, 0))
        return std::nullopt;
    StrongColoring out;
    for (const auto& cls : s.classes)
        if (!cls.empty())
            out.classes.push_back(cls);
    std::sort(out.classes.begin(), out.classes.end(),
              [](PacketSet a, PacketSet b) { return a.lowest() < b.lowest(); });
    return out;
}

PerfectSolution perfect_solution_exists(const Sfm& sfm)
{
    const Hypergraph h = Hypergraph::from_sfm(sfm);
    if (h.empty())
        return {true, {}};
    const int r = h.edges().front().vertices.size();
    for (const auto& e : h.edges())
        if (e.vertices.size() != r)
            throw NotSupported("perfect-solution oracle needs every receiver to want the same number of packets");

    auto coloring = strong_coloring_bruteforce(h, r);
    if (!coloring)
        return {false, {}};
    return {true, coloring->classes};
}

std::vector<PacketSet> parse_edge_list(std::istream& in)
{
    std::vector<PacketSet> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream tokens(line);
        std::string tok;
        PacketSet edge;
        bool any = false;
        while (tokens >> tok) {
            int v = 0;
            std::size_t used = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || v < 1 || v > kMaxPackets)
                throw InvalidInput("line " + std::to_string(lineno) + ": bad vertex '" + tok + "'");
            edge.insert(v - 1);
            any = true;
        }
        if (any)
            edges.push_back(edge);
    }
    return edges;
}

std::vector<PacketSet> parse_edge_list(const std::string& text)
{
    std::istringstream in(text);
    return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const std::vector<PacketSet>& edges)
{
    for (const auto& e : edges)
        out << e.to_string() << '\n';
}

} // namespace hlnc
