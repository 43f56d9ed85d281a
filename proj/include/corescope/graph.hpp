#ifndef CORESCOPE_GRAPH_HPP
#define CORESCOPE_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corescope
{
    using vertex_t = std::uint32_t;

    struct parse_error : std::runtime_error
    {
        parse_error(const std::string &msg, std::size_t line_number)
            : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
              line(line_number)
        {
        }
        std::size_t line;
    };

    /// Immutable simple undirected graph in compressed adjacency form.
    /// Adjacency lists are sorted ascending; vertex ids are dense 0..n-1.
    /// Safe to share read-only across threads after construction.
    class Graph
    {
    public:
        Graph() = default;

        /// Builds from an edge list. Self-loops are dropped and duplicate
        /// edges collapsed; pass counters to observe how many.
        static Graph from_edges(vertex_t n,
                                std::span<const std::pair<vertex_t, vertex_t>> edges,
                                std::vector<std::string> labels = {},
                                std::size_t *self_loops = nullptr,
                                std::size_t *duplicates = nullptr)
        {
            std::size_t loops = 0;
            std::vector<vertex_t> deg(n, 0);
            for (const auto &[u, v] : edges)
            {
                if (u >= n || v >= n)
                    throw std::invalid_argument("edge endpoint out of range");
                if (u == v)
                {
                    ++loops;
                    continue;
                }
                ++deg[u];
                ++deg[v];
            }
            Graph g;
            g.offsets_.assign(n + 1, 0);
            for (vertex_t v = 0; v < n; ++v)
                g.offsets_[v + 1] = g.offsets_[v] + deg[v];
            g.adj_.resize(g.offsets_[n]);
            std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
            for (const auto &[u, v] : edges)
            {
                if (u == v)
                    continue;
                g.adj_[fill[u]++] = v;
                g.adj_[fill[v]++] = u;
            }
            std::size_t dups = 0;
            std::size_t write = 0;
            std::vector<std::size_t> new_offsets(n + 1, 0);
            for (vertex_t v = 0; v < n; ++v)
            {
                const std::size_t lo = g.offsets_[v], hi = g.offsets_[v + 1];
                std::sort(g.adj_.begin() + lo, g.adj_.begin() + hi);
                for (std::size_t i = lo; i < hi; ++i)
                    if (i == lo || g.adj_[i] != g.adj_[i - 1])
                        g.adj_[write++] = g.adj_[i];
                    else
                        ++dups;
                new_offsets[v + 1] = write;
            }
            g.adj_.resize(write);
            g.offsets_ = std::move(new_offsets);
            g.m_ = write / 2;
            g.n_ = n;
            g.labels_ = std::move(labels);
            for (vertex_t v = 0; v < n; ++v)
                g.max_degree_ = std::max<vertex_t>(g.max_degree_, g.degree(v));
            if (self_loops)
                *self_loops = loops;
            if (duplicates)
                *duplicates = dups / 2; // counted once per direction above
            return g;
        }

        vertex_t num_vertices() const { return n_; }
        std::size_t num_edges() const { return m_; }
        vertex_t max_degree() const { return max_degree_; }

        vertex_t degree(vertex_t v) const
        {
            return static_cast<vertex_t>(offsets_[v + 1] - offsets_[v]);
        }

        std::span<const vertex_t> neighbors(vertex_t v) const
        {
            return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
        }

        bool has_edge(vertex_t u, vertex_t v) const
        {
            const auto nb = neighbors(u);
            return std::binary_search(nb.begin(), nb.end(), v);
        }

        bool has_labels() const { return !labels_.empty(); }
        const std::vector<std::string> &labels() const { return labels_; }

        void check_vertex(vertex_t v) const
        {
            if (v >= n_)
                throw std::invalid_argument("vertex id " + std::to_string(v) +
                                            " out of range (n=" + std::to_string(n_) + ")");
        }

        friend bool operator==(const Graph &a, const Graph &b)
        {
            return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
        }

    private:
        vertex_t n_ = 0;
        std::size_t m_ = 0;
        vertex_t max_degree_ = 0;
        std::vector<std::size_t> offsets_;
        std::vector<vertex_t> adj_;
        std::vector<std::string> labels_;
    };

    struct ParseReport
    {
        std::size_t self_loops_dropped = 0;
        std::size_t duplicates_collapsed = 0;
        std::size_t isolated_vertices = 0;
    };

    struct ParsedGraph
    {
        Graph graph;
        ParseReport report;
    };

    /// Parses whitespace-separated "u v" lines. Tokens are arbitrary strings,
    /// densely re-indexed 0..n-1 in first-appearance order and kept as labels.
    /// Lines starting with '#' or '%' are ignored.
    inline ParsedGraph parse_edge_list(std::istream &in)
    {
        std::vector<std::pair<vertex_t, vertex_t>> edges;
        std::vector<std::string> labels;
        std::unordered_map<std::string, vertex_t> index;
        auto intern = [&](std::string &&tok) {
            auto [it, inserted] = index.try_emplace(std::move(tok), static_cast<vertex_t>(labels.size()));
            if (inserted)
                labels.push_back(it->first);
            return it->second;
        };

        std::string line;
        std::size_t line_number = 0;
        bool saw_data = false;
        while (std::getline(in, line))
        {
            ++line_number;
            std::size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            if (line[first] == '#' || line[first] == '%')
                continue;
            std::istringstream ls(line);
            std::string a, b, extra;
            if (!(ls >> a >> b))
                throw parse_error("expected two vertex tokens", line_number);
            if (ls >> extra)
                throw parse_error("expected two vertex tokens, found more", line_number);
            saw_data = true;
            const vertex_t u = intern(std::move(a));
            const vertex_t v = intern(std::move(b));
            edges.emplace_back(u, v);
        }
        if (!saw_data)
            throw parse_error("empty input: no edges found", line_number);

        ParsedGraph result;
        const vertex_t n = static_cast<vertex_t>(labels.size());
        result.graph = Graph::from_edges(n, edges, std::move(labels),
                                         &result.report.self_loops_dropped,
                                         &result.report.duplicates_collapsed);
        for (vertex_t v = 0; v < result.graph.num_vertices(); ++v)
            if (result.graph.degree(v) == 0)
                ++result.report.isolated_vertices;
        return result;
    }

    inline ParsedGraph parse_edge_list(std::string_view text)
    {
        std::istringstream in{std::string(text)};
        return parse_edge_list(in);
    }

    /// Canonical edge-list form: one "u v" line per edge with u < v, rows
    /// ascending. Isolated vertices are not representable in this format.
    inline void serialize_edge_list(const Graph &g, std::ostream &out)
    {
        for (vertex_t u = 0; u < g.num_vertices(); ++u)
            for (vertex_t v : g.neighbors(u))
                if (u < v)
                    out << u << ' ' << v << '\n';
    }

    namespace detail
    {
        /// Reusable BFS state with epoch-stamped visited marks, so repeated
        /// traversals over the same graph avoid O(n) clears.
        struct BfsScratch
        {
            std::vector<std::uint32_t> stamp;
            std::vector<unsigned> dist;
            std::vector<vertex_t> order; // visited vertices, grouped by distance
            std::uint32_t epoch = 0;

            void ensure(std::size_t n)
            {
                if (stamp.size() < n)
                {
                    stamp.assign(n, 0);
                    dist.resize(n);
                    epoch = 0;
                }
            }

            bool visited(vertex_t v) const { return stamp[v] == epoch; }

            /// Truncated BFS from src; fills `order`/`dist`. Returns the
            /// eccentricity reached (max distance ≤ depth_limit).
            unsigned run(const Graph &g, vertex_t src, unsigned depth_limit)
            {
                ensure(g.num_vertices());
                ++epoch;
                if (epoch == 0)
                { // wrapped; re-zero once every 2^32 runs
                    std::fill(stamp.begin(), stamp.end(), 0);
                    epoch = 1;
                }
                order.clear();
                order.push_back(src);
                stamp[src] = epoch;
                dist[src] = 0;
                unsigned reached = 0;
                for (std::size_t head = 0; head < order.size(); ++head)
                {
                    const vertex_t u = order[head];
                    const unsigned du = dist[u];
                    if (du == depth_limit)
                        continue;
                    for (vertex_t w : g.neighbors(u))
                        if (stamp[w] != epoch)
                        {
                            stamp[w] = epoch;
                            dist[w] = du + 1;
                            reached = du + 1;
                            order.push_back(w);
                        }
                }
                return reached;
            }
        };
    } // namespace detail

    /// N_delta(v): all vertices at hop distance at most delta from the
    /// center, center included. `members` is in BFS order (grouped by
    /// distance, center first); `distance` is aligned with it.
    struct NeighborhoodView
    {
        vertex_t center = 0;
        unsigned radius = 0;
        std::vector<vertex_t> members;
        std::vector<unsigned> distance;
    };

    inline NeighborhoodView neighborhood(const Graph &g, vertex_t v, unsigned delta)
    {
        g.check_vertex(v);
        detail::BfsScratch scratch;
        scratch.run(g, v, delta);
        NeighborhoodView view;
        view.center = v;
        view.radius = delta;
        view.members = scratch.order;
        view.distance.reserve(view.members.size());
        for (vertex_t u : view.members)
            view.distance.push_back(scratch.dist[u]);
        return view;
    }

    /// Subgraph induced on `members`, plus the id correspondence: new vertex
    /// i is original vertex vertices[i] (sorted ascending), so the old-to-new
    /// map is the index of an id in `vertices`.
    struct InducedSubgraph
    {
        Graph graph;
        std::vector<vertex_t> vertices;

        vertex_t to_local(vertex_t original) const
        {
            const auto it = std::lower_bound(vertices.begin(), vertices.end(), original);
            if (it == vertices.end() || *it != original)
                throw std::invalid_argument("vertex not in induced subgraph");
            return static_cast<vertex_t>(it - vertices.begin());
        }
    };

    inline InducedSubgraph induced_subgraph(const Graph &g, std::span<const vertex_t> members)
    {
        InducedSubgraph result;
        result.vertices.assign(members.begin(), members.end());
        std::sort(result.vertices.begin(), result.vertices.end());
        result.vertices.erase(std::unique(result.vertices.begin(), result.vertices.end()),
                              result.vertices.end());
        for (vertex_t v : result.vertices)
            g.check_vertex(v);

        const vertex_t k = static_cast<vertex_t>(result.vertices.size());
        std::vector<std::pair<vertex_t, vertex_t>> edges;
        for (vertex_t local = 0; local < k; ++local)
        {
            const vertex_t orig = result.vertices[local];
            for (vertex_t w : g.neighbors(orig))
            {
                if (w <= orig)
                    continue;
                const auto it = std::lower_bound(result.vertices.begin(), result.vertices.end(), w);
                if (it != result.vertices.end() && *it == w)
                    edges.emplace_back(local, static_cast<vertex_t>(it - result.vertices.begin()));
            }
        }
        result.graph = Graph::from_edges(k, edges);
        return result;
    }

    struct DiameterInfo
    {
        unsigned diameter = 0;          // exact, over the largest component
        std::size_t component_count = 0;
        std::size_t largest_component_size = 0;
    };

    /// Exact diameter of the largest connected component (BFS from every one
    /// of its vertices). Components are reported so callers can tell whether
    /// the value covers the whole graph.
    inline DiameterInfo diameter(const Graph &g)
    {
        const vertex_t n = g.num_vertices();
        if (n == 0)
            throw std::invalid_argument("diameter of empty graph is undefined");

        std::vector<std::int32_t> component(n, -1);
        std::vector<std::size_t> comp_size;
        std::vector<vertex_t> queue;
        for (vertex_t v = 0; v < n; ++v)
        {
            if (component[v] >= 0)
                continue;
            const std::int32_t c = static_cast<std::int32_t>(comp_size.size());
            component[v] = c;
            queue.clear();
            queue.push_back(v);
            for (std::size_t head = 0; head < queue.size(); ++head)
                for (vertex_t w : g.neighbors(queue[head]))
                    if (component[w] < 0)
                    {
                        component[w] = c;
                        queue.push_back(w);
                    }
            comp_size.push_back(queue.size());
        }

        DiameterInfo info;
        info.component_count = comp_size.size();
        std::int32_t largest = 0;
        for (std::size_t c = 1; c < comp_size.size(); ++c)
            if (comp_size[c] > comp_size[largest])
                largest = static_cast<std::int32_t>(c);
        info.largest_component_size = comp_size[largest];

        detail::BfsScratch scratch;
        const unsigned no_limit = ~0u;
        for (vertex_t v = 0; v < n; ++v)
            if (component[v] == largest)
                info.diameter = std::max(info.diameter, scratch.run(g, v, no_limit));
        return info;
    }

} // namespace corescope

#endif // CORESCOPE_GRAPH_HPP
