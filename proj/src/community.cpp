#include "csn/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csn {

namespace {

// Dense working form of a SharingNetwork with nodes mapped to 0..n-1 in
// sorted source_id order.
struct DenseGraph {
    std::size_t n = 0;
    std::vector<std::string> ids;
    std::vector<double> w;  // row-major, w[u * n + v] = weight u -> v
    std::vector<double> sout, sin;
    double m = 0.0;

    double weight(std::size_t u, std::size_t v) const { return w[u * n + v]; }
};

DenseGraph densify(const SharingNetwork& net) {
    DenseGraph g;
    g.ids = net.nodes;
    g.n = g.ids.size();
    g.w.assign(g.n * g.n, 0.0);
    g.sout.assign(g.n, 0.0);
    g.sin.assign(g.n, 0.0);
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < g.n; ++i) idx[g.ids[i]] = i;
    for (const auto& [e, wt] : net.edges) {
        const std::size_t u = idx.at(e.first), v = idx.at(e.second);
        const double d = static_cast<double>(wt);
        g.w[u * g.n + v] += d;
        g.sout[u] += d;
        g.sin[v] += d;
        g.m += d;
    }
    return g;
}

// Q contribution of one community: (W_int - S_out S_in / m) / m, where W_int
// sums edges with both endpoints inside.
struct CommunityAggregate {
    double w_int = 0.0, s_out = 0.0, s_in = 0.0;
};

double aggregate_q(const CommunityAggregate& a, double m) {
    return a.w_int / m - (a.s_out / m) * (a.s_in / m);
}

std::vector<std::uint32_t> weak_components(const DenseGraph& g) {
    std::vector<std::uint32_t> comp(g.n, UINT32_MAX);
    std::uint32_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < g.n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < g.n; ++v) {
                if (comp[v] == UINT32_MAX &&
                    (g.weight(u, v) > 0.0 || g.weight(v, u) > 0.0)) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

// Leading eigenvector of the symmetrized generalized modularity matrix of a
// group, via shifted power iteration. Deterministic start vector.
std::vector<double> leading_eigenvector(const std::vector<double>& b, std::size_t s) {
    double shift = 0.0;
    for (std::size_t u = 0; u < s; ++u) {
        double row = 0.0;
        for (std::size_t v = 0; v < s; ++v) row += std::fabs(b[u * s + v]);
        shift = std::max(shift, row);
    }

    std::vector<double> x(s), y(s);
    for (std::size_t u = 0; u < s; ++u)
        x[u] = 1.0 + 1e-3 * static_cast<double>((u * 2654435761u) % 997) / 997.0;
    double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (double& v : x) v /= norm;

    for (std::size_t iter = 0; iter < 2000; ++iter) {
        for (std::size_t u = 0; u < s; ++u) {
            double acc = shift * x[u];
            const double* row = &b[u * s];
            for (std::size_t v = 0; v < s; ++v) acc += row[v] * x[v];
            y[u] = acc;
        }
        norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        if (norm == 0.0) break;
        double diff = 0.0;
        for (std::size_t u = 0; u < s; ++u) {
            y[u] /= norm;
            diff += (y[u] - x[u]) * (y[u] - x[u]);
        }
        x.swap(y);
        if (std::sqrt(diff) < 1e-13) break;
    }
    return x;
}

// State for recursive bisection of one group of node indices.
class Bisector {
  public:
    Bisector(const DenseGraph& g, double min_dq) : g_(g), min_dq_(min_dq) {}

    void run(std::vector<std::size_t> group, std::vector<std::uint32_t>& labels,
             std::uint32_t& next_label) {
        const std::uint32_t label = next_label++;
        for (std::size_t u : group) labels[u] = label;
        split(std::move(group), labels, next_label, label);
    }

  private:
    const DenseGraph& g_;
    double min_dq_;

    CommunityAggregate side_aggregate(const std::vector<std::size_t>& group,
                                      const std::vector<char>& side,
                                      char which) const {
        CommunityAggregate a;
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (side[i] != which) continue;
            a.s_out += g_.sout[group[i]];
            a.s_in += g_.sin[group[i]];
            for (std::size_t j = 0; j < group.size(); ++j)
                if (side[j] == which) a.w_int += g_.weight(group[i], group[j]);
        }
        return a;
    }

    // Gain in Q from flipping group[i] to the other side, given current
    // aggregates of its side (from) and the other side (to).
    double flip_gain(const std::vector<std::size_t>& group,
                     const std::vector<char>& side, std::size_t i,
                     const CommunityAggregate& from,
                     const CommunityAggregate& to) const {
        const std::size_t u = group[i];
        const double m = g_.m;
        double w_with_from = 0.0, w_with_to = 0.0;
        for (std::size_t j = 0; j < group.size(); ++j) {
            if (j == i) continue;
            const double both = g_.weight(u, group[j]) + g_.weight(group[j], u);
            if (side[j] == side[i])
                w_with_from += both;
            else
                w_with_to += both;
        }
        const double self = g_.weight(u, u);
        CommunityAggregate nf = from, nt = to;
        nf.w_int -= w_with_from + self;
        nf.s_out -= g_.sout[u];
        nf.s_in -= g_.sin[u];
        nt.w_int += w_with_to + self;
        nt.s_out += g_.sout[u];
        nt.s_in += g_.sin[u];
        return aggregate_q(nf, m) + aggregate_q(nt, m) - aggregate_q(from, m) -
               aggregate_q(to, m);
    }

    // Kernighan-Lin pass: greedily flip every node once, keep the best prefix.
    // Returns true if the pass improved the split.
    bool kl_pass(const std::vector<std::size_t>& group,
                 std::vector<char>& side) const {
        const std::size_t s = group.size();
        CommunityAggregate agg[2] = {side_aggregate(group, side, 0),
                                     side_aggregate(group, side, 1)};
        std::vector<char> moved(s, 0);
        std::vector<std::size_t> order;
        order.reserve(s);
        double cum = 0.0, best_cum = 0.0;
        std::size_t best_prefix = 0;

        for (std::size_t step = 0; step < s; ++step) {
            double best_gain = 0.0;
            std::size_t best_i = s;
            for (std::size_t i = 0; i < s; ++i) {
                if (moved[i]) continue;
                const double gain = flip_gain(group, side, i, agg[side[i]],
                                              agg[1 - side[i]]);
                if (best_i == s || gain > best_gain) {
                    best_gain = gain;
                    best_i = i;
                }
            }
            // Apply the flip even when negative; later flips may recover.
            const char from = side[best_i];
            CommunityAggregate nf = agg[from], nt = agg[1 - from];
            apply_flip(group, side, best_i, nf, nt);
            agg[from] = nf;
            agg[1 - from] = nt;
            side[best_i] = 1 - from;
            moved[best_i] = 1;
            order.push_back(best_i);
            cum += best_gain;
            if (cum > best_cum + 1e-14) {
                best_cum = cum;
                best_prefix = step + 1;
            }
        }
        // Undo everything past the best prefix.
        for (std::size_t step = s; step > best_prefix; --step)
            side[order[step - 1]] = 1 - side[order[step - 1]];
        return best_cum > 1e-14;
    }

    void apply_flip(const std::vector<std::size_t>& group,
                    const std::vector<char>& side, std::size_t i,
                    CommunityAggregate& from, CommunityAggregate& to) const {
        const std::size_t u = group[i];
        double w_with_from = 0.0, w_with_to = 0.0;
        for (std::size_t j = 0; j < group.size(); ++j) {
            if (j == i) continue;
            const double both = g_.weight(u, group[j]) + g_.weight(group[j], u);
            if (side[j] == side[i])
                w_with_from += both;
            else
                w_with_to += both;
        }
        const double self = g_.weight(u, u);
        from.w_int -= w_with_from + self;
        from.s_out -= g_.sout[u];
        from.s_in -= g_.sin[u];
        to.w_int += w_with_to + self;
        to.s_out += g_.sout[u];
        to.s_in += g_.sin[u];
    }

    void split(std::vector<std::size_t> group, std::vector<std::uint32_t>& labels,
               std::uint32_t& next_label, std::uint32_t label) {
        const std::size_t s = group.size();
        if (s < 2) return;

        // Symmetrized generalized modularity matrix restricted to the group.
        std::vector<double> b(s * s);
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                const std::size_t u = group[i], v = group[j];
                b[i * s + j] = g_.weight(u, v) + g_.weight(v, u) -
                               (g_.sout[u] * g_.sin[v] + g_.sout[v] * g_.sin[u]) / g_.m;
            }
        }
        for (std::size_t i = 0; i < s; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < s; ++j) row += b[i * s + j];
            b[i * s + i] -= row;
        }

        const std::vector<double> x = leading_eigenvector(b, s);
        std::vector<char> side(s);
        for (std::size_t i = 0; i < s; ++i) side[i] = x[i] >= 0.0 ? 0 : 1;

        while (kl_pass(group, side)) {
        }

        const CommunityAggregate a0 = side_aggregate(group, side, 0);
        const CommunityAggregate a1 = side_aggregate(group, side, 1);
        CommunityAggregate whole;
        whole.w_int = a0.w_int + a1.w_int;
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                if (side[i] != side[j]) whole.w_int += g_.weight(group[i], group[j]);
        whole.s_out = a0.s_out + a1.s_out;
        whole.s_in = a0.s_in + a1.s_in;

        const double dq = aggregate_q(a0, g_.m) + aggregate_q(a1, g_.m) -
                          aggregate_q(whole, g_.m);
        std::vector<std::size_t> g0, g1;
        for (std::size_t i = 0; i < s; ++i)
            (side[i] == 0 ? g0 : g1).push_back(group[i]);
        if (dq <= min_dq_ || g0.empty() || g1.empty()) return;

        const std::uint32_t l1 = next_label++;
        for (std::size_t u : g1) labels[u] = l1;
        split(std::move(g0), labels, next_label, label);
        split(std::move(g1), labels, next_label, l1);
    }
};

// Greedy refinement over the final labels: best single-node move, then best
// pairwise merge, restricted to each weakly connected component.
void refine(const DenseGraph& g, const std::vector<std::uint32_t>& comp,
            std::vector<std::uint32_t>& labels, double min_dq) {
    const double m = g.m;
    auto aggregates = [&] {
        std::map<std::uint32_t, CommunityAggregate> agg;
        for (std::size_t u = 0; u < g.n; ++u) {
            agg[labels[u]].s_out += g.sout[u];
            agg[labels[u]].s_in += g.sin[u];
            for (std::size_t v = 0; v < g.n; ++v)
                if (labels[u] == labels[v]) agg[labels[u]].w_int += g.weight(u, v);
        }
        return agg;
    };

    bool improved = true;
    while (improved) {
        improved = false;
        auto agg = aggregates();

        // Best single-node move.
        double best_gain = min_dq;
        std::size_t best_u = g.n;
        std::uint32_t best_to = 0;
        for (std::size_t u = 0; u < g.n; ++u) {
            const std::uint32_t from = labels[u];
            std::map<std::uint32_t, double> w_with;  // both-direction weight
            for (std::size_t v = 0; v < g.n; ++v) {
                if (v == u) continue;
                const double both = g.weight(u, v) + g.weight(v, u);
                if (both > 0.0) w_with[labels[v]] += both;
            }
            for (const auto& [to, agg_to] : agg) {
                if (to == from) continue;
                // Moves never cross weak components.
                bool same_comp = false;
                for (std::size_t v = 0; v < g.n && !same_comp; ++v)
                    same_comp = labels[v] == to && comp[v] == comp[u];
                if (!same_comp) continue;
                CommunityAggregate nf = agg.at(from), nt = agg_to;
                auto it = w_with.find(from);
                nf.w_int -= (it != w_with.end() ? it->second : 0.0) + g.weight(u, u);
                nf.s_out -= g.sout[u];
                nf.s_in -= g.sin[u];
                it = w_with.find(to);
                nt.w_int += (it != w_with.end() ? it->second : 0.0) + g.weight(u, u);
                nt.s_out += g.sout[u];
                nt.s_in += g.sin[u];
                const double gain = aggregate_q(nf, m) + aggregate_q(nt, m) -
                                    aggregate_q(agg.at(from), m) -
                                    aggregate_q(agg_to, m);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_u = u;
                    best_to = to;
                }
            }
        }
        if (best_u < g.n) {
            labels[best_u] = best_to;
            improved = true;
            continue;
        }

        // Best pairwise merge.
        std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
        for (std::size_t u = 0; u < g.n; ++u)
            for (std::size_t v = 0; v < g.n; ++v)
                if (labels[u] != labels[v] && g.weight(u, v) > 0.0)
                    between[{std::min(labels[u], labels[v]),
                             std::max(labels[u], labels[v])}] += g.weight(u, v);
        double best_merge = min_dq;
        std::pair<std::uint32_t, std::uint32_t> merge_pair{0, 0};
        bool have_merge = false;
        for (const auto& [pair, w_between] : between) {
            const auto& a = agg.at(pair.first);
            const auto& b = agg.at(pair.second);
            const double gain =
                w_between / m -
                (a.s_out / m) * (b.s_in / m) - (b.s_out / m) * (a.s_in / m);
            if (gain > best_merge) {
                best_merge = gain;
                merge_pair = pair;
                have_merge = true;
            }
        }
        if (have_merge) {
            for (std::size_t u = 0; u < g.n; ++u)
                if (labels[u] == merge_pair.second) labels[u] = merge_pair.first;
            improved = true;
        }
    }
}

}  // namespace

double directed_modularity(const SharingNetwork& net,
                           const std::map<std::string, std::uint32_t>& assignment) {
    if (net.nodes.empty() || net.edges.empty())
        throw std::invalid_argument("directed_modularity: empty network");

    double m = 0.0;
    for (const auto& [e, w] : net.edges) m += static_cast<double>(w);

    std::map<std::uint32_t, CommunityAggregate> agg;
    for (const std::string& node : net.nodes) {
        auto it = assignment.find(node);
        if (it == assignment.end())
            throw std::invalid_argument("directed_modularity: unassigned node " + node);
        agg[it->second];  // materialize every community
    }
    for (const auto& [e, w] : net.edges) {
        const std::uint32_t cu = assignment.at(e.first);
        const std::uint32_t cv = assignment.at(e.second);
        const double d = static_cast<double>(w);
        agg[cu].s_out += d;
        agg[cv].s_in += d;
        if (cu == cv) agg[cu].w_int += d;
    }

    double q = 0.0;
    for (const auto& [label, a] : agg) q += aggregate_q(a, m);
    return q;
}

Partition detect_communities(const SharingNetwork& net, double min_dq) {
    if (net.nodes.empty() || net.edges.empty())
        throw std::invalid_argument("detect_communities: empty network");

    const DenseGraph g = densify(net);
    const std::vector<std::uint32_t> comp = weak_components(g);
    const std::uint32_t n_comp = *std::max_element(comp.begin(), comp.end()) + 1;

    std::vector<std::uint32_t> labels(g.n, 0);
    std::uint32_t next_label = 0;
    Bisector bisector(g, min_dq);
    for (std::uint32_t c = 0; c < n_comp; ++c) {
        std::vector<std::size_t> group;
        for (std::size_t u = 0; u < g.n; ++u)
            if (comp[u] == c) group.push_back(u);
        bisector.run(std::move(group), labels, next_label);
    }

    refine(g, comp, labels, min_dq);

    // Relabel communities 0..C-1 in order of smallest member index.
    std::map<std::uint32_t, std::uint32_t> relabel;
    for (std::size_t u = 0; u < g.n; ++u)
        relabel.emplace(labels[u], static_cast<std::uint32_t>(relabel.size()));

    Partition p;
    for (std::size_t u = 0; u < g.n; ++u)
        p.assignment[g.ids[u]] = relabel.at(labels[u]);
    p.n_communities = static_cast<std::uint32_t>(relabel.size());
    p.modularity = directed_modularity(net, p.assignment);
    return p;
}

CommunityGraph community_graph(const SharingNetwork& net, const Partition& partition,
                               bool symmetric) {
    CommunityGraph cg;
    std::map<std::uint32_t, std::size_t>& counts = cg.member_counts;
    for (const std::string& node : net.nodes) ++counts[partition.assignment.at(node)];
    for (const auto& [e, w] : net.edges) {
        std::uint32_t x = partition.assignment.at(e.first);
        std::uint32_t y = partition.assignment.at(e.second);
        if (symmetric && x > y) std::swap(x, y);
        cg.edges[{x, y}] += w;
    }
    return cg;
}

KCoreResult k_core(const SharingNetwork& net, const std::vector<std::string>& members) {
    std::vector<std::string> nodes = members.empty() ? net.nodes : members;
    std::sort(nodes.begin(), nodes.end());
    if (nodes.empty()) throw std::invalid_argument("k_core: empty subgraph");

    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i) idx[nodes[i]] = i;
    const std::size_t n = nodes.size();
    std::vector<std::set<std::size_t>> adj(n);  // undirected, unweighted
    for (const auto& [e, w] : net.edges) {
        auto a = idx.find(e.first), b = idx.find(e.second);
        if (a == idx.end() || b == idx.end() || a->second == b->second) continue;
        adj[a->second].insert(b->second);
        adj[b->second].insert(a->second);
    }

    // Peeling: always remove a minimum-degree node; its core number is the
    // running maximum of the minimum degree seen.
    std::vector<std::uint32_t> core(n, 0);
    std::vector<char> removed(n, 0);
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) degree[i] = adj[i].size();
    std::uint32_t k = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!removed[i] && (best == n || degree[i] < degree[best])) best = i;
        k = std::max(k, static_cast<std::uint32_t>(degree[best]));
        core[best] = k;
        removed[best] = 1;
        for (std::size_t j : adj[best])
            if (!removed[j]) --degree[j];
    }

    KCoreResult result;
    result.k = k;
    for (std::size_t i = 0; i < n; ++i)
        if (core[i] == k) result.members.push_back(nodes[i]);
    return result;
}

CentralityResult eigenvector_centrality(const SharingNetwork& net,
                                        CentralityOrientation orientation,
                                        double tol, std::size_t max_iter) {
    if (net.nodes.empty())
        throw std::invalid_argument("eigenvector_centrality: empty network");
    const DenseGraph g = densify(net);

    std::vector<double> x(g.n, 1.0 / std::sqrt(static_cast<double>(g.n)));
    std::vector<double> y(g.n);
    CentralityResult result;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (std::size_t v = 0; v < g.n; ++v) {
            double acc = 0.0;
            for (std::size_t u = 0; u < g.n; ++u) {
                const double w = orientation == CentralityOrientation::In
                                     ? g.weight(u, v)
                                     : g.weight(v, u);
                acc += w * x[u];
            }
            y[v] = acc;
        }
        double norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        if (norm == 0.0) {
            result.iterations = iter + 1;
            break;  // no score flow at all; report non-convergence
        }
        double diff = 0.0;
        for (std::size_t v = 0; v < g.n; ++v) {
            y[v] /= norm;
            diff += (y[v] - x[v]) * (y[v] - x[v]);
        }
        x.swap(y);
        result.iterations = iter + 1;
        if (std::sqrt(diff) < tol) {
            result.converged = true;
            break;
        }
    }
    for (std::size_t v = 0; v < g.n; ++v) result.scores[g.ids[v]] = x[v];
    return result;
}

}  // namespace csn
