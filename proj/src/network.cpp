#include "csn/network.hpp"

#include <algorithm>
#include <tuple>

namespace csn {

std::uint64_t SharingNetwork::total_weight() const {
    std::uint64_t sum = 0;
    for (const auto& [e, w] : edges) sum += w;
    return sum;
}

std::vector<OrderedPair> orient_pairs(const std::vector<VerbatimPair>& pairs,
                                      const Corpus& corpus) {
    std::vector<OrderedPair> out;
    out.reserve(pairs.size());
    for (const VerbatimPair& p : pairs) {
        const Article& a = corpus.article(p.article_a);
        const Article& b = corpus.article(p.article_b);
        bool a_first;
        if (a.published_utc != b.published_utc) {
            a_first = a.published_utc < b.published_utc;
        } else {
            a_first = std::tie(a.source_id, a.article_id) <
                      std::tie(b.source_id, b.article_id);
        }
        if (a_first)
            out.push_back({p.article_a, p.article_b, p.cosine});
        else
            out.push_back({p.article_b, p.article_a, p.cosine});
    }
    std::sort(out.begin(), out.end(), [](const OrderedPair& x, const OrderedPair& y) {
        return std::tie(x.original, x.copy) < std::tie(y.original, y.copy);
    });
    return out;
}

std::vector<AttributedCopy> attribute_copies(const std::vector<OrderedPair>& ordered,
                                             const Corpus& corpus,
                                             std::int64_t min_lag_seconds) {
    // Group candidates by copy article; each group selects one original.
    std::map<std::string, std::vector<const OrderedPair*>> by_copy;
    for (const OrderedPair& p : ordered) {
        const std::int64_t lag = corpus.article(p.copy).published_utc -
                                 corpus.article(p.original).published_utc;
        if (lag < min_lag_seconds) continue;
        by_copy[p.copy].push_back(&p);
    }

    std::vector<AttributedCopy> out;
    out.reserve(by_copy.size());
    for (const auto& [copy_id, candidates] : by_copy) {
        const OrderedPair* best = nullptr;
        for (const OrderedPair* c : candidates) {
            if (!best) {
                best = c;
                continue;
            }
            const Article& co = corpus.article(c->original);
            const Article& bo = corpus.article(best->original);
            if (c->cosine != best->cosine) {
                if (c->cosine > best->cosine) best = c;
            } else if (co.published_utc != bo.published_utc) {
                if (co.published_utc < bo.published_utc) best = c;  // oldest wins
            } else if (std::tie(co.source_id, co.article_id) <
                       std::tie(bo.source_id, bo.article_id)) {
                best = c;
            }
        }
        const Article& orig = corpus.article(best->original);
        const Article& copy = corpus.article(copy_id);
        out.push_back({best->original, copy_id, best->cosine, orig.source_id,
                       copy.source_id, copy.published_utc - orig.published_utc});
    }
    return out;  // map iteration keeps output sorted by copy id
}

SharingNetwork build_network(const std::vector<AttributedCopy>& copies,
                             std::vector<AttributedCopy>* republications) {
    SharingNetwork net;
    std::set<std::string> nodes;
    for (const AttributedCopy& c : copies) {
        if (c.original_source == c.copy_source) {
            if (republications) republications->push_back(c);
            continue;
        }
        ++net.edges[{c.original_source, c.copy_source}];
        nodes.insert(c.original_source);
        nodes.insert(c.copy_source);
    }
    net.nodes.assign(nodes.begin(), nodes.end());
    return net;
}

}  // namespace csn
