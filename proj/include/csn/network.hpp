#ifndef CSN_NETWORK_HPP
#define CSN_NETWORK_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csn/corpus.hpp"
#include "csn/tfidf.hpp"

namespace csn {

// A verbatim pair oriented earlier -> later by timestamp.
struct OrderedPair {
    std::string original;  // earlier article
    std::string copy;      // later article
    double cosine = 0.0;
};

struct AttributedCopy {
    std::string original;
    std::string copy;
    double cosine = 0.0;
    std::string original_source;
    std::string copy_source;
    std::int64_t lag_seconds = 0;
};

// Weighted directed source-level network; edge direction runs from the
// original source to the copying source.
struct SharingNetwork {
    std::map<std::pair<std::string, std::string>, std::uint64_t> edges;
    std::vector<std::string> nodes;  // sorted source_ids with >= 1 copy event

    std::uint64_t total_weight() const;
};

// Orients each unordered pair by timestamp; equal timestamps fall back to
// (source_id, article_id) lexicographic order so the direction is stable.
std::vector<OrderedPair> orient_pairs(const std::vector<VerbatimPair>& pairs,
                                      const Corpus& corpus);

// Selects exactly one original per copy article: highest cosine, then oldest,
// then smallest (source_id, article_id). Pairs with lag < min_lag_seconds are
// dropped before attribution.
std::vector<AttributedCopy> attribute_copies(const std::vector<OrderedPair>& ordered,
                                             const Corpus& corpus,
                                             std::int64_t min_lag_seconds = 0);

// Aggregates inter-source copies into the weighted network. Intra-source
// copies (a source republishing itself) are excluded and returned through
// `republications` when given.
SharingNetwork build_network(const std::vector<AttributedCopy>& copies,
                             std::vector<AttributedCopy>* republications = nullptr);

}  // namespace csn

#endif
