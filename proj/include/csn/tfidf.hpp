#ifndef CSN_TFIDF_HPP
#define CSN_TFIDF_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csn/corpus.hpp"

namespace csn {

// Sparse L2-normalized document vector, sorted by term dimension.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

struct TfidfModel {
    std::size_t window_index = 0;
    std::map<std::string, std::uint32_t> vocabulary;  // term -> dimension
    std::vector<std::string> article_ids;             // sorted, defines row order
    std::vector<SparseVector> vectors;                // parallel to article_ids
};

struct VerbatimPair {
    std::string article_a;  // article_a < article_b
    std::string article_b;
    double cosine = 0.0;
    std::size_t window_index = 0;
};

// Per-window TFIDF over normalized bodies: tf = raw count,
// idf = ln((1 + N) / (1 + df)) + 1, vectors L2-normalized.
TfidfModel build_tfidf(const TimeWindow& window, const Corpus& corpus);

// All unordered pairs with cosine >= threshold, sorted by (article_a,
// article_b). Candidates are pruned through an inverted index and evaluated
// in parallel; the result is identical to the dense reference below.
std::vector<VerbatimPair> extract_pairs(const TfidfModel& model, double threshold);

// Dense O(n^2) reference implementation, kept for testing and benchmarking.
std::vector<VerbatimPair> extract_pairs_serial(const TfidfModel& model,
                                               double threshold);

// Dot product of two sorted sparse vectors, accumulated in ascending
// dimension order (both implementations share this summation order).
double sparse_dot(const SparseVector& a, const SparseVector& b);

}  // namespace csn

#endif
