#ifndef CSN_WINNOW_HPP
#define CSN_WINNOW_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csn/corpus.hpp"

namespace csn {

struct WinnowParams {
    std::size_t k = 10;        // k-gram length in normalized characters
    std::size_t window = 25;   // winnowing window in hashes
    std::size_t seg_min = 170; // retained segments must be strictly longer
    std::size_t pair_min = 350;// combined length must be at least this
    std::size_t merge_gap = 30;
};

struct Fingerprint {
    std::string article_id;
    std::size_t k = 0;
    std::size_t window = 0;
    std::vector<std::pair<std::uint64_t, std::size_t>> entries;  // (hash, pos)
};

struct HashMatch {
    std::uint64_t hash = 0;
    std::size_t pos_a = 0;
    std::size_t pos_b = 0;
};

// Character intervals are half-open [begin, end) in normalized coordinates.
struct OverlapSegment {
    std::size_t begin_a = 0, end_a = 0;
    std::size_t begin_b = 0, end_b = 0;
    std::size_t length() const { return end_a - begin_a; }
};

struct PartialMatch {
    std::string article_a;  // article_a < article_b
    std::string article_b;
    std::vector<OverlapSegment> segments;
    std::size_t combined_length = 0;
};

// Polynomial rolling hashes of all k-grams, 64-bit wraparound arithmetic.
std::vector<std::uint64_t> kgram_hashes(std::string_view text, std::size_t k);

// Robust winnowing: the minimum hash in each window of `w` consecutive k-gram
// hashes, rightmost occurrence on ties, consecutive duplicates stored once.
// Text shorter than k yields an empty fingerprint.
Fingerprint fingerprint(const std::string& article_id, std::string_view normalized,
                        std::size_t k, std::size_t w);

// All hash matches between two fingerprints, verified against the raw
// normalized text so hash collisions cannot produce matches. Throws
// std::invalid_argument on (k, window) parameter mismatch.
std::vector<HashMatch> detect_overlaps(const Fingerprint& fa, const Fingerprint& fb,
                                       std::string_view text_a,
                                       std::string_view text_b);

// Grows each match to the longest surrounding run of identical text, then
// merges ranges separated by <= gap characters on both sides.
std::vector<OverlapSegment> expand_and_merge(const std::vector<HashMatch>& matches,
                                             std::string_view text_a,
                                             std::string_view text_b,
                                             std::size_t k, std::size_t gap);

// Applies the segment and pair length thresholds: segments must be strictly
// longer than seg_min, pairs must retain a combined length >= pair_min.
bool filter_match(PartialMatch& match, std::size_t seg_min, std::size_t pair_min);

// Full partial-content search over a corpus: fingerprint every article (in
// parallel), find candidate pairs through an inverted hash index, then expand,
// merge and threshold each pair. Output sorted by (article_a, article_b).
std::vector<PartialMatch> find_partial_matches(const Corpus& corpus,
                                               const WinnowParams& params);

// All-pairs serial reference, kept for testing and benchmarking.
std::vector<PartialMatch> find_partial_matches_serial(const Corpus& corpus,
                                                      const WinnowParams& params);

}  // namespace csn

#endif
