#include "csn/winnow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csn {

namespace {

// Base chosen prime and large; 64-bit wraparound arithmetic, no modulus.
// Collisions are neutralized downstream by raw-text verification.
constexpr std::uint64_t kHashBase = 1000003;

}  // namespace

std::vector<std::uint64_t> kgram_hashes(std::string_view text, std::size_t k) {
    std::vector<std::uint64_t> hashes;
    if (k == 0 || text.size() < k) return hashes;
    hashes.reserve(text.size() - k + 1);

    std::uint64_t top_power = 1;  // base^(k-1)
    for (std::size_t i = 1; i < k; ++i) top_power *= kHashBase;

    std::uint64_t h = 0;
    for (std::size_t i = 0; i < k; ++i)
        h = h * kHashBase + static_cast<unsigned char>(text[i]);
    hashes.push_back(h);
    for (std::size_t i = k; i < text.size(); ++i) {
        h -= static_cast<unsigned char>(text[i - k]) * top_power;
        h = h * kHashBase + static_cast<unsigned char>(text[i]);
        hashes.push_back(h);
    }
    return hashes;
}

Fingerprint fingerprint(const std::string& article_id, std::string_view normalized,
                        std::size_t k, std::size_t w) {
    if (k == 0 || w == 0)
        throw std::invalid_argument("fingerprint: k and window must be >= 1");
    Fingerprint fp;
    fp.article_id = article_id;
    fp.k = k;
    fp.window = w;

    const std::vector<std::uint64_t> hashes = kgram_hashes(normalized, k);
    if (hashes.empty()) return fp;

    // Monotonic deque; popping on >= prefers the rightmost minimal hash.
    std::deque<std::size_t> q;
    std::size_t last_selected = static_cast<std::size_t>(-1);
    auto select = [&](std::size_t pos) {
        if (pos == last_selected) return;
        // Runs of equal selections (a repeated minimum sliding through the
        // text) collapse to their first entry.
        if (!fp.entries.empty() && fp.entries.back().first == hashes[pos]) {
            last_selected = pos;
            return;
        }
        fp.entries.emplace_back(hashes[pos], pos);
        last_selected = pos;
    };

    for (std::size_t i = 0; i < hashes.size(); ++i) {
        while (!q.empty() && hashes[q.back()] >= hashes[i]) q.pop_back();
        q.push_back(i);
        if (i + 1 >= w) {
            while (q.front() + w <= i) q.pop_front();
            select(q.front());
        }
    }
    // Fewer hashes than one window: treat the whole sequence as one window so
    // short documents still carry a signature.
    if (hashes.size() < w) select(q.front());
    return fp;
}

std::vector<HashMatch> detect_overlaps(const Fingerprint& fa, const Fingerprint& fb,
                                       std::string_view text_a,
                                       std::string_view text_b) {
    if (fa.k != fb.k || fa.window != fb.window)
        throw std::invalid_argument("detect_overlaps: fingerprint parameter mismatch");
    const std::size_t k = fa.k;

    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_b;
    for (const auto& [h, pos] : fb.entries) index_b[h].push_back(pos);

    std::vector<HashMatch> matches;
    for (const auto& [h, pa] : fa.entries) {
        auto it = index_b.find(h);
        if (it == index_b.end()) continue;
        for (std::size_t pb : it->second) {
            if (text_a.substr(pa, k) == text_b.substr(pb, k))
                matches.push_back({h, pa, pb});
        }
    }
    std::sort(matches.begin(), matches.end(), [](const HashMatch& x, const HashMatch& y) {
        return std::tie(x.pos_a, x.pos_b) < std::tie(y.pos_a, y.pos_b);
    });
    return matches;
}

std::vector<OverlapSegment> expand_and_merge(const std::vector<HashMatch>& matches,
                                             std::string_view text_a,
                                             std::string_view text_b,
                                             std::size_t k, std::size_t gap) {
    std::vector<OverlapSegment> segs;
    segs.reserve(matches.size());
    for (const HashMatch& m : matches) {
        OverlapSegment s{m.pos_a, m.pos_a + k, m.pos_b, m.pos_b + k};
        while (s.begin_a > 0 && s.begin_b > 0 &&
               text_a[s.begin_a - 1] == text_b[s.begin_b - 1]) {
            --s.begin_a;
            --s.begin_b;
        }
        while (s.end_a < text_a.size() && s.end_b < text_b.size() &&
               text_a[s.end_a] == text_b[s.end_b]) {
            ++s.end_a;
            ++s.end_b;
        }
        segs.push_back(s);
    }

    auto key = [](const OverlapSegment& s) {
        return std::make_tuple(s.begin_a, s.end_a, s.begin_b, s.end_b);
    };
    std::sort(segs.begin(), segs.end(),
              [&](const OverlapSegment& x, const OverlapSegment& y) {
                  return key(x) < key(y);
              });
    segs.erase(std::unique(segs.begin(), segs.end(),
                           [&](const OverlapSegment& x, const OverlapSegment& y) {
                               return key(x) == key(y);
                           }),
               segs.end());

    // Merge until fixpoint. Ranges that are within `gap` (or overlapping) in
    // BOTH documents are unioned; a one-sided overlap means the same text
    // region aligned against two distant counterparts (repeats or chance
    // matches), where unioning would fabricate length, so only the longer
    // range survives. The result is pairwise non-overlapping per document.
    auto close = [](std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2,
                    std::size_t g) { return b2 <= e1 + g && b1 <= e2 + g; };
    auto join = [](OverlapSegment& c, const OverlapSegment& s) {
        c.begin_a = std::min(c.begin_a, s.begin_a);
        c.end_a = std::max(c.end_a, s.end_a);
        c.begin_b = std::min(c.begin_b, s.begin_b);
        c.end_b = std::max(c.end_b, s.end_b);
    };
    auto span = [](const OverlapSegment& s) {
        return (s.end_a - s.begin_a) + (s.end_b - s.begin_b);
    };

    bool merged = true;
    while (merged) {
        merged = false;
        std::sort(segs.begin(), segs.end(),
                  [&](const OverlapSegment& x, const OverlapSegment& y) {
                      return key(x) < key(y);
                  });
        std::vector<OverlapSegment> out;
        for (const OverlapSegment& s : segs) {
            if (!out.empty()) {
                OverlapSegment& c = out.back();
                const bool close_both =
                    close(c.begin_a, c.end_a, s.begin_a, s.end_a, gap) &&
                    close(c.begin_b, c.end_b, s.begin_b, s.end_b, gap);
                if (close_both) {
                    join(c, s);
                    merged = true;
                    continue;
                }
                if (s.begin_a < c.end_a) {  // conflict: far apart in b
                    if (span(s) > span(c)) c = s;
                    merged = true;
                    continue;
                }
            }
            out.push_back(s);
        }
        std::sort(out.begin(), out.end(),
                  [](const OverlapSegment& x, const OverlapSegment& y) {
                      return std::tie(x.begin_b, x.end_b) < std::tie(y.begin_b, y.end_b);
                  });
        segs.clear();
        for (const OverlapSegment& s : out) {
            if (!segs.empty() && s.begin_b < segs.back().end_b) {
                OverlapSegment& c = segs.back();
                if (close(c.begin_a, c.end_a, s.begin_a, s.end_a, gap)) {
                    join(c, s);
                } else if (span(s) > span(c)) {
                    c = s;
                }
                merged = true;
            } else {
                segs.push_back(s);
            }
        }
    }
    std::sort(segs.begin(), segs.end(),
              [&](const OverlapSegment& x, const OverlapSegment& y) {
                  return key(x) < key(y);
              });
    return segs;
}

bool filter_match(PartialMatch& match, std::size_t seg_min, std::size_t pair_min) {
    std::erase_if(match.segments,
                  [&](const OverlapSegment& s) { return s.length() <= seg_min; });
    match.combined_length = 0;
    for (const OverlapSegment& s : match.segments)
        match.combined_length += s.length();
    return !match.segments.empty() && match.combined_length >= pair_min;
}

namespace {

std::vector<PartialMatch> evaluate_pairs(
    const Corpus& corpus, const std::vector<Fingerprint>& fps,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& candidates,
    const WinnowParams& params) {
    std::vector<PartialMatch> results(candidates.size());
    std::vector<char> keep(candidates.size(), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto [i, j] = candidates[c];
        const std::string& ta = corpus.articles[i].body_norm.text;
        const std::string& tb = corpus.articles[j].body_norm.text;
        const auto matches = detect_overlaps(fps[i], fps[j], ta, tb);
        if (matches.empty()) continue;
        PartialMatch pm;
        pm.article_a = corpus.articles[i].article_id;
        pm.article_b = corpus.articles[j].article_id;
        pm.segments = expand_and_merge(matches, ta, tb, params.k, params.merge_gap);
        if (filter_match(pm, params.seg_min, params.pair_min)) {
            results[c] = std::move(pm);
            keep[c] = 1;
        }
    }

    std::vector<PartialMatch> out;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (keep[c]) out.push_back(std::move(results[c]));
    return out;  // candidate order is (i, j) ascending, i.e. id order
}

}  // namespace

std::vector<PartialMatch> find_partial_matches(const Corpus& corpus,
                                               const WinnowParams& params) {
    const std::size_t n = corpus.articles.size();
    std::vector<Fingerprint> fps(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < n; ++i)
        fps[i] = fingerprint(corpus.articles[i].article_id,
                             corpus.articles[i].body_norm.text, params.k,
                             params.window);

    // Inverted index hash -> documents; any shared hash makes a candidate.
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> postings;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [h, pos] : fps[i].entries) {
            auto& docs = postings[h];
            if (docs.empty() || docs.back() != i) docs.push_back(i);
        }

    std::set<std::pair<std::uint32_t, std::uint32_t>> cand_set;
    for (const auto& [h, docs] : postings)
        for (std::size_t x = 0; x < docs.size(); ++x)
            for (std::size_t y = x + 1; y < docs.size(); ++y)
                cand_set.insert({docs[x], docs[y]});

    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates(
        cand_set.begin(), cand_set.end());
    return evaluate_pairs(corpus, fps, candidates, params);
}

std::vector<PartialMatch> find_partial_matches_serial(const Corpus& corpus,
                                                      const WinnowParams& params) {
    const std::size_t n = corpus.articles.size();
    std::vector<Fingerprint> fps(n);
    for (std::size_t i = 0; i < n; ++i)
        fps[i] = fingerprint(corpus.articles[i].article_id,
                             corpus.articles[i].body_norm.text, params.k,
                             params.window);

    std::vector<PartialMatch> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::string& ta = corpus.articles[i].body_norm.text;
            const std::string& tb = corpus.articles[j].body_norm.text;
            const auto matches = detect_overlaps(fps[i], fps[j], ta, tb);
            if (matches.empty()) continue;
            PartialMatch pm;
            pm.article_a = corpus.articles[i].article_id;
            pm.article_b = corpus.articles[j].article_id;
            pm.segments = expand_and_merge(matches, ta, tb, params.k, params.merge_gap);
            if (filter_match(pm, params.seg_min, params.pair_min))
                out.push_back(std::move(pm));
        }
    }
    return out;
}

}  // namespace csn
