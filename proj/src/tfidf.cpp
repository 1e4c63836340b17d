#include "csn/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csn {

TfidfModel build_tfidf(const TimeWindow& window, const Corpus& corpus) {
    TfidfModel model;
    model.window_index = window.index;
    model.article_ids = window.article_ids;
    std::sort(model.article_ids.begin(), model.article_ids.end());

    const std::size_t n_docs = model.article_ids.size();
    std::vector<std::vector<std::string>> doc_tokens(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        const Article& a = corpus.article(model.article_ids[i]);
        doc_tokens[i] = tokenize(a.body_norm.text);
        for (const std::string& t : doc_tokens[i]) model.vocabulary.emplace(t, 0);
    }
    std::uint32_t dim = 0;
    for (auto& [term, d] : model.vocabulary) d = dim++;

    // Window-local document frequencies.
    std::vector<std::uint32_t> df(model.vocabulary.size(), 0);
    std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> tf(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        for (const std::string& t : doc_tokens[i]) ++tf[i][model.vocabulary.at(t)];
        for (const auto& [d, cnt] : tf[i]) ++df[d];
    }

    std::vector<double> idf(df.size());
    for (std::size_t d = 0; d < df.size(); ++d)
        idf[d] = std::log((1.0 + n_docs) / (1.0 + df[d])) + 1.0;

    model.vectors.resize(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        SparseVector& v = model.vectors[i];
        v.reserve(tf[i].size());
        for (const auto& [d, cnt] : tf[i]) v.emplace_back(d, cnt * idf[d]);
        std::sort(v.begin(), v.end());
        double norm_sq = 0.0;
        for (const auto& [d, w] : v) norm_sq += w * w;
        const double norm = std::sqrt(norm_sq);
        if (norm > 0.0)
            for (auto& [d, w] : v) w /= norm;
    }
    return model;
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (a[i].first > b[j].first) {
            ++j;
        } else {
            dot += a[i].second * b[j].second;
            ++i;
            ++j;
        }
    }
    return dot;
}

std::vector<VerbatimPair> extract_pairs_serial(const TfidfModel& model,
                                               double threshold) {
    std::vector<VerbatimPair> pairs;
    const std::size_t n = model.article_ids.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cos = sparse_dot(model.vectors[i], model.vectors[j]);
            if (cos >= threshold)
                pairs.push_back({model.article_ids[i], model.article_ids[j], cos,
                                 model.window_index});
        }
    }
    return pairs;  // (i, j) loop order is already (article_a, article_b) order
}

std::vector<VerbatimPair> extract_pairs(const TfidfModel& model, double threshold) {
    const std::size_t n = model.article_ids.size();

    // Inverted index: dimension -> documents containing it (ascending).
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> postings;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [d, w] : model.vectors[i])
            postings[d].push_back(static_cast<std::uint32_t>(i));

    std::vector<std::vector<VerbatimPair>> per_doc(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < n; ++i) {
        // Per-term scatter keeps each shared dimension's contribution in
        // ascending dimension order, matching sparse_dot's summation order.
        std::unordered_map<std::uint32_t, double> acc;
        for (const auto& [d, w] : model.vectors[i]) {
            for (std::uint32_t j : postings.at(d)) {
                if (j <= i) continue;
                auto it = std::lower_bound(
                    model.vectors[j].begin(), model.vectors[j].end(), d,
                    [](const auto& p, std::uint32_t dim) { return p.first < dim; });
                acc[j] += w * it->second;
            }
        }
        std::vector<std::uint32_t> hits;
        hits.reserve(acc.size());
        for (const auto& [j, cos] : acc)
            if (cos >= threshold) hits.push_back(j);
        std::sort(hits.begin(), hits.end());
        for (std::uint32_t j : hits)
            per_doc[i].push_back({model.article_ids[i], model.article_ids[j],
                                  acc[j], model.window_index});
    }

    std::vector<VerbatimPair> pairs;
    for (auto& v : per_doc)
        pairs.insert(pairs.end(), v.begin(), v.end());
    return pairs;
}

}  // namespace csn
