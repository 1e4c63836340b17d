#include <chrono>
#include <cstdio>
#include <string>

#include "csn/synth.hpp"
#include "csn/tfidf.hpp"
#include "csn/winnow.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name,
                serial, parallel, parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_articles = argc > 1 ? std::stoul(argv[1]) : 1500;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both variants run serially\n");
#endif

    csn::SynthConfig cfg;
    cfg.n_distinct = n_articles * 4 / 5;
    cfg.n_verbatim = n_articles / 10;
    cfg.n_partial = n_articles / 10;
    cfg.seed = 7;
    const csn::SynthResult synth = csn::generate_synthetic_corpus(cfg);
    std::printf("corpus: %zu articles\n", synth.corpus.articles.size());

    // Pair extraction over the largest window.
    const auto windows = csn::window_partition(synth.corpus, 5 * csn::kSecondsPerDay);
    const csn::TimeWindow* biggest = &windows.front();
    for (const csn::TimeWindow& w : windows)
        if (w.article_ids.size() > biggest->article_ids.size()) biggest = &w;
    const csn::TfidfModel model = csn::build_tfidf(*biggest, synth.corpus);
    std::printf("largest window: %zu documents\n", model.article_ids.size());

    std::vector<csn::VerbatimPair> serial_pairs, parallel_pairs;
    const double t_pair_serial =
        time_seconds([&] { serial_pairs = csn::extract_pairs_serial(model, 0.85); });
    const double t_pair_parallel =
        time_seconds([&] { parallel_pairs = csn::extract_pairs(model, 0.85); });
    report("cosine pair extraction", t_pair_serial, t_pair_parallel);
    if (serial_pairs.size() != parallel_pairs.size()) {
        std::printf("MISMATCH: %zu vs %zu pairs\n", serial_pairs.size(),
                    parallel_pairs.size());
        return 1;
    }

    csn::WinnowParams wp;
    std::vector<csn::PartialMatch> serial_matches, parallel_matches;
    const double t_win_serial = time_seconds(
        [&] { serial_matches = csn::find_partial_matches_serial(synth.corpus, wp); });
    const double t_win_parallel = time_seconds(
        [&] { parallel_matches = csn::find_partial_matches(synth.corpus, wp); });
    report("partial match detection", t_win_serial, t_win_parallel);
    if (serial_matches.size() != parallel_matches.size()) {
        std::printf("MISMATCH: %zu vs %zu matches\n", serial_matches.size(),
                    parallel_matches.size());
        return 1;
    }
    return 0;
}
