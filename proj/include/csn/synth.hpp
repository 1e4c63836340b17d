#ifndef CSN_SYNTH_HPP
#define CSN_SYNTH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csn/corpus.hpp"

namespace csn {

struct SynthConfig {
    std::size_t n_distinct = 440;
    std::size_t n_verbatim = 60;  // verbatim copies, one per distinct original
    std::size_t n_partial = 20;   // partial copies sharing an edited segment
    std::size_t n_sources = 40;
    std::size_t n_communities = 4;
    std::size_t words_per_article = 250;
    double cross_community_prob = 0.1;  // copy lands outside its community
    std::uint32_t seed = 1;
};

// Ground truth recorded while generating; the oracle for pipeline tests.
struct SynthLedger {
    std::vector<std::pair<std::string, std::string>> verbatim_pairs;  // orig, copy
    std::vector<std::pair<std::string, std::string>> partial_pairs;
    std::map<std::string, std::size_t> per_source_counts;
    std::map<std::pair<std::string, std::string>, std::uint64_t> expected_edges;
};

struct SynthResult {
    Corpus corpus;
    SynthLedger ledger;
};

SynthResult generate_synthetic_corpus(const SynthConfig& config);

// JSON-lines corpus file in the load_corpus schema.
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);
void write_ledger(const SynthLedger& ledger, std::ostream& out);
SynthLedger read_ledger(std::istream& in);

}  // namespace csn

#endif
