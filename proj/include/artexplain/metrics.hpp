#ifndef ARTEXPLAIN_METRICS_HPP
#define ARTEXPLAIN_METRICS_HPP

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "artexplain/textops.hpp"

// Entity Coverage (exact/partial), Entity F1, Entity Cooccurrence with
// length penalty, plus BLEU-4 and ROUGE-1/2/L. All metrics score one
// (generation, reference, inventory) triple; corpus aggregation is an
// unweighted mean.

namespace artexplain {

/// Sentence window radius; kInfiniteWindow means whole-document.
constexpr int kInfiniteWindow = -1;

struct ScoredPair {
    std::string instruction_id;
    TokenSeq gen_tokens;
    TokenSeq ref_tokens;
    SentenceSeq gen_sentences;
    SentenceSeq ref_sentences;
    EntityInventory inventory;
};

/// Builds a ScoredPair from raw texts: sentence-split, normalize,
/// tokenize. Flat token streams equal the concatenated sentence tokens
/// by construction.
inline ScoredPair make_scored_pair(const std::string& instruction_id, const std::string& gen_text,
                                   const std::string& ref_text, EntityInventory inventory,
                                   const AbbreviationList& abbrevs = AbbreviationList()) {
    ScoredPair p;
    p.instruction_id = instruction_id;
    p.gen_sentences = split_sentences(gen_text, abbrevs);
    p.ref_sentences = split_sentences(ref_text, abbrevs);
    auto flatten = [](const SentenceSeq& seq) {
        TokenSeq flat;
        for (const auto& s : seq.sentences)
            for (std::size_t i = 0; i < s.tokens.size(); ++i) {
                flat.tokens.push_back(s.tokens[i]);
                flat.spans.push_back({flat.spans.size(), flat.spans.size() + 1});
            }
        return flat;
    };
    p.gen_tokens = flatten(p.gen_sentences);
    p.ref_tokens = flatten(p.ref_sentences);
    p.inventory = std::move(inventory);
    return p;
}

/// Test/constructor path for pre-tokenized sentence lists.
inline ScoredPair make_scored_pair_from_tokens(
    const std::vector<std::vector<std::string>>& gen_sentences,
    const std::vector<std::vector<std::string>>& ref_sentences, EntityInventory inventory) {
    ScoredPair p;
    auto build = [](const std::vector<std::vector<std::string>>& sents, SentenceSeq& seq,
                    TokenSeq& flat) {
        for (const auto& s : sents) {
            if (s.empty()) continue;
            TokenSeq t;
            for (const auto& tok : s) {
                t.tokens.push_back(tok);
                t.spans.push_back({t.spans.size(), t.spans.size() + 1});
                flat.tokens.push_back(tok);
                flat.spans.push_back({flat.spans.size(), flat.spans.size() + 1});
            }
            seq.sentences.push_back(std::move(t));
        }
    };
    build(gen_sentences, p.gen_sentences, p.gen_tokens);
    build(ref_sentences, p.ref_sentences, p.ref_tokens);
    p.inventory = std::move(inventory);
    return p;
}

enum class CoverageMode { Exact, Partial };

namespace detail {

inline std::set<std::string> detected_set(const SentenceSeq& text, const EntityInventory& inv) {
    std::set<std::string> out;
    for (const auto& h : detect_entities(text, inv)) out.insert(h.entity);
    return out;
}

inline std::map<std::string, std::size_t> detected_counts(const SentenceSeq& text,
                                                          const EntityInventory& inv) {
    std::map<std::string, std::size_t> out;
    for (const auto& h : detect_entities(text, inv)) ++out[h.entity];
    return out;
}

}  // namespace detail

/// Proportion of reference entities covered by the generation.
/// Exact: the entity is detected contiguously in G. Partial: per-entity
/// mean of LCS(entity tokens, G tokens) / |entity tokens|.
/// Returns 0 when the reference contains no entities.
inline double entity_coverage(const ScoredPair& pair, CoverageMode mode) {
    std::set<std::string> ref_entities = detail::detected_set(pair.ref_sentences, pair.inventory);
    if (ref_entities.empty()) return 0.0;
    if (mode == CoverageMode::Exact) {
        std::set<std::string> gen_entities =
            detail::detected_set(pair.gen_sentences, pair.inventory);
        std::size_t covered = 0;
        for (const auto& e : ref_entities)
            if (gen_entities.count(e)) ++covered;
        return static_cast<double>(covered) / static_cast<double>(ref_entities.size());
    }
    double sum = 0.0;
    for (const auto& e : ref_entities) {
        std::vector<std::string> etoks = tokenize(e).tokens;
        if (etoks.empty()) continue;
        double ratio = static_cast<double>(lcs_len(etoks, pair.gen_tokens.tokens)) /
                       static_cast<double>(etoks.size());
        sum += std::min(ratio, 1.0);
    }
    return sum / static_cast<double>(ref_entities.size());
}

/// Clipped-count entity F1. Occurrence counts come from the detector;
/// F1 is 0 when either side detects nothing.
inline double entity_f1(const ScoredPair& pair) {
    auto gen_counts = detail::detected_counts(pair.gen_sentences, pair.inventory);
    auto ref_counts = detail::detected_counts(pair.ref_sentences, pair.inventory);
    if (gen_counts.empty() || ref_counts.empty()) return 0.0;

    std::size_t p_num = 0, p_den = 0;
    for (const auto& [e, c] : gen_counts) {
        auto it = ref_counts.find(e);
        p_num += std::min(c, it == ref_counts.end() ? std::size_t{0} : it->second);
        p_den += c;
    }
    std::size_t r_num = 0, r_den = 0;
    for (const auto& [e, c] : ref_counts) {
        auto it = gen_counts.find(e);
        r_num += std::min(c, it == gen_counts.end() ? std::size_t{0} : it->second);
        r_den += c;
    }
    if (p_den == 0 || r_den == 0) return 0.0;
    double prec = static_cast<double>(p_num) / static_cast<double>(p_den);
    double rec = static_cast<double>(r_num) / static_cast<double>(r_den);
    if (prec + rec == 0.0) return 0.0;
    return 2.0 * prec * rec / (prec + rec);
}

/// Unordered pairs of distinct entities co-occurring within a window of
/// a sentence and its adjacent n sentences; n = kInfiniteWindow covers
/// the whole document.
inline std::set<std::pair<std::string, std::string>> cooccurrence_pairs(
    const SentenceSeq& sentences, const EntityInventory& inventory, int n) {
    std::set<std::pair<std::string, std::string>> out;
    std::vector<EntityHit> hits = detect_entities(sentences, inventory);
    if (hits.size() < 2) return out;
    std::size_t m = sentences.sentences.size();

    std::vector<std::set<std::string>> per_sentence(m);
    for (const auto& h : hits) per_sentence[h.sentence_index].insert(h.entity);

    auto add_pairs = [&out](const std::set<std::string>& ents) {
        for (auto i = ents.begin(); i != ents.end(); ++i)
            for (auto j = std::next(i); j != ents.end(); ++j)
                out.insert({*i, *j});
    };

    if (n == kInfiniteWindow) {
        std::set<std::string> all;
        for (const auto& s : per_sentence) all.insert(s.begin(), s.end());
        add_pairs(all);
        return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::set<std::string> window;
        std::size_t lo = i >= static_cast<std::size_t>(n) ? i - n : 0;
        std::size_t hi = std::min(m - 1, i + static_cast<std::size_t>(n));
        for (std::size_t k = lo; k <= hi; ++k)
            window.insert(per_sentence[k].begin(), per_sentence[k].end());
        add_pairs(window);
    }
    return out;
}

/// exp(-max(0, |G|/|R| - 1)): 1 when the generation is no longer than
/// the reference, exponential decay beyond.
inline double length_penalty(std::size_t gen_len, std::size_t ref_len) {
    if (ref_len == 0) throw std::invalid_argument("length_penalty: reference length is zero");
    double ratio = static_cast<double>(gen_len) / static_cast<double>(ref_len);
    return std::exp(-std::max(0.0, ratio - 1.0));
}

/// LP(G,R) * |Co_n(G) ∩ Co_n(R)| / |Co_n(R)|; 0 when the reference has
/// no co-occurring pair.
inline double entity_cooccurrence(const ScoredPair& pair, int n) {
    auto ref_pairs = cooccurrence_pairs(pair.ref_sentences, pair.inventory, n);
    if (ref_pairs.empty()) return 0.0;
    auto gen_pairs = cooccurrence_pairs(pair.gen_sentences, pair.inventory, n);
    std::size_t common = 0;
    for (const auto& p : gen_pairs)
        if (ref_pairs.count(p)) ++common;
    double cov = static_cast<double>(common) / static_cast<double>(ref_pairs.size());
    return length_penalty(pair.gen_tokens.size(), pair.ref_tokens.size()) * cov;
}

namespace detail {

inline std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> out;
    if (toks.size() < n || n == 0) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i)
        ++out[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
    return out;
}

}  // namespace detail

/// Single-reference BLEU-4 on [0,100]: clipped n-gram precisions,
/// geometric mean, brevity penalty. When a precision for n >= 2 is
/// zero, add-one smoothing (match+1)/(total+1) is applied for that
/// order; a zero unigram precision yields BLEU 0.
inline double bleu(const TokenSeq& gen, const TokenSeq& ref) {
    if (gen.empty()) return 0.0;
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto g = detail::ngram_counts(gen.tokens, n);
        auto r = detail::ngram_counts(ref.tokens, n);
        std::size_t match = 0, total = 0;
        for (const auto& [ng, c] : g) {
            auto it = r.find(ng);
            match += std::min(c, it == r.end() ? std::size_t{0} : it->second);
            total += c;
        }
        double p;
        if (match == 0) {
            if (n == 1) return 0.0;
            p = 1.0 / static_cast<double>(total + 1);
        } else {
            p = static_cast<double>(match) / static_cast<double>(total);
        }
        log_sum += std::log(p);
    }
    double bp = 1.0;
    if (gen.size() < ref.size())
        bp = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(gen.size()));
    return 100.0 * bp * std::exp(log_sum / 4.0);
}

enum class RougeVariant { R1, R2, RL };

/// Single-reference ROUGE on [0,100]: F1 of clipped n-gram overlap
/// (R1, R2) or LCS-based F1 (RL).
inline double rouge(const TokenSeq& gen, const TokenSeq& ref, RougeVariant variant) {
    if (gen.empty() || ref.empty()) return 0.0;
    double overlap, gtotal, rtotal;
    if (variant == RougeVariant::RL) {
        overlap = static_cast<double>(lcs_len(gen, ref));
        gtotal = static_cast<double>(gen.size());
        rtotal = static_cast<double>(ref.size());
    } else {
        std::size_t n = variant == RougeVariant::R1 ? 1 : 2;
        auto g = detail::ngram_counts(gen.tokens, n);
        auto r = detail::ngram_counts(ref.tokens, n);
        std::size_t common = 0, gt = 0, rt = 0;
        for (const auto& [ng, c] : g) {
            auto it = r.find(ng);
            common += std::min(c, it == r.end() ? std::size_t{0} : it->second);
            gt += c;
        }
        for (const auto& [ng, c] : r) rt += c;
        if (gt == 0 || rt == 0) return 0.0;
        overlap = static_cast<double>(common);
        gtotal = static_cast<double>(gt);
        rtotal = static_cast<double>(rt);
    }
    if (overlap == 0.0) return 0.0;
    double prec = overlap / gtotal;
    double rec = overlap / rtotal;
    return 100.0 * 2.0 * prec * rec / (prec + rec);
}

/// The full per-pair column set. Entity scores are on [0,100].
struct MetricVector {
    double bleu = 0.0;
    double rouge1 = 0.0, rouge2 = 0.0, rougeL = 0.0;
    double ec_exact = 0.0, ec_partial = 0.0;
    double entity_f1 = 0.0;
    std::map<int, double> ecooc;  // window -> score; kInfiniteWindow = whole doc
    std::size_t gen_len = 0;
    bool no_entity_reference = false;  // reference detected no entity
    bool no_pair_reference = false;    // reference had no co-occurring pair at any window
};

inline const std::vector<int>& default_windows() {
    static const std::vector<int> w = {0, 1, 2, kInfiniteWindow};
    return w;
}

inline MetricVector score_pair(const ScoredPair& pair,
                               const std::vector<int>& windows = default_windows()) {
    MetricVector v;
    v.gen_len = pair.gen_tokens.size();
    v.bleu = bleu(pair.gen_tokens, pair.ref_tokens);
    v.rouge1 = rouge(pair.gen_tokens, pair.ref_tokens, RougeVariant::R1);
    v.rouge2 = rouge(pair.gen_tokens, pair.ref_tokens, RougeVariant::R2);
    v.rougeL = rouge(pair.gen_tokens, pair.ref_tokens, RougeVariant::RL);
    v.ec_exact = 100.0 * entity_coverage(pair, CoverageMode::Exact);
    v.ec_partial = 100.0 * entity_coverage(pair, CoverageMode::Partial);
    v.entity_f1 = 100.0 * entity_f1(pair);
    v.no_entity_reference = detail::detected_set(pair.ref_sentences, pair.inventory).empty();
    bool any_ref_pair = false;
    for (int n : windows) {
        if (!cooccurrence_pairs(pair.ref_sentences, pair.inventory, n).empty())
            any_ref_pair = true;
        if (pair.ref_tokens.empty()) {
            v.ecooc[n] = 0.0;
        } else {
            v.ecooc[n] = 100.0 * entity_cooccurrence(pair, n);
        }
    }
    v.no_pair_reference = !any_ref_pair;
    return v;
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_METRICS_HPP
