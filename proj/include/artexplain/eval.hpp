#ifndef ARTEXPLAIN_EVAL_HPP
#define ARTEXPLAIN_EVAL_HPP

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "artexplain/corpus.hpp"
#include "artexplain/metrics.hpp"

// Joins instruction files with model generations, scores every pair and
// aggregates by (title setting x split). Pair scoring is data-parallel;
// results are independent of the thread count.

namespace artexplain {

struct GroupKey {
    bool title_included;
    Split split;

    bool operator<(const GroupKey& o) const {
        // WithTitle before WithoutTitle; Unseen before Seen, then Dev, Train.
        if (title_included != o.title_included) return title_included > o.title_included;
        auto order = [](Split s) {
            switch (s) {
                case Split::TestUnseen: return 0;
                case Split::TestSeen: return 1;
                case Split::Dev: return 2;
                case Split::Train: return 3;
            }
            return 4;
        };
        return order(split) < order(o.split);
    }
};

inline std::string group_label(const GroupKey& k) {
    std::string setting = k.title_included ? "with_title" : "without_title";
    std::string split;
    switch (k.split) {
        case Split::TestUnseen: split = "unseen"; break;
        case Split::TestSeen: split = "seen"; break;
        case Split::Dev: split = "dev"; break;
        case Split::Train: split = "train"; break;
    }
    return setting + "/" + split;
}

struct GroupAggregate {
    MetricVector mean;          // arithmetic mean of per-pair vectors
    std::size_t count = 0;
    std::size_t no_entity_count = 0;
    std::size_t no_pair_count = 0;
};

struct EvalRun {
    std::string run_id;
    std::string model_name;
    std::vector<std::pair<std::string, MetricVector>> per_pair;  // instruction file order
    std::map<GroupKey, GroupAggregate> aggregates;
    std::size_t no_entity_count = 0;
    std::size_t no_pair_count = 0;
};

namespace detail {

inline MetricVector mean_of(const std::vector<const MetricVector*>& vs) {
    MetricVector m;
    if (vs.empty()) return m;
    double len_sum = 0.0;
    for (const auto* v : vs) {
        m.bleu += v->bleu;
        m.rouge1 += v->rouge1;
        m.rouge2 += v->rouge2;
        m.rougeL += v->rougeL;
        m.ec_exact += v->ec_exact;
        m.ec_partial += v->ec_partial;
        m.entity_f1 += v->entity_f1;
        for (const auto& [n, x] : v->ecooc) m.ecooc[n] += x;
        len_sum += static_cast<double>(v->gen_len);
    }
    double k = static_cast<double>(vs.size());
    m.bleu /= k;
    m.rouge1 /= k;
    m.rouge2 /= k;
    m.rougeL /= k;
    m.ec_exact /= k;
    m.ec_partial /= k;
    m.entity_f1 /= k;
    for (auto& [_, x] : m.ecooc) x /= k;
    m.gen_len = static_cast<std::size_t>(len_sum / k + 0.5);
    return m;
}

}  // namespace detail

/// Scores every generation against its instruction. Unknown or
/// duplicate generation ids are hard errors; an empty generations file
/// is an error too.
inline EvalRun run_eval(const std::vector<InstructionInstance>& instructions,
                        const std::vector<GenerationRecord>& generations,
                        const std::map<std::string, EntityInventory>& inventories_by_article,
                        const std::vector<int>& windows = default_windows(),
                        unsigned jobs = 1) {
    if (generations.empty()) throw std::invalid_argument("generations file is empty");

    std::unordered_map<std::string, const InstructionInstance*> by_id;
    for (const auto& i : instructions) {
        if (!by_id.emplace(i.instruction_id, &i).second)
            throw ParseError("duplicate instruction id: " + i.instruction_id);
    }
    std::unordered_map<std::string, const GenerationRecord*> gen_by_id;
    std::vector<std::string> bad;
    for (const auto& g : generations) {
        if (!by_id.count(g.instruction_id)) bad.push_back(g.instruction_id);
        if (!gen_by_id.emplace(g.instruction_id, &g).second)
            throw ParseError("duplicate generation id: " + g.instruction_id);
    }
    if (!bad.empty()) {
        std::string msg = "unresolvable instruction ids:";
        for (std::size_t i = 0; i < bad.size() && i < 10; ++i) msg += " " + bad[i];
        if (bad.size() > 10) msg += " (+" + std::to_string(bad.size() - 10) + " more)";
        throw ParseError(msg);
    }

    // Pairs in instruction-file order so output is independent of the
    // generations file order and of the thread count.
    std::vector<const InstructionInstance*> scored_insts;
    std::vector<const GenerationRecord*> scored_gens;
    for (const auto& i : instructions) {
        auto it = gen_by_id.find(i.instruction_id);
        if (it == gen_by_id.end()) continue;
        scored_insts.push_back(&i);
        scored_gens.push_back(it->second);
    }

    EvalRun run;
    std::vector<MetricVector> vectors(scored_insts.size());
    auto score_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const auto& inst = *scored_insts[k];
            auto inv_it = inventories_by_article.find(inst.article_id);
            EntityInventory inv =
                inv_it == inventories_by_article.end() ? EntityInventory{} : inv_it->second;
            ScoredPair pair = make_scored_pair(inst.instruction_id, scored_gens[k]->output_text,
                                               inst.reference, std::move(inv));
            vectors[k] = score_pair(pair, windows);
        }
    };
    if (jobs <= 1 || scored_insts.size() < 2) {
        score_range(0, scored_insts.size());
    } else {
        unsigned nthreads = std::min<unsigned>(jobs, static_cast<unsigned>(scored_insts.size()));
        std::vector<std::thread> threads;
        std::size_t chunk = (scored_insts.size() + nthreads - 1) / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(scored_insts.size(), lo + chunk);
            if (lo < hi) threads.emplace_back(score_range, lo, hi);
        }
        for (auto& th : threads) th.join();
    }

    std::map<GroupKey, std::vector<const MetricVector*>> grouped;
    for (std::size_t k = 0; k < scored_insts.size(); ++k) {
        run.per_pair.emplace_back(scored_insts[k]->instruction_id, vectors[k]);
        grouped[{scored_insts[k]->title_included, scored_insts[k]->split}].push_back(&vectors[k]);
        if (vectors[k].no_entity_reference) ++run.no_entity_count;
        if (vectors[k].no_pair_reference) ++run.no_pair_count;
    }
    for (const auto& [key, vs] : grouped) {
        GroupAggregate agg;
        agg.mean = detail::mean_of(vs);
        agg.count = vs.size();
        for (const auto* v : vs) {
            if (v->no_entity_reference) ++agg.no_entity_count;
            if (v->no_pair_reference) ++agg.no_pair_count;
        }
        run.aggregates[key] = agg;
    }
    return run;
}

struct TitleEvalResult {
    double exact_pct = 0.0;
    double partial_pct = 0.0;
    struct Item {
        std::string article_id;
        std::string generated_title;
        bool exact = false;
        bool partial = false;
    };
    std::vector<Item> per_item;
};

/// Exact: normalized equality with the article title. Partial: token
/// LCS against the title covers at least `partial_threshold` of the
/// title tokens. Exact implies partial.
inline TitleEvalResult eval_titles(const std::vector<TitleAnswer>& answers,
                                   const std::vector<ArticleRecord>& articles,
                                   double partial_threshold = 0.5) {
    if (answers.empty()) throw std::invalid_argument("title answers file is empty");
    std::unordered_map<std::string, const ArticleRecord*> by_id;
    for (const auto& a : articles) by_id[a.id] = &a;

    TitleEvalResult result;
    std::size_t exact = 0, partial = 0;
    for (const auto& ans : answers) {
        auto it = by_id.find(ans.article_id);
        if (it == by_id.end()) throw ParseError("unknown article id: " + ans.article_id);
        std::string norm_title = normalize_text(it->second->title);
        std::string norm_ans = normalize_text(ans.output_text);
        TitleEvalResult::Item item;
        item.article_id = ans.article_id;
        item.generated_title = ans.output_text;
        item.exact = norm_ans == norm_title;
        if (item.exact) {
            item.partial = true;
        } else {
            auto tt = tokenize(norm_title);
            auto at = tokenize(norm_ans);
            if (!tt.empty()) {
                double ratio = static_cast<double>(lcs_len(tt, at)) /
                               static_cast<double>(tt.size());
                item.partial = ratio >= partial_threshold;
            }
        }
        if (item.exact) ++exact;
        if (item.partial) ++partial;
        result.per_item.push_back(std::move(item));
    }
    result.exact_pct = 100.0 * static_cast<double>(exact) / static_cast<double>(answers.size());
    result.partial_pct = 100.0 * static_cast<double>(partial) / static_cast<double>(answers.size());
    return result;
}

// --- EvalRun JSON serialization (round-trippable aggregates) ---

inline json metric_vector_to_json(const MetricVector& v) {
    json ecooc = json::object();
    for (const auto& [n, x] : v.ecooc)
        ecooc[n == kInfiniteWindow ? "inf" : std::to_string(n)] = x;
    return json{{"bleu", v.bleu},       {"rouge1", v.rouge1},
                {"rouge2", v.rouge2},   {"rougeL", v.rougeL},
                {"ec_exact", v.ec_exact}, {"ec_partial", v.ec_partial},
                {"entity_f1", v.entity_f1}, {"ecooc", ecooc},
                {"gen_len", v.gen_len}};
}

inline MetricVector metric_vector_from_json(const json& j) {
    MetricVector v;
    v.bleu = j.at("bleu").get<double>();
    v.rouge1 = j.at("rouge1").get<double>();
    v.rouge2 = j.at("rouge2").get<double>();
    v.rougeL = j.at("rougeL").get<double>();
    v.ec_exact = j.at("ec_exact").get<double>();
    v.ec_partial = j.at("ec_partial").get<double>();
    v.entity_f1 = j.at("entity_f1").get<double>();
    for (const auto& [k, x] : j.at("ecooc").items())
        v.ecooc[k == "inf" ? kInfiniteWindow : std::stoi(k)] = x.get<double>();
    v.gen_len = j.at("gen_len").get<std::size_t>();
    return v;
}

inline json eval_run_to_json(const EvalRun& run) {
    json groups = json::object();
    for (const auto& [key, agg] : run.aggregates) {
        groups[group_label(key)] = json{{"mean", metric_vector_to_json(agg.mean)},
                                        {"count", agg.count},
                                        {"no_entity_count", agg.no_entity_count},
                                        {"no_pair_count", agg.no_pair_count}};
    }
    json pairs = json::array();
    for (const auto& [id, v] : run.per_pair)
        pairs.push_back({{"instruction_id", id}, {"metrics", metric_vector_to_json(v)}});
    return json{{"run_id", run.run_id},
                {"model_name", run.model_name},
                {"bertscore", "n/a"},
                {"no_entity_count", run.no_entity_count},
                {"no_pair_count", run.no_pair_count},
                {"aggregates", groups},
                {"per_pair", pairs}};
}

inline GroupKey group_key_from_label(const std::string& label) {
    auto slash = label.find('/');
    if (slash == std::string::npos) throw ParseError("bad group label: " + label);
    GroupKey key;
    key.title_included = label.substr(0, slash) == "with_title";
    std::string split = label.substr(slash + 1);
    if (split == "unseen") key.split = Split::TestUnseen;
    else if (split == "seen") key.split = Split::TestSeen;
    else if (split == "dev") key.split = Split::Dev;
    else if (split == "train") key.split = Split::Train;
    else throw ParseError("bad group label: " + label);
    return key;
}

inline EvalRun eval_run_from_json(const json& j) {
    EvalRun run;
    run.run_id = j.value("run_id", "");
    run.model_name = j.value("model_name", "");
    run.no_entity_count = j.value("no_entity_count", 0u);
    run.no_pair_count = j.value("no_pair_count", 0u);
    for (const auto& [label, g] : j.at("aggregates").items()) {
        GroupAggregate agg;
        agg.mean = metric_vector_from_json(g.at("mean"));
        agg.count = g.at("count").get<std::size_t>();
        agg.no_entity_count = g.value("no_entity_count", 0u);
        agg.no_pair_count = g.value("no_pair_count", 0u);
        run.aggregates[group_key_from_label(label)] = agg;
    }
    for (const auto& p : j.value("per_pair", json::array()))
        run.per_pair.emplace_back(p.at("instruction_id").get<std::string>(),
                                  metric_vector_from_json(p.at("metrics")));
    return run;
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_EVAL_HPP
