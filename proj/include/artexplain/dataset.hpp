#ifndef ARTEXPLAIN_DATASET_HPP
#define ARTEXPLAIN_DATASET_HPP

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "artexplain/corpus.hpp"
#include "artexplain/templates.hpp"

// Dataset construction: section filtering, notoriety ranking,
// rank-balanced splitting with a frequency-balanced seen holdout, and
// instruction rendering.

namespace artexplain {

/// Section headings that carry no descriptive content and are dropped
/// before instruction rendering. Compared on the normalized heading.
inline const std::vector<std::string>& omitted_section_headings() {
    static const std::vector<std::string> list = {
        "References",
        "See also",
        "External links",
        "Sources",
        "Further reading",
        "Bibliography",
        "Gallery",
        "Footnotes",
        "Notes",
        "References Sources",
        "Bibliography (In Spanish)",
        "Bibliography (In Italian)",
        "Bibliography (In German)",
        "Bibliography (In French)",
        "Images",
        "Links",
        "List",
        "Notes and references",
        "List by location",
    };
    return list;
}

namespace detail {

inline const std::set<std::string>& omitted_headings_normalized() {
    static const std::set<std::string> set = [] {
        std::set<std::string> s;
        for (const auto& h : omitted_section_headings()) s.insert(normalize_text(h));
        return s;
    }();
    return set;
}

}  // namespace detail

/// Drops sections whose top-level heading is on the omitted list.
/// Articles without any image come back with zero sections, which
/// removes them from the pipeline.
inline ArticleRecord filter_sections(const ArticleRecord& article) {
    ArticleRecord out = article;
    out.sections.clear();
    if (article.image_refs.empty()) return out;
    for (const auto& s : article.sections) {
        if (detail::omitted_headings_normalized().count(normalize_text(s.path[0]))) continue;
        out.sections.push_back(s);
    }
    return out;
}

/// Average of six per-signal descending fractional ranks (rank 1 =
/// largest value; ties share the mean of their positions).
inline std::map<std::string, double> rank_articles(const std::vector<ArticleRecord>& articles) {
    std::map<std::string, double> avg;
    if (articles.empty()) return avg;
    std::vector<double> sum(articles.size(), 0.0);

    auto rank_signal = [&](auto getter) {
        std::vector<std::size_t> order(articles.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return getter(articles[a]) > getter(articles[b]);
        });
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() &&
                   getter(articles[order[j + 1]]) == getter(articles[order[i]]))
                ++j;
            double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t k = i; k <= j; ++k) sum[order[k]] += mean_rank;
            i = j + 1;
        }
    };
    rank_signal([](const ArticleRecord& a) { return a.notoriety.page_views; });
    rank_signal([](const ArticleRecord& a) { return a.notoriety.link_count; });
    rank_signal([](const ArticleRecord& a) { return a.notoriety.edit_count; });
    rank_signal([](const ArticleRecord& a) { return a.notoriety.reference_count; });
    rank_signal([](const ArticleRecord& a) { return a.notoriety.language_versions; });
    rank_signal([](const ArticleRecord& a) { return a.notoriety.article_length; });

    for (std::size_t i = 0; i < articles.size(); ++i) avg[articles[i].id] = sum[i] / 6.0;
    return avg;
}

enum class Assignment { Train, Dev, TestUnseen };

inline std::string to_string(Assignment a) {
    switch (a) {
        case Assignment::Train: return "train";
        case Assignment::Dev: return "dev";
        case Assignment::TestUnseen: return "test_unseen";
    }
    return "?";
}

struct SplitPlan {
    std::map<std::string, Assignment> assignment;
    // Train-article sections held out as TestSeen, keyed by article id;
    // values are section indices into the filtered article.
    std::map<std::string, std::vector<std::size_t>> seen_holdout;
    std::map<std::string, double> rank_table;
};

/// Rank-sorted block-of-10 dealing: each block contributes one
/// TestUnseen, one Dev and eight Train articles, with the in-block
/// positions shuffled by the seeded RNG. Then a seen holdout is carved
/// from Train sections so each section type's holdout count tracks
/// holdout_fraction times its global frequency, most frequent types
/// first.
inline SplitPlan plan_split(const std::vector<ArticleRecord>& filtered,
                            const std::map<std::string, double>& ranks, std::uint64_t seed,
                            double holdout_fraction = 0.118) {
    if (filtered.size() < 10)
        throw std::invalid_argument("plan_split requires at least 10 articles");
    SplitPlan plan;
    plan.rank_table = ranks;

    std::vector<std::size_t> order(filtered.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ra = ranks.at(filtered[a].id), rb = ranks.at(filtered[b].id);
        if (ra != rb) return ra < rb;
        return filtered[a].id < filtered[b].id;
    });

    std::mt19937_64 rng(seed);
    const std::vector<Assignment> base = {
        Assignment::TestUnseen, Assignment::Dev,   Assignment::Train, Assignment::Train,
        Assignment::Train,      Assignment::Train, Assignment::Train, Assignment::Train,
        Assignment::Train,      Assignment::Train};
    for (std::size_t block = 0; block < order.size(); block += 10) {
        std::vector<Assignment> pattern = base;
        std::shuffle(pattern.begin(), pattern.end(), rng);
        std::size_t take = std::min<std::size_t>(10, order.size() - block);
        for (std::size_t k = 0; k < take; ++k)
            plan.assignment[filtered[order[block + k]].id] = pattern[k];
    }

    // Global section-type frequencies over the filtered corpus.
    std::map<std::string, std::size_t> freq;
    for (const auto& a : filtered)
        for (const auto& s : a.sections) ++freq[normalize_text(s.path[0])];
    std::vector<std::pair<std::string, std::size_t>> types(freq.begin(), freq.end());
    std::sort(types.begin(), types.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    for (const auto& [type, count] : types) {
        auto target = static_cast<std::size_t>(holdout_fraction * static_cast<double>(count) + 0.5);
        std::size_t taken = 0;
        for (std::size_t oi : order) {
            if (taken >= target) break;
            const ArticleRecord& a = filtered[oi];
            if (plan.assignment.at(a.id) != Assignment::Train) continue;
            for (std::size_t si = 0; si < a.sections.size() && taken < target; ++si) {
                if (normalize_text(a.sections[si].path[0]) != type) continue;
                auto& held = plan.seen_holdout[a.id];
                if (std::find(held.begin(), held.end(), si) != held.end()) continue;
                held.push_back(si);
                ++taken;
            }
        }
    }
    for (auto& [_, idxs] : plan.seen_holdout) std::sort(idxs.begin(), idxs.end());
    return plan;
}

struct DatasetBuild {
    std::vector<InstructionInstance> train;
    std::vector<InstructionInstance> dev;
    std::vector<InstructionInstance> test_seen;
    std::vector<InstructionInstance> test_unseen;
};

namespace detail {

inline std::string serial_id(const char* prefix, std::size_t serial, bool titled) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04zu_%s", prefix, serial, titled ? "T" : "NT");
    return buf;
}

}  // namespace detail

/// Renders instructions for every split. Dev and Test sections produce
/// exactly two instances (titled + untitled) from the controlled
/// template; Train sections pick one of the seven train templates
/// uniformly (seeded) and emit both title variants with it. TestSeen
/// instances come only from holdout sections, and any Train instance
/// whose reference text collides with a TestSeen reference is dropped.
inline DatasetBuild build_dataset(const std::vector<ArticleRecord>& filtered,
                                  const SplitPlan& plan, std::uint64_t seed) {
    DatasetBuild out;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<int> pick_template(1, 7);

    std::size_t train_serial = 0, dev_serial = 0, seen_serial = 0, unseen_serial = 0;
    std::unordered_set<std::string> seen_references;

    auto emit_pair = [&](std::vector<InstructionInstance>& sink, const char* prefix,
                         std::size_t& serial, const ArticleRecord& a, const SectionNode& s,
                         const std::string& template_id, Split split) {
        ++serial;
        auto level = static_cast<HierarchyLevel>(s.path.size());
        for (bool titled : {true, false}) {
            InstructionInstance inst =
                render_instruction(a, s, get_template(template_id, level, titled));
            inst.instruction_id = detail::serial_id(prefix, serial, titled);
            inst.split = split;
            sink.push_back(std::move(inst));
        }
    };

    // TestSeen first so train can avoid reference-text collisions.
    for (const auto& a : filtered) {
        auto it = plan.assignment.find(a.id);
        if (it == plan.assignment.end() || it->second != Assignment::Train) continue;
        auto hit = plan.seen_holdout.find(a.id);
        if (hit == plan.seen_holdout.end()) continue;
        for (std::size_t si : hit->second) {
            const SectionNode& s = a.sections.at(si);
            emit_pair(out.test_seen, "ts", seen_serial, a, s, "test", Split::TestSeen);
            seen_references.insert(s.text);
        }
    }

    for (const auto& a : filtered) {
        auto it = plan.assignment.find(a.id);
        if (it == plan.assignment.end()) continue;
        switch (it->second) {
            case Assignment::Dev:
                for (const auto& s : a.sections)
                    emit_pair(out.dev, "d", dev_serial, a, s, "dev", Split::Dev);
                break;
            case Assignment::TestUnseen:
                for (const auto& s : a.sections)
                    emit_pair(out.test_unseen, "tu", unseen_serial, a, s, "test",
                              Split::TestUnseen);
                break;
            case Assignment::Train: {
                const std::vector<std::size_t>* held = nullptr;
                auto hit = plan.seen_holdout.find(a.id);
                if (hit != plan.seen_holdout.end()) held = &hit->second;
                for (std::size_t si = 0; si < a.sections.size(); ++si) {
                    if (held && std::find(held->begin(), held->end(), si) != held->end())
                        continue;
                    const SectionNode& s = a.sections[si];
                    int t = pick_template(rng);
                    if (seen_references.count(s.text)) continue;
                    emit_pair(out.train, "", train_serial, a, s, "train" + std::to_string(t),
                              Split::Train);
                }
                break;
            }
        }
    }
    return out;
}

/// Train conversation records (JSONL), matching the published format:
/// titled records carry a "title" key, ids end in _T / _NT.
inline void export_train_records(const std::vector<InstructionInstance>& instances,
                                 const std::vector<ArticleRecord>& articles, std::ostream& out) {
    std::unordered_map<std::string, const ArticleRecord*> by_id;
    for (const auto& a : articles) by_id[a.id] = &a;
    for (const auto& inst : instances) {
        if (inst.split != Split::Train)
            throw std::invalid_argument("export_train_records: instance " + inst.instruction_id +
                                        " is not in the train split");
        json rec;
        rec["id"] = inst.instruction_id;
        if (inst.title_included) {
            auto it = by_id.find(inst.article_id);
            if (it == by_id.end())
                throw std::invalid_argument("export_train_records: unknown article " +
                                            inst.article_id);
            rec["title"] = it->second->title;
        }
        rec["conversations"] = json::array(
            {{{"from", "user"}, {"value", "<img>" + inst.image_ref + "</img>\n" + inst.prompt}},
             {{"from", "assistant"}, {"value", inst.reference}}});
        out << rec.dump() << "\n";
    }
}

inline json split_plan_to_json(const SplitPlan& plan) {
    json assignment = json::object();
    for (const auto& [id, a] : plan.assignment) assignment[id] = to_string(a);
    json holdout = json::object();
    for (const auto& [id, idxs] : plan.seen_holdout) holdout[id] = idxs;
    json ranks = json::object();
    for (const auto& [id, r] : plan.rank_table) ranks[id] = r;
    return json{{"assignment", assignment}, {"seen_holdout", holdout}, {"rank_table", ranks}};
}

/// Per-split / per-level / per-variant counts, reported both as
/// title-variant totals and as section pairs (the two published
/// countings differ by exactly that factor).
inline json build_report(const DatasetBuild& build) {
    auto summarize = [](const std::vector<InstructionInstance>& v) {
        std::map<std::string, std::size_t> by_level, by_template;
        std::size_t titled = 0;
        std::set<std::string> images;
        for (const auto& i : v) {
            ++by_level[to_string(i.level)];
            ++by_template[i.template_id];
            if (i.title_included) ++titled;
            if (!i.image_ref.empty()) images.insert(i.image_ref);
        }
        return json{{"total_instances", v.size()},
                    {"section_pairs", v.size() / 2},
                    {"title_included", titled},
                    {"title_excluded", v.size() - titled},
                    {"images", images.size()},
                    {"by_level", by_level},
                    {"by_template", by_template}};
    };
    return json{{"train", summarize(build.train)},
                {"dev", summarize(build.dev)},
                {"test_seen", summarize(build.test_seen)},
                {"test_unseen", summarize(build.test_unseen)}};
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_DATASET_HPP
