#ifndef ARTEXPLAIN_CORPUS_HPP
#define ARTEXPLAIN_CORPUS_HPP

#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "artexplain/textops.hpp"

// Domain types for articles, sections, entities, instructions and model
// generations, plus the JSONL file formats they travel in.

namespace artexplain {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Six per-article popularity signals used for rank-balanced splitting.
/// All six are required; a missing one is a parse error, not a zero.
struct NotorietySignals {
    std::uint64_t page_views = 0;
    std::uint64_t link_count = 0;
    std::uint64_t edit_count = 0;
    std::uint64_t reference_count = 0;
    std::uint64_t language_versions = 0;
    std::uint64_t article_length = 0;
};

struct EntityMention {
    std::string surface;  // hyperlinked anchor text
    std::string target;   // link target identifier
};

/// One section of an article. path has 1-3 headings; the lead text uses
/// the synthetic heading "Abstract".
struct SectionNode {
    std::vector<std::string> path;
    std::string text;
    std::vector<EntityMention> entities;

    std::size_t level() const { return path.size(); }  // 1=Section .. 3=Sub subsection
};

struct ArticleRecord {
    std::string id;
    std::string title;
    std::vector<std::string> image_refs;
    bool has_infobox = false;
    NotorietySignals notoriety;
    std::vector<SectionNode> sections;
};

enum class HierarchyLevel { Section = 1, Subsection = 2, SubSubsection = 3 };

enum class Split { Train, Dev, TestSeen, TestUnseen };

inline std::string to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Dev: return "dev";
        case Split::TestSeen: return "test_seen";
        case Split::TestUnseen: return "test_unseen";
    }
    return "?";
}

inline Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "dev") return Split::Dev;
    if (s == "test_seen") return Split::TestSeen;
    if (s == "test_unseen") return Split::TestUnseen;
    throw ParseError("unknown split tag: " + s);
}

inline std::string to_string(HierarchyLevel l) {
    switch (l) {
        case HierarchyLevel::Section: return "section";
        case HierarchyLevel::Subsection: return "subsection";
        case HierarchyLevel::SubSubsection: return "sub_subsection";
    }
    return "?";
}

inline HierarchyLevel level_from_string(const std::string& s) {
    if (s == "section") return HierarchyLevel::Section;
    if (s == "subsection") return HierarchyLevel::Subsection;
    if (s == "sub_subsection") return HierarchyLevel::SubSubsection;
    throw ParseError("unknown hierarchy level: " + s);
}

/// One templated prompt/reference pair.
struct InstructionInstance {
    std::string instruction_id;
    std::string article_id;
    HierarchyLevel level = HierarchyLevel::Section;
    bool title_included = false;
    std::string template_id;  // "test", "dev", "train1".."train7"
    std::string prompt;
    std::string reference;
    std::string image_ref;
    Split split = Split::Train;
};

struct GenerationRecord {
    std::string instruction_id;
    std::string output_text;
};

struct TitleAnswer {
    std::string article_id;
    std::string output_text;
};

namespace detail {

inline std::uint64_t require_uint(const json& obj, const char* field, std::size_t line) {
    if (!obj.contains(field))
        throw ParseError("line " + std::to_string(line) + ": missing notoriety signal \"" +
                         field + "\"");
    const auto& v = obj.at(field);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0))
        throw ParseError("line " + std::to_string(line) + ": signal \"" + field +
                         "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline ArticleRecord article_from_json(const json& j, std::size_t line) {
    ArticleRecord a;
    try {
        a.id = j.at("id").get<std::string>();
        a.title = j.at("title").get<std::string>();
        if (a.title.empty())
            throw ParseError("line " + std::to_string(line) + ": empty title");
        for (const auto& p : j.value("image_refs", json::array()))
            a.image_refs.push_back(p.get<std::string>());
        a.has_infobox = j.value("has_infobox", false);

        const auto& n = j.at("notoriety");
        a.notoriety.page_views = require_uint(n, "page_views", line);
        a.notoriety.link_count = require_uint(n, "link_count", line);
        a.notoriety.edit_count = require_uint(n, "edit_count", line);
        a.notoriety.reference_count = require_uint(n, "reference_count", line);
        a.notoriety.language_versions = require_uint(n, "language_versions", line);
        a.notoriety.article_length = require_uint(n, "article_length", line);

        for (const auto& sj : j.value("sections", json::array())) {
            SectionNode s;
            for (const auto& h : sj.at("path")) s.path.push_back(h.get<std::string>());
            if (s.path.empty() || s.path.size() > 3)
                throw ParseError("line " + std::to_string(line) +
                                 ": section path must have 1-3 headings");
            s.text = sj.value("text", "");
            for (const auto& ej : sj.value("entities", json::array())) {
                EntityMention m;
                m.surface = ej.at("surface").get<std::string>();
                m.target = ej.value("target", "");
                s.entities.push_back(std::move(m));
            }
            a.sections.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    return a;
}

}  // namespace detail

/// Parses the article dump (JSONL, one article per line). Order is
/// preserved; duplicate ids and malformed records are hard errors.
inline std::vector<ArticleRecord> parse_dump(std::istream& in) {
    std::vector<ArticleRecord> out;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
        }
        ArticleRecord a = detail::article_from_json(j, lineno);
        if (!seen_ids.insert(a.id).second)
            throw ParseError("line " + std::to_string(lineno) + ": duplicate article id \"" +
                             a.id + "\"");
        out.push_back(std::move(a));
    }
    return out;
}

inline json article_to_json(const ArticleRecord& a) {
    json sections = json::array();
    for (const auto& s : a.sections) {
        json entities = json::array();
        for (const auto& e : s.entities)
            entities.push_back({{"surface", e.surface}, {"target", e.target}});
        sections.push_back({{"path", s.path}, {"text", s.text}, {"entities", entities}});
    }
    return json{{"id", a.id},
                {"title", a.title},
                {"image_refs", a.image_refs},
                {"has_infobox", a.has_infobox},
                {"notoriety",
                 {{"page_views", a.notoriety.page_views},
                  {"link_count", a.notoriety.link_count},
                  {"edit_count", a.notoriety.edit_count},
                  {"reference_count", a.notoriety.reference_count},
                  {"language_versions", a.notoriety.language_versions},
                  {"article_length", a.notoriety.article_length}}},
                {"sections", sections}};
}

inline void serialize_dump(const std::vector<ArticleRecord>& articles, std::ostream& out) {
    for (const auto& a : articles) out << article_to_json(a).dump() << "\n";
}

/// Deduplicated normalized entity surfaces across all sections of the
/// article. The article's own (normalized) title is always excluded so
/// that the with/without-title settings stay comparable.
inline EntityInventory entity_inventory(const ArticleRecord& article) {
    std::string norm_title = normalize_text(article.title);
    std::vector<std::string> surfaces;
    for (const auto& s : article.sections) {
        for (const auto& m : s.entities) {
            std::string n = normalize_text(m.surface);
            if (n.empty() || n == norm_title) continue;
            surfaces.push_back(std::move(n));
        }
    }
    return EntityInventory::from_normalized(std::move(surfaces));
}

// --- instruction / generation / title-answer files (JSONL) ---

inline json instruction_to_json(const InstructionInstance& i) {
    return json{{"instruction_id", i.instruction_id},
                {"article_id", i.article_id},
                {"level", to_string(i.level)},
                {"title_included", i.title_included},
                {"template_id", i.template_id},
                {"prompt", i.prompt},
                {"reference", i.reference},
                {"image_ref", i.image_ref},
                {"split", to_string(i.split)}};
}

inline InstructionInstance instruction_from_json(const json& j, std::size_t line) {
    try {
        InstructionInstance i;
        i.instruction_id = j.at("instruction_id").get<std::string>();
        i.article_id = j.at("article_id").get<std::string>();
        i.level = level_from_string(j.at("level").get<std::string>());
        i.title_included = j.at("title_included").get<bool>();
        i.template_id = j.at("template_id").get<std::string>();
        i.prompt = j.at("prompt").get<std::string>();
        i.reference = j.at("reference").get<std::string>();
        i.image_ref = j.value("image_ref", "");
        i.split = split_from_string(j.at("split").get<std::string>());
        return i;
    } catch (const json::exception& e) {
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
}

inline std::vector<InstructionInstance> parse_instructions(std::istream& in) {
    std::vector<InstructionInstance> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
        }
        out.push_back(instruction_from_json(j, lineno));
    }
    return out;
}

inline void write_instructions(const std::vector<InstructionInstance>& instances,
                               std::ostream& out) {
    for (const auto& i : instances) out << instruction_to_json(i).dump() << "\n";
}

inline std::vector<GenerationRecord> parse_generations(std::istream& in) {
    std::vector<GenerationRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            out.push_back({j.at("instruction_id").get<std::string>(),
                           j.at("output_text").get<std::string>()});
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<TitleAnswer> parse_title_answers(std::istream& in) {
    std::vector<TitleAnswer> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            out.push_back({j.at("article_id").get<std::string>(),
                           j.at("output_text").get<std::string>()});
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_CORPUS_HPP
