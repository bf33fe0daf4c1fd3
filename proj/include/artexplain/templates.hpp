#ifndef ARTEXPLAIN_TEMPLATES_HPP
#define ARTEXPLAIN_TEMPLATES_HPP

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "artexplain/corpus.hpp"

// Prompt templates: one controlled template each for the Dev and Test
// splits, seven linguistic variants for Train, all at three hierarchy
// levels with title-included/excluded variants.

namespace artexplain {

struct TemplateSpec {
    std::string template_id;  // "test", "dev", "train1".."train7"
    HierarchyLevel level;
    bool title_included;
    std::string pattern;  // placeholders: {Title} {Section} {Subsection} {Sub subsection}
};

namespace detail {

struct TemplateFamily {
    const char* id;
    // [level-1][0]=titled, [level-1][1]=untitled
    const char* patterns[3][2];
};

inline const std::vector<TemplateFamily>& template_families() {
    static const std::vector<TemplateFamily> families = {
        {"test",
         {{"Explain the {Section} of this artwork, {Title}.",
           "Explain the {Section} of this artwork."},
          {"Explain the {Subsection} about the {Section} of this artwork, {Title}.",
           "Explain the {Subsection} about the {Section} of this artwork."},
          {"Explain the {Sub subsection} about the {Subsection} of the {Section} in this artwork, {Title}.",
           "Explain the {Sub subsection} about the {Subsection} of the {Section} in this artwork."}}},
        {"dev",
         {{"Describe the {Section} of this artwork, {Title}.",
           "Describe the {Section} of this artwork."},
          {"Describe the {Subsection} about the {Section} of this artwork, {Title}.",
           "Describe the {Subsection} about the {Section} of this artwork."},
          {"Describe the {Sub subsection} about the {Subsection} of the {Section} in this artwork, {Title}.",
           "Describe the {Sub subsection} about the {Subsection} of the {Section} in this artwork."}}},
        {"train1",
         {{"Focus on {Title} and explore the {Section}.",
           "Focus on this artwork and explore the {Section}."},
          {"In the context of {Title}, explore the {Subsection} of the {Section}.",
           "In the context of this artwork, explore the {Subsection} of the {Section}."},
          {"Focusing on the {Section} of {Title}, explore the {Sub subsection} about the {Subsection}.",
           "Focusing on the {Section} of this artwork, explore the {Sub subsection} about the {Subsection}."}}},
        {"train2",
         {{"Focus on {Title} and explain the {Section}.",
           "Focus on this artwork and explain the {Section}."},
          {"In the context of {Title}, explain the {Subsection} of the {Section}.",
           "In the context of this artwork, explain the {Subsection} of the {Section}."},
          {"Focusing on the {Section} of {Title}, explain the {Sub subsection} about the {Subsection}.",
           "Focusing on the {Section} of this artwork, explain the {Sub subsection} about the {Subsection}."}}},
        {"train3",
         {{"Explore the {Section} of this artwork, {Title}.",
           "Explore the {Section} of this artwork."},
          {"Explore the {Subsection} about the {Section} of this artwork, {Title}.",
           "Explore the {Subsection} about the {Section} of this artwork."},
          {"Explore the {Sub subsection} about the {Subsection} of the {Section} in this artwork, {Title}.",
           "Explore the {Sub subsection} about the {Subsection} of the {Section} in this artwork."}}},
        {"train4",
         {{"Focus on {Title} and discuss the {Section}.",
           "Focus on this artwork and discuss the {Section}."},
          {"In the context of {Title}, discuss the {Subsection} of the {Section}.",
           "In the context of this artwork, discuss the {Subsection} of the {Section}."},
          {"Focusing on the {Section} of {Title}, discuss the {Sub subsection} about the {Subsection}.",
           "Focusing on the {Section} of this artwork, discuss the {Sub subsection} about the {Subsection}."}}},
        {"train5",
         {{"How does {Title} elucidate its {Section}?",
           "How does this artwork elucidate its {Section}?"},
          {"In {Title}, how is the {Subsection} of the {Section} elucidated?",
           "In this artwork, how is the {Subsection} of the {Section} elucidated?"},
          {"Regarding {Title}, how does the {Section}'s {Subsection} incorporate the {Sub subsection}?",
           "Regarding this artwork, how does the {Section}'s {Subsection} incorporate the {Sub subsection}?"}}},
        {"train6",
         {{"Focus on {Title} and analyze the {Section}.",
           "Focus on this artwork and analyze the {Section}."},
          {"In the context of {Title}, analyze the {Subsection} of the {Section}.",
           "In the context of this artwork, analyze the {Subsection} of the {Section}."},
          {"Focusing on the {Section} of {Title}, analyze the {Sub subsection} about the {Subsection}.",
           "Focusing on the {Section} of this artwork, analyze the {Sub subsection} about the {Subsection}."}}},
        {"train7",
         {{"In {Title}, how is the {Section} discussed?",
           "In this artwork, how is the {Section} discussed?"},
          {"Describe the characteristics of the {Subsection} in {Title}'s {Section}.",
           "Describe the characteristics of the {Subsection} in this artwork's {Section}."},
          {"When looking at the {Section} of {Title}, how do you discuss its {Subsection}'s {Sub subsection}?",
           "When looking at the {Section} of this artwork, how do you discuss its {Subsection}'s {Sub subsection}?"}}},
    };
    return families;
}

}  // namespace detail

inline TemplateSpec get_template(const std::string& template_id, HierarchyLevel level,
                                 bool title_included) {
    for (const auto& fam : detail::template_families()) {
        if (fam.id != template_id) continue;
        TemplateSpec spec;
        spec.template_id = template_id;
        spec.level = level;
        spec.title_included = title_included;
        spec.pattern = fam.patterns[static_cast<int>(level) - 1][title_included ? 0 : 1];
        return spec;
    }
    throw std::invalid_argument("unknown template id: " + template_id);
}

inline std::vector<TemplateSpec> all_templates() {
    std::vector<TemplateSpec> out;
    for (const auto& fam : detail::template_families())
        for (int lvl = 1; lvl <= 3; ++lvl)
            for (bool titled : {true, false})
                out.push_back(get_template(fam.id, static_cast<HierarchyLevel>(lvl), titled));
    return out;
}

namespace detail {

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

}  // namespace detail

/// Exact placeholder substitution; inserted title and headings are not
/// normalized or altered in any way.
inline std::string render_prompt(const TemplateSpec& spec, const std::string& title,
                                 const std::vector<std::string>& path) {
    if (path.size() != static_cast<std::size_t>(spec.level))
        throw std::invalid_argument("template level does not match section path depth");
    std::string out = spec.pattern;
    if (spec.title_included) detail::replace_all(out, "{Title}", title);
    detail::replace_all(out, "{Section}", path[0]);
    if (path.size() >= 2) detail::replace_all(out, "{Subsection}", path[1]);
    if (path.size() >= 3) detail::replace_all(out, "{Sub subsection}", path[2]);
    return out;
}

inline InstructionInstance render_instruction(const ArticleRecord& article,
                                              const SectionNode& section,
                                              const TemplateSpec& spec) {
    if (section.path.size() != static_cast<std::size_t>(spec.level))
        throw std::invalid_argument("template level does not match section path depth");
    InstructionInstance inst;
    inst.article_id = article.id;
    inst.level = spec.level;
    inst.title_included = spec.title_included;
    inst.template_id = spec.template_id;
    inst.prompt = render_prompt(spec, article.title, section.path);
    inst.reference = section.text;
    inst.image_ref = article.image_refs.empty() ? "" : article.image_refs.front();
    return inst;
}

struct PromptFields {
    std::string title;  // empty for title-excluded patterns
    std::vector<std::string> path;
};

/// Recovers the filled-in title and heading path from a rendered
/// prompt. Returns nullopt when the prompt does not match the pattern.
inline std::optional<PromptFields> match_prompt(const std::string& prompt,
                                                const TemplateSpec& spec) {
    static const std::vector<std::string> placeholders = {"{Title}", "{Section}", "{Subsection}",
                                                          "{Sub subsection}"};
    std::string rx;
    std::vector<std::string> order;
    const std::string& pat = spec.pattern;
    for (std::size_t i = 0; i < pat.size();) {
        bool matched = false;
        for (const auto& ph : placeholders) {
            if (pat.compare(i, ph.size(), ph) == 0) {
                rx += "(.+?)";
                order.push_back(ph);
                i += ph.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        char c = pat[i++];
        if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) rx += '\\';
        rx += c;
    }
    std::smatch m;
    if (!std::regex_match(prompt, m, std::regex("^" + rx + "$"))) return std::nullopt;
    PromptFields out;
    out.path.resize(static_cast<std::size_t>(spec.level));
    for (std::size_t g = 0; g < order.size(); ++g) {
        const std::string& ph = order[g];
        std::string val = m[g + 1].str();
        if (ph == "{Title}") out.title = val;
        else if (ph == "{Section}") out.path[0] = val;
        else if (ph == "{Subsection}") out.path[1] = val;
        else out.path[2] = val;
    }
    return out;
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_TEMPLATES_HPP
