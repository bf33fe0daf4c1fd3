#ifndef ARTEXPLAIN_TESTS_FIXTURES_HPP
#define ARTEXPLAIN_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "artexplain/corpus.hpp"

namespace fixtures {

inline artexplain::ArticleRecord make_article(
    const std::string& id, const std::string& title,
    std::vector<artexplain::SectionNode> sections,
    std::vector<std::string> image_refs = {"/images/a.jpg"},
    std::uint64_t signal_base = 10) {
    artexplain::ArticleRecord a;
    a.id = id;
    a.title = title;
    a.image_refs = std::move(image_refs);
    a.has_infobox = true;
    a.notoriety = {signal_base, signal_base, signal_base, signal_base, signal_base, signal_base};
    a.sections = std::move(sections);
    return a;
}

inline artexplain::SectionNode make_section(std::vector<std::string> path, std::string text,
                                            std::vector<std::string> entity_surfaces = {}) {
    artexplain::SectionNode s;
    s.path = std::move(path);
    s.text = std::move(text);
    for (auto& e : entity_surfaces) s.entities.push_back({e, e});
    return s;
}

/// Synthetic corpus with distinct notoriety signals per article.
inline std::vector<artexplain::ArticleRecord> synthetic_corpus(std::size_t n) {
    std::vector<artexplain::ArticleRecord> out;
    static const std::vector<std::string> headings = {"Abstract", "Description", "History",
                                                      "Background", "Provenance", "Reception"};
    for (std::size_t i = 0; i < n; ++i) {
        std::string id = "art" + std::to_string(i);
        std::vector<artexplain::SectionNode> sections;
        sections.push_back(make_section(
            {headings[i % headings.size()]},
            "The painting was made by Painter " + std::to_string(i) +
                ". It hangs in the Louvre. Painter " + std::to_string(i) +
                " and the Louvre are linked.",
            {"Painter " + std::to_string(i), "Louvre"}));
        if (i % 3 == 0)
            sections.push_back(make_section({headings[i % headings.size()], "Creation"},
                                            "It was created in Paris long ago.", {"Paris"}));
        auto a = make_article(id, "Artwork " + std::to_string(i), std::move(sections),
                              {"/images/art" + std::to_string(i) + ".jpg"},
                              /*signal_base=*/1000 + n - i);
        // distinct, fully ordered signals: article 0 is most notable
        a.notoriety = {1000 + 6 * (n - i),     900 + 5 * (n - i), 800 + 4 * (n - i),
                       700 + 3 * (n - i),      600 + 2 * (n - i), 500 + (n - i)};
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace fixtures

#endif  // ARTEXPLAIN_TESTS_FIXTURES_HPP
