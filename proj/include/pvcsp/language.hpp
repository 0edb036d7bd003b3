#pragma once

#include <pvcsp/relation.hpp>

#include <string>
#include <vector>

namespace pvcsp {

// A valued constraint language: a named, non-empty list of weighted relations
// over a common domain.
class Language {
public:
    Language(int domain_size, std::vector<std::pair<std::string, WeightedRelation>> relations);

    auto domain_size() const -> int { return _domain_size; }
    auto size() const -> std::size_t { return _relations.size(); }
    auto relations() const -> const std::vector<std::pair<std::string, WeightedRelation>> & { return _relations; }

    auto at(std::size_t i) const -> const WeightedRelation & { return _relations.at(i).second; }
    auto name_of(std::size_t i) const -> const std::string & { return _relations.at(i).first; }
    auto find(const std::string & name) const -> const WeightedRelation &;
    auto has(const std::string & name) const -> bool;

private:
    int _domain_size;
    std::vector<std::pair<std::string, WeightedRelation>> _relations;
};

}
