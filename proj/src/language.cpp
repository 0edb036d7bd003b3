#include <pvcsp/language.hpp>

#include <set>

namespace pvcsp {

Language::Language(int domain_size, std::vector<std::pair<std::string, WeightedRelation>> relations) :
    _domain_size(domain_size),
    _relations(std::move(relations))
{
    if (_relations.empty())
        throw error("language must be non-empty");
    std::set<std::string> names;
    for (const auto & [name, rel] : _relations) {
        if (rel.domain_size() != _domain_size)
            throw error("relation " + name + " has mismatched domain size");
        if (! names.insert(name).second)
            throw error("duplicate relation name " + name);
    }
}

auto Language::find(const std::string & name) const -> const WeightedRelation & {
    for (const auto & [n, rel] : _relations)
        if (n == name)
            return rel;
    throw error("no relation named " + name);
}

auto Language::has(const std::string & name) const -> bool {
    for (const auto & [n, _] : _relations)
        if (n == name)
            return true;
    return false;
}

}
