#include <pvcsp/express.hpp>

#include <algorithm>

namespace pvcsp {

namespace {

auto check_coord(const WeightedRelation & g, int i) -> void {
    if (i < 1 || i > g.arity())
        throw error("coordinate out of range");
}

}

auto apply_domain_restriction(const WeightedRelation & g, int i, const std::vector<Label> & subdomain)
        -> WeightedRelation {
    check_coord(g, i);
    for (Label a : subdomain)
        if (a < 0 || a >= g.domain_size())
            throw error("domain restriction: label out of range");
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity());
        if (std::find(subdomain.begin(), subdomain.end(), t[std::size_t(i - 1)]) == subdomain.end())
            result.set(idx, INF);
    }
    return result;
}

auto apply_pin(const WeightedRelation & g, int i, Label a) -> WeightedRelation {
    check_coord(g, i);
    if (a < 0 || a >= g.domain_size())
        throw error("pin: label out of range");
    if (g.arity() < 2)
        throw error("pin: arity must be at least 2");
    WeightedRelation result(g.domain_size(), g.arity() - 1);
    for (std::size_t idx = 0; idx < result.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity() - 1);
        Tuple full(t.begin(), t.begin() + (i - 1));
        full.push_back(a);
        full.insert(full.end(), t.begin() + (i - 1), t.end());
        result.set(idx, g.evaluate(full));
    }
    return result;
}

auto apply_eq_restrict(const WeightedRelation & g, int i) -> WeightedRelation {
    check_coord(g, i);
    if (g.arity() < 2)
        throw error("=-restriction: arity must be at least 2");
    int j = i % g.arity() + 1;
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity());
        if (t[std::size_t(i - 1)] != t[std::size_t(j - 1)])
            result.set(idx, INF);
    }
    return result;
}

auto apply_neq_restrict(const WeightedRelation & g, int i) -> WeightedRelation {
    check_coord(g, i);
    if (g.arity() < 2)
        throw error("!=-restriction: arity must be at least 2");
    int j = i % g.arity() + 1;
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity());
        if (t[std::size_t(i - 1)] == t[std::size_t(j - 1)])
            result.set(idx, INF);
    }
    return result;
}

auto apply_minimise(const WeightedRelation & g, int i) -> WeightedRelation {
    check_coord(g, i);
    if (g.arity() < 2)
        throw error("minimise: arity must be at least 2");
    auto result = WeightedRelation::empty(g.domain_size(), g.arity() - 1);
    for (std::size_t idx = 0; idx < result.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity() - 1);
        ExtValue best = INF;
        for (Label a = 0; a < g.domain_size(); ++a) {
            Tuple full(t.begin(), t.begin() + (i - 1));
            full.push_back(a);
            full.insert(full.end(), t.begin() + (i - 1), t.end());
            auto v = g.evaluate(full);
            if (v < best)
                best = v;
        }
        result.set(idx, best);
    }
    return result;
}

auto apply_add_unary(const WeightedRelation & g, const WeightedRelation & mu, int i) -> WeightedRelation {
    check_coord(g, i);
    if (mu.arity() != 1 || mu.domain_size() != g.domain_size())
        throw error("add_unary: unary relation over the same domain required");
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity());
        result.set(idx, g[idx] + mu.evaluate({t[std::size_t(i - 1)]}));
    }
    return result;
}

auto apply_add_binary(const WeightedRelation & g, const WeightedRelation & beta, int i) -> WeightedRelation {
    check_coord(g, i);
    if (g.arity() < 2)
        throw error("add_binary: arity must be at least 2");
    if (beta.arity() != 2 || beta.domain_size() != g.domain_size())
        throw error("add_binary: binary relation over the same domain required");
    int j = i % g.arity() + 1;
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, g.domain_size(), g.arity());
        result.set(idx, g[idx] + beta.evaluate({t[std::size_t(i - 1)], t[std::size_t(j - 1)]}));
    }
    return result;
}

auto apply_join(const WeightedRelation & g1, const WeightedRelation & g2, bool flip1, bool flip2)
        -> WeightedRelation {
    if (g1.arity() != 2 || g2.arity() != 2 || g1.domain_size() != g2.domain_size())
        throw error("join: two binary relations over the same domain required");
    int d = g1.domain_size();
    WeightedRelation result(d, 2);
    for (Label x = 0; x < d; ++x)
        for (Label y = 0; y < d; ++y) {
            ExtValue best = INF;
            for (Label z = 0; z < d; ++z) {
                auto v = (flip1 ? g1.evaluate({z, x}) : g1.evaluate({x, z})) +
                        (flip2 ? g2.evaluate({y, z}) : g2.evaluate({z, y}));
                if (v < best)
                    best = v;
            }
            result.set({x, y}, best);
        }
    return result;
}

auto apply_fan(const std::vector<WeightedRelation> & gs, const std::vector<bool> & flips)
        -> WeightedRelation {
    if (gs.size() < 2 || gs.size() != flips.size())
        throw error("fan: at least two binary relations with matching flips required");
    int d = gs.front().domain_size();
    for (const auto & g : gs)
        if (g.arity() != 2 || g.domain_size() != d)
            throw error("fan: binary relations over a common domain required");
    int k = int(gs.size());
    WeightedRelation result(d, k);
    for (std::size_t idx = 0; idx < result.size(); ++idx) {
        auto t = index_tuple(idx, d, k);
        ExtValue best = INF;
        for (Label z = 0; z < d; ++z) {
            ExtValue sum(0);
            for (int i = 0; i < k; ++i)
                sum += flips[std::size_t(i)] ? gs[std::size_t(i)].evaluate({z, t[std::size_t(i)]})
                                             : gs[std::size_t(i)].evaluate({t[std::size_t(i)], z});
            if (sum < best)
                best = sum;
        }
        result.set(idx, best);
    }
    return result;
}

auto apply_twist(const WeightedRelation & g, int i) -> WeightedRelation {
    check_coord(g, i);
    if (g.domain_size() != 2)
        throw error("twist: Boolean domain required");
    auto result = g;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto t = index_tuple(idx, 2, g.arity());
        t[std::size_t(i - 1)] ^= 1;
        result.set(idx, g.evaluate(t));
    }
    return result;
}

auto tuple_xor(const Tuple & a, const Tuple & b) -> Tuple {
    if (a.size() != b.size())
        throw error("tuple xor: length mismatch");
    Tuple r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] ^ b[i];
    return r;
}

auto tuple_negate(const Tuple & a) -> Tuple {
    return tuple_xor(a, ones(int(a.size())));
}

auto unit_tuple(int r, int i) -> Tuple {
    Tuple t(std::size_t(r), 0);
    t.at(std::size_t(i - 1)) = 1;
    return t;
}

auto zeros(int r) -> Tuple { return Tuple(std::size_t(r), 0); }
auto ones(int r) -> Tuple { return Tuple(std::size_t(r), 1); }

}
