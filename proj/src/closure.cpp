#include <pvcsp/catalog.hpp>
#include <pvcsp/closure.hpp>
#include <pvcsp/express.hpp>

#include <algorithm>

namespace pvcsp {

auto canonicalize(const WeightedRelation & g) -> CanonicalForm {
    auto mn = g.min_finite_value();
    if (! mn)
        return {g, Rat(0), Rat(1)};
    auto shifted = add_constant(g, -*mn);
    auto p = shifted.second_min_value();
    if (! p || *p == 1)
        return {std::move(shifted), *mn, Rat(1)};
    auto scaled = scale(shifted, Rat(1) / *p);
    return {std::move(scaled), *mn, *p};
}

auto canonical_derivation(const WeightedRelation & g, const DerivPtr & d) -> DerivPtr {
    auto form = canonicalize(g);
    auto out = d;
    if (sgn(form.shift) != 0)
        out = deriv::add_const_node(out, -form.shift);
    if (form.scale != 1)
        out = deriv::scale_node(out, Rat(1) / form.scale);
    return out;
}

auto default_budget(const Language & base) -> SaturationBudget {
    SaturationBudget b;
    for (const auto & [_, rel] : base.relations())
        b.max_arity = std::max(b.max_arity, rel.arity());
    return b;
}

SaturatedSet::SaturatedSet(Language base, bool conservative, SaturationBudget budget) :
    _base(std::move(base)),
    _conservative(conservative),
    _budget(budget)
{
}

auto SaturatedSet::find(const WeightedRelation & canonical_rel) const -> std::optional<std::size_t> {
    auto it = _index.find(canonical_rel.encode());
    if (it == _index.end())
        return std::nullopt;
    return it->second;
}

auto SaturatedSet::contains_crisp(const WeightedRelation & rho) const -> std::optional<DerivPtr> {
    if (! rho.is_crisp())
        throw error("contains_crisp: relation must be crisp");
    if (auto idx = find(rho))
        return _entries[*idx].derivation;
    return std::nullopt;
}

auto SaturatedSet::insert(const WeightedRelation & g, const DerivPtr & d) -> std::optional<std::size_t> {
    if (g.arity() > _budget.max_arity)
        return std::nullopt;
    auto form = canonicalize(g);
    auto key = form.rel.encode();
    if (auto it = _index.find(key); it != _index.end())
        return it->second;
    if (_entries.size() >= _budget.max_set) {
        _truncated = true;
        return std::nullopt;
    }
    auto cd = canonical_derivation(g, d);
    if (derivation_depth(cd) > _budget.max_depth) {
        _truncated = true;
        return std::nullopt;
    }
    _entries.push_back({std::move(form.rel), std::move(cd)});
    _index.emplace(std::move(key), _entries.size() - 1);
    _ordered_dirty = true;
    return _entries.size() - 1;
}

auto SaturatedSet::ordered() const -> const std::vector<std::size_t> & {
    if (_ordered_dirty) {
        _ordered.resize(_entries.size());
        for (std::size_t i = 0; i < _entries.size(); ++i)
            _ordered[i] = i;
        std::sort(_ordered.begin(), _ordered.end(), [&](std::size_t a, std::size_t b) {
            if (_entries[a].rel.arity() != _entries[b].rel.arity())
                return _entries[a].rel.arity() < _entries[b].rel.arity();
            return _entries[a].rel.encode() < _entries[b].rel.encode();
        });
        _ordered_dirty = false;
    }
    return _ordered;
}

auto SaturatedSet::lookup_crisp_unary(const std::vector<Label> & support) const -> DerivPtr {
    auto rel = WeightedRelation::empty(_base.domain_size(), 1);
    for (Label a : support)
        rel.set({a}, ExtValue(0));
    auto it = _index.find(rel.encode());
    if (it == _index.end())
        return nullptr;
    return _entries[it->second].derivation;
}

namespace {

auto zero_one_inf_unaries(int d) -> std::vector<WeightedRelation> {
    std::vector<WeightedRelation> out;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i)
        total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        auto rel = WeightedRelation::empty(d, 1);
        auto c = code;
        bool feasible = false;
        for (Label a = 0; a < d; ++a) {
            switch (c % 3) {
                case 0: rel.set({a}, ExtValue(0)); feasible = true; break;
                case 1: rel.set({a}, ExtValue(1)); feasible = true; break;
                default: break;
            }
            c /= 3;
        }
        if (feasible)
            out.push_back(std::move(rel));
    }
    return out;
}

}

auto SaturatedSet::run() -> void {
    for (std::size_t i = 0; i < _base.size(); ++i)
        insert(_base.at(i), deriv::base(_base.name_of(i)));
    insert(cat::rho_eq(_base.domain_size()), deriv::equality(_base.domain_size()));
    if (_conservative)
        for (const auto & u : zero_one_inf_unaries(_base.domain_size()))
            insert(u, deriv::unary(u));

    std::size_t head = 0;
    while (head < _entries.size()) {
        if (_steps >= _budget.max_steps) {
            _truncated = true;
            break;
        }
        generate_from(head++);
    }
    _exhausted = ! _truncated && head >= _entries.size();
}

auto SaturatedSet::generate_from(std::size_t idx) -> void {
    int d = _base.domain_size();
    auto rel = _entries[idx].rel;  // copy: inserts may reallocate
    auto dv = _entries[idx].derivation;
    auto step = [&]() { ++_steps; };

    step();
    insert(feas(rel), deriv::feas_node(dv));
    insert(opt(rel), deriv::opt_node(dv));

    if (rel.arity() >= 2)
        for (int i = 1; i <= rel.arity(); ++i) {
            step();
            insert(apply_minimise(rel, i), deriv::minimise(dv, i));
            insert(apply_eq_restrict(rel, i), deriv::eq_restrict(dv, i));
        }

    if (d == 2) {
        auto it = _index.find(cat::rho_neq().encode());
        DerivPtr neq = it != _index.end() ? _entries[it->second].derivation : nullptr;
        if (neq)
            for (int i = 1; i <= rel.arity(); ++i) {
                step();
                if (rel.arity() >= 2)
                    insert(apply_neq_restrict(rel, i), deriv::neq_restrict(dv, i, neq));
                insert(apply_twist(rel, i), deriv::twist(dv, i, neq));
            }
    }

    for (int i = 1; i <= rel.arity(); ++i)
        for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << d); ++mask) {
            std::vector<Label> sub;
            for (Label a = 0; a < d; ++a)
                if (mask & (std::size_t(1) << a))
                    sub.push_back(a);
            DerivPtr aux = nullptr;
            if (! _conservative) {
                aux = lookup_crisp_unary(sub);
                if (! aux)
                    continue;
            }
            step();
            insert(apply_domain_restriction(rel, i, sub), deriv::restrict_domain(dv, i, sub, aux));
            if (sub.size() == 1 && rel.arity() >= 2)
                insert(apply_pin(rel, i, sub[0]), deriv::pin(dv, i, sub[0], aux));
        }

    if (_conservative) {
        for (const auto & u : zero_one_inf_unaries(d)) {
            auto ud = deriv::unary(u);
            for (int i = 1; i <= rel.arity(); ++i) {
                step();
                insert(apply_add_unary(rel, u, i), deriv::add_unary(dv, ud, i));
            }
        }
    }
    else {
        for (std::size_t k = 0; k < _entries.size() && k <= idx; ++k) {
            if (_entries[k].rel.arity() != 1)
                continue;
            auto u = _entries[k].rel;
            auto ud = _entries[k].derivation;
            for (int i = 1; i <= rel.arity(); ++i) {
                step();
                insert(apply_add_unary(rel, u, i), deriv::add_unary(dv, ud, i));
            }
        }
    }

    if (rel.arity() == 2) {
        for (std::size_t k = 0; k <= idx && k < _entries.size(); ++k) {
            if (_entries[k].rel.arity() != 2)
                continue;
            auto other = _entries[k].rel;
            auto od = _entries[k].derivation;
            for (int flips = 0; flips < 4; ++flips) {
                step();
                bool f1 = flips & 1, f2 = flips & 2;
                insert(apply_join(rel, other, f1, f2), deriv::join(dv, od, f1, f2));
                insert(apply_join(other, rel, f1, f2), deriv::join(od, dv, f1, f2));
            }
        }
        if (_conservative)
            for (Label a1 = 0; a1 < d; ++a1)
                for (Label b1 = 0; b1 < d; ++b1)
                    for (Label a2 = 0; a2 < d; ++a2)
                        for (Label b2 = 0; b2 < d; ++b2) {
                            if (a1 == b1 || a2 == b2)
                                continue;
                            step();
                            if (auto hard = two_fan_opt(rel, dv, a1, b1, a2, b2))
                                insert(hard->rel, hard->derivation);
                            if (auto soft = two_fan_soft(rel, dv, a1, b1, a2, b2))
                                insert(soft->rel, soft->derivation);
                        }
    }
}

auto saturate(const Language & base, const SaturationBudget & budget, bool conservative)
        -> SaturatedSet {
    SaturatedSet s(base, conservative, budget);
    s.run();
    return s;
}

namespace {

// lambda strictly inside (P+Q-A, B): midpoint when both ends are finite,
// one off the finite end otherwise, zero when unconstrained
auto choose_lambda(const ExtValue & A, const ExtValue & B, const Rat & P, const Rat & Q) -> Rat {
    bool left_finite = A.is_finite();
    bool right_finite = B.is_finite();
    if (left_finite && right_finite)
        return (P + Q - A.rational() + B.rational()) / 2;
    if (right_finite)
        return B.rational() - 1;
    if (left_finite)
        return P + Q - A.rational() + 1;
    return Rat(0);
}

auto two_fan_common(const WeightedRelation & gamma, const DerivPtr & d,
        Label a1, Label b1, Label a2, Label b2, bool soft)
        -> std::optional<TwoFanResult> {
    if (gamma.arity() != 2)
        throw error("two-fan: binary relation required");
    int dom = gamma.domain_size();
    if (a1 == b1 || a2 == b2)
        throw error("two-fan: vertex labels must differ");
    auto A = gamma.evaluate({a1, a2});
    auto B = gamma.evaluate({b1, b2});
    auto P = gamma.evaluate({a1, b2});
    auto Q = gamma.evaluate({b1, a2});
    if (P.is_infinite() || Q.is_infinite())
        return std::nullopt;
    if (! (P + Q < A + B))
        return std::nullopt;

    std::vector<Label> dom1{std::min(a1, b1), std::max(a1, b1)};
    std::vector<Label> dom2{std::min(a2, b2), std::max(a2, b2)};
    auto restricted = apply_domain_restriction(apply_domain_restriction(gamma, 1, dom1), 2, dom2);
    auto rd = d;
    if (int(dom1.size()) < dom)
        rd = deriv::restrict_domain(rd, 1, dom1);
    if (int(dom2.size()) < dom)
        rd = deriv::restrict_domain(rd, 2, dom2);

    if (soft) {
        if (A.is_infinite() && B.is_infinite())
            return std::nullopt;
        if (A.is_finite() && B.is_finite()) {
            Rat lambda = B.rational();
            auto u1 = WeightedRelation(dom, 1);
            u1.set({a1}, ExtValue(lambda - P.rational()));
            auto u2 = WeightedRelation(dom, 1);
            u2.set({a2}, ExtValue(lambda - Q.rational()));
            auto result = opt(apply_add_unary(apply_add_unary(restricted, u1, 1), u2, 2));
            auto expected = WeightedRelation::crisp(dom, 2, {{b1, b2}, {a1, b2}, {b1, a2}});
            if (! (result == expected))
                throw error("two-fan: soft form does not match");
            auto rdd = deriv::opt_node(deriv::add_unary(
                    deriv::add_unary(rd, deriv::unary(u1), 1), deriv::unary(u2), 2));
            return TwoFanResult{std::move(result), std::move(rdd)};
        }
        auto result = feas(restricted);
        auto expected = A.is_finite()
                ? WeightedRelation::crisp(dom, 2, {{a1, a2}, {a1, b2}, {b1, a2}})
                : WeightedRelation::crisp(dom, 2, {{b1, b2}, {a1, b2}, {b1, a2}});
        if (! (result == expected))
            throw error("two-fan: feasibility form does not match");
        return TwoFanResult{std::move(result), deriv::feas_node(rd)};
    }

    Rat lambda = choose_lambda(A, B, P.rational(), Q.rational());
    auto u1 = WeightedRelation(dom, 1);
    u1.set({a1}, ExtValue(lambda - P.rational()));
    auto u2 = WeightedRelation(dom, 1);
    u2.set({a2}, ExtValue(lambda - Q.rational()));
    auto result = opt(apply_add_unary(apply_add_unary(restricted, u1, 1), u2, 2));
    auto expected = WeightedRelation::crisp(dom, 2, {{a1, b2}, {b1, a2}});
    if (! (result == expected))
        throw error("two-fan: hard form does not match");
    auto rdd = deriv::opt_node(deriv::add_unary(
            deriv::add_unary(rd, deriv::unary(u1), 1), deriv::unary(u2), 2));
    return TwoFanResult{std::move(result), std::move(rdd)};
}

}

auto two_fan_opt(const WeightedRelation & gamma, const DerivPtr & d,
        Label a1, Label b1, Label a2, Label b2) -> std::optional<TwoFanResult> {
    return two_fan_common(gamma, d, a1, b1, a2, b2, false);
}

auto two_fan_soft(const WeightedRelation & gamma, const DerivPtr & d,
        Label a1, Label b1, Label a2, Label b2) -> std::optional<TwoFanResult> {
    return two_fan_common(gamma, d, a1, b1, a2, b2, true);
}

auto combine(const Tuple & x, const Tuple & y, const std::vector<bool> & in_I) -> Tuple {
    Tuple out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = in_I[i] ? x[i] : y[i];
    return out;
}

namespace {

struct SwapState {
    WeightedRelation rel{1, 1};
    DerivPtr d;
    std::vector<int> orig;
    std::vector<bool> in_I;
    Tuple x, y;
    const std::function<DerivPtr(Label)> * pin_witness;
};

auto check_precondition(const SwapState & s) -> void {
    auto lhs = s.rel.evaluate(s.x) + s.rel.evaluate(s.y);
    auto rhs = s.rel.evaluate(combine(s.x, s.y, s.in_I)) + s.rel.evaluate(combine(s.y, s.x, s.in_I));
    if (! (lhs < rhs))
        throw error("swap_witness: exchange inequality precondition violated");
}

auto transpose_rel(const WeightedRelation & rel) -> WeightedRelation {
    return apply_join(rel, cat::rho_eq(rel.domain_size()), true, false);
}

auto swap_rec(SwapState s) -> SwapWitness {
    check_precondition(s);
    std::size_t ci = 0, cj = 0;
    for (bool b : s.in_I)
        (b ? ci : cj)++;
    if (ci == 0 || cj == 0)
        throw error("swap_witness: degenerate partition");
    if (ci == 1 && cj == 1) {
        if (s.in_I[0])
            return {s.orig[0], s.orig[1], s.rel, s.d};
        return {s.orig[1], s.orig[0], transpose_rel(s.rel),
                deriv::transpose(s.d, s.rel.domain_size())};
    }
    if (cj < 2) {
        for (std::size_t p = 0; p < s.in_I.size(); ++p)
            s.in_I[p] = ! s.in_I[p];
        auto w = swap_rec(std::move(s));
        return {w.j, w.i, transpose_rel(w.rel), deriv::transpose(w.derivation, w.rel.domain_size())};
    }

    std::size_t k = 0;
    while (s.in_I[k])
        ++k;
    int dom = s.rel.domain_size();
    auto mixed = [&](const Tuple & on_I, const Tuple & on_Jp, Label at_k) {
        Tuple t(s.x.size());
        for (std::size_t p = 0; p < t.size(); ++p)
            t[p] = p == k ? at_k : (s.in_I[p] ? on_I[p] : on_Jp[p]);
        return t;
    };
    auto drop = [](auto & vec, std::size_t pos) { vec.erase(vec.begin() + long(pos)); };

    auto x_yJp_xk = mixed(s.x, s.y, s.x[k]);
    auto y_xJp_yk = mixed(s.y, s.x, s.y[k]);

    if (! s.rel.feasible(x_yJp_xk) && ! s.rel.feasible(y_xJp_yk)) {
        // restrict coordinate k to the witness labels, then minimise it away
        std::vector<Label> sub{std::min(s.x[k], s.y[k]), std::max(s.x[k], s.y[k])};
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        auto restricted = s.rel;
        auto rd = s.d;
        if (int(sub.size()) < dom) {
            restricted = apply_domain_restriction(s.rel, int(k) + 1, sub);
            DerivPtr aux = nullptr;
            if (*s.pin_witness && sub.size() == 1)
                aux = (*s.pin_witness)(sub[0]);
            rd = deriv::restrict_domain(rd, int(k) + 1, sub, aux);
        }
        s.rel = apply_minimise(restricted, int(k) + 1);
        s.d = deriv::minimise(rd, int(k) + 1);
        drop(s.orig, k);
        drop(s.in_I, k);
        drop(s.x, k);
        drop(s.y, k);
        return swap_rec(std::move(s));
    }

    if (! s.rel.feasible(y_xJp_yk)) {
        std::swap(s.x, s.y);
        std::swap(x_yJp_xk, y_xJp_yk);
    }

    auto x_xJp_yk = mixed(s.x, s.x, s.y[k]);
    auto y_xJp_xk = mixed(s.y, s.x, s.x[k]);
    auto lhs = s.rel.evaluate(s.x) + s.rel.evaluate(y_xJp_yk);
    auto rhs = s.rel.evaluate(x_xJp_yk) + s.rel.evaluate(y_xJp_xk);
    if (lhs < rhs) {
        // pin every other J coordinate to its x label; partition (I, {k})
        std::vector<std::size_t> pins;
        for (std::size_t p = 0; p < s.in_I.size(); ++p)
            if (! s.in_I[p] && p != k)
                pins.push_back(p);
        std::sort(pins.rbegin(), pins.rend());
        Tuple new_y = y_xJp_yk;
        for (auto p : pins) {
            DerivPtr aux = *s.pin_witness ? (*s.pin_witness)(s.x[p]) : nullptr;
            s.rel = apply_pin(s.rel, int(p) + 1, s.x[p]);
            s.d = deriv::pin(s.d, int(p) + 1, s.x[p], aux);
            drop(s.x, p);
            drop(new_y, p);
            drop(s.orig, p);
            drop(s.in_I, p);
        }
        s.y = std::move(new_y);
        return swap_rec(std::move(s));
    }

    // pin coordinate k to y_k; partition (I, J')
    DerivPtr aux = *s.pin_witness ? (*s.pin_witness)(s.y[k]) : nullptr;
    s.rel = apply_pin(s.rel, int(k) + 1, s.y[k]);
    s.d = deriv::pin(s.d, int(k) + 1, s.y[k], aux);
    Tuple new_x = x_xJp_yk;
    drop(new_x, k);
    s.x = std::move(new_x);
    drop(s.y, k);
    drop(s.orig, k);
    drop(s.in_I, k);
    return swap_rec(std::move(s));
}

}

auto swap_witness(const WeightedRelation & gamma, const DerivPtr & d,
        const std::vector<int> & I, const std::vector<int> & J,
        const Tuple & x, const Tuple & y,
        const std::function<DerivPtr(Label)> & pin_witness) -> SwapWitness {
    int r = gamma.arity();
    if (int(I.size() + J.size()) != r)
        throw error("swap_witness: I, J must partition the coordinates");
    SwapState s;
    s.rel = gamma;
    s.d = d;
    s.orig.resize(std::size_t(r));
    s.in_I.assign(std::size_t(r), false);
    for (int c = 1; c <= r; ++c)
        s.orig[std::size_t(c - 1)] = c;
    for (int c : I)
        s.in_I.at(std::size_t(c - 1)) = true;
    for (int c : J)
        if (s.in_I.at(std::size_t(c - 1)))
            throw error("swap_witness: I and J overlap");
    s.x = x;
    s.y = y;
    s.pin_witness = &pin_witness;
    if (! gamma.feasible(x) || ! gamma.feasible(y))
        throw error("swap_witness: witness tuples must be feasible");

    auto w = swap_rec(std::move(s));

    Label xi = x[std::size_t(w.i - 1)], xj = x[std::size_t(w.j - 1)];
    Label yi = y[std::size_t(w.i - 1)], yj = y[std::size_t(w.j - 1)];
    auto lhs = w.rel.evaluate({xi, xj}) + w.rel.evaluate({yi, yj});
    auto rhs = w.rel.evaluate({xi, yj}) + w.rel.evaluate({yi, xj});
    if (lhs.is_infinite() || ! (lhs < rhs))
        throw error("swap_witness: extracted relation violates the lemma postcondition");
    return w;
}

}
