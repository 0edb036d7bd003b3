#include <pvcsp/catalog.hpp>
#include <pvcsp/classify_boolean.hpp>
#include <pvcsp/express.hpp>

#include <algorithm>

namespace pvcsp {

auto eight_candidates() -> std::vector<MultimorphismCandidate> {
    return {
        {"<c0>", {cat::c0()}},
        {"<c1>", {cat::c1()}},
        {"<min,min>", {cat::min2(), cat::min2()}},
        {"<max,max>", {cat::max2(), cat::max2()}},
        {"<min,max>", {cat::min2(), cat::max2()}},
        {"<mnrt,mnrt,mnrt>", {cat::mnrt(), cat::mnrt(), cat::mnrt()}},
        {"<mjrt,mjrt,mjrt>", {cat::mjrt(), cat::mjrt(), cat::mjrt()}},
        {"<mjrt,mjrt,mnrt>", {cat::mjrt(), cat::mjrt(), cat::mnrt()}},
    };
}

auto check_eight(const Language & lang) -> std::vector<std::pair<std::string, MmVerdict>> {
    if (lang.domain_size() != 2)
        throw error("check_eight: Boolean domain required");
    std::vector<std::pair<std::string, MmVerdict>> out;
    for (const auto & c : eight_candidates())
        out.emplace_back(c.name, is_multimorphism(c, lang));
    return out;
}

namespace {

// ---- searches over the saturated approximation ----------------------------

// Every scan walks the entries in canonical (arity-then-encoding) order, so
// identical inputs yield identical witnesses.

template <typename Pred>
auto scan(const SaturatedSet & s, Pred && pred) -> std::optional<std::size_t> {
    for (auto idx : s.ordered())
        if (pred(s.entry(idx).rel))
            return idx;
    return std::nullopt;
}

auto is_invariant_under_constant(const WeightedRelation & rho, Label a) -> bool {
    if (! rho.has_feasible())
        return true;
    return rho.feasible(Tuple(std::size_t(rho.arity()), a));
}

// first (lex) pair of feasible tuples whose componentwise f-image is
// infeasible, if any
auto find_poly_violation(const WeightedRelation & rho, const OpTable & f)
        -> std::optional<std::vector<Tuple>> {
    auto feas_tuples = rho.feasible_tuples();
    std::vector<std::size_t> sel(std::size_t(f.arity()), 0);
    if (feas_tuples.empty())
        return std::nullopt;
    while (true) {
        std::vector<Tuple> chosen;
        for (auto i : sel)
            chosen.push_back(feas_tuples[i]);
        if (! rho.feasible(apply_componentwise(f, chosen)))
            return chosen;
        int pos = f.arity() - 1;
        while (pos >= 0 && sel[std::size_t(pos)] + 1 == feas_tuples.size())
            sel[std::size_t(pos--)] = 0;
        if (pos < 0)
            return std::nullopt;
        ++sel[std::size_t(pos)];
    }
}

struct PipelineContext {
    const Language & lang;
    const SaturatedSet & s;
    DerivPtr rho0, rho1, rho_neq;
    DerivPtr gamma0, gamma1;

    auto pin_witness() const -> std::function<DerivPtr(Label)> {
        auto r0 = rho0, r1 = rho1;
        return [r0, r1](Label a) -> DerivPtr {
            auto d = a == 0 ? r0 : r1;
            if (! d)
                throw error("pinning requires a derived constant relation");
            return d;
        };
    }
};

// ---- Lemma on constants ----------------------------------------------------

// Reduce a crisp relation that is not invariant under the constant operation
// c_z to either the opposite constant relation or the disequality relation.
auto reduce_constant_violator(WeightedRelation rho, DerivPtr d, Label z)
        -> std::pair<WeightedRelation, DerivPtr> {
    while (true) {
        int r = rho.arity();
        if (r == 1)
            return {rho, d};  // must be the constant {1-z}

        bool recursed = false;
        for (int i = 1; i <= r && ! recursed; ++i) {
            auto m = apply_minimise(rho, i);
            if (! is_invariant_under_constant(m, z)) {
                rho = std::move(m);
                d = deriv::minimise(d, i);
                recursed = true;
            }
        }
        if (recursed)
            continue;

        // now every tuple that is all-z except one coordinate lies in rho
        if (r >= 3) {
            rho = apply_minimise(apply_eq_restrict(rho, 2), 2);
            d = deriv::minimise(deriv::eq_restrict(d, 2), 2);
            continue;
        }
        // r == 2
        Tuple other(2, Label(1 - z));
        if (rho.feasible(other)) {
            rho = apply_minimise(apply_eq_restrict(rho, 1), 1);
            d = deriv::minimise(deriv::eq_restrict(d, 1), 1);
            continue;
        }
        if (! (rho == cat::rho_neq()))
            throw error("constant reduction did not reach the disequality relation");
        return {rho, d};
    }
}

}

auto derive_constants(const Language & lang, const SaturatedSet & s) -> ConstantsResult {
    ConstantsResult out;
    for (Label z = 0; z <= 1; ++z) {
        auto idx = scan(s, [&](const WeightedRelation & rel) {
            return rel.is_crisp() && rel.has_feasible() && ! is_invariant_under_constant(rel, z);
        });
        if (! idx)
            throw budget_error(std::string("no relation violating <c") + (z ? "1" : "0") +
                    "> found in the saturated set");
        auto [rho, d] = reduce_constant_violator(s.entry(*idx).rel, s.entry(*idx).derivation, z);
        if (rho.arity() == 1) {
            auto expected = z == 0 ? cat::rho1() : cat::rho0();
            if (! (rho == expected))
                throw error("constant reduction produced an unexpected relation");
            (z == 0 ? out.rho1 : out.rho0) = d;
        }
        else {
            out.rho_neq = d;
        }
    }
    if (out.rho_neq && ! (replay(out.rho_neq, lang) == cat::rho_neq()))
        throw error("derived disequality fails to replay");
    if (out.rho0 && ! (replay(out.rho0, lang) == cat::rho0()))
        throw error("derived rho0 fails to replay");
    if (out.rho1 && ! (replay(out.rho1, lang) == cat::rho1()))
        throw error("derived rho1 fails to replay");
    return out;
}

namespace {

// ---- soft constants (gamma0 / gamma1) --------------------------------------

// From a weighted relation violating <min,min> (with min a polymorphism),
// derive gamma1; dually for <max,max> and gamma0.
auto derive_soft_constant_from_minmax(PipelineContext & ctx, bool use_min) -> DerivPtr {
    const auto & op = use_min ? cat::min2() : cat::max2();
    auto pins = ctx.pin_witness();

    auto violation = [&](const WeightedRelation & g) -> std::optional<std::pair<Tuple, Tuple>> {
        auto feas_tuples = g.feasible_tuples();
        for (const auto & x : feas_tuples)
            for (const auto & y : feas_tuples) {
                auto image = apply_componentwise(op, {x, y});
                auto lhs = g.evaluate(x) + g.evaluate(y);
                auto rhs = g.evaluate(image) + g.evaluate(image);
                if (lhs < rhs)
                    return std::make_pair(x, y);
            }
        return std::nullopt;
    };

    auto idx = scan(ctx.s, [&](const WeightedRelation & rel) { return violation(rel).has_value(); });
    if (! idx)
        throw budget_error("no <min,min>/<max,max> violator in the saturated set");
    auto rel = ctx.s.entry(*idx).rel;
    auto d = ctx.s.entry(*idx).derivation;
    auto [x, y] = *violation(rel);

    // normalize the witness so that y is the componentwise image
    auto image = apply_componentwise(op, {x, y});
    if (rel.evaluate(y) < rel.evaluate(x))
        std::swap(x, y);
    y = image;
    if (! (rel.evaluate(x) < rel.evaluate(y)))
        throw error("soft constant: witness normalization failed");

    // pin agreeing coordinates
    for (int i = rel.arity(); i >= 1; --i) {
        if (rel.arity() == 1)
            break;
        if (x[std::size_t(i - 1)] == y[std::size_t(i - 1)]) {
            auto a = x[std::size_t(i - 1)];
            rel = apply_pin(rel, i, a);
            d = deriv::pin(d, i, a, pins(a));
            x.erase(x.begin() + (i - 1));
            y.erase(y.begin() + (i - 1));
        }
    }
    // now x and y differ everywhere: x is all-(1-z), y all-z for min (dual for max)
    while (rel.arity() >= 2) {
        rel = apply_minimise(apply_eq_restrict(rel, 1), 1);
        d = deriv::minimise(deriv::eq_restrict(d, 1), 1);
        x.erase(x.begin());
        y.erase(y.begin());
    }
    // unary with gamma(1-z) < gamma(z) for min (z = 0)
    auto lo = rel.evaluate({use_min ? 1 : 0});
    auto hi = rel.evaluate({use_min ? 0 : 1});
    if (! (lo < hi) || hi.is_infinite())
        throw error("soft constant: unary reduction failed");
    auto dd = deriv::scale_node(deriv::add_const_node(d, -lo.rational()),
            Rat(1) / (hi.rational() - lo.rational()));
    auto expected = use_min ? cat::gamma1() : cat::gamma0();
    if (! (replay(dd, ctx.lang) == expected))
        throw error("soft constant fails to replay");
    return dd;
}

// Minimum-arity relation with two distinct finite values reduces to a soft
// unary; yields both gamma0 and gamma1.
auto derive_soft_unaries(PipelineContext & ctx) -> void {
    if (ctx.gamma0 && ctx.gamma1)
        return;
    auto pins = ctx.pin_witness();
    auto two_values = [&](const WeightedRelation & g) -> std::optional<std::pair<Tuple, Tuple>> {
        auto feas_tuples = g.feasible_tuples();
        for (const auto & x : feas_tuples)
            for (const auto & y : feas_tuples)
                if (g.evaluate(x) != g.evaluate(y))
                    return std::make_pair(x, y);
        return std::nullopt;
    };
    auto idx = scan(ctx.s, [&](const WeightedRelation & rel) { return two_values(rel).has_value(); });
    if (! idx)
        throw budget_error("no weighted relation with two finite values in the saturated set");
    auto rel = ctx.s.entry(*idx).rel;
    auto d = ctx.s.entry(*idx).derivation;
    auto [x, y] = *two_values(rel);

    for (int i = rel.arity(); i >= 1; --i) {
        if (rel.arity() == 1)
            break;
        if (x[std::size_t(i - 1)] == y[std::size_t(i - 1)]) {
            auto a = x[std::size_t(i - 1)];
            rel = apply_pin(rel, i, a);
            d = deriv::pin(d, i, a, pins(a));
            x.erase(x.begin() + (i - 1));
            y.erase(y.begin() + (i - 1));
        }
    }
    while (rel.arity() >= 2) {
        if (x[0] == x[1]) {
            rel = apply_minimise(apply_eq_restrict(rel, 1), 1);
            d = deriv::minimise(deriv::eq_restrict(d, 1), 1);
        }
        else {
            rel = apply_minimise(apply_neq_restrict(rel, 1), 1);
            d = deriv::minimise(deriv::neq_restrict(d, 1, ctx.rho_neq), 1);
        }
        x.erase(x.begin());
        y.erase(y.begin());
    }
    auto v0 = rel.evaluate({0}), v1 = rel.evaluate({1});
    if (v0 == v1 || v0.is_infinite() || v1.is_infinite())
        throw error("soft unary reduction failed");
    DerivPtr g0;
    if (v0 < v1)
        g0 = deriv::scale_node(deriv::add_const_node(d, -v0.rational()),
                Rat(1) / (v1.rational() - v0.rational()));
    else
        g0 = deriv::twist(deriv::scale_node(deriv::add_const_node(d, -v1.rational()),
                Rat(1) / (v0.rational() - v1.rational())), 1, ctx.rho_neq);
    if (! (replay(g0, ctx.lang) == cat::gamma0()))
        throw error("gamma0 fails to replay");
    ctx.gamma0 = g0;
    ctx.gamma1 = deriv::twist(g0, 1, ctx.rho_neq);
    if (! (replay(ctx.gamma1, ctx.lang) == cat::gamma1()))
        throw error("gamma1 fails to replay");
}

// negative-or-zero unary (0, m): from gamma1 scaled/shifted when m <= 0,
// from gamma0 scaled when m > 0
auto unary_with_value(PipelineContext & ctx, const Rat & m) -> DerivPtr {
    if (sgn(m) > 0)
        return deriv::scale_node(ctx.gamma0, m);
    return deriv::add_const_node(deriv::scale_node(ctx.gamma1, -m), m);
}

// gamma' has all four entries finite and gamma'(0,1)+gamma'(1,0) <
// gamma'(0,0)+gamma'(1,1); normalize and add the two unaries to obtain the
// soft disequality relation exactly.
auto gamma_neq_from_binary(PipelineContext & ctx, const WeightedRelation & g, const DerivPtr & gd)
        -> DerivPtr {
    auto A = g.evaluate({0, 0}).rational();
    auto B = g.evaluate({1, 1}).rational();
    auto P = g.evaluate({0, 1}).rational();
    auto Q = g.evaluate({1, 0}).rational();
    Rat denom = A + B - P - Q;
    if (sgn(denom) <= 0)
        throw error("gamma_neq: wrong orientation");
    Rat scale_by = Rat(2) / denom;
    Rat shift_by = 1 - scale_by * A;
    auto normalized = deriv::add_const_node(deriv::scale_node(gd, scale_by), shift_by);
    auto table = replay(normalized, ctx.lang);
    auto result = normalized;
    if (sgn(table.evaluate({1, 0}).rational()) != 0)
        result = deriv::add_unary(result, unary_with_value(ctx, -table.evaluate({1, 0}).rational()), 1);
    if (sgn(table.evaluate({0, 1}).rational()) != 0)
        result = deriv::add_unary(result, unary_with_value(ctx, -table.evaluate({0, 1}).rational()), 2);
    if (! (replay(result, ctx.lang) == cat::gamma_neq()))
        throw error("gamma_neq construction fails to replay");
    return result;
}

// A crisp relation not invariant under min (dually max) reduces to a binary
// relation between the disequality and disequality-plus-one-diagonal.
auto reduce_semilattice_violator(PipelineContext & ctx, bool use_min) -> DerivPtr {
    const auto & op = use_min ? cat::min2() : cat::max2();
    auto pins = ctx.pin_witness();
    auto idx = scan(ctx.s, [&](const WeightedRelation & rel) {
        return rel.is_crisp() && find_poly_violation(rel, op).has_value();
    });
    if (! idx)
        throw budget_error("no crisp min/max violator in the saturated set");
    auto rel = ctx.s.entry(*idx).rel;
    auto d = ctx.s.entry(*idx).derivation;

    while (true) {
        auto witness = find_poly_violation(rel, op);
        if (! witness)
            throw error("semilattice reduction lost its violation");
        auto x = (*witness)[0], y = (*witness)[1];
        int r = rel.arity();

        // pin agreements
        bool pinned = false;
        for (int i = r; i >= 1 && r >= 2; --i)
            if (x[std::size_t(i - 1)] == y[std::size_t(i - 1)]) {
                auto a = x[std::size_t(i - 1)];
                rel = apply_pin(rel, i, a);
                d = deriv::pin(d, i, a, pins(a));
                pinned = true;
                break;
            }
        if (pinned)
            continue;

        // recurse into a violating minimisation when one exists
        bool recursed = false;
        for (int i = 1; i <= r && r >= 2 && ! recursed; ++i) {
            auto m = apply_minimise(rel, i);
            if (find_poly_violation(m, op)) {
                rel = std::move(m);
                d = deriv::minimise(d, i);
                recursed = true;
            }
        }
        if (recursed)
            continue;

        if (r > 2) {
            // all unit tuples (dually their complements) lie in rel; two of
            // them agree at the first coordinate, so pinning there keeps a
            // violation while dropping a coordinate
            Label bg = use_min ? 0 : 1;
            for (int i = 1; i <= r; ++i) {
                auto unit = Tuple(std::size_t(r), bg);
                unit[std::size_t(i - 1)] = 1 - bg;
                if (! rel.feasible(unit))
                    throw error("semilattice reduction: unit tuple missing");
            }
            rel = apply_pin(rel, 1, bg);
            d = deriv::pin(d, 1, bg, pins(bg));
            continue;
        }

        // r == 2: the relation is the disequality possibly with one diagonal
        auto expected_absent = Tuple{use_min ? 0 : 1, use_min ? 0 : 1};
        if (rel.feasible(expected_absent))
            throw error("semilattice reduction: unexpected diagonal tuple");
        if (! rel.feasible({0, 1}) || ! rel.feasible({1, 0}))
            throw error("semilattice reduction: crossed tuples missing");
        return d;
    }
}

}

auto derive_neq(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho0, const DerivPtr & rho1) -> DerivPtr {
    PipelineContext ctx{lang, s, rho0, rho1, nullptr, nullptr, nullptr};
    bool min_pol = std::holds_alternative<PolyHolds>(is_polymorphism(cat::min2(), lang));
    bool max_pol = std::holds_alternative<PolyHolds>(is_polymorphism(cat::max2(), lang));

    DerivPtr result;
    if (! min_pol && ! max_pol) {
        auto vee = reduce_semilattice_violator(ctx, true);
        auto wedge = reduce_semilattice_violator(ctx, false);
        result = deriv::add_binary(vee, wedge, 1);
    }
    else if (! min_pol) {
        ctx.gamma0 = derive_soft_constant_from_minmax(ctx, false);
        auto vee = reduce_semilattice_violator(ctx, true);
        result = deriv::opt_node(deriv::add_unary(deriv::add_unary(vee, ctx.gamma0, 1), ctx.gamma0, 2));
    }
    else if (! max_pol) {
        ctx.gamma1 = derive_soft_constant_from_minmax(ctx, true);
        auto wedge = reduce_semilattice_violator(ctx, false);
        result = deriv::opt_node(deriv::add_unary(deriv::add_unary(wedge, ctx.gamma1, 1), ctx.gamma1, 2));
    }
    else {
        // both are polymorphisms: the <min,max> violation route
        ctx.gamma0 = derive_soft_constant_from_minmax(ctx, false);
        ctx.gamma1 = derive_soft_constant_from_minmax(ctx, true);
        auto pins = ctx.pin_witness();

        MultimorphismCandidate minmax("<min,max>", {cat::min2(), cat::max2()});
        auto violation = [&](const WeightedRelation & g) -> std::optional<std::pair<Tuple, Tuple>> {
            auto feas_tuples = g.feasible_tuples();
            for (const auto & x : feas_tuples)
                for (const auto & y : feas_tuples) {
                    auto mn = apply_componentwise(cat::min2(), {x, y});
                    auto mx = apply_componentwise(cat::max2(), {x, y});
                    if (g.evaluate(x) + g.evaluate(y) < g.evaluate(mn) + g.evaluate(mx))
                        return std::make_pair(x, y);
                }
            return std::nullopt;
        };
        auto idx = scan(s, [&](const WeightedRelation & rel) { return violation(rel).has_value(); });
        if (! idx)
            throw budget_error("no <min,max> violator in the saturated set");
        auto rel = s.entry(*idx).rel;
        auto d = s.entry(*idx).derivation;
        auto [x, y] = *violation(rel);

        for (int i = rel.arity(); i >= 1 && rel.arity() >= 2; --i)
            if (x[std::size_t(i - 1)] == y[std::size_t(i - 1)]) {
                auto a = x[std::size_t(i - 1)];
                rel = apply_pin(rel, i, a);
                d = deriv::pin(d, i, a, pins(a));
                x.erase(x.begin() + (i - 1));
                y.erase(y.begin() + (i - 1));
            }

        WeightedRelation binary = rel;
        DerivPtr binary_d = d;
        if (rel.arity() > 2) {
            std::vector<int> I, J;
            for (int c = 1; c <= rel.arity(); ++c)
                (x[std::size_t(c - 1)] == 0 ? I : J).push_back(c);
            auto w = swap_witness(rel, d, I, J, x, y, pins);
            binary = w.rel;
            binary_d = w.derivation;
        }
        // for arity 2 the violating pair is the off-diagonal one, so
        // gamma(0,1) + gamma(1,0) < gamma(0,0) + gamma(1,1) already holds
        for (Label a = 0; a <= 1; ++a)
            for (Label b = 0; b <= 1; ++b)
                if (! binary.feasible({a, b}))
                    throw error("<min,max> witness is not totally finite");
        auto gneq = gamma_neq_from_binary(ctx, binary, binary_d);
        result = deriv::opt_node(gneq);
    }

    if (! (replay(result, lang) == cat::rho_neq()))
        throw error("derived disequality fails to replay");
    return result;
}

auto derive_consts_from_neq(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho_neq) -> std::pair<DerivPtr, DerivPtr> {
    auto violation = [&](const WeightedRelation & g) -> std::optional<Tuple> {
        for (const auto & x : g.feasible_tuples())
            if (g.evaluate(x) != g.evaluate(tuple_negate(x)))
                return x;
        return std::nullopt;
    };
    auto idx = scan(s, [&](const WeightedRelation & rel) { return violation(rel).has_value(); });
    if (! idx)
        throw budget_error("no <neg> violator in the saturated set");
    auto rel = s.entry(*idx).rel;
    auto d = s.entry(*idx).derivation;
    auto x = *violation(rel);

    while (rel.arity() >= 2) {
        if (x[0] == x[1]) {
            rel = apply_minimise(apply_eq_restrict(rel, 1), 1);
            d = deriv::minimise(deriv::eq_restrict(d, 1), 1);
        }
        else {
            rel = apply_minimise(apply_neq_restrict(rel, 1), 1);
            d = deriv::minimise(deriv::neq_restrict(d, 1, rho_neq), 1);
        }
        x.erase(x.begin());
    }
    auto v0 = rel.evaluate({0}), v1 = rel.evaluate({1});
    if (v0 == v1)
        throw error("negation reduction lost its violation");
    Label a = v0 < v1 ? 0 : 1;
    auto first = deriv::opt_node(d);
    auto second = deriv::opt_node(deriv::twist(d, 1, rho_neq));
    auto rho_a = a == 0 ? first : second;
    auto rho_b = a == 0 ? second : first;
    if (! (replay(rho_a, lang) == cat::rho0()) || ! (replay(rho_b, lang) == cat::rho1()))
        throw error("constants from negation fail to replay");
    return {rho_a, rho_b};
}

namespace {

// ---- 1-in-3 synthesis ------------------------------------------------------

// Reduce a crisp relation not invariant under the minority operation to the
// binary relation {(0,0),(0,1),(1,0)}.
auto reduce_minority_violator(PipelineContext & ctx) -> DerivPtr {
    auto pins = ctx.pin_witness();
    auto idx = scan(ctx.s, [&](const WeightedRelation & rel) {
        return rel.is_crisp() && find_poly_violation(rel, cat::mnrt()).has_value();
    });
    if (! idx)
        throw budget_error("no minority violator in the saturated set");
    auto rel = ctx.s.entry(*idx).rel;
    auto d = ctx.s.entry(*idx).derivation;

    while (true) {
        auto witness = find_poly_violation(rel, cat::mnrt());
        if (! witness)
            throw error("minority reduction lost its violation");
        auto triple = *witness;
        int r = rel.arity();

        if (r == 2) {
            // exactly three tuples, missing the minority image; twist the
            // missing tuple onto (1,1)
            auto missing = apply_componentwise(cat::mnrt(), triple);
            for (int i = 1; i <= 2; ++i)
                if (missing[std::size_t(i - 1)] == 0) {
                    rel = apply_twist(rel, i);
                    d = deriv::twist(d, i, ctx.rho_neq);
                }
            auto expected = WeightedRelation::crisp(2, 2, {{0, 0}, {0, 1}, {1, 0}});
            if (! (rel == expected))
                throw error("minority reduction did not reach the nand relation");
            return d;
        }

        // pin a coordinate where the triple agrees
        bool reduced = false;
        for (int i = 1; i <= r && ! reduced; ++i) {
            Label a = triple[0][std::size_t(i - 1)];
            if (triple[1][std::size_t(i - 1)] == a && triple[2][std::size_t(i - 1)] == a) {
                rel = apply_pin(rel, i, a);
                d = deriv::pin(d, i, a, pins(a));
                reduced = true;
            }
        }
        if (reduced)
            continue;

        // normalize the image to the zero tuple by twisting
        auto image = apply_componentwise(cat::mnrt(), triple);
        for (int i = 1; i <= r; ++i)
            if (image[std::size_t(i - 1)] == 1) {
                rel = apply_twist(rel, i);
                d = deriv::twist(d, i, ctx.rho_neq);
            }

        // recurse into non-invariant minimisations
        for (int i = 1; i <= r && ! reduced; ++i) {
            auto m = apply_minimise(rel, i);
            if (find_poly_violation(m, cat::mnrt())) {
                rel = std::move(m);
                d = deriv::minimise(d, i);
                reduced = true;
            }
        }
        if (reduced)
            continue;

        // all unit tuples lie in rel; find the tuple with the fewest
        // (and even) number of ones
        for (int i = 1; i <= r; ++i)
            if (! rel.feasible(unit_tuple(r, i)))
                throw error("minority reduction: unit tuple missing");
        auto count_ones = [](const Tuple & t) {
            int c = 0;
            for (Label v : t)
                c += v;
            return c;
        };
        std::optional<Tuple> w;
        for (const auto & t : rel.feasible_tuples())
            if (count_ones(t) % 2 == 0 && (! w || count_ones(t) < count_ones(*w)))
                w = t;
        if (! w)
            throw error("minority reduction: no even tuple");
        if (*w != ones(r)) {
            int i = -1, j = -1, k = -1;
            for (int c = 1; c <= r; ++c) {
                if ((*w)[std::size_t(c - 1)] == 1) {
                    if (i == -1)
                        i = c;
                    else if (j == -1)
                        j = c;
                }
                else if (k == -1)
                    k = c;
            }
            // pin at k where w, e_i, e_j agree; their minority image drops
            // two ones and cannot lie in rel
            rel = apply_pin(rel, k, 0);
            d = deriv::pin(d, k, 0, pins(0));
            continue;
        }
        // w is the all-ones tuple: =-restrict at the first coordinate
        rel = apply_minimise(apply_eq_restrict(rel, 1), 1);
        d = deriv::minimise(deriv::eq_restrict(d, 1), 1);
    }
}

// Reduce a crisp relation not invariant under the majority operation to a
// ternary relation containing the unit tuples but not the zero tuple.
auto reduce_majority_violator(PipelineContext & ctx) -> DerivPtr {
    auto pins = ctx.pin_witness();
    auto idx = scan(ctx.s, [&](const WeightedRelation & rel) {
        return rel.is_crisp() && find_poly_violation(rel, cat::mjrt()).has_value();
    });
    if (! idx)
        throw budget_error("no majority violator in the saturated set");
    auto rel = ctx.s.entry(*idx).rel;
    auto d = ctx.s.entry(*idx).derivation;

    while (true) {
        auto witness = find_poly_violation(rel, cat::mjrt());
        if (! witness)
            throw error("majority reduction lost its violation");
        auto triple = *witness;
        int r = rel.arity();
        if (r < 3)
            throw error("majority violator below arity 3");

        bool reduced = false;
        for (int i = 1; i <= r && ! reduced; ++i) {
            Label a = triple[0][std::size_t(i - 1)];
            if (triple[1][std::size_t(i - 1)] == a && triple[2][std::size_t(i - 1)] == a) {
                rel = apply_pin(rel, i, a);
                d = deriv::pin(d, i, a, pins(a));
                reduced = true;
            }
        }
        if (reduced)
            continue;

        auto image = apply_componentwise(cat::mjrt(), triple);
        for (int i = 1; i <= r; ++i)
            if (image[std::size_t(i - 1)] == 1) {
                rel = apply_twist(rel, i);
                d = deriv::twist(d, i, ctx.rho_neq);
            }

        for (int i = 1; i <= r && ! reduced; ++i) {
            auto m = apply_minimise(rel, i);
            if (find_poly_violation(m, cat::mjrt())) {
                rel = std::move(m);
                d = deriv::minimise(d, i);
                reduced = true;
            }
        }
        if (reduced)
            continue;

        if (r == 3) {
            if (rel.feasible({0, 0, 0}))
                throw error("majority reduction: zero tuple unexpectedly present");
            for (int i = 1; i <= 3; ++i)
                if (! rel.feasible(unit_tuple(3, i)))
                    throw error("majority reduction: unit tuple missing");
            return d;
        }
        // r >= 4: the unit tuples agree at coordinate 4 with their image
        for (int i = 1; i <= r; ++i)
            if (! rel.feasible(unit_tuple(r, i)))
                throw error("majority reduction: unit tuple missing");
        rel = apply_pin(rel, 4, 0);
        d = deriv::pin(d, 4, 0, pins(0));
    }
}

}

auto derive_one_in_three(const Language & lang, const SaturatedSet & s,
        const DerivPtr & rho0, const DerivPtr & rho1, const DerivPtr & rho_neq) -> DerivPtr {
    PipelineContext ctx{lang, s, rho0, rho1, rho_neq, nullptr, nullptr};
    bool mnrt_pol = std::holds_alternative<PolyHolds>(is_polymorphism(cat::mnrt(), lang));
    bool mjrt_pol = std::holds_alternative<PolyHolds>(is_polymorphism(cat::mjrt(), lang));

    DerivPtr result;
    if (! mnrt_pol && ! mjrt_pol) {
        auto up = reduce_minority_violator(ctx);
        auto one3 = reduce_majority_violator(ctx);
        result = deriv::add_binary(deriv::add_binary(deriv::add_binary(one3, up, 1), up, 2), up, 3);
    }
    else if (! mnrt_pol) {
        auto up = reduce_minority_violator(ctx);
        derive_soft_unaries(ctx);
        auto tri = deriv::add_binary(deriv::add_binary(deriv::add_binary(
                deriv::top(2, 3), up, 1), up, 2), up, 3);
        result = deriv::opt_node(deriv::add_unary(deriv::add_unary(deriv::add_unary(
                tri, ctx.gamma1, 1), ctx.gamma1, 2), ctx.gamma1, 3));
    }
    else if (! mjrt_pol) {
        auto one3 = reduce_majority_violator(ctx);
        derive_soft_unaries(ctx);
        result = deriv::opt_node(deriv::add_unary(deriv::add_unary(deriv::add_unary(
                one3, ctx.gamma0, 1), ctx.gamma0, 2), ctx.gamma0, 3));
    }
    else {
        // both polymorphisms: find an <mjrt,mjrt,mnrt> equality violation
        derive_soft_unaries(ctx);
        auto pins = ctx.pin_witness();
        auto violation = [&](const WeightedRelation & g)
                -> std::optional<std::vector<Tuple>> {
            auto feas_tuples = g.feasible_tuples();
            for (const auto & x : feas_tuples)
                for (const auto & y : feas_tuples)
                    for (const auto & z : feas_tuples) {
                        auto mj = apply_componentwise(cat::mjrt(), {x, y, z});
                        auto mn = apply_componentwise(cat::mnrt(), {x, y, z});
                        auto lhs = g.evaluate(mj) + g.evaluate(mj) + g.evaluate(mn);
                        auto rhs = g.evaluate(x) + g.evaluate(y) + g.evaluate(z);
                        if (lhs != rhs)
                            return std::vector<Tuple>{x, y, z};
                    }
            return std::nullopt;
        };
        auto idx = scan(s, [&](const WeightedRelation & rel) { return violation(rel).has_value(); });
        if (! idx)
            throw budget_error("no <mjrt,mjrt,mnrt> equality violator in the saturated set");
        auto rel = s.entry(*idx).rel;
        auto d = s.entry(*idx).derivation;

        Tuple x, y, z;
        while (true) {
            auto w = violation(rel);
            if (! w)
                throw error("mjn reduction lost its violation");
            x = (*w)[0];
            y = (*w)[1];
            z = (*w)[2];
            bool reduced = false;
            for (int i = 1; i <= rel.arity() && ! reduced && rel.arity() >= 2; ++i) {
                Label a = x[std::size_t(i - 1)];
                if (y[std::size_t(i - 1)] == a && z[std::size_t(i - 1)] == a) {
                    rel = apply_pin(rel, i, a);
                    d = deriv::pin(d, i, a, pins(a));
                    reduced = true;
                }
            }
            if (! reduced)
                break;
        }
        // twist so that the majority image is the zero tuple
        auto image = apply_componentwise(cat::mjrt(), {x, y, z});
        for (int i = 1; i <= rel.arity(); ++i)
            if (image[std::size_t(i - 1)] == 1) {
                rel = apply_twist(rel, i);
                d = deriv::twist(d, i, ctx.rho_neq);
                x[std::size_t(i - 1)] ^= 1;
                y[std::size_t(i - 1)] ^= 1;
                z[std::size_t(i - 1)] ^= 1;
            }
        // reorder so that z is not the zero tuple
        if (z == zeros(rel.arity()))
            std::swap(z, x == zeros(rel.arity()) ? y : x);

        auto zbar = tuple_negate(z);
        auto v_z = rel.evaluate(z) + rel.evaluate(zbar);
        auto v_c = rel.evaluate(zeros(rel.arity())) + rel.evaluate(ones(rel.arity()));
        if (v_z == v_c)
            throw error("mjn reduction: exchange disequality vanished");

        std::vector<int> I, J;
        for (int c = 1; c <= rel.arity(); ++c)
            (z[std::size_t(c - 1)] == 0 ? I : J).push_back(c);
        Tuple u = z, v = zbar;
        if (! (v_z < v_c)) {
            u = zeros(rel.arity());
            v = ones(rel.arity());
        }
        auto w = swap_witness(rel, d, I, J, u, v, pins);

        WeightedRelation binary = w.rel;
        DerivPtr binary_d = w.derivation;
        // orient toward gamma'(0,1)+gamma'(1,0) < gamma'(0,0)+gamma'(1,1)
        auto val = [&](Label a, Label b) { return binary.evaluate({a, b}); };
        if (! (val(0, 1) + val(1, 0) < val(0, 0) + val(1, 1))) {
            binary = apply_twist(binary, 1);
            binary_d = deriv::twist(binary_d, 1, ctx.rho_neq);
        }
        for (Label a = 0; a <= 1; ++a)
            for (Label b = 0; b <= 1; ++b)
                if (! binary.feasible({a, b}))
                    throw error("mjn witness is not totally finite");
        auto gneq = gamma_neq_from_binary(ctx, binary, binary_d);
        auto tri = deriv::add_binary(deriv::add_binary(deriv::add_binary(
                deriv::top(2, 3), gneq, 1), gneq, 2), gneq, 3);
        result = deriv::opt_node(deriv::add_unary(deriv::add_unary(deriv::add_unary(
                tri, ctx.gamma0, 1), ctx.gamma0, 2), ctx.gamma0, 3));
    }

    if (! (replay(result, lang) == cat::rho_one_in_three()))
        throw error("derived 1-in-3 relation fails to replay");
    return result;
}

auto classify_boolean(const Language & lang, const SaturationBudget & budget) -> BooleanVerdict {
    if (lang.domain_size() != 2)
        throw error("classify_boolean: Boolean domain required");
    try {
        std::vector<std::string> holding;
        std::optional<MultimorphismCandidate> first;
        for (const auto & c : eight_candidates())
            if (holds(is_multimorphism(c, lang))) {
                holding.push_back(c.name);
                if (! first)
                    first = c;
            }
        if (first)
            return BoolTractable{std::move(holding), std::move(*first)};
        if (holds(is_multimorphism(MultimorphismCandidate("<neg>", {cat::neg()}), lang)))
            return BoolOpenSelfComplementary{};

        auto s = saturate(lang, budget, false);
        auto consts = derive_constants(lang, s);
        DerivPtr rho0 = consts.rho0, rho1 = consts.rho1, rho_neq = consts.rho_neq;
        if (rho_neq) {
            auto [r0, r1] = derive_consts_from_neq(lang, s, rho_neq);
            rho0 = r0;
            rho1 = r1;
        }
        else {
            rho_neq = derive_neq(lang, s, rho0, rho1);
        }
        auto one3 = derive_one_in_three(lang, s, rho0, rho1, rho_neq);

        if (! (replay(rho0, lang) == cat::rho0()) || ! (replay(rho1, lang) == cat::rho1()) ||
                ! (replay(rho_neq, lang) == cat::rho_neq()) ||
                ! (replay(one3, lang) == cat::rho_one_in_three()))
            return BoolBudgetExhausted{"final verification failed"};
        return BoolPlanarlyIntractable{rho0, rho1, rho_neq, one3};
    }
    catch (const budget_error & e) {
        return BoolBudgetExhausted{e.what()};
    }
}

auto classify_boolean(const Language & lang) -> BooleanVerdict {
    return classify_boolean(lang, default_budget(lang));
}

}
