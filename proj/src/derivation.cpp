#include <pvcsp/catalog.hpp>
#include <pvcsp/derivation.hpp>
#include <pvcsp/express.hpp>

#include <algorithm>

namespace pvcsp {

auto dkind_name(DKind k) -> const char * {
    switch (k) {
        case DKind::Base: return "Base";
        case DKind::Unary: return "Unary";
        case DKind::Equality: return "Equality";
        case DKind::Top: return "Top";
        case DKind::AddUnary: return "AddUnary";
        case DKind::AddBinary: return "AddBinary";
        case DKind::Minimise: return "Minimise";
        case DKind::Join: return "Join";
        case DKind::Fan: return "Fan";
        case DKind::RestrictDomain: return "RestrictDomain";
        case DKind::Pin: return "Pin";
        case DKind::EqRestrict: return "EqRestrict";
        case DKind::NeqRestrict: return "NeqRestrict";
        case DKind::Twist: return "Twist";
        case DKind::Opt: return "Opt";
        case DKind::Feas: return "Feas";
        case DKind::Scale: return "Scale";
        case DKind::AddConst: return "AddConst";
    }
    throw error("unknown derivation kind");
}

auto dkind_from_name(const std::string & s) -> DKind {
    for (int k = 0; k <= int(DKind::AddConst); ++k)
        if (s == dkind_name(DKind(k)))
            return DKind(k);
    throw error("unknown derivation kind: " + s);
}

namespace deriv {

namespace {

auto make(Derivation d) -> DerivPtr {
    return std::make_shared<const Derivation>(std::move(d));
}

}

auto base(const std::string & name) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Base;
    d.base_name = name;
    return make(std::move(d));
}

auto unary(WeightedRelation table) -> DerivPtr {
    if (table.arity() != 1)
        throw error("Unary derivation leaf must be unary");
    Derivation d;
    d.kind = DKind::Unary;
    d.table = std::move(table);
    return make(std::move(d));
}

auto equality(int domain_size) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Equality;
    d.domain_size = domain_size;
    return make(std::move(d));
}

auto top(int domain_size, int arity) -> DerivPtr {
    if (arity < 2)
        throw error("Top derivation requires arity >= 2");
    Derivation d;
    d.kind = DKind::Top;
    d.domain_size = domain_size;
    d.arity = arity;
    return make(std::move(d));
}

auto add_unary(DerivPtr child, DerivPtr mu, int coord) -> DerivPtr {
    Derivation d;
    d.kind = DKind::AddUnary;
    d.child = std::move(child);
    d.aux = std::move(mu);
    d.coord = coord;
    return make(std::move(d));
}

auto add_binary(DerivPtr child, DerivPtr beta, int coord) -> DerivPtr {
    Derivation d;
    d.kind = DKind::AddBinary;
    d.child = std::move(child);
    d.aux = std::move(beta);
    d.coord = coord;
    return make(std::move(d));
}

auto minimise(DerivPtr child, int coord) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Minimise;
    d.child = std::move(child);
    d.coord = coord;
    return make(std::move(d));
}

auto join(DerivPtr a, DerivPtr b, bool flip1, bool flip2) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Join;
    d.children = {std::move(a), std::move(b)};
    d.flips = {flip1, flip2};
    return make(std::move(d));
}

auto fan(std::vector<DerivPtr> children, std::vector<bool> flips) -> DerivPtr {
    if (children.size() < 2 || children.size() != flips.size())
        throw error("Fan derivation needs at least two children with flips");
    Derivation d;
    d.kind = DKind::Fan;
    d.children = std::move(children);
    d.flips = std::move(flips);
    return make(std::move(d));
}

auto restrict_domain(DerivPtr child, int coord, std::vector<Label> subdomain, DerivPtr aux) -> DerivPtr {
    Derivation d;
    d.kind = DKind::RestrictDomain;
    d.child = std::move(child);
    d.coord = coord;
    d.subdomain = std::move(subdomain);
    d.aux = std::move(aux);
    return make(std::move(d));
}

auto pin(DerivPtr child, int coord, Label a, DerivPtr aux) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Pin;
    d.child = std::move(child);
    d.coord = coord;
    d.label = a;
    d.aux = std::move(aux);
    return make(std::move(d));
}

auto eq_restrict(DerivPtr child, int coord) -> DerivPtr {
    Derivation d;
    d.kind = DKind::EqRestrict;
    d.child = std::move(child);
    d.coord = coord;
    return make(std::move(d));
}

auto neq_restrict(DerivPtr child, int coord, DerivPtr neq) -> DerivPtr {
    if (! neq)
        throw error("NeqRestrict requires a derivation of the disequality relation");
    Derivation d;
    d.kind = DKind::NeqRestrict;
    d.child = std::move(child);
    d.coord = coord;
    d.aux = std::move(neq);
    return make(std::move(d));
}

auto twist(DerivPtr child, int coord, DerivPtr neq) -> DerivPtr {
    if (! neq)
        throw error("Twist requires a derivation of the disequality relation");
    Derivation d;
    d.kind = DKind::Twist;
    d.child = std::move(child);
    d.coord = coord;
    d.aux = std::move(neq);
    return make(std::move(d));
}

auto opt_node(DerivPtr child) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Opt;
    d.child = std::move(child);
    return make(std::move(d));
}

auto feas_node(DerivPtr child) -> DerivPtr {
    Derivation d;
    d.kind = DKind::Feas;
    d.child = std::move(child);
    return make(std::move(d));
}

auto scale_node(DerivPtr child, Rat c) -> DerivPtr {
    if (sgn(c) < 0)
        throw error("Scale derivation: nonnegative constant required");
    if (c == 1)
        return child;
    Derivation d;
    d.kind = DKind::Scale;
    d.child = std::move(child);
    d.constant = std::move(c);
    return make(std::move(d));
}

auto add_const_node(DerivPtr child, Rat c) -> DerivPtr {
    if (sgn(c) == 0)
        return child;
    Derivation d;
    d.kind = DKind::AddConst;
    d.child = std::move(child);
    d.constant = std::move(c);
    return make(std::move(d));
}

auto transpose(DerivPtr child, int domain_size) -> DerivPtr {
    // gamma'(x, y) = min_z gamma(z, x) + eq(z, y) = gamma(y, x)
    return join(std::move(child), equality(domain_size), true, false);
}

}

auto replay(const DerivPtr & d, const Language & base) -> WeightedRelation {
    if (! d)
        throw error("replay: null derivation");
    switch (d->kind) {
        case DKind::Base:
            return base.find(d->base_name);
        case DKind::Unary:
            return *d->table;
        case DKind::Equality:
            return cat::rho_eq(d->domain_size);
        case DKind::Top:
            return WeightedRelation(d->domain_size, d->arity);
        case DKind::AddUnary:
            return apply_add_unary(replay(d->child, base), replay(d->aux, base), d->coord);
        case DKind::AddBinary:
            return apply_add_binary(replay(d->child, base), replay(d->aux, base), d->coord);
        case DKind::Minimise:
            return apply_minimise(replay(d->child, base), d->coord);
        case DKind::Join:
            return apply_join(replay(d->children.at(0), base), replay(d->children.at(1), base),
                    d->flips.at(0), d->flips.at(1));
        case DKind::Fan: {
            std::vector<WeightedRelation> gs;
            for (const auto & c : d->children)
                gs.push_back(replay(c, base));
            return apply_fan(gs, d->flips);
        }
        case DKind::RestrictDomain:
            return apply_domain_restriction(replay(d->child, base), d->coord, d->subdomain);
        case DKind::Pin:
            return apply_pin(replay(d->child, base), d->coord, d->label);
        case DKind::EqRestrict:
            return apply_eq_restrict(replay(d->child, base), d->coord);
        case DKind::NeqRestrict:
            return apply_neq_restrict(replay(d->child, base), d->coord);
        case DKind::Twist:
            return apply_twist(replay(d->child, base), d->coord);
        case DKind::Opt:
            return opt(replay(d->child, base));
        case DKind::Feas:
            return feas(replay(d->child, base));
        case DKind::Scale:
            return scale(replay(d->child, base), d->constant);
        case DKind::AddConst:
            return add_constant(replay(d->child, base), d->constant);
    }
    throw error("replay: unknown derivation kind");
}

auto derivation_depth(const DerivPtr & d) -> int {
    if (! d)
        return 0;
    int sub = 0;
    sub = std::max(sub, derivation_depth(d->child));
    sub = std::max(sub, derivation_depth(d->aux));
    for (const auto & c : d->children)
        sub = std::max(sub, derivation_depth(c));
    return 1 + sub;
}

auto encode_derivation(const DerivPtr & d) -> std::string {
    if (! d)
        return "";
    std::string s = dkind_name(d->kind);
    s += '(';
    switch (d->kind) {
        case DKind::Base: s += d->base_name; break;
        case DKind::Unary: s += d->table->encode(); break;
        case DKind::Equality: s += std::to_string(d->domain_size); break;
        case DKind::Top:
            s += std::to_string(d->domain_size) + "," + std::to_string(d->arity);
            break;
        default: break;
    }
    if (d->child)
        s += encode_derivation(d->child);
    for (const auto & c : d->children) {
        s += encode_derivation(c);
        s += ';';
    }
    for (bool f : d->flips)
        s += f ? 'T' : 'F';
    if (d->aux) {
        s += '|';
        s += encode_derivation(d->aux);
    }
    if (d->coord)
        s += "@" + std::to_string(d->coord);
    if (d->kind == DKind::Pin)
        s += "=" + std::to_string(d->label);
    if (d->kind == DKind::RestrictDomain) {
        s += "{";
        for (Label a : d->subdomain)
            s += std::to_string(a) + ",";
        s += "}";
    }
    if (d->kind == DKind::Scale || d->kind == DKind::AddConst)
        s += rat_to_string(d->constant);
    s += ')';
    return s;
}

auto uses_free_unary(const DerivPtr & d) -> bool {
    if (! d)
        return false;
    if (d->kind == DKind::Unary)
        return true;
    if (uses_free_unary(d->child) || uses_free_unary(d->aux))
        return true;
    for (const auto & c : d->children)
        if (uses_free_unary(c))
            return true;
    return false;
}

}
