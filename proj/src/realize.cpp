#include <pvcsp/catalog.hpp>
#include <pvcsp/express.hpp>
#include <pvcsp/realize.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace pvcsp {

auto pi_v(const ExpressibleQuery & q, std::uint64_t cap) -> WeightedRelation {
    const auto & inst = q.instance;
    auto report = validate_instance(inst);
    if (! report.ok())
        throw error("pi_v: invalid instance: " + report.violations.front());
    if (q.v.empty())
        throw error("pi_v: empty variable tuple");
    auto faces = trace_faces(inst.graph);
    for (const auto & c : inst.constraints)
        if (face_of_dart(faces, c.anchor_dart) == inst.outer_face)
            throw error("pi_v: constraint on the outer face");

    // outer walk must read v_r v_{r-1} ... v_1 up to rotation
    const auto & outer = faces[std::size_t(inst.outer_face)].vertex_walk;
    int r = int(q.v.size());
    if (int(outer.size()) != r)
        throw error("pi_v: outer walk length does not match |v|");
    std::vector<int> expected(q.v.rbegin(), q.v.rend());
    bool match = false;
    for (int o = 0; o < r && ! match; ++o) {
        bool ok = true;
        for (int s = 0; s < r && ok; ++s)
            ok = outer[std::size_t((o + s) % r)] == expected[std::size_t(s)];
        match = ok;
    }
    if (! match)
        throw error("pi_v: outer walk does not match the variable tuple");

    int n = inst.graph.vertex_count();
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) {
        count *= std::uint64_t(inst.domain_size);
        if (count > cap)
            throw budget_error("pi_v: |D|^n exceeds the brute-force cap");
    }

    // constraints become evaluable once the deepest vertex of their scope
    // is assigned; infeasible partial assignments prune the whole subtree
    std::vector<std::vector<std::size_t>> ready(std::size_t(n) + 1);
    std::vector<std::pair<const WeightedRelation *, Rat>> rels;
    std::vector<std::vector<int>> scopes;
    for (const auto & c : inst.constraints) {
        const auto & face = faces[std::size_t(face_of_dart(faces, c.anchor_dart))];
        rels.emplace_back(&inst.relation_of(c), c.weight);
        scopes.push_back(walk_from_anchor(inst.graph, face, c.anchor_dart));
        int deepest = *std::max_element(scopes.back().begin(), scopes.back().end());
        ready[std::size_t(deepest) + 1].push_back(rels.size() - 1);
    }

    auto result = WeightedRelation::empty(inst.domain_size, r);
    Assignment s(std::size_t(n), 0);
    Tuple boundary(std::size_t(r), 0), scratch;
    std::vector<ExtValue> partial(std::size_t(n) + 1, ExtValue(0));
    std::function<void(int)> search = [&](int depth) {
        if (depth == n) {
            for (int i = 0; i < r; ++i)
                boundary[std::size_t(i)] = s[std::size_t(q.v[std::size_t(i)])];
            auto idx = tuple_index(boundary, inst.domain_size);
            if (partial[std::size_t(n)] < result[idx])
                result.set(idx, partial[std::size_t(n)]);
            return;
        }
        for (Label a = 0; a < inst.domain_size; ++a) {
            s[std::size_t(depth)] = a;
            auto total = partial[std::size_t(depth)];
            for (auto ci : ready[std::size_t(depth) + 1]) {
                scratch.clear();
                for (int vtx : scopes[ci])
                    scratch.push_back(s[std::size_t(vtx)]);
                total += rels[ci].first->evaluate(scratch).scaled(rels[ci].second);
                if (total.is_infinite())
                    break;
            }
            if (total.is_infinite())
                continue;
            partial[std::size_t(depth) + 1] = std::move(total);
            search(depth + 1);
        }
    };
    search(0);
    return result;
}

namespace {

// Mutable gadget under construction: twin(d) = d ^ 1; sigma = next dart
// clockwise around the same vertex. The outer walk list is kept aligned so
// that tail(outer[t]) = vtuple[r-1-t].
struct GConstraint {
    std::string name_hint;
    WeightedRelation table;
    Rat weight;
    int anchor;
    std::vector<int> slots;
};

struct Slot {
    Rat gap;            // second-min minus min of the replayed child table
    bool has_gap;
    Rat mu_true;        // min finite value of the replayed child table
    Rat child_shift;    // shift of the child gadget at slot creation
    std::vector<int> children;  // immediately nested slots
};

struct Gadget {
    int domain_size;
    int n = 0;
    std::vector<int> dart_vertex;
    std::vector<int> sigma;
    std::vector<GConstraint> constraints;
    std::vector<int> outer_walk;
    std::vector<int> vtuple;
    Rat shift;
    std::vector<Slot> slots;
    std::vector<int> top_slots;

    auto dart_count() const -> int { return int(sigma.size()); }
    auto twin(int d) const -> int { return d ^ 1; }
    auto next_on_face(int d) const -> int { return sigma[std::size_t(twin(d))]; }
    auto arity() const -> int { return int(vtuple.size()); }

    auto new_dart(int vertex) -> int {
        dart_vertex.push_back(vertex);
        sigma.push_back(-1);
        return int(sigma.size()) - 1;
    }
};

auto verify_gadget(const Gadget & g, const char * where) -> void {
    // sigma is a permutation whose orbits are exactly the per-vertex dart sets
    std::vector<int> seen(g.sigma.size(), 0);
    for (int d = 0; d < g.dart_count(); ++d) {
        int s = g.sigma[std::size_t(d)];
        if (s < 0 || s >= g.dart_count() || g.dart_vertex[std::size_t(s)] != g.dart_vertex[std::size_t(d)])
            throw error(std::string("gadget corrupt (sigma) after ") + where);
        seen[std::size_t(s)]++;
    }
    for (int c : seen)
        if (c != 1)
            throw error(std::string("gadget corrupt (sigma not a permutation) after ") + where);
    {
        std::vector<bool> visited(g.sigma.size(), false);
        std::vector<bool> vertex_done(std::size_t(g.n), false);
        for (int d = 0; d < g.dart_count(); ++d) {
            if (visited[std::size_t(d)])
                continue;
            int v = g.dart_vertex[std::size_t(d)];
            if (vertex_done[std::size_t(v)])
                throw error(std::string("gadget corrupt (split rotation) after ") + where);
            vertex_done[std::size_t(v)] = true;
            int cur = d;
            do {
                visited[std::size_t(cur)] = true;
                cur = g.sigma[std::size_t(cur)];
            } while (cur != d);
        }
    }
    // the outer walk is a face and matches the variable tuple
    int r = g.arity();
    if (int(g.outer_walk.size()) != r)
        throw error(std::string("gadget corrupt (walk length) after ") + where);
    for (int t = 0; t < r; ++t) {
        int d = g.outer_walk[std::size_t(t)];
        if (g.dart_vertex[std::size_t(d)] != g.vtuple[std::size_t(r - 1 - t)])
            throw error(std::string("gadget corrupt (walk tails) after ") + where);
        if (g.next_on_face(d) != g.outer_walk[std::size_t((t + 1) % r)])
            throw error(std::string("gadget corrupt (walk successor) after ") + where);
    }
}

// --- frames ---------------------------------------------------------------

auto frame_cycle(int domain_size, int r) -> Gadget {
    Gadget g;
    g.domain_size = domain_size;
    if (r == 1) {
        g.n = 1;
        g.dart_vertex = {0, 0};
        g.sigma = {1, 0};
        g.outer_walk = {1};
        g.vtuple = {0};
        return g;
    }
    g.n = r;
    for (int t = 0; t < r; ++t) {
        g.dart_vertex.push_back(t);                  // dart 2t leaves v_t
        g.dart_vertex.push_back((t + 1) % r);        // dart 2t+1 at v_{t+1}
    }
    g.sigma.assign(std::size_t(2 * r), -1);
    for (int t = 0; t < r; ++t) {
        int out = 2 * t;
        int in = 2 * ((t - 1 + r) % r) + 1;
        g.sigma[std::size_t(out)] = in;   // rotation at v_t: [out, in]
        g.sigma[std::size_t(in)] = out;
    }
    for (int t = 0; t < r; ++t)
        g.vtuple.push_back(t);
    // outer face: odd darts in descending vertex order
    for (int t = r - 2; t >= 0; --t)
        g.outer_walk.push_back(2 * t + 1);
    g.outer_walk.push_back(2 * r - 1);
    return g;
}

auto frame_inner_face(const Gadget & g) -> std::vector<int> {
    // the constraint face of a cycle frame, anchored at coordinate 0
    int r = g.arity();
    std::vector<int> f;
    if (r == 1)
        return {0};
    for (int t = 0; t < r; ++t)
        f.push_back(2 * t);
    return f;
}

auto frame_equality(int domain_size) -> Gadget {
    Gadget g;
    g.domain_size = domain_size;
    g.n = 1;
    g.dart_vertex = {0, 0, 0, 0};
    g.sigma = {1, 2, 3, 0};
    g.outer_walk = {0, 2};
    g.vtuple = {0, 0};
    return g;
}

struct FanFrame {
    Gadget g;
    std::vector<std::vector<int>> lens;  // lens_t anchored for scope (y_t, z)
};

auto frame_fan(int domain_size, int k) -> FanFrame {
    // rim vertices y_0..y_{k-1}, center z = k; spokes in parallel pairs with
    // a lens between them; rim edges bound the outer face
    FanFrame f;
    auto & g = f.g;
    g.domain_size = domain_size;
    g.n = k + 1;
    g.dart_vertex.assign(std::size_t(4 * k + 2 * k), -1);
    for (int t = 0; t < k; ++t) {
        g.dart_vertex[std::size_t(4 * t)] = t;          // L^x_t
        g.dart_vertex[std::size_t(4 * t + 1)] = k;      // L_t
        g.dart_vertex[std::size_t(4 * t + 2)] = t;      // R^x_t
        g.dart_vertex[std::size_t(4 * t + 3)] = k;      // R_t
        g.dart_vertex[std::size_t(4 * k + 2 * t)] = t;               // rho_t
        g.dart_vertex[std::size_t(4 * k + 2 * t + 1)] = (t + 1) % k; // rho'_t
    }
    g.sigma.assign(g.dart_vertex.size(), -1);
    auto set_rotation = [&](const std::vector<int> & rot) {
        for (std::size_t i = 0; i < rot.size(); ++i)
            g.sigma[std::size_t(rot[i])] = rot[(i + 1) % rot.size()];
    };
    for (int t = 0; t < k; ++t)
        set_rotation({4 * k + 2 * ((t - 1 + k) % k) + 1, 4 * t, 4 * t + 2, 4 * k + 2 * t});
    std::vector<int> zrot{1};
    for (int t = k - 1; t >= 1; --t) {
        zrot.push_back(4 * t + 3);
        zrot.push_back(4 * t + 1);
    }
    zrot.push_back(3);
    set_rotation(zrot);
    for (int t = 0; t < k; ++t)
        g.vtuple.push_back(t);
    for (int t = k - 2; t >= 0; --t)
        g.outer_walk.push_back(4 * k + 2 * t + 1);
    g.outer_walk.push_back(4 * k + 2 * (k - 1) + 1);
    for (int t = 0; t < k; ++t)
        f.lens.push_back({4 * t + 2, 4 * t + 1});  // [R^x_t, L_t]: walk (y_t, z)
    verify_gadget(g, "fan frame");
    return f;
}

// --- surgeries ------------------------------------------------------------

// Replaces the outer boundary dart between coordinates c and c+1 by a new
// parallel edge, creating an interior lens; returns the lens face anchored
// for scope (v_c, v_{c+1}).
auto parallel_edge(Gadget & g, int c) -> std::vector<int> {
    int r = g.arity();
    if (c < 0 || c >= r)
        throw error("parallel_edge: coordinate out of range");
    if (r == 1) {
        int d = g.outer_walk[0];
        int m = g.new_dart(g.dart_vertex[std::size_t(d)]);
        int m2 = g.new_dart(g.dart_vertex[std::size_t(d)]);
        g.sigma[std::size_t(g.twin(d))] = m2;
        g.sigma[std::size_t(m2)] = m;
        g.sigma[std::size_t(m)] = d;
        g.outer_walk = {m};
        verify_gadget(g, "parallel_edge");
        return {m2, d};
    }
    int tp = r - 1 - ((c + 1) % r);
    int d = g.outer_walk[std::size_t(tp)];
    int prev = g.outer_walk[std::size_t((tp - 1 + r) % r)];
    int nxt = g.sigma[std::size_t(g.twin(d))];
    int m = g.new_dart(g.dart_vertex[std::size_t(d)]);        // tail v_{c+1}
    int m2 = g.new_dart(g.vtuple[std::size_t(c)]);            // tail v_c
    g.sigma[std::size_t(g.twin(prev))] = m;
    g.sigma[std::size_t(m2)] = nxt;
    g.sigma[std::size_t(g.twin(d))] = m2;
    g.sigma[std::size_t(m)] = d;
    g.outer_walk[std::size_t(tp)] = m;
    verify_gadget(g, "parallel_edge");
    return {m2, d};
}

// Inserts a self-loop at the v_c corner of a lens produced by
// parallel_edge; returns the loop's interior face.
auto loop_in_lens(Gadget & g, const std::vector<int> & lens) -> std::vector<int> {
    int m2 = lens.at(0), d = lens.at(1);
    int v = g.dart_vertex[std::size_t(m2)];
    int l = g.new_dart(v);
    int l2 = g.new_dart(v);
    g.sigma[std::size_t(g.twin(d))] = l;
    g.sigma[std::size_t(l2)] = m2;
    g.sigma[std::size_t(l)] = l2;
    verify_gadget(g, "loop_in_lens");
    return {l2};
}

// Retraces the outer face from an anchor dart whose coordinate is known and
// realigns the walk list with the variable tuple.
auto retrace_outer(Gadget & g, int anchor_dart, int anchor_coord) -> void {
    int r = g.arity();
    std::vector<int> orbit;
    int d = anchor_dart;
    do {
        orbit.push_back(d);
        d = g.next_on_face(d);
        if (int(orbit.size()) > r)
            throw error("retrace_outer: walk does not close on the variable tuple");
    } while (d != anchor_dart);
    if (int(orbit.size()) != r)
        throw error("retrace_outer: walk length mismatch");
    int t_anchor = r - 1 - anchor_coord;
    g.outer_walk.assign(std::size_t(r), -1);
    for (int i = 0; i < r; ++i)
        g.outer_walk[std::size_t((t_anchor + i) % r)] = orbit[std::size_t(i)];
}

// Covers the outer-walk visit of coordinate c with a new edge between its
// walk neighbours, removing the coordinate from the tuple.
auto hide_coord(Gadget & g, int c) -> void {
    int r = g.arity();
    if (r < 2)
        throw error("hide_coord: arity must be at least 2");
    if (c < 0 || c >= r)
        throw error("hide_coord: coordinate out of range");
    int tq = r - 1 - c;
    int q = g.outer_walk[std::size_t(tq)];
    int p = g.outer_walk[std::size_t((tq - 1 + r) % r)];
    int P = g.dart_vertex[std::size_t(p)];
    int S = g.dart_vertex[std::size_t(g.twin(q))];
    int n = g.new_dart(P);
    int n2 = g.new_dart(S);
    if (r == 2) {
        g.sigma[std::size_t(n2)] = n;
        g.sigma[std::size_t(n)] = p;
        g.sigma[std::size_t(g.twin(q))] = n2;
        g.vtuple.erase(g.vtuple.begin() + c);
        g.outer_walk = {n};
        verify_gadget(g, "hide_coord");
        return;
    }
    int prevprev = g.outer_walk[std::size_t((tq - 2 + r) % r)];
    int nxt = g.outer_walk[std::size_t((tq + 1) % r)];
    g.sigma[std::size_t(g.twin(prevprev))] = n;
    g.sigma[std::size_t(n2)] = nxt;
    g.sigma[std::size_t(g.twin(q))] = n2;
    g.sigma[std::size_t(n)] = p;
    // realign from a surviving dart: nxt leaves coordinate (c-1 mod r)
    int c_nxt = (c - 1 + r) % r;
    g.vtuple.erase(g.vtuple.begin() + c);
    int c_nxt_new = c_nxt > c ? c_nxt - 1 : c_nxt;
    retrace_outer(g, nxt, c_nxt_new);
    verify_gadget(g, "hide_coord");
}

// Adds a pendant vertex X attached to coordinate c's vertex inside the
// outer face; the tuple gains (X, v_c) after position c.
auto attach_pendant(Gadget & g, int c) -> int {
    int r = g.arity();
    int tq = r - 1 - c;
    int out_d = g.outer_walk[std::size_t(tq)];
    int in_d = g.outer_walk[std::size_t((tq - 1 + r) % r)];
    int vc = g.vtuple[std::size_t(c)];
    int X = g.n++;
    int p = g.new_dart(vc);
    int p2 = g.new_dart(X);
    g.sigma[std::size_t(g.twin(in_d))] = p;
    g.sigma[std::size_t(p2)] = p2;
    g.sigma[std::size_t(p)] = out_d;
    g.vtuple.insert(g.vtuple.begin() + c + 1, vc);
    g.vtuple.insert(g.vtuple.begin() + c + 1, X);
    retrace_outer(g, out_d, c);
    verify_gadget(g, "attach_pendant");
    return X;
}

// Glues a child gadget into an interior face of the host. The face walk,
// read from its anchor, gives the scope order; child tuple position t is
// identified with face position t.
auto splice(Gadget & g, const std::vector<int> & face, Gadget child) -> void {
    int k = int(face.size());
    if (child.arity() != k)
        throw error("splice: face length does not match child arity");
    for (int d : face)
        if (std::find(g.outer_walk.begin(), g.outer_walk.end(), d) != g.outer_walk.end())
            throw error("splice: cannot splice into the outer face");
    for (const auto & c : g.constraints)
        for (int d : face)
            if (c.anchor == d)
                throw error("splice: face already hosts a constraint");

    int dart_offset = g.dart_count();
    int vertex_offset = g.n;
    int slot_offset = int(g.slots.size());
    for (int dv : child.dart_vertex)
        g.dart_vertex.push_back(dv + vertex_offset);
    for (int s : child.sigma)
        g.sigma.push_back(s + dart_offset);
    g.n += child.n;

    // cross-wire the host face with the child's outer face, visit by visit
    for (int t = 0; t < k; ++t) {
        int f_prev = face[std::size_t((t - 1 + k) % k)];
        int c_leave = child.outer_walk[std::size_t(k - 1 - t)] + dart_offset;
        int c_enter = child.outer_walk[std::size_t((k - 1 - t - 1 + k) % k)] + dart_offset;
        g.sigma[std::size_t(g.twin(f_prev))] = c_leave;
        g.sigma[std::size_t(g.twin(c_enter))] = face[std::size_t(t)];
    }

    // identify boundary vertices (union-find over combined vertex ids)
    std::vector<int> parent(std::size_t(g.n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[std::size_t(x)] != x)
            x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
        return x;
    };
    for (int t = 0; t < k; ++t) {
        int host_v = find(g.dart_vertex[std::size_t(face[std::size_t(t)])]);
        int child_v = find(child.vtuple[std::size_t(t)] + vertex_offset);
        if (host_v != child_v)
            parent[std::size_t(std::max(host_v, child_v))] = std::min(host_v, child_v);
    }
    for (auto & dv : g.dart_vertex)
        dv = find(dv);
    for (auto & vv : g.vtuple)
        vv = find(vv);

    for (const auto & c : child.constraints) {
        auto copy = c;
        copy.anchor += dart_offset;
        for (auto & s : copy.slots)
            s += slot_offset;
        g.constraints.push_back(std::move(copy));
    }
    for (const auto & s : child.slots) {
        auto copy = s;
        for (auto & ch : copy.children)
            ch += slot_offset;
        g.slots.push_back(std::move(copy));
    }
    for (int ts : child.top_slots)
        g.top_slots.push_back(ts + slot_offset);
    g.shift += child.shift;
    verify_gadget(g, "splice");
}

// --- node realization ------------------------------------------------------

struct Realizer {
    const Language & base;

    auto realize_node(const DerivPtr & d) -> Gadget {
        switch (d->kind) {
            case DKind::Base: {
                const auto & rel = base.find(d->base_name);
                auto g = frame_cycle(rel.domain_size(), rel.arity());
                g.constraints.push_back({d->base_name, rel, Rat(1), frame_inner_face(g).front(), {}});
                return g;
            }
            case DKind::Unary: {
                auto g = frame_cycle(d->table->domain_size(), 1);
                g.constraints.push_back({"u", *d->table, Rat(1), 0, {}});
                return g;
            }
            case DKind::Equality:
                return frame_equality(d->domain_size);
            case DKind::Top:
                return frame_cycle(d->domain_size, d->arity);
            case DKind::AddUnary: {
                auto g = realize_node(d->child);
                auto lens = parallel_edge(g, d->coord - 1);
                auto loop = loop_in_lens(g, lens);
                place(g, loop, d->aux, 1);
                return g;
            }
            case DKind::AddBinary: {
                auto g = realize_node(d->child);
                auto lens = parallel_edge(g, d->coord - 1);
                place(g, lens, d->aux, 2);
                return g;
            }
            case DKind::Minimise: {
                auto g = realize_node(d->child);
                hide_coord(g, d->coord - 1);
                return g;
            }
            case DKind::Join:
            case DKind::Fan: {
                int k = int(d->children.size());
                int dom = -1;
                std::vector<Gadget> parts;
                for (const auto & c : d->children) {
                    parts.push_back(realize_node(c));
                    if (parts.back().arity() != 2)
                        throw error("realize: fan/join children must be binary");
                    dom = parts.back().domain_size;
                }
                auto frame = frame_fan(dom, k);
                for (int t = 0; t < k; ++t) {
                    auto lens = frame.lens[std::size_t(t)];
                    bool flip = d->flips[std::size_t(t)];
                    // Join's second argument reads gamma2(z, y) unflipped
                    if (d->kind == DKind::Join && t == 1)
                        flip = ! flip;
                    if (flip)
                        std::rotate(lens.begin(), lens.begin() + 1, lens.end());
                    const auto & c = d->children[std::size_t(t)];
                    if (c->kind == DKind::Base)
                        frame.g.constraints.push_back({c->base_name, replay(c, base), Rat(1), lens.front(), {}});
                    else
                        splice(frame.g, lens, std::move(parts[std::size_t(t)]));
                }
                return frame.g;
            }
            case DKind::RestrictDomain: {
                auto g = realize_node(d->child);
                auto lens = parallel_edge(g, d->coord - 1);
                auto loop = loop_in_lens(g, lens);
                place_unary_value(g, loop, subdomain_relation(g.domain_size, d->subdomain), d->aux);
                return g;
            }
            case DKind::Pin: {
                auto g = realize_node(d->child);
                auto lens = parallel_edge(g, d->coord - 1);
                auto loop = loop_in_lens(g, lens);
                place_unary_value(g, loop, subdomain_relation(g.domain_size, {d->label}), d->aux);
                hide_coord(g, d->coord - 1);
                return g;
            }
            case DKind::EqRestrict: {
                auto g = realize_node(d->child);
                int c = d->coord - 1;
                // both positions already read one vertex: equality is forced
                if (g.vtuple[std::size_t(c)] == g.vtuple[std::size_t((c + 1) % g.arity())])
                    return g;
                auto lens = parallel_edge(g, c);
                splice(g, lens, frame_equality(g.domain_size));
                return g;
            }
            case DKind::NeqRestrict: {
                auto g = realize_node(d->child);
                auto lens = parallel_edge(g, d->coord - 1);
                place_neq(g, lens, d->aux);
                return g;
            }
            case DKind::Twist: {
                auto g = realize_node(d->child);
                int c = d->coord - 1;
                attach_pendant(g, c);
                auto lens = parallel_edge(g, c + 1);  // pair (X, v_c)
                place_neq(g, lens, d->aux);
                hide_coord(g, c + 2);
                hide_coord(g, c);
                return g;
            }
            case DKind::Opt: {
                auto g = realize_node(d->child);
                auto true_table = replay(d->child, base);
                auto mn = true_table.min_finite_value();
                if (! mn)
                    throw error("realize: Opt of an all-infinite relation");
                Slot slot;
                slot.mu_true = *mn;
                auto second = true_table.second_min_value();
                slot.has_gap = second.has_value();
                if (second)
                    slot.gap = *second - *mn;
                if (! slot.has_gap && ! g.top_slots.empty())
                    throw error("realize: Opt collapsing to Feas over nested Opt is not realizable");
                slot.child_shift = g.shift;
                slot.children = g.top_slots;
                int id = int(g.slots.size());
                for (auto & c : g.constraints)
                    c.slots.push_back(id);
                g.slots.push_back(std::move(slot));
                g.top_slots = {id};
                g.shift = 0;
                return g;
            }
            case DKind::Feas: {
                auto g = realize_node(d->child);
                scale_gadget(g, Rat(0));
                return g;
            }
            case DKind::Scale: {
                auto g = realize_node(d->child);
                scale_gadget(g, d->constant);
                return g;
            }
            case DKind::AddConst: {
                auto g = realize_node(d->child);
                g.shift += d->constant;
                return g;
            }
        }
        throw error("realize: unknown derivation kind");
    }

    auto scale_gadget(Gadget & g, const Rat & c) -> void {
        if (sgn(c) == 0 && ! g.slots.empty())
            throw error("realize: scaling by zero over interior Opt is not realizable");
        for (auto & con : g.constraints)
            con.weight *= c;
        g.shift *= c;
        for (auto & s : g.slots) {
            s.gap *= c;
            s.mu_true *= c;
            s.child_shift *= c;
        }
    }

    auto subdomain_relation(int domain_size, const std::vector<Label> & sub) -> WeightedRelation {
        auto rel = WeightedRelation::empty(domain_size, 1);
        for (Label a : sub) {
            if (a < 0 || a >= domain_size)
                throw error("realize: restriction label out of range");
            rel.set({a}, ExtValue(0));
        }
        return rel;
    }

    // Place a unary gadget argument: directly as a constraint when it is a
    // leaf, otherwise by splicing its realization.
    auto place(Gadget & g, const std::vector<int> & face, const DerivPtr & aux, int expected_arity) -> void {
        auto table = replay(aux, base);
        if (table.arity() != expected_arity)
            throw error("realize: gadget argument has wrong arity");
        if (aux->kind == DKind::Unary || aux->kind == DKind::Base) {
            g.constraints.push_back({aux->kind == DKind::Base ? aux->base_name : "u",
                    std::move(table), Rat(1), face.front(), {}});
            verify_gadget(g, "place");
            return;
        }
        splice(g, face, realize_node(aux));
    }

    // The subdomain unary of RestrictDomain / Pin: realized from its own
    // derivation when given, otherwise imposed as a free unary constraint.
    auto place_unary_value(Gadget & g, const std::vector<int> & face, WeightedRelation expected,
            const DerivPtr & aux) -> void {
        if (! aux) {
            g.constraints.push_back({"d", std::move(expected), Rat(1), face.front(), {}});
            verify_gadget(g, "place_unary_value");
            return;
        }
        if (! (replay(aux, base) == expected))
            throw error("realize: restriction witness does not replay to the subdomain relation");
        place(g, face, aux, 1);
    }

    auto place_neq(Gadget & g, const std::vector<int> & lens, const DerivPtr & aux) -> void {
        auto expected = WeightedRelation::empty(g.domain_size, 2);
        for (Label a = 0; a < g.domain_size; ++a)
            for (Label b = 0; b < g.domain_size; ++b)
                if (a != b)
                    expected.set({a, b}, ExtValue(0));
        if (! (replay(aux, base) == expected))
            throw error("realize: twist/!=-restriction witness does not replay to disequality");
        place(g, lens, aux, 2);
    }
};

auto finalize(Gadget g, const Language & base) -> Realization {
    // multipliers for interior Opt slots: every non-slot constraint bounds
    // the feasible objective range [L0, W0]; a violated slot then costs more
    // than W0 - L0 on top of its at-optimum value
    Rat W0(0), L0(0);
    for (const auto & c : g.constraints) {
        if (! c.slots.empty())
            continue;
        auto mx = c.table.max_finite_value();
        auto mn = c.table.min_finite_value();
        if (mx && sgn(*mx) > 0)
            W0 += c.weight * *mx;
        if (mn && sgn(*mn) < 0)
            L0 += c.weight * *mn;
    }
    std::vector<Rat> mult(g.slots.size(), Rat(1));
    for (std::size_t j = 0; j < g.slots.size(); ++j)
        mult[j] = g.slots[j].has_gap ? Rat((W0 - L0) / g.slots[j].gap + 1) : Rat(0);
    for (auto & c : g.constraints)
        for (int s : c.slots)
            c.weight *= mult[std::size_t(s)];
    // at-optimum contribution of each slot (nested slots first: they have
    // smaller ids by construction)
    std::vector<Rat> contribution(g.slots.size(), Rat(0));
    for (std::size_t j = 0; j < g.slots.size(); ++j) {
        Rat m = g.slots[j].mu_true - g.slots[j].child_shift;
        for (int ch : g.slots[j].children)
            m += contribution[std::size_t(ch)];
        contribution[j] = mult[j] * m;
    }
    Rat shift = g.shift;
    for (int j : g.top_slots)
        shift -= contribution[std::size_t(j)];

    // compact vertex ids
    std::vector<int> relabel(std::size_t(g.n), -1);
    int nn = 0;
    for (auto dv : g.dart_vertex)
        if (relabel[std::size_t(dv)] == -1)
            relabel[std::size_t(dv)] = nn++;
    for (auto & dv : g.dart_vertex)
        dv = relabel[std::size_t(dv)];

    // rotations: per-vertex sigma orbits, each listed from its smallest dart
    std::vector<std::vector<int>> rotations{std::size_t(nn)};
    std::vector<bool> seen(g.sigma.size(), false);
    for (int d = 0; d < g.dart_count(); ++d) {
        if (seen[std::size_t(d)])
            continue;
        std::vector<int> orbit;
        int cur = d;
        do {
            seen[std::size_t(cur)] = true;
            orbit.push_back(cur);
            cur = g.sigma[std::size_t(cur)];
        } while (cur != d);
        auto & rot = rotations[std::size_t(g.dart_vertex[std::size_t(d)])];
        if (! rot.empty())
            throw error("realize: vertex rotation split into several orbits");
        rot = std::move(orbit);
    }
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < g.dart_count() / 2; ++e)
        edges.emplace_back(2 * e, 2 * e + 1);
    PlaneGraph graph(nn, std::move(edges), std::move(rotations));

    // name the constraint relations deterministically
    std::map<std::string, std::string> names;
    std::vector<std::pair<std::string, WeightedRelation>> rels;
    std::vector<PlaneConstraint> constraints;
    for (const auto & c : g.constraints) {
        auto key = c.table.encode();
        auto it = names.find(key);
        std::string name;
        if (it != names.end())
            name = it->second;
        else {
            name = c.name_hint;
            int suffix = 1;
            auto taken = [&](const std::string & n) {
                for (const auto & [_, existing] : names)
                    if (existing == n)
                        return true;
                return false;
            };
            while (taken(name))
                name = c.name_hint + "_" + std::to_string(++suffix);
            names.emplace(key, name);
            rels.emplace_back(name, c.table);
        }
        constraints.push_back(PlaneConstraint{name, c.weight, c.anchor, std::nullopt});
    }
    if (rels.empty())
        rels.emplace_back(base.name_of(0), base.at(0));

    auto faces = trace_faces(graph);
    int outer = face_of_dart(faces, g.outer_walk.front());

    std::vector<int> v;
    for (int vv : g.vtuple)
        v.push_back(relabel[std::size_t(vv)]);

    Realization result{
        PlaneInstance{g.domain_size, std::move(graph), outer, std::move(constraints),
                Language(g.domain_size, std::move(rels))},
        std::move(v), std::move(shift), false, ! g.slots.empty()};
    auto report = validate_instance(result.instance);
    if (! report.ok())
        throw error("realize: produced an invalid instance: " + report.violations.front());
    return result;
}

}

auto realize(const DerivPtr & d, const Language & base) -> Realization {
    if (! d)
        throw error("realize: null derivation");
    Realizer rz{base};
    bool opt_root = d->kind == DKind::Opt;
    auto g = rz.realize_node(opt_root ? d->child : d);
    auto result = finalize(std::move(g), base);
    result.opt_pending = opt_root;
    return result;
}

auto Realization::recover(std::uint64_t cap) const -> WeightedRelation {
    auto pi = pi_v(query(), cap);
    auto shifted = add_constant(pi, shift);
    return opt_pending ? opt(shifted) : shifted;
}

auto opt_by_scaling(const PlaneInstance & inst, std::size_t constraint_index) -> PlaneInstance {
    if (constraint_index >= inst.constraints.size())
        throw error("opt_by_scaling: constraint index out of range");
    const auto & target = inst.constraints[constraint_index];
    const auto & gamma = inst.relations.find(target.relation);
    auto mn = gamma.min_finite_value();
    if (! mn)
        throw error("opt_by_scaling: all-infinite relation");
    auto normalized = add_constant(gamma, -*mn);
    auto second = normalized.second_min_value();

    Rat new_weight(0);
    if (second) {
        // feasible objective range of the instance with Opt in place
        Rat W(0), L(0);
        for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
            if (i == constraint_index)
                continue;
            const auto & rel = inst.relations.find(inst.constraints[i].relation);
            auto mx = rel.max_finite_value();
            auto mnf = rel.min_finite_value();
            if (mx && sgn(*mx) > 0)
                W += inst.constraints[i].weight * *mx;
            if (mnf && sgn(*mnf) < 0)
                L += inst.constraints[i].weight * *mnf;
        }
        new_weight = target.weight * ((W - L) / *second + 1);
    }

    auto result = inst;
    std::string name = target.relation + "_scaled";
    while (result.relations.has(name))
        name += "_";
    auto rels = result.relations.relations();
    rels.emplace_back(name, std::move(normalized));
    result.relations = Language(inst.domain_size, std::move(rels));
    result.constraints[constraint_index].relation = name;
    result.constraints[constraint_index].weight = std::move(new_weight);
    result.constraints[constraint_index].scope = std::nullopt;
    return result;
}

}
