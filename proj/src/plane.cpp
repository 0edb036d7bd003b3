#include <pvcsp/plane.hpp>

#include <algorithm>
#include <set>

namespace pvcsp {

PlaneGraph::PlaneGraph(int n, std::vector<std::pair<int, int>> edges, std::vector<std::vector<int>> rotations) :
    _n(n),
    _edges(std::move(edges)),
    _rotation(std::move(rotations))
{
    if (n < 1)
        throw error("plane graph needs at least one vertex");
    if (int(_rotation.size()) != n)
        throw error("one rotation per vertex required");
    int dart_count = 2 * int(_edges.size());
    _twin.assign(std::size_t(dart_count), -1);
    for (const auto & [a, b] : _edges) {
        if (a < 0 || a >= dart_count || b < 0 || b >= dart_count || a == b)
            throw error("bad edge dart pair");
        if (_twin[std::size_t(a)] != -1 || _twin[std::size_t(b)] != -1)
            throw error("dart appears in more than one edge");
        _twin[std::size_t(a)] = b;
        _twin[std::size_t(b)] = a;
    }
    for (int d = 0; d < dart_count; ++d)
        if (_twin[std::size_t(d)] == -1)
            throw error("dart missing from edge list");

    _dart_vertex.assign(std::size_t(dart_count), -1);
    _sigma.assign(std::size_t(dart_count), -1);
    for (int v = 0; v < n; ++v) {
        const auto & rot = _rotation[std::size_t(v)];
        for (std::size_t i = 0; i < rot.size(); ++i) {
            int d = rot[i];
            if (d < 0 || d >= dart_count)
                throw error("rotation references unknown dart");
            if (_dart_vertex[std::size_t(d)] != -1)
                throw error("dart appears in two rotations");
            _dart_vertex[std::size_t(d)] = v;
            _sigma[std::size_t(d)] = rot[(i + 1) % rot.size()];
        }
    }
    for (int d = 0; d < dart_count; ++d)
        if (_dart_vertex[std::size_t(d)] == -1)
            throw error("dangling dart: not in any rotation");
}

auto PlaneGraph::is_connected() const -> bool {
    if (dart_count() == 0)
        return _n == 1;
    std::vector<bool> seen(std::size_t(_n), false);
    std::vector<int> queue{0};
    seen[0] = true;
    int reached = 1;
    while (! queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int d : _rotation[std::size_t(v)]) {
            int w = head(d);
            if (! seen[std::size_t(w)]) {
                seen[std::size_t(w)] = true;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    return reached == _n;
}

auto trace_faces(const PlaneGraph & g) -> std::vector<Face> {
    if (! g.is_connected())
        throw error("trace_faces: graph must be connected");
    std::vector<Face> faces;
    std::vector<bool> used(std::size_t(g.dart_count()), false);
    for (int start = 0; start < g.dart_count(); ++start) {
        if (used[std::size_t(start)])
            continue;
        Face f;
        f.id = int(faces.size());
        int d = start;
        do {
            used[std::size_t(d)] = true;
            f.darts.push_back(d);
            f.vertex_walk.push_back(g.dart_vertex(d));
            d = g.next_on_face(d);
        } while (d != start);
        faces.push_back(std::move(f));
    }
    return faces;
}

auto euler_characteristic(const PlaneGraph & g) -> int {
    return g.vertex_count() - g.edge_count() + int(trace_faces(g).size());
}

auto face_of_dart(const std::vector<Face> & faces, int dart) -> int {
    for (const auto & f : faces)
        if (std::find(f.darts.begin(), f.darts.end(), dart) != f.darts.end())
            return f.id;
    throw error("dart not on any face");
}

auto walk_from_anchor(const PlaneGraph & g, const Face & face, int anchor) -> std::vector<int> {
    auto it = std::find(face.darts.begin(), face.darts.end(), anchor);
    if (it == face.darts.end())
        throw error("anchor dart not on face");
    std::vector<int> walk;
    std::size_t offset = std::size_t(it - face.darts.begin());
    for (std::size_t i = 0; i < face.darts.size(); ++i)
        walk.push_back(g.dart_vertex(face.darts[(offset + i) % face.darts.size()]));
    return walk;
}

auto validate_instance(const PlaneInstance & inst) -> ValidationReport {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (inst.domain_size < 1)
        fail("domain size must be positive");
    if (! inst.graph.is_connected()) {
        fail("graph is not connected");
        return report;
    }
    auto faces = trace_faces(inst.graph);
    int euler = inst.graph.vertex_count() - inst.graph.edge_count() + int(faces.size());
    if (euler != 2)
        fail("Euler characteristic is " + std::to_string(euler) + ", expected 2");
    if (inst.outer_face < 0 || inst.outer_face >= int(faces.size()))
        fail("outer face id out of range");

    std::set<int> used_faces;
    for (std::size_t ci = 0; ci < inst.constraints.size(); ++ci) {
        const auto & c = inst.constraints[ci];
        auto where = "constraint " + std::to_string(ci);
        if (! inst.relations.has(c.relation)) {
            fail(where + ": unknown relation " + c.relation);
            continue;
        }
        if (sgn(c.weight) < 0)
            fail(where + ": negative weight");
        if (c.anchor_dart < 0 || c.anchor_dart >= inst.graph.dart_count()) {
            fail(where + ": anchor dart out of range");
            continue;
        }
        const auto & rel = inst.relations.find(c.relation);
        int fid = face_of_dart(faces, c.anchor_dart);
        if (! used_faces.insert(fid).second)
            fail(where + ": face " + std::to_string(fid) + " already hosts a constraint");
        const auto & face = faces[std::size_t(fid)];
        if (int(face.darts.size()) != rel.arity()) {
            fail(where + ": face boundary length " + std::to_string(face.darts.size()) +
                    " does not match arity " + std::to_string(rel.arity()));
            continue;
        }
        if (c.scope) {
            auto walk = walk_from_anchor(inst.graph, face, c.anchor_dart);
            if (*c.scope != walk)
                fail(where + ": boundary mismatch: declared scope does not equal the clockwise walk from the anchor");
        }
    }
    return report;
}

auto objective_value(const PlaneInstance & inst, const Assignment & s) -> ExtValue {
    if (int(s.size()) != inst.graph.vertex_count())
        throw error("assignment must be total on the vertex set");
    auto faces = trace_faces(inst.graph);
    ExtValue total(0);
    for (const auto & c : inst.constraints) {
        const auto & face = faces[std::size_t(face_of_dart(faces, c.anchor_dart))];
        auto walk = walk_from_anchor(inst.graph, face, c.anchor_dart);
        Tuple t;
        t.reserve(walk.size());
        for (int v : walk)
            t.push_back(s[std::size_t(v)]);
        total += inst.relation_of(c).evaluate(t).scaled(c.weight);
    }
    return total;
}

namespace {

// Precomputed scopes so enumeration does not retrace faces per assignment.
struct CompiledInstance {
    std::vector<std::pair<const WeightedRelation *, Rat>> rels;
    std::vector<std::vector<int>> scopes;
};

auto compile(const PlaneInstance & inst) -> CompiledInstance {
    CompiledInstance out;
    auto faces = trace_faces(inst.graph);
    for (const auto & c : inst.constraints) {
        const auto & face = faces[std::size_t(face_of_dart(faces, c.anchor_dart))];
        out.rels.emplace_back(&inst.relation_of(c), c.weight);
        out.scopes.push_back(walk_from_anchor(inst.graph, face, c.anchor_dart));
    }
    return out;
}

}

auto solve(const PlaneInstance & inst, std::uint64_t cap) -> SolveResult {
    int n = inst.graph.vertex_count();
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) {
        count *= std::uint64_t(inst.domain_size);
        if (count > cap)
            throw budget_error("solve: |D|^n exceeds the brute-force cap");
    }
    auto compiled = compile(inst);

    SolveResult best{INF, std::nullopt};
    Assignment s(std::size_t(n), 0);
    Tuple scratch;
    for (std::uint64_t a = 0; a < count; ++a) {
        std::uint64_t x = a;
        for (int i = n - 1; i >= 0; --i) {
            s[std::size_t(i)] = Label(x % std::uint64_t(inst.domain_size));
            x /= std::uint64_t(inst.domain_size);
        }
        ExtValue total(0);
        for (std::size_t ci = 0; ci < compiled.rels.size() && total.is_finite(); ++ci) {
            scratch.clear();
            for (int v : compiled.scopes[ci])
                scratch.push_back(s[std::size_t(v)]);
            total += compiled.rels[ci].first->evaluate(scratch).scaled(compiled.rels[ci].second);
        }
        if (total < best.optimum) {
            best.optimum = total;
            best.assignment = s;
        }
    }
    return best;
}

}
