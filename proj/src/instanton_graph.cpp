#include "wn/instanton_graph.hpp"

#include "wn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wn {

int InstantonGraph::add_vertex(const std::string& id, int index) {
    if (id.empty() || id.find_first_of(" \t\n") != std::string::npos)
        throw DataError("vertex id must be a non-empty token");
    if (index < 0) throw DataError("vertex " + id + ": index must be >= 0");
    if (lookup_.count(id)) throw DataError("duplicate vertex id " + id);
    vertices.push_back({id, index});
    int pos = static_cast<int>(vertices.size()) - 1;
    lookup_[id] = pos;
    return pos;
}

void InstantonGraph::add_edge(const std::string& p, const std::string& q, int sign, double weight) {
    int a = find(p), b = find(q);
    if (a < 0) throw DataError("edge references unknown vertex " + p);
    if (b < 0) throw DataError("edge references unknown vertex " + q);
    add_edge(a, b, sign, weight);
}

void InstantonGraph::add_edge(int p, int q, int sign, double weight) {
    const int nv = static_cast<int>(vertices.size());
    if (p < 0 || p >= nv || q < 0 || q >= nv) throw DataError("edge endpoint out of range");
    if (sign != 1 && sign != -1) throw DataError("edge sign must be +1 or -1");
    if (!std::isfinite(weight)) throw DataError("edge weight must be finite");
    edges.push_back({p, q, sign, weight});
}

int InstantonGraph::find(const std::string& id) const {
    auto it = lookup_.find(id);
    return it == lookup_.end() ? -1 : it->second;
}

int InstantonGraph::top_index() const {
    int n = 0;
    for (const auto& v : vertices) n = std::max(n, v.index);
    return n;
}

std::vector<int> InstantonGraph::vertices_of_index(int k) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
        if (vertices[i].index == k) out.push_back(i);
    return out;
}

std::vector<int> InstantonGraph::counts() const {
    std::vector<int> c(static_cast<std::size_t>(top_index()) + 1, 0);
    for (const auto& v : vertices) ++c[static_cast<std::size_t>(v.index)];
    return c;
}

std::vector<int> InstantonGraph::slot() const {
    std::vector<int> next(static_cast<std::size_t>(top_index()) + 1, 0), out;
    for (const auto& v : vertices) out.push_back(next[static_cast<std::size_t>(v.index)]++);
    return out;
}

std::vector<std::vector<int>> InstantonGraph::outgoing() const {
    std::vector<std::vector<int>> out(vertices.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) out[edges[e].p].push_back(e);
    return out;
}

std::vector<std::vector<int>> InstantonGraph::incoming() const {
    std::vector<std::vector<int>> in(vertices.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) in[edges[e].q].push_back(e);
    return in;
}

void InstantonGraph::validate(bool require_negative) const {
    for (const auto& e : edges) {
        const auto& p = vertices[e.p];
        const auto& q = vertices[e.q];
        if (p.index != q.index + 1)
            throw StructureError("edge " + p.id + " -> " + q.id + " does not lower the index by one");
        if (require_negative && !(e.weight < 0.0))
            throw LyapunovError("edge " + p.id + " -> " + q.id + " has nonnegative weight " +
                                std::to_string(e.weight));
    }
}

InstantonGraph InstantonGraph::reversed() const {
    const int n = top_index();
    InstantonGraph g;
    for (const auto& v : vertices) g.add_vertex(v.id, n - v.index);
    for (const auto& e : edges) g.add_edge(e.q, e.p, e.sign, e.weight);
    return g;
}

InstantonGraph InstantonGraph::parse(const std::string& text) {
    InstantonGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        auto fail = [&](const std::string& why) {
            throw DataError("graph line " + std::to_string(lineno) + ": " + why);
        };
        if (tag == "v") {
            std::string id;
            int idx;
            if (!(ls >> id >> idx)) fail("expected 'v <id> <index>'");
            try {
                g.add_vertex(id, idx);
            } catch (const DataError& e) {
                fail(e.what());
            }
        } else if (tag == "e") {
            std::string p, q;
            int sign;
            double w;
            if (!(ls >> p >> q >> sign >> w)) fail("expected 'e <p> <q> <sign> <weight>'");
            try {
                g.add_edge(p, q, sign, w);
            } catch (const DataError& e) {
                fail(e.what());
            }
        } else {
            fail("unknown record '" + tag + "'");
        }
        std::string extra;
        if (ls >> extra) fail("trailing token '" + extra + "'");
    }
    return g;
}

InstantonGraph InstantonGraph::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open graph file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string InstantonGraph::to_text() const {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& v : vertices) out << "v " << v.id << ' ' << v.index << '\n';
    for (const auto& e : edges)
        out << "e " << vertices[e.p].id << ' ' << vertices[e.q].id << ' ' << e.sign << ' '
            << e.weight << '\n';
    return out.str();
}

void InstantonGraph::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write graph file " + path);
    f << to_text();
}

}  // namespace wn
