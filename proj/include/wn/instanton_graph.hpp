#pragma once

#include <map>
#include <string>
#include <vector>

namespace wn {

struct GraphVertex {
    std::string id;
    int index = 0;
};

// Instanton from p (index k+1) down to q (index k).
struct GraphEdge {
    int p = 0;
    int q = 0;
    int sign = 1;
    double weight = 0.0;
};

class InstantonGraph {
public:
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    int add_vertex(const std::string& id, int index);
    void add_edge(const std::string& p, const std::string& q, int sign, double weight);
    void add_edge(int p, int q, int sign, double weight);

    int find(const std::string& id) const;  // -1 if absent
    int top_index() const;                  // max vertex index (0 for an empty graph)
    std::vector<int> vertices_of_index(int k) const;
    std::vector<int> counts() const;        // |X_k| for k = 0..top
    // Position of each vertex inside its degree block (ordering of the basis).
    std::vector<int> slot() const;
    std::vector<std::vector<int>> outgoing() const;
    std::vector<std::vector<int>> incoming() const;

    // Throws DataError / StructureError / LyapunovError on violations.
    void validate(bool require_negative = true) const;

    // Edges reversed, index k -> n - k, weights and signs kept.
    InstantonGraph reversed() const;

    static InstantonGraph parse(const std::string& text);
    static InstantonGraph load(const std::string& path);
    std::string to_text() const;
    void save(const std::string& path) const;

private:
    std::map<std::string, int> lookup_;
};

}  // namespace wn
