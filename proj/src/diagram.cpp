#include "unfold/diagram.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace unfold {

SpectralCollection unfold_collection(const SpectralCollection& c, const std::vector<SetPartition>& parts) {
    SpectralCollection out;
    for (size_t i = 0; i < c.size(); ++i) {
        auto u = unfold_spectral(c[i], parts[i]);
        out.insert(out.end(), u.begin(), u.end());
    }
    return canonicalize(out);
}

UnfoldingDiagram unfolding_diagram(const SpectralCollection& c, long long max_vertices) {
    UnfoldingDiagram d;
    std::vector<std::vector<SetPartition>> per;
    long long total = 1;
    for (auto& s : c) {
        per.push_back(partitions(s.k()));
        total *= static_cast<long long>(per.back().size());
        if (total > max_vertices) throw DiagramTooLarge("unfolding diagram exceeds vertex cap");
    }
    // mixed-radix enumeration, last point varying fastest
    std::vector<size_t> idx(c.size(), 0);
    std::map<std::vector<size_t>, int> index_of;
    for (long long v = 0; v < total; ++v) {
        std::vector<SetPartition> tup;
        for (size_t i = 0; i < c.size(); ++i) tup.push_back(per[i][idx[i]]);
        index_of[idx] = static_cast<int>(d.vertices.size());
        d.labels.push_back(unfold_collection(c, tup));
        d.vertices.push_back(std::move(tup));
        for (size_t i = c.size(); i-- > 0;) {
            if (++idx[i] < per[i].size()) break;
            idx[i] = 0;
        }
    }
    // covering relations: change one coordinate by a covering merge
    std::vector<std::vector<std::vector<size_t>>> up(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        up[i].resize(per[i].size());
        for (size_t a = 0; a < per[i].size(); ++a)
            for (size_t b = 0; b < per[i].size(); ++b)
                if (covers(per[i][a], per[i][b])) up[i][a].push_back(b);
    }
    for (auto& [key, v] : index_of) {
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t b : up[i][key[i]]) {
                auto k2 = key;
                k2[i] = b;
                d.edges.emplace_back(v, index_of.at(k2));
            }
    }
    std::sort(d.edges.begin(), d.edges.end());
    return d;
}

ReducedDiagram reduce(const UnfoldingDiagram& d) {
    ReducedDiagram r;
    std::map<std::string, int> cls;
    std::vector<int> of(d.vertices.size());
    for (size_t v = 0; v < d.vertices.size(); ++v) {
        std::string key = to_string(d.labels[v]);
        auto it = cls.find(key);
        if (it == cls.end()) {
            it = cls.emplace(key, static_cast<int>(r.labels.size())).first;
            r.labels.push_back(d.labels[v]);
            r.members.emplace_back();
        }
        of[v] = it->second;
        r.members[it->second].push_back(static_cast<int>(v));
    }
    int m = static_cast<int>(r.labels.size());
    std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
    for (auto [a, b] : d.edges)
        if (of[a] != of[b]) reach[of[a]][of[b]] = 1;
    for (int t = 0; t < m; ++t)
        for (int i = 0; i < m; ++i)
            if (reach[i][t])
                for (int j = 0; j < m; ++j)
                    if (reach[t][j]) reach[i][j] = 1;
    // transitive reduction of the (acyclic) reachability relation
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (!reach[i][j] || i == j) continue;
            bool direct = true;
            for (int t = 0; t < m && direct; ++t)
                if (t != i && t != j && reach[i][t] && reach[t][j]) direct = false;
            if (direct) r.edges.emplace_back(i, j);
        }
    return r;
}

ReducedDiagram reduced_diagram(const SpectralCollection& c, long long max_vertices) {
    return reduce(unfolding_diagram(c, max_vertices));
}

static std::string escape(const std::string& s) {
    std::string o;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') o.push_back('\\');
        o.push_back(ch);
    }
    return o;
}

template <class D>
static std::string dot_impl(const D& d, const std::vector<SpectralCollection>& labels) {
    std::ostringstream os;
    os << "digraph unfolding {\n  rankdir=LR;\n  node [shape=box];\n";
    for (size_t v = 0; v < labels.size(); ++v)
        os << "  v" << v << " [label=\"" << escape(to_string(labels[v])) << "\"];\n";
    for (auto [a, b] : d.edges) os << "  v" << a << " -> v" << b << ";\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const UnfoldingDiagram& d) { return dot_impl(d, d.labels); }
std::string to_dot(const ReducedDiagram& d) { return dot_impl(d, d.labels); }

}  // namespace unfold
