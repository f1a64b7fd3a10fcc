#pragma once

// Finite polymodal Kripke frames. Nodes are 0..size()-1; names are kept for I/O.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace glp {

using NodeSet = std::set<int>;

class JFrame {
public:
    JFrame() = default;
    JFrame(std::size_t nodes, std::size_t modalities);

    std::size_t size() const { return names_.size(); }
    std::size_t modalities() const { return rels_.size(); }
    bool related(std::size_t k, int a, int b) const { return rels_[k][idx(a, b)] != 0; }
    void relate(std::size_t k, int a, int b) { rels_[k][idx(a, b)] = 1; }
    void unrelate(std::size_t k, int a, int b) { rels_[k][idx(a, b)] = 0; }
    void add_modality();

    const std::string& name(int a) const { return names_[static_cast<std::size_t>(a)]; }
    void set_name(int a, std::string n) { names_[static_cast<std::size_t>(a)] = std::move(n); }
    int find(const std::string& n) const;  // -1 when absent

    NodeSet successors(std::size_t k, int a) const;
    // Closes every relation under transitivity.
    void close_transitively();

    friend bool operator==(const JFrame&, const JFrame&) = default;

private:
    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * size() + static_cast<std::size_t>(b); }
    std::vector<std::string> names_;
    std::vector<std::vector<char>> rels_;
};

}  // namespace glp
