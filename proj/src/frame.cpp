#include "glp/frame.hpp"

namespace glp {

JFrame::JFrame(std::size_t nodes, std::size_t modalities)
    : names_(nodes), rels_(modalities, std::vector<char>(nodes * nodes, 0)) {
    for (std::size_t i = 0; i < nodes; ++i) names_[i] = std::to_string(i);
}

void JFrame::add_modality() { rels_.emplace_back(size() * size(), 0); }

int JFrame::find(const std::string& n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == n) return static_cast<int>(i);
    return -1;
}

NodeSet JFrame::successors(std::size_t k, int a) const {
    NodeSet out;
    for (int b = 0; b < static_cast<int>(size()); ++b)
        if (related(k, a, b)) out.insert(b);
    return out;
}

void JFrame::close_transitively() {
    const int n = static_cast<int>(size());
    for (std::size_t k = 0; k < modalities(); ++k)
        for (int m = 0; m < n; ++m)
            for (int a = 0; a < n; ++a)
                if (related(k, a, m))
                    for (int b = 0; b < n; ++b)
                        if (related(k, m, b)) relate(k, a, b);
}

}  // namespace glp
