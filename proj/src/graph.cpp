#include "cpvf/graph.hpp"

#include <algorithm>
#include <sstream>

namespace cpvf {

const Homoclinic* SeparatrixGraph::homoclinic_with_end(int ell) const {
  for (const auto& h : homoclinics)
    if (h.k == ell || h.j == ell) return &h;
  return nullptr;
}

const Homoclinic* SeparatrixGraph::homoclinic_k(int k) const {
  for (const auto& h : homoclinics)
    if (h.k == k) return &h;
  return nullptr;
}

void SeparatrixGraph::sort() {
  std::sort(homoclinics.begin(), homoclinics.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  std::sort(centers.begin(), centers.end(),
            [](const auto& a, const auto& b) { return a.equilibrium < b.equilibrium; });
}

std::string labelled_key(const SeparatrixGraph& g) {
  std::vector<std::pair<int, int>> hs;
  for (const auto& h : g.homoclinics) hs.emplace_back(h.k, h.j);
  std::sort(hs.begin(), hs.end());
  std::ostringstream os;
  os << g.degree << "|";
  for (auto [k, j] : hs) os << k << "," << j << ";";
  os << "|";
  for (auto [l, e] : g.landing) os << l << ">" << e << ";";
  return os.str();
}

bool same_labelled_graph(const SeparatrixGraph& a, const SeparatrixGraph& b) { return labelled_key(a) == labelled_key(b); }

}  // namespace cpvf
