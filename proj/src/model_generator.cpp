#include "cpvf/model_generator.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "cpvf/error.hpp"

namespace cpvf {

namespace {

bool crosses(int a, int b, int c, int d, int m) {
  auto inside = [m](int lo, int hi, int x) {
    int len = ((hi - lo) % m + m) % m, off = ((x - lo) % m + m) % m;
    return off > 0 && off < len;
  };
  return inside(a, b, c) != inside(a, b, d);
}

std::optional<SeparatrixGraph> sample(int degree, std::mt19937_64& rng, int max_h) {
  const int m = 2 * (degree - 1);
  SeparatrixGraph g;
  g.degree = degree;
  int cap = max_h < 0 ? degree - 1 : std::min(max_h, degree - 1);
  int h = std::uniform_int_distribution<int>(0, cap)(rng);
  std::vector<bool> used(m, false);
  for (int tries = 0; static_cast<int>(g.homoclinics.size()) < h && tries < 50; ++tries) {
    int k = 2 * std::uniform_int_distribution<int>(0, degree - 2)(rng) + 1;
    int j = 2 * std::uniform_int_distribution<int>(0, degree - 2)(rng);
    if (used[k] || used[j]) continue;
    bool ok = true;
    for (const auto& o : g.homoclinics) ok = ok && !crosses(k, j, o.k, o.j, m);
    if (!ok) continue;
    used[k] = used[j] = true;
    g.homoclinics.push_back({k, j, 1.0, {}});
  }
  std::vector<int> free;
  for (int ell = 0; ell < m; ++ell)
    if (!used[ell]) free.push_back(ell);
  if (free.empty()) return std::nullopt;
  std::rotate(free.begin(), free.begin() + std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng),
              free.end());
  std::vector<int> stack;
  int next = 0;
  std::uniform_int_distribution<int> choice(0, 2);
  for (int ell : free) {
    int c = stack.empty() ? 0 : choice(rng);
    if (c == 2 && stack.size() < 2) c = 1;
    if (c == 0) {
      stack.push_back(next++);
    } else if (c == 2) {
      stack.pop_back();
    }
    g.landing[ell] = stack.back();
  }
  g.sort();
  return g;
}

}  // namespace

DiskModel random_model(int degree, std::mt19937_64& rng, int max_h, int max_attempts) {
  if (degree < 2) throw PreconditionError("degree must be at least 2");
  for (int a = 0; a < max_attempts; ++a) {
    auto g = sample(degree, rng, max_h);
    if (!g) continue;
    try {
      DiskModel model = decompose(*g);
      int total = 0;
      for (const auto& e : model.equilibria) total += e.multiplicity;
      if (total == degree) return model;
    } catch (const DecompositionError&) {
    }
  }
  throw PreconditionError("no valid model found for degree " + std::to_string(degree));
}

UnionGraph random_union(const std::vector<AdmissiblePath>& paths, std::mt19937_64& rng, int max_paths) {
  UnionGraph u;
  if (paths.empty()) return u;
  int n = std::uniform_int_distribution<int>(1, std::max(1, max_paths))(rng);
  std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
  for (int i = 0; i < n; ++i) u.paths.push_back(paths[pick(rng)]);
  return u;
}

}  // namespace cpvf
