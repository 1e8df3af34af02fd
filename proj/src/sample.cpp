#include "stonean/sample.hpp"

#include <algorithm>
#include <string>

#include "stonean/error.hpp"

namespace stonean::sample {

logic::Signature model_signature() {
  logic::Signature sig;
  sig.relations["R"] = 1;
  sig.relations["Q"] = 2;
  return sig;
}

namespace {

// Restricted growth string: block index per element.
std::vector<int> random_partition(std::mt19937_64& rng, int n) {
  std::vector<int> block(n, 0);
  int used = 0;
  for (int i = 0; i < n; ++i) {
    block[i] = std::uniform_int_distribution<int>(0, used)(rng);
    if (block[i] == used) ++used;
  }
  return block;
}

}  // namespace

bvm::BVModel random_model(std::mt19937_64& rng, int max_atoms, int max_domain) {
  const int atoms = std::uniform_int_distribution<int>(1, max_atoms)(rng);
  const int n = std::uniform_int_distribution<int>(1, max_domain)(rng);
  std::vector<std::string> labels, domain;
  for (int a = 0; a < atoms; ++a) labels.push_back("a" + std::to_string(a + 1));
  for (int s = 0; s < n; ++s) domain.push_back("e" + std::to_string(s));
  bvm::BVModel m = bvm::BVModel::blank(balg::mk_powerset(labels), model_signature(), domain);
  std::bernoulli_distribution coin(0.5);
  for (int a = 0; a < atoms; ++a) {
    const auto block = random_partition(rng, n);
    const int k = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<bool> r(k);
    std::vector<bool> q(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i) r[i] = coin(rng);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = coin(rng);
    for (int s = 0; s < n; ++s) {
      if (r[block[s]]) m.rel["R"][s] = m.rel["R"][s].with(a);
      for (int t = 0; t < n; ++t) {
        if (block[s] == block[t]) m.eq[s * n + t] = m.eq[s * n + t].with(a);
        if (q[block[s] * k + block[t]]) m.rel["Q"][s * n + t] = m.rel["Q"][s * n + t].with(a);
      }
    }
  }
  return m;
}

sheaf::Presheaf random_separated_presheaf(std::mt19937_64& rng, int max_points, int max_stalk, int max_sections) {
  const int pts = std::uniform_int_distribution<int>(1, max_points)(rng);
  std::vector<std::string> labels;
  for (int p = 0; p < pts; ++p) labels.push_back("x" + std::to_string(p));
  const topo::FinTop x = topo::FinTop::discrete(labels);
  return sheaf::random_presheaf(x, sheaf::open_levels(x), max_stalk, 0.0, rng, max_sections);
}

sheaf::Presheaf top_image(const sheaf::Presheaf& f) {
  const int top = f.level_index(f.space.full());
  if (top < 0) throw PreconditionError("presheaf has no top level");
  const int n = f.level_count();
  std::vector<std::vector<int>> keep(n);  // kept section indices, ascending
  for (int q = 0; q < n; ++q) {
    std::vector<bool> hit(f.sections[q].size(), false);
    for (std::size_t s = 0; s < f.sections[top].size(); ++s) hit[f.restrict(top, q, static_cast<int>(s))] = true;
    for (std::size_t s = 0; s < hit.size(); ++s)
      if (hit[s]) keep[q].push_back(static_cast<int>(s));
  }
  std::vector<std::vector<std::string>> ids(n);
  for (int q = 0; q < n; ++q)
    for (int s : keep[q]) ids[q].push_back(f.sections[q][s]);
  auto pos = [&](int q, int s) {
    return static_cast<int>(std::find(keep[q].begin(), keep[q].end(), s) - keep[q].begin());
  };
  return sheaf::make_presheaf(f.space, f.levels, ids, [&](int p, int q, int s) { return pos(q, f.restrict(p, q, keep[p][s])); });
}

}  // namespace stonean::sample
