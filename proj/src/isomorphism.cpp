#include "crncert/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace crncert {

namespace {

struct Edge {
  int code;  // 0 species->reaction, 1 reaction->species (seen from species), 2/3 mirrored
  int weight;
  std::size_t nb;
};

using Adjacency = std::vector<std::vector<Edge>>;

// Disjoint union of both Petri nets: a's species, a's reactions, b's species,
// b's reactions.
Adjacency joint_graph(const Network& a, const Network& b) {
  const std::size_t na = a.num_species() + a.num_reactions();
  Adjacency adj(na + b.num_species() + b.num_reactions());
  auto add = [&adj](const Network& net, std::size_t off) {
    const std::size_t n = net.num_species();
    for (std::size_t j = 0; j < net.num_reactions(); ++j) {
      for (const auto& t : net.reaction(j).reactants) {
        adj[off + t.species].push_back({0, t.coeff, off + n + j});
        adj[off + n + j].push_back({2, t.coeff, off + t.species});
      }
      for (const auto& t : net.reaction(j).products) {
        adj[off + t.species].push_back({1, t.coeff, off + n + j});
        adj[off + n + j].push_back({3, t.coeff, off + t.species});
      }
    }
  };
  add(a, 0);
  add(b, na);
  return adj;
}

class Matcher {
 public:
  Matcher(const Network& a, const Network& b)
      : a_(a), b_(b), adj_(joint_graph(a, b)), na_(a.num_species() + a.num_reactions()) {}

  std::optional<NetworkIsomorphism> run() {
    if (a_.num_species() != b_.num_species() || a_.num_reactions() != b_.num_reactions())
      return std::nullopt;
    std::vector<int> colors(adj_.size());
    for (std::size_t u = 0; u < adj_.size(); ++u) colors[u] = is_reaction(u) ? 1 : 0;
    return search(std::move(colors));
  }

 private:
  bool is_reaction(std::size_t u) const {
    const std::size_t local = u < na_ ? u : u - na_;
    const std::size_t n = u < na_ ? a_.num_species() : b_.num_species();
    return local >= n;
  }

  static std::size_t count_distinct(const std::vector<int>& c) {
    std::vector<int> s = c;
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
  }

  void refine(std::vector<int>& colors) const {
    std::size_t classes = count_distinct(colors);
    while (true) {
      using Sig = std::pair<int, std::vector<std::tuple<int, int, int>>>;
      std::vector<Sig> sig(adj_.size());
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        sig[u].first = colors[u];
        for (const auto& e : adj_[u]) sig[u].second.emplace_back(e.code, e.weight, colors[e.nb]);
        std::sort(sig[u].second.begin(), sig[u].second.end());
      }
      std::map<Sig, int> ids;
      for (const auto& s : sig) ids.emplace(s, 0);
      int next = 0;
      for (auto& [s, id] : ids) id = next++;
      for (std::size_t u = 0; u < adj_.size(); ++u) colors[u] = ids[sig[u]];
      const std::size_t now = ids.size();
      if (now == classes) return;
      classes = now;
    }
  }

  bool balanced(const std::vector<int>& colors) const {
    std::map<int, long> h;
    for (std::size_t u = 0; u < adj_.size(); ++u) h[colors[u]] += u < na_ ? 1 : -1;
    return std::all_of(h.begin(), h.end(), [](const auto& kv) { return kv.second == 0; });
  }

  std::optional<NetworkIsomorphism> search(std::vector<int> colors) {
    refine(colors);
    if (!balanced(colors)) return std::nullopt;

    std::map<int, std::vector<std::size_t>> in_a;
    for (std::size_t u = 0; u < na_; ++u) in_a[colors[u]].push_back(u);
    const auto split = std::find_if(in_a.begin(), in_a.end(),
                                    [](const auto& kv) { return kv.second.size() > 1; });
    if (split == in_a.end()) return discrete_mapping(colors);

    const int c = split->first;
    const std::size_t v = split->second.front();
    const int fresh = *std::max_element(colors.begin(), colors.end()) + 1;
    for (std::size_t w = na_; w < adj_.size(); ++w) {
      if (colors[w] != c) continue;
      auto next = colors;
      next[v] = fresh;
      next[w] = fresh;
      if (auto m = search(std::move(next))) return m;
    }
    return std::nullopt;
  }

  std::optional<NetworkIsomorphism> discrete_mapping(const std::vector<int>& colors) const {
    std::map<int, std::size_t> in_b;
    for (std::size_t u = na_; u < adj_.size(); ++u) in_b[colors[u]] = u - na_;
    const std::size_t n = a_.num_species();
    NetworkIsomorphism m;
    m.species.resize(n);
    m.reactions.resize(a_.num_reactions());
    for (std::size_t u = 0; u < na_; ++u) {
      const std::size_t w = in_b.at(colors[u]);
      if (u < n) m.species[u] = w;
      else m.reactions[u - n] = w - n;
    }
    if (!verify(m)) return std::nullopt;
    return m;
  }

  bool verify(const NetworkIsomorphism& m) const {
    auto mapped = [&m](const Side& s) {
      Side out;
      for (const auto& t : s) out.push_back({m.species[t.species], t.coeff});
      return canonical_side(std::move(out));
    };
    for (std::size_t j = 0; j < a_.num_reactions(); ++j) {
      const auto& ra = a_.reaction(j);
      const auto& rb = b_.reaction(m.reactions[j]);
      if (mapped(ra.reactants) != rb.reactants || mapped(ra.products) != rb.products) return false;
    }
    return true;
  }

  const Network& a_;
  const Network& b_;
  Adjacency adj_;
  std::size_t na_;
};

std::string side_key(const Network& net, const Side& side) {
  std::vector<std::string> terms;
  for (const auto& t : side)
    terms.push_back(net.species_name(t.species) + "*" + std::to_string(t.coeff));
  std::sort(terms.begin(), terms.end());
  std::string s;
  for (const auto& t : terms) s += t + " ";
  return s;
}

}  // namespace

std::optional<NetworkIsomorphism> find_isomorphism(const Network& a, const Network& b) {
  return Matcher(a, b).run();
}

std::string reaction_key(const Network& net, std::size_t j) {
  const auto& r = net.reaction(j);
  return side_key(net, r.reactants) + "> " + side_key(net, r.products);
}

bool same_content(const Network& a, const Network& b) {
  auto names = [](const Network& n) {
    auto v = n.species_names();
    std::sort(v.begin(), v.end());
    return v;
  };
  auto keys = [](const Network& n) {
    std::vector<std::string> v;
    for (std::size_t j = 0; j < n.num_reactions(); ++j) v.push_back(reaction_key(n, j));
    std::sort(v.begin(), v.end());
    return v;
  };
  return names(a) == names(b) && keys(a) == keys(b);
}

}  // namespace crncert
