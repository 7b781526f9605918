#include "symdyn/rauzy.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace symdyn {

RauzyGraph::RauzyGraph(std::size_t order, std::vector<FiniteWord> vertices, std::vector<FiniteWord> arc_words)
    : order_(order), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  std::sort(arc_words.begin(), arc_words.end());
  arc_words.erase(std::unique(arc_words.begin(), arc_words.end()), arc_words.end());

  vertex_id_.reserve(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].size() != order_) throw PreconditionError("vertex word has the wrong length");
    vertex_id_.emplace(vertices_[v], v);
  }
  in_.assign(vertices_.size(), {});
  out_.assign(vertices_.size(), {});
  arcs_.reserve(arc_words.size());
  arc_id_.reserve(arc_words.size());
  for (auto& w : arc_words) {
    if (w.size() != order_ + 1) throw PreconditionError("arc word has the wrong length");
    auto tail = vertex_id_.find(FiniteWord(w.begin(), w.end() - 1));
    auto head = vertex_id_.find(FiniteWord(w.begin() + 1, w.end()));
    if (tail == vertex_id_.end() || head == vertex_id_.end()) {
      throw PreconditionError("arc endpoint is not a vertex");
    }
    const std::size_t id = arcs_.size();
    out_[tail->second].push_back(id);
    in_[head->second].push_back(id);
    arc_id_.emplace(w, id);
    arcs_.push_back(RauzyArc{tail->second, head->second, std::move(w)});
  }
}

std::optional<std::size_t> RauzyGraph::find_vertex(std::span<const Symbol> word) const {
  auto it = vertex_id_.find(FiniteWord(word.begin(), word.end()));
  if (it == vertex_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RauzyGraph::find_arc(std::span<const Symbol> word) const {
  auto it = arc_id_.find(FiniteWord(word.begin(), word.end()));
  if (it == arc_id_.end()) return std::nullopt;
  return it->second;
}

bool RauzyGraph::has_bispecial() const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (bispecial(v)) return true;
  }
  return false;
}

bool RauzyGraph::has_branching() const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (left_branching(v) || right_branching(v)) return true;
  }
  return false;
}

RauzyGraph build_rauzy_graph(const FactorIndex& index, std::size_t k) {
  if (k + 1 > index.horizon()) {
    throw HorizonError("Rauzy graph of order " + std::to_string(k) + " needs horizon " + std::to_string(k + 1));
  }
  return RauzyGraph(k, index.factors(k), index.factors(k + 1));
}

RauzyGraph follower(const RauzyGraph& g) {
  std::vector<FiniteWord> vertices;
  std::vector<FiniteWord> arcs;
  vertices.reserve(g.arcs().size());
  for (const auto& a : g.arcs()) {
    vertices.push_back(a.word);
    for (std::size_t b : g.out_arcs(a.head)) {
      FiniteWord w = a.word;
      w.push_back(g.arcs()[b].word.back());
      arcs.push_back(std::move(w));
    }
  }
  return RauzyGraph(g.order() + 1, std::move(vertices), std::move(arcs));
}

bool is_subgraph(const RauzyGraph& sub, const RauzyGraph& super) {
  if (sub.order() != super.order()) return false;
  for (const auto& v : sub.vertices()) {
    if (!super.find_vertex(v)) return false;
  }
  for (const auto& a : sub.arcs()) {
    if (!super.find_arc(a.word)) return false;
  }
  return true;
}

char side_char(Side s) {
  switch (s) {
    case Side::l:
      return 'l';
    case Side::r:
      return 'r';
    default:
      return '.';
  }
}

LabelledRauzyGraph LabelledRauzyGraph::unlabelled(RauzyGraph g) {
  LabelledRauzyGraph out;
  out.head_label.assign(g.arcs().size(), Side::none);
  out.tail_label.assign(g.arcs().size(), Side::none);
  out.marked.assign(g.vertices().size(), false);
  out.graph = std::move(g);
  return out;
}

LabelledRauzyGraph LabelledRauzyGraph::lexicographic(RauzyGraph g) {
  LabelledRauzyGraph out = unlabelled(std::move(g));
  // Arc ids follow word order, so within one vertex side the smaller id has
  // the smaller extending symbol.
  for (std::size_t v = 0; v < out.graph.vertices().size(); ++v) {
    const auto& in = out.graph.in_arcs(v);
    if (in.size() == 2) {
      out.head_label[std::min(in[0], in[1])] = Side::l;
      out.head_label[std::max(in[0], in[1])] = Side::r;
    }
    const auto& o = out.graph.out_arcs(v);
    if (o.size() == 2) {
      out.tail_label[std::min(o[0], o[1])] = Side::l;
      out.tail_label[std::max(o[0], o[1])] = Side::r;
    }
  }
  return out;
}

namespace {

bool side_well_formed(const std::vector<std::size_t>& arcs, const std::vector<Side>& labels) {
  std::size_t l = 0, r = 0;
  for (std::size_t a : arcs) {
    l += labels[a] == Side::l;
    r += labels[a] == Side::r;
  }
  if (l + r == 0) return true;
  return arcs.size() == 2 && l == 1 && r == 1;
}

std::string vertex_text(const FiniteWord& w) {
  std::string s;
  for (Symbol c : w) s += std::to_string(c) + (w.size() > 1 ? " " : "");
  if (!s.empty() && s.back() == ' ') s.pop_back();
  return "[" + s + "]";
}

}  // namespace

void LabelledRauzyGraph::validate() const {
  const auto& g = graph;
  if (head_label.size() != g.arcs().size() || tail_label.size() != g.arcs().size() ||
      marked.size() != g.vertices().size()) {
    throw LabellingError("label arrays do not match the graph", {});
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (!side_well_formed(g.in_arcs(v), head_label)) {
      throw LabellingError("in-arcs of vertex " + vertex_text(g.vertices()[v]) + " are not labelled l and r",
                           g.vertices()[v]);
    }
    if (!side_well_formed(g.out_arcs(v), tail_label)) {
      throw LabellingError("out-arcs of vertex " + vertex_text(g.vertices()[v]) + " are not labelled l and r",
                           g.vertices()[v]);
    }
  }
}

std::size_t LabelledRauzyGraph::marked_count() const {
  return static_cast<std::size_t>(std::count(marked.begin(), marked.end(), true));
}

LabelledRauzyGraph label_propagation(const LabelledRauzyGraph& g) {
  g.validate();
  LabelledRauzyGraph out = LabelledRauzyGraph::unlabelled(follower(g.graph));
  const auto& fol = out.graph;
  const std::size_t k = g.graph.order();
  for (std::size_t x = 0; x < fol.arcs().size(); ++x) {
    const FiniteWord& w = fol.arcs()[x].word;  // A = w[0, k+1), B = w[1, k+2)
    const std::size_t a = *g.graph.find_arc(std::span<const Symbol>(w).first(k + 1));
    const std::size_t b = *g.graph.find_arc(std::span<const Symbol>(w).subspan(1));
    out.head_label[x] = g.head_label[a];
    out.tail_label[x] = g.tail_label[b];
  }
  // Follower vertex f = (v -> w) is an arc of g.
  for (std::size_t f = 0; f < fol.vertices().size(); ++f) {
    const RauzyArc& arc = g.graph.arcs()[f];
    const std::size_t v = arc.tail;
    if (g.marked[v] && (g.tail_label[f] == Side::r || g.graph.out_degree(v) == 1)) out.marked[f] = true;
  }
  return out;
}

LabelledRauzyGraph restrict_labels(const LabelledRauzyGraph& fol, const RauzyGraph& sub) {
  LabelledRauzyGraph out = LabelledRauzyGraph::unlabelled(sub);
  const auto& g = out.graph;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto id = fol.graph.find_vertex(g.vertices()[v]);
    if (!id) throw PreconditionError("restricted graph has a vertex missing from the follower");
    out.marked[v] = fol.marked[*id];
  }
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    auto id = fol.graph.find_arc(g.arcs()[a].word);
    if (!id) throw PreconditionError("restricted graph has an arc missing from the follower");
    out.head_label[a] = fol.head_label[*id];
    out.tail_label[a] = fol.tail_label[*id];
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (!side_well_formed(g.in_arcs(v), out.head_label)) {
      for (std::size_t a : g.in_arcs(v)) out.head_label[a] = Side::none;
    }
    if (!side_well_formed(g.out_arcs(v), out.tail_label)) {
      for (std::size_t a : g.out_arcs(v)) out.tail_label[a] = Side::none;
    }
  }
  return out;
}

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::degree_bound:
      return "degree bound";
    case Condition::follower:
      return "follower";
    case Condition::unmarked_pairs:
      return "unmarked pairs";
    case Condition::marked_pairs:
      return "marked pairs";
  }
  return "unknown";
}

std::optional<Condition> EvolutionStep::first_failure() const {
  if (!degree_bound) return Condition::degree_bound;
  if (!follower) return Condition::follower;
  if (!unmarked_pairs) return Condition::unmarked_pairs;
  if (!marked_pairs) return Condition::marked_pairs;
  return std::nullopt;
}

namespace {

struct EvolutionLevel {
  RauzyGraph graph;     // G_k
  RauzyGraph follower;  // Fol(G_k)
  bool degree_bound = true;
  std::size_t bispecial = 0;
  std::vector<std::size_t> dropped;  // Fol arcs missing from G_{k+1}
};

struct BranchSide {
  std::size_t vertex;
  bool in_arcs;
};

struct EvolutionRun {
  std::vector<EvolutionStep> steps;
  std::optional<std::size_t> onset;
};

void swap_side(LabelledRauzyGraph& g, const BranchSide& side) {
  auto& labels = side.in_arcs ? g.head_label : g.tail_label;
  const auto& arcs = side.in_arcs ? g.graph.in_arcs(side.vertex) : g.graph.out_arcs(side.vertex);
  for (std::size_t a : arcs) {
    if (labels[a] == Side::l) {
      labels[a] = Side::r;
    } else if (labels[a] == Side::r) {
      labels[a] = Side::l;
    }
  }
}

EvolutionRun run_evolution(const std::vector<EvolutionLevel>& levels, std::size_t k_min,
                           std::optional<std::size_t> seed_k, const std::vector<BranchSide>& sides,
                           unsigned long mask) {
  EvolutionRun run;
  std::optional<LabelledRauzyGraph> labels;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const std::size_t k = k_min + i;
    const EvolutionLevel& level = levels[i];
    if (seed_k && *seed_k == k) {
      labels = LabelledRauzyGraph::lexicographic(level.graph);
      for (std::size_t s = 0; s < sides.size(); ++s) {
        if (mask >> s & 1UL) swap_side(*labels, sides[s]);
      }
    }
    EvolutionStep step;
    step.k = k;
    step.labelled = labels.has_value();
    step.degree_bound = level.degree_bound;
    step.bispecial = level.bispecial;
    step.dropped = level.dropped.size();
    step.marked = labels ? labels->marked_count() : 0;

    const RauzyGraph& g = level.graph;
    const std::size_t order = g.order();
    for (std::size_t x : level.dropped) {
      std::span<const Symbol> w(level.follower.arcs()[x].word);
      const std::size_t v = *g.find_vertex(w.subspan(1, order));
      if (!g.bispecial(v)) {
        step.follower = false;
        continue;
      }
      if (!labels) {
        step.unmarked_pairs = false;
        continue;
      }
      const Side in = labels->head_label[*g.find_arc(w.first(order + 1))];
      const Side out = labels->tail_label[*g.find_arc(w.subspan(1))];
      const bool crossed = (in == Side::l && out == Side::r) || (in == Side::r && out == Side::l);
      const bool straight = (in == Side::l && out == Side::l) || (in == Side::r && out == Side::r);
      if (labels->marked[v]) {
        if (!straight) step.marked_pairs = false;
      } else if (!crossed) {
        step.unmarked_pairs = false;
      }
    }
    run.steps.push_back(step);
    if (labels) labels = restrict_labels(label_propagation(*labels), levels[i + 1].graph);
  }
  for (std::size_t i = run.steps.size(); i-- > 0;) {
    if (!run.steps[i].ok()) break;
    run.onset = run.steps[i].k;
  }
  return run;
}

}  // namespace

EvolutionReport check_evolution(const FactorIndex& index, std::size_t k_min, std::size_t k_max) {
  if (k_min < 1 || k_min > k_max) throw PreconditionError("evolution range needs 1 <= k_min <= k_max");
  if (k_max + 2 > index.horizon()) {
    throw HorizonError("evolution up to k=" + std::to_string(k_max) + " needs horizon " +
                       std::to_string(k_max + 2));
  }
  std::vector<EvolutionLevel> levels;
  for (std::size_t k = k_min; k <= k_max + 1; ++k) {
    EvolutionLevel level;
    level.graph = build_rauzy_graph(index, k);
    for (std::size_t v = 0; v < level.graph.vertices().size(); ++v) {
      if (level.graph.in_degree(v) > 2 || level.graph.out_degree(v) > 2) level.degree_bound = false;
      if (level.graph.bispecial(v)) ++level.bispecial;
    }
    levels.push_back(std::move(level));
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    levels[i].follower = follower(levels[i].graph);
    const RauzyGraph& next = levels[i + 1].graph;
    for (std::size_t x = 0; x < levels[i].follower.arcs().size(); ++x) {
      if (!next.find_arc(levels[i].follower.arcs()[x].word)) levels[i].dropped.push_back(x);
    }
  }

  EvolutionReport report;
  report.k_min = k_min;
  report.k_max = k_max;
  std::vector<BranchSide> sides;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i].degree_bound) {
      report.seed_k = k_min + i;
      const RauzyGraph& g = levels[i].graph;
      for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        if (g.in_degree(v) == 2) sides.push_back({v, true});
        if (g.out_degree(v) == 2) sides.push_back({v, false});
      }
      break;
    }
  }

  // Wide seeds are not searched; they keep the lexicographic labels.
  constexpr std::size_t max_search_sides = 12;
  const unsigned long masks = sides.size() <= max_search_sides ? 1UL << sides.size() : 1UL;
  std::optional<EvolutionRun> best;
  unsigned long best_mask = 0;
  for (unsigned long mask = 0; mask < masks; ++mask) {
    EvolutionRun run = run_evolution(levels, k_min, report.seed_k, sides, mask);
    auto rank = [](const EvolutionRun& r, unsigned long m) {
      return std::make_pair(r.onset.value_or(std::numeric_limits<std::size_t>::max()), std::popcount(m));
    };
    if (!best || rank(run, mask) < rank(*best, best_mask)) {
      best = std::move(run);
      best_mask = mask;
    }
  }

  report.steps = std::move(best->steps);
  report.onset = best->onset;
  if (report.seed_k) {
    const RauzyGraph& seed = levels[*report.seed_k - k_min].graph;
    for (std::size_t s = 0; s < sides.size(); ++s) {
      if (best_mask >> s & 1UL) report.seed_swaps.push_back(SeedSwap{seed.vertices()[sides[s].vertex], sides[s].in_arcs});
    }
  }
  for (const auto& step : report.steps) {
    if (auto c = step.first_failure()) {
      report.first_violation = std::make_pair(step.k, *c);
      break;
    }
  }
  if (report.onset) {
    report.oriented = std::all_of(report.steps.begin(), report.steps.end(), [&](const EvolutionStep& s) {
      return s.k < *report.onset || s.marked == 0;
    });
  }
  return report;
}

std::size_t RauzyScheme::total_chain_length() const {
  std::size_t total = 0;
  for (const auto& a : arcs) total += a.chain_length;
  return total;
}

RauzyScheme build_scheme(const RauzyGraph& g) {
  const std::size_t n = g.vertices().size();
  std::vector<bool> is_node(n, false), visited(n, false);
  for (std::size_t v = 0; v < n; ++v) is_node[v] = g.in_degree(v) != 1 || g.out_degree(v) != 1;
  RauzyScheme scheme;
  scheme.order = g.order();
  scheme.degenerate = !g.has_branching();

  struct RawArc {
    std::size_t tail, head, length;
    FiniteWord word;
  };
  std::vector<RawArc> raw;
  auto trace = [&](std::size_t start) {
    for (std::size_t first : g.out_arcs(start)) {
      FiniteWord word = g.vertices()[start];
      std::size_t a = first, length = 0, cur;
      for (;;) {
        word.push_back(g.arcs()[a].word.back());
        ++length;
        cur = g.arcs()[a].head;
        if (is_node[cur]) break;
        visited[cur] = true;
        a = g.out_arcs(cur).front();
      }
      raw.push_back(RawArc{start, cur, length, std::move(word)});
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (is_node[v]) trace(v);
  }
  // What is left lies on cycles of (1, 1) vertices; vertices are in word
  // order, so each cycle is opened at its smallest vertex.
  for (std::size_t v = 0; v < n; ++v) {
    if (is_node[v] || visited[v]) continue;
    is_node[v] = true;
    trace(v);
  }

  std::vector<std::size_t> node_id(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (is_node[v]) {
      node_id[v] = scheme.vertices.size();
      scheme.vertices.push_back(g.vertices()[v]);
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawArc& a, const RawArc& b) { return a.word < b.word; });
  for (auto& r : raw) {
    scheme.arcs.push_back(SchemeArc{node_id[r.tail], node_id[r.head], r.length, std::move(r.word)});
  }
  return scheme;
}

std::vector<SchemeIsomorphism> scheme_isomorphisms(const RauzyScheme& a, const RauzyScheme& b, std::size_t limit) {
  std::vector<SchemeIsomorphism> out;
  const std::size_t n = a.vertices.size();
  if (n != b.vertices.size() || a.arcs.size() != b.arcs.size()) return out;

  auto multiplicity = [](const RauzyScheme& s) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> m;
    for (std::size_t i = 0; i < s.arcs.size(); ++i) m[{s.arcs[i].tail, s.arcs[i].head}].push_back(i);
    return m;
  };
  const auto ma = multiplicity(a), mb = multiplicity(b);
  auto degrees = [](const RauzyScheme& s) {
    std::vector<std::array<std::size_t, 3>> d(s.vertices.size(), {0, 0, 0});
    for (const auto& arc : s.arcs) {
      ++d[arc.tail][1];
      ++d[arc.head][0];
      if (arc.tail == arc.head) ++d[arc.tail][2];
    }
    return d;
  };
  const auto da = degrees(a), db = degrees(b);
  auto count = [](const auto& m, std::size_t t, std::size_t h) {
    auto it = m.find({t, h});
    return it == m.end() ? std::size_t{0} : it->second.size();
  };

  std::vector<std::size_t> vmap(n, 0);
  std::vector<bool> used(n, false);

  auto emit_arc_maps = [&]() {
    // Parallel arcs may be matched in any order.
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (const auto& [key, arcs] : ma) groups.emplace_back(arcs, mb.at({vmap[key.first], vmap[key.second]}));
    std::vector<std::size_t> amap(a.arcs.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (out.size() >= limit) return;
      if (gi == groups.size()) {
        out.push_back(SchemeIsomorphism{a.order, b.order, vmap, amap});
        return;
      }
      auto targets = groups[gi].second;
      std::sort(targets.begin(), targets.end());
      do {
        for (std::size_t j = 0; j < targets.size(); ++j) amap[groups[gi].first[j]] = targets[j];
        rec(gi + 1);
      } while (out.size() < limit && std::next_permutation(targets.begin(), targets.end()));
    };
    rec(0);
  };

  std::function<void(std::size_t)> assign = [&](std::size_t v) {
    if (out.size() >= limit) return;
    if (v == n) {
      emit_arc_maps();
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w] || da[v] != db[w]) continue;
      bool fits = true;
      for (std::size_t u = 0; u < v && fits; ++u) {
        fits = count(ma, u, v) == count(mb, vmap[u], w) && count(ma, v, u) == count(mb, w, vmap[u]);
      }
      if (!fits) continue;
      used[w] = true;
      vmap[v] = w;
      assign(v + 1);
      used[w] = false;
    }
  };
  assign(0);
  return out;
}

namespace {

/// For each arc of `next`, the walk it spells through the arcs of `prev`,
/// read between consecutive windows that are vertices of `prev`. Empty
/// optional when the walk does not decompose.
std::optional<std::vector<std::vector<std::size_t>>> transition_walks(const RauzyScheme& prev,
                                                                     const RauzyScheme& next) {
  const std::size_t e = prev.order;
  std::unordered_map<FiniteWord, std::size_t, FiniteWordHash> node;
  for (std::size_t v = 0; v < prev.vertices.size(); ++v) node.emplace(prev.vertices[v], v);
  std::map<std::pair<std::size_t, Symbol>, std::size_t> leaving;
  for (std::size_t i = 0; i < prev.arcs.size(); ++i) {
    leaving[{prev.arcs[i].tail, prev.arcs[i].word[e]}] = i;
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& arc : next.arcs) {
    std::vector<std::size_t> walk;
    const FiniteWord& w = arc.word;
    std::optional<std::pair<std::size_t, std::size_t>> last;  // (position, node)
    for (std::size_t t = 0; t + e <= w.size(); ++t) {
      auto it = node.find(FiniteWord(w.begin() + static_cast<std::ptrdiff_t>(t),
                                     w.begin() + static_cast<std::ptrdiff_t>(t + e)));
      if (it == node.end()) continue;
      if (last) {
        if (last->first + e >= w.size()) return std::nullopt;
        auto l = leaving.find({last->second, w[last->first + e]});
        if (l == leaving.end() || prev.arcs[l->second].chain_length != t - last->first ||
            prev.arcs[l->second].head != it->second) {
          return std::nullopt;
        }
        walk.push_back(l->second);
      }
      last = std::make_pair(t, it->second);
    }
    out.push_back(std::move(walk));
  }
  return out;
}

bool commutes(const SchemeIsomorphism& phi, const SchemeIsomorphism& psi,
              const std::vector<std::vector<std::size_t>>& walks_from,
              const std::vector<std::vector<std::size_t>>& walks_to) {
  for (std::size_t a = 0; a < walks_from.size(); ++a) {
    const auto& image = walks_to[psi.arc_map[a]];
    const auto& source = walks_from[a];
    if (image.size() != source.size()) return false;
    for (std::size_t j = 0; j < source.size(); ++j) {
      if (phi.arc_map[source[j]] != image[j]) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<SchemePeriodicity> detect_scheme_periodicity(const FactorIndex& index, std::size_t k_max) {
  if (k_max < 1) throw PreconditionError("scheme periodicity needs k_max >= 1");
  if (k_max + 1 > index.horizon()) {
    throw HorizonError("scheme periodicity up to k=" + std::to_string(k_max) + " needs horizon " +
                       std::to_string(k_max + 1));
  }
  std::vector<std::size_t> events;
  std::vector<RauzyScheme> schemes;
  std::optional<std::size_t> quiet_from;  // graphs stop branching from here on
  for (std::size_t k = 1; k <= k_max; ++k) {
    RauzyGraph g = build_rauzy_graph(index, k);
    if (g.has_branching()) {
      quiet_from.reset();
    } else if (!quiet_from) {
      quiet_from = k;
    }
    if (g.has_bispecial()) {
      events.push_back(k);
      schemes.push_back(build_scheme(g));
    }
  }
  if (quiet_from) {
    SchemePeriodicity out;
    out.period = 1;
    out.onset_order = *quiet_from;
    out.event_orders = events;
    return out;
  }

  const std::size_t n = events.size();
  std::vector<std::vector<std::vector<std::size_t>>> walks;  // walks[i]: Gamma_{i+1} through Gamma_i
  std::vector<bool> walks_ok;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto w = transition_walks(schemes[i], schemes[i + 1]);
    walks_ok.push_back(w.has_value());
    walks.push_back(w ? std::move(*w) : std::vector<std::vector<std::size_t>>{});
  }

  for (std::size_t p = 1; p < n; ++p) {
    std::vector<std::vector<SchemeIsomorphism>> isos(n - p);
    for (std::size_t i = 0; i + p < n; ++i) isos[i] = scheme_isomorphisms(schemes[i], schemes[i + p]);
    for (std::size_t start = 0; start + p < n; ++start) {
      const std::size_t last = n - 1 - p;  // maps Gamma_i -> Gamma_{i+p} for start <= i <= last
      // Evidence threshold: two full periods of commuting steps, over at
      // least half of the indices this period can reach.
      const std::size_t span = last - start + 1;
      if (span < 2 * p + 1 || 2 * span < n - p) break;
      // Forward pass: keep maps at i + 1 that commute with a surviving map at i.
      std::vector<std::vector<std::size_t>> alive(last - start + 1);
      std::vector<std::vector<std::size_t>> parent(last - start + 1);
      for (std::size_t j = 0; j < isos[start].size(); ++j) alive[0].push_back(j);
      bool broken = alive[0].empty();
      for (std::size_t i = start; i < last && !broken; ++i) {
        const std::size_t slot = i - start;
        if (!walks_ok[i] || !walks_ok[i + p]) {
          broken = true;
          break;
        }
        for (std::size_t j = 0; j < isos[i + 1].size(); ++j) {
          for (std::size_t prev : alive[slot]) {
            if (commutes(isos[i][prev], isos[i + 1][j], walks[i], walks[i + p])) {
              alive[slot + 1].push_back(j);
              parent[slot + 1].push_back(prev);
              break;
            }
          }
        }
        broken = alive[slot + 1].empty();
      }
      if (broken) continue;
      SchemePeriodicity out;
      out.period = p;
      out.onset_order = events[start];
      out.event_orders = events;
      std::vector<SchemeIsomorphism> chain(last - start + 1);
      std::size_t pick = 0;
      for (std::size_t slot = last - start + 1; slot-- > 0;) {
        chain[slot] = isos[start + slot][alive[slot][pick]];
        if (slot > 0) {
          std::size_t prev = parent[slot][pick];
          pick = static_cast<std::size_t>(std::find(alive[slot - 1].begin(), alive[slot - 1].end(), prev) -
                                          alive[slot - 1].begin());
        }
      }
      out.certificate = std::move(chain);
      return out;
    }
  }
  return std::nullopt;
}

namespace {

std::string quoted(const Alphabet& alphabet, std::span<const Symbol> word) {
  std::string s = alphabet.render(word);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const RauzyGraph& g, const Alphabet& alphabet) {
  return to_dot(LabelledRauzyGraph::unlabelled(g), alphabet);
}

std::string to_dot(const LabelledRauzyGraph& lg, const Alphabet& alphabet) {
  const RauzyGraph& g = lg.graph;
  std::ostringstream os;
  os << "digraph rauzy_" << g.order() << " {\n";
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    os << "  " << quoted(alphabet, g.vertices()[v]);
    if (lg.marked[v]) os << " [mark=\"−\", xlabel=\"−\"]";
    os << ";\n";
  }
  for (std::size_t a = 0; a < g.arcs().size(); ++a) {
    const RauzyArc& arc = g.arcs()[a];
    os << "  " << quoted(alphabet, g.vertices()[arc.tail]) << " -> " << quoted(alphabet, g.vertices()[arc.head]);
    std::vector<std::string> attrs;
    if (lg.tail_label[a] != Side::none) attrs.push_back(std::string("taillabel=\"") + side_char(lg.tail_label[a]) + "\"");
    if (lg.head_label[a] != Side::none) attrs.push_back(std::string("headlabel=\"") + side_char(lg.head_label[a]) + "\"");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const RauzyScheme& s, const Alphabet& alphabet) {
  std::ostringstream os;
  os << "digraph scheme_" << s.order << " {\n";
  for (const auto& v : s.vertices) os << "  " << quoted(alphabet, v) << " [weight=" << s.order << "];\n";
  for (const auto& a : s.arcs) {
    os << "  " << quoted(alphabet, s.vertices[a.tail]) << " -> " << quoted(alphabet, s.vertices[a.head])
       << " [chain=" << a.chain_length << ", label=" << quoted(alphabet, a.word) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace symdyn
