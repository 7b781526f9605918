#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "symdyn/factor_index.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

struct RauzyArc {
  std::size_t tail = 0;
  std::size_t head = 0;
  FiniteWord word;  // length order + 1; tail = prefix, head = suffix
};

/// Directed graph on words of one length k: arc w runs from its length-k
/// prefix to its length-k suffix. Vertices and arcs are kept in
/// lexicographic order, so ids are stable across runs.
class RauzyGraph {
 public:
  RauzyGraph() = default;
  /// Throws PreconditionError when a word has the wrong length or an arc
  /// endpoint is not among the vertices.
  RauzyGraph(std::size_t order, std::vector<FiniteWord> vertices, std::vector<FiniteWord> arc_words);

  std::size_t order() const { return order_; }
  const std::vector<FiniteWord>& vertices() const { return vertices_; }
  const std::vector<RauzyArc>& arcs() const { return arcs_; }
  std::optional<std::size_t> find_vertex(std::span<const Symbol> word) const;
  std::optional<std::size_t> find_arc(std::span<const Symbol> word) const;

  const std::vector<std::size_t>& in_arcs(std::size_t v) const { return in_[v]; }
  const std::vector<std::size_t>& out_arcs(std::size_t v) const { return out_[v]; }
  std::size_t in_degree(std::size_t v) const { return in_[v].size(); }
  std::size_t out_degree(std::size_t v) const { return out_[v].size(); }
  bool left_branching(std::size_t v) const { return in_degree(v) >= 2; }
  bool right_branching(std::size_t v) const { return out_degree(v) >= 2; }
  bool bispecial(std::size_t v) const { return left_branching(v) && right_branching(v); }
  bool has_bispecial() const;
  bool has_branching() const;

 private:
  std::size_t order_ = 0;
  std::vector<FiniteWord> vertices_;
  std::vector<RauzyArc> arcs_;
  std::vector<std::vector<std::size_t>> in_, out_;
  std::unordered_map<FiniteWord, std::size_t, FiniteWordHash> vertex_id_, arc_id_;
};

/// G_k of the indexed prefix. Needs k + 1 within the index horizon.
RauzyGraph build_rauzy_graph(const FactorIndex& index, std::size_t k);

/// Line graph: one vertex per arc of g, and A -> B whenever head(A) = tail(B).
/// The arc A -> B is named by A extended with the last symbol of B.
RauzyGraph follower(const RauzyGraph& g);

/// Vertex and arc sets of sub are contained in those of super (same order).
bool is_subgraph(const RauzyGraph& sub, const RauzyGraph& super);

enum class Side : unsigned char { none, l, r };
char side_char(Side s);

struct LabellingError : std::runtime_error {
  LabellingError(const std::string& what, FiniteWord vertex)
      : std::runtime_error(what), vertex(std::move(vertex)) {}
  FiniteWord vertex;
};

/// Rauzy graph with l/r labels at the ends of arcs and "−" marks on
/// vertices. head_label[a] labels arc a among the in-arcs of its head,
/// tail_label[a] among the out-arcs of its tail. At every vertex side the
/// labels are either all absent or the vertex has exactly two arcs there,
/// one labelled l and one r.
struct LabelledRauzyGraph {
  RauzyGraph graph;
  std::vector<Side> head_label;
  std::vector<Side> tail_label;
  std::vector<bool> marked;

  static LabelledRauzyGraph unlabelled(RauzyGraph g);
  /// Labels every side with exactly two arcs: l for the smaller extending
  /// symbol, r for the larger.
  static LabelledRauzyGraph lexicographic(RauzyGraph g);

  /// Throws LabellingError naming the first malformed vertex.
  void validate() const;
  std::size_t marked_count() const;
};

/// Labelled follower: in-arcs of a follower vertex u -> v copy the head
/// labels at u, out-arcs copy the tail labels at v, and a mark on v passes
/// to the follower vertices leaving v through an r arc (or through its only
/// arc when v does not branch to the right).
LabelledRauzyGraph label_propagation(const LabelledRauzyGraph& g);

/// Keeps the labels of fol on the arcs that survive in sub, dropping them at
/// sides that stop branching. sub must be a subgraph of fol.graph.
LabelledRauzyGraph restrict_labels(const LabelledRauzyGraph& fol, const RauzyGraph& sub);

enum class Condition { degree_bound = 1, follower = 2, unmarked_pairs = 3, marked_pairs = 4 };
std::string condition_name(Condition c);

struct EvolutionStep {
  std::size_t k = 0;
  bool labelled = false;
  bool degree_bound = true;    // in- and out-degree <= 2
  bool follower = true;        // arcs dropped from Fol(G_k) only at bispecial vertices
  bool unmarked_pairs = true;  // dropped pairs at unmarked bispecials are lr or rl
  bool marked_pairs = true;    // dropped pairs at marked bispecials are ll or rr
  std::size_t bispecial = 0;
  std::size_t dropped = 0;
  std::size_t marked = 0;

  bool ok() const { return degree_bound && follower && unmarked_pairs && marked_pairs; }
  std::optional<Condition> first_failure() const;
};

/// A branching side of a seed vertex whose lexicographic labels were swapped.
struct SeedSwap {
  FiniteWord vertex;
  bool in_arcs = false;
};

struct EvolutionReport {
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  /// Order where labels were seeded.
  std::optional<std::size_t> seed_k;
  std::vector<SeedSwap> seed_swaps;
  std::vector<EvolutionStep> steps;
  std::optional<std::pair<std::size_t, Condition>> first_violation;
  /// Smallest K with every step in [K, k_max] passing.
  std::optional<std::size_t> onset;
  /// No "−" marks on [onset, k_max].
  bool oriented = false;

  bool asymptotically_correct() const { return onset.has_value(); }
};

/// Runs the labelled evolution G_k -> G_{k+1} for k in [k_min, k_max].
/// Labels are seeded at the first order where every branching side has
/// exactly two arcs; among the 2^(sides) swaps of the lexicographic seed
/// the one with the earliest onset is kept (ties: fewest swaps). Needs
/// k_max + 2 within the index horizon.
EvolutionReport check_evolution(const FactorIndex& index, std::size_t k_min, std::size_t k_max);

struct SchemeArc {
  std::size_t tail = 0;
  std::size_t head = 0;
  std::size_t chain_length = 0;  // arcs of the source graph
  FiniteWord word;               // spelled path, length order + chain_length
};

/// Graph with the maximal chains of (1, 1) vertices contracted. A cycle with
/// no branching vertex keeps its lexicographically smallest vertex.
struct RauzyScheme {
  std::size_t order = 0;           // every vertex weight equals this
  std::vector<FiniteWord> vertices;
  std::vector<SchemeArc> arcs;     // sorted by word
  bool degenerate = false;         // source graph had no branching vertex

  std::size_t weight(std::size_t) const { return order; }
  std::size_t total_chain_length() const;
};

RauzyScheme build_scheme(const RauzyGraph& g);

struct SchemeIsomorphism {
  std::size_t from_order = 0;
  std::size_t to_order = 0;
  std::vector<std::size_t> vertex_map;
  std::vector<std::size_t> arc_map;
};

/// All isomorphisms a -> b respecting arc directions, at most limit of them.
std::vector<SchemeIsomorphism> scheme_isomorphisms(const RauzyScheme& a, const RauzyScheme& b,
                                                   std::size_t limit = 100000);

struct SchemePeriodicity {
  std::size_t period = 0;       // in events
  std::size_t onset_order = 0;  // order k of the first event in the periodic run
  std::vector<std::size_t> event_orders;
  std::vector<SchemeIsomorphism> certificate;  // Gamma_i -> Gamma_{i+p}, i from onset
};

/// Events are the orders k <= k_max whose graph has a bispecial vertex;
/// Gamma_i is the scheme at the i-th event. Each arc of Gamma_{i+1} reads as
/// a walk through arcs of Gamma_i. A period p with onset K needs
/// isomorphisms Gamma_i -> Gamma_{i+p} for K <= i, chained so that
/// consecutive maps commute with these walks. The run must reach the last
/// event and hold at least 2p + 1 indices and at least half of the n - p
/// indices available.
/// A prefix whose graphs stop branching reports period 1 at the order where
/// branching stops. Needs k_max + 1 within the index horizon.
std::optional<SchemePeriodicity> detect_scheme_periodicity(const FactorIndex& index, std::size_t k_max);

/// DOT text; vertices named by their quoted factor strings in lexicographic
/// order.
std::string to_dot(const RauzyGraph& g, const Alphabet& alphabet);
/// l/r as taillabel/headlabel edge attributes and mark="−" on vertices.
std::string to_dot(const LabelledRauzyGraph& g, const Alphabet& alphabet);
/// Scheme arcs carry chain length and the spelled word.
std::string to_dot(const RauzyScheme& s, const Alphabet& alphabet);

}  // namespace symdyn
