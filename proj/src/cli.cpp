#include "symdyn/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "symdyn/analysis.hpp"
#include "symdyn/combinatorics.hpp"
#include "symdyn/factor_index.hpp"
#include "symdyn/generators.hpp"
#include "symdyn/rauzy.hpp"

namespace symdyn::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::set<std::string>& analysis_names() {
  static const std::set<std::string> names{"complexity", "balance",  "specials",          "recurrence",
                                           "frequencies", "rauzy",   "evolution",         "scheme-periodicity",
                                           "theorem-verification"};
  return names;
}

std::size_t count_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

template <typename T>
T param(const Json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("analysis parameter \"") + key + "\" has the wrong type");
  }
}

std::vector<RealConstant> parse_coefficients(const Json& spec) {
  if (!spec.contains("coefficients") || !spec.at("coefficients").is_array()) {
    throw ConfigError("polynomial generator needs a \"coefficients\" array (highest degree first)");
  }
  std::vector<RealConstant> lowest_first;
  for (const auto& c : spec.at("coefficients")) lowest_first.push_back(parse_real(c));
  std::reverse(lowest_first.begin(), lowest_first.end());
  while (lowest_first.size() > 1 && lowest_first.back().is_zero()) lowest_first.pop_back();
  return lowest_first;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string iso_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json word_json(const Alphabet& alphabet, std::span<const Symbol> w) { return alphabet.render(w); }

struct Context {
  const ExperimentConfig& config;
  WordStream& word;
  const FactorIndex& index;
  std::map<std::string, std::string>& files;
  Json verdicts = Json::object();
};

std::vector<std::pair<std::size_t, BigInt>> table_of(const FactorIndex& index, std::size_t max_k) {
  std::vector<std::pair<std::size_t, BigInt>> t;
  for (std::size_t k = 1; k <= max_k; ++k) t.emplace_back(k, BigInt(static_cast<unsigned long>(index.count(k))));
  return t;
}

std::vector<std::size_t> k_list(const Json& params, const char* key, std::vector<std::size_t> fallback) {
  if (!params.contains(key)) return fallback;
  const Json& v = params.at(key);
  if (v.is_number_integer()) return {v.get<std::size_t>()};
  if (v.is_array()) return v.get<std::vector<std::size_t>>();
  throw ConfigError(std::string("analysis parameter \"") + key + "\" must be an integer or a list");
}

Json run_complexity(Context& ctx, const Json&) {
  ComplexityReport report = complexity_table(ctx.index, ctx.config.max_k);
  ctx.files["complexity.csv"] = report.to_csv();
  Json rows = Json::array();
  for (const auto& [k, t] : report.table) rows.push_back({k, t});
  return Json{{"prefix_len", report.prefix_len}, {"table", rows}};
}

Json run_balance(Context& ctx, const Json& params, std::optional<bool>& verdict) {
  const std::size_t max_k = param<std::size_t>(params, "max_k", std::min(ctx.config.max_k, ctx.index.horizon()));
  const Alphabet& alphabet = ctx.word.alphabet();
  Json out = Json::object();
  bool all = true;
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    BalanceVerdict v = is_balanced(ctx.index, static_cast<Symbol>(s), max_k);
    Json entry{{"balanced", v.balanced}};
    if (v.k) entry["k"] = *v.k;
    if (v.witness) entry["witness"] = {word_json(alphabet, v.witness->first), word_json(alphabet, v.witness->second)};
    out[alphabet.name(static_cast<Symbol>(s))] = entry;
    all = all && v.balanced;
  }
  if (params.contains("expect")) verdict = all == param<bool>(params, "expect", true);
  return Json{{"max_k", max_k}, {"balanced", all}, {"per_symbol", out}};
}

Json run_specials(Context& ctx, const Json& params) {
  const std::size_t limit = std::min(ctx.config.max_k, ctx.index.horizon() - 1);
  const std::size_t max_k = std::min(param<std::size_t>(params, "max_k", limit), limit);
  const std::size_t list_cap = param<std::size_t>(params, "list_limit", 16);
  const Alphabet& alphabet = ctx.word.alphabet();
  Json rows = Json::array();
  for (std::size_t k = 1; k <= max_k; ++k) {
    SpecialFactors sf = special_factors(ctx.index, k);
    auto bis = sf.bispecial();
    Json words = Json::array();
    for (std::size_t i = 0; i < bis.size() && i < list_cap; ++i) {
      words.push_back({{"word", word_json(alphabet, bis[i].word)},
                       {"left_valence", bis[i].left_valence},
                       {"right_valence", bis[i].right_valence}});
    }
    rows.push_back({{"k", k},
                    {"left_special", sf.left_special().size()},
                    {"right_special", sf.right_special().size()},
                    {"bispecial", bis.size()},
                    {"bispecial_words", words}});
  }
  return rows;
}

Json run_recurrence(Context& ctx, const Json& params) {
  std::vector<std::size_t> fallback;
  for (std::size_t k = 1; k <= std::min<std::size_t>(10, ctx.index.horizon()); ++k) fallback.push_back(k);
  Json rows = Json::array();
  for (std::size_t k : k_list(params, "k", fallback)) {
    auto n = recurrence_function(ctx.index, k);
    rows.push_back({{"k", k}, {"window", n ? Json(*n) : Json(nullptr)}});
  }
  return rows;
}

Json run_frequencies(Context& ctx, const Json&) {
  auto freq = letter_frequencies(ctx.word, ctx.config.prefix_len);
  Json out = Json::object();
  for (std::size_t s = 0; s < freq.size(); ++s) out[ctx.word.alphabet().name(static_cast<Symbol>(s))] = rational_string(freq[s]);
  return out;
}

Json run_rauzy(Context& ctx, const Json& params, std::optional<bool>& verdict) {
  const std::size_t h = ctx.index.horizon();
  if (h < 2) throw HorizonError("Rauzy graphs need an index horizon of at least 2");
  const auto ks = k_list(params, "k", {std::min<std::size_t>(5, h - 1)});
  const bool scheme = param<bool>(params, "scheme", false);
  const Alphabet& alphabet = ctx.word.alphabet();
  Json rows = Json::array();
  bool identities = true;
  for (std::size_t k : ks) {
    RauzyGraph g = build_rauzy_graph(ctx.index, k);
    Json row{{"k", k}, {"vertices", g.vertices().size()}, {"arcs", g.arcs().size()}};
    bool ok = g.vertices().size() == ctx.index.count(k) && g.arcs().size() == ctx.index.count(k + 1);
    if (k + 2 <= h) {
      bool sub = is_subgraph(build_rauzy_graph(ctx.index, k + 1), follower(g));
      row["next_in_follower"] = sub;
      ok = ok && sub;
    }
    row["identities"] = ok;
    identities = identities && ok;
    ctx.files["rauzy_k" + std::to_string(k) + ".dot"] = to_dot(g, alphabet);
    if (scheme) {
      RauzyScheme s = build_scheme(g);
      row["scheme"] = {{"vertices", s.vertices.size()}, {"arcs", s.arcs.size()}, {"degenerate", s.degenerate}};
      ctx.files["scheme_k" + std::to_string(k) + ".dot"] = to_dot(s, alphabet);
    }
    rows.push_back(row);
  }
  if (params.contains("expect")) verdict = identities == param<bool>(params, "expect", true);
  return rows;
}

Json run_evolution(Context& ctx, const Json& params, std::optional<bool>& verdict) {
  const std::size_t h = ctx.index.horizon();
  if (h < 3) throw HorizonError("evolution needs an index horizon of at least 3");
  const std::size_t k_min = param<std::size_t>(params, "k_min", 1);
  const std::size_t k_max = param<std::size_t>(params, "k_max", std::min<std::size_t>(40, h - 2));
  EvolutionReport r = check_evolution(ctx.index, k_min, k_max);
  const Alphabet& alphabet = ctx.word.alphabet();
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    auto failure = s.first_failure();
    steps.push_back({{"k", s.k},
                     {"ok", s.ok()},
                     {"failure", failure ? Json(condition_name(*failure)) : Json(nullptr)},
                     {"bispecial", s.bispecial},
                     {"dropped", s.dropped},
                     {"marked", s.marked}});
  }
  Json swaps = Json::array();
  for (const auto& sw : r.seed_swaps) swaps.push_back({{"vertex", word_json(alphabet, sw.vertex)}, {"side", sw.in_arcs ? "in" : "out"}});
  Json out{{"k_min", k_min},
           {"k_max", k_max},
           {"seed_k", r.seed_k ? Json(*r.seed_k) : Json(nullptr)},
           {"seed_swaps", swaps},
           {"onset", r.onset ? Json(*r.onset) : Json(nullptr)},
           {"oriented", r.oriented},
           {"first_violation", r.first_violation ? Json{{"k", r.first_violation->first},
                                                        {"condition", condition_name(r.first_violation->second)}}
                                                  : Json(nullptr)},
           {"steps", steps}};
  if (params.contains("expect")) {
    const std::string expect = param<std::string>(params, "expect", "correct");
    if (expect != "correct" && expect != "oriented") throw ConfigError("evolution expect must be correct or oriented");
    bool ok = r.onset.has_value() && (expect == "correct" || r.oriented);
    if (params.contains("max_onset")) ok = ok && *r.onset <= param<std::size_t>(params, "max_onset", 0);
    verdict = ok;
  }
  return out;
}

Json run_scheme_periodicity(Context& ctx, const Json& params, std::optional<bool>& verdict) {
  const std::size_t h = ctx.index.horizon();
  if (h < 2) throw HorizonError("scheme periodicity needs an index horizon of at least 2");
  const std::size_t k_max = param<std::size_t>(params, "k_max", std::min(ctx.config.max_k, h - 1));
  auto found = detect_scheme_periodicity(ctx.index, k_max);
  Json out{{"k_max", k_max}, {"found", found.has_value()}};
  if (found) {
    Json cert = Json::array();
    for (const auto& iso : found->certificate) {
      cert.push_back({{"from_order", iso.from_order}, {"to_order", iso.to_order},
                      {"vertex_map", iso.vertex_map}, {"arc_map", iso.arc_map}});
    }
    out["period"] = found->period;
    out["onset_order"] = found->onset_order;
    out["event_orders"] = found->event_orders;
    out["certificate"] = cert;
  }
  if (params.contains("expect")) {
    bool ok = found.has_value() == param<bool>(params, "expect", true);
    if (found && params.contains("max_period")) ok = ok && found->period <= param<std::size_t>(params, "max_period", 0);
    if (found && params.contains("max_onset")) ok = ok && found->onset_order <= param<std::size_t>(params, "max_onset", 0);
    verdict = ok;
  }
  return out;
}

std::size_t generator_degree(const Json& gen) {
  if (gen.contains("coefficients")) return parse_coefficients(gen).size() - 1;
  return 0;
}

/// Leading coefficient of k -> theorem_q(k, m), read off its own difference
/// table.
Rational theorem_q_leading(std::size_t m) {
  const std::size_t degree = m * (m + 1) / 2;
  std::vector<std::pair<std::size_t, BigInt>> table;
  for (std::size_t k = m - 1; k <= m - 1 + degree + 6; ++k) table.emplace_back(k, theorem_q(k, m));
  auto fit = detect_eventual_polynomial(table, degree, degree + 2);
  if (!fit) throw std::logic_error("theorem_q table has no polynomial fit");
  return fit->leading_coefficient();
}

Json run_theorem(Context& ctx, const Json& params, std::optional<bool>& verdict) {
  const std::string formula = param<std::string>(params, "formula", "");
  const std::size_t max_k = ctx.config.max_k;
  VerificationReport rep;
  rep.parameters["prefix_len"] = ctx.config.prefix_len;
  rep.parameters["max_k"] = max_k;
  rep.empirical_table = table_of(ctx.index, max_k);

  if (formula == "sturmian" || formula == "iet") {
    const std::size_t r = formula == "sturmian" ? 2 : param<std::size_t>(params, "intervals", ctx.word.alphabet().size());
    rep.formula = formula == "sturmian" ? "T(k) = k + 1" : "T(k) = (r - 1) k + 1";
    rep.parameters["r"] = r;
    rep.verdict = true;
    for (const auto& [k, t] : rep.empirical_table) rep.verdict = rep.verdict && t == BigInt(static_cast<unsigned long>((r - 1) * k + 1));
    rep.fitted_polynomial = detect_eventual_polynomial(rep.empirical_table, 1, std::min<std::size_t>(6, max_k));
  } else if (formula == "arnoux-mauduit") {
    const std::size_t d = param<std::size_t>(params, "d", ctx.config.generator.value("d", 2));
    const std::size_t exact = std::min(param<std::size_t>(params, "exact_upto", 8), max_k);
    const std::size_t bound = std::min(param<std::size_t>(params, "bound_upto", max_k), max_k);
    rep.formula = "T(n) = p_d(n) for n <= exact_upto, T(n) <= p_d(n) for n <= bound_upto";
    rep.parameters["d"] = d;
    rep.parameters["exact_upto"] = exact;
    rep.parameters["bound_upto"] = bound;
    rep.verdict = true;
    Json reference = Json::array();
    for (const auto& [k, t] : rep.empirical_table) {
      BigInt p = arnoux_mauduit_pd(k, d);
      reference.push_back({{"k", k}, {"p_d", p.get_si()}});
      if (k <= exact && t != p) rep.verdict = false;
      if (k <= bound && t > p) rep.verdict = false;
    }
    rep.parameters["reference"] = reference;
  } else if (formula == "unipotent") {
    const std::size_t m = param<std::size_t>(params, "m", generator_degree(ctx.config.generator));
    if (m < 1) throw ConfigError("unipotent verification needs m >= 1 (or a polynomial generator)");
    const std::size_t degree = m * (m + 1) / 2;
    const std::size_t max_degree = param<std::size_t>(params, "max_degree", degree + 1);
    const std::size_t min_run = param<std::size_t>(params, "min_run", std::max<std::size_t>(6, max_degree + 2));
    const Rational lead = theorem_q_leading(m);
    rep.formula = "T(k) = Q(k) for large k, deg Q = m(m+1)/2, leading coefficient of theorem_q";
    rep.parameters["m"] = m;
    rep.parameters["expected_degree"] = degree;
    rep.parameters["max_degree"] = max_degree;
    rep.parameters["min_run"] = min_run;
    rep.parameters["theorem_q_leading_coefficient"] = rational_string(lead);
    rep.fitted_polynomial = detect_eventual_polynomial(rep.empirical_table, max_degree, min_run);
    rep.verdict = rep.fitted_polynomial && rep.fitted_polynomial->degree == degree &&
                  rep.fitted_polynomial->leading_coefficient() == lead;
    if (!rep.fitted_polynomial) rep.notes.push_back("no difference row of order <= max_degree is constant over a run of min_run values");
  } else {
    throw ConfigError("theorem-verification formula must be sturmian, iet, arnoux-mauduit or unipotent");
  }
  verdict = rep.verdict;
  Json out = rep.to_json();

  if (formula == "unipotent" && param<bool>(params, "compare_difference_word", false)) {
    // Same polynomial through the 2^m-letter difference word; informational.
    const std::size_t m = rep.parameters["m"].get<std::size_t>();
    Json gen = ctx.config.generator;
    gen["type"] = "difference";
    gen["d"] = m;
    Precision precision{64, ctx.config.precision_cap};
    WordStream dw = make_generator(gen, precision);
    FactorIndex di = FactorIndex::from_stream(dw, ctx.config.prefix_len, max_k);
    auto dtable = table_of(di, max_k);
    Json rows = Json::array();
    for (const auto& [k, t] : dtable) {
      rows.push_back({{"k", k}, {"T", t.get_si()}, {"p_m", arnoux_mauduit_pd(k, m).get_si()},
                      {"theorem_q_shifted", theorem_q(k + m - 1, m).get_si()}});
    }
    auto dfit = detect_eventual_polynomial(dtable, rep.parameters["max_degree"].get<std::size_t>(),
                                           rep.parameters["min_run"].get<std::size_t>());
    out["difference_word"] = {{"table", rows}, {"fitted_polynomial", dfit ? fit_to_json(*dfit) : Json(nullptr)}};
  }
  return out;
}

WordStream make_substitution_limit(const Json& spec) {
  std::vector<std::size_t> ks;
  std::vector<SubstitutionKind> kinds;
  if (!spec.contains("k_sequence")) throw ConfigError("substitution_limit needs \"k_sequence\"");
  ks = spec.at("k_sequence").get<std::vector<std::size_t>>();
  for (const auto& k : spec.value("kinds", Json::array({"a"}))) {
    const std::string s = k.get<std::string>();
    if (s != "a" && s != "b") throw ConfigError("substitution kinds are \"a\" or \"b\"");
    kinds.push_back(s == "a" ? SubstitutionKind::a_type : SubstitutionKind::b_type);
  }
  const std::size_t steps = count_field(spec, "steps");
  if (steps > 64) throw ConfigError("substitution_limit steps above 64 are not supported");
  FiniteWord w = sturmian_substitution_limit(ks, kinds, steps);
  return finite_word_stream(std::move(w), sturmian_alphabet(), "substitution_limit(steps=" + std::to_string(steps) + ")");
}

}  // namespace

RealConstant parse_real(const Json& j) {
  if (j.is_number_integer()) return RealConstant(j.get<long>());
  if (j.is_number_float()) throw ConfigError("real literals must be exact: use an integer or a \"p/q\" string");
  if (j.is_string()) {
    try {
      Rational q(j.get<std::string>());
      if (q.get_den() == 0) throw ConfigError("zero denominator in \"" + j.get<std::string>() + "\"");
      q.canonicalize();
      return RealConstant(q);
    } catch (const std::invalid_argument&) {
      throw ConfigError("cannot read rational literal \"" + j.get<std::string>() + "\"");
    }
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "sqrt" && key != "num" && key != "den") throw ConfigError("unknown key \"" + key + "\" in real literal");
    }
    if (!j.contains("sqrt") || !j.at("sqrt").is_number_integer() || j.at("sqrt").get<long long>() < 0 ||
        j.at("sqrt").get<long long>() > 1000000000000LL) {
      throw ConfigError("\"sqrt\" must be an integer in [0, 10^12]");
    }
    // num and den may be strings so coefficients can exceed 64 bits.
    auto integer = [&](const char* key) -> BigInt {
      if (!j.contains(key)) return 1;
      const Json& v = j.at(key);
      if (v.is_number_integer()) return BigInt(v.get<long>());
      if (v.is_string()) {
        try {
          return BigInt(v.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
      }
      throw ConfigError(std::string("\"") + key + "\" must be an integer or an integer string");
    };
    const BigInt num = integer("num"), den = integer("den");
    if (den == 0) throw ConfigError("zero denominator in real literal");
    Rational c(num, den);
    c.canonicalize();
    return RealConstant::sqrt(j.at("sqrt").get<std::uint64_t>(), c);
  }
  if (j.is_array()) {
    RealConstant sum;
    for (const auto& term : j) sum += parse_real(term);
    return sum;
  }
  throw ConfigError("unsupported real literal " + j.dump());
}

WordStream make_generator(const Json& spec, Precision precision) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) {
    throw ConfigError("generator needs a string \"type\"");
  }
  const std::string type = spec.at("type").get<std::string>();
  try {
    if (type == "mechanical") {
      if (!spec.contains("alpha")) throw ConfigError("mechanical generator needs \"alpha\"");
      RealConstant alpha = parse_real(spec.at("alpha"));
      RealConstant x0 = spec.contains("x0") ? parse_real(spec.at("x0")) : RealConstant();
      MechanicalParams p = MechanicalParams::canonical(alpha, x0);
      if (spec.contains("arc")) {
        const Json& arc = spec.at("arc");
        if (!arc.is_array() || arc.size() != 2) throw ConfigError("\"arc\" must be [begin, end]");
        p.arc_begin = parse_real(arc[0]);
        p.arc_end = parse_real(arc[1]);
      }
      return mechanical_word(p, precision);
    }
    if (type == "morphic") {
      if (!spec.contains("rules") || !spec.at("rules").is_object()) throw ConfigError("morphic generator needs \"rules\"");
      std::map<std::string, std::string> rules;
      for (const auto& [from, to] : spec.at("rules").items()) rules[from] = to.get<std::string>();
      Morphism m = Morphism::from_strings(rules);
      const std::string seed = spec.value("seed", std::string());
      auto id = m.alphabet.find(seed);
      if (!id) throw ConfigError("morphic seed \"" + seed + "\" is not a rule symbol");
      return morphic_fixed_point(m, *id);
    }
    if (type == "iet") {
      if (!spec.contains("lengths") || !spec.contains("permutation")) {
        throw ConfigError("iet generator needs \"lengths\" and \"permutation\"");
      }
      IETSpec s;
      for (const auto& l : spec.at("lengths")) s.lengths.push_back(parse_real(l));
      s.permutation = spec.at("permutation").get<std::vector<std::size_t>>();
      RealConstant x0 = spec.contains("x0") ? parse_real(spec.at("x0")) : RealConstant();
      return iet_coding(s, x0, precision);
    }
    if (type == "polynomial_binary") return polynomial_binary_word(PolynomialSpec{parse_coefficients(spec)}, precision);
    if (type == "difference") {
      return difference_word(PolynomialSpec{parse_coefficients(spec)}, count_field(spec, "d"), precision);
    }
    if (type == "torus") {
      if (spec.contains("coefficients")) {
        return torus_skew_coding(derive_skew_spec(PolynomialSpec{parse_coefficients(spec)}, precision), precision);
      }
      if (!spec.contains("epsilon") || !spec.contains("initial")) {
        throw ConfigError("torus generator needs \"coefficients\" or \"epsilon\" with \"initial\"");
      }
      TorusSkewSpec s;
      s.epsilon = parse_real(spec.at("epsilon"));
      for (const auto& x : spec.at("initial")) s.initial.push_back(parse_real(x));
      s.dimension = s.initial.size();
      return torus_skew_coding(s, precision);
    }
    if (type == "substitution_limit") return make_substitution_limit(spec);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("generator spec: " + std::string(e.what()));
  }
  throw ConfigError("unknown generator type \"" + type + "\"");
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"generator", "prefix_len", "max_k", "analyses", "output",
                                           "precision_cap", "seed", "description"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config field \"" + key + "\"");
  }
  ExperimentConfig c;
  if (!j.contains("generator")) throw ConfigError("missing field \"generator\"");
  c.generator = j.at("generator");
  c.prefix_len = count_field(j, "prefix_len");
  c.max_k = count_field(j, "max_k");
  if (j.contains("analyses")) {
    if (!j.at("analyses").is_array()) throw ConfigError("\"analyses\" must be an array");
    for (const auto& a : j.at("analyses")) {
      AnalysisSpec spec;
      if (a.is_string()) {
        spec.name = a.get<std::string>();
      } else if (a.is_object() && a.contains("name") && a.at("name").is_string()) {
        spec.name = a.at("name").get<std::string>();
        spec.params = a;
        spec.params.erase("name");
      } else {
        throw ConfigError("each analysis is a name or an object with \"name\"");
      }
      c.analyses.push_back(std::move(spec));
    }
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("\"output\" must be an object");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("output dir must be a string");
      c.out_dir = o.at("dir").get<std::string>();
    }
  }
  if (j.contains("precision_cap")) c.precision_cap = static_cast<int>(count_field(j, "precision_cap"));
  if (j.contains("seed")) c.seed = count_field(j, "seed");
  c.validate();
  return c;
}

Json ExperimentConfig::to_json() const {
  Json analyses_json = Json::array();
  for (const auto& a : analyses) {
    if (a.params.empty()) {
      analyses_json.push_back(a.name);
    } else {
      Json o{{"name", a.name}};
      for (const auto& [k, v] : a.params.items()) o[k] = v;
      analyses_json.push_back(o);
    }
  }
  return Json{{"generator", generator},     {"prefix_len", prefix_len},       {"max_k", max_k},
              {"analyses", analyses_json},  {"output", {{"dir", out_dir}}},   {"precision_cap", precision_cap},
              {"seed", seed}};
}

void ExperimentConfig::validate() const {
  if (prefix_len < 1) throw ConfigError("prefix_len must be at least 1");
  if (max_k < 1) throw ConfigError("max_k must be at least 1");
  if (max_k > prefix_len) {
    throw ConfigError("max_k " + std::to_string(max_k) + " exceeds prefix_len " + std::to_string(prefix_len));
  }
  if (precision_cap < 64) throw ConfigError("precision_cap must be at least 64 bits");
  if (!generator.is_object() || !generator.contains("type")) throw ConfigError("generator needs a \"type\"");
  for (const auto& a : analyses) {
    if (!analysis_names().count(a.name)) throw ConfigError("unknown analysis \"" + a.name + "\"");
  }
}

void Overrides::apply(ExperimentConfig& config) const {
  if (prefix_len) config.prefix_len = *prefix_len;
  if (max_k) config.max_k = *max_k;
  if (precision_cap) config.precision_cap = *precision_cap;
  if (out_dir) config.out_dir = *out_dir;
}

RunOutcome execute(const ExperimentConfig& config) {
  RunOutcome outcome;
  const auto started = std::chrono::steady_clock::now();
  try {
    config.validate();
    Precision precision{64, config.precision_cap};
    WordStream word = make_generator(config.generator, precision);
    auto prefix = word.prefix(config.prefix_len);
    FiniteWord text(prefix.begin(), prefix.end());
    const std::size_t horizon = std::min(config.prefix_len, config.max_k + 2);
    FactorIndex index(text, horizon);

    std::map<std::string, std::string> files;
    Context ctx{config, word, index, files};
    Json analyses = Json::object();
    std::map<std::string, int> seen;
    for (const auto& spec : config.analyses) {
      std::string key = spec.name;
      if (++seen[spec.name] > 1) key += "#" + std::to_string(seen[spec.name]);
      std::optional<bool> verdict;
      Json result;
      if (spec.name == "complexity") {
        result = run_complexity(ctx, spec.params);
      } else if (spec.name == "balance") {
        result = run_balance(ctx, spec.params, verdict);
      } else if (spec.name == "specials") {
        result = run_specials(ctx, spec.params);
      } else if (spec.name == "recurrence") {
        result = run_recurrence(ctx, spec.params);
      } else if (spec.name == "frequencies") {
        result = run_frequencies(ctx, spec.params);
      } else if (spec.name == "rauzy") {
        result = run_rauzy(ctx, spec.params, verdict);
      } else if (spec.name == "evolution") {
        result = run_evolution(ctx, spec.params, verdict);
      } else if (spec.name == "scheme-periodicity") {
        result = run_scheme_periodicity(ctx, spec.params, verdict);
      } else {
        result = run_theorem(ctx, spec.params, verdict);
      }
      analyses[key] = result;
      if (verdict) ctx.verdicts[key] = *verdict ? "PASS" : "FAIL";
    }

    bool failed = false;
    for (const auto& [key, v] : ctx.verdicts.items()) failed = failed || v == "FAIL";
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    Json report;
    report["version"] = kVersion;
    report["config"] = config.to_json();
    report["generator"] = word.describe();
    report["alphabet"] = word.alphabet().names();
    report["precision"] = {{"cap_bits", config.precision_cap}, {"max_bits_used", word.precision_bits_used()}};
    report["analyses"] = analyses;
    report["verdicts"] = ctx.verdicts;
    report["verdict"] = ctx.verdicts.empty() ? "NONE" : (failed ? "FAIL" : "PASS");
    report["run_info"] = {{"timestamp", iso_timestamp()}, {"elapsed_seconds", elapsed}};

    files["prefix.txt"] = word.alphabet().render(text) + "\n";
    files["report.json"] = report.dump(2) + "\n";
    outcome.exit_code = failed ? 1 : 0;
    outcome.report = std::move(report);
    outcome.files = std::move(files);
    outcome.message = failed ? "verification failed" : "ok";
  } catch (const PrecisionExhausted& e) {
    outcome = RunOutcome{2, std::string("precision exhausted: ") + e.what(), Json{{"error", e.what()}}, {}};
  } catch (const ConfigError& e) {
    outcome = RunOutcome{2, std::string("invalid config: ") + e.what(), Json{{"error", e.what()}}, {}};
  } catch (const PreconditionError& e) {
    outcome = RunOutcome{2, std::string("invalid config: ") + e.what(), Json{{"error", e.what()}}, {}};
  } catch (const HorizonError& e) {
    outcome = RunOutcome{2, std::string("horizon error: ") + e.what(), Json{{"error", e.what()}}, {}};
  } catch (const nlohmann::json::exception& e) {
    outcome = RunOutcome{2, std::string("invalid config: ") + e.what(), Json{{"error", e.what()}}, {}};
  }
  return outcome;
}

void write_outputs(const RunOutcome& outcome, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : outcome.files) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
    out << contents;
  }
}

std::vector<std::string> suite_names() { return {"sturmian", "iet", "arnoux-mauduit", "unipotent"}; }

ExperimentConfig builtin_suite(const std::string& name) {
  const Json sqrt2_minus_1 = Json::array({Json{{"sqrt", 2}}, -1});
  Json j;
  if (name == "sturmian") {
    j = {{"generator", {{"type", "mechanical"}, {"alpha", sqrt2_minus_1}, {"x0", 0}}},
         {"prefix_len", 10000},
         {"max_k", 200},
         {"analyses", Json::array({"complexity",
                                   {{"name", "balance"}, {"max_k", 100}, {"expect", true}},
                                   {{"name", "theorem-verification"}, {"formula", "sturmian"}}})}};
  } else if (name == "iet") {
    Json lengths = Json::array({sqrt2_minus_1,
                                Json::array({Json{{"sqrt", 3}}, Json{{"sqrt", 2}, {"num", -1}}}),
                                Json::array({2, Json{{"sqrt", 3}, {"num", -1}}})});
    j = {{"generator", {{"type", "iet"}, {"lengths", lengths}, {"permutation", {3, 2, 1}}, {"x0", 0}}},
         {"prefix_len", 10000},
         {"max_k", 100},
         {"analyses", Json::array({"complexity",
                                   {{"name", "theorem-verification"}, {"formula", "iet"}},
                                   {{"name", "evolution"}, {"k_min", 1}, {"k_max", 40}, {"expect", "oriented"},
                                    {"max_onset", 10}}})}};
  } else if (name == "arnoux-mauduit") {
    // 10^6 symbols undersample the length-6+ factors; 10^7 reaches p_2 up to n = 12.
    j = {{"generator", {{"type", "difference"}, {"coefficients", Json::array({Json{{"sqrt", 2}}, 0, 0})}, {"d", 2}}},
         {"prefix_len", 10000000},
         {"max_k", 12},
         {"analyses", Json::array({"complexity",
                                   {{"name", "theorem-verification"}, {"formula", "arnoux-mauduit"},
                                    {"exact_upto", 8}, {"bound_upto", 12}}})}};
  } else if (name == "unipotent") {
    j = {{"generator", {{"type", "polynomial_binary"}, {"coefficients", Json::array({Json{{"sqrt", 2}}, 0, 0})}}},
         {"prefix_len", 1000000},
         {"max_k", 30},
         {"analyses", Json::array({"complexity",
                                   {{"name", "theorem-verification"}, {"formula", "unipotent"}, {"m", 2},
                                    {"max_degree", 4}, {"min_run", 6}, {"compare_difference_word", true}}})}};
  } else {
    throw ConfigError("unknown suite \"" + name + "\" (expected sturmian, iet, arnoux-mauduit or unipotent)");
  }
  j["output"] = {{"dir", "out/verify-" + name}};
  return ExperimentConfig::from_json(j);
}

namespace {

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void print_summary(const RunOutcome& outcome, std::ostream& out) {
  for (const auto& [key, v] : outcome.report["verdicts"].items()) out << v.get<std::string>() << " " << key << "\n";
  out << "verdict: " << outcome.report["verdict"].get<std::string>() << "\n";
}

int finish(const RunOutcome& outcome, const std::string& dir, std::ostream& out, std::ostream& err) {
  if (outcome.exit_code == 2) {
    err << "error: " << outcome.message << "\n";
    return 2;
  }
  try {
    write_outputs(outcome, dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  print_summary(outcome, out);
  out << "wrote " << outcome.files.size() << " files to " << dir << "\n";
  return outcome.exit_code;
}

}  // namespace

int run_command(const std::string& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    Json j = load_json(config_path);
    // Overrides apply before validation, so parse leniently first.
    if (j.is_object()) {
      if (overrides.prefix_len) j["prefix_len"] = *overrides.prefix_len;
      if (overrides.max_k) j["max_k"] = *overrides.max_k;
      if (overrides.precision_cap) j["precision_cap"] = *overrides.precision_cap;
      if (overrides.out_dir) j["output"]["dir"] = *overrides.out_dir;
    }
    config = ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
    return 2;
  }
  return finish(execute(config), config.out_dir, out, err);
}

int verify_command(const std::string& suite, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = builtin_suite(suite);
    overrides.apply(config);
    config.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return finish(execute(config), config.out_dir, out, err);
}

int graph_command(const std::string& config_path, std::size_t k, const std::string& out_file, bool scheme,
                  const Overrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    Json j = load_json(config_path);
    if (j.is_object()) {
      if (overrides.prefix_len) j["prefix_len"] = *overrides.prefix_len;
      if (overrides.max_k) j["max_k"] = *overrides.max_k;
      if (overrides.precision_cap) j["precision_cap"] = *overrides.precision_cap;
    }
    ExperimentConfig config = ExperimentConfig::from_json(j);
    Precision precision{64, config.precision_cap};
    WordStream word = make_generator(config.generator, precision);
    const std::size_t horizon = std::min(config.prefix_len, config.max_k + 2);
    if (k < 1 || k + 1 > horizon) {
      throw HorizonError("k=" + std::to_string(k) + " outside the config horizon (need 1 <= k <= " +
                         std::to_string(horizon - 1) + ")");
    }
    FactorIndex index = FactorIndex::from_stream(word, config.prefix_len, horizon);
    RauzyGraph g = build_rauzy_graph(index, k);
    const std::string dot = scheme ? to_dot(build_scheme(g), word.alphabet()) : to_dot(g, word.alphabet());
    std::ofstream file(out_file, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + out_file);
    file << dot;
    out << "wrote " << (scheme ? "scheme" : "graph") << " of order " << k << " to " << out_file << "\n";
    return 0;
  } catch (const PrecisionExhausted& e) {
    err << "error: precision exhausted: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "error: invalid config: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "error: invalid config: " << e.what() << "\n";
  } catch (const HorizonError& e) {
    err << "error: horizon error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid config: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace symdyn::cli
