// Copyright 2026 The Roadshake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "roadshake/sbt.hpp"

namespace roadshake {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 4> kObjectiveNames{"avg_abs_xte", "time_to_failure",
                                                     "criticality", "max_xte"};
constexpr std::array<const char*, kGeneCount> kGeneNames{"turns", "curvature", "intensity",
                                                         "ordinal"};

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

int turn_magnitude(double threshold) { return static_cast<int>(std::ceil(threshold)); }

}  // namespace

// ---- config ---------------------------------------------------------------

void SearchConfig::validate() const {
  require(population >= 4 && population % 2 == 0, "population", "must be even and at least 4");
  require(generations >= 0, "generations", "must not be negative");
  require(crossover_prob >= 0.0 && crossover_prob <= 1.0, "crossover_prob", "must lie in [0, 1]");
  require(mutation_prob >= 0.0 && mutation_prob <= 1.0, "mutation_prob", "must lie in [0, 1]");
  require(crossover_eta >= 0.0, "crossover_eta", "must not be negative");
  require(mutation_eta >= 0.0, "mutation_eta", "must not be negative");
  require(turn_threshold > 0.0 && turn_threshold <= kMaxRoadAngle, "turn_threshold",
          "must lie in (0, " + std::to_string(kMaxRoadAngle) + "]");
  require(lane_width > 0.0, "lane_width", "must be positive");
}

json search_config_to_json(const SearchConfig& c) {
  json dirs = json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    dirs[kObjectiveNames[i]] = c.directions[i] == Direction::Maximize ? "maximize" : "minimize";
  }
  return {{"population", c.population},
          {"generations", c.generations},
          {"crossover_eta", c.crossover_eta},
          {"mutation_eta", c.mutation_eta},
          {"crossover_prob", c.crossover_prob},
          {"mutation_prob", c.mutation_prob},
          {"seed", c.seed},
          {"directions", dirs},
          {"episode", episode_config_to_json(c.episode)},
          {"turn_threshold", c.turn_threshold},
          {"lane_width", c.lane_width}};
}

SearchConfig search_config_from_json(const json& j) {
  SearchConfig c;
  require(j.is_object(), "search", "expected an object");
  auto field = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    try {
      out = j.at(key).get<std::decay_t<decltype(out)>>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("search.") + key, "wrong type");
    }
  };
  field("population", c.population);
  field("generations", c.generations);
  field("crossover_eta", c.crossover_eta);
  field("mutation_eta", c.mutation_eta);
  field("crossover_prob", c.crossover_prob);
  field("mutation_prob", c.mutation_prob);
  field("seed", c.seed);
  field("turn_threshold", c.turn_threshold);
  field("lane_width", c.lane_width);
  field("jobs", c.jobs);
  if (j.contains("episode")) c.episode = episode_config_from_json(j.at("episode"));
  if (j.contains("directions")) {
    const json& d = j.at("directions");
    require(d.is_object(), "search.directions", "expected an object");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!d.contains(kObjectiveNames[i])) continue;
      const json& v = d.at(kObjectiveNames[i]);
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      require(s == "maximize" || s == "minimize",
              ("search.directions." + std::string(kObjectiveNames[i])).c_str(),
              "expected \"maximize\" or \"minimize\"");
      c.directions[i] = s == "maximize" ? Direction::Maximize : Direction::Minimize;
    }
  }
  c.validate();
  return c;
}

// ---- decoding -------------------------------------------------------------

GeneBounds bounds_for(const OrdinalTable& table) {
  if (table.rows.empty()) throw ConfigError("ordinal_table", "table is empty");
  GeneBounds b;
  b.upper[3] = static_cast<int>(table.rows.size()) - 1;
  return b;
}

std::pair<int, int> feasible_angle_sum(int turns, double turn_threshold) {
  const int t = turn_magnitude(turn_threshold);
  const int straight_max = t - 1;
  return {turns * t, turns * kMaxRoadAngle + (kRoadSegments - turns) * straight_max};
}

DecodedTest decode(const Genes& genes, const OrdinalTable& table, std::uint64_t decode_seed,
                   double turn_threshold, double lane_width) {
  const GeneBounds bounds = bounds_for(table);
  for (int i = 0; i < kGeneCount; ++i) {
    if (genes[i] < bounds.lower[i] || genes[i] > bounds.upper[i]) {
      throw ConfigError(std::string("genes.") + kGeneNames[i],
                        std::to_string(genes[i]) + " out of bounds");
    }
  }
  const int turns = genes[0];
  const int t = turn_magnitude(turn_threshold);
  const auto [lo, hi] = feasible_angle_sum(turns, turn_threshold);
  const int wanted = static_cast<int>(std::lround(kRoadSegments * static_cast<double>(genes[1])));
  const int total = std::clamp(wanted, lo, hi);

  DecodedTest out;
  out.projected = total != wanted;
  out.turns = turns;

  const std::uint64_t geometry_key =
      (static_cast<std::uint64_t>(genes[0]) << 32) | static_cast<std::uint64_t>(genes[1]);
  SeededRng rng(mix_seed(decode_seed, geometry_key));

  RoadAngles magnitudes{};
  RoadAngles angles{};
  bool simple = false;
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts && !simple; ++attempt) {
    std::array<int, kRoadSegments> slots;
    std::iota(slots.begin(), slots.end(), 0);
    rng.shuffle(slots.begin(), slots.end());
    std::array<int, kRoadSegments> cap{};
    for (int i = 0; i < kRoadSegments; ++i) {
      const bool is_turn = i < turns;
      magnitudes[slots[i]] = is_turn ? t : 0;
      cap[slots[i]] = is_turn ? kMaxRoadAngle - t : t - 1;
    }
    // Remaining degrees go one at a time to a random slot with room left.
    for (int left = total - turns * t; left > 0; --left) {
      std::array<int, kRoadSegments> open{};
      int n = 0;
      for (int i = 0; i < kRoadSegments; ++i) {
        if (cap[i] > 0) open[n++] = i;
      }
      const int pick = open[rng.below(static_cast<std::uint64_t>(n))];
      ++magnitudes[pick];
      --cap[pick];
    }
    for (int i = 0; i < kRoadSegments; ++i) {
      angles[i] = (rng.next_u64() >> 63) != 0 ? magnitudes[i] : -magnitudes[i];
    }
    simple = make_road(angles, lane_width).simple();
  }
  if (!simple) {
    // Steering every angle back towards the initial heading keeps the
    // cumulative heading within one maximum angle of zero, so segment
    // directions span less than 180 degrees and the road cannot cross itself.
    int heading = 0;
    for (int i = 0; i < kRoadSegments; ++i) {
      angles[i] = heading > 0 ? -magnitudes[i] : magnitudes[i];
      heading += angles[i];
    }
  }
  std::string id = "sbt_t" + std::to_string(genes[0]) + "_c" + std::to_string(genes[1]);
  out.road = make_road(angles, lane_width, kDefaultSegmentLength, std::move(id));
  int sum = 0;
  for (int a : angles) sum += std::abs(a);
  out.mean_curvature = static_cast<double>(sum) / kRoadSegments;

  std::uint64_t key = decode_seed;
  for (int g : genes) key = mix_seed(key, static_cast<std::uint64_t>(g));
  out.perturbation = {table.name_at(genes[3] + 1), genes[2], key};
  return out;
}

// ---- sorting and crowding -------------------------------------------------

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const Directions& d) {
  const auto va = a.values();
  const auto vb = b.values();
  bool better = false;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double x = d[i] == Direction::Maximize ? va[i] : -va[i];
    const double y = d[i] == Direction::Maximize ? vb[i] : -vb[i];
    if (x < y) return false;
    if (x > y) better = true;
  }
  return better;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<ObjectiveVector>& objs,
                                                         const Directions& d) {
  const std::size_t n = objs.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(objs[i], objs[j], d)) {
        dominated[i].push_back(j);
        ++count[j];
      } else if (dominates(objs[j], objs[i], d)) {
        dominated[j].push_back(i);
        ++count[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& objs,
                                      const std::vector<std::size_t>& front) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = front.size();
  if (n <= 2) return std::vector<double>(n, kInf);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < 4; ++m) {
    auto value = [&](std::size_t k) { return objs[front[k]].values()[m]; };
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Ties resolve on the object index, so the input order never matters.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (value(a) != value(b)) return value(a) < value(b);
      return front[a] < front[b];
    });
    const double range = value(order.back()) - value(order.front());
    if (!(range > 0.0)) continue;
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
    }
  }
  return dist;
}

// ---- variation ------------------------------------------------------------

namespace {

int round_clamp(double v, int lower, int upper) {
  return std::clamp(static_cast<int>(std::lround(v)), lower, upper);
}

}  // namespace

int polynomial_mutation(int value, int lower, int upper, double eta, SeededRng& rng) {
  if (upper <= lower) return lower;
  const double span = upper - lower;
  const double d1 = (value - lower) / span;
  const double d2 = (upper - value) / span;
  const double u = rng.uniform();
  const double power = 1.0 / (eta + 1.0);
  double dq = 0.0;
  if (u < 0.5) {
    const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
    dq = std::pow(v, power) - 1.0;
  } else {
    const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
    dq = 1.0 - std::pow(v, power);
  }
  return round_clamp(value + dq * span, lower, upper);
}

std::pair<int, int> sbx_crossover(int a, int b, int lower, int upper, double eta, SeededRng& rng) {
  const double u = rng.uniform();
  if (a == b || upper <= lower) return {a, b};
  const double y1 = std::min(a, b);
  const double y2 = std::max(a, b);
  const double power = 1.0 / (eta + 1.0);
  auto spread = [&](double beta) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    return u <= 1.0 / alpha ? std::pow(u * alpha, power)
                            : std::pow(1.0 / (2.0 - u * alpha), power);
  };
  const double bq1 = spread(1.0 + 2.0 * (y1 - lower) / (y2 - y1));
  const double bq2 = spread(1.0 + 2.0 * (upper - y2) / (y2 - y1));
  const int c1 = round_clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lower, upper);
  const int c2 = round_clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lower, upper);
  if ((rng.next_u64() >> 63) != 0) return {c2, c1};
  return {c1, c2};
}

std::vector<Genes> vary(const std::vector<Genes>& parents, const GeneBounds& bounds,
                        const SearchConfig& config, SeededRng& rng) {
  std::vector<Genes> out = parents;
  for (std::size_t i = 0; i + 1 < out.size(); i += 2) {
    if (rng.uniform() >= config.crossover_prob) continue;
    for (int g = 0; g < kGeneCount; ++g) {
      if (rng.uniform() >= 0.5) continue;
      std::tie(out[i][g], out[i + 1][g]) = sbx_crossover(
          out[i][g], out[i + 1][g], bounds.lower[g], bounds.upper[g], config.crossover_eta, rng);
    }
  }
  for (auto& child : out) {
    for (int g = 0; g < kGeneCount; ++g) {
      if (rng.uniform() >= config.mutation_prob) continue;
      child[g] = polynomial_mutation(child[g], bounds.lower[g], bounds.upper[g],
                                     config.mutation_eta, rng);
    }
  }
  return out;
}

// ---- the search -----------------------------------------------------------

ObjectiveVector worst_objectives(const Directions& d) {
  constexpr double kHuge = 1e9;
  ObjectiveVector o;
  o.avg_abs_xte = d[0] == Direction::Maximize ? 0.0 : kHuge;
  o.time_to_failure = d[1] == Direction::Maximize ? 0.0 : kHuge;
  o.criticality = d[2] == Direction::Maximize ? kCriticalityCompleted : kCriticalityDeparture;
  o.max_xte = d[3] == Direction::Maximize ? 0.0 : kHuge;
  return o;
}

namespace {

class Evaluator {
 public:
  Evaluator(const SearchConfig& config, const OrdinalTable& table, const EpisodeRunner& runner,
            SearchResult& result)
      : config_(config),
        table_(table),
        runner_(runner),
        result_(result),
        decode_seed_(mix_seed(config.seed, hash_string("decode"))) {}

  bool known(const Genes& g) const { return cache_.count(g) != 0; }

  std::vector<Individual> evaluate(const std::vector<Genes>& batch, int generation,
                                   const std::string& prefix) {
    std::vector<Individual> out(batch.size());
    std::vector<EpisodeTask> tasks;
    std::vector<std::size_t> fresh;
    const std::size_t base = result_.archive.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ArchiveEntry entry;
      entry.generation = generation;
      entry.index = static_cast<int>(i);
      entry.genes = batch[i];
      entry.decoded = decode(batch[i], table_, decode_seed_, config_.turn_threshold,
                             config_.lane_width);
      const std::string id = prefix + "_c" + std::to_string(i);
      const auto hit = cache_.find(batch[i]);
      if (hit != cache_.end()) {
        const ArchiveEntry& first = result_.archive[hit->second];
        entry.record = first.record;
        entry.record.task.id = id;
        entry.error = first.error;
        entry.cached = true;
      } else {
        cache_.emplace(batch[i], base + i);
        EpisodeTask task{id, entry.decoded.road, {}, config_.episode};
        task.perturbation.spec = entry.decoded.perturbation;
        tasks.push_back(std::move(task));
        fresh.push_back(i);
      }
      result_.archive.push_back(std::move(entry));
    }
    std::vector<EpisodeRecord> records = run_tasks(tasks, runner_, config_.jobs);
    result_.episodes_run += records.size();
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      ArchiveEntry& e = result_.archive[base + fresh[k]];
      e.record = std::move(records[k]);
      e.error = e.record.error.has_value();
      if (e.error) e.record.objectives = worst_objectives(config_.directions);
    }
    // Cache hits inside this batch point at entries filled just above.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ArchiveEntry& e = result_.archive[base + i];
      if (e.cached) {
        const ArchiveEntry& first = result_.archive[cache_.at(batch[i])];
        const std::string id = e.record.task.id;
        e.record = first.record;
        e.record.task.id = id;
        e.error = first.error;
      }
      out[i].genes = batch[i];
      out[i].objectives = e.record.objectives;
      out[i].archive_index = base + i;
    }
    return out;
  }

 private:
  const SearchConfig& config_;
  const OrdinalTable& table_;
  const EpisodeRunner& runner_;
  SearchResult& result_;
  std::uint64_t decode_seed_;
  std::map<Genes, std::size_t> cache_;
};

std::vector<ObjectiveVector> objectives_of(const std::vector<Individual>& pop) {
  std::vector<ObjectiveVector> out;
  out.reserve(pop.size());
  for (const auto& p : pop) out.push_back(p.objectives);
  return out;
}

// Fills rank and crowding; returns the fronts.
std::vector<std::vector<std::size_t>> assign_fitness(std::vector<Individual>& pop,
                                                     const Directions& d) {
  const auto objs = objectives_of(pop);
  auto fronts = non_dominated_sort(objs, d);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const auto dist = crowding_distance(objs, fronts[f]);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      pop[fronts[f][k]].rank = static_cast<int>(f);
      pop[fronts[f][k]].crowding = dist[k];
    }
  }
  return fronts;
}

bool better(const Individual& a, std::size_t ia, const Individual& b, std::size_t ib) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.crowding != b.crowding) return a.crowding > b.crowding;
  return ia < ib;
}

std::vector<Genes> tournament(const std::vector<Individual>& pop, SeededRng& rng) {
  std::vector<Genes> parents;
  parents.reserve(pop.size());
  for (std::size_t k = 0; k < pop.size(); ++k) {
    const std::size_t a = rng.below(pop.size());
    const std::size_t b = rng.below(pop.size());
    parents.push_back(better(pop[a], a, pop[b], b) ? pop[a].genes : pop[b].genes);
  }
  return parents;
}

std::vector<Individual> select_survivors(std::vector<Individual> merged, std::size_t size,
                                         const Directions& d) {
  const auto fronts = assign_fitness(merged, d);
  std::vector<Individual> next;
  next.reserve(size);
  for (const auto& front : fronts) {
    if (next.size() + front.size() <= size) {
      for (std::size_t i : front) next.push_back(merged[i]);
      continue;
    }
    std::vector<std::size_t> rest = front;
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      if (merged[a].crowding != merged[b].crowding) return merged[a].crowding > merged[b].crowding;
      return a < b;
    });
    for (std::size_t k = 0; next.size() < size; ++k) next.push_back(merged[rest[k]]);
    break;
  }
  return next;
}

GenerationSnapshot snapshot(int generation, const std::vector<Individual>& pop,
                            const Directions& d) {
  GenerationSnapshot s{generation, {}};
  const auto objs = objectives_of(pop);
  const auto fronts = non_dominated_sort(objs, d);
  for (std::size_t i : fronts.front()) s.front.push_back(objs[i]);
  return s;
}

void finish(SearchResult& result, const Directions& d) {
  std::vector<ObjectiveVector> objs;
  objs.reserve(result.archive.size());
  for (const auto& e : result.archive) objs.push_back(e.record.objectives);
  if (!objs.empty()) result.pareto = non_dominated_sort(objs, d).front();
}

Genes random_genes(const GeneBounds& b, SeededRng& rng) {
  Genes g{};
  for (int i = 0; i < kGeneCount; ++i) g[i] = rng.uniform_int(b.lower[i], b.upper[i]);
  return g;
}

// Offspring whose genotype was already evaluated, or already appears in the
// batch, are bred again; only after kBreedAttempts rounds are duplicates
// accepted (they then hit the evaluation cache).
std::vector<Genes> breed(const std::vector<Individual>& pop, const GeneBounds& bounds,
                         const SearchConfig& config, SeededRng& rng, const Evaluator& evaluator) {
  constexpr int kBreedAttempts = 50;
  std::vector<Genes> out;
  std::set<Genes> taken;
  std::vector<Genes> spare;
  for (int attempt = 0; attempt < kBreedAttempts && out.size() < pop.size(); ++attempt) {
    for (const Genes& child : vary(tournament(pop, rng), bounds, config, rng)) {
      if (out.size() == pop.size()) break;
      if (evaluator.known(child) || taken.count(child)) {
        if (spare.size() < pop.size()) spare.push_back(child);
        continue;
      }
      taken.insert(child);
      out.push_back(child);
    }
  }
  for (std::size_t k = 0; out.size() < pop.size(); ++k) out.push_back(spare[k]);
  return out;
}

}  // namespace

SearchResult run_search(const SearchConfig& config, const OrdinalTable& table,
                        const EpisodeRunner& runner, const RegionCallback& on_generation) {
  config.validate();
  const GeneBounds bounds = bounds_for(table);
  SearchResult result;
  Evaluator evaluator(config, table, runner, result);

  SeededRng init = SeededRng::substream(config.seed, 0);
  std::vector<Genes> genes(static_cast<std::size_t>(config.population));
  for (auto& g : genes) g = random_genes(bounds, init);
  std::vector<Individual> pop = evaluator.evaluate(genes, 0, "g0");
  assign_fitness(pop, config.directions);
  result.history.push_back(snapshot(0, pop, config.directions));
  if (on_generation) on_generation(0, pop);

  for (int gen = 1; gen <= config.generations; ++gen) {
    SeededRng rng = SeededRng::substream(config.seed, static_cast<std::uint64_t>(gen));
    const std::vector<Genes> offspring = breed(pop, bounds, config, rng, evaluator);
    std::vector<Individual> children =
        evaluator.evaluate(offspring, gen, "g" + std::to_string(gen));
    std::vector<Individual> merged = pop;
    merged.insert(merged.end(), children.begin(), children.end());
    pop = select_survivors(std::move(merged), pop.size(), config.directions);
    assign_fitness(pop, config.directions);
    result.history.push_back(snapshot(gen, pop, config.directions));
    spdlog::debug("generation {}: front size {}, episodes {}", gen,
                  result.history.back().front.size(), result.episodes_run);
    if (on_generation) on_generation(gen, pop);
  }
  result.final_population = pop;
  finish(result, config.directions);
  return result;
}

SearchResult random_search(const SearchConfig& config, const OrdinalTable& table,
                           const EpisodeRunner& runner, int count) {
  config.validate();
  if (count < 1) throw ConfigError("count", "must be positive");
  const GeneBounds bounds = bounds_for(table);
  SearchResult result;
  Evaluator evaluator(config, table, runner, result);
  SeededRng rng(mix_seed(config.seed, hash_string("random")));
  std::vector<Genes> genes(static_cast<std::size_t>(count));
  for (auto& g : genes) g = random_genes(bounds, rng);
  result.final_population = evaluator.evaluate(genes, 0, "r");
  finish(result, config.directions);
  return result;
}

// ---- run directory --------------------------------------------------------

void write_search_run(const std::filesystem::path& dir, const SearchConfig& config,
                      const OrdinalTable& table, const EpisodeEnvironment& env,
                      const SearchResult& result) {
  RunLogWriter writer(dir);
  writer.write_json("config.json", {{"schema", kRunConfigSchema},
                                    {"tool_version", kToolVersion},
                                    {"mode", "sbt"},
                                    {"seed", config.seed},
                                    {"search", search_config_to_json(config)},
                                    {"environment", environment_to_json(env)},
                                    {"ordinal_table", ordinal_table_to_json(table)}});
  std::string archive;
  auto entry_json = [](const ArchiveEntry& e) {
    json genes = json::object();
    for (int i = 0; i < kGeneCount; ++i) genes[kGeneNames[i]] = e.genes[i];
    return json{{"schema", kArchiveSchema},
                {"episode_id", e.record.task.id},
                {"generation", e.generation},
                {"index", e.index},
                {"genes", genes},
                {"road_angles", e.decoded.road.angles()},
                {"perturbation", e.decoded.perturbation},
                {"projected", e.decoded.projected},
                {"mean_curvature", e.decoded.mean_curvature},
                {"outcome", outcome_name(e.record.result.outcome)},
                {"objectives", objectives_to_json(e.record.objectives)},
                {"error", e.error},
                {"cached", e.cached}};
  };
  for (const auto& e : result.archive) {
    archive += entry_json(e).dump() + "\n";
    writer.append_episode(e.record, env);
  }
  write_text_file(dir / "archive.jsonl", archive);
  json front = json::array();
  for (std::size_t i : result.pareto) {
    json e = entry_json(result.archive[i]);
    e.erase("schema");
    e["archive_index"] = i;
    front.push_back(std::move(e));
  }
  writer.write_json("pareto_front.json", {{"schema", "roadshake.pareto/1"}, {"entries", front}});
  json gens = json::array();
  for (const auto& s : result.history) {
    json f = json::array();
    for (const auto& o : s.front) f.push_back(objectives_to_json(o));
    gens.push_back({{"generation", s.generation}, {"front", f}});
  }
  writer.write_json("history.json", {{"schema", "roadshake.history/1"}, {"generations", gens}});
}

}  // namespace roadshake
