#include "flexgame/game.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace flexgame::game {

using market::Coalition;
using market::PricingScheme;
using scenario::Scenario;

std::string GameTable::coalition_label(std::uint32_t mask) const {
  std::string out;
  for (int n = 0; n < num_players(); ++n) {
    if (!(mask & (1u << n))) continue;
    if (!out.empty()) out += "+";
    out += players[n];
  }
  return out.empty() ? "(empty)" : out;
}

GameTable GameTable::subgame(std::uint32_t subset_mask) const {
  GameTable sub;
  sub.scheme = scheme;
  std::vector<int> members;
  for (int n = 0; n < num_players(); ++n) {
    if (subset_mask & (1u << n)) {
      members.push_back(n);
      sub.players.push_back(players[n]);
    }
  }
  const std::uint32_t size = 1u << members.size();
  sub.values.assign(size, 0.0);
  sub.meta.assign(size, {});
  for (std::uint32_t m = 1; m < size; ++m) {
    std::uint32_t full = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (m & (1u << i)) full |= 1u << members[i];
    sub.values[m] = value(full);
    sub.meta[m] = meta.at(full);
  }
  return sub;
}

namespace {

struct CacheKey {
  std::size_t scenario_hash;
  std::uint32_t mask;
  int scheme;
  double slack_penalty;
  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const {
    std::size_t h = k.scenario_hash;
    h ^= std::hash<std::uint32_t>{}(k.mask) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<int>{}(k.scheme) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<double>{}(k.slack_penalty) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct CachedEntry {
  double value;
  SolveMeta meta;
};

class CoalitionValueCache {
 public:
  static CoalitionValueCache& instance() {
    static CoalitionValueCache cache;
    return cache;
  }
  bool find(const CacheKey& key, CachedEntry& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }
  void store(const CacheKey& key, const CachedEntry& entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    map_.emplace(key, entry);
  }

 private:
  mutable std::mutex mutex_;
  std::unordered_map<CacheKey, CachedEntry, CacheKeyHash> map_;
};

double coalition_value(const Scenario& s, Coalition c, PricingScheme scheme,
                       const GameBuildOptions& opt, SolveMeta& meta) {
  const auto t0 = std::chrono::steady_clock::now();
  const market::MarketModel model = market::build_market(s, c, opt.market);
  const market::MarketOutcome outcome = market::clear(model, opt.simplex);
  meta.status = outcome.status;
  meta.iterations = outcome.solution.iterations;
  meta.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (outcome.status != lp::LpStatus::kOptimal)
    throw GameError("coalition market " + c.label(s) + " is " +
                        lp::to_string(outcome.status) +
                        (outcome.status == lp::LpStatus::kInfeasible
                             ? " (consider --slack-penalty to soften balance constraints)"
                             : ""),
                    outcome.status);
  if (scheme == PricingScheme::kPayAsBid) return outcome.objective;
  double v = 0.0;
  for (const auto& [so, cost] : market::settle(s, outcome, scheme)) v += cost;
  return v;
}

}  // namespace

GameTable build_game(const Scenario& s, PricingScheme scheme, const GameBuildOptions& options) {
  const int num_dsos = static_cast<int>(s.dsos.size());
  const int players = 1 + num_dsos;
  if (players > 16) throw GameError("coalition enumeration capped at 16 players");

  GameTable table;
  table.scheme = scheme;
  table.players.push_back("TSO");
  for (const auto& d : s.dsos) table.players.push_back(d.id);
  const std::uint32_t size = 1u << players;
  table.values.assign(size, 0.0);
  table.meta.assign(size, {});

  const std::size_t scenario_hash =
      options.use_cache ? std::hash<std::string>{}(scenario::save_scenario(s, -1)) : 0;

  std::atomic<std::uint32_t> next{1};
  std::mutex error_mutex;
  std::string first_error;
  lp::LpStatus first_status = lp::LpStatus::kInfeasible;
  auto worker = [&]() {
    while (true) {
      const std::uint32_t mask = next.fetch_add(1);
      if (mask >= size) return;
      const CacheKey key{scenario_hash, mask, static_cast<int>(scheme),
                         options.market.slack_penalty};
      CachedEntry entry;
      if (options.use_cache && CoalitionValueCache::instance().find(key, entry)) {
        table.values[mask] = entry.value;
        table.meta[mask] = entry.meta;
        continue;
      }
      SolveMeta meta;
      try {
        const double v = coalition_value(s, Coalition(mask), scheme, options, meta);
        table.values[mask] = v;
        table.meta[mask] = meta;
        if (options.use_cache) CoalitionValueCache::instance().store(key, {v, meta});
      } catch (const GameError& e) {
        if (options.lenient) {
          table.values[mask] = std::numeric_limits<double>::quiet_NaN();
          table.meta[mask] = meta;
          continue;
        }
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) {
          first_error = e.what();
          first_status = e.status();
        }
        return;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) {
          first_error = e.what();
          first_status = lp::LpStatus::kIterationLimit;
        }
        return;
      }
    }
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(size - 1)));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw GameError(first_error, first_status);
  return table;
}

SubmodularityReport check_submodular(const GameTable& g) {
  SubmodularityReport rep;
  const std::uint32_t size = 1u << g.num_players();
  for (std::uint32_t c1 = 1; c1 < size; ++c1) {
    for (std::uint32_t c2 = c1; c2 < size; ++c2) {
      const double lhs = g.value(c1 | c2) + g.value(c1 & c2);
      const double rhs = g.value(c1) + g.value(c2);
      ++rep.pairs_checked;
      const double tol = game_tolerance(std::max(std::abs(lhs), std::abs(rhs)));
      if (lhs > rhs + tol) rep.violations.push_back({c1, c2, lhs, rhs});
    }
  }
  return rep;
}

ConcavityReport check_concavity(const GameTable& g) {
  ConcavityReport rep;
  const int n = g.num_players();
  for (int player = 0; player < n; ++player) {
    const std::uint32_t bit = 1u << player;
    const std::uint32_t others = ((1u << n) - 1u) & ~bit;
    // Enumerate larger set C' as submask of `others`, then C as submask of C'.
    for (std::uint32_t big = others;; big = (big - 1) & others) {
      for (std::uint32_t small = big;; small = (small - 1) & big) {
        ++rep.triples_checked;
        const double m_small = g.value(small | bit) - g.value(small);
        const double m_big = g.value(big | bit) - g.value(big);
        const double tol =
            game_tolerance(std::max({std::abs(m_small), std::abs(m_big), g.value(big | bit)}));
        if (m_small > m_big + tol)
          rep.violations.push_back({small, big, player, m_small, m_big});
        if (small == 0) break;
      }
      if (big == 0) break;
    }
  }
  return rep;
}

CoreCertificate core_nonempty(const GameTable& g) {
  const int n = g.num_players();
  const std::uint32_t size = 1u << n;
  lp::LpBuilder b;
  for (int i = 0; i < n; ++i) b.add_variable("y:" + g.players[i], -lp::kInf, lp::kInf, -1.0);
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    lp::LpBuilder::Terms terms;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) terms.push_back({i, 1.0});
    b.add_inequality("core:" + std::to_string(mask), terms, g.value(mask));
  }
  const auto sol = lp::solve_lp(b.build());
  if (sol.status != lp::LpStatus::kOptimal)
    throw GameError(std::string("allocation LP failed: ") + lp::to_string(sol.status));
  CoreCertificate cert;
  cert.lp_optimum = -sol.objective;
  cert.grand_value = g.grand_value();
  cert.nonempty = cert.lp_optimum >= cert.grand_value - game_tolerance(cert.grand_value);
  if (cert.nonempty)
    cert.witness.assign(sol.x.data(), sol.x.data() + sol.x.size());
  return cert;
}

CoreMembership in_core(const GameTable& g, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != g.num_players())
    throw GameError("allocation size does not match the player count");
  CoreMembership m;
  double total = 0.0;
  for (double v : y) total += v;
  m.efficiency_gap = std::abs(total - g.grand_value());
  const std::uint32_t size = 1u << g.num_players();
  m.worst_violation = -lp::kInf;
  for (std::uint32_t mask = 1; mask + 1 < size; ++mask) {
    double yc = 0.0;
    for (int i = 0; i < g.num_players(); ++i)
      if (mask & (1u << i)) yc += y[i];
    const double violation = yc - g.value(mask);
    if (violation > m.worst_violation) {
      m.worst_violation = violation;
      m.worst_coalition = mask;
    }
  }
  if (g.num_players() == 1) m.worst_violation = 0.0;  // only the grand coalition exists
  m.in_core = m.efficiency_gap <= game_tolerance(g.grand_value()) &&
              m.worst_violation <= game_tolerance(g.grand_value());
  return m;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}
}  // namespace

std::string game_to_json(const GameTable& g) {
  nlohmann::json j;
  j["players"] = g.players;
  j["pricing"] = market::to_string(g.scheme);
  nlohmann::json entries = nlohmann::json::array();
  const std::uint32_t size = 1u << g.num_players();
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    nlohmann::json e{{"mask", mask},
                     {"members", g.coalition_label(mask)},
                     {"status", lp::to_string(g.meta[mask].status)},
                     {"iterations", g.meta[mask].iterations}};
    if (std::isfinite(g.value(mask))) e["value_eur"] = g.value(mask);
    entries.push_back(std::move(e));
  }
  j["coalitions"] = std::move(entries);
  return j.dump(2);
}

std::string game_to_csv(const GameTable& g) {
  std::ostringstream os;
  os << "coalition_members,value_eur,status\n";
  const std::uint32_t size = 1u << g.num_players();
  for (std::uint32_t mask = 1; mask < size; ++mask)
    os << g.coalition_label(mask) << "," << fmt(g.value(mask)) << ","
       << lp::to_string(g.meta[mask].status) << "\n";
  return os.str();
}

GameTable game_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GameTable g;
  g.players = j.at("players").get<std::vector<std::string>>();
  g.scheme = market::parse_pricing(j.at("pricing").get<std::string>());
  const std::uint32_t size = 1u << g.players.size();
  g.values.assign(size, 0.0);
  g.meta.assign(size, {});
  for (const auto& e : j.at("coalitions")) {
    const std::uint32_t mask = e.at("mask").get<std::uint32_t>();
    if (mask >= size) throw GameError("game_from_json: coalition mask out of range");
    g.values[mask] = e.contains("value_eur") ? e.at("value_eur").get<double>()
                                             : std::numeric_limits<double>::quiet_NaN();
  }
  return g;
}

}  // namespace flexgame::game
