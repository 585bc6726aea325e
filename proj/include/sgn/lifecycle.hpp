#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgn/detail/rng.hpp"
#include "sgn/semiosis.hpp"

namespace sgn::sim {

// --- scenario model ----------------------------------------------------------

struct EnvironmentProfile {
    std::string id;
    std::vector<double> features;
    std::vector<std::pair<std::string, double>> base_rates;  // events per tick per kind

    double rate_of(std::string_view kind) const {
        for (const auto& [k, v] : base_rates)
            if (k == kind) return v;
        return 0.0;
    }
};

struct ProductInstance {
    std::string id;
    Configuration configuration;
    std::vector<std::pair<std::string, double>> functional_params;
    std::string environment;
    std::string manufacturer;

    std::optional<double> param(std::string_view name) const {
        for (const auto& [k, v] : functional_params)
            if (k == name) return v;
        return std::nullopt;
    }
};

struct Expectation {
    enum class Kind { Functional, Environmental };

    Kind kind = Kind::Functional;
    std::string subject;  // parameter name or event kind
    double low = 0.0;
    double high = 0.0;

    std::string key() const {
        return (kind == Kind::Functional ? "functional:" : "env:") + subject;
    }
};

struct AgentSpec {
    std::string product;
    double weber_k = 0.1;
    std::int64_t filter_window = 16;
    std::vector<Expectation> expectations;
};

struct Scenario {
    std::string name;
    std::vector<EnvironmentProfile> environments;
    std::vector<ProductInstance> products;
    std::vector<AgentSpec> agents;
    bool adapt = false;

    const EnvironmentProfile* find_environment(std::string_view id) const {
        for (const auto& e : environments)
            if (e.id == id) return &e;
        return nullptr;
    }
    const ProductInstance* find_product(std::string_view id) const {
        for (const auto& p : products)
            if (p.id == id) return &p;
        return nullptr;
    }
};

inline ValidationReport validate_scenario(const Scenario& sc) {
    ValidationReport out;
    auto fail = [&](std::string code, std::string msg) {
        out.push_back(Diagnostic{Severity::Error, std::move(code), std::move(msg), 0, 0});
    };
    std::set<std::string> env_ids;
    std::optional<std::size_t> feature_dim;
    for (const auto& e : sc.environments) {
        if (!env_ids.insert(e.id).second)
            fail("INVALID_SCENARIO", "environment " + e.id + " declared twice");
        if (feature_dim && e.features.size() != *feature_dim)
            fail("DIMENSION_MISMATCH", "environment " + e.id + " has " +
                                           std::to_string(e.features.size()) +
                                           " features, expected " + std::to_string(*feature_dim));
        feature_dim = feature_dim ? feature_dim : std::optional<std::size_t>(e.features.size());
        for (const auto& [k, v] : e.base_rates)
            if (v < 0.0) fail("INVALID_SCENARIO", "environment " + e.id + " has negative rate for " + k);
    }
    std::set<std::string> product_ids;
    for (const auto& p : sc.products) {
        if (!product_ids.insert(p.id).second)
            fail("INVALID_SCENARIO", "product " + p.id + " declared twice");
        if (!sc.find_environment(p.environment))
            fail("UNRESOLVED_NAME", "product " + p.id + " references unknown environment " + p.environment);
        if (!p.configuration.system)
            fail("INVALID_SCENARIO", "product " + p.id + " has no configuration system");
    }
    std::set<std::string> agent_products;
    for (const auto& a : sc.agents) {
        if (!sc.find_product(a.product))
            fail("UNRESOLVED_NAME", "agent references unknown product " + a.product);
        if (!agent_products.insert(a.product).second)
            fail("INVALID_SCENARIO", "product " + a.product + " has more than one agent");
        if (!(a.weber_k > 0.0) || a.weber_k > 1.0)
            fail("INVALID_SCENARIO", "agent for " + a.product + " has weber fraction outside (0, 1]");
        if (a.filter_window < 1)
            fail("INVALID_SCENARIO", "agent for " + a.product + " has filter window < 1");
        for (const auto& e : a.expectations)
            if (e.low > e.high)
                fail("INVALID_SCENARIO",
                     "agent for " + a.product + " has inverted band on " + e.key());
    }
    return out;
}

// --- trace -------------------------------------------------------------------

struct InteractionEvent {
    std::int64_t t = 0;
    std::string product;
    std::string kind;
    double mag = 0.0;
};

struct ViolationRecord {
    std::int64_t t = 0;
    std::string product;
    Expectation expectation;
    double observed = 0.0;
};

struct ClusterSnapshot {
    std::int64_t t = 0;
    std::vector<std::pair<std::string, int>> assignments;  // product -> cluster
};

struct SimTrace {
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::vector<InteractionEvent> events;
    std::vector<ViolationRecord> violations;
    std::vector<ClusterSnapshot> cluster_history;
    std::vector<std::pair<std::string, std::vector<std::int64_t>>> epsilon_series;
    std::vector<std::pair<std::string, std::int64_t>> final_synchronic;  // per product

    const std::vector<std::int64_t>* epsilons_of(std::string_view product) const {
        for (const auto& [p, s] : epsilon_series)
            if (p == product) return &s;
        return nullptr;
    }
};

// --- perception --------------------------------------------------------------

// Weber rule: a change registers when it is large relative to the previous
// stimulus; the tiny floor lets changes away from zero register.
inline bool detect_distinction(double prev, double next, double weber_k) {
    if (!(weber_k > 0.0)) throw Error(ErrorCode::InvalidScenario, "weber fraction must be > 0");
    const double floor_ = 1e-12;
    return std::abs(next - prev) / std::max(std::abs(prev), floor_) >= weber_k;
}

// Centered moving average, truncated at the series boundaries. Even windows
// lean backwards (window 2 averages each element with its predecessor).
inline std::vector<double> preprocess_filter(const std::vector<double>& series,
                                             std::int64_t window) {
    if (series.empty()) throw Error(ErrorCode::EmptySeries, "cannot filter an empty series");
    if (window < 1) throw Error(ErrorCode::IndexOutOfRange, "window must be >= 1");
    const std::int64_t n = static_cast<std::int64_t>(series.size());
    std::vector<double> out(series.size());
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t lo = std::max<std::int64_t>(0, i - window / 2);
        std::int64_t hi = std::min<std::int64_t>(n - 1, i + (window - 1) / 2);
        double sum = 0.0;
        for (std::int64_t j = lo; j <= hi; ++j) sum += series[j];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// --- expectation agents --------------------------------------------------------

struct Distinction {
    std::int64_t t = 0;
    std::string signal;
    double previous = 0.0;
    double current = 0.0;
};

// Monitoring state attached to one product. Observations arrive per tick
// through observe(); violation episodes are edge-detected.
struct ExpectationAgent {
    AgentSpec spec;
    std::int64_t current_tick = -1;
    std::map<std::string, std::vector<std::int64_t>> counts_by_kind;
    std::map<std::string, double> params;
    std::map<std::string, double> last_stimulus;
    std::map<std::string, bool> in_violation;
    std::vector<ViolationRecord> violation_log;
    std::vector<Distinction> distinction_log;

    // Trailing mean of the last `window` per-tick counts; nullopt until a
    // full window of observations exists.
    std::optional<double> filtered_rate(const std::string& kind, std::int64_t window) const {
        auto it = counts_by_kind.find(kind);
        if (it == counts_by_kind.end()) return std::nullopt;
        const auto& counts = it->second;
        if (window < 1 || static_cast<std::int64_t>(counts.size()) < window) return std::nullopt;
        double sum = 0.0;
        for (std::size_t i = counts.size() - static_cast<std::size_t>(window); i < counts.size(); ++i)
            sum += static_cast<double>(counts[i]);
        return sum / static_cast<double>(window);
    }

    void observe(std::int64_t tick, const std::map<std::string, std::int64_t>& kind_counts,
                 const std::vector<std::pair<std::string, double>>& functional_params) {
        current_tick = tick;
        for (const auto& [k, c] : kind_counts) counts_by_kind[k].push_back(c);
        for (const auto& [k, v] : functional_params) params[k] = v;
        // Weber-Fechner distinction detection on every monitored signal.
        auto sense = [&](const std::string& signal, double value) {
            auto it = last_stimulus.find(signal);
            if (it != last_stimulus.end() &&
                detect_distinction(it->second, value, spec.weber_k))
                distinction_log.push_back({tick, signal, it->second, value});
            last_stimulus[signal] = value;
        };
        for (const auto& [k, v] : params) sense("param:" + k, v);
        for (const auto& [k, counts] : counts_by_kind)
            if (auto r = filtered_rate(k, spec.filter_window)) sense("rate:" + k, *r);
    }
};

// Evaluates the agent's expectations at its current tick. A violation is
// recorded once per contiguous episode; the returned list holds only the
// episodes entered this call.
inline std::vector<ViolationRecord> detect_violations(ExpectationAgent& agent,
                                                      std::int64_t tick_window) {
    std::vector<ViolationRecord> fresh;
    if (agent.current_tick < 0) return fresh;
    for (const auto& e : agent.spec.expectations) {
        std::optional<double> observed;
        if (e.kind == Expectation::Kind::Functional) {
            auto it = agent.params.find(e.subject);
            if (it != agent.params.end()) observed = it->second;
        } else {
            observed = agent.filtered_rate(e.subject, tick_window);
        }
        const std::string key = e.key();
        if (!observed) {
            agent.in_violation[key] = false;
            continue;
        }
        const bool violated = *observed < e.low || *observed > e.high;
        const bool was = agent.in_violation[key];
        agent.in_violation[key] = violated;
        if (violated && !was) {
            ViolationRecord rec{agent.current_tick, agent.spec.product, e, *observed};
            agent.violation_log.push_back(rec);
            fresh.push_back(std::move(rec));
        }
    }
    return fresh;
}

// --- clustering ---------------------------------------------------------------

struct AgentFeatures {
    std::string id;  // product id
    std::vector<double> features;
};

struct Clustering {
    std::vector<std::pair<std::string, int>> assignments;  // in processing order
    std::vector<std::vector<double>> centroids;

    std::optional<int> cluster_of(std::string_view id) const {
        for (const auto& [n, c] : assignments)
            if (n == id) return c;
        return std::nullopt;
    }
};

// Online leader clustering: items processed in id order; each joins the
// nearest centroid within tau (running mean update) or founds a new
// cluster. The cluster count is emergent, never fixed in advance.
inline Clustering cluster_agents(std::vector<AgentFeatures> items, double tau) {
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidScenario, "tau must be > 0");
    std::sort(items.begin(), items.end(),
              [](const AgentFeatures& a, const AgentFeatures& b) { return a.id < b.id; });
    Clustering out;
    std::vector<std::size_t> sizes;
    for (const auto& item : items) {
        if (!out.centroids.empty() && item.features.size() != out.centroids.front().size())
            throw Error(ErrorCode::DimensionMismatch,
                        "agent " + item.id + " has a feature vector of different length");
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t c = 0; c < out.centroids.size(); ++c) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < item.features.size(); ++i) {
                double diff = item.features[i] - out.centroids[c][i];
                d2 += diff * diff;
            }
            double d = std::sqrt(d2);
            if (best < 0 || d < best_dist) {
                best = static_cast<int>(c);
                best_dist = d;
            }
        }
        if (best >= 0 && best_dist <= tau) {
            auto& centroid = out.centroids[static_cast<std::size_t>(best)];
            auto& n = sizes[static_cast<std::size_t>(best)];
            for (std::size_t i = 0; i < centroid.size(); ++i)
                centroid[i] += (item.features[i] - centroid[i]) / static_cast<double>(n + 1);
            ++n;
            out.assignments.emplace_back(item.id, best);
        } else {
            out.centroids.push_back(item.features);
            sizes.push_back(1);
            out.assignments.emplace_back(item.id, static_cast<int>(out.centroids.size()) - 1);
        }
    }
    return out;
}

inline Clustering cluster_agents(const Scenario& sc, double tau) {
    std::vector<AgentFeatures> items;
    for (const auto& a : sc.agents) {
        const ProductInstance* p = sc.find_product(a.product);
        const EnvironmentProfile* e = p ? sc.find_environment(p->environment) : nullptr;
        if (e) items.push_back({a.product, e->features});
    }
    return cluster_agents(std::move(items), tau);
}

struct Family {
    std::string manufacturer;
    std::vector<int> clusters;
};

// Phylogenic grouping: clusters partitioned by the majority manufacturer
// of their member products; ties go to the lexicographically least id.
inline std::vector<Family> group_families(const Clustering& clustering,
                                          const std::map<std::string, std::string>& manufacturer_of) {
    std::map<int, std::map<std::string, int>> votes;
    for (const auto& [product, cluster] : clustering.assignments) {
        auto it = manufacturer_of.find(product);
        if (it != manufacturer_of.end()) ++votes[cluster][it->second];
    }
    std::map<std::string, std::vector<int>> families;
    for (const auto& [cluster, counts] : votes) {
        std::string winner;
        int best = -1;
        for (const auto& [manufacturer, n] : counts)
            if (n > best) {  // map order makes ties fall to the least id
                best = n;
                winner = manufacturer;
            }
        families[winner].push_back(cluster);
    }
    std::vector<Family> out;
    for (auto& [m, cs] : families) {
        std::sort(cs.begin(), cs.end());
        out.push_back({m, std::move(cs)});
    }
    return out;
}

// --- trend analysis ------------------------------------------------------------

struct TrendResult {
    double slope = 0.0;
    bool successful = false;  // slope strictly negative
};

namespace trend_detail {

inline std::optional<std::int64_t> last_tick(const SimTrace& trace) {
    std::optional<std::int64_t> t;
    auto bump = [&](std::int64_t v) { t = t ? std::max(*t, v) : v; };
    for (const auto& e : trace.events) bump(e.t);
    for (const auto& v : trace.violations) bump(v.t);
    for (const auto& c : trace.cluster_history) bump(c.t);
    return t;
}

}  // namespace trend_detail

inline bool trace_knows_product(const SimTrace& trace, std::string_view product) {
    for (const auto& [p, s] : trace.epsilon_series)
        if (p == product) return true;
    for (const auto& e : trace.events)
        if (e.product == product) return true;
    for (const auto& v : trace.violations)
        if (v.product == product) return true;
    for (const auto& c : trace.cluster_history)
        for (const auto& [p, cl] : c.assignments)
            if (p == product) return true;
    return false;
}

// Ordinary least squares over the filtered per-tick event counts of one
// product. A strictly negative slope reads as successful operation.
inline TrendResult interaction_trend(const SimTrace& trace, const std::string& product,
                                     std::int64_t window) {
    auto last = trend_detail::last_tick(trace);
    if (!last || *last < 1)
        throw Error(ErrorCode::InsufficientData, "trend needs at least two ticks of data");
    std::vector<double> counts(static_cast<std::size_t>(*last) + 1, 0.0);
    for (const auto& e : trace.events)
        if (e.product == product) counts[static_cast<std::size_t>(e.t)] += 1.0;
    std::vector<double> filtered = preprocess_filter(counts, window);
    const double n = static_cast<double>(filtered.size());
    double mean_t = (n - 1.0) / 2.0;
    double mean_y = 0.0;
    for (double y : filtered) mean_y += y;
    mean_y /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < filtered.size(); ++i) {
        double dt = static_cast<double>(i) - mean_t;
        num += dt * (filtered[i] - mean_y);
        den += dt * dt;
    }
    TrendResult res;
    res.slope = den > 0.0 ? num / den : 0.0;
    res.successful = res.slope < 0.0;
    return res;
}

// --- configuration adjustment ---------------------------------------------------

// Variety re-optimization after environmental violations: explore (variation),
// prune (minimal selection), then keep whichever of {repaired, original}
// satisfies every rank-0 constraint with the least synchronic variety,
// breaking ties by epsilon and then canonical text. Falls back to the
// original configuration.
inline Configuration adjust_configuration(const ProductInstance& product,
                                          const std::vector<ViolationRecord>& /*violations*/,
                                          std::uint64_t seed) {
    const Configuration& original = product.configuration;
    if (!original.system) return original;

    Configuration varied = variation(original, 2, static_cast<std::int64_t>(original.tuples.size()),
                                     seed);
    std::set<std::string> baseline;
    for (const auto& [n, t] : original.terms) baseline.insert(n);
    SelectionResult sel = selection(varied, true, &baseline);

    auto rank0_clean = [](const Configuration& cfg) {
        for (const auto& c : cfg.system->constraints)
            if (c.rank == 0 && !evaluate_constraint(c, cfg)) return false;
        return true;
    };
    std::vector<const Configuration*> candidates;
    if (!sel.unrepairable) candidates.push_back(&sel.config);
    candidates.push_back(&original);

    // Eligible candidates must hold every rank-0 constraint and must not
    // raise epsilon above the original's; re-optimization never couples the
    // product more tightly to its environment.
    const std::int64_t eps_cap = epsilon(original);
    const Configuration* best = nullptr;
    for (const Configuration* c : candidates) {
        if (!rank0_clean(*c) || epsilon(*c) > eps_cap) continue;
        if (!best) {
            best = c;
            continue;
        }
        auto key = [](const Configuration& cfg) {
            return std::make_tuple(synchronic_variety(cfg), epsilon(cfg), canonical_key(cfg));
        };
        if (key(*c) < key(*best)) best = c;
    }
    return best ? *best : original;
}

// --- simulation ------------------------------------------------------------------

inline constexpr double kClusterSnapshotTau = 1.0;

// Deterministic discrete-event run. Per tick each product emits events per
// kind from a counting process with mean base_rate * (1 + eps/max(1, eps0));
// agents observe, detect distinctions and violations, and (with adaptation
// on) re-optimize configurations on environmental violation episodes.
inline SimTrace run(const Scenario& scenario, std::int64_t horizon, std::uint64_t seed) {
    ValidationReport report = validate_scenario(scenario);
    if (has_errors(report))
        throw Error(ErrorCode::InvalidScenario,
                    scenario.name + ": " + (report.empty() ? "invalid" : report.front().message));

    SimTrace trace;
    trace.seed = seed;
    trace.horizon = horizon;

    // Working copies, processed in id order.
    std::vector<ProductInstance> products = scenario.products;
    std::sort(products.begin(), products.end(),
              [](const ProductInstance& a, const ProductInstance& b) { return a.id < b.id; });

    std::map<std::string, ExpectationAgent> agents;
    for (const auto& spec : scenario.agents) {
        ExpectationAgent agent;
        agent.spec = spec;
        agents.emplace(spec.product, std::move(agent));
    }

    struct ProductState {
        detail::Rng rng;
        std::int64_t eps0 = 0;
        std::int64_t eps = 0;
        std::vector<std::pair<std::string, double>> kinds;  // sorted by kind
    };
    std::vector<ProductState> states;
    states.reserve(products.size());
    for (const auto& p : products) {
        ProductState st{detail::Rng(detail::mix_seed(seed, detail::fnv1a(p.id))), 0, 0, {}};
        st.eps0 = epsilon(p.configuration);
        st.eps = st.eps0;
        const EnvironmentProfile* env = scenario.find_environment(p.environment);
        st.kinds.assign(env->base_rates.begin(), env->base_rates.end());
        std::sort(st.kinds.begin(), st.kinds.end());
        states.push_back(std::move(st));
        trace.epsilon_series.emplace_back(p.id, std::vector<std::int64_t>{});
    }

    std::vector<std::pair<std::string, int>> previous_assignments;
    for (std::int64_t t = 0; t < horizon; ++t) {
        // 1. products emit interaction events
        std::vector<std::map<std::string, std::int64_t>> tick_counts(products.size());
        for (std::size_t i = 0; i < products.size(); ++i) {
            ProductState& st = states[i];
            const double multiplier =
                1.0 + static_cast<double>(st.eps) /
                          static_cast<double>(std::max<std::int64_t>(1, st.eps0));
            for (const auto& [kind, base] : st.kinds) {
                std::int64_t count = st.rng.poisson(base * multiplier);
                tick_counts[i][kind] = count;
                for (std::int64_t k = 0; k < count; ++k)
                    trace.events.push_back({t, products[i].id, kind, st.rng.unit() * 2.0});
            }
        }
        // 2. agents observe and check expectations
        for (std::size_t i = 0; i < products.size(); ++i) {
            auto it = agents.find(products[i].id);
            if (it == agents.end()) continue;
            ExpectationAgent& agent = it->second;
            agent.observe(t, tick_counts[i], products[i].functional_params);
            std::vector<ViolationRecord> fresh = detect_violations(agent, agent.spec.filter_window);
            for (const auto& v : fresh) trace.violations.push_back(v);
            // 3. adaptation on environmental violation episodes
            if (scenario.adapt) {
                std::vector<ViolationRecord> environmental;
                for (const auto& v : fresh)
                    if (v.expectation.kind == Expectation::Kind::Environmental)
                        environmental.push_back(v);
                if (!environmental.empty()) {
                    std::uint64_t adjust_seed = detail::mix_seed(
                        detail::mix_seed(seed, detail::fnv1a(products[i].id)), 0x7D0 + static_cast<std::uint64_t>(t));
                    products[i].configuration =
                        adjust_configuration(products[i], environmental, adjust_seed);
                    states[i].eps = epsilon(products[i].configuration);
                }
            }
        }
        // 4. epsilon series
        for (std::size_t i = 0; i < products.size(); ++i)
            trace.epsilon_series[i].second.push_back(states[i].eps);
        // 5. cluster snapshot when assignments move
        Clustering clustering = cluster_agents(scenario, kClusterSnapshotTau);
        if (clustering.assignments != previous_assignments) {
            trace.cluster_history.push_back({t, clustering.assignments});
            previous_assignments = clustering.assignments;
        }
    }
    for (const auto& p : products)
        trace.final_synchronic.emplace_back(p.id, synchronic_variety(p.configuration));
    return trace;
}

}  // namespace sgn::sim
