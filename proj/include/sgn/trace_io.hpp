#pragma once

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sgn/lifecycle.hpp"

namespace sgn::sim {

// One JSON object per line, in tick order; events, then violations, then
// cluster snapshots within a tick. Key order is alphabetical, which keeps
// byte-identical output for identical traces.
inline void write_trace_jsonl(const SimTrace& trace, std::ostream& out) {
    std::size_t ei = 0, vi = 0, ci = 0;
    auto next_tick = [&]() -> std::optional<std::int64_t> {
        std::optional<std::int64_t> t;
        auto bump = [&](std::int64_t v) { t = t ? std::min(*t, v) : v; };
        if (ei < trace.events.size()) bump(trace.events[ei].t);
        if (vi < trace.violations.size()) bump(trace.violations[vi].t);
        if (ci < trace.cluster_history.size()) bump(trace.cluster_history[ci].t);
        return t;
    };
    while (auto t = next_tick()) {
        for (; ei < trace.events.size() && trace.events[ei].t == *t; ++ei) {
            const auto& e = trace.events[ei];
            nlohmann::json rec{
                {"t", e.t}, {"rec", "event"}, {"product", e.product}, {"kind", e.kind}, {"mag", e.mag}};
            out << rec.dump() << "\n";
        }
        for (; vi < trace.violations.size() && trace.violations[vi].t == *t; ++vi) {
            const auto& v = trace.violations[vi];
            nlohmann::json rec{{"t", v.t},
                               {"rec", "violation"},
                               {"product", v.product},
                               {"expectation", v.expectation.key()},
                               {"observed", v.observed}};
            out << rec.dump() << "\n";
        }
        for (; ci < trace.cluster_history.size() && trace.cluster_history[ci].t == *t; ++ci) {
            const auto& c = trace.cluster_history[ci];
            nlohmann::json assignments = nlohmann::json::object();
            for (const auto& [p, cl] : c.assignments) assignments[p] = cl;
            nlohmann::json rec{{"t", c.t}, {"rec", "cluster"}, {"assignments", assignments}};
            out << rec.dump() << "\n";
        }
    }
}

// Reads a trace written by write_trace_jsonl. Violation bands are not part
// of the wire format; only the expectation key is restored.
inline SimTrace read_trace_jsonl(std::istream& in) {
    SimTrace trace;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("t") || !rec.contains("rec"))
            throw Error(ErrorCode::IoError,
                        "trace line " + std::to_string(line_no) + " is not a valid record");
        const std::string kind = rec.value("rec", "");
        if (kind == "event") {
            InteractionEvent e;
            e.t = rec.at("t").get<std::int64_t>();
            e.product = rec.at("product").get<std::string>();
            e.kind = rec.at("kind").get<std::string>();
            e.mag = rec.at("mag").get<double>();
            trace.events.push_back(std::move(e));
        } else if (kind == "violation") {
            ViolationRecord v;
            v.t = rec.at("t").get<std::int64_t>();
            v.product = rec.at("product").get<std::string>();
            std::string key = rec.at("expectation").get<std::string>();
            if (key.rfind("functional:", 0) == 0) {
                v.expectation.kind = Expectation::Kind::Functional;
                v.expectation.subject = key.substr(11);
            } else if (key.rfind("env:", 0) == 0) {
                v.expectation.kind = Expectation::Kind::Environmental;
                v.expectation.subject = key.substr(4);
            } else {
                throw Error(ErrorCode::IoError,
                            "trace line " + std::to_string(line_no) + " has a malformed expectation");
            }
            v.observed = rec.at("observed").get<double>();
            trace.violations.push_back(std::move(v));
        } else if (kind == "cluster") {
            ClusterSnapshot c;
            c.t = rec.at("t").get<std::int64_t>();
            for (const auto& [p, cl] : rec.at("assignments").items())
                c.assignments.emplace_back(p, cl.get<int>());
            trace.cluster_history.push_back(std::move(c));
        } else {
            throw Error(ErrorCode::IoError, "trace line " + std::to_string(line_no) +
                                                " has unknown record kind '" + kind + "'");
        }
    }
    return trace;
}

// Summary row per product: trend slope and verdict (agent window, or 16
// without an agent), final epsilon, final synchronic variety.
inline void write_summary_csv(const SimTrace& trace, const Scenario& scenario, std::ostream& out) {
    out << "product,slope,verdict,final_epsilon,synchronic_variety\n";
    for (const auto& [product, eps_series] : trace.epsilon_series) {
        std::int64_t window = 16;
        for (const auto& a : scenario.agents)
            if (a.product == product) window = a.filter_window;
        std::string slope = "nan";
        std::string verdict = "NOT_SUCCESSFUL";
        try {
            TrendResult trend = interaction_trend(trace, product, window);
            slope = detail::format_real(trend.slope);
            verdict = trend.successful ? "SUCCESSFUL" : "NOT_SUCCESSFUL";
        } catch (const Error&) {
            // keep the placeholder row
        }
        std::int64_t final_eps = eps_series.empty() ? 0 : eps_series.back();
        std::int64_t variety = 0;
        for (const auto& [p, sv] : trace.final_synchronic)
            if (p == product) variety = sv;
        out << product << "," << slope << "," << verdict << "," << final_eps << "," << variety
            << "\n";
    }
}

}  // namespace sgn::sim
