// Regenerates the synthetic metric traces shipped under fixtures/.
// Each fixture is constructed so the analyze output reproduces one
// published table row at its printed precision.
#include <cstdio>
#include <filesystem>

#include "trace_builder.hpp"

using namespace cx::fixtures;
using cx::domain::ExitReason;
using cx::domain::Severity;
using cx::domain::SubgraphOutcome;
using json = nlohmann::json;

namespace {

constexpr std::int64_t kT0 = 1'700'000'000'000;  // fixed epoch for determinism

json config_row(double base_budget, int team_size, const std::string& model) {
    return json{{"base_budget", base_budget}, {"team_size", team_size}, {"model", model}};
}

// Flag analysis 10/40 found, 9 correct, 1 wrong; precision 90.00, recall
// 22.50; avg rounds 47.30, avg cost $4.52, 173 agents, avg time 127.40 s;
// first correct flag at +127.4 s. Evidence: 4 agents, 4 files.
void table2_claude(const std::string& dir) {
    TraceBuilder b("fixture-table2-claude", kT0, config_row(0.30, 7, "claude-like"));
    std::vector<std::string> challenges;
    for (int i = 0; i < 40; ++i) challenges.push_back("10.2.0.1:" + std::to_string(8001 + i));
    b.set_challenges(challenges);

    // 9 solved: 2 agents, 20 rounds, $3.00, 127400 ms each.
    for (int i = 0; i < 9; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.0.1", 8001 + i);
        s.outcome = SubgraphOutcome::Solved;
        s.duration_ms = 127'400;
        AgentSpec first{10, 1'500'000, ExitReason::HandOff, 2};
        if (i < 4) first.evidence_files = 1;  // 4 agents w/ evidence, 4 files
        AgentSpec closer{10, 1'500'000, ExitReason::Solved, 0};
        closer.submissions = {{true, 127'400 + i}};
        s.agents = {first, closer};
        b.add(s);
    }
    // 1 wrong-only entrypoint: 5 agents, 62 rounds, $3.80.
    {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.0.1", 8010);
        s.outcome = SubgraphOutcome::DeadEnd;
        s.duration_ms = 127'400;
        for (int a = 0; a < 5; ++a) {
            AgentSpec agent{a == 0 ? 14 : 12, a == 0 ? 1'000'000 : 700'000,
                            ExitReason::BudgetExhausted, 0};
            if (a == 0) agent.submissions = {{false, 200'000}};
            s.agents.push_back(agent);
        }
        b.add(s);
    }
    // 30 untouched dead ends: 5 agents, 55 rounds, $5.00 each.
    for (int i = 0; i < 30; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.0.1", 8011 + i);
        s.outcome = SubgraphOutcome::DeadEnd;
        s.duration_ms = 127'400;
        s.agents = {AgentSpec{11, 1'000'000, ExitReason::HandOff, 1},
                    AgentSpec{11, 1'000'000, ExitReason::BudgetExhausted, 0},
                    AgentSpec{11, 1'000'000, ExitReason::BudgetExhausted, 0},
                    AgentSpec{11, 1'000'000, ExitReason::GiveUp, 0},
                    AgentSpec{11, 1'000'000, ExitReason::BudgetExhausted, 0}};
        b.add(s);
    }
    b.write(dir + "/table2_claude.jsonl");
}

// Round persistence 18.40 / 56.93 / 3.1x; cost persistence 1.78 / 5.44 /
// 3.0x (ratios computed on unrounded means).
void table3_claude(const std::string& dir) {
    TraceBuilder b("fixture-table3-claude", kT0, config_row(0.30, 7, "claude-like"));
    const int solved_rounds[5] = {18, 18, 18, 19, 19};  // mean 18.40
    for (int i = 0; i < 5; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.1.1", 8001 + i);
        s.outcome = SubgraphOutcome::Solved;
        AgentSpec agent{solved_rounds[i], 1'784'000, ExitReason::Solved, 0};
        agent.submissions = {{true, 1000 + i}};
        s.agents = {agent};
        b.add(s);
    }
    for (int i = 0; i < 15; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.1.1", 8101 + i);
        s.outcome = SubgraphOutcome::DeadEnd;
        int rounds = i < 13 ? 56 : 63;  // total 854, mean 56.933…
        s.agents = {AgentSpec{rounds, 5'440'000, ExitReason::BudgetExhausted, 0}};
        b.add(s);
    }
    b.write(dir + "/table3_claude.jsonl");
}

// Findings/entrypoint 0.42, solved 0.75, dead-end 0.21, signal rate 4.2%.
void table4_gemini(const std::string& dir) {
    TraceBuilder b("fixture-table4-gemini", kT0, config_row(0.30, 7, "gemini-like"));
    for (int i = 0; i < 60; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.2.1", 8001 + i);
        s.outcome = SubgraphOutcome::Solved;
        AgentSpec agent{12, 190'000, ExitReason::Solved, 0};
        if (i < 45) agent.findings = {Severity::Medium};  // 45 findings over 60 solved
        agent.submissions = {{true, 500 + i}};
        s.agents = {agent};
        b.add(s);
    }
    for (int i = 0; i < 96; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.2.1", 8201 + i);
        s.outcome = SubgraphOutcome::DeadEnd;
        AgentSpec agent{30, 970'000, ExitReason::BudgetExhausted, 0};
        if (i < 4) agent.findings.assign(5, Severity::Info);  // 20 findings on 4 dead ends
        s.agents = {agent};
        b.add(s);
    }
    b.write(dir + "/table4_gemini.jsonl");
}

// Severity histogram 24 / 128 / 205 / 22 / 157 — and, by the same
// construction, the strong-signal row: 13.40 findings/entrypoint, 5.90
// solved, 15.90 dead-end, 100.0% signal rate.
void table5_claude(const std::string& dir) {
    TraceBuilder b("fixture-table5-claude", kT0, config_row(0.30, 7, "claude-like"));
    std::vector<Severity> pool;
    auto fill = [&](Severity s, int n) { pool.insert(pool.end(), n, s); };
    fill(Severity::Critical, 24);
    fill(Severity::High, 128);
    fill(Severity::Medium, 205);
    fill(Severity::Low, 22);
    fill(Severity::Info, 157);  // 536 = 59 solved + 477 dead-end
    std::size_t cursor = 0;
    auto take = [&](int n) {
        std::vector<Severity> out(pool.begin() + cursor, pool.begin() + cursor + n);
        cursor += n;
        return out;
    };

    const std::vector<std::string> descriptions = {
        "command injection via unsanitized format parameter",
        "broken access control on the admin endpoint",
        "verbose error disclosure, possible misconfiguration",
        "authentication bypass through OR-logic login check",
    };
    for (int i = 0; i < 10; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.3.1", 8001 + i);
        s.outcome = SubgraphOutcome::Solved;
        AgentSpec agent{15, 4'000'000, ExitReason::Solved, 1};
        agent.findings = take(i < 9 ? 6 : 5);  // 59 findings over 10 solved
        agent.finding_descriptions = descriptions;
        agent.submissions = {{true, 900 + i}};
        s.agents = {agent};
        b.add(s);
    }
    for (int i = 0; i < 30; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.3.1", 8101 + i);
        s.outcome = SubgraphOutcome::DeadEnd;
        AgentSpec agent{40, 5'000'000, ExitReason::BudgetExhausted, 2};
        agent.findings = take(i < 27 ? 16 : 15);  // 477 over 30 dead ends, all >=1
        agent.finding_descriptions = descriptions;
        s.agents = {agent};
        b.add(s);
    }
    b.write(dir + "/table5_claude.jsonl");
}

// Inflation 3.800 (152 agents / 40 entrypoints), avg agents 1.200 solved /
// 8.133 dead-end; avg rounds 131.200, avg cost 1.901, rounds/cost 69.016
// (within ±0.1 of the published pre-rounding 69.044); solve rate 62.500.
void table8_11_gpt(const std::string& dir) {
    TraceBuilder b("fixture-table8-gpt", kT0, config_row(0.15, 10, "gpt-like"));
    for (int i = 0; i < 25; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.4.1", 8001 + i);
        s.outcome = SubgraphOutcome::Solved;
        int agents = i < 5 ? 2 : 1;  // 30 solved agents
        int rounds_total = 40;
        std::int64_t cost_total = 500'000;  // $0.50 per solved entrypoint
        for (int a = 0; a < agents; ++a) {
            AgentSpec agent{rounds_total / agents, cost_total / agents,
                            a + 1 == agents ? ExitReason::Solved : ExitReason::HandOff, 0};
            if (a + 1 == agents) agent.submissions = {{true, 700 + i}};
            s.agents.push_back(agent);
        }
        b.add(s);
    }
    for (int i = 0; i < 15; ++i) {
        SubgraphSpec s;
        s.entrypoint = make_ep("10.2.4.1", 8101 + i);
        s.outcome = SubgraphOutcome::DeadEnd;
        int agents = i < 13 ? 8 : 9;          // 122 dead-end agents
        int rounds_total = i < 12 ? 283 : 284;  // 4248 rounds
        std::int64_t cost_total = 4'236'000;    // $4.236 per dead-end entrypoint
        for (int a = 0; a < agents; ++a) {
            int rounds = rounds_total / agents + (a < rounds_total % agents ? 1 : 0);
            std::int64_t cost = cost_total / agents +
                                (a < static_cast<int>(cost_total % agents) ? 1 : 0);
            s.agents.push_back(AgentSpec{rounds, cost, ExitReason::BudgetExhausted, 0});
        }
        b.add(s);
    }
    b.write(dir + "/table8_11_gpt.jsonl");
}

}  // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);
    table2_claude(dir);
    table3_claude(dir);
    table4_gemini(dir);
    table5_claude(dir);
    table8_11_gpt(dir);
    std::printf("fixtures written to %s\n", dir.c_str());
    return 0;
}
