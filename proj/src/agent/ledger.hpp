#pragma once

#include <set>
#include <vector>

#include "domain/types.hpp"
#include "gateway/backend.hpp"

namespace cx::agent {

using cx::domain::Money;

// Per-agent budget accounting. cap = base × (1 + extensions) at all times;
// spent only grows, and may overshoot the cap by at most the one call that
// was already in flight when the cap was reached.
class BudgetLedger {
public:
    BudgetLedger(Money base, std::vector<std::int64_t> thresholds_ppm, int max_extensions);

    Money base() const { return base_; }
    Money cap() const { return cap_; }
    Money spent() const { return spent_; }
    int extensions() const { return extensions_; }
    int max_extensions() const { return max_extensions_; }
    Money max_single_charge() const { return max_single_charge_; }

    bool exhausted() const { return spent_ >= cap_; }
    bool can_extend() const { return extensions_ < max_extensions_; }

    // Adds one call's cost. Returns the threshold fractions (ppm) whose
    // boundary spent/cap crossed during this charge — once per
    // (threshold, extension epoch), in ascending order. A boundary that was
    // already at or below spent when the epoch began never fires: there is
    // no transition to observe.
    std::vector<std::int64_t> charge(Money cost);

    // Grants one base-budget increment and re-arms the thresholds against
    // the new cap.
    void extend();

private:
    Money base_;
    Money cap_;
    Money spent_;
    Money max_single_charge_;
    int extensions_ = 0;
    int max_extensions_;
    std::vector<std::int64_t> thresholds_ppm_;
    std::set<std::int64_t> fired_;  // this epoch
};

Money usage_cost(const cx::gateway::Usage& usage, const cx::domain::ModelPricing& pricing);

}  // namespace cx::agent
