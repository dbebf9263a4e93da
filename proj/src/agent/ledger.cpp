#include "agent/ledger.hpp"

#include <stdexcept>

namespace cx::agent {

BudgetLedger::BudgetLedger(Money base, std::vector<std::int64_t> thresholds_ppm,
                           int max_extensions)
    : base_(base), cap_(base), max_extensions_(max_extensions),
      thresholds_ppm_(std::move(thresholds_ppm)) {
    if (base <= Money{}) throw std::invalid_argument("ledger base budget must be positive");
}

std::vector<std::int64_t> BudgetLedger::charge(Money cost) {
    if (cost < Money{}) throw std::invalid_argument("charge cost must be >= 0");
    Money prev = spent_;
    spent_ += cost;
    if (cost > max_single_charge_) max_single_charge_ = cost;

    std::vector<std::int64_t> crossed;
    for (auto ppm : thresholds_ppm_) {
        if (fired_.count(ppm)) continue;
        Money boundary = Money::from_micros(cap_.micros() * ppm / 1'000'000);
        if (prev < boundary && spent_ >= boundary) {
            fired_.insert(ppm);
            crossed.push_back(ppm);
        }
    }
    return crossed;
}

void BudgetLedger::extend() {
    if (!can_extend()) throw std::logic_error("extension limit already reached");
    ++extensions_;
    cap_ += base_;
    fired_.clear();
}

Money usage_cost(const cx::gateway::Usage& usage, const cx::domain::ModelPricing& pricing) {
    return cx::domain::token_cost(usage.input_tokens, pricing.input_per_mtok) +
           cx::domain::token_cost(usage.output_tokens, pricing.output_per_mtok);
}

}  // namespace cx::agent
