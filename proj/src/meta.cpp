#include "calib/meta.hpp"

#include <cmath>

#include "calib/errors.hpp"

namespace calib {

double regime_epsilon(int regime, int outcomes) {
    if (regime < 1) throw ParameterError("regime index starts at 1");
    if (outcomes < 2) throw ParameterError("regime_epsilon: need at least 2 outcomes");
    return std::exp2(-static_cast<double>(regime) / (outcomes + 1));
}

std::int64_t regime_length(int regime) {
    if (regime < 1 || regime > 62) throw ParameterError("regime index out of range");
    return std::int64_t{1} << regime;
}

MetaForecaster::MetaForecaster(int outcomes, OracleConfig config, std::uint64_t seed)
    : outcomes_(outcomes), config_(config), seed_(seed) {
    if (outcomes < 2) throw ParameterError("meta-forecaster needs at least 2 outcomes");
}

void MetaForecaster::start_next_regime() {
    if (regime_ >= kMaxRegime) throw ParameterError("meta-forecaster ran past its last regime");
    ++regime_;
    grids_.emplace_back(outcomes_, regime_epsilon(regime_, outcomes_));
    CounterRng seeder(seed_, 0x100 + static_cast<std::uint64_t>(regime_));
    inner_ = std::make_unique<CalibratedForecaster>(grids_.back(), config_, seeder.next_u64(), regime_);
}

MetaForecaster::Forecast MetaForecaster::forecast() {
    if (pending_) throw ProtocolError("forecast called twice without an observe");
    if (!inner_ || inner_->rounds() == regime_length(regime_)) start_next_regime();
    auto inner = inner_->forecast();
    pending_ = true;
    return {regime_, inner.k, inner_->grid().point(inner.k), inner.diagnostics};
}

RoundRecord MetaForecaster::observe(int a) {
    if (!pending_) throw ProtocolError("observe called before forecast");
    RoundRecord record = inner_->observe(a);
    record.t = static_cast<std::int64_t>(transcript_.size()) + 1;
    transcript_.push_back(record);
    pending_ = false;
    return record;
}

}  // namespace calib
