#include "loihi/weights.hpp"

#include <algorithm>
#include <sstream>

#include "loihi/errors.hpp"
#include "loihi/fixedpoint.hpp"

namespace loihi {

std::string_view to_string(SignMode mode) noexcept {
    switch (mode) {
        case SignMode::excitatory:
            return "excitatory";
        case SignMode::inhibitory:
            return "inhibitory";
        case SignMode::mixed:
            return "mixed";
    }
    return "unknown";
}

SignMode parse_sign_mode(std::string_view text) {
    if (text == "excitatory") return SignMode::excitatory;
    if (text == "inhibitory") return SignMode::inhibitory;
    if (text == "mixed") return SignMode::mixed;
    throw RangeError("unknown sign mode '" + std::string(text) +
                     "' (expected excitatory, inhibitory or mixed)");
}

int precision_exponent(int weight_bits, SignMode sign_mode) {
    if (weight_bits < 1 || weight_bits > 8) {
        throw RangeError("weight bits " + std::to_string(weight_bits) + " outside [1, 8]");
    }
    const int sigma_mixed = sign_mode == SignMode::mixed ? 1 : 0;
    return 8 - (weight_bits - sigma_mixed);
}

void WeightConfig::validate() const { (void)loihi::precision_exponent(weight_bits, sign_mode); }

int WeightConfig::precision_exponent() const {
    return loihi::precision_exponent(weight_bits, sign_mode);
}

std::int64_t WeightConfig::mantissa_min() const noexcept {
    switch (sign_mode) {
        case SignMode::excitatory:
            return 0;
        case SignMode::inhibitory:
            return -255;
        case SignMode::mixed:
            return -256;
    }
    return 0;
}

std::int64_t WeightConfig::mantissa_max() const noexcept {
    switch (sign_mode) {
        case SignMode::excitatory:
            return 255;
        case SignMode::inhibitory:
            return 0;
        case SignMode::mixed:
            return 254;
    }
    return 0;
}

std::int64_t WeightConfig::plastic_low() const {
    return align_mantissa(mantissa_min(), precision_exponent());
}

std::int64_t WeightConfig::plastic_high() const {
    return align_mantissa(mantissa_max(), precision_exponent());
}

std::int64_t align_mantissa(std::int64_t mantissa, int precision_exponent) noexcept {
    const std::int64_t magnitude = mantissa < 0 ? -mantissa : mantissa;
    const std::int64_t aligned = (magnitude >> precision_exponent) << precision_exponent;
    return mantissa < 0 ? -aligned : aligned;
}

EncodedWeight encode_weight_detail(std::int64_t mantissa, int exponent, const WeightConfig& config) {
    const int ns = config.precision_exponent();
    if (mantissa < config.mantissa_min() || mantissa > config.mantissa_max()) {
        throw RangeError("weight mantissa " + std::to_string(mantissa) + " outside [" +
                         std::to_string(config.mantissa_min()) + ", " +
                         std::to_string(config.mantissa_max()) + "] for " +
                         std::string(to_string(config.sign_mode)) + " synapses");
    }
    if (exponent < kMinWeightExponent || exponent > kMaxWeightExponent) {
        throw RangeError("weight exponent " + std::to_string(exponent) + " outside [-8, 7]");
    }

    EncodedWeight out;
    out.mantissa = align_mantissa(mantissa, ns);
    const std::int64_t magnitude = out.mantissa < 0 ? -out.mantissa : out.mantissa;

    // |J| = trunc(min(|m| * 2^(6+exp), limit) / 2^6) * 2^6. For 6+exp < 0 the
    // scaled value is fractional but far below the limit, so the two shifts
    // collapse into one right shift by -exp.
    std::int64_t actual_magnitude = 0;
    const int shift = 6 + exponent;
    if (shift >= 0) {
        std::int64_t scaled = magnitude << shift;
        if (scaled > kWeightClipLimit) {
            scaled = kWeightClipLimit;
            out.clipped = true;
        }
        actual_magnitude = (scaled >> 6) << 6;
    } else {
        actual_magnitude = (magnitude >> (-exponent)) << 6;
    }
    out.actual = out.mantissa < 0 ? -actual_magnitude : actual_magnitude;
    return out;
}

SynapticWeight make_weight(std::int64_t mantissa, int exponent, const WeightConfig& config,
                           bool plastic) {
    const EncodedWeight encoded = encode_weight_detail(mantissa, exponent, config);
    return SynapticWeight{encoded.mantissa, exponent, encoded.actual, plastic};
}

SynapticWeight apply_weight_delta(const SynapticWeight& weight, double dw, const WeightConfig& config,
                                  RandomStream& rng) {
    if (!weight.plastic) {
        throw Error("apply_weight_delta called on a static weight");
    }
    const std::int64_t dw_rounded = round_away_from_zero(dw);
    const std::int64_t step =
        stochastic_round(static_cast<double>(dw_rounded), config.precision(), rng);

    // Clip the step before adding so huge dw cannot overflow the mantissa.
    const std::int64_t low = config.plastic_low();
    const std::int64_t high = config.plastic_high();
    const std::int64_t bounded_step = std::clamp<std::int64_t>(step, low - high, high - low);
    const std::int64_t mantissa = std::clamp(weight.mantissa + bounded_step, low, high);

    SynapticWeight out = weight;
    out.mantissa = mantissa;
    out.actual = encode_weight(mantissa, weight.exponent, config);
    return out;
}

std::vector<WeightTableRow> weight_table(SignMode sign_mode, int weight_bits) {
    const WeightConfig config{weight_bits, sign_mode};
    config.validate();

    std::int64_t first = 0;
    std::int64_t stride = 1;
    switch (sign_mode) {
        case SignMode::excitatory:
            first = 0;
            break;
        case SignMode::inhibitory:
            first = -255;
            break;
        case SignMode::mixed:
            first = -256;
            stride = 2;
            break;
    }

    std::vector<WeightTableRow> rows;
    rows.reserve(256 * 16);
    for (std::int64_t i = 0; i < 256; ++i) {
        const std::int64_t mantissa = first + i * stride;
        for (int exponent = kMinWeightExponent; exponent <= kMaxWeightExponent; ++exponent) {
            const EncodedWeight encoded = encode_weight_detail(mantissa, exponent, config);
            rows.push_back(WeightTableRow{sign_mode, weight_bits, mantissa, encoded.mantissa,
                                          exponent, encoded.actual, encoded.clipped});
        }
    }
    return rows;
}

std::string weight_table_csv(const std::vector<WeightTableRow>& rows) {
    std::ostringstream out;
    out << "sign_mode,n_wb,mantissa,exponent,actual_weight\n";
    for (const auto& row : rows) {
        out << to_string(row.sign_mode) << ',' << row.weight_bits << ',' << row.mantissa << ','
            << row.exponent << ',' << row.actual << '\n';
    }
    return out.str();
}

}  // namespace loihi
