#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "loihi/errors.hpp"
#include "loihi/random.hpp"

namespace loihi {

enum class SignMode { excitatory, inhibitory, mixed };

std::string_view to_string(SignMode mode) noexcept;

/// Parses "excitatory", "inhibitory" or "mixed". Throws RangeError otherwise.
SignMode parse_sign_mode(std::string_view text);

/// Largest magnitude J_scaled may take before the final 2^6 truncation.
inline constexpr std::int64_t kWeightClipLimit = (std::int64_t{1} << 21) - (std::int64_t{1} << 6);

inline constexpr int kMinWeightExponent = -8;
inline constexpr int kMaxWeightExponent = 7;

/// Precision settings shared by every synapse of a group. The exponent is
/// stored per synapse.
struct WeightConfig {
    int weight_bits = 8;
    SignMode sign_mode = SignMode::excitatory;

    /// Throws RangeError unless weight_bits is in [1, 8].
    void validate() const;

    /// n_s = 8 - (weight_bits - sigma_mixed).
    int precision_exponent() const;
    std::int64_t precision() const { return std::int64_t{1} << precision_exponent(); }

    /// Mantissa range accepted at construction: [0,255], [-255,0] or [-256,254].
    std::int64_t mantissa_min() const noexcept;
    std::int64_t mantissa_max() const noexcept;

    /// The same range shrunk toward zero onto the 2^n_s grid. Plastic updates
    /// clip to these bounds so the mantissa stays representable.
    std::int64_t plastic_low() const;
    std::int64_t plastic_high() const;
};

/// n_s for a given weight-bit count and sign mode.
int precision_exponent(int weight_bits, SignMode sign_mode);

/// sign(m) * ((|m| >> n_s) << n_s): truncation toward zero onto the grid.
std::int64_t align_mantissa(std::int64_t mantissa, int precision_exponent) noexcept;

struct EncodedWeight {
    std::int64_t mantissa = 0;  // grid-aligned
    std::int64_t actual = 0;    // J
    bool clipped = false;       // J_scaled hit the 21-bit limit
};

/// Full codec: grid-align the mantissa, scale by 2^(6+exponent), clip to
/// +/-(2^21 - 2^6), then truncate toward zero to a multiple of 2^6.
/// Throws RangeError on an out-of-range mantissa or exponent.
EncodedWeight encode_weight_detail(std::int64_t mantissa, int exponent, const WeightConfig& config);

inline std::int64_t encode_weight(std::int64_t mantissa, int exponent, const WeightConfig& config) {
    return encode_weight_detail(mantissa, exponent, config).actual;
}

struct SynapticWeight {
    std::int64_t mantissa = 0;
    int exponent = 0;
    std::int64_t actual = 0;
    bool plastic = false;

    friend bool operator==(const SynapticWeight&, const SynapticWeight&) = default;
};

/// Builds a weight from a user mantissa; the stored mantissa is grid-aligned.
SynapticWeight make_weight(std::int64_t mantissa, int exponent, const WeightConfig& config,
                           bool plastic);

/// Plastic update: round dw away from zero, stochastically round it onto the
/// 2^n_s grid, add to the mantissa, clip to [plastic_low, plastic_high] and
/// re-encode. Throws Error on a static weight.
SynapticWeight apply_weight_delta(const SynapticWeight& weight, double dw, const WeightConfig& config,
                                  RandomStream& rng);

struct WeightTableRow {
    SignMode sign_mode;
    int weight_bits;
    std::int64_t mantissa;            // as specified by the user
    std::int64_t aligned_mantissa;    // after grid truncation
    int exponent;
    std::int64_t actual;
    bool clipped;
};

/// 256 mantissas x 16 exponents. Mantissas sweep 0..255 (excitatory),
/// -255..0 (inhibitory) or -256..254 in steps of 2 (mixed).
std::vector<WeightTableRow> weight_table(SignMode sign_mode, int weight_bits);

/// CSV with header sign_mode,n_wb,mantissa,exponent,actual_weight.
std::string weight_table_csv(const std::vector<WeightTableRow>& rows);

}  // namespace loihi
