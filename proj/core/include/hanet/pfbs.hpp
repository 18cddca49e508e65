#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hanet {

/// Progressive foreground-balanced sampling policies. Epochs are 1-based.
///
///   Normal       — the whole dataset every epoch.
///   FixedX       — foreground only for the first X epochs, then everything.
///   LinearY      — background admitted in floor(n_bg / Y) increments over
///                  the first Y epochs, the full set from epoch Y+1 on.
///   FixedXLinearY — FixedX followed by the LinearY ramp.
enum class SamplingPolicy : std::uint8_t { Normal, FixedX, LinearY, FixedXLinearY };

const char* to_string(SamplingPolicy p);
SamplingPolicy sampling_policy_from_string(const std::string& s);

struct SamplingSchedule {
    SamplingPolicy policy = SamplingPolicy::Normal;
    int fixed_epochs = 0;  // X; >= 1 when the policy uses it
    int ramp_epochs = 0;   // Y; >= 1 when the policy uses it
    std::uint64_t seed = 0;
};

struct EpochPlan {
    int epoch = 1;
    int fg_count = 0;
    int bg_count = 0;
};

/// Per-epoch sample counts for a schedule. bg_count is nondecreasing in the
/// epoch and reaches n_bg once the ramp is over. Ramp increments use
/// floor(n_bg / Y) with a clamp to n_bg, so the paired WHU pools
/// (1200 fg / 3336 bg) yield increments of exactly 222 for LinearY(15) and
/// 333 for a Y=10 ramp.
EpochPlan epoch_plan(const SamplingSchedule& schedule, int epoch, int n_fg, int n_bg);

/// Materialize a plan as an ordered list of patch ids: every foreground id
/// plus the first bg_count ids of one fixed seeded permutation of bg_pool
/// (a cumulative prefix, so backgrounds admitted at epoch e stay admitted at
/// e+1). The combined list is shuffled with a per-epoch derived seed.
/// Throws std::out_of_range when the plan exceeds the pool sizes.
std::vector<std::string> select_samples(const EpochPlan& plan,
                                        std::span<const std::string> fg_pool,
                                        std::span<const std::string> bg_pool,
                                        std::uint64_t seed);

/// CSV audit of a full plan: "epoch,fg_count,bg_count,total" per row.
std::string plan_csv(const SamplingSchedule& schedule, int epochs, int n_fg, int n_bg);

}  // namespace hanet
