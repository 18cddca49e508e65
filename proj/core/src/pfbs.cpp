#include "hanet/pfbs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "hanet/rng.hpp"

namespace hanet {

const char* to_string(SamplingPolicy p) {
    switch (p) {
        case SamplingPolicy::Normal: return "normal";
        case SamplingPolicy::FixedX: return "fixed";
        case SamplingPolicy::LinearY: return "linear";
        case SamplingPolicy::FixedXLinearY: return "fixed_linear";
    }
    return "normal";
}

SamplingPolicy sampling_policy_from_string(const std::string& s) {
    if (s == "normal") return SamplingPolicy::Normal;
    if (s == "fixed") return SamplingPolicy::FixedX;
    if (s == "linear") return SamplingPolicy::LinearY;
    if (s == "fixed_linear") return SamplingPolicy::FixedXLinearY;
    throw std::invalid_argument("unknown sampling policy: " + s);
}

namespace {

int ramp_count(int epochs_into_ramp, int ramp_epochs, int n_bg) {
    const std::int64_t step = ramp_epochs > 0 ? n_bg / ramp_epochs : n_bg;
    const std::int64_t count = static_cast<std::int64_t>(epochs_into_ramp) * step;
    return static_cast<int>(std::min<std::int64_t>(count, n_bg));
}

}  // namespace

EpochPlan epoch_plan(const SamplingSchedule& schedule, int epoch, int n_fg, int n_bg) {
    if (epoch < 1) throw std::invalid_argument("epoch_plan: epochs are 1-based");
    if (n_fg < 0 || n_bg < 0) throw std::invalid_argument("epoch_plan: negative pool size");

    EpochPlan plan;
    plan.epoch = epoch;
    plan.fg_count = n_fg;

    const int x = schedule.fixed_epochs;
    const int y = schedule.ramp_epochs;
    switch (schedule.policy) {
        case SamplingPolicy::Normal:
            plan.bg_count = n_bg;
            break;
        case SamplingPolicy::FixedX:
            plan.bg_count = epoch <= x ? 0 : n_bg;
            break;
        case SamplingPolicy::LinearY:
            plan.bg_count = epoch <= y ? ramp_count(epoch - 1, y, n_bg) : n_bg;
            break;
        case SamplingPolicy::FixedXLinearY:
            if (epoch <= x)
                plan.bg_count = 0;
            else if (epoch <= x + y)
                plan.bg_count = ramp_count(epoch - x, y, n_bg);
            else
                plan.bg_count = n_bg;
            break;
    }
    return plan;
}

std::vector<std::string> select_samples(const EpochPlan& plan,
                                        std::span<const std::string> fg_pool,
                                        std::span<const std::string> bg_pool,
                                        std::uint64_t seed) {
    if (plan.fg_count > static_cast<int>(fg_pool.size()) ||
        plan.bg_count > static_cast<int>(bg_pool.size()) || plan.fg_count < 0 || plan.bg_count < 0)
        throw std::out_of_range("select_samples: plan counts exceed pool sizes");

    // One fixed permutation of the background pool per schedule seed; the
    // per-epoch selection is a prefix of it, so admitted ids persist.
    std::vector<std::size_t> bg_order(bg_pool.size());
    for (std::size_t i = 0; i < bg_order.size(); ++i) bg_order[i] = i;
    Rng perm_rng(mix_seed(seed, 0xb6u));
    perm_rng.shuffle(bg_order);

    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(plan.fg_count) + plan.bg_count);
    for (int i = 0; i < plan.fg_count; ++i) ids.push_back(fg_pool[static_cast<std::size_t>(i)]);
    for (int i = 0; i < plan.bg_count; ++i) ids.push_back(bg_pool[bg_order[static_cast<std::size_t>(i)]]);

    Rng epoch_rng(mix_seed(seed, 0xE70C0000ULL + static_cast<std::uint64_t>(plan.epoch)));
    epoch_rng.shuffle(ids);
    return ids;
}

std::string plan_csv(const SamplingSchedule& schedule, int epochs, int n_fg, int n_bg) {
    std::ostringstream out;
    out << "epoch,fg_count,bg_count,total\n";
    for (int e = 1; e <= epochs; ++e) {
        const EpochPlan p = epoch_plan(schedule, e, n_fg, n_bg);
        out << e << ',' << p.fg_count << ',' << p.bg_count << ',' << (p.fg_count + p.bg_count) << '\n';
    }
    return out.str();
}

}  // namespace hanet
