#ifndef FMECH_RATIO_HPP
#define FMECH_RATIO_HPP

#include <limits>

#include "fmech/mechanisms.hpp"
#include "fmech/welfare.hpp"

namespace fmech {

/// Welfare values below this are treated as exactly zero.
inline constexpr double kZeroWelfare = 1e-12;

struct RatioReport {
    double mechanism_welfare = 0.0;
    double optimal_welfare = 0.0;
    double ratio = 1.0;
    bool unbounded = false; ///< optimum is zero while the mechanism's is not

    static RatioReport from(double mechanism, double optimal) {
        RatioReport r{mechanism, optimal, 1.0, false};
        if (optimal > kZeroWelfare) {
            r.ratio = mechanism / optimal;
        } else if (mechanism > kZeroWelfare) {
            r.ratio = std::numeric_limits<double>::infinity();
            r.unbounded = true;
        }
        return r;
    }
};

inline RatioReport approximation_ratio(const MechanismDescriptor& desc, const AgentProfile& profile,
                                       const FacilitySpec& spec, WelfareObjective objective,
                                       const OracleOptions& opts = {}) {
    const Solution s = run_mechanism(desc, profile, spec);
    const double mech = evaluate(profile, s, objective);
    const double opt = optimal_welfare(profile, spec, objective, opts).welfare;
    return RatioReport::from(mech, opt);
}

} // namespace fmech

#endif
