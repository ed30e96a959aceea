#pragma once
// Generated by scripts/regen_defaults.sh -- do not edit by hand.
namespace pqnb::calibrated {
inline constexpr double kUlRateBps = 79999.999999999942;
inline constexpr double kDlRateBps = 13546.159322448742;
inline constexpr double kTurnaroundS = 0.0010000000000000044;
inline constexpr double kAckTimeS = 0.062602542463034469;
inline constexpr long long kMssBytes = 256;
inline constexpr int kAckEvery = 1;
inline constexpr double kSplitFlight1 = 0.40288245827306296;
inline constexpr double kSplitFlight2 = 0;
inline constexpr double kSplitFlight3 = 0.59711754172693698;
inline constexpr double kMaxRelativeError = 0.27297832280898793;
}  // namespace pqnb::calibrated
