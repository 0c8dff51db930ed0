/*
 * Copyright (c) 2026
 *
 * This program is free software; you can redistribute it and/or modify
 * it under the terms of the GNU General Public License version 2 as
 * published by the Free Software Foundation;
 *
 * This program is distributed in the hope that it will be useful,
 * but WITHOUT ANY WARRANTY; without even the implied warranty of
 * MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
 * GNU General Public License for more details.
 *
 * You should have received a copy of the GNU General Public License
 * along with this program; if not, write to the Free Software
 * Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA
 *
 */

#ifndef COEXFAIR_COEX_CORE_H
#define COEXFAIR_COEX_CORE_H

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coexfair
{

/// All times are integer microseconds.
using TimeUs = std::int64_t;

inline constexpr TimeUs kNever = std::numeric_limits<TimeUs>::max ();

enum class ErrorCode
{
  InvalidConfig,
  TimeBeforeOrigin,
  ZeroPeriod,
  ZeroSlot,
  WeightNegative,
  NoDeliveredBeacons,
  InsufficientEvents,
  MalformedRow,
  NonMonotoneTimestamp,
  EmptyTrace,
  RxNotSubset,
  GridMisfit,
  TraceTooShort,
  TimeOverflow,
  Io,
};

/// Stable upper-case name used in reports and error JSON.
std::string_view ErrorCodeName (ErrorCode code);

/**
 * Exception carrying a machine-readable code.  An optional line number is
 * attached by the CSV/config readers.
 */
class CoexError : public std::runtime_error
{
public:
  CoexError (ErrorCode code, const std::string &what, std::int64_t line = 0);

  ErrorCode Code () const { return m_code; }
  std::int64_t Line () const { return m_line; }

private:
  ErrorCode m_code;
  std::int64_t m_line;
};

/**
 * LTE-U ON/OFF schedule.  The first ON period begins at phaseOrigin; each
 * cycle is [ON for tOn][OFF for tOff] with half-open intervals, so an
 * OFF->ON edge instant belongs to ON and an ON->OFF edge instant to OFF.
 */
struct DutyCycleConfig
{
  TimeUs tOn{20000};
  TimeUs tOff{1000};
  TimeUs phaseOrigin{0};

  TimeUs Period () const { return tOn + tOff; }

  bool operator== (const DutyCycleConfig &) const = default;
};

/// MAC timing of the beaconing AP.  Defaults are the 802.11ac values the
/// analysis is built on.
struct WifiMacParams
{
  TimeUs difs{34};
  TimeUs slot{9};
  std::int64_t cwMin{16};
  std::int64_t beaconBytes{305};
  double beaconRateMbps{6.0};
  TimeUs tb{427};
  TimeUs preamble{20};
  TimeUs beaconInterval{102400};

  /// Mean backoff in microseconds for a draw uniform over {0, ..., cwMin-1}.
  double MeanBackoff () const;

  bool operator== (const WifiMacParams &) const = default;
};

/// Fraction of beacon airtime allowed to overlap an ON period while the
/// beacon still counts as received.
struct OverlapPolicy
{
  double po{0.0};

  bool operator== (const OverlapPolicy &) const = default;
};

enum class ChannelState
{
  On,
  Off,
};

struct Phase
{
  ChannelState state;
  TimeUs timeToNextEdge;
  std::int64_t cycleIndex;
};

enum class Violation
{
  OnTooLong,
  OnTooShort,
  OffTooShort,
  NonpositivePeriod,
  NegativeOn,
  NonpositiveOff,
};

std::string_view ViolationName (Violation v);

/// LTE-U Forum bounds applied in strict mode.
inline constexpr TimeUs kForumMinOn = 4000;
inline constexpr TimeUs kForumMaxOn = 20000;
inline constexpr TimeUs kForumMinOff = 1000;

/**
 * Checks a schedule.  Loose mode enforces only the structural invariants
 * (tOn >= 0, tOff > 0); strict mode adds the Forum ON/OFF bounds.
 * An empty result means the config is acceptable.
 */
std::vector<Violation> ValidateConfig (const DutyCycleConfig &cfg, bool strict = false);

/// Throws CoexError(InvalidConfig) listing every structural violation.
void RequireValid (const DutyCycleConfig &cfg);

/// Structural MAC checks: positive durations and cwMin >= 1.
std::vector<std::string> ValidateMac (const WifiMacParams &mac);
void RequireValid (const WifiMacParams &mac);
void RequireValid (const OverlapPolicy &pol);

/// tOn / (tOn + tOff).
double DutyCycle (const DutyCycleConfig &cfg);

/// Channel state at absolute time t.  Throws TimeBeforeOrigin when t < phaseOrigin.
Phase PhaseAt (const DutyCycleConfig &cfg, TimeUs t);

/// Start of the first ON period at or after t, or kNever when tOn == 0.
TimeUs NextOnStart (const DutyCycleConfig &cfg, TimeUs t);

/// Measure of ON time inside [a, b).  Both ends must be >= phaseOrigin.
TimeUs OnTimeIn (const DutyCycleConfig &cfg, TimeUs a, TimeUs b);

/**
 * Nominal airtime from frame length and rate.  The configured tb is what the
 * model uses; this is only for the consistency check below.
 */
double NominalAirtime (const WifiMacParams &mac);

/// True when tb deviates from NominalAirtime by more than one slot.
bool AirtimeMismatch (const WifiMacParams &mac);

} // namespace coexfair

#endif /* COEXFAIR_COEX_CORE_H */
