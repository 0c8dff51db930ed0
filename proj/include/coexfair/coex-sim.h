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

#ifndef COEXFAIR_COEX_SIM_H
#define COEXFAIR_COEX_SIM_H

#include "coexfair/analytic-model.h"
#include "coexfair/cdf.h"
#include "coexfair/coex-core.h"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coexfair
{

/**
 * Beacon fate relative to the ON/OFF cycle.
 *
 * Case1  generated during ON.
 * Case3b generated during OFF and deferred at least once by an ON edge
 *        (DIFS interrupted or backoff frozen).
 * Case3a generated during OFF, not deferred, but its airtime overlapped
 *        the next ON period by more than the tolerated amount.
 * Case2  everything else: sent and received within the OFF period.
 */
enum class BeaconCase
{
  Case1,
  Case2,
  Case3a,
  Case3b,
};

inline constexpr std::array<BeaconCase, 4> kAllCases = {BeaconCase::Case1, BeaconCase::Case2,
                                                        BeaconCase::Case3a, BeaconCase::Case3b};

std::string_view BeaconCaseName (BeaconCase c);
std::optional<BeaconCase> ParseBeaconCase (std::string_view name);

struct BeaconRecord
{
  std::uint64_t index{0};
  TimeUs genTime{0};
  std::optional<TimeUs> txStart;
  std::optional<TimeUs> txEnd;
  BeaconCase caseLabel{BeaconCase::Case2};
  bool delivered{false};
  TimeUs overlapUs{0};
  /// txEnd - genTime, present only for delivered beacons.
  std::optional<TimeUs> delayUs;
  std::int64_t backoffSlots{0};
  std::int64_t deferrals{0};

  bool operator== (const BeaconRecord &) const = default;
};

struct SimConfig
{
  DutyCycleConfig duty;
  WifiMacParams mac;
  OverlapPolicy pol;
  /// Beacons per replication.
  std::uint64_t nBeacons{3000};
  std::uint64_t seed{1};
  /// First generation time relative to the schedule origin; empty means
  /// draw it uniformly over one period for every replication.
  std::optional<TimeUs> gridOffset;
  std::uint32_t replications{1};

  bool operator== (const SimConfig &) const = default;
};

/// Throws InvalidConfig / TimeOverflow for unusable configs.
void RequireValid (const SimConfig &cfg);

struct ReplicationResult
{
  std::uint32_t replication{0};
  TimeUs firstGen{0};
  std::vector<BeaconRecord> records;

  bool operator== (const ReplicationResult &) const = default;
};

struct CaseCounts
{
  std::array<std::uint64_t, 4> counts{};

  std::uint64_t &operator[] (BeaconCase c) { return counts[static_cast<std::size_t> (c)]; }
  std::uint64_t operator[] (BeaconCase c) const { return counts[static_cast<std::size_t> (c)]; }
  std::uint64_t Total () const;

  bool operator== (const CaseCounts &) const = default;
};

struct SimResult
{
  SimConfig config;
  /// Ordered by replication index.
  std::vector<ReplicationResult> replications;

  std::uint64_t nBeacons{0};
  std::uint64_t delivered{0};
  double dropRate{0.0};
  /// Mean of delayUs over delivered beacons (empty when none delivered).
  std::optional<double> meanDelayUs;
  /// Mean of delayUs - (difs + mean backoff + tb) over delivered beacons.
  std::optional<double> meanAdditionalDelayUs;
  CaseCounts caseCounts;
  /// Successive txEnd differences within each replication, concatenated.
  std::vector<TimeUs> txIntervals;
  /// Same, restricted to delivered beacons.
  std::vector<TimeUs> rxIntervals;

  bool operator== (const SimResult &) const = default;
};

/**
 * Runs one replication: beacons generated on a fixed grid starting at
 * firstGen, each sensing DIFS, drawing a backoff over {0..W-1} slots that
 * freezes across ON periods and resumes after a fresh DIFS, then
 * transmitting without preemption.  Deterministic in (seed, replication).
 */
ReplicationResult SimulateReplication (const SimConfig &cfg, std::uint32_t replication);

/// Aggregates replications (sorted by index) into a SimResult.
SimResult MergeReplications (const SimConfig &cfg, std::vector<ReplicationResult> reps);

/// All replications of cfg; `threads` > 1 runs them concurrently.
SimResult Simulate (const SimConfig &cfg, unsigned threads = 1);

/// Recomputed from the records, not from the cached fields.
double DropRate (const SimResult &r);
double MeanDelay (const SimResult &r);
double MeanAdditionalDelay (const SimResult &r);

enum class EventKind
{
  Tx,
  Rx,
};

/// CDF of txEnd intervals (all beacons or delivered only).
CdfSeries IntervalCdf (const SimResult &r, EventKind which);

/**
 * Drop rate implied by the freeze rule: a beacon is lost iff its
 * transmission starts within the last (tb - 1 - floor(p_o * tb)) microseconds
 * of an OFF period.  Exact for the simulator when tOff >= tb + difs + (W-1)*slot
 * and the generation phase is uniform.
 */
double FreezeWindowDropRate (const DutyCycleConfig &duty, const WifiMacParams &mac,
                             const OverlapPolicy &pol);

/// Standard deviation of a binomial proportion.
double BinomialSigma (double p, std::uint64_t n);

struct ComparisonRecord
{
  AnalyticReport analytic;

  std::uint64_t nBeacons{0};
  std::uint64_t delivered{0};
  double simDropRate{0.0};
  double simReception{1.0};
  CaseCounts caseCounts;

  double windowDropRate{0.0};
  double sigma{0.0};
  double band3Sigma{0.0};
  double dropDeltaVsWindow{0.0};
  double dropDeltaVsAnalytic{0.0};
  /// Relative to the analytic drop; empty when that is zero.
  std::optional<double> dropRelDeltaVsAnalytic;
  bool withinBand{false};
  bool withinAnalyticTolerance{false};

  std::optional<double> simMeanDelayUs;
  std::optional<double> simMeanAdditionalDelayUs;
  std::optional<double> delayDeltaUs;
  std::optional<double> delayRelDelta;

  bool Pass () const { return withinBand && withinAnalyticTolerance; }
};

/// Absolute tolerance between simulated drop and the closed form.
inline constexpr double kAnalyticDropTolerance = 0.005;

ComparisonRecord CompareWithAnalytic (const SimConfig &cfg, unsigned threads = 1);

/// Period-only dependence check between two schedules simulated alike.
struct PairComparison
{
  ComparisonRecord first;
  ComparisonRecord second;
  bool analyticDropIdentical{false};
  double simDropDelta{0.0};
  double combinedBand3Sigma{0.0};

  bool Pass () const;
};

PairComparison ComparePair (const SimConfig &first, const DutyCycleConfig &secondDuty,
                            unsigned threads = 1);

/// Per-beacon CSV: index,gen_time_us,tx_start_us,tx_end_us,case,delivered,overlap_us,delay_us
std::string BeaconCsv (const ReplicationResult &rep);

inline constexpr std::string_view kBeaconCsvHeader =
    "index,gen_time_us,tx_start_us,tx_end_us,case,delivered,overlap_us,delay_us";

} // namespace coexfair

#endif /* COEXFAIR_COEX_SIM_H */
