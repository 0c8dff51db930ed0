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

#ifndef COEXFAIR_ANALYTIC_MODEL_H
#define COEXFAIR_ANALYTIC_MODEL_H

#include "coexfair/coex-core.h"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coexfair
{

/**
 * Closed-form beacon drop probability and expected delivery time of a
 * beacon sent with CSMA/CA under an LTE-U ON/OFF schedule.
 *
 * Beacons are generated uniformly over the cycle.  A beacon generated in
 * one of the last ceil((1 - p_o) * tb / slot) slots before an ON edge is
 * counted as dropped, so the drop probability depends on the schedule only
 * through its period.  Delays are split into three cases:
 *
 *  - case 1: generated during ON, waits for the OFF edge then DIFS + backoff;
 *  - case 2: generated during OFF and sent within the same OFF period;
 *  - case 3: ON starts while sensing, so the beacon waits a whole ON period.
 *
 * The total delivery time mixes the three with the printed weights, which
 * do not sum to one on the OFF branch; no renormalisation is applied.
 */

/// Probability that a beacon is generated in a given slot: slot / period.
double SlotGenProbability (const DutyCycleConfig &cfg, const WifiMacParams &mac);

/// Number of slots at the end of OFF in which a generated beacon is lost.
std::int64_t DropWindowSlots (const WifiMacParams &mac, const OverlapPolicy &pol);

/// SlotGenProbability * DropWindowSlots, clamped to [0, 1]; zero when tOn == 0.
double BeaconDropProbability (const DutyCycleConfig &cfg, const WifiMacParams &mac,
                              const OverlapPolicy &pol);

/// tOn/2 + DIFS + (W-1)/2 * slot + tb.
double ExpectedDelayCase1 (const DutyCycleConfig &cfg, const WifiMacParams &mac);

/// DIFS + tb.
double ExpectedDelayCase2 (const WifiMacParams &mac);

/// DIFS/2 + tOn + DIFS + (W-1)/2 * slot + tb.
double ExpectedDelayCase3 (const DutyCycleConfig &cfg, const WifiMacParams &mac);

/// Weighted total; throws WEIGHT_NEGATIVE when tOff <= tb + DIFS.
double ExpectedDeliveryTime (const DutyCycleConfig &cfg, const WifiMacParams &mac);

struct AnalyticReport
{
  DutyCycleConfig duty;
  WifiMacParams mac;
  OverlapPolicy pol;

  double ps{0.0};
  double dropProbability{0.0};
  double receptionProbability{1.0};
  double eT1{0.0};
  double eT2{0.0};
  double eT3{0.0};

  /// Empty when the delivery time is undefined; deliveryError says why.
  std::optional<double> eDelivery;
  std::optional<std::string> deliveryError;

  /// Set when the config itself was rejected; no other field is meaningful.
  std::optional<std::string> error;

  bool operator== (const AnalyticReport &) const = default;
};

/// Evaluates everything for one setup.  Invalid inputs throw.
AnalyticReport Evaluate (const DutyCycleConfig &cfg, const WifiMacParams &mac,
                         const OverlapPolicy &pol);

/// One report per setup; a failing setup yields a report with `error` set.
std::vector<AnalyticReport> TheoryTable (std::span<const DutyCycleConfig> setups,
                                         const WifiMacParams &mac, const OverlapPolicy &pol);

/**
 * The three reference setups with their published theory values
 * (reception probability and delivery time in ms).
 */
struct PublishedTheoryRow
{
  std::string label;
  DutyCycleConfig duty;
  double reception;
  double deliveryMs;
};

std::vector<PublishedTheoryRow> PublishedTheoryRows ();

} // namespace coexfair

#endif /* COEXFAIR_ANALYTIC_MODEL_H */
