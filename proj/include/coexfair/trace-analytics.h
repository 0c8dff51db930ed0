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

#ifndef COEXFAIR_TRACE_ANALYTICS_H
#define COEXFAIR_TRACE_ANALYTICS_H

#include "coexfair/cdf.h"
#include "coexfair/coex-core.h"
#include "coexfair/coex-sim.h"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace coexfair
{

inline constexpr std::int64_t kSeqModulus = 4096;
inline constexpr std::int64_t kSeqWrapThreshold = 2048;

struct TraceEntry
{
  TimeUs timestampUs;
  std::int64_t seqNo;

  bool operator== (const TraceEntry &) const = default;
};

/// Beacon observations from one capture point, timestamps strictly increasing.
struct BeaconTrace
{
  std::vector<TraceEntry> entries;
  std::string sourceLabel;

  std::vector<TimeUs> Timestamps () const;

  bool operator== (const BeaconTrace &) const = default;
};

struct ParseOptions
{
  /// When false, a row earlier than its predecessor is an error instead of
  /// being sorted into place.
  bool sortRows{true};
};

/**
 * Reads a capture export with a header naming at least `timestamp_us` and
 * `seq_no`; other columns are ignored.  Rows are sorted by timestamp and
 * two rows with the same timestamp are rejected.
 */
BeaconTrace ParseCaptureCsv (std::istream &in, const std::string &label, ParseOptions opts = {});
BeaconTrace ParseCaptureCsv (const std::filesystem::path &path, ParseOptions opts = {});

/**
 * Adapts the simulator's per-beacon CSV: timestamp = tx_end_us,
 * seq_no = index mod 4096.  The Tx side keeps every transmitted beacon, the
 * Rx side only rows with delivered = 1.
 */
BeaconTrace ParseBeaconCsv (std::istream &in, EventKind side, const std::string &label);
BeaconTrace ParseBeaconCsv (const std::filesystem::path &path, EventKind side);

/// Same mapping applied to an in-memory replication.
BeaconTrace TraceFromReplication (const ReplicationResult &rep, EventKind side);

/// `timestamp_us,seq_no` CSV with header.
std::string TraceCsv (const BeaconTrace &trace);

/// Sequence numbers made monotone across the 12-bit wrap.
std::vector<std::int64_t> UnrollSequence (const BeaconTrace &trace);

struct MatchReport
{
  std::uint64_t nTx{0};
  std::uint64_t nRx{0};
  std::vector<std::int64_t> missingSeq;
  double lossRatio{0.0};
  std::uint64_t longestMissStreak{0};

  bool operator== (const MatchReport &) const = default;
};

/// Loss accounting by sequence number.  Throws RX_NOT_SUBSET when the
/// receiver saw a sequence number the transmitter never sent.
MatchReport MatchSequences (const BeaconTrace &tx, const BeaconTrace &rx);

/// Minimum clean-trace length accepted by EstimateFirstBeaconTime.
inline constexpr std::size_t kMinCleanEntries = 10;
/// Largest residual spread (max - min) of a clean grid fit.
inline constexpr TimeUs kMaxGridSpread = 1000;

/**
 * Generation time of the first beacon from a capture on a clean channel:
 * the median over entries of t_i - k_i * interval, with k_i taken from the
 * unrolled sequence numbers, so a missing beacon does not shift the grid.
 */
double EstimateFirstBeaconTime (const BeaconTrace &clean, TimeUs nominalInterval = 102400);

/// mean(t_i) - b1 - interval * (N - 1) / 2.  Assumes no drops in the trace.
double AdditionalDelay (const BeaconTrace &rx, double b1, TimeUs nominalInterval = 102400);

CdfSeries IntervalCdf (const BeaconTrace &trace);

} // namespace coexfair

#endif /* COEXFAIR_TRACE_ANALYTICS_H */
