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

#include "coexfair/coex-sim.h"

#include "coexfair/rng.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace coexfair
{

std::string_view
BeaconCaseName (BeaconCase c)
{
  switch (c)
    {
    case BeaconCase::Case1:
      return "CASE1";
    case BeaconCase::Case2:
      return "CASE2";
    case BeaconCase::Case3a:
      return "CASE3A";
    case BeaconCase::Case3b:
      return "CASE3B";
    }
  return "UNKNOWN";
}

std::optional<BeaconCase>
ParseBeaconCase (std::string_view name)
{
  for (auto c : kAllCases)
    {
      if (BeaconCaseName (c) == name)
        {
          return c;
        }
    }
  return std::nullopt;
}

std::uint64_t
CaseCounts::Total () const
{
  std::uint64_t sum = 0;
  for (auto c : counts)
    {
      sum += c;
    }
  return sum;
}

namespace
{

// Keeps every simulated instant well inside int64 even after queueing and
// waiting out a few extra periods.
constexpr TimeUs kTimeBudget = TimeUs{1} << 60;

struct AccessOutcome
{
  TimeUs txStart;
  std::int64_t deferrals;
};

/*
 * DCF access for one beacon starting at `start` with `backoff` slots left.
 * Sensing only makes progress while the channel is OFF; an ON edge inside
 * DIFS restarts DIFS from the next OFF start, an ON edge inside the backoff
 * freezes the counter (a partially elapsed slot is not counted) and it
 * resumes after the next OFF start plus a fresh DIFS.
 */
AccessOutcome
RunAccess (const DutyCycleConfig &duty, const WifiMacParams &mac, TimeUs start,
           std::int64_t backoff)
{
  TimeUs t = start;
  std::int64_t deferrals = 0;
  for (;;)
    {
      const Phase ph = PhaseAt (duty, t);
      if (ph.state == ChannelState::On)
        {
          t += ph.timeToNextEdge;
        }
      const TimeUs onEdge = NextOnStart (duty, t);
      if (onEdge == kNever)
        {
          return {t + mac.difs + backoff * mac.slot, deferrals};
        }
      if (t + mac.difs > onEdge)
        {
          ++deferrals;
          t = onEdge;
          continue;
        }
      t += mac.difs;
      const std::int64_t available = (onEdge - t) / mac.slot;
      if (backoff > available)
        {
          backoff -= available;
          ++deferrals;
          t = onEdge;
          continue;
        }
      t += backoff * mac.slot;
      backoff = 0;
      if (t >= onEdge)
        {
          // counter expired exactly on the edge; the medium is already busy
          ++deferrals;
          t = onEdge;
          continue;
        }
      return {t, deferrals};
    }
}

} // namespace

void
RequireValid (const SimConfig &cfg)
{
  RequireValid (cfg.duty);
  RequireValid (cfg.mac);
  RequireValid (cfg.pol);
  if (cfg.nBeacons < 1)
    {
      throw CoexError (ErrorCode::InvalidConfig, "n_beacons must be at least 1");
    }
  if (cfg.replications < 1)
    {
      throw CoexError (ErrorCode::InvalidConfig, "replications must be at least 1");
    }
  if (cfg.gridOffset && *cfg.gridOffset < 0)
    {
      throw CoexError (ErrorCode::InvalidConfig, "grid offset must be non-negative");
    }
  const TimeUs offset = cfg.gridOffset.value_or (cfg.duty.Period ());
  const TimeUs head = cfg.duty.phaseOrigin + offset;
  if (cfg.duty.phaseOrigin < 0 || head > kTimeBudget / 2)
    {
      throw CoexError (ErrorCode::TimeOverflow, "grid start does not fit the time base");
    }
  const auto maxBeacons =
      static_cast<std::uint64_t> ((kTimeBudget / 2) / std::max<TimeUs> (cfg.mac.beaconInterval, 1));
  if (cfg.nBeacons > maxBeacons)
    {
      throw CoexError (ErrorCode::TimeOverflow,
                       "n_beacons too large for the microsecond time base (max "
                           + std::to_string (maxBeacons) + ")");
    }
}

ReplicationResult
SimulateReplication (const SimConfig &cfg, std::uint32_t replication)
{
  RequireValid (cfg);
  const auto &duty = cfg.duty;
  const auto &mac = cfg.mac;
  StreamRng rng (cfg.seed, replication);

  ReplicationResult rep;
  rep.replication = replication;
  const TimeUs offset = cfg.gridOffset
                            ? *cfg.gridOffset
                            : static_cast<TimeUs> (rng.UniformBelow (
                                  static_cast<std::uint64_t> (duty.Period ())));
  rep.firstGen = duty.phaseOrigin + offset;
  rep.records.reserve (cfg.nBeacons);

  const double tolerated = cfg.pol.po * static_cast<double> (mac.tb);
  TimeUs mediumFree = duty.phaseOrigin;
  for (std::uint64_t i = 0; i < cfg.nBeacons; ++i)
    {
      BeaconRecord rec;
      rec.index = i;
      rec.genTime = rep.firstGen + static_cast<TimeUs> (i) * mac.beaconInterval;
      rec.backoffSlots = static_cast<std::int64_t> (
          rng.UniformBelow (static_cast<std::uint64_t> (mac.cwMin)));

      const bool bornInOn = PhaseAt (duty, rec.genTime).state == ChannelState::On;
      // a beacon still pending from the previous interval goes first
      const TimeUs accessStart = std::max (rec.genTime, mediumFree);
      const auto access = RunAccess (duty, mac, accessStart, rec.backoffSlots);

      rec.txStart = access.txStart;
      rec.txEnd = access.txStart + mac.tb;
      rec.deferrals = access.deferrals;
      rec.overlapUs = OnTimeIn (duty, *rec.txStart, *rec.txEnd);
      rec.delivered = static_cast<double> (rec.overlapUs) <= tolerated;
      if (rec.delivered)
        {
          rec.delayUs = *rec.txEnd - rec.genTime;
        }
      if (bornInOn)
        {
          rec.caseLabel = BeaconCase::Case1;
        }
      else if (rec.deferrals > 0)
        {
          rec.caseLabel = BeaconCase::Case3b;
        }
      else if (!rec.delivered)
        {
          rec.caseLabel = BeaconCase::Case3a;
        }
      else
        {
          rec.caseLabel = BeaconCase::Case2;
        }
      mediumFree = *rec.txEnd;
      rep.records.push_back (rec);
    }
  return rep;
}

SimResult
MergeReplications (const SimConfig &cfg, std::vector<ReplicationResult> reps)
{
  std::sort (reps.begin (), reps.end (),
             [] (const auto &a, const auto &b) { return a.replication < b.replication; });
  SimResult r;
  r.config = cfg;
  r.replications = std::move (reps);

  double delaySum = 0.0;
  const double baseline =
      static_cast<double> (cfg.mac.difs + cfg.mac.tb) + cfg.mac.MeanBackoff ();
  for (const auto &rep : r.replications)
    {
      std::optional<TimeUs> lastTx;
      std::optional<TimeUs> lastRx;
      for (const auto &rec : rep.records)
        {
          ++r.nBeacons;
          ++r.caseCounts[rec.caseLabel];
          if (rec.txEnd)
            {
              if (lastTx)
                {
                  r.txIntervals.push_back (*rec.txEnd - *lastTx);
                }
              lastTx = rec.txEnd;
            }
          if (rec.delivered)
            {
              ++r.delivered;
              delaySum += static_cast<double> (*rec.delayUs);
              if (lastRx)
                {
                  r.rxIntervals.push_back (*rec.txEnd - *lastRx);
                }
              lastRx = rec.txEnd;
            }
        }
    }
  r.dropRate = r.nBeacons == 0
                   ? 0.0
                   : static_cast<double> (r.nBeacons - r.delivered) / static_cast<double> (r.nBeacons);
  if (r.delivered > 0)
    {
      r.meanDelayUs = delaySum / static_cast<double> (r.delivered);
      r.meanAdditionalDelayUs = *r.meanDelayUs - baseline;
    }
  return r;
}

SimResult
Simulate (const SimConfig &cfg, unsigned threads)
{
  RequireValid (cfg);
  std::vector<ReplicationResult> reps (cfg.replications);
  const unsigned workers = std::clamp<unsigned> (threads, 1u, cfg.replications);
  if (workers == 1)
    {
      for (std::uint32_t r = 0; r < cfg.replications; ++r)
        {
          reps[r] = SimulateReplication (cfg, r);
        }
    }
  else
    {
      std::vector<std::jthread> pool;
      pool.reserve (workers);
      for (unsigned w = 0; w < workers; ++w)
        {
          pool.emplace_back ([&cfg, &reps, w, workers] {
            for (std::uint32_t r = w; r < cfg.replications; r += workers)
              {
                reps[r] = SimulateReplication (cfg, r);
              }
          });
        }
    }
  return MergeReplications (cfg, std::move (reps));
}

double
DropRate (const SimResult &r)
{
  std::uint64_t total = 0;
  std::uint64_t lost = 0;
  for (const auto &rep : r.replications)
    {
      for (const auto &rec : rep.records)
        {
          ++total;
          lost += rec.delivered ? 0 : 1;
        }
    }
  if (total == 0)
    {
      throw CoexError (ErrorCode::EmptyTrace, "simulation result has no beacons");
    }
  return static_cast<double> (lost) / static_cast<double> (total);
}

double
MeanDelay (const SimResult &r)
{
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const auto &rep : r.replications)
    {
      for (const auto &rec : rep.records)
        {
          if (rec.delivered)
            {
              sum += static_cast<double> (*rec.delayUs);
              ++n;
            }
        }
    }
  if (n == 0)
    {
      throw CoexError (ErrorCode::NoDeliveredBeacons, "no delivered beacons");
    }
  return sum / static_cast<double> (n);
}

double
MeanAdditionalDelay (const SimResult &r)
{
  const auto &mac = r.config.mac;
  return MeanDelay (r) - (static_cast<double> (mac.difs + mac.tb) + mac.MeanBackoff ());
}

CdfSeries
IntervalCdf (const SimResult &r, EventKind which)
{
  const auto &samples = which == EventKind::Tx ? r.txIntervals : r.rxIntervals;
  if (samples.empty ())
    {
      throw CoexError (ErrorCode::InsufficientEvents,
                       "need at least two events per replication for an interval CDF");
    }
  return CdfSeries::FromSamples (samples);
}

double
FreezeWindowDropRate (const DutyCycleConfig &duty, const WifiMacParams &mac,
                      const OverlapPolicy &pol)
{
  if (duty.tOn == 0)
    {
      return 0.0;
    }
  // overlap o of a lost beacon ranges over 1..tb-1 (a start on the edge is
  // impossible) and must exceed p_o * tb
  const auto tolerated = static_cast<TimeUs> (std::floor (pol.po * static_cast<double> (mac.tb)));
  const TimeUs window = std::clamp<TimeUs> (mac.tb - 1 - tolerated, 0, duty.tOff);
  return static_cast<double> (window) / static_cast<double> (duty.Period ());
}

double
BinomialSigma (double p, std::uint64_t n)
{
  if (n == 0)
    {
      return 0.0;
    }
  return std::sqrt (p * (1.0 - p) / static_cast<double> (n));
}

ComparisonRecord
CompareWithAnalytic (const SimConfig &cfg, unsigned threads)
{
  ComparisonRecord c;
  c.analytic = Evaluate (cfg.duty, cfg.mac, cfg.pol);
  const SimResult sim = Simulate (cfg, threads);

  c.nBeacons = sim.nBeacons;
  c.delivered = sim.delivered;
  c.simDropRate = sim.dropRate;
  c.simReception = 1.0 - sim.dropRate;
  c.caseCounts = sim.caseCounts;

  c.windowDropRate = FreezeWindowDropRate (cfg.duty, cfg.mac, cfg.pol);
  c.sigma = BinomialSigma (c.windowDropRate, sim.nBeacons);
  c.band3Sigma = 3.0 * c.sigma;
  c.dropDeltaVsWindow = c.simDropRate - c.windowDropRate;
  c.dropDeltaVsAnalytic = c.simDropRate - c.analytic.dropProbability;
  if (c.analytic.dropProbability > 0.0)
    {
      c.dropRelDeltaVsAnalytic = c.dropDeltaVsAnalytic / c.analytic.dropProbability;
    }
  // a zero-width band only admits an exact match
  c.withinBand = std::abs (c.dropDeltaVsWindow) <= c.band3Sigma;
  c.withinAnalyticTolerance = std::abs (c.dropDeltaVsAnalytic) <= kAnalyticDropTolerance;

  c.simMeanDelayUs = sim.meanDelayUs;
  c.simMeanAdditionalDelayUs = sim.meanAdditionalDelayUs;
  if (c.simMeanDelayUs && c.analytic.eDelivery)
    {
      c.delayDeltaUs = *c.simMeanDelayUs - *c.analytic.eDelivery;
      c.delayRelDelta = *c.delayDeltaUs / *c.analytic.eDelivery;
    }
  return c;
}

bool
PairComparison::Pass () const
{
  return analyticDropIdentical
         && (simDropDelta == 0.0 || std::abs (simDropDelta) < combinedBand3Sigma);
}

PairComparison
ComparePair (const SimConfig &first, const DutyCycleConfig &secondDuty, unsigned threads)
{
  SimConfig second = first;
  second.duty = secondDuty;

  PairComparison p;
  p.first = CompareWithAnalytic (first, threads);
  p.second = CompareWithAnalytic (second, threads);
  p.analyticDropIdentical = p.first.analytic.dropProbability == p.second.analytic.dropProbability;
  p.simDropDelta = p.first.simDropRate - p.second.simDropRate;
  p.combinedBand3Sigma =
      3.0 * std::hypot (BinomialSigma (p.first.simDropRate, p.first.nBeacons),
                        BinomialSigma (p.second.simDropRate, p.second.nBeacons));
  return p;
}

std::string
BeaconCsv (const ReplicationResult &rep)
{
  std::string out (kBeaconCsvHeader);
  out += '\n';
  char buf[160];
  auto opt = [] (const std::optional<TimeUs> &v) {
    return v ? std::to_string (*v) : std::string ();
  };
  for (const auto &rec : rep.records)
    {
      std::snprintf (buf, sizeof buf, "%llu,%lld,%s,%s,%s,%d,%lld,%s\n",
                     static_cast<unsigned long long> (rec.index),
                     static_cast<long long> (rec.genTime), opt (rec.txStart).c_str (),
                     opt (rec.txEnd).c_str (), std::string (BeaconCaseName (rec.caseLabel)).c_str (),
                     rec.delivered ? 1 : 0, static_cast<long long> (rec.overlapUs),
                     opt (rec.delayUs).c_str ());
      out += buf;
    }
  return out;
}

} // namespace coexfair
