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

#ifndef COEXFAIR_CDF_H
#define COEXFAIR_CDF_H

#include "coexfair/coex-core.h"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coexfair
{

/**
 * Empirical CDF.  Values are strictly increasing, cumulative probabilities
 * nondecreasing and the last one is exactly 1.
 */
class CdfSeries
{
public:
  struct Point
  {
    TimeUs value;
    double cumProb;

    bool operator== (const Point &) const = default;
  };

  CdfSeries () = default;

  /// Builds the CDF of the given samples; INSUFFICIENT_EVENTS when empty.
  static CdfSeries FromSamples (std::span<const TimeUs> samples);

  const std::vector<Point> &Points () const { return m_points; }
  std::size_t SampleCount () const { return m_samples; }

  /// P(X <= x).
  double Evaluate (double x) const;

  /// Smallest sample value v with P(X <= v) >= q (nearest rank), q in (0, 1].
  TimeUs Quantile (double q) const;

  /// `interval_us,cum_prob` CSV with header.
  std::string ToCsv () const;

  bool operator== (const CdfSeries &) const = default;

private:
  std::vector<Point> m_points;
  std::size_t m_samples{0};
};

/// Differences of successive timestamps.
std::vector<TimeUs> SuccessiveDifferences (std::span<const TimeUs> times);

} // namespace coexfair

#endif /* COEXFAIR_CDF_H */
