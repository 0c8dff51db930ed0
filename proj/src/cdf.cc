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

#include "coexfair/cdf.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace coexfair
{

CdfSeries
CdfSeries::FromSamples (std::span<const TimeUs> samples)
{
  if (samples.empty ())
    {
      throw CoexError (ErrorCode::InsufficientEvents, "no samples for CDF");
    }
  std::vector<TimeUs> sorted (samples.begin (), samples.end ());
  std::sort (sorted.begin (), sorted.end ());

  CdfSeries cdf;
  cdf.m_samples = sorted.size ();
  const double n = static_cast<double> (sorted.size ());
  for (std::size_t i = 0; i < sorted.size (); ++i)
    {
      if (i + 1 < sorted.size () && sorted[i + 1] == sorted[i])
        {
          continue;
        }
      // last one exact by construction: (n / n)
      cdf.m_points.push_back ({sorted[i], static_cast<double> (i + 1) / n});
    }
  return cdf;
}

double
CdfSeries::Evaluate (double x) const
{
  auto it = std::upper_bound (m_points.begin (), m_points.end (), x,
                              [] (double v, const Point &p) { return v < static_cast<double> (p.value); });
  if (it == m_points.begin ())
    {
      return 0.0;
    }
  return std::prev (it)->cumProb;
}

TimeUs
CdfSeries::Quantile (double q) const
{
  if (m_points.empty ())
    {
      throw CoexError (ErrorCode::InsufficientEvents, "empty CDF");
    }
  const auto n = static_cast<double> (m_samples);
  const auto rank = static_cast<std::size_t> (std::max (1.0, std::ceil (q * n)));
  for (const auto &p : m_points)
    {
      if (static_cast<std::size_t> (std::llround (p.cumProb * n)) >= rank)
        {
          return p.value;
        }
    }
  return m_points.back ().value;
}

std::string
CdfSeries::ToCsv () const
{
  std::string out = "interval_us,cum_prob\n";
  char buf[64];
  for (const auto &p : m_points)
    {
      std::snprintf (buf, sizeof buf, "%lld,%.17g\n", static_cast<long long> (p.value), p.cumProb);
      out += buf;
    }
  return out;
}

std::vector<TimeUs>
SuccessiveDifferences (std::span<const TimeUs> times)
{
  std::vector<TimeUs> out;
  if (times.size () < 2)
    {
      return out;
    }
  out.reserve (times.size () - 1);
  for (std::size_t i = 1; i < times.size (); ++i)
    {
      out.push_back (times[i] - times[i - 1]);
    }
  return out;
}

} // namespace coexfair
