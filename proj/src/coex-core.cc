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

#include "coexfair/coex-core.h"

#include <algorithm>
#include <cmath>

namespace coexfair
{

std::string_view
ErrorCodeName (ErrorCode code)
{
  switch (code)
    {
    case ErrorCode::InvalidConfig:
      return "INVALID_CONFIG";
    case ErrorCode::TimeBeforeOrigin:
      return "TIME_BEFORE_ORIGIN";
    case ErrorCode::ZeroPeriod:
      return "ZERO_PERIOD";
    case ErrorCode::ZeroSlot:
      return "ZERO_SLOT";
    case ErrorCode::WeightNegative:
      return "WEIGHT_NEGATIVE";
    case ErrorCode::NoDeliveredBeacons:
      return "NO_DELIVERED_BEACONS";
    case ErrorCode::InsufficientEvents:
      return "INSUFFICIENT_EVENTS";
    case ErrorCode::MalformedRow:
      return "MALFORMED_ROW";
    case ErrorCode::NonMonotoneTimestamp:
      return "NON_MONOTONE_TIMESTAMP";
    case ErrorCode::EmptyTrace:
      return "EMPTY_TRACE";
    case ErrorCode::RxNotSubset:
      return "RX_NOT_SUBSET";
    case ErrorCode::GridMisfit:
      return "GRID_MISFIT";
    case ErrorCode::TraceTooShort:
      return "TRACE_TOO_SHORT";
    case ErrorCode::TimeOverflow:
      return "TIME_OVERFLOW";
    case ErrorCode::Io:
      return "IO_ERROR";
    }
  return "UNKNOWN";
}

CoexError::CoexError (ErrorCode code, const std::string &what, std::int64_t line)
  : std::runtime_error (what),
    m_code (code),
    m_line (line)
{
}

double
WifiMacParams::MeanBackoff () const
{
  return static_cast<double> (cwMin - 1) / 2.0 * static_cast<double> (slot);
}

std::string_view
ViolationName (Violation v)
{
  switch (v)
    {
    case Violation::OnTooLong:
      return "ON_TOO_LONG";
    case Violation::OnTooShort:
      return "ON_TOO_SHORT";
    case Violation::OffTooShort:
      return "OFF_TOO_SHORT";
    case Violation::NonpositivePeriod:
      return "NONPOSITIVE_PERIOD";
    case Violation::NegativeOn:
      return "NEGATIVE_ON";
    case Violation::NonpositiveOff:
      return "NONPOSITIVE_OFF";
    }
  return "UNKNOWN";
}

std::vector<Violation>
ValidateConfig (const DutyCycleConfig &cfg, bool strict)
{
  std::vector<Violation> out;
  if (cfg.tOn < 0)
    {
      out.push_back (Violation::NegativeOn);
    }
  if (cfg.tOff <= 0)
    {
      out.push_back (Violation::NonpositiveOff);
    }
  if (cfg.Period () <= 0)
    {
      out.push_back (Violation::NonpositivePeriod);
    }
  if (strict)
    {
      if (cfg.tOn > kForumMaxOn)
        {
          out.push_back (Violation::OnTooLong);
        }
      if (cfg.tOn < kForumMinOn)
        {
          out.push_back (Violation::OnTooShort);
        }
      if (cfg.tOff < kForumMinOff)
        {
          out.push_back (Violation::OffTooShort);
        }
    }
  return out;
}

void
RequireValid (const DutyCycleConfig &cfg)
{
  auto violations = ValidateConfig (cfg, false);
  if (violations.empty ())
    {
      return;
    }
  std::string msg = "invalid duty cycle:";
  for (auto v : violations)
    {
      msg += " ";
      msg += ViolationName (v);
    }
  throw CoexError (ErrorCode::InvalidConfig, msg);
}

std::vector<std::string>
ValidateMac (const WifiMacParams &mac)
{
  std::vector<std::string> out;
  auto positive = [&out] (const char *name, auto value) {
    if (!(value > 0))
      {
        out.push_back (std::string (name) + " must be positive");
      }
  };
  positive ("difs_us", mac.difs);
  positive ("slot_us", mac.slot);
  positive ("cw_min", mac.cwMin);
  positive ("beacon_bytes", mac.beaconBytes);
  positive ("beacon_rate_mbps", mac.beaconRateMbps);
  positive ("t_b_us", mac.tb);
  positive ("preamble_us", mac.preamble);
  positive ("beacon_interval_us", mac.beaconInterval);
  return out;
}

void
RequireValid (const WifiMacParams &mac)
{
  auto problems = ValidateMac (mac);
  if (problems.empty ())
    {
      return;
    }
  std::string msg = "invalid MAC parameters:";
  for (const auto &p : problems)
    {
      msg += " " + p + ";";
    }
  throw CoexError (ErrorCode::InvalidConfig, msg);
}

void
RequireValid (const OverlapPolicy &pol)
{
  if (!(pol.po >= 0.0 && pol.po <= 1.0))
    {
      throw CoexError (ErrorCode::InvalidConfig, "p_o must lie in [0, 1]");
    }
}

double
DutyCycle (const DutyCycleConfig &cfg)
{
  return static_cast<double> (cfg.tOn) / static_cast<double> (cfg.Period ());
}

Phase
PhaseAt (const DutyCycleConfig &cfg, TimeUs t)
{
  if (t < cfg.phaseOrigin)
    {
      throw CoexError (ErrorCode::TimeBeforeOrigin, "time precedes the schedule origin");
    }
  const TimeUs period = cfg.Period ();
  const TimeUs rel = t - cfg.phaseOrigin;
  const TimeUs within = rel % period;
  Phase p;
  p.cycleIndex = rel / period;
  if (within < cfg.tOn)
    {
      p.state = ChannelState::On;
      p.timeToNextEdge = cfg.tOn - within;
    }
  else
    {
      p.state = ChannelState::Off;
      p.timeToNextEdge = period - within;
    }
  return p;
}

TimeUs
NextOnStart (const DutyCycleConfig &cfg, TimeUs t)
{
  if (cfg.tOn == 0)
    {
      return kNever;
    }
  const TimeUs period = cfg.Period ();
  const TimeUs rel = t - cfg.phaseOrigin;
  if (rel <= 0)
    {
      return cfg.phaseOrigin;
    }
  const TimeUs within = rel % period;
  return within == 0 ? t : t + (period - within);
}

namespace
{

// ON time in [origin, x).
TimeUs
OnTimeBefore (const DutyCycleConfig &cfg, TimeUs x)
{
  const TimeUs rel = x - cfg.phaseOrigin;
  const TimeUs period = cfg.Period ();
  return (rel / period) * cfg.tOn + std::min (rel % period, cfg.tOn);
}

} // namespace

TimeUs
OnTimeIn (const DutyCycleConfig &cfg, TimeUs a, TimeUs b)
{
  if (a < cfg.phaseOrigin || b < cfg.phaseOrigin)
    {
      throw CoexError (ErrorCode::TimeBeforeOrigin, "interval precedes the schedule origin");
    }
  if (b <= a)
    {
      return 0;
    }
  return OnTimeBefore (cfg, b) - OnTimeBefore (cfg, a);
}

double
NominalAirtime (const WifiMacParams &mac)
{
  return static_cast<double> (mac.preamble)
         + 8.0 * static_cast<double> (mac.beaconBytes) / mac.beaconRateMbps;
}

bool
AirtimeMismatch (const WifiMacParams &mac)
{
  return std::abs (static_cast<double> (mac.tb) - NominalAirtime (mac))
         > static_cast<double> (mac.slot);
}

} // namespace coexfair
