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

#include "coexfair/analytic-model.h"

#include <algorithm>
#include <cmath>

namespace coexfair
{

namespace
{

void
RequirePeriod (const DutyCycleConfig &cfg)
{
  if (cfg.Period () <= 0)
    {
      throw CoexError (ErrorCode::ZeroPeriod, "ON/OFF period must be positive");
    }
}

} // namespace

double
SlotGenProbability (const DutyCycleConfig &cfg, const WifiMacParams &mac)
{
  RequirePeriod (cfg);
  return static_cast<double> (mac.slot) / static_cast<double> (cfg.Period ());
}

std::int64_t
DropWindowSlots (const WifiMacParams &mac, const OverlapPolicy &pol)
{
  if (mac.slot <= 0)
    {
      throw CoexError (ErrorCode::ZeroSlot, "slot time must be positive");
    }
  // (1 - p_o) * tb / slot can land a hair above an integer in floating point
  // (e.g. 0.5 * 18 / 9); snap before taking the ceiling.
  const double slots = (1.0 - pol.po) * static_cast<double> (mac.tb) / static_cast<double> (mac.slot);
  const double nearest = std::round (slots);
  if (std::abs (slots - nearest) < 1e-9)
    {
      return static_cast<std::int64_t> (nearest);
    }
  return static_cast<std::int64_t> (std::ceil (slots));
}

double
BeaconDropProbability (const DutyCycleConfig &cfg, const WifiMacParams &mac,
                       const OverlapPolicy &pol)
{
  const auto window = DropWindowSlots (mac, pol);
  if (cfg.tOn == 0)
    {
      // no ON edge ever arrives, so nothing can overlap
      RequirePeriod (cfg);
      return 0.0;
    }
  const double p = SlotGenProbability (cfg, mac) * static_cast<double> (window);
  return std::clamp (p, 0.0, 1.0);
}

double
ExpectedDelayCase1 (const DutyCycleConfig &cfg, const WifiMacParams &mac)
{
  return static_cast<double> (cfg.tOn) / 2.0 + static_cast<double> (mac.difs) + mac.MeanBackoff ()
         + static_cast<double> (mac.tb);
}

double
ExpectedDelayCase2 (const WifiMacParams &mac)
{
  return static_cast<double> (mac.difs + mac.tb);
}

double
ExpectedDelayCase3 (const DutyCycleConfig &cfg, const WifiMacParams &mac)
{
  return static_cast<double> (mac.difs) / 2.0 + static_cast<double> (cfg.tOn)
         + static_cast<double> (mac.difs) + mac.MeanBackoff () + static_cast<double> (mac.tb);
}

double
ExpectedDeliveryTime (const DutyCycleConfig &cfg, const WifiMacParams &mac)
{
  RequirePeriod (cfg);
  if (cfg.tOff <= mac.tb + mac.difs)
    {
      throw CoexError (ErrorCode::WeightNegative,
                       "t_off must exceed t_b + difs (" + std::to_string (mac.tb + mac.difs)
                           + " us) for the delivery-time weights");
    }
  const double pb = DutyCycle (cfg);
  const double off = static_cast<double> (cfg.tOff);
  const double wCase2 = (off - static_cast<double> (mac.tb + mac.difs)) / off;
  const double wCase3 = static_cast<double> (mac.difs) / off;
  return pb * ExpectedDelayCase1 (cfg, mac)
         + (1.0 - pb) * (wCase2 * ExpectedDelayCase2 (mac) + wCase3 * ExpectedDelayCase3 (cfg, mac));
}

AnalyticReport
Evaluate (const DutyCycleConfig &cfg, const WifiMacParams &mac, const OverlapPolicy &pol)
{
  RequireValid (cfg);
  RequireValid (mac);
  RequireValid (pol);

  AnalyticReport r;
  r.duty = cfg;
  r.mac = mac;
  r.pol = pol;
  r.ps = SlotGenProbability (cfg, mac);
  r.dropProbability = BeaconDropProbability (cfg, mac, pol);
  r.receptionProbability = 1.0 - r.dropProbability;
  r.eT1 = ExpectedDelayCase1 (cfg, mac);
  r.eT2 = ExpectedDelayCase2 (mac);
  r.eT3 = ExpectedDelayCase3 (cfg, mac);
  try
    {
      r.eDelivery = ExpectedDeliveryTime (cfg, mac);
    }
  catch (const CoexError &e)
    {
      r.deliveryError = std::string (ErrorCodeName (e.Code ())) + ": " + e.what ();
    }
  return r;
}

std::vector<AnalyticReport>
TheoryTable (std::span<const DutyCycleConfig> setups, const WifiMacParams &mac,
             const OverlapPolicy &pol)
{
  std::vector<AnalyticReport> out;
  out.reserve (setups.size ());
  for (const auto &cfg : setups)
    {
      try
        {
          out.push_back (Evaluate (cfg, mac, pol));
        }
      catch (const CoexError &e)
        {
          AnalyticReport bad;
          bad.duty = cfg;
          bad.mac = mac;
          bad.pol = pol;
          bad.error = std::string (ErrorCodeName (e.Code ())) + ": " + e.what ();
          out.push_back (std::move (bad));
        }
    }
  return out;
}

std::vector<PublishedTheoryRow>
PublishedTheoryRows ()
{
  return {
    {"T_ON=T_OFF=5ms", {5000, 5000, 0}, 0.9559, 1.82},
    {"T_ON=20ms,T_OFF=1ms", {20000, 1000, 0}, 0.9794, 10.15},
    {"T_ON=T_OFF=20ms", {20000, 20000, 0}, 0.9892, 5.59},
  };
}

} // namespace coexfair
