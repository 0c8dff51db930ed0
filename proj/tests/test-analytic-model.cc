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

#include "oracles.h"

#include "coexfair/analytic-model.h"

#include <doctest.h>

#include <random>

using namespace coexfair;

namespace
{
const WifiMacParams kMac{};
const OverlapPolicy kStrictOverlap{0.0};
} // namespace

TEST_CASE ("slot generation probability")
{
  CHECK (SlotGenProbability ({20000, 1000, 0}, kMac) == doctest::Approx (9.0 / 21000.0).epsilon (1e-14));
  CHECK (SlotGenProbability ({20000, 1000, 0}, kMac) == doctest::Approx (4.2857e-4).epsilon (1e-4));
  CHECK (SlotGenProbability ({5000, 5000, 0}, kMac) == doctest::Approx (9.0e-4).epsilon (1e-14));
  WifiMacParams zeroSlot = kMac;
  zeroSlot.slot = 0;
  CHECK (SlotGenProbability ({5000, 5000, 0}, zeroSlot) == 0.0);
}

TEST_CASE ("drop window size")
{
  CHECK (DropWindowSlots (kMac, {0.0}) == 48);
  CHECK (DropWindowSlots (kMac, {1.0}) == 0);
  WifiMacParams even = kMac;
  even.tb = 18;
  CHECK (DropWindowSlots (even, {0.5}) == 1);
  WifiMacParams zero = kMac;
  zero.slot = 0;
  CHECK_THROWS_AS (DropWindowSlots (zero, {0.0}), CoexError);
}

TEST_CASE ("beacon drop probability examples")
{
  const double maxDuty = BeaconDropProbability ({20000, 1000, 0}, kMac, kStrictOverlap);
  CHECK (maxDuty == doctest::Approx (48.0 * 9.0 / 21000.0).epsilon (1e-14));
  CHECK (maxDuty == doctest::Approx (0.020571).epsilon (1e-4));
  CHECK (std::abs ((1.0 - maxDuty) - 0.9794) < 1e-4);

  CHECK (std::abs ((1.0 - BeaconDropProbability ({20000, 20000, 0}, kMac, kStrictOverlap)) - 0.9892)
         < 1e-4);
  CHECK (BeaconDropProbability ({5000, 5000, 0}, kMac, {1.0}) == 0.0);

  const double half = BeaconDropProbability ({5000, 5000, 0}, kMac, kStrictOverlap);
  CHECK (half == doctest::Approx (0.0432).epsilon (1e-12));
  CHECK (1.0 - half == doctest::Approx (0.9568).epsilon (1e-12));
  // brute force over every generation slot of one period
  const double oracle = oracle::SlotEnumerationDrop ({5000, 5000}, {}, 0.0);
  CHECK (oracle == doctest::Approx (0.0432).epsilon (1e-12));
}

TEST_CASE ("drop probability clamps and handles an absent interferer")
{
  CHECK (BeaconDropProbability ({0, 1000, 0}, kMac, kStrictOverlap) == 0.0);
  // 48 slots of 9 us against a 100 us period would exceed one
  CHECK (BeaconDropProbability ({50, 50, 0}, kMac, kStrictOverlap) == 1.0);
  CHECK_THROWS_AS (BeaconDropProbability ({0, 0, 0}, kMac, kStrictOverlap), CoexError);
}

TEST_CASE ("per-case expected delays")
{
  CHECK (ExpectedDelayCase1 ({20000, 1000, 0}, kMac) == 10528.5);
  CHECK (ExpectedDelayCase1 ({0, 1000, 0}, kMac) == 528.5);
  WifiMacParams w1 = kMac;
  w1.cwMin = 1;
  CHECK (ExpectedDelayCase1 ({20000, 1000, 0}, w1) == 10000.0 + 34.0 + 427.0);

  CHECK (ExpectedDelayCase2 (kMac) == 461.0);
  WifiMacParams zero = kMac;
  zero.difs = 0;
  zero.tb = 0;
  CHECK (ExpectedDelayCase2 (zero) == 0.0);
  WifiMacParams longBeacon = kMac;
  longBeacon.tb = 1000;
  CHECK (ExpectedDelayCase2 (longBeacon) == 1034.0);

  CHECK (ExpectedDelayCase3 ({20000, 1000, 0}, kMac) == 20545.5);
  CHECK (ExpectedDelayCase3 ({5000, 1000, 0}, kMac) == 5545.5);
  WifiMacParams bare = zero;
  bare.cwMin = 1;
  CHECK (ExpectedDelayCase3 ({0, 1000, 0}, bare) == 0.0);
}

TEST_CASE ("expected delivery time")
{
  // hand evaluation: 20/21*10528.5 + 1/21*(0.539*461 + 0.034*20545.5)
  const double maxDuty = ExpectedDeliveryTime ({20000, 1000, 0}, kMac);
  const double hand = 20.0 / 21.0 * 10528.5 + 1.0 / 21.0 * (0.539 * 461.0 + 0.034 * 20545.5);
  CHECK (maxDuty == doctest::Approx (hand).epsilon (1e-12));
  CHECK (maxDuty == doctest::Approx (10072.2).epsilon (1e-5));

  const double half = ExpectedDeliveryTime ({5000, 5000, 0}, kMac);
  CHECK (half == doctest::Approx (0.5 * 3028.5 + 0.5 * (0.9078 * 461.0 + 0.0068 * 5545.5)).epsilon (1e-12));
  CHECK (std::abs (half - 1742.0) < 1.0);

  // P_b = 0 keeps only the OFF mixture
  const double none = ExpectedDeliveryTime ({0, 1000, 0}, kMac);
  CHECK (none == doctest::Approx (0.539 * 461.0 + 0.034 * 545.5).epsilon (1e-12));

  try
    {
      ExpectedDeliveryTime ({20000, 461, 0}, kMac);
      FAIL ("expected WEIGHT_NEGATIVE");
    }
  catch (const CoexError &e)
    {
      CHECK (e.Code () == ErrorCode::WeightNegative);
    }
  CHECK_NOTHROW (ExpectedDeliveryTime ({20000, 462, 0}, kMac));
}

TEST_CASE ("report and theory table")
{
  const auto r = Evaluate ({20000, 400, 0}, kMac, kStrictOverlap);
  CHECK_FALSE (r.eDelivery.has_value ());
  REQUIRE (r.deliveryError.has_value ());
  CHECK (r.deliveryError->starts_with ("WEIGHT_NEGATIVE"));
  CHECK (r.dropProbability > 0.0);

  const std::vector<DutyCycleConfig> setups{{5000, 5000, 0}, {20000, 1000, 0}, {20000, 20000, 0}};
  const auto table = TheoryTable (setups, kMac, kStrictOverlap);
  REQUIRE (table.size () == 3);
  CHECK (table[0].receptionProbability == doctest::Approx (0.9568).epsilon (1e-12));
  CHECK (std::abs (table[1].receptionProbability - 0.9794) < 1e-4);
  CHECK (std::abs (table[2].receptionProbability - 0.9892) < 1e-4);
  CHECK (std::abs (*table[0].eDelivery / 1000.0 - 1.74) < 0.01);
  CHECK (std::abs (*table[1].eDelivery / 1000.0 - 10.07) < 0.01);
  CHECK (std::abs (*table[2].eDelivery / 1000.0 - 5.51) < 0.01);

  CHECK (TheoryTable ({}, kMac, kStrictOverlap).empty ());

  const std::vector<DutyCycleConfig> dup{{5000, 5000, 0}, {5000, 5000, 0}};
  const auto twice = TheoryTable (dup, kMac, kStrictOverlap);
  CHECK (twice[0] == twice[1]);

  // a bad setup is reported, not fatal
  const std::vector<DutyCycleConfig> mixed{{5000, 0, 0}, {5000, 5000, 0}};
  const auto partial = TheoryTable (mixed, kMac, kStrictOverlap);
  REQUIRE (partial.size () == 2);
  CHECK (partial[0].error.has_value ());
  CHECK_FALSE (partial[1].error.has_value ());
}

TEST_CASE ("published reference rows")
{
  const auto rows = PublishedTheoryRows ();
  REQUIRE (rows.size () == 3);
  CHECK (rows[0].reception == 0.9559);
  CHECK (rows[1].reception == 0.9794);
  CHECK (rows[2].reception == 0.9892);
  CHECK (rows[0].deliveryMs == 1.82);
  CHECK (rows[1].deliveryMs == 10.15);
  CHECK (rows[2].deliveryMs == 5.59);
}

TEST_CASE ("drop depends only on the period (property)")
{
  std::mt19937_64 gen (3);
  for (int trial = 0; trial < 300; ++trial)
    {
      const TimeUs period = 500 + static_cast<TimeUs> (gen () % 60000);
      const TimeUs onA = 1 + static_cast<TimeUs> (gen () % (period - 1));
      const TimeUs onB = 1 + static_cast<TimeUs> (gen () % (period - 1));
      const OverlapPolicy pol{static_cast<double> (gen () % 101) / 100.0};
      CHECK (BeaconDropProbability ({onA, period - onA, 0}, kMac, pol)
             == BeaconDropProbability ({onB, period - onB, 0}, kMac, pol));
    }
}

TEST_CASE ("drop is nonincreasing in period and p_o (property)")
{
  for (double po = 0.0; po <= 1.0; po += 0.05)
    {
      double prev = 2.0;
      for (TimeUs period = 200; period <= 80000; period += 137)
        {
          const double p = BeaconDropProbability ({period / 2, period - period / 2, 0}, kMac, {po});
          CHECK (p <= prev);
          prev = p;
        }
    }
  for (TimeUs period : {1000, 10000, 21000, 40000})
    {
      double prev = 2.0;
      for (int i = 0; i <= 100; ++i)
        {
          const double p = BeaconDropProbability ({period / 2, period / 2, 0}, kMac, {i / 100.0});
          CHECK (p <= prev);
          prev = p;
        }
    }
}

TEST_CASE ("delivery time increases with t_on (property)")
{
  for (TimeUs off : {462, 1000, 5000, 20000})
    {
      double prev = -1.0;
      for (TimeUs on = 0; on <= 40000; on += 250)
        {
          const double e = ExpectedDeliveryTime ({on, off, 0}, kMac);
          CHECK (e > prev);
          prev = e;
        }
    }
}

TEST_CASE ("report invariants (property)")
{
  std::mt19937_64 gen (5);
  for (int trial = 0; trial < 500; ++trial)
    {
      const DutyCycleConfig cfg{static_cast<TimeUs> (gen () % 40000),
                                1 + static_cast<TimeUs> (gen () % 40000), 0};
      const OverlapPolicy pol{static_cast<double> (gen () % 1001) / 1000.0};
      const auto r = Evaluate (cfg, kMac, pol);
      CHECK (r.dropProbability >= 0.0);
      CHECK (r.dropProbability <= 1.0);
      CHECK (r.receptionProbability == 1.0 - r.dropProbability);
      CHECK (r.receptionProbability + r.dropProbability == 1.0);
      if (cfg.tOn > 0)
        {
          CHECK (r.eT2 <= r.eT1);
          CHECK (r.eT2 <= r.eT3);
        }
    }
}

TEST_CASE ("slot-enumeration oracle agrees within one slot mass")
{
  std::mt19937_64 gen (17);
  const TimeUs minOff = kMac.tb + kMac.difs + (kMac.cwMin - 1) * kMac.slot;
  for (int trial = 0; trial < 30; ++trial)
    {
      // an ON period shorter than the beacon can never hide a whole frame
      const TimeUs on = kMac.tb + static_cast<TimeUs> (gen () % 20000);
      const TimeUs off = minOff + 1 + static_cast<TimeUs> (gen () % 20000);
      const double po = static_cast<double> (gen () % 90) / 100.0;
      const DutyCycleConfig cfg{on, off, 0};
      const double model = BeaconDropProbability (cfg, kMac, {po});
      const double brute = oracle::SlotEnumerationDrop ({on, off}, {}, po);
      CHECK (std::abs (model - brute) <= SlotGenProbability (cfg, kMac) + 1e-15);
    }
}
