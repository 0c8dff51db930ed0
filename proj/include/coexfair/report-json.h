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

#ifndef COEXFAIR_REPORT_JSON_H
#define COEXFAIR_REPORT_JSON_H

#include "coexfair/analytic-model.h"
#include "coexfair/coex-sim.h"
#include "coexfair/config-file.h"
#include "coexfair/trace-analytics.h"

#include <json.hpp>

namespace coexfair
{

// Flat objects; durations in microseconds, probabilities unitless.

nlohmann::json ToJson (const ScenarioConfig &cfg);
ScenarioConfig ScenarioFromJson (const nlohmann::json &j);

nlohmann::json ToJson (const SimConfig &cfg);
SimConfig SimConfigFromJson (const nlohmann::json &j);

nlohmann::json ToJson (const AnalyticReport &r);
nlohmann::json ToJson (const CaseCounts &c);
/// Aggregates only; records go to the per-beacon CSV.
nlohmann::json SummaryJson (const SimResult &r);
nlohmann::json ToJson (const ComparisonRecord &c);
nlohmann::json ToJson (const PairComparison &p);
nlohmann::json ToJson (const MatchReport &m);

} // namespace coexfair

#endif /* COEXFAIR_REPORT_JSON_H */
