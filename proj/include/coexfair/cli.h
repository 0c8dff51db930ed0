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

#ifndef COEXFAIR_CLI_H
#define COEXFAIR_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace coexfair
{

inline constexpr const char *kToolVersion = "0.1.0";

/**
 * Entry point of the `coexfair` tool.  args excludes the program name.
 * Reports go to `out`; failures are written to `err` as one JSON object.
 * Returns the process exit code (0 only when nothing failed).
 */
int RunCli (const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace coexfair

#endif /* COEXFAIR_CLI_H */
