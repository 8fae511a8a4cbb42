#pragma once

#include "config.hpp"

namespace rankfield::cli {

std::string command_description(const std::string& command);

/// Runs one subcommand and returns the fields of its summary line.
Json run_command(const Settings& settings);

}  // namespace rankfield::cli
