#pragma once

namespace obd {

/// Command-line surface. Exit codes: 0 success/true, 1 property false (no
/// isomorphism, failed verification, undefined successor), 2 input error,
/// 3 cap exceeded, 4 undecided.
int run_cli(int argc, char** argv);

}  // namespace obd
