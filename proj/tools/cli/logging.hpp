#pragma once

namespace dynamask::cli {

// Sets the log level from DYNAMASK_LOG (trace, debug, info, warn, error,
// off; default info). Logs go to stderr.
void init_logging();

}  // namespace dynamask::cli
