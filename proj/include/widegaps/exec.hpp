#ifndef WIDEGAPS_EXEC_HPP
#define WIDEGAPS_EXEC_HPP

namespace widegaps {

/// Selects the OpenMP kernel or its serial reference. Both must produce identical results.
enum class Backend { serial, parallel };

}  // namespace widegaps

#endif
