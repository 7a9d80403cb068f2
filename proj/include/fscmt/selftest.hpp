#pragma once

#include <string>
#include <vector>

namespace fscmt {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick oracle checks of a build: coefficient pairing, Nyquist residual, ideal
/// round trip, MMSE weights against an independent solve, flat-channel and
/// synthetic per-bin recovery. Runs in well under a second.
std::vector<SelfCheck> run_selftest();

}  // namespace fscmt
