#pragma once

// Umbrella header. The oracle (Eigen-backed dense reference) is deliberately
// not included here; pull in gfdm/oracle.hpp where needed.

#include "channel.hpp"
#include "complexity.hpp"
#include "fft.hpp"
#include "link.hpp"
#include "prototype.hpp"
#include "receiver.hpp"
#include "rng.hpp"
#include "transmitter.hpp"
#include "types.hpp"
