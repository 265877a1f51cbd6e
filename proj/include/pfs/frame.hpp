// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace pfs {

/// OFDMA frame constants shared by the analytic models and the simulator.
struct FrameConfig {
    int num_rb = 1;       ///< N, schedulable resource blocks per slot
    double tti_s = 1e-3;  ///< slot duration T_TTI [s]
    int window = 1000;    ///< PFS averaging window W [slots]
};

}  // namespace pfs
