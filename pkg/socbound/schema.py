#!/usr/bin/env python3
#
# MIT License
#
# Copyright (c) 2024 The socbound authors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#

# Topology document keys (required, optional)

TOPOLOGY_KEYS = (["clocks", "controllers", "crossbar", "peripherals"], ["bridges", "memory_map"])
CLOCK_KEYS = (["name", "period_ps"], [])
CONTROLLER_KEYS = (["id", "clock", "phi_read", "phi_write"], ["bridge_path", "max_beta"])
CDC_BRIDGE_KEYS = (["id", "kind", "tx_clock", "rx_clock"], ["depth"])
FIXED_BRIDGE_KEYS = (["id", "kind", "d_read_ps", "d_write_ps"], [])
CROSSBAR_KEYS = (["clock"], ["d_tab", "subordinate_port_count", "manager_port_count", "pipeline_stages"])
MEMORY_MAP_KEYS = (["peripheral", "base", "size"], [])
ADDRESS_KEYS = (["base", "size"], [])
SPM_KEYS = (["id", "kind", "clock"], ["fifo_depth", "bank_count", "address"])
IO_KEYS = (["id", "kind", "clock"], ["fifo_depth", "address"])
MAIN_MEMORY_KEYS = (
    ["id", "kind", "clock", "hram_clock"],
    [
        "llc_clock",
        "hmc_clock",
        "line_width",
        "llc_fifo_depth",
        "dw_axi",
        "dw_hyper",
        "hram_access_latency_cycles",
        "set_count",
        "way_count",
        "address",
    ],
)
GENERIC_KEYS = (["id", "kind", "clock", "timing"], ["address"])
GENERIC_TIMING_KEYS = (
    ["chi_read", "chi_write", "rho", "theta", "t_ctrl_read_ps", "t_ctrl_write_ps", "t_data_ps"],
    [],
)

# Scenario document keys

SCENARIO_DOCUMENT_KEYS = (["scenario"], [])
SCENARIO_KEYS = (["observed", "controllers"], ["seed"])
WORKLOAD_KEYS = (["mode"], ["count", "beta", "kind", "target", "pattern", "phi"])

# Defaults applied to omitted optional fields

DEFAULT_SPM_FIFO_DEPTH = 4
DEFAULT_IO_FIFO_DEPTH = 2
DEFAULT_LLC_FIFO_DEPTH = 8
DEFAULT_CDC_DEPTH = 4
DEFAULT_D_TAB = 16
DEFAULT_LINE_WIDTH = 8  # words
DEFAULT_DW_AXI = 64  # bits
DEFAULT_DW_HYPER = 32  # bits
DEFAULT_HRAM_LATENCY = 12  # cycles
DEFAULT_SET_COUNT = 256
DEFAULT_WAY_COUNT = 8
DEFAULT_BANK_COUNT = 16
WORD_BYTES = 8  # AXI data word of the scratchpad and IO ports
DEFAULT_MAX_BETA = 256  # AXI4 burst limit

HRAM_LATENCY_RANGE = (7, 16)
MIN_CDC_DEPTH = 2
