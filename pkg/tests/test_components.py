from fractions import Fraction

import pytest

from socbound.components import (
    HramDataMode,
    MemoryParams,
    cdc_hop_delay,
    cdc_transaction_delay,
    hmc_ctrl,
    hram_ctrl,
    hram_word_time,
    io_timing,
    llc_hit_ctrl,
    llc_hit_data,
    llc_miss_ctrl,
    ms_miss_bound,
    specialize_peripheral,
    spm_timing,
    xbar_delay,
)
from socbound.duration import Duration
from socbound.model import AnalysisError, ClockDomain, MemoryCase, TransactionKind
from tests import topology_1ns

READ = TransactionKind.READ
WRITE = TransactionKind.WRITE

# tx (ns)  rx (ns)  hop (ns)
CDC_HOP_VECTORS = """
   10       10       50
   10       30       130
   30       10       70
"""

# latency  cycles
HRAM_CTRL_VECTORS = """
   12       15
   7        10
   16       19
"""


def ns(value: int) -> Duration:
    return Duration.from_ns(value)


def clock(period_ns: int, name: str = "clk") -> ClockDomain:
    return ClockDomain.from_ns(name, period_ns)


def params(period_ns: int = 1) -> MemoryParams:
    return MemoryParams(
        llc=clock(period_ns),
        hmc=clock(period_ns),
        hram=clock(period_ns),
        line_width=8,
        dw_axi=64,
        dw_hyper=32,
        hram_access_latency_cycles=12,
        fifo_depth=8,
    )


def vectors(text: str):
    return [[int(v) for v in x.split()] for x in text.split("\n") if x.strip()]


def test_cdc_hop():
    for tx, rx, hop in vectors(CDC_HOP_VECTORS):
        assert cdc_hop_delay(clock(tx, "tx"), clock(rx, "rx")) == ns(hop)


def test_cdc_transaction():
    assert cdc_transaction_delay(clock(10), clock(10), READ).total == ns(100)
    assert cdc_transaction_delay(clock(10, "a"), clock(30, "b"), READ).total == ns(200)
    assert cdc_transaction_delay(clock(10, "a"), clock(30, "b"), WRITE).total == ns(200)
    breakdown = cdc_transaction_delay(clock(10, "a"), clock(30, "b"), READ)
    assert [label for label, _ in breakdown.terms] == ["request", "response"]
    assert sum((x for _, x in breakdown.terms), Duration()) == breakdown.total


def test_spm():
    timing = spm_timing(4, clock(2))
    assert timing.t_ctrl_read == ns(12)
    assert timing.t_ctrl_write == ns(10)
    assert timing.t_data == ns(2)
    assert timing.chi(READ) == timing.chi(WRITE) == 4
    assert (timing.rho, timing.theta) == (1, 1)
    timing = spm_timing(4, clock(1))
    assert timing.service(READ, 16) == ns(22)
    assert timing.service(WRITE, 1) == ns(6)
    with pytest.raises(AnalysisError):
        spm_timing(0, clock(1))


def test_io():
    timing = io_timing(2, clock(1))
    assert timing.service(WRITE, 1) == ns(4)
    assert timing.service(READ, 1) == ns(5)
    assert (timing.rho, timing.theta) == (0, 0)
    assert io_timing(2, clock(5)).service(READ, 1) == ns(25)


def test_llc():
    assert llc_hit_ctrl(clock(1)) == ns(6)
    assert llc_hit_data(clock(1)) == ns(1)
    assert llc_hit_ctrl(clock(1)) + llc_hit_data(clock(1)) * 16 == ns(22)
    assert llc_miss_ctrl(clock(1)) == ns(8)
    assert llc_miss_ctrl(clock(2)) == ns(16)
    for period in (1, 3, 7):
        assert llc_miss_ctrl(clock(period)) == llc_hit_ctrl(clock(period)) + ns(2 * period)


def test_hmc():
    assert hmc_ctrl(READ, clock(3), clock(3)).total == ns(17 * 3)
    assert hmc_ctrl(WRITE, clock(3), clock(3)).total == ns(12 * 3)
    assert hmc_ctrl(READ, clock(1, "hmc"), clock(5, "hram")).total == ns(45)
    for hmc in (1, 2, 5):
        for hram in (1, 3, 6):
            assert hmc_ctrl(WRITE, clock(hmc, "hmc"), clock(hram, "hram")).total <= hmc_ctrl(
                READ, clock(hmc, "hmc"), clock(hram, "hram")
            ).total


def test_hram():
    for latency, cycles in vectors(HRAM_CTRL_VECTORS):
        assert hram_ctrl(clock(1), latency) == ns(cycles)
    with pytest.raises(AnalysisError):
        hram_ctrl(clock(1), 6)
    assert hram_word_time(64, 32, clock(1)) == ns(2)
    assert hram_word_time(64, 32, clock(1), HramDataMode.LITERAL) == ns(64)
    assert hram_word_time(32, 32, clock(1)) == ns(1)


def test_ms_miss():
    t_ctrl, t_data = ms_miss_bound(8, False, params())
    assert t_ctrl == ns(40)
    assert t_data == 3000
    assert t_ctrl + Duration.from_fraction(t_data * 8) == ns(64)
    t_ctrl, t_data = ms_miss_bound(8, True, params())
    assert t_ctrl == ns(67)
    assert t_data == 5000
    # one full line per word
    t_ctrl, t_data = ms_miss_bound(1, False, params())
    assert t_ctrl == ns(40)
    assert t_data == 1000 + 8 * 2000
    t_ctrl, t_data = ms_miss_bound(3, False, params())
    assert t_data == 1000 + Fraction(8 * 2000, 3)
    t_ctrl, _ = ms_miss_bound(16, False, params())
    assert t_ctrl == ns(8 + 2 * 32)
    with pytest.raises(AnalysisError):
        ms_miss_bound(0, False, params())


def test_xbar():
    assert xbar_delay(READ, 1, clock(1)).total == ns(2)
    assert xbar_delay(READ, 2, clock(1)).total == ns(3)
    assert xbar_delay(WRITE, 5, clock(1)).total == ns(6)
    with pytest.raises(AnalysisError):
        xbar_delay(READ, 0, clock(1))


def test_specialize():
    t = topology_1ns()
    timing = specialize_peripheral(t, t.peripheral("spm"), 16)
    assert (timing.chi_read, timing.rho, timing.theta) == (4, 1, 1)
    assert (timing.t_ctrl_read, timing.t_ctrl_write, timing.t_data) == (ns(6), ns(5), ns(1))
    timing = specialize_peripheral(t, t.peripheral("main_memory"), 8, MemoryCase.MISS_REFILL)
    assert (timing.rho, timing.theta) == (0, 0)
    assert timing.t_ctrl_read == ns(40)
    assert timing.t_data == ns(3)
    timing = specialize_peripheral(t, t.peripheral("main_memory"), 8, MemoryCase.HIT)
    assert (timing.rho, timing.theta) == (1, 1)
    assert timing.service(READ, 16) == ns(22)
    timing = specialize_peripheral(t, t.peripheral("io"), 1)
    assert (timing.chi_read, timing.rho, timing.theta) == (2, 0, 0)
    assert (timing.t_ctrl_read, timing.t_ctrl_write) == (ns(4), ns(3))
    with pytest.raises(AnalysisError):
        specialize_peripheral(t, t.peripheral("main_memory"), 8)
    with pytest.raises(AnalysisError):
        specialize_peripheral(t, t.peripheral("spm"), 8, MemoryCase.HIT)
