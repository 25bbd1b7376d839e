import pytest

from socbound.components import cdc_hop_delay
from socbound.kernel import Clock, Kernel, cdc_arrival, random_stream
from socbound.model import ClockDomain


def clock(period_ns: int, phase: int = 0, name: str = "clk") -> Clock:
    return Clock(ClockDomain.from_ns(name, period_ns), phase)


def test_event_order():
    kernel = Kernel()
    log = []
    kernel.schedule(10, "a", log.append, "a10")
    kernel.schedule_decision(5, "b", log.append, "decision5")
    kernel.schedule(5, "c", log.append, "c5")
    kernel.schedule(5, "d", log.append, "d5")
    assert kernel.pending == 4
    assert kernel.peek_time() == 5
    assert kernel.run(100, lambda: False) is False
    assert log == ["c5", "d5", "decision5", "a10"]
    assert kernel.now == 10
    assert kernel.processed == 4


def test_horizon_and_done():
    kernel = Kernel()
    log = []
    for time in (1, 2, 3, 4):
        kernel.schedule(time, "x", log.append, time)
    assert kernel.run(2, lambda: False) is False
    assert log == [1, 2]
    assert kernel.run(100, lambda: len(log) >= 3) is True
    assert log == [1, 2, 3]
    with pytest.raises(ValueError):
        kernel.schedule(1, "x", log.append, 0)


def test_clock_edges():
    c = clock(10, phase=3000)
    assert c.edge_at_or_after(0) == 3000
    assert c.edge_at_or_after(3000) == 3000
    assert c.edge_at_or_after(3001) == 13000
    assert c.edge_after(3000) == 13000
    assert c.edge_after(12999) == 13000
    with pytest.raises(ValueError):
        clock(10, phase=10000)


def test_cdc_arrival():
    # equal aligned clocks: 1 TX + 4 RX cycles
    assert cdc_arrival(clock(10, name="tx"), clock(10, name="rx"), 0) == 50000
    tx = clock(10, name="tx")
    for phase in range(0, 30000, 1000):
        rx = clock(30, phase, name="rx")
        hop = cdc_arrival(tx, rx, 0)
        assert 10000 + 3 * 30000 < hop <= 10000 + 4 * 30000


def test_random_stream():
    a = random_stream(1, "traffic.cpu").integers(0, 1 << 32, 8).tolist()
    b = random_stream(1, "traffic.cpu").integers(0, 1 << 32, 8).tolist()
    c = random_stream(1, "traffic.dma").integers(0, 1 << 32, 8).tolist()
    d = random_stream(2, "traffic.cpu").integers(0, 1 << 32, 8).tolist()
    assert a == b
    assert a != c
    assert a != d
    # 64-bit masking
    assert random_stream(-1, "x").integers(0, 100, 4).tolist() == random_stream((1 << 64) - 1, "x").integers(0, 100, 4).tolist()


def test_cdc_slack_random_phases():
    for tx_ns, rx_ns in ((10, 10), (10, 30), (30, 10), (5, 10)):
        tx_domain = ClockDomain.from_ns("tx", tx_ns)
        rx_domain = ClockDomain.from_ns("rx", rx_ns)
        bound = cdc_hop_delay(tx_domain, rx_domain).to_ps()
        slowest = max(tx_domain.period, rx_domain.period).to_ps()
        for seed in range(1000):
            tx = Clock(tx_domain, int(random_stream(seed, "clock.tx").integers(tx_domain.period.to_ps())))
            rx = Clock(rx_domain, int(random_stream(seed, "clock.rx").integers(rx_domain.period.to_ps())))
            start = tx.edge_at_or_after(seed * 1000)
            measured = cdc_arrival(tx, rx, start) - start
            assert measured <= bound
            assert bound - measured <= slowest
