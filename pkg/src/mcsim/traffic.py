"""AR/VR video source: periodic variable-size frames split into packets,
plus per-frame on-time-delivery bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass

FRAME_PENDING = 0
FRAME_ON_TIME = 1
FRAME_LOST = 2


@dataclass
class TrafficConfig:
    mean_bitrate: float  # bits/s
    fps: float
    peak_to_average: float
    mtu_payload: int  # bits
    d_qos: float  # seconds
    flr_qos: float
    sigma_ratio: float = 0.5  # frame-size std dev as a fraction of the mean

    def __post_init__(self):
        if min(self.mean_bitrate, self.fps, self.peak_to_average, self.mtu_payload, self.d_qos) <= 0:
            raise ValueError("traffic parameters must be positive")
        if not 0.0 < self.flr_qos < 1.0:
            raise ValueError("flr_qos must lie in (0,1)")
        if self.sigma_ratio <= 0:
            raise ValueError("sigma_ratio must be positive")

    @property
    def mean_frame_size(self) -> float:
        return self.mean_bitrate / self.fps


class VideoFrame:
    __slots__ = ("frame_id", "gen_time", "size", "packet_count",
                 "delivered_mask", "delivered_packets", "status", "counted")

    def __init__(self, frame_id: int, gen_time: float, size: int, packet_count: int):
        self.frame_id = frame_id
        self.gen_time = gen_time
        self.size = size
        self.packet_count = packet_count
        self.delivered_mask = 0  # bit i set once packet i reached the app layer in time
        self.delivered_packets = 0
        self.status = FRAME_PENDING
        self.counted = True  # False for warm-up frames excluded from loss stats


class AppPacket:
    __slots__ = ("frame_id", "packet_index", "size", "gen_time")

    def __init__(self, frame_id: int, packet_index: int, size: int, gen_time: float):
        self.frame_id = frame_id
        self.packet_index = packet_index
        self.size = size
        self.gen_time = gen_time


def _std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _std_normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _truncated_mean(mu: float, sigma: float, lo: float, hi: float) -> float:
    a = (lo - mu) / sigma
    b = (hi - mu) / sigma
    z = _std_normal_cdf(b) - _std_normal_cdf(a)
    return mu + sigma * (_std_normal_pdf(a) - _std_normal_pdf(b)) / z


class FrameSizeSampler:
    """Truncated normal frame sizes on [0.25, peak_to_average] x mean.

    The parent mean is shifted (solved by bisection) so the truncated
    distribution keeps the configured mean; with the default bounds the
    shift is tiny, with tighter bounds it matters.  peak_to_average == 1
    degenerates to a constant frame size.
    """

    def __init__(self, cfg: TrafficConfig):
        mean = cfg.mean_frame_size
        self.lo = 0.25 * mean
        self.hi = cfg.peak_to_average * mean
        self.sigma = cfg.sigma_ratio * mean
        self.constant = cfg.peak_to_average <= 1.0 + 1e-12
        if self.constant:
            self.mu = mean
            return
        lo_mu, hi_mu = self.lo, self.hi + 6.0 * self.sigma
        target = mean
        for _ in range(200):
            mid = 0.5 * (lo_mu + hi_mu)
            if _truncated_mean(mid, self.sigma, self.lo, self.hi) < target:
                lo_mu = mid
            else:
                hi_mu = mid
        self.mu = 0.5 * (lo_mu + hi_mu)

    def draw(self, rng) -> int:
        if self.constant:
            return max(1, round(self.mu))
        lo, hi, mu, sigma = self.lo, self.hi, self.mu, self.sigma
        gauss = rng.gauss
        while True:
            x = gauss(mu, sigma)
            if lo <= x <= hi:
                return max(1, round(x))


def next_frame(rng, cfg: TrafficConfig, sampler: FrameSizeSampler,
               frame_id: int, now: float) -> VideoFrame:
    size = sampler.draw(rng)
    packet_count = (size + cfg.mtu_payload - 1) // cfg.mtu_payload
    return VideoFrame(frame_id, now, size, packet_count)


def fragment(frame: VideoFrame, cfg: TrafficConfig) -> list[AppPacket]:
    """Split a frame into MTU-sized packets; only the last may be short."""
    mtu = cfg.mtu_payload
    size = frame.size
    n = frame.packet_count
    packets = [AppPacket(frame.frame_id, i, mtu, frame.gen_time) for i in range(n - 1)]
    packets.append(AppPacket(frame.frame_id, n - 1, size - (n - 1) * mtu, frame.gen_time))
    return packets


class DeliveryTracker:
    """Per-UE frame ledger: marks frames delivered-in-time or lost.

    A frame counts as delivered only if every packet reaches the application
    layer by gen_time + d_qos; the per-frame deadline event finalizes losses
    so the loss ratio is exact rather than inferred at run end.
    """

    def __init__(self, sim, cfg: TrafficConfig, warmup: float = 0.0):
        self.sim = sim
        self.cfg = cfg
        self.warmup = warmup
        self.frames: dict[int, VideoFrame] = {}
        self.generated = 0
        self.on_time = 0
        self.lost = 0

    def register(self, frame: VideoFrame) -> None:
        frame.counted = frame.gen_time >= self.warmup
        self.frames[frame.frame_id] = frame
        if frame.counted:
            self.generated += 1
        self.sim.schedule(frame.gen_time + self.cfg.d_qos,
                          lambda f=frame: self._finalize(f))

    def on_app_delivery(self, frame_id: int, packet_index: int, arrival: float) -> None:
        frame = self.frames[frame_id]
        bit = 1 << packet_index
        if frame.delivered_mask & bit:
            raise RuntimeError(
                f"duplicate app delivery of frame {frame_id} packet {packet_index}: "
                "dedup violated upstream")
        frame.delivered_mask |= bit
        if arrival > frame.gen_time + self.cfg.d_qos:
            return  # late packet: recorded for dedup, does not help the frame
        frame.delivered_packets += 1
        if frame.delivered_packets == frame.packet_count and frame.status == FRAME_PENDING:
            frame.status = FRAME_ON_TIME
            if frame.counted:
                self.on_time += 1

    def _finalize(self, frame: VideoFrame) -> None:
        if frame.status == FRAME_PENDING:
            frame.status = FRAME_LOST
            if frame.counted:
                self.lost += 1


class VideoSource:
    """Emits one variable-size frame per 1/fps period as an instantaneous
    burst of packets; the first frame starts at a per-UE random phase."""

    def __init__(self, sim, cfg: TrafficConfig, rng, tracker: DeliveryTracker,
                 sink, stop_time: float):
        self.sim = sim
        self.cfg = cfg
        self.rng = rng
        self.tracker = tracker
        self.sink = sink  # called with (frame, packets)
        self.stop_time = stop_time
        self.sampler = FrameSizeSampler(cfg)
        self._next_id = 0
        self.period = 1.0 / cfg.fps
        phase = rng.uniform(0.0, self.period)
        if phase < stop_time:
            sim.schedule(phase, self._emit)

    def _emit(self) -> None:
        sim = self.sim
        frame = next_frame(self.rng, self.cfg, self.sampler, self._next_id, sim.now)
        self._next_id += 1
        self.tracker.register(frame)
        self.sink(frame, fragment(frame, self.cfg))
        t_next = sim.now + self.period
        if t_next < self.stop_time:
            sim.schedule(t_next, self._emit)
