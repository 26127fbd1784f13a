"""Per-gNB link abstraction: distance-based SINR, Shannon-capped rate,
mmWave blockage process, slotted MAC with HARQ, and resource accounting."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

DELIVERED = "delivered"
RETRY = "retry"
FAILED = "failed"

THERMAL_NOISE_DBM_HZ = -174.0


@dataclass
class LinkParams:
    name: str  # "fr1" | "fr2"
    carrier_freq: float  # Hz
    bandwidth: float  # Hz
    tx_power_dbm: float
    antenna_gain_db: float
    noise_figure_db: float
    gnb_height: float  # m
    ue_height: float  # m
    slot_duration: float  # s
    per_attempt_success: float
    max_harq_attempts: int
    harq_rtt: float  # s
    max_spectral_eff: float  # bits/s/Hz ceiling
    min_working_sinr_db: float  # decode floor: below it the link carries nothing
    shadow_sigma_db: float
    pathloss_model: str  # "uma_los" | "uma_nlos"

    def __post_init__(self):
        if self.bandwidth <= 0 or self.slot_duration <= 0:
            raise ValueError("bandwidth and slot_duration must be positive")
        if not 0.0 < self.per_attempt_success <= 1.0:
            raise ValueError("per_attempt_success must lie in (0,1]")


def pathloss_db(model: str, freq_hz: float, distance_m: float,
                gnb_height: float, ue_height: float) -> float:
    """Log-distance path loss shaped after the 3GPP urban-macro curves.

    "uma_los" uses the below-breakpoint LOS slope (22 dB/decade); "uma_nlos"
    the steeper NLOS slope (39.08 dB/decade).  Inputs are clamped to 1 m.
    """
    d2 = max(distance_m, 1.0)
    d3 = math.hypot(d2, gnb_height - ue_height)
    f_ghz = freq_hz / 1e9
    if model == "uma_los":
        return 28.0 + 22.0 * math.log10(d3) + 20.0 * math.log10(f_ghz)
    if model == "uma_nlos":
        return (13.54 + 39.08 * math.log10(d3) + 20.0 * math.log10(f_ghz)
                - 0.6 * (ue_height - 1.5))
    raise ValueError(f"unknown pathloss model {model!r}")


def noise_floor_dbm(bandwidth_hz: float) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_hz)


def sinr_at(link: LinkParams, distance_m: float, blocked: bool,
            shadow_db: float, blockage_loss_db: float = 0.0) -> float:
    """Link budget in dB; -inf when blocked with an infinite blockage loss."""
    if blocked and math.isinf(blockage_loss_db):
        return float("-inf")
    pl = pathloss_db(link.pathloss_model, link.carrier_freq, distance_m,
                     link.gnb_height, link.ue_height)
    sinr = (link.tx_power_dbm + link.antenna_gain_db - pl - shadow_db
            - noise_floor_dbm(link.bandwidth) - link.noise_figure_db)
    if blocked:
        sinr -= blockage_loss_db
    return sinr


def rate_of(link: LinkParams, sinr_db: float) -> float:
    """Shannon rate B*log2(1+SINR), clamped at the spectral-efficiency cap."""
    if sinr_db == float("-inf"):
        return 0.0
    eff = math.log2(1.0 + 10.0 ** (sinr_db / 10.0))
    if eff > link.max_spectral_eff:
        eff = link.max_spectral_eff
    return link.bandwidth * eff


class BlockageProcess:
    """Two-state dwell process for the mmWave link; dwell times exponential.

    mean_blocked <= 0 disables blockage entirely; mean_unblocked <= 0 pins the
    link blocked for the whole run (degenerate full-outage case).
    """

    __slots__ = ("sim", "rng", "mean_unblocked", "mean_blocked", "loss_db",
                 "blocked", "_last_change", "blocked_time")

    def __init__(self, sim, rng, mean_unblocked: float, mean_blocked: float,
                 loss_db: float):
        self.sim = sim
        self.rng = rng
        self.mean_unblocked = mean_unblocked
        self.mean_blocked = mean_blocked
        self.loss_db = loss_db
        self.blocked = mean_unblocked <= 0.0
        self._last_change = sim.now
        self.blocked_time = 0.0
        if mean_blocked > 0.0 and mean_unblocked > 0.0:
            sim.schedule_in(rng.expovariate(1.0 / mean_unblocked), self._toggle)

    def _toggle(self):
        now = self.sim.now
        if self.blocked:
            self.blocked_time += now - self._last_change
            dwell = self.rng.expovariate(1.0 / self.mean_unblocked)
        else:
            dwell = self.rng.expovariate(1.0 / self.mean_blocked)
        self.blocked = not self.blocked
        self._last_change = now
        self.sim.schedule_in(dwell, self._toggle)

    def blocked_fraction(self, t_end: float) -> float:
        total = self.blocked_time
        if self.blocked:
            total += t_end - self._last_change
        return total / t_end if t_end > 0 else 0.0


class ChannelState:
    """Current channel of one (gNB, UE) pair: fixed distance, shadowing value
    redrawn each measurement period, optional blockage process."""

    __slots__ = ("link", "distance", "shadow_db", "blockage")

    def __init__(self, link: LinkParams, distance: float, blockage=None):
        self.link = link
        self.distance = distance
        self.shadow_db = 0.0
        self.blockage = blockage

    def redraw_shadow(self, rng):
        sigma = self.link.shadow_sigma_db
        self.shadow_db = rng.gauss(0.0, sigma) if sigma > 0.0 else 0.0

    def current_sinr(self) -> float:
        blk = self.blockage
        if blk is not None and blk.blocked:
            return sinr_at(self.link, self.distance, True, self.shadow_db, blk.loss_db)
        return sinr_at(self.link, self.distance, False, self.shadow_db)

    def current_rate(self) -> float:
        sinr = self.current_sinr()
        if sinr < self.link.min_working_sinr_db:
            return 0.0  # below the decode floor nothing gets through
        return rate_of(self.link, sinr)


def measure(chan: ChannelState) -> float:
    """Rate estimate from the current SINR, including the blockage state."""
    return chan.current_rate()


class MacMap:
    """MAC PDU id -> PDCP sequence numbers it completes.

    A sequence number is recorded under the MAC PDU carrying its final
    segment, so each live sequence number has exactly one entry.
    """

    __slots__ = ("mapping",)

    def __init__(self):
        self.mapping: dict[int, list[int]] = {}

    def record(self, mac_id: int, seqs: list[int]) -> None:
        if mac_id in self.mapping:
            raise RuntimeError(f"MAC PDU id {mac_id} already mapped")
        self.mapping[mac_id] = seqs

    def on_ack(self, mac_id: int) -> list[int]:
        if mac_id not in self.mapping:
            raise KeyError(f"unknown MAC PDU id {mac_id}")
        return self.mapping.pop(mac_id)

    def __len__(self):
        return len(self.mapping)


def on_mac_ack(mac_pdu_id: int, mac_map: MacMap) -> list[int]:
    return mac_map.on_ack(mac_pdu_id)


@dataclass
class ResourceLedger:
    slots_used: int = 0
    slots_elapsed: int = 0


def resource_usage(ledger: ResourceLedger) -> float:
    if ledger.slots_elapsed <= 0:
        raise ValueError("no slots elapsed")
    return ledger.slots_used / ledger.slots_elapsed


class _PduTx:
    """Per-link transmission state of one PDCP PDU (segments in flight)."""

    __slots__ = ("pdu", "remaining", "outstanding", "failed", "drained")

    def __init__(self, pdu):
        self.pdu = pdu
        self.remaining = pdu.size
        self.outstanding = 0
        self.failed = False
        self.drained = False


class MacPdu:
    __slots__ = ("mac_id", "ue_id", "entries", "attempts", "ready_time")

    def __init__(self, mac_id: int, ue_id: int, entries):
        self.mac_id = mac_id
        self.ue_id = ue_id
        self.entries = entries  # list of (_PduTx, bits, is_final_segment)
        self.attempts = 0
        self.ready_time = 0.0


def harq_attempt(success_prob: float, mac: MacPdu, rng, max_attempts: int) -> str:
    mac.attempts += 1
    if rng.random() < success_prob:
        return DELIVERED
    return RETRY if mac.attempts < max_attempts else FAILED


class GnbMac:
    """Slotted downlink MAC of one gNB serving one or more UEs.

    Each slot splits capacity evenly among backlogged UEs (proportional
    round-robin): a UE with k-1 backlogged peers drains up to
    rate * slot / k bits into one MAC PDU.  PDUs may be segmented across
    slots; a PDU is delivered (and reported) only once all its segments
    succeeded.  HARQ retransmissions replace the UE's share of a later slot.
    """

    def __init__(self, sim, link: LinkParams, usage_cutoff: float,
                 on_delivered, on_pdu_failed=None):
        self.sim = sim
        self.link = link
        self.on_delivered = on_delivered  # fn(ue_id, [PdcpPdu]) at delivery time
        self.on_pdu_failed = on_pdu_failed  # fn(ue_id, [PdcpPdu]) or None
        self.usage_cutoff = usage_cutoff
        self.ledger = ResourceLedger()
        self.mac_map = MacMap()
        self.channels: dict[int, ChannelState] = {}
        self._queues: dict[int, deque] = {}
        self._retx: dict[int, deque] = {}
        self._harq_rng = {}
        self._next_mac_id = 0
        self._slot_scheduled = False
        self.pdus_in = 0
        self.pdus_delivered = 0
        self.pdus_failed = 0

    def add_ue(self, ue_id: int, chan: ChannelState, harq_rng) -> None:
        self.channels[ue_id] = chan
        self._queues[ue_id] = deque()
        self._retx[ue_id] = deque()
        self._harq_rng[ue_id] = harq_rng

    def enqueue(self, ue_id: int, pdus) -> None:
        q = self._queues[ue_id]
        for pdu in pdus:
            q.append(_PduTx(pdu))
        self.pdus_in += len(pdus)
        self._wake()

    def queue_bits(self, ue_id: int) -> int:
        return sum(tx.remaining for tx in self._queues[ue_id])

    def _wake(self) -> None:
        if self._slot_scheduled:
            return
        slot = self.link.slot_duration
        now = self.sim.now
        t0 = math.ceil(now / slot - 1e-9) * slot
        if t0 < now:
            t0 += slot
        self._slot_scheduled = True
        self.sim.schedule(t0, self._on_slot)

    def _on_slot(self) -> None:
        now = self.sim.now
        slot = self.link.slot_duration
        serving = []
        rates = {}
        for ue_id, q in self._queues.items():
            retx = self._retx[ue_id]
            has_retx = bool(retx) and retx[0].ready_time <= now + 1e-12
            rate = self.channels[ue_id].current_rate()
            rates[ue_id] = rate
            if has_retx or (q and rate > 0.0):
                serving.append(ue_id)
        transmitted = False
        if serving:
            k = len(serving)
            for ue_id in serving:
                retx = self._retx[ue_id]
                if retx and retx[0].ready_time <= now + 1e-12:
                    mac = retx.popleft()
                    self._attempt(mac, rates[ue_id])
                    transmitted = True
                    continue
                budget = rates[ue_id] * slot / k
                mac = self._drain(ue_id, budget)
                if mac is not None:
                    self._attempt(mac, rates[ue_id])
                    transmitted = True
        if transmitted and now < self.usage_cutoff - 1e-12:
            self.ledger.slots_used += 1
        if any(self._queues.values()) or any(self._retx.values()):
            self.sim.schedule(now + slot, self._on_slot)
        else:
            self._slot_scheduled = False

    def _drain(self, ue_id: int, budget: float) -> MacPdu | None:
        q = self._queues[ue_id]
        if not q or budget <= 0.0:
            return None
        entries = []
        seqs = []
        while q and budget > 0.0:
            tx = q[0]
            bits = tx.remaining if tx.remaining <= budget else int(budget)
            if bits <= 0:
                break
            tx.remaining -= bits
            tx.outstanding += 1
            final = tx.remaining == 0
            if final:
                tx.drained = True
                q.popleft()
                seqs.append(tx.pdu.seq)
            entries.append((tx, bits, final))
            budget -= bits
        if not entries:
            return None
        mac = MacPdu(self._next_mac_id, ue_id, entries)
        self._next_mac_id += 1
        self.mac_map.record(mac.mac_id, seqs)
        return mac

    def _attempt(self, mac: MacPdu, rate_now: float) -> None:
        success_prob = self.link.per_attempt_success if rate_now > 0.0 else 0.0
        outcome = harq_attempt(success_prob, mac, self._harq_rng[mac.ue_id],
                               self.link.max_harq_attempts)
        if outcome == DELIVERED:
            self.sim.schedule(self.sim.now + self.link.slot_duration,
                              lambda m=mac: self._resolve(m, True))
        elif outcome == RETRY:
            mac.ready_time = self.sim.now + self.link.harq_rtt
            self._retx[mac.ue_id].append(mac)
        else:
            self._resolve(mac, False)

    def _resolve(self, mac: MacPdu, success: bool) -> None:
        completed = []
        dropped = []
        for tx, _bits, _final in mac.entries:
            tx.outstanding -= 1
            if not success:
                tx.failed = True
            if tx.drained and tx.outstanding == 0:
                if tx.failed:
                    dropped.append(tx.pdu)
                else:
                    completed.append(tx.pdu)
        self.mac_map.on_ack(mac.mac_id)
        if completed:
            self.pdus_delivered += len(completed)
            self.on_delivered(mac.ue_id, completed)
        if dropped:
            self.pdus_failed += len(dropped)
            if self.on_pdu_failed is not None:
                self.on_pdu_failed(mac.ue_id, dropped)

    def finalize(self, t_end: float) -> None:
        self.ledger.slots_elapsed = round(t_end / self.link.slot_duration)

    def usage(self) -> float:
        return resource_usage(self.ledger)
