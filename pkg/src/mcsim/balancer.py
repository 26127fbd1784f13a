"""PDCP multi-connectivity layer at the master gNB: the delay-based traffic
balancer (DBTB) with its per-stream deadline queue, the baseline routing
policies, and the UE-side receiver (duplicate removal, in-sequence release)."""

from __future__ import annotations

from collections import OrderedDict

FR1 = "fr1"
FR2 = "fr2"

POLICIES = ("single_fr1", "single_fr2", "link_switching",
            "packet_duplication", "packet_splitting", "dbtb")


class PdcpPdu:
    __slots__ = ("seq", "size", "frame_id", "packet_index", "created")

    def __init__(self, seq: int, size: int, frame_id: int, packet_index: int,
                 created: float):
        self.seq = seq
        self.size = size
        self.frame_id = frame_id
        self.packet_index = packet_index
        self.created = created


class StreamQueue:
    """Copies of PDUs in flight on the fast link, each with the latest time at
    which the master gNB must take over and transmit it on the reliable link.

    For a PDU of size s arriving at time t the takeover deadline is
        t + (d_qos - d_retx) - s / c_est
    which leaves d_retx of budget for a retransmission after the reliable
    link finishes sending.  Appending a PDU tightens the deadlines of every
    queued predecessor (tail-to-head) so the whole queue can still be
    serialized at c_est before its deadlines:
        deadline[n] = min(deadline[n], deadline[n+1] - s[n] / c_est)
    """

    __slots__ = ("entries", "c_est", "d_qos", "d_retx")

    def __init__(self, c_est: float, d_qos: float, d_retx: float):
        self.entries: OrderedDict[int, list] = OrderedDict()  # seq -> [pdu, deadline]
        self.c_est = c_est
        self.d_qos = d_qos
        self.d_retx = d_retx

    def __len__(self):
        return len(self.entries)

    def compute_deadline(self, now: float, size: float) -> float:
        if self.c_est <= 0.0:
            return now  # rate unknown: hand over to the reliable link at once
        return now + (self.d_qos - self.d_retx) - size / self.c_est

    def append(self, pdu: PdcpPdu, now: float) -> float:
        deadline = self.compute_deadline(now, pdu.size)
        self.entries[pdu.seq] = [pdu, deadline]
        return deadline

    def recalc_deadlines(self) -> None:
        """Full tail-to-head tightening pass."""
        if len(self.entries) < 2 or self.c_est <= 0.0:
            return
        c = self.c_est
        entries = list(self.entries.values())
        succ_deadline = entries[-1][1]
        for i in range(len(entries) - 2, -1, -1):
            entry = entries[i]
            bound = succ_deadline - entry[0].size / c
            if bound < entry[1]:
                entry[1] = bound
            succ_deadline = entry[1]

    def remove(self, seqs) -> list[int]:
        """Drop acknowledged PDUs; unknown seqs are a legitimate race (already
        handed to the reliable link) and are ignored."""
        removed = []
        entries = self.entries
        for seq in seqs:
            if entries.pop(seq, None) is not None:
                removed.append(seq)
        return removed

    def pop_head(self):
        seq, (pdu, deadline) = self.entries.popitem(last=False)
        return pdu, deadline

    def head_deadline(self):
        if not self.entries:
            return None
        return next(iter(self.entries.values()))[1]

    def deadlines(self) -> list[tuple[int, float, float]]:
        """(seq, size, deadline) triples in queue order, for inspection."""
        return [(seq, e[0].size, e[1]) for seq, e in self.entries.items()]


class DbtbStream:
    """Per-stream balancer state machine at the master gNB.

    Every arriving PDU is copied toward the fast link immediately; the local
    copy waits in the StreamQueue.  An acknowledgment from the fast link
    deletes the copy; if none arrives by the deadline, the copy is handed to
    the reliable link's RLC.  Each PDU therefore resolves exactly once:
    acknowledged or handed over, never both.
    """

    __slots__ = ("sim", "queue", "forward_fr1", "smoothing", "recalc_on_ack",
                 "_timer", "n_added", "n_acked", "n_forwarded", "n_immediate")

    def __init__(self, sim, queue: StreamQueue, forward_fr1,
                 smoothing: float = 0.5, recalc_on_ack: bool = False):
        self.sim = sim
        self.queue = queue
        self.forward_fr1 = forward_fr1  # fn(list[PdcpPdu])
        self.smoothing = smoothing
        self.recalc_on_ack = recalc_on_ack
        self._timer = None
        self.n_added = 0
        self.n_acked = 0
        self.n_forwarded = 0
        self.n_immediate = 0

    def on_rate_measurement(self, rate: float) -> None:
        q = self.queue
        if q.c_est <= 0.0:
            q.c_est = rate
        else:
            a = self.smoothing
            q.c_est = a * rate + (1.0 - a) * q.c_est

    def on_sdu_burst(self, pdus) -> list[PdcpPdu]:
        """Queue a burst of new PDUs; returns those that must bypass the fast
        link entirely (degenerate deadline at or before now)."""
        now = self.sim.now
        q = self.queue
        immediate = []
        queued = False
        for pdu in pdus:
            self.n_added += 1
            if q.compute_deadline(now, pdu.size) <= now:
                immediate.append(pdu)
            else:
                q.append(pdu, now)
                queued = True
        if queued:
            q.recalc_deadlines()
            self._rearm()
        if immediate:
            self.n_immediate += len(immediate)
            self.forward_fr1(immediate)
        return immediate

    def on_sdu_arrival(self, pdu) -> bool:
        """Single-PDU entry point; True if queued, False if bypassed."""
        return not self.on_sdu_burst([pdu])

    def on_xn_ack(self, seqs) -> None:
        q = self.queue
        old_head = q.head_deadline()
        removed = q.remove(seqs)
        self.n_acked += len(removed)
        if not removed:
            return
        if self.recalc_on_ack:
            q.recalc_deadlines()
        if q.head_deadline() != old_head:
            self._rearm()

    def _rearm(self) -> None:
        head = self.queue.head_deadline()
        timer = self._timer
        if head is not None:
            # Tightening can push a deadline into the past; fire immediately.
            head = max(head, self.sim.now)
        if timer is not None and timer.pending:
            if head is not None and timer.fire_time == head:
                return
            self.sim.cancel(timer)
        if head is None:
            self._timer = None
            return
        self._timer = self.sim.schedule(head, self._on_timer)

    def _on_timer(self) -> None:
        q = self.queue
        if not q.entries:
            raise RuntimeError("deadline timer fired on an empty queue")
        pdu, deadline = q.pop_head()
        if deadline > self.sim.now + 1e-12:
            raise RuntimeError("deadline timer fired early")
        self.n_forwarded += 1
        self._timer = None
        self._rearm()
        self.forward_fr1([pdu])

    def unresolved(self) -> int:
        return len(self.queue)


class RateEstimates:
    __slots__ = ("c_fr1", "c_fr2", "last_update")

    def __init__(self):
        self.c_fr1 = 0.0
        self.c_fr2 = 0.0
        self.last_update = 0.0


def route_single(which: str) -> str:
    if which not in (FR1, FR2):
        raise ValueError(f"unknown link {which!r}")
    return which


def route_link_switching(est: RateEstimates) -> str:
    # Tie goes to the reliable low-band link.
    return FR2 if est.c_fr2 > est.c_fr1 else FR1


def route_packet_splitting(est: RateEstimates, rng) -> str:
    total = est.c_fr1 + est.c_fr2
    if total <= 0.0:
        return FR1  # both links look dead: fail toward the reliable one
    return FR1 if rng.random() < est.c_fr1 / total else FR2


def route_duplication() -> tuple[str, str]:
    return (FR1, FR2)


class UeReceiver:
    """UE-side PDCP endpoint: drops duplicate sequence numbers and releases
    SDUs in order, bounded by a reorder timeout that skips unfilled gaps."""

    __slots__ = ("sim", "timeout", "release", "next_expected", "buffer",
                 "_timer", "released_count", "duplicate_count")

    def __init__(self, sim, timeout: float, release):
        self.sim = sim
        self.timeout = timeout
        self.release = release  # fn(PdcpPdu, now)
        self.next_expected = 0
        self.buffer: dict[int, PdcpPdu] = {}
        self._timer = None
        self.released_count = 0
        self.duplicate_count = 0

    def receive(self, pdu: PdcpPdu) -> None:
        seq = pdu.seq
        if seq < self.next_expected or seq in self.buffer:
            self.duplicate_count += 1
            return
        now = self.sim.now
        if seq != self.next_expected:
            self.buffer[seq] = pdu
            if self._timer is None or not self._timer.pending:
                self._timer = self.sim.schedule(now + self.timeout, self._on_timeout)
            return
        self._release(pdu, now)
        nxt = self.next_expected
        buf = self.buffer
        while nxt in buf:
            self._release(buf.pop(nxt), now)
            nxt = self.next_expected
        if not buf and self._timer is not None and self._timer.pending:
            self.sim.cancel(self._timer)
            self._timer = None

    def _release(self, pdu: PdcpPdu, now: float) -> None:
        self.released_count += 1
        self.next_expected = pdu.seq + 1
        self.release(pdu, now)

    def _on_timeout(self) -> None:
        # Give up on the gaps: flush everything buffered, in order.
        now = self.sim.now
        self._timer = None
        for seq in sorted(self.buffer):
            self._release(self.buffer[seq], now)
        self.buffer.clear()


class MgnbPdcp:
    """Downlink PDCP at the master gNB: sequence numbering plus the selected
    routing policy, one instance per cell."""

    def __init__(self, sim, policy: str, send_fr1, send_xn,
                 d_qos: float, d_retx: float, smoothing: float,
                 recalc_on_ack: bool, split_rng_for):
        if policy not in POLICIES:
            raise ValueError(f"unknown policy {policy!r}")
        self.sim = sim
        self.policy = policy
        self.send_fr1 = send_fr1  # fn(ue_id, [PdcpPdu]): hand to local RLC now
        self.send_xn = send_xn  # fn(ue_id, [PdcpPdu]): forward over Xn
        self.d_qos = d_qos
        self.d_retx = d_retx
        self._seq: dict[int, int] = {}
        self.estimates: dict[int, RateEstimates] = {}
        self.streams: dict[int, DbtbStream] = {}
        self._split_rng_for = split_rng_for
        self._split_rng: dict[int, object] = {}
        self.smoothing = smoothing
        self.recalc_on_ack = recalc_on_ack

    def add_ue(self, ue_id: int) -> None:
        self._seq[ue_id] = 0
        self.estimates[ue_id] = RateEstimates()
        if self.policy == "dbtb":
            queue = StreamQueue(0.0, self.d_qos, self.d_retx)
            self.streams[ue_id] = DbtbStream(
                self.sim, queue,
                lambda pdus, u=ue_id: self.send_fr1(u, pdus),
                self.smoothing, self.recalc_on_ack)
        elif self.policy == "packet_splitting":
            self._split_rng[ue_id] = self._split_rng_for(ue_id)

    def on_packets(self, ue_id: int, packets) -> None:
        seq = self._seq[ue_id]
        pdus = []
        for pkt in packets:
            pdus.append(PdcpPdu(seq, pkt.size, pkt.frame_id, pkt.packet_index,
                                pkt.gen_time))
            seq += 1
        self._seq[ue_id] = seq
        policy = self.policy
        if policy == "single_fr1":
            self.send_fr1(ue_id, pdus)
        elif policy == "single_fr2":
            self.send_xn(ue_id, pdus)
        elif policy == "packet_duplication":
            self.send_fr1(ue_id, pdus)
            self.send_xn(ue_id, pdus)
        elif policy == "link_switching":
            est = self.estimates[ue_id]
            if route_link_switching(est) == FR1:
                self.send_fr1(ue_id, pdus)
            else:
                self.send_xn(ue_id, pdus)
        elif policy == "packet_splitting":
            est = self.estimates[ue_id]
            rng = self._split_rng[ue_id]
            to_fr1 = []
            to_fr2 = []
            for pdu in pdus:
                if route_packet_splitting(est, rng) == FR1:
                    to_fr1.append(pdu)
                else:
                    to_fr2.append(pdu)
            if to_fr1:
                self.send_fr1(ue_id, to_fr1)
            if to_fr2:
                self.send_xn(ue_id, to_fr2)
        else:  # dbtb
            stream = self.streams[ue_id]
            immediate = stream.on_sdu_burst(pdus)
            if len(immediate) < len(pdus):
                bypass = set(p.seq for p in immediate)
                copies = [p for p in pdus if p.seq not in bypass] if bypass else pdus
                self.send_xn(ue_id, copies)

    def on_xn_ack(self, ue_id: int, seqs) -> None:
        stream = self.streams.get(ue_id)
        if stream is not None:
            stream.on_xn_ack(seqs)

    def on_fr1_measurement(self, ue_id: int, rate: float, now: float) -> None:
        est = self.estimates[ue_id]
        est.c_fr1 = rate
        est.last_update = now
        stream = self.streams.get(ue_id)
        if stream is not None:
            stream.on_rate_measurement(rate)

    def on_fr2_measurement(self, ue_id: int, rate: float, now: float) -> None:
        est = self.estimates[ue_id]
        est.c_fr2 = rate
        est.last_update = now
