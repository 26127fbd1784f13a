"""Scenario assembly and batch execution: config parsing, hexagonal-cell UE
drops, single-run wiring of all components, seed/policy sweeps, CSV output."""

from __future__ import annotations

import math
import multiprocessing
import random
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .balancer import POLICIES, MgnbPdcp, UeReceiver
from .engine import Simulator, stream_seed
from .metrics import RunResult, UeStats, capacity_from_sweep, is_monotone_nonincreasing, mean_ci
from .radio import BlockageProcess, ChannelState, GnbMac, LinkParams, measure
from .traffic import DeliveryTracker, TrafficConfig, VideoSource

SCENARIOS = ("single_ue_distance_sweep", "multi_ue_capacity_sweep")


class ConfigError(ValueError):
    pass


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float(text):
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return float("inf")
    return float(text)

def _parse_float_list(text):
    return [float(part) for part in text.split(",") if part.strip()]


def _parse_int_list(text):
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_str_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _positive(v):
    return v > 0


def _non_negative(v):
    return v >= 0


def _fraction(v):
    return 0.0 < v <= 1.0


def _open_unit(v):
    return 0.0 < v < 1.0


# key -> (default, parser, validator or None, description)
CONFIG_SCHEMA = {
    "scenario": ("single_ue_distance_sweep", str.strip,
                 lambda v: v in SCENARIOS, "which experiment to run"),
    "sim_time_s": (10.0, _parse_float, _positive, "simulated seconds per run"),
    "runs": (20, int, _positive, "independent seeded runs per config point"),
    "base_seed": (1, int, None, "seed of run 0; run k uses base_seed + k"),
    "policies": ( list(POLICIES), _parse_str_list,
                 lambda v: bool(v) and all(p in POLICIES for p in v),
                 "balancing policies to sweep"),
    "policy": ("", str.strip, lambda v: v == "" or v in POLICIES,
               "run a single policy instead of the policies list"),
    "distances_m": ([10.0, 30.0, 50.0, 70.0, 90.0, 100.0, 110.0, 120.0, 130.0, 133.0],
                    _parse_float_list, lambda v: bool(v) and all(d > 0 for d in v),
                    "gNB-UE distances for the single-UE sweep"),
    "ue_counts": (list(range(1, 13)), _parse_int_list,
                  lambda v: bool(v) and all(n >= 1 for n in v),
                  "UE counts for the capacity sweep"),
    "freeze_drops": (False, _parse_bool, None,
                     "reuse one UE drop across all runs instead of redrawing"),
    "warmup_ms": (500.0, _parse_float, _non_negative,
                  "frames generated this early are excluded from loss stats"),

    "mean_bitrate_mbps": (50.0, _parse_float, _positive, "video stream average bitrate"),
    "fps": (60.0, _parse_float, _positive, "video frame rate"),
    "peak_to_average": (2.0, _parse_float, lambda v: v >= 1.0, "peak-to-average frame size"),
    "mtu_payload_bytes": (1460, int, _positive, "packet payload size"),
    "d_qos_ms": (15.0, _parse_float, _positive, "per-frame delivery budget"),
    "flr_qos": (0.01, _parse_float, _open_unit, "frame-loss-ratio target"),
    "frame_sigma_ratio": (0.65, _parse_float, _positive,
                          "frame-size std dev / mean (calibrated)"),

    "d_retx_ms": (5.0, _parse_float, _positive,
                  "budget reserved for low-band retransmission after handover"),
    "c_est_smoothing": (0.5, _parse_float, _fraction,
                        "EMA weight of the newest low-band rate measurement"),
    "recalc_on_ack": (False, _parse_bool, None,
                      "re-run the deadline tightening pass after acknowledgments"),
    "reorder_timeout_ms": (10.0, _parse_float, _positive, "UE PDCP reorder timeout"),

    "gnb_height_m": (10.0, _parse_float, _positive, "gNB antenna height"),
    "ue_height_m": (1.6, _parse_float, _positive, "UE antenna height"),
    "measurement_period_ms": (10.0, _parse_float, _positive, "SINR measurement period"),
    "max_harq_attempts": (4, int, _positive, "transmission attempts per MAC PDU"),
    "harq_rtt_ms": (1.5, _parse_float, _positive, "delay before a retransmission"),
    "xn_latency_ms": (1.0, _parse_float, _non_negative, "one-way inter-gNB latency"),
    "cell_span_m": (133.0, _parse_float, _positive, "maximum gNB-UE distance"),

    "fr1_carrier_ghz": (3.6, _parse_float, _positive, ""),
    "fr1_bandwidth_mhz": (100.0, _parse_float, _positive, ""),
    "fr1_tx_power_dbm": (43.0, _parse_float, None, ""),
    "fr1_antenna_gain_db": (15.0, _parse_float, None, ""),
    "fr1_noise_figure_db": (7.0, _parse_float, None, ""),
    "fr1_slot_ms": (0.5, _parse_float, _positive, ""),
    "fr1_attempt_success": (0.9, _parse_float, _fraction, ""),
    "fr1_max_eff_bps_hz": (3.3, _parse_float, _positive,
                           "low-band spectral-efficiency ceiling (calibrated)"),
    "fr1_min_sinr_db": (-5.0, _parse_float, None, "decode floor"),
    "fr1_shadow_sigma_db": (4.0, _parse_float, _non_negative, ""),

    "fr2_carrier_ghz": (28.0, _parse_float, _positive, ""),
    "fr2_bandwidth_mhz": (1000.0, _parse_float, _positive, ""),
    "fr2_tx_power_dbm": (43.0, _parse_float, None, ""),
    "fr2_antenna_gain_db": (19.5, _parse_float, None,
                            "combined mmWave beamforming gain (calibrated)"),
    "fr2_noise_figure_db": (7.0, _parse_float, None, ""),
    "fr2_slot_ms": (0.125, _parse_float, _positive, ""),
    "fr2_attempt_success": (0.9, _parse_float, _fraction, ""),
    "fr2_max_eff_bps_hz": (7.4, _parse_float, _positive, ""),
    "fr2_min_sinr_db": (-5.0, _parse_float, None, "decode floor"),
    "fr2_shadow_sigma_db": (2.0, _parse_float, _non_negative, "(calibrated)"),

    "blockage_mean_unblocked_ms": (140.0, _parse_float, _non_negative,
                                   "0 pins the link blocked (calibrated)"),
    "blockage_mean_blocked_ms": (40.0, _parse_float, _non_negative,
                                 "0 disables blockage (calibrated)"),
    "blockage_loss_db": (20.5, _parse_float, _non_negative,
                         "extra mmWave loss while blocked; inf = full outage"),
}


class ScenarioConfig:
    """Flat, fully-resolved configuration; unknown keys are rejected."""

    __slots__ = ("values",)

    def __init__(self, values: dict):
        self.values = values

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def items(self):
        return [(k, self.values[k]) for k in CONFIG_SCHEMA]

    def active_policies(self) -> list[str]:
        if self.values["policy"]:
            return [self.values["policy"]]
        return list(self.values["policies"])

    def traffic_config(self) -> TrafficConfig:
        v = self.values
        return TrafficConfig(
            mean_bitrate=v["mean_bitrate_mbps"] * 1e6,
            fps=v["fps"],
            peak_to_average=v["peak_to_average"],
            mtu_payload=v["mtu_payload_bytes"] * 8,
            d_qos=v["d_qos_ms"] * 1e-3,
            flr_qos=v["flr_qos"],
            sigma_ratio=v["frame_sigma_ratio"],
        )

    def link_params(self, which: str) -> LinkParams:
        v = self.values
        p = which + "_"
        return LinkParams(
            name=which,
            carrier_freq=v[p + "carrier_ghz"] * 1e9,
            bandwidth=v[p + "bandwidth_mhz"] * 1e6,
            tx_power_dbm=v[p + "tx_power_dbm"],
            antenna_gain_db=v[p + "antenna_gain_db"],
            noise_figure_db=v[p + "noise_figure_db"],
            gnb_height=v["gnb_height_m"],
            ue_height=v["ue_height_m"],
            slot_duration=v[p + "slot_ms"] * 1e-3,
            per_attempt_success=v[p + "attempt_success"],
            max_harq_attempts=v["max_harq_attempts"],
            harq_rtt=v["harq_rtt_ms"] * 1e-3,
            max_spectral_eff=v[p + "max_eff_bps_hz"],
            min_working_sinr_db=v[p + "min_sinr_db"],
            shadow_sigma_db=v[p + "shadow_sigma_db"],
            pathloss_model="uma_los" if which == "fr1" else "uma_nlos",
        )


def _parse_assignment(line: str, source: str):
    if "=" not in line:
        raise ConfigError(f"{source}: expected 'key = value', got {line!r}")
    key, _, value = line.partition("=")
    return key.strip(), value.strip()


def load_config(path: str | Path | None = None, overrides=()) -> ScenarioConfig:
    """Resolve defaults, then a flat key=value file, then overrides (in order)."""
    values = {key: spec[0] for key, spec in CONFIG_SCHEMA.items()}

    def apply(key, raw, source):
        if key not in CONFIG_SCHEMA:
            raise ConfigError(f"{source}: unknown configuration key {key!r}")
        _, parser, validator, _ = CONFIG_SCHEMA[key]
        try:
            value = parser(raw)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{source}: bad value for {key}: {raw!r} ({exc})") from None
        if validator is not None and not validator(value):
            raise ConfigError(f"{source}: value out of range for {key}: {raw!r}")
        values[key] = value

    if path is not None:
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, raw = _parse_assignment(line, f"{path}:{lineno}")
            apply(key, raw, f"{path}:{lineno}")
    for item in overrides:
        key, raw = _parse_assignment(item, "override")
        apply(key, raw, f"override {item!r}")

    if values["d_retx_ms"] >= values["d_qos_ms"]:
        raise ConfigError("d_retx_ms must be smaller than d_qos_ms")
    if values["warmup_ms"] * 1e-3 >= values["sim_time_s"]:
        raise ConfigError("warmup_ms must be below sim_time_s")
    return ScenarioConfig(values)


class CellGeometry:
    """Regular hexagonal cell with both gNBs co-located at one vertex.

    The span is the largest possible gNB-UE distance (the opposite vertex),
    so the hexagon side is span / 2 and the gNB sits at the origin with the
    cell extending toward +x.
    """

    def __init__(self, span_m: float):
        self.span = span_m
        self.side = span_m / 2.0

    def contains(self, x: float, y: float) -> bool:
        # Coordinates relative to the hexagon center at (side, 0).
        a = self.side
        rx = x - a
        ry = y
        s3 = math.sqrt(3.0)
        return (abs(ry) <= s3 * a / 2.0 + 1e-9
                and abs(s3 * rx + ry) <= s3 * a + 1e-9
                and abs(s3 * rx - ry) <= s3 * a + 1e-9)

    def sample_distance(self, rng) -> float:
        a = self.side
        s3h = math.sqrt(3.0) * a / 2.0
        while True:
            x = rng.uniform(0.0, 2.0 * a)
            y = rng.uniform(-s3h, s3h)
            if self.contains(x, y):
                d = math.hypot(x, y)
                if d >= 1.0:  # keep clear of the antenna near field
                    return d


def drop_ues(n: int, geometry: CellGeometry, rng) -> list[float]:
    if n < 1:
        raise ValueError("need at least one UE")
    return [geometry.sample_distance(rng) for _ in range(n)]


@dataclass
class _UeRuntime:
    tracker: DeliveryTracker
    receiver: UeReceiver
    blockage: BlockageProcess
    chan_fr1: ChannelState
    chan_fr2: ChannelState


def run_single(cfg: ScenarioConfig, scenario: str, policy: str, point: float,
               seed: int, collect_frame_ids: bool = False) -> RunResult:
    """One seeded simulation of one (policy, config point)."""
    v = cfg.values
    sim = Simulator(seed)
    sim_time = v["sim_time_s"]
    xn = v["xn_latency_ms"] * 1e-3
    tcfg = cfg.traffic_config()
    fr1 = cfg.link_params("fr1")
    fr2 = cfg.link_params("fr2")

    if scenario == "single_ue_distance_sweep":
        distances = [float(point)]
    else:
        if v["freeze_drops"]:
            drop_rng = random.Random(stream_seed(v["base_seed"], ("drop",)))
        else:
            drop_rng = sim.stream("drop")
        distances = drop_ues(int(point), CellGeometry(v["cell_span_m"]), drop_rng)

    ues: dict[int, _UeRuntime] = {}
    receivers: dict[int, UeReceiver] = {}
    trackers: dict[int, DeliveryTracker] = {}

    mgnb = GnbMac(sim, fr1, sim_time,
                  on_delivered=lambda ue, pdus: _deliver(receivers[ue], pdus))
    sgnb = GnbMac(sim, fr2, sim_time,
                  on_delivered=lambda ue, pdus: _deliver_and_ack(
                      sim, xn, receivers[ue], pdcp, ue, pdus))
    pdcp = MgnbPdcp(
        sim, policy,
        send_fr1=lambda ue, pdus: mgnb.enqueue(ue, pdus),
        send_xn=lambda ue, pdus: sim.schedule_in(
            xn, lambda u=ue, p=pdus: sgnb.enqueue(u, p)),
        d_qos=tcfg.d_qos,
        d_retx=v["d_retx_ms"] * 1e-3,
        smoothing=v["c_est_smoothing"],
        recalc_on_ack=v["recalc_on_ack"],
        split_rng_for=lambda ue: sim.stream("policy", ue),
    )

    period = v["measurement_period_ms"] * 1e-3
    warmup = v["warmup_ms"] * 1e-3

    for ue_id, distance in enumerate(distances):
        blockage = BlockageProcess(
            sim, sim.stream("blockage", ue_id),
            v["blockage_mean_unblocked_ms"] * 1e-3,
            v["blockage_mean_blocked_ms"] * 1e-3,
            v["blockage_loss_db"])
        chan1 = ChannelState(fr1, distance)
        chan2 = ChannelState(fr2, distance, blockage)
        mgnb.add_ue(ue_id, chan1, sim.stream("harq", "fr1", ue_id))
        sgnb.add_ue(ue_id, chan2, sim.stream("harq", "fr2", ue_id))
        pdcp.add_ue(ue_id)
        tracker = DeliveryTracker(sim, tcfg, warmup)
        receiver = UeReceiver(
            sim, v["reorder_timeout_ms"] * 1e-3,
            release=lambda pdu, now, t=tracker: t.on_app_delivery(
                pdu.frame_id, pdu.packet_index, now))
        trackers[ue_id] = tracker
        receivers[ue_id] = receiver
        ues[ue_id] = _UeRuntime(tracker, receiver, blockage, chan1, chan2)
        VideoSource(sim, tcfg, sim.stream("traffic", ue_id), tracker,
                    sink=lambda frame, pkts, u=ue_id: pdcp.on_packets(u, pkts),
                    stop_time=sim_time)
        _start_measurements(sim, pdcp, ue_id, chan1, chan2, period, xn, sim_time)

    sim.run_until(sim_time + tcfg.d_qos + 1e-6)

    mgnb.finalize(sim_time)
    sgnb.finalize(sim_time)
    stats = []
    extras = {
        "fr1_slots_used": mgnb.ledger.slots_used,
        "fr2_slots_used": sgnb.ledger.slots_used,
        "fr1_pdus": (mgnb.pdus_in, mgnb.pdus_delivered, mgnb.pdus_failed),
        "fr2_pdus": (sgnb.pdus_in, sgnb.pdus_delivered, sgnb.pdus_failed),
        "fr1_map_live": len(mgnb.mac_map),
        "fr2_map_live": len(sgnb.mac_map),
        "blocked_fraction": {u: rt.blockage.blocked_fraction(sim_time)
                             for u, rt in ues.items()},
        "released": {u: rt.receiver.released_count for u, rt in ues.items()},
        "dup_dropped": {u: rt.receiver.duplicate_count for u, rt in ues.items()},
        "seqs_assigned": dict(pdcp._seq),
        "packets_offered": {u: sum(f.packet_count for f in rt.tracker.frames.values())
                            for u, rt in ues.items()},
    }
    if policy == "dbtb":
        extras["dbtb"] = {
            u: (s.n_added, s.n_acked, s.n_forwarded, s.n_immediate, s.unresolved())
            for u, s in pdcp.streams.items()}
    if collect_frame_ids:
        extras["on_time_ids"] = {
            u: frozenset(fid for fid, fr in rt.tracker.frames.items()
                         if fr.status == 1 and fr.counted)
            for u, rt in ues.items()}
    for ue_id, rt in ues.items():
        t = rt.tracker
        if t.on_time + t.lost != t.generated:
            raise RuntimeError("frame accounting leak: some frames never finalized")
        stats.append(UeStats(ue_id, t.generated, t.on_time, t.lost))
    return RunResult(scenario, policy, point, seed, stats,
                     fr1_usage=mgnb.usage(), fr2_usage=sgnb.usage()), extras


def _deliver(receiver: UeReceiver, pdus) -> None:
    receive = receiver.receive
    for pdu in pdus:
        receive(pdu)


def _deliver_and_ack(sim, xn, receiver, pdcp, ue_id, pdus) -> None:
    receive = receiver.receive
    for pdu in pdus:
        receive(pdu)
    seqs = [pdu.seq for pdu in pdus]
    sim.schedule_in(xn, lambda: pdcp.on_xn_ack(ue_id, seqs))


def _start_measurements(sim, pdcp, ue_id, chan1, chan2, period, xn, sim_time):
    shadow1 = sim.stream("shadow", "fr1", ue_id)
    shadow2 = sim.stream("shadow", "fr2", ue_id)

    def tick():
        now = sim.now
        chan1.redraw_shadow(shadow1)
        pdcp.on_fr1_measurement(ue_id, measure(chan1), now)
        chan2.redraw_shadow(shadow2)
        rate2 = measure(chan2)
        sim.schedule_in(xn, lambda: pdcp.on_fr2_measurement(ue_id, rate2, now))
        t_next = now + period
        if t_next < sim_time:
            sim.schedule(t_next, tick)

    sim.schedule(0.0, tick)


def _run_task(args):
    cfg_values, scenario, policy, point, seed = args
    cfg = ScenarioConfig(cfg_values)
    result, _extras = run_single(cfg, scenario, policy, point, seed)
    return result


def execute_sweep(cfg: ScenarioConfig, scenario: str,
                  parallel: int = 1, progress=None) -> list[RunResult]:
    """Every (policy, point, seed) combination, in deterministic order.

    Tasks are independent; with parallel > 1 they run in a process pool and
    are merged back in task order, so output is identical for any worker
    count.
    """
    v = cfg.values
    points = v["distances_m"] if scenario == "single_ue_distance_sweep" else v["ue_counts"]
    tasks = [(v, scenario, policy, point, v["base_seed"] + k)
             for policy in cfg.active_policies()
             for point in points
             for k in range(v["runs"])]
    if parallel > 1:
        with multiprocessing.Pool(parallel) as pool:
            results = []
            for i, res in enumerate(pool.imap(_run_task, tasks, chunksize=4)):
                results.append(res)
                if progress:
                    progress(i + 1, len(tasks))
    else:
        results = []
        for i, task in enumerate(tasks):
            results.append(_run_task(task))
            if progress:
                progress(i + 1, len(tasks))
    return results


def _fmt(value) -> str:
    if isinstance(value, float):
        if value != value:  # NaN
            return "nan"
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return ",".join(_fmt(x) for x in value)
    return str(value)


def config_header(cfg: ScenarioConfig) -> list[str]:
    lines = [f"# mcsim {__version__}"]
    lines += [f"# {key} = {_fmt(val)}" for key, val in cfg.items()]
    return lines


RAW_COLUMNS = ("scenario", "policy", "point", "seed", "ue_id", "flr",
               "satisfied", "fr1_usage", "fr2_usage", "frames_generated")


def write_raw_csv(path: Path, cfg: ScenarioConfig, results: list[RunResult]) -> None:
    flr_qos = cfg.values["flr_qos"]
    lines = config_header(cfg)
    lines.append(",".join(RAW_COLUMNS))
    for run in results:
        for s in run.ue_stats:
            flr_txt = "" if s.flr is None else repr(s.flr)
            sat = 1 if (s.flr is not None and s.flr <= flr_qos) else 0
            lines.append(",".join((
                run.scenario, run.policy, _fmt(run.point), str(run.seed),
                str(s.ue_id), flr_txt, str(sat), repr(run.fr1_usage),
                repr(run.fr2_usage), str(s.frames_generated))))
    path.write_text("\n".join(lines) + "\n")


AGG_COLUMNS = ("scenario", "policy", "point", "n_runs",
               "flr_mean", "flr_ci95",
               "satisfied_ratio_mean", "satisfied_ratio_ci95",
               "fr1_usage_mean", "fr1_usage_ci95",
               "fr2_usage_mean", "fr2_usage_ci95")


def aggregate(cfg: ScenarioConfig, results: list[RunResult]):
    """Per (policy, point): means and 95% confidence half-widths over seeds."""
    flr_qos = cfg.values["flr_qos"]
    groups: dict[tuple, list[RunResult]] = {}
    order = []
    for run in results:
        key = (run.policy, run.point)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(run)
    rows = []
    for policy, point in order:
        runs = groups[(policy, point)]
        flrs = [r.overall_flr() for r in runs if r.overall_flr() is not None]
        ratios = [r.satisfied_ratio(flr_qos) for r in runs]
        f_mean, f_ci = mean_ci(flrs)
        r_mean, r_ci = mean_ci(ratios)
        u1_mean, u1_ci = mean_ci([r.fr1_usage for r in runs])
        u2_mean, u2_ci = mean_ci([r.fr2_usage for r in runs])
        rows.append({
            "scenario": runs[0].scenario, "policy": policy, "point": point,
            "n_runs": len(runs),
            "flr_mean": f_mean, "flr_ci95": f_ci,
            "satisfied_ratio_mean": r_mean, "satisfied_ratio_ci95": r_ci,
            "fr1_usage_mean": u1_mean, "fr1_usage_ci95": u1_ci,
            "fr2_usage_mean": u2_mean, "fr2_usage_ci95": u2_ci,
        })
    return rows


def write_aggregate_csv(path: Path, cfg: ScenarioConfig, rows) -> None:
    lines = config_header(cfg)
    lines.append(",".join(AGG_COLUMNS))
    for row in rows:
        lines.append(",".join(_fmt(row[col]) for col in AGG_COLUMNS))
    path.write_text("\n".join(lines) + "\n")


def capacity_table(cfg: ScenarioConfig, rows) -> dict[str, int | None]:
    """Per-policy capacity from aggregated capacity-sweep rows.

    None when the sweep did not cover a contiguous 1..N range, in which case
    the capacity definition does not apply.
    """
    capacities = {}
    for policy in cfg.active_policies():
        points = sorted((int(r["point"]), r["satisfied_ratio_mean"])
                        for r in rows if r["policy"] == policy)
        try:
            capacities[policy] = capacity_from_sweep(points)
        except ValueError:
            capacities[policy] = None
    return capacities


def write_summary(path: Path, cfg: ScenarioConfig, scenario: str, rows) -> None:
    lines = [f"mcsim {__version__} - {scenario}", ""]
    if scenario == "multi_ue_capacity_sweep":
        capacities = capacity_table(cfg, rows)
        lines.append("capacity (largest UE count with > 90% satisfied UEs):")
        for policy, cap in capacities.items():
            ratios = [r["satisfied_ratio_mean"] for r in
                      sorted((r for r in rows if r["policy"] == policy),
                             key=lambda r: r["point"])]
            note = "" if is_monotone_nonincreasing(ratios, tol=1e-9) \
                else "  (non-monotone satisfied-ratio curve)"
            if cap is None:
                lines.append(f"  {policy:<20} n/a (sweep must cover 1..N){note}")
                continue
            usage = next((r["fr1_usage_mean"] for r in rows
                          if r["policy"] == policy and int(r["point"]) == cap), None)
            usage_txt = f"  fr1_usage@capacity={usage:.4f}" if usage is not None else ""
            lines.append(f"  {policy:<20} {cap:2d}{usage_txt}{note}")
    else:
        lines.append("worst-case mean FLR and usage ranges per policy:")
        for policy in cfg.active_policies():
            mine = [r for r in rows if r["policy"] == policy]
            worst = max(r["flr_mean"] for r in mine)
            u1 = [r["fr1_usage_mean"] for r in mine]
            u2 = [r["fr2_usage_mean"] for r in mine]
            lines.append(
                f"  {policy:<20} worst_flr={worst:.5f}"
                f"  fr1_usage=[{min(u1):.4f},{max(u1):.4f}]"
                f"  fr2_usage=[{min(u2):.4f},{max(u2):.4f}]")
    path.write_text("\n".join(lines) + "\n")


def run_scenario(cfg: ScenarioConfig, scenario: str, out_dir: str | Path,
                 parallel: int = 1, progress=None) -> dict[str, Path]:
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = execute_sweep(cfg, scenario, parallel, progress)
    tag = "distance" if scenario == "single_ue_distance_sweep" else "capacity"
    raw_path = out / f"{tag}_raw.csv"
    agg_path = out / f"{tag}_aggregate.csv"
    sum_path = out / f"{tag}_summary.txt"
    rows = aggregate(cfg, results)
    write_raw_csv(raw_path, cfg, results)
    write_aggregate_csv(agg_path, cfg, rows)
    write_summary(sum_path, cfg, scenario, rows)
    return {"raw": raw_path, "aggregate": agg_path, "summary": sum_path}
