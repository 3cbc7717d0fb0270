"""Command line interface: ``hapdc SUBCOMMAND --config PATH --out PATH``.

Exit codes: 0 ok, 1 configuration error, 2 infeasible computation. Errors are
reported as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import partial
from pathlib import Path

from hapdc.config import RunConfig, dump_config, load_config
from hapdc.errors import ConfigError, DomainError, HapdcError, InfeasibleError, UnstableQueueError
from hapdc.hap import flying_condition
from hapdc.scenarios import (
    Scenario,
    delay_report,
    electricity_cost,
    max_rate_offered,
    OfferedPolicy,
    sweep_days,
    utilization_grid,
)
from hapdc.solar import GeoDay
from hapdc.workload import TaskClass, des_oracle, mm1_sojourn

log = logging.getLogger("hapdc")

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2

FLYING_HEADER = ["day", "lat", "n_servers", "feasible", "max_utilization", "max_arrival_rate"]
COST_HEADER = ["day", "scenario", "cost", "savings_pct"]
DELAY_HEADER = ["arrival_rate", "task_class", "queuing_s", "rtt_s", "relay_s"]
SCENARIO_HEADER = [
    "scenario", "day", "lat", "offered_rate", "lambda_terrestrial", "lambda_hap",
    "terrestrial_compute_kwh", "cooling_kwh", "transmission_kwh", "cost",
    "savings_pct", "queuing_s", "rtt_s", "relay_s", "outage", "feasible",
]


def _num(x: float) -> str:
    return repr(float(x))


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _scenario_for(cfg: RunConfig, hap_count: int) -> Scenario:
    sc = cfg.scenario
    return Scenario.with_haps(
        hap_count,
        airborne_servers_per_hap=sc.airborne_servers_per_hap,
        terrestrial_servers=sc.terrestrial_servers,
        control=sc.control,
        terrestrial_load_fraction=sc.terrestrial_load_fraction,
        controller_response_s=sc.controller_response_s,
        coordination_overhead_s=sc.coordination_overhead_s,
    )


def _flying_row(day, cfg: RunConfig, n_servers: int):
    geo = GeoDay(cfg.geo.latitude_deg, day)
    res = flying_condition(cfg.hap, geo, n_servers, cfg.server, cfg.workload.spec())
    return [str(day), _num(geo.latitude_deg), str(n_servers), _flag(res.feasible),
            _num(res.max_utilization), _num(res.max_arrival_rate)]


def run_flying_condition(cfg: RunConfig, jobs: int = 1):
    rows = []
    for n in cfg.server_counts:
        fn = partial(_flying_row, cfg=cfg, n_servers=n)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows.extend(pool.map(fn, cfg.sweep.days, chunksize=16))
        else:
            rows.extend(fn(d) for d in cfg.sweep.days)
    return FLYING_HEADER, rows


def run_cost_sweep(cfg: RunConfig, jobs: int = 1):
    workload = cfg.workload.spec()
    per_scenario = []
    for k in cfg.sweep.hap_counts:
        sc = _scenario_for(cfg, k)
        series = sweep_days(sc, cfg.geo.latitude_deg, workload, cfg.system,
                            policy=cfg.sweep.policy,
                            fixed_rate=cfg.sweep.fixed_arrival_rate,
                            days=cfg.sweep.days, jobs=jobs)
        per_scenario.append((sc.label, series))
    rows = []
    for i, day in enumerate(cfg.sweep.days):
        for label, series in per_scenario:
            point = series[i]
            rows.append([str(day), label, _num(point.cost), _num(point.savings_pct)])
    return COST_HEADER, rows


def run_delay_compare(cfg: RunConfig, jobs: int = 1):
    grid = utilization_grid(cfg.delay.n_points, cfg.delay.max_utilization)
    workloads = [cfg.workload.spec(TaskClass.SHORT), cfg.workload.spec(TaskClass.LONG)]
    table = delay_report(cfg.scenario, workloads, grid, cfg.system)
    if cfg.delay.des_tasks:
        _cross_check(cfg, table)
    rows = [[_num(r.arrival_rate), r.task_class, _num(r.queuing_s), _num(r.rtt_s),
             _num(r.relay_s)] for r in table]
    return DELAY_HEADER, rows


def _cross_check(cfg: RunConfig, table) -> None:
    n_t = cfg.scenario.terrestrial_servers
    for i, row in enumerate(table):
        w = cfg.workload.spec(row.task_class, row.arrival_rate / n_t)
        empirical = des_oracle(w, cfg.server, cfg.delay.des_tasks, cfg.seed + i)
        analytic = mm1_sojourn(w, cfg.server)
        log.info("des check %s lambda=%.6g analytic=%.6g des=%.6g rel=%.3g",
                 row.task_class, row.arrival_rate, analytic, empirical,
                 abs(empirical - analytic) / analytic)


def run_scenario(cfg: RunConfig, jobs: int = 1):
    sc = cfg.scenario
    workload = cfg.workload.spec()
    if cfg.sweep.policy is OfferedPolicy.MAX_RATE:
        rate = max_rate_offered(sc, cfg.geo, workload, cfg.system)
    else:
        rate = cfg.sweep.fixed_arrival_rate
    offered = workload.with_rate(rate)
    res = electricity_cost(sc, cfg.geo, offered, cfg.system)
    base = electricity_cost(sc.terrestrial_baseline(), cfg.geo, offered, cfg.system)
    if base.cost_per_day == 0:
        raise InfeasibleError("terrestrial baseline cost is zero; savings undefined")
    savings = 100.0 * (base.cost_per_day - res.cost_per_day) / base.cost_per_day
    e, d = res.energy_breakdown, res.delays
    row = [sc.label, str(cfg.geo.day_of_year), _num(cfg.geo.latitude_deg), _num(rate),
           _num(res.dispatched.terrestrial_rate), _num(res.dispatched.hap_total),
           _num(e.terrestrial_compute_kwh), _num(e.cooling_kwh), _num(e.transmission_kwh),
           _num(res.cost_per_day), _num(savings), _num(d.queuing_s), _num(d.rtt_s),
           _num(d.relay_s), _flag(res.outage), _flag(res.feasible)]
    return SCENARIO_HEADER, [row]


SUBCOMMANDS = {
    "flying-condition": run_flying_condition,
    "cost-sweep": run_cost_sweep,
    "delay-compare": run_delay_compare,
    "scenario": run_scenario,
}


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run(subcommand: str, cfg: RunConfig, jobs: int = 1) -> str:
    """Execute one subcommand and return its CSV text."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    header, rows = SUBCOMMANDS[subcommand](cfg, jobs)
    return render_csv(header, rows)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hapdc", description="HAP flying data center simulator")
    ap.add_argument("subcommand", choices=sorted(SUBCOMMANDS) + ["dump-config"])
    ap.add_argument("--config", help="YAML run configuration (defaults when omitted)")
    ap.add_argument("--out", help="output CSV path (stdout when omitted)")
    ap.add_argument("--seed", type=int, help="overrides the config seed")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for day sweeps")
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="KEY=VALUE", help="override a config key, e.g. pv.efficiency=0.3")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _fail(code: int, kind: str, exc: Exception) -> int:
    print(json.dumps({"error": kind, "detail": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        return _fail(EXIT_CONFIG, "config", ConfigError("--jobs must be >= 1"))
    try:
        cfg = load_config(args.config, args.overrides)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)

    try:
        if args.subcommand == "dump-config":
            text = dump_config(cfg)
        else:
            text = run(args.subcommand, cfg, args.jobs)
    except (InfeasibleError, UnstableQueueError) as exc:
        return _fail(EXIT_INFEASIBLE, "infeasible", exc)
    except DomainError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except HapdcError as exc:
        return _fail(EXIT_INFEASIBLE, "infeasible", exc)

    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
