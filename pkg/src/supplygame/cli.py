"""Command-line front door.

Subcommands:

* ``simulate`` -- run the flow engine standalone and write the weekly
  trajectory of every agent;
* ``cohort``   -- drive scripted bot sessions through the session
  service and leave a directory of event logs plus a manifest;
* ``analyze``  -- run the statistics pipeline over coded comments
  (and optionally a cohort data directory for behavioral profiling);
* ``serve``    -- host the session service over TCP and/or HTTP.

Exit codes: 0 on success, 1 on input errors, 2 when an internal
consistency check fails during the run.
"""

from __future__ import annotations

import argparse
import csv
import sys
from importlib import resources
from pathlib import Path

from supplygame import __version__
from supplygame.errors import SupplyGameError
from supplygame.analysis.agreement import fleiss_kappa, level_rating_matrix
from supplygame.analysis.codebook import (
    SA_LEVELS,
    load_comments_csv,
    load_players_csv,
    majority_vote,
)
from supplygame.analysis.contingency import (
    build_contingency,
    chi_square_independence,
    cramers_v,
    fisher_exact,
    posthoc_bonferroni,
)
from supplygame.analysis.profiling import filter_outliers, load_decision_logs, profile_players
from supplygame.analysis.series import count_ratio_series, word_stats
from supplygame.harness import CohortPlan, run_cohort, run_standalone
from supplygame.protocol import Schedule
from supplygame.service.net import TcpClient, serve_http, serve_tcp
from supplygame.service.service import SessionService
from supplygame.sim.scenario import default_scenario, load_scenario

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK = 2


def _provenance(args: argparse.Namespace) -> str:
    shown = {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}
    return f"# supplygame {__version__} | {args.command} | " + \
        " ".join(f"{k}={v}" for k, v in shown.items())


def _resolve_scenario(path: str | None):
    if path is None or path == "default":
        return default_scenario()
    return load_scenario(path)


def _bundled(name: str) -> Path:
    return Path(str(resources.files("supplygame").joinpath("data", name)))


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    if args.disrupt is not None:
        target = None if args.disrupt == "none" else args.disrupt
        scenario = scenario.with_disruption_target(target)
    reports = run_standalone(scenario, args.weeks)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(_provenance(args) + "\n")
        writer = csv.writer(fh)
        writer.writerow([
            "week", "agent", "receipts", "shipments", "demand", "sales",
            "inventory", "backlog", "holding_cost", "stockout_cost", "revenue",
            "suggestion", "order_placed", "effective_capacity",
        ])
        for rep in reports:
            for aid, r in rep.rows.items():
                writer.writerow([
                    rep.week, aid, r.receipts, r.shipments, r.demand, r.sales,
                    r.inventory_end, r.backlog_end, r.holding_cost,
                    r.stockout_cost, r.revenue, r.suggestion, r.order_placed,
                    "" if r.effective_capacity is None else r.effective_capacity,
                ])
    print(f"wrote {args.weeks} weeks x {len(reports[0].rows)} agents to {out}")
    return EXIT_OK


# ---------------------------------------------------------------- cohort


class _RemoteEndpoint:
    def __init__(self, address: str):
        host, _, port = address.rpartition(":")
        self.client = TcpClient(host or "127.0.0.1", int(port))

    def request(self, message: dict) -> dict:
        return self.client.request(message)


def cmd_cohort(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    plan = CohortPlan.parse(args.mix)
    if plan.total() == 0:
        print("empty cohort mix", file=sys.stderr)
        return EXIT_INPUT
    endpoint = _RemoteEndpoint(args.connect) if args.connect else None
    manifest = run_cohort(plan, args.study, args.out, scenario,
                          base_seed=args.seed, endpoint=endpoint)
    failures = [s for s in manifest["sessions"] if "error" in s]
    bubbles = sum(s.get("bubbles", 0) for s in manifest["sessions"])
    print(f"ran {len(manifest['sessions'])} sessions "
          f"({len(failures)} failed), {bubbles} prompt responses, "
          f"logs in {args.out}")
    return EXIT_CHECK if failures else EXIT_OK


# ---------------------------------------------------------------- analyze


def _write_table(path: Path, header_comment: str, columns: list[str], rows: list):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(header_comment + "\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def _analyze_grouping(name, comments, group_of, row_order, out_dir, provenance,
                      summary, sizes):
    if len(row_order) < 2:
        print(f"{name}: skipped (needs at least two groups)")
        return None
    table = build_contingency(comments, group_of, row_order=row_order)
    result = chi_square_independence(table)
    v = cramers_v(result.statistic, table.n, *table.shape)
    expected = table.expected()

    rows = []
    for i, label in enumerate(table.row_labels):
        for j, level in enumerate(table.col_labels):
            rows.append([label, level, table.counts[i][j], round(expected[i][j], 2)])
    _write_table(out_dir / f"contingency_{name}.csv", provenance,
                 ["group", "sa_level", "count", "expected"], rows)

    cells = posthoc_bonferroni(table)
    _write_table(
        out_dir / f"posthoc_{name}.csv", provenance,
        ["group", "sa_level", "observed", "expected", "residual", "tail_p",
         "sig_05", "sig_01"],
        [[c.row, c.col, c.observed, round(c.expected, 2), round(c.residual, 4),
          f"{c.tail_p:.6g}", int(c.significant_05), int(c.significant_01)]
         for c in cells])

    fisher_p = ""
    if result.low_expected:
        fisher_p = f"{fisher_exact(table).p_value:.4f}"
    summary.append([name, f"{result.statistic:.3f}", result.df,
                    f"{result.p_value:.6g}", f"{v:.3f}",
                    int(result.low_expected), fisher_p])
    print(f"{name}: chi2={result.statistic:.3f} df={result.df} "
          f"p={result.p_value:.4g} V={v:.3f}"
          + (f" fisher_p={fisher_p}" if fisher_p else ""))

    series = count_ratio_series(comments, group_of, sizes)
    srows = []
    weeks = Schedule().meeting_weeks
    for group, by_level in series.items():
        for level, values in by_level.items():
            for week, value in zip(weeks, values):
                srows.append([group, level, week, f"{value:.6g}"])
    _write_table(out_dir / f"count_ratio_{name}.csv", provenance,
                 ["group", "sa_level", "week", "codes_per_player"], srows)

    # consistency: ratios times group size must recover the counts
    for i, group in enumerate(table.row_labels):
        for j, level in enumerate(table.col_labels):
            recovered = round(sum(series[group][level]) * sizes[group])
            if recovered != table.counts[i][j]:
                raise SupplyGameError(
                    f"count-ratio series inconsistent with contingency "
                    f"({group}, {level}): {recovered} != {table.counts[i][j]}")
    return table


def cmd_analyze(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    provenance = _provenance(args)

    comments_path = args.comments
    players_path = args.players
    if args.fixture:
        comments_path = comments_path or _bundled(f"{args.fixture}_codes.csv")
        players_path = players_path or _bundled(f"{args.fixture}_players.csv")
    if comments_path is None or players_path is None:
        print("analyze needs --comments and --players (or --fixture)", file=sys.stderr)
        return EXIT_INPUT

    comments = load_comments_csv(comments_path)
    if not comments:
        print("no data: comments file is empty", file=sys.stderr)
        return EXIT_INPUT
    players = load_players_csv(players_path)

    raters = {c.rater for c in comments}
    if len(raters) > 1:
        matrix, n_raters = level_rating_matrix(comments)
        kappa = fleiss_kappa(matrix, n_raters)
        print(f"inter-rater reliability: Fleiss kappa = {kappa:.3f} "
              f"({n_raters} raters, {len(matrix)} items)")
        (out_dir / "kappa.txt").write_text(
            provenance + f"\nfleiss_kappa,{kappa:.6f}\nraters,{n_raters}\n"
            f"items,{len(matrix)}\n")
        comments = majority_vote(comments)

    missing = {c.player for c in comments} - set(players)
    if missing:
        print(f"players absent from metadata: {sorted(missing)[:5]}", file=sys.stderr)
        return EXIT_INPUT

    def sizes_for(group_of):
        out = {}
        for p in players.values():
            g = group_of.get(p.player)
            if g is not None:
                out[g] = out.get(g, 0) + 1
        return out

    summary = []
    have_profiles = any(p.profile for p in players.values())
    try:
        if have_profiles:
            group = {p: i.profile for p, i in players.items()}
            order = [g for g in ("hoarder", "reactor", "follower")
                     if g in set(group.values())]
            _analyze_grouping("profile", comments, group, order, out_dir,
                              provenance, summary, sizes_for(group))
            for prof in order:
                sub = [c for c in comments if players[c.player].profile == prof]
                sub_group = {p: i.info for p, i in players.items()
                             if i.profile == prof}
                sub_order = sorted(set(sub_group.values()), reverse=True)
                _analyze_grouping(f"info_{prof}", sub, sub_group, sub_order,
                                  out_dir, provenance, summary, sizes_for(sub_group))
        else:
            group_d = {p: i.disruption for p, i in players.items()}
            _analyze_grouping("disruption", comments, group_d,
                              sorted(set(group_d.values())), out_dir, provenance,
                              summary, sizes_for(group_d))
            group_i = {p: i.info for p, i in players.items()}
            order_i = [g for g in ("complete", "partial", "none")
                       if g in set(group_i.values())]
            _analyze_grouping("info", comments, group_i, order_i, out_dir,
                              provenance, summary, sizes_for(group_i))
    except SupplyGameError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK

    stats = word_stats(comments)
    _write_table(out_dir / "word_stats.csv", provenance,
                 ["metric", "value"],
                 [["mean_words", f"{stats.mean_words:.3f}"],
                  ["median_words", stats.median_words],
                  ["iqr_words", stats.iqr_words],
                  ["unanswered_rate", f"{stats.unanswered_rate:.4f}"]]
                 + [[f"mean_words_week_{w}", f"{m:.3f}"]
                    for w, m in stats.per_week_mean.items()])
    print(f"word stats: mean={stats.mean_words:.2f} median={stats.median_words} "
          f"IQR={stats.iqr_words} unanswered={stats.unanswered_rate:.1%}")

    if args.data:
        decisions, complete = load_decision_logs(args.data)
        kept, report = filter_outliers(decisions, complete)
        _write_table(out_dir / "exclusions.csv", provenance,
                     ["player", "reason"], report.reasons())
        result = profile_players(kept, seed=args.seed)
        _write_table(out_dir / "profiles.csv", provenance,
                     ["player", "profile", "cluster"],
                     [[p, result.profiles[p], result.clusters[p]]
                      for p in sorted(result.profiles)])
        print(f"profiled {len(kept)} players "
              f"({len(report.excluded)} excluded as outliers)")

    _write_table(out_dir / "tests_summary.csv", provenance,
                 ["table", "chi2", "df", "p", "cramers_v", "low_expected",
                  "fisher_p"], summary)
    print(f"analysis outputs in {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------- serve


def cmd_serve(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    service = SessionService(scenario, args.data, master_seed=args.seed,
                             idle_expiry_seconds=args.idle_expiry)
    servers = []
    if args.http_port is not None:
        http = serve_http(service, args.host, args.http_port,
                          static_dir=args.static, background=True)
        servers.append(http)
        print(f"http bridge on {args.host}:{http.server_address[1]} (POST /api)", flush=True)
    tcp = serve_tcp(service, args.host, args.port, background=True)
    servers.append(tcp)
    print(f"session service on {args.host}:{tcp.server_address[1]} "
          f"(line protocol), data in {args.data}", flush=True)
    try:
        _wait_forever()
    except KeyboardInterrupt:
        pass
    finally:
        for sv in servers:
            sv.shutdown()
        service.close()
    return EXIT_OK


def _wait_forever():
    import threading
    threading.Event().wait()


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supplygame",
        description="Supply-chain experiment platform: simulate, host sessions, analyze.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a standalone simulation")
    sim.add_argument("--scenario", default=None, help="scenario JSON (default: bundled)")
    sim.add_argument("--weeks", type=int, default=39)
    sim.add_argument("--disrupt", choices=["MN1", "MN2", "none"], default=None,
                     help="override the scenario's disruption target")
    sim.add_argument("--out", default="trajectory.csv")
    sim.set_defaults(func=cmd_simulate)

    coh = sub.add_parser("cohort", help="run scripted bot sessions")
    coh.add_argument("--study", choices=["study1", "study2"], default="study2")
    coh.add_argument("--mix", default="follower=4,hoarder=4,reactor=4",
                     help="label=count[,label=count...]; labels: follower, "
                          "hoarder, reactor, outlier, silent")
    coh.add_argument("--scenario", default=None)
    coh.add_argument("--out", required=True, help="data directory for event logs")
    coh.add_argument("--seed", type=int, default=0)
    coh.add_argument("--connect", default=None,
                     help="host:port of a running service (default: embedded)")
    coh.set_defaults(func=cmd_cohort)

    ana = sub.add_parser("analyze", help="run the statistics pipeline")
    ana.add_argument("--comments", default=None, help="coded-comment CSV")
    ana.add_argument("--players", default=None, help="player metadata CSV")
    ana.add_argument("--fixture", choices=["study1", "study2"], default=None,
                     help="use a bundled sample dataset")
    ana.add_argument("--data", default=None,
                     help="cohort data directory for behavioral profiling")
    ana.add_argument("--out", default="analysis-out")
    ana.add_argument("--seed", type=int, default=0)
    ana.set_defaults(func=cmd_analyze)

    srv = sub.add_parser("serve", help="host the session service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=7337)
    srv.add_argument("--http-port", type=int, default=None,
                     help="also serve the HTTP bridge on this port")
    srv.add_argument("--static", default=None, help="static files for the game UI")
    srv.add_argument("--scenario", default=None)
    srv.add_argument("--data", default="service-data")
    srv.add_argument("--seed", type=int, default=0)
    srv.add_argument("--idle-expiry", type=float, default=None)
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SupplyGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
