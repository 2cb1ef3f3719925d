"""Command-line interface.

Exit codes: 0 success, 1 refuted / failed stage (still a valid run),
2 usage error, 3 I/O error.
"""

from __future__ import annotations

import json
import sys

import click

from .core import Parameters, bit_list, mask_of
from .constructions import (build_H1, build_H1_plus, build_H2, random_extremal,
                            random_graph)
from .extremal import solve_extremal
from .harness import ExperimentConfig, exhaustive_n6_scan, run_campaign
from .hamsearch import (Certificate, check_certificate,
                        find_loose_hamilton_cycle, verify_loose_cycle)
from .io3g import Format3GError, parse_3g, write_3g
from .ytiling import exact_max_y_tiling, greedy_max_y_tiling


@click.group()
@click.option("--seed", type=int, default=0, help="Global RNG seed.")
@click.option("--threads", type=int, default=1, help="Campaign worker count.")
@click.option("--budget", type=int, default=2_000_000,
              help="Search node budget.")
@click.option("--out", "out_default", type=click.Path(), default=None,
              help="Default output path for subcommands.")
@click.pass_context
def main(ctx: click.Context, seed: int, threads: int, budget: int,
         out_default: str | None) -> None:
    ctx.obj = {"seed": seed, "threads": threads, "budget": budget,
               "out": out_default}


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            click.echo(f"I/O error: {exc}", err=True)
            sys.exit(3)
    else:
        click.echo(text)


def _load_graph(path: str):
    try:
        return parse_3g(path)
    except Format3GError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(2)
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        sys.exit(3)


@main.command()
@click.option("--family", required=True,
              type=click.Choice(["h1", "h2", "h1plus", "random", "extremal"]))
@click.option("--n", "n", required=True, type=int)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--beta", type=float, default=0.0005, show_default=True)
@click.option("--seed", type=int, default=None,
              help="Instance seed (defaults to the global seed).")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def gen(ctx, family, n, p, beta, seed, out):
    """Generate an instance and write it as a .3g file."""
    seed = ctx.obj["seed"] if seed is None else seed
    meta = {"family": family, "n": n, "seed": seed}
    try:
        if family == "h1":
            lp = build_H1(n)
        elif family == "h2":
            lp = build_H2(n)
        elif family == "h1plus":
            lp = build_H1_plus(n)
        elif family == "random":
            g = random_graph(n, p, seed)
            meta.update(p=p, edges=g.num_edges)
            lp = None
        else:
            lp = random_extremal(n, beta, seed)
            meta.update(beta=beta, e_in_B=lp.e_in_B)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    g = lp.graph if lp is not None else g
    if lp is not None:
        meta.update(A=bit_list(lp.A), B=bit_list(lp.B), edges=g.num_edges)
        if lp.special_pair:
            meta["special_pair"] = list(lp.special_pair)
    try:
        write_3g(g, out)
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        sys.exit(3)
    click.echo(json.dumps(meta, sort_keys=True))


@main.command()
@click.option("--in", "inp", required=True, type=click.Path())
@click.option("--budget", type=int, default=None)
@click.option("--no-cert", is_flag=True, default=False,
              help="Skip the certificate scan; pure backtracking.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def solve(ctx, inp, budget, no_cert, out):
    """Decide loose Hamiltonicity of a .3g instance."""
    g = _load_graph(inp)
    params = Parameters(rng_seed=ctx.obj["seed"],
                        search_node_budget=budget or ctx.obj["budget"])
    try:
        res = find_loose_hamilton_cycle(g, params,
                                        use_certificates=not no_cert)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _write_json(res.to_dict(), out or ctx.obj["out"])
    sys.exit(0 if res.found else 1)


@main.command("solve-extremal")
@click.option("--in", "inp", required=True, type=click.Path())
@click.option("--beta", type=float, default=0.0005, show_default=True)
@click.option("--eps1", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def solve_extremal_cmd(ctx, inp, beta, eps1, seed, out):
    """Run the constructive extremal-case pipeline on a .3g instance."""
    g = _load_graph(inp)
    try:
        params = Parameters(beta=beta, eps1=eps1,
                            rng_seed=ctx.obj["seed"] if seed is None else seed,
                            search_node_budget=ctx.obj["budget"])
        res = solve_extremal(g, params)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _write_json(res.to_dict(), out or ctx.obj["out"])
    sys.exit(0 if res.found else 1)


@main.command()
@click.option("--in", "inp", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["greedy", "exact"]),
              default="greedy", show_default=True)
@click.option("--budget", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def tile(ctx, inp, mode, budget, out):
    """Compute a Y-tiling (greedy maximal or exact maximum)."""
    g = _load_graph(inp)
    if mode == "greedy":
        tiling = greedy_max_y_tiling(g, seed=ctx.obj["seed"])
        optimal = None
    else:
        tiling, optimal = exact_max_y_tiling(g, budget=budget or ctx.obj["budget"])
    uncovered = bit_list(g.full_mask & ~tiling.vertex_mask)
    payload = {"mode": mode, "size": tiling.size,
               "copies": [list(c.vertices) for c in tiling.copies],
               "uncovered": uncovered}
    if optimal is not None:
        payload["optimal"] = optimal
    _write_json(payload, out or ctx.obj["out"])


@main.command()
@click.option("--in", "inp", required=True, type=click.Path())
@click.option("--result", "result_path", required=True, type=click.Path(),
              help="JSON produced by solve / solve-extremal.")
def verify(inp, result_path):
    """Re-verify a cycle or certificate against its instance."""
    g = _load_graph(inp)
    try:
        with open(result_path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        sys.exit(3)
    except json.JSONDecodeError as exc:
        click.echo(f"bad result file: {exc}", err=True)
        sys.exit(2)
    ok = False
    if "cycle" in payload:
        ok = verify_loose_cycle(g, tuple(payload["cycle"]), spanning=True)
        click.echo(f"cycle: {'valid' if ok else 'INVALID'}")
    elif "certificate" in payload:
        c = payload["certificate"]
        cert = Certificate(c["kind"], mask_of(c["B"]),
                           tuple(c["pair"]) if "pair" in c else None)
        ok = check_certificate(g, cert)
        click.echo(f"certificate: {'valid' if ok else 'INVALID'}")
    else:
        click.echo("result holds neither a cycle nor a certificate")
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", type=click.Path(), default=None,
              help="Override the config's output path.")
@click.pass_context
def campaign(ctx, config_path, out):
    """Run a seeded experiment campaign from a TOML (or JSON) config."""
    try:
        with open(config_path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        sys.exit(3)
    if config_path.endswith(".json"):
        data = json.loads(raw)
    else:
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        data = tomllib.loads(raw.decode("utf-8"))
    try:
        cfg = _config_from_dict(data, ctx.obj, out)
    except (KeyError, ValueError, TypeError) as exc:
        raise click.UsageError(f"bad campaign config: {exc}")
    records = run_campaign(cfg)
    n_bad = sum(1 for r in records if not r.verified)
    click.echo(f"{len(records)} records"
               + (f" ({n_bad} unverified)" if n_bad else "")
               + (f" -> {cfg.out}" if cfg.out else ""))


def _config_from_dict(data: dict, obj: dict, out_override: str | None
                      ) -> ExperimentConfig:
    if "n" in data:
        n_values = list(data["n"])
    elif "n_range" in data:
        start, stop, step = data["n_range"]
        n_values = list(range(start, stop + 1, step))
    else:
        raise KeyError("config needs 'n' (list) or 'n_range' ([start, stop, step])")
    seeds = data.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    return ExperimentConfig(
        campaign=data["campaign"],
        n_values=n_values,
        seeds=list(seeds),
        p=float(data.get("p", 0.55)),
        beta=float(data.get("beta", 0.0005)),
        gamma=float(data.get("gamma", 0.05)),
        budget=int(data.get("budget", obj["budget"])),
        out=out_override or data.get("out"),
        threads=int(data.get("threads", obj["threads"])),
    )


@main.command("scan-n6")
@click.option("--limit", type=int, default=None,
              help="Scan only the first LIMIT subsets (smoke runs).")
@click.option("--out", type=click.Path(), default=None)
def scan_n6(limit, out):
    """Census of all 2^20 3-graphs on six vertices."""
    report = exhaustive_n6_scan(limit=limit, progress=True)
    _write_json(report, out)


if __name__ == "__main__":
    main()
