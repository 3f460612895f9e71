"""Command-line front end: generation, bounds, rewiring, fitting, CSV output.

Subcommands cover the whole pipeline: generate random networks, report
assortativity, compute attainable coefficient bounds, solve for a target
edge mixing matrix, rewire toward targets, fit attachment parameters,
attribute assortativity gains to attachment scenarios, and average
replicate traces.

Options may come from flags or from a JSON file given via --config; flags
win over config values, which win over defaults, and unknown config keys
are rejected.  Every run that writes files echoes its effective settings
to <out>.config.json, and re-running from that file reproduces the outputs
byte for byte.  When no seed is supplied anywhere, the DIDPR_SEED
environment variable is used, then 0.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .assortativity import (
    TYPE_PAIRS,
    AssortProfile,
    assortativity,
    assortativity_of_graph,
    read_eta_csv,
    write_eta_csv,
)
from .eta import AssortBounds, coefficient_bounds, problem_from_graph, solve_target_eta
from .fit import fit_ev
from .generate import DpaParams, gen_dpa, gen_er
from .graph import (
    DirectedGraph,
    degree_pair_dist,
    read_edge_labels,
    read_edge_list,
    write_edge_labels,
    write_edge_list,
)
from .rewire import (
    RewiringConfig,
    RewiringTrace,
    read_trace_csv,
    rewire,
    rewire_with_scenario_gains,
)

__all__ = ["main", "main_entry"]


class CliError(Exception):
    """User-facing failure; message goes to stderr, exit code 1."""


# ---------------------------------------------------------------------------
# option schema and config merging
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Opt:
    """One option of one subcommand.

    kind drives both argparse wiring and config-value conversion: str, int,
    float, flag, floats (comma list), targets (exactly four floats), pair
    (a type pair like 11), pairs (comma list of type pairs), paths.
    """

    kind: str
    default: object = None
    required: bool = False
    positional: bool = False
    choices: tuple | None = None
    help: str = ""


_SEED_OPT = _Opt("int", help="RNG seed; falls back to DIDPR_SEED, then 0")
_BACKEND_OPT = _Opt(
    "str", default="auto", choices=("auto", "simplex", "highs"),
    help="LP backend (default auto)",
)
_METHOD_OPT = _Opt(
    "str", default="auto",
    choices=("auto", "center", "entropy", "spread", "vertex"),
    help="mixing-matrix solver (default auto: max entropy, centred on "
         "heavy-tailed inputs, LP fallback)",
)

_DPA_OPTS = {
    "alpha": _Opt("float", help="probability of a new-source step"),
    "beta": _Opt("float", help="probability of an existing-to-existing step"),
    "gamma": _Opt("float", help="probability of a new-target step"),
    "delta_in": _Opt("float", help="in-degree attachment offset"),
    "delta_out": _Opt("float", help="out-degree attachment offset"),
    "edges": _Opt("int", help="number of edges to grow"),
}

_SCHEMAS: dict[str, dict[str, _Opt]] = {
    "generate": {
        "model": _Opt("str", required=True, positional=True,
                      choices=("er", "dpa"), help="network model"),
        "n": _Opt("int", help="node count (er)"),
        "p": _Opt("float", help="edge probability (er)"),
        **_DPA_OPTS,
        "out": _Opt("str", required=True, help="edge-list output path"),
        "seed": _SEED_OPT,
    },
    "assort": {
        "graph": _Opt("str", required=True, positional=True,
                      help="edge-list file"),
        "out": _Opt("str", help="optional JSON output path"),
    },
    "bounds": {
        "graph": _Opt("str", help="edge-list file to take the degree "
                                  "structure from"),
        "model": _Opt("str", choices=("er", "dpa"),
                      help="generate replicate graphs instead of reading one"),
        "n": _Opt("int", help="node count (er)"),
        "p": _Opt("float", help="edge probability (er)"),
        **_DPA_OPTS,
        "pairs": _Opt("pairs", default=((1, 1), (1, 2), (2, 1), (2, 2)),
                      help="type pairs to bound, e.g. 11,22 (default all)"),
        "condition_pair": _Opt("pair",
                               help="type pair pinned while bounding the "
                                    "others, e.g. 11"),
        "condition_values": _Opt("floats",
                                 help="comma list of pinned values, one "
                                      "bounds sweep per value"),
        "replicates": _Opt("int", default=1,
                           help="independent graphs when --model is used"),
        "jobs": _Opt("int", default=1, help="worker processes"),
        "out": _Opt("str", required=True, help="bounds CSV output path"),
        "backend": _BACKEND_OPT,
        "seed": _SEED_OPT,
    },
    "solve-eta": {
        "graph": _Opt("str", required=True, positional=True,
                      help="edge-list file"),
        "targets": _Opt("targets", required=True,
                        help="r11,r12,r21,r22 target values"),
        "out": _Opt("str", required=True, help="mixing-matrix CSV path"),
        "backend": _BACKEND_OPT,
        "method": _METHOD_OPT,
    },
    "rewire": {
        "graph": _Opt("str", required=True, positional=True,
                      help="edge-list file"),
        "targets": _Opt("targets", help="r11,r12,r21,r22 target values"),
        "eta": _Opt("str", help="reuse a solved mixing-matrix CSV instead "
                                "of solving from targets"),
        "steps": _Opt("int", required=True, help="swap proposals to attempt"),
        "checkpoint_every": _Opt("int", default=1000,
                                 help="steps between trace rows"),
        "tolerance": _Opt("float", default=0.05,
                          help="per-coefficient closeness for --stop-early"),
        "stop_early": _Opt("flag", default=False,
                           help="stop once every coefficient is within "
                                "tolerance of its target"),
        "incremental": _Opt("flag", default=False,
                            help="update checkpoint coefficients per "
                                 "accepted swap"),
        "replicates": _Opt("int", default=1, help="independent chains"),
        "jobs": _Opt("int", default=1, help="worker processes"),
        "out": _Opt("str", required=True, help="rewired edge-list path"),
        "trace": _Opt("str", help="trace CSV path (default <out>.trace.csv)"),
        "backend": _BACKEND_OPT,
        "method": _METHOD_OPT,
        "seed": _SEED_OPT,
    },
    "fit": {
        "graph": _Opt("str", required=True, positional=True,
                      help="edge-list file"),
        "n_tail": _Opt("int", required=True,
                       help="joint tail size for the angular fit"),
        "grid_size": _Opt("int", default=21,
                          help="candidate grid resolution for alpha"),
        "sim_edges": _Opt("int", help="edges per candidate simulation "
                                      "(default: observed edge count)"),
        "out": _Opt("str", help="optional JSON output path"),
        "seed": _SEED_OPT,
    },
    "scenario-gains": {
        **_DPA_OPTS,
        "targets": _Opt("targets", required=True,
                        help="r11,r12,r21,r22 target values"),
        "steps": _Opt("int", required=True, help="swap proposals per chain"),
        "checkpoint_every": _Opt("int", default=1000,
                                 help="steps between trace rows"),
        "replicates": _Opt("int", default=1, help="independent runs"),
        "jobs": _Opt("int", default=1, help="worker processes"),
        "out": _Opt("str", required=True, help="gains CSV output path"),
        "backend": _BACKEND_OPT,
        "method": _METHOD_OPT,
        "seed": _SEED_OPT,
    },
    "aggregate": {
        "inputs": _Opt("paths", required=True, positional=True,
                       help="trace CSV files to average"),
        "out": _Opt("str", required=True, help="averaged trace CSV path"),
    },
}

_HELP = {
    "generate": "generate a random network and write its edge list",
    "assort": "report the four assortativity coefficients of a network",
    "bounds": "compute attainable assortativity bounds, optionally "
              "conditioned on pinned coefficients",
    "solve-eta": "solve for an edge mixing matrix realising target "
                 "coefficients",
    "rewire": "rewire a network toward target coefficients, preserving "
              "every degree",
    "fit": "fit attachment-model parameters to an observed network",
    "scenario-gains": "attribute rewiring assortativity gains to "
                      "attachment scenario pairs",
    "aggregate": "average several trace CSVs row by row",
}


def _conv_floats(value) -> tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    return tuple(float(tok) for tok in str(value).split(",") if tok.strip())


def _conv_pair(value) -> tuple[int, int]:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        pair = (int(value[0]), int(value[1]))
    else:
        text = str(value).strip().lstrip("r").replace(",", "")
        if len(text) != 2 or not text.isdigit():
            raise CliError(f"bad type pair {value!r}; expected e.g. 11")
        pair = (int(text[0]), int(text[1]))
    if pair not in TYPE_PAIRS:
        raise CliError(
            f"bad type pair {value!r}; degree types are 1 (out) and 2 (in)"
        )
    return pair


def _convert(key: str, opt: _Opt, value):
    if opt.kind == "str":
        value = str(value)
    elif opt.kind == "int":
        value = int(value)
    elif opt.kind == "float":
        value = float(value)
    elif opt.kind == "flag":
        if not isinstance(value, bool):
            raise CliError(f"{key} must be true or false, got {value!r}")
    elif opt.kind == "floats":
        value = _conv_floats(value)
    elif opt.kind == "targets":
        value = _conv_floats(value)
        if len(value) != 4:
            raise CliError(f"{key} needs four values r11,r12,r21,r22")
    elif opt.kind == "pair":
        value = _conv_pair(value)
    elif opt.kind == "pairs":
        if isinstance(value, str):
            value = [tok for tok in value.split(",") if tok.strip()]
        value = tuple(_conv_pair(v) for v in value)
    elif opt.kind == "paths":
        if isinstance(value, str):
            value = [value]
        value = [str(v) for v in value]
    else:  # pragma: no cover - schema bug
        raise AssertionError(opt.kind)
    if opt.choices is not None and value not in opt.choices:
        raise CliError(
            f"{key} must be one of {', '.join(map(str, opt.choices))}"
        )
    return value


def _load_config_file(path: str, command: str, schema: dict) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise CliError(f"{path}: config must be a JSON object")
    stated = raw.pop("command", None)
    if stated is not None and stated != command:
        raise CliError(f"{path}: config is for '{stated}', not '{command}'")
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise CliError(f"{path}: unknown config keys: {', '.join(unknown)}")
    return raw


def _resolve(args: argparse.Namespace, command: str) -> dict:
    """Merge CLI > config file > schema defaults into one parameter dict."""
    schema = _SCHEMAS[command]
    cfg: dict = {}
    if getattr(args, "config", None):
        cfg = _load_config_file(args.config, command, schema)
    params: dict = {}
    for key, opt in schema.items():
        value = getattr(args, key, None)
        if value in (None, []) and key in cfg:
            value = cfg[key]
        if value in (None, []):
            value = opt.default
        if value is not None:
            value = _convert(key, opt, value)
        params[key] = value
    missing = [k for k, o in schema.items() if o.required and params[k] is None]
    if missing:
        raise CliError(f"missing required options: {', '.join(missing)}")
    if "seed" in schema and params["seed"] is None:
        env = os.environ.get("DIDPR_SEED", "").strip()
        params["seed"] = int(env) if env else 0
    return params


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _echo_config(command: str, params: dict, anchor_path: str) -> None:
    """Write the effective settings next to the primary output.

    The file is itself a valid --config for the same subcommand, so a run
    can be reproduced from it exactly.
    """
    doc = {"command": command}
    for key, value in params.items():
        if value is not None:
            doc[key] = _jsonable(value)
    with open(f"{anchor_path}.config.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _load_graph(path: str) -> DirectedGraph:
    """Read an edge list, attaching the scenario sidecar when present."""
    g = read_edge_list(path)
    sidecar = f"{path}.labels"
    if os.path.exists(sidecar):
        labels = read_edge_labels(sidecar, g.num_edges)
        g = DirectedGraph(g.num_nodes, g.src, g.dst, g.out_deg, g.in_deg,
                          labels)
    return g


def _profile_fields(g: DirectedGraph) -> dict:
    """Four coefficients as a JSON-ready dict; nulls when undefined."""
    fields: dict = {"r11": None, "r12": None, "r21": None, "r22": None}
    if g.num_edges > 0:
        try:
            fields = assortativity_of_graph(g).as_dict()
        except ValueError:
            pass
    return fields


def _require(params: dict, keys: list[str], context: str) -> None:
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise CliError(f"{context} needs: {', '.join(missing)}")


def _dpa_params(params: dict, seed) -> DpaParams:
    _require(params, list(_DPA_OPTS), "the dpa model")
    try:
        return DpaParams(params["alpha"], params["beta"], params["gamma"],
                         params["delta_in"], params["delta_out"],
                         params["edges"], seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _replicate_path(path: str, rep: int, replicates: int) -> str:
    if replicates == 1:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}.r{rep}{ext}"


def _pair_code(pair: tuple[int, int]) -> str:
    return f"{pair[0]}{pair[1]}"


def _print_unattainable(bounds: AssortBounds) -> None:
    print("error: the target coefficients are jointly unattainable for "
          "this degree structure", file=sys.stderr)
    print("attainable range of each coefficient on its own:", file=sys.stderr)
    for a, b in TYPE_PAIRS:
        lo, hi = bounds.get(a, b)
        print(f"  r({a},{b}) in [{lo:.4f}, {hi:.4f}]", file=sys.stderr)


def _solve_eta_or_fail(g: DirectedGraph, targets: AssortProfile,
                       backend: str, method: str):
    eta = solve_target_eta(problem_from_graph(g, targets=targets),
                           backend=backend, method=method)
    if eta is None:
        _print_unattainable(coefficient_bounds(problem_from_graph(g),
                                               backend=backend))
        raise SystemExit(1)
    return eta


def _spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def _map_jobs(worker, jobs_args: list, jobs: int) -> list:
    """Run worker over jobs_args, in order, optionally across processes."""
    if jobs <= 1 or len(jobs_args) <= 1:
        return [worker(a) for a in jobs_args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, jobs_args))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_generate(params: dict) -> int:
    if params["model"] == "er":
        _require(params, ["n", "p"], "the er model")
        try:
            g = gen_er(params["n"], params["p"], params["seed"])
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    else:
        g = gen_dpa(_dpa_params(params, params["seed"]))
    write_edge_list(g, params["out"])
    if g.edge_labels is not None:
        write_edge_labels(g, f"{params['out']}.labels")
    _echo_config("generate", params, params["out"])
    summary = {"nodes": g.num_nodes, "edges": g.num_edges,
               **_profile_fields(g)}
    print(json.dumps(summary))
    return 0


def cmd_assort(params: dict) -> int:
    g = _load_graph(params["graph"])
    if g.num_edges == 0:
        raise CliError("graph has no edges; assortativity undefined")
    profile = assortativity_of_graph(g)
    doc = {"nodes": g.num_nodes, "edges": g.num_edges, **profile.as_dict()}
    print(json.dumps(doc))
    if params["out"]:
        with open(params["out"], "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        _echo_config("assort", params, params["out"])
    return 0


def _bounds_worker(job):
    (graph_path, model, mparams, seed_seq, pairs, cond_pair, cond_values,
     backend) = job
    if graph_path is not None:
        g = _load_graph(graph_path)
    elif model == "er":
        g = gen_er(mparams["n"], mparams["p"], seed_seq)
    else:
        g = gen_dpa(DpaParams(mparams["alpha"], mparams["beta"],
                              mparams["gamma"], mparams["delta_in"],
                              mparams["delta_out"], mparams["edges"],
                              seed_seq))
    problem = problem_from_graph(g)
    rows = []
    for value in cond_values:
        conditioning = None
        if value is not None:
            conditioning = {cond_pair: (value, value)}
        result = coefficient_bounds(problem, order=pairs,
                                    conditioning=conditioning,
                                    backend=backend)
        for pair in pairs:
            lo, hi = result.get(*pair)
            rows.append((
                _pair_code(cond_pair) if value is not None else "",
                f"{value:.12g}" if value is not None else "",
                _pair_code(pair), f"{lo:.12g}", f"{hi:.12g}",
            ))
    return rows


def cmd_bounds(params: dict) -> int:
    if (params["graph"] is None) == (params["model"] is None):
        raise CliError("give exactly one of --graph or --model")
    if params["graph"] is not None and params["replicates"] != 1:
        raise CliError("replicates only make sense with --model")
    if (params["condition_pair"] is None) != (params["condition_values"] is None):
        raise CliError("--condition-pair and --condition-values go together")
    if params["model"] == "er":
        _require(params, ["n", "p"], "the er model")
    elif params["model"] == "dpa":
        _require(params, list(_DPA_OPTS), "the dpa model")

    cond_values = (list(params["condition_values"])
                   if params["condition_values"] is not None else [None])
    replicates = params["replicates"]
    seeds = _spawn_seeds(params["seed"], replicates)
    jobs_args = [
        (params["graph"], params["model"],
         {k: params[k] for k in ("n", "p", *_DPA_OPTS)},
         seeds[rep], params["pairs"], params["condition_pair"], cond_values,
         params["backend"])
        for rep in range(replicates)
    ]
    try:
        per_rep = _map_jobs(_bounds_worker, jobs_args, params["jobs"])
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    with open(params["out"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["conditioned_pair", "conditioned_value", "pair", "lower", "upper"]
        )
        for rows in per_rep:
            writer.writerows(rows)
    _echo_config("bounds", params, params["out"])
    print(json.dumps({"replicates": replicates,
                      "rows": sum(len(r) for r in per_rep),
                      "out": params["out"]}))
    return 0


def cmd_solve_eta(params: dict) -> int:
    g = _load_graph(params["graph"])
    targets = AssortProfile(*params["targets"])
    eta = _solve_eta_or_fail(g, targets, params["backend"], params["method"])
    write_eta_csv(eta, params["out"])
    _echo_config("solve-eta", params, params["out"])
    achieved = assortativity(eta)
    print(json.dumps({"entries": int(np.count_nonzero(eta.H)),
                      **achieved.as_dict()}))
    return 0


def _rewire_worker(job):
    g, eta, cfg = job
    result, trace = rewire(g, eta, cfg)
    return result, trace


def cmd_rewire(params: dict) -> int:
    g = _load_graph(params["graph"])
    targets = (AssortProfile(*params["targets"])
               if params["targets"] is not None else None)
    if params["eta"] is not None:
        eta = read_eta_csv(params["eta"])
    elif targets is not None:
        eta = _solve_eta_or_fail(g, targets, params["backend"],
                                 params["method"])
    else:
        raise CliError("give --targets (to solve for a mixing matrix) "
                       "or --eta (to reuse one)")
    if params["trace"] is None:
        params["trace"] = f"{params['out']}.trace.csv"

    replicates = params["replicates"]
    seeds = _spawn_seeds(params["seed"], replicates)
    jobs_args = []
    for rep in range(replicates):
        cfg = RewiringConfig(
            max_steps=params["steps"],
            checkpoint_every=params["checkpoint_every"],
            tolerance=params["tolerance"],
            stop_early=params["stop_early"],
            seed=seeds[rep],
            targets=targets,
            incremental_r=params["incremental"],
        )
        jobs_args.append((g, eta, cfg))
    try:
        results = _map_jobs(_rewire_worker, jobs_args, params["jobs"])
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    nu_before = degree_pair_dist(g).entries
    reports = []
    for rep, (rewired, trace) in enumerate(results):
        if not (np.array_equal(g.out_deg, rewired.out_deg)
                and np.array_equal(g.in_deg, rewired.in_deg)):
            raise CliError("internal check failed: degrees changed")
        if degree_pair_dist(rewired).entries != nu_before:
            raise CliError("internal check failed: degree-pair "
                           "distribution changed")
        out_path = _replicate_path(params["out"], rep, replicates)
        trace_path = _replicate_path(params["trace"], rep, replicates)
        write_edge_list(rewired, out_path)
        if rewired.edge_labels is not None:
            write_edge_labels(rewired, f"{out_path}.labels")
        trace.to_csv(trace_path)
        report = {"out": out_path, "trace": trace_path,
                  "final": trace.final_profile().as_dict()}
        if targets is not None:
            idx = trace.checkpoints_to_reach(targets, params["tolerance"])
            report["reached_step"] = (trace.checkpoints[idx][0]
                                      if idx is not None else None)
        reports.append(report)
    _echo_config("rewire", params, params["out"])
    print(json.dumps({"edges": g.num_edges, "replicates": reports}))
    return 0


def cmd_fit(params: dict) -> int:
    g = _load_graph(params["graph"])
    try:
        fitted = fit_ev(g, params["n_tail"], grid_size=params["grid_size"],
                        sim_edges=params["sim_edges"], seed=params["seed"])
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    doc = fitted.as_dict()
    print(json.dumps(doc))
    if params["out"]:
        with open(params["out"], "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        _echo_config("fit", params, params["out"])
    return 0


_BUCKET_ORDER = (
    ("alpha", "alpha"), ("alpha", "beta"), ("alpha", "gamma"),
    ("beta", "beta"), ("beta", "gamma"), ("gamma", "gamma"),
)


def _gains_worker(job):
    mparams, targets_t, steps, checkpoint_every, backend, method, seed_seq = job
    gen_seed, chain_seed = seed_seq.spawn(2)
    g = gen_dpa(DpaParams(mparams["alpha"], mparams["beta"], mparams["gamma"],
                          mparams["delta_in"], mparams["delta_out"],
                          mparams["edges"], gen_seed))
    targets = AssortProfile(*targets_t)
    eta = solve_target_eta(problem_from_graph(g, targets=targets),
                           backend=backend, method=method)
    if eta is None:
        raise ValueError("targets unattainable for a generated replicate; "
                         "pick milder targets")
    cfg = RewiringConfig(max_steps=steps, checkpoint_every=checkpoint_every,
                         seed=chain_seed, targets=targets)
    _, _, gains = rewire_with_scenario_gains(g, eta, cfg)
    return gains


def cmd_scenario_gains(params: dict) -> int:
    _require(params, list(_DPA_OPTS), "the dpa model")
    replicates = params["replicates"]
    seeds = _spawn_seeds(params["seed"], replicates)
    mparams = {k: params[k] for k in _DPA_OPTS}
    jobs_args = [
        (mparams, params["targets"], params["steps"],
         params["checkpoint_every"], params["backend"], params["method"],
         seeds[rep])
        for rep in range(replicates)
    ]
    try:
        all_gains = _map_jobs(_gains_worker, jobs_args, params["jobs"])
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    with open(params["out"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replicate", "scenario_pair", "count",
                         "d_r11", "d_r12", "d_r21", "d_r22"])
        for rep, gains in enumerate(all_gains):
            for key in _BUCKET_ORDER:
                count = gains.counts.get(key, 0)
                delta = gains.delta_r.get(
                    key, {"r11": 0.0, "r12": 0.0, "r21": 0.0, "r22": 0.0})
                writer.writerow(
                    [rep, "-".join(key), count]
                    + [f"{delta[f'r{a}{b}']:.12g}" for a, b in TYPE_PAIRS]
                )
            writer.writerow(
                [rep, "total", sum(gains.counts.values())]
                + [f"{gains.total_delta_r[f'r{a}{b}']:.12g}"
                   for a, b in TYPE_PAIRS]
            )
    _echo_config("scenario-gains", params, params["out"])
    print(json.dumps({"replicates": replicates, "out": params["out"]}))
    return 0


def cmd_aggregate(params: dict) -> int:
    traces = []
    for path in params["inputs"]:
        traces.append(read_trace_csv(path))
    steps0 = [row[0] for row in traces[0].checkpoints]
    for path, trace in zip(params["inputs"][1:], traces[1:]):
        if [row[0] for row in trace.checkpoints] != steps0:
            raise CliError(f"{path}: checkpoint steps differ from "
                           f"{params['inputs'][0]}")
    mean_rows = []
    for i, step in enumerate(steps0):
        stack = np.array([trace.checkpoints[i][1:] for trace in traces])
        mean_rows.append((step, *stack.mean(axis=0).tolist()))
    RewiringTrace(mean_rows).to_csv(params["out"])
    _echo_config("aggregate", params, params["out"])
    print(json.dumps({"inputs": len(traces), "rows": len(mean_rows),
                      "out": params["out"]}))
    return 0


_HANDLERS = {
    "generate": cmd_generate,
    "assort": cmd_assort,
    "bounds": cmd_bounds,
    "solve-eta": cmd_solve_eta,
    "rewire": cmd_rewire,
    "fit": cmd_fit,
    "scenario-gains": cmd_scenario_gains,
    "aggregate": cmd_aggregate,
}


# ---------------------------------------------------------------------------
# argparse wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="didpr",
        description="Directed-network assortativity toolkit: generate, "
                    "bound, rewire, fit.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")
    for command, schema in _SCHEMAS.items():
        sp = sub.add_parser(command, help=_HELP[command],
                            description=_HELP[command])
        sp.add_argument("--config",
                        help="JSON file with option values; explicit flags "
                             "win over it")
        for key, opt in schema.items():
            if opt.positional:
                nargs = "*" if opt.kind == "paths" else "?"
                sp.add_argument(key, nargs=nargs, choices=opt.choices,
                                help=opt.help)
                continue
            flag = "--" + key.replace("_", "-")
            if opt.kind == "flag":
                sp.add_argument(flag, dest=key,
                                action=argparse.BooleanOptionalAction,
                                default=None, help=opt.help)
            elif opt.kind in ("int", "float"):
                typ = int if opt.kind == "int" else float
                sp.add_argument(flag, dest=key, type=typ, default=None,
                                help=opt.help)
            else:
                sp.add_argument(flag, dest=key, default=None, help=opt.help)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        params = _resolve(args, args.command)
        return handler(params)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    main_entry()
