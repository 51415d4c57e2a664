"""Command-line interface.

Subcommands cover the whole pipeline: generate a construction (with its
replayable certificate), check a graph by exhaustive search or structural
statistics, verify or cross-validate a certificate, decompose a qualifying
graph back into a certificate, convert list-coloring instances to and from
cover graphs, and export DOT or figure/CSV reports.

Exit codes form a small protocol so scripts can branch on outcomes:

* 0 — success (for ``check it``: an independent transversal exists and is
  printed);
* 1 — for ``check it``: exhaustively proven that no IT exists; for
  ``certify``: the certificate is invalid (a base piece has an IT, a step's
  preconditions fail, or the replay does not match ``--against``);
* 2 — invalid input: malformed files, bad parameters, or an operation's
  requirements not met (printed as one JSON object on stderr);
* 3 — a search budget was exhausted before the question was decided.

All outputs are deterministic: the same invocation writes byte-identical
files and prints byte-identical JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import certify as cert_mod
from . import construct, decompose, listcover
from .errors import (
    BaseBudgetExceeded,
    BudgetExceededError,
    CertificateError,
    InvalidInput,
    NoitError,
)
from .graph import (
    PartitionedGraph,
    components,
    graph_stats,
    load_graph,
    save_graph,
)
from .transversal import ITStatus, SearchBudget, find_it, is_block_minimal

# == generator registry ======================================================

# family name -> (builder(args) -> (graph, certificate | None, extra_json))


def _need(args: argparse.Namespace, *names: str) -> list[int]:
    values = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            raise InvalidInput(f"family '{args.family}' requires --{name}")
        values.append(value)
    return values


def _build_family(args: argparse.Namespace):
    fam = args.family
    if fam == "complete-bipartite":
        (d,) = _need(args, "d")
        return construct.gen_complete_bipartite(d, d), None, {}
    if fam == "szabo-tardos":
        (d,) = _need(args, "d")
        g, c = construct.gen_szabo_tardos(d)
        return g, c, {}
    if fam == "yuster":
        (d,) = _need(args, "d")
        g, c = construct.gen_yuster(d)
        return g, c, {}
    if fam == "cycle":
        (r,) = _need(args, "r")
        g, c = construct.gen_cycle_partition(r)
        return g, c, {}
    if fam == "three-cycles":
        l1, l2, l3 = _need(args, "l1", "l2", "l3")
        g, c = construct.gen_three_cycles(l1, l2, l3)
        return g, c, {}
    if fam == "multipartite":
        r, m = _need(args, "r", "m")
        return construct.gen_multipartite_base(r, m), None, {}
    if fam == "locally-sparse":
        d, m = _need(args, "d", "m")
        g, c = construct.gen_locally_sparse(d, m)
        return g, c, {}
    if fam == "list-coloring":
        (d,) = _need(args, "d")
        g, c = construct.gen_list_coloring_cx(d)
        return g, c, {}
    if fam == "star-free":
        k, m = _need(args, "k", "m")
        g, c, report = construct.gen_star_free_cx(k, m)
        return g, c, {"report": report.to_json_dict()}
    if fam == "ahhs":
        (d,) = _need(args, "d")
        g, c = construct.gen_ahhs_cx(d)
        return g, c, {}
    if fam == "general-szabo-tardos":
        n, r = _need(args, "n", "r")
        g, c = construct.gen_general_szabo_tardos(n, r)
        return g, c, {}
    raise InvalidInput(f"unknown family '{fam}'")


FAMILIES = (
    "complete-bipartite",
    "szabo-tardos",
    "yuster",
    "cycle",
    "three-cycles",
    "multipartite",
    "locally-sparse",
    "list-coloring",
    "star-free",
    "ahhs",
    "general-szabo-tardos",
)


# == helpers =================================================================


def _budget(args: argparse.Namespace) -> SearchBudget | None:
    nodes = getattr(args, "budget", None)
    if nodes is None:
        return None
    return SearchBudget(max_nodes=nodes)


def _print(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)


def _export_dot(g: PartitionedGraph, path: str) -> None:
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(components(g)):
        for v in comp.vertices:
            comp_of[v] = ci
    lines = ["graph G {", "  node [style=filled];"]
    for b in range(g.r):
        lines.append(f"  subgraph cluster_{b} {{")
        lines.append(f'    label="block {b}";')
        for v in sorted(g.blocks[b]):
            color = _PALETTE[comp_of[v] % len(_PALETTE)]
            label = g.labels[v] if g.labels is not None else str(v)
            lines.append(f'    v{v} [label="{label}", fillcolor="{color}"];')
        lines.append("  }")
    for (u, v) in g.sorted_edges():
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _report(g: PartitionedGraph, prefix: str) -> dict:
    from .figures import render_graph

    stats = graph_stats(g)
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(components(g)):
        for v in comp.vertices:
            comp_of[v] = ci
    csv_path = prefix + ".csv"
    png_path = prefix + ".png"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["block", "size", "min_degree", "max_degree", "components_met"]
        )
        for b in range(g.r):
            vs = sorted(g.blocks[b])
            degs = [g.degree(v) for v in vs]
            comps_met = len({comp_of[v] for v in vs})
            writer.writerow([b, len(vs), min(degs), max(degs), comps_met])
    render_graph(g, png_path, title=f"n={g.n}, r={g.r}")
    return {
        "csv": csv_path,
        "png": png_path,
        "stats": stats.to_json_dict(),
    }


# == subcommand implementations =============================================


def _cmd_gen(args: argparse.Namespace) -> int:
    g, cert, extra = _build_family(args)
    if args.cert is not None and cert is None:
        raise InvalidInput(
            f"family '{args.family}' has no certificate (its no-IT argument "
            f"is direct); omit --cert"
        )
    save_graph(g, args.output)
    out = {"family": args.family, "n": g.n, "r": g.r, "output": args.output}
    out.update(extra)
    if args.cert is not None:
        assert cert is not None
        cert_mod.save_certificate(cert, args.cert)
        out["cert"] = args.cert
    _print(out)
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.what == "it":
        res = find_it(g, _budget(args))
        out: dict = {"status": res.status.value, "nodes": res.nodes}
        if res.status is ITStatus.FOUND:
            assert res.transversal is not None
            out["transversal"] = res.transversal.to_json_list()
            _print(out)
            return 0
        _print(out)
        return 1 if res.status is ITStatus.NONE else 3
    if args.what == "minimal":
        _print({"block_minimal": is_block_minimal(g, _budget(args))})
        return 0
    if args.what == "stats":
        _print(graph_stats(g).to_json_dict())
        return 0
    if args.what == "listcover":
        a, b = listcover.check_list_cover_conditions(g)
        _print({"multiplicity_one": a, "adjacency_consistent": b})
        return 0
    if args.what == "abc":
        a, b, c = decompose.check_abc(g, _budget(args))
        _print(
            {
                "block_minimal": a,
                "complete_bipartite_union": b,
                "components_r_minus_1": c,
            }
        )
        return 0
    raise InvalidInput(f"unknown check '{args.what}'")


def _cmd_certify(args: argparse.Namespace) -> int:
    cert = cert_mod.load_certificate(args.cert)
    base_budget = None
    if args.base_budget is not None:
        base_budget = SearchBudget(max_nodes=args.base_budget)
    if args.cross_validate:
        out = cert_mod.cross_validate(cert, _budget(args), base_budget)
        final_n, final_r = out["n"], out["r"]
        result = {
            "valid": True,
            "cross_validated": bool(out["agrees"]),
            "n": final_n,
            "r": final_r,
            "search_nodes": out["search_nodes"],
            "steps": len(out["steps"]),
        }
    else:
        final, report = cert_mod.verify_certificate(cert, base_budget)
        result = {
            "valid": True,
            "n": final.n,
            "r": final.r,
            "steps": len(report),
        }
    if args.against is not None:
        g = load_graph(args.against)
        if not cert_mod.replays_to(cert, g):
            sys.stderr.write(
                json.dumps(
                    {
                        "error": "ReplayMismatch",
                        "message": "certificate does not replay to the given graph",
                    }
                )
                + "\n"
            )
            return 1
        result["matches"] = args.against
    _print(result)
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    cert = decompose.decompose_to_certificate(g, _budget(args))
    cert_mod.save_certificate(cert, args.output)
    _print({"steps": len(cert.steps), "output": args.output})
    return 0


def _cmd_cover(args: argparse.Namespace) -> int:
    inst = listcover.load_instance(args.instance)
    g = listcover.cover_graph(inst)
    save_graph(g, args.output)
    _print(
        {
            "n": g.n,
            "r": g.r,
            "max_color_degree": listcover.max_color_degree(inst),
            "output": args.output,
        }
    )
    return 0


def _cmd_recover(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    inst = listcover.recover_instance(g)
    listcover.save_instance(inst, args.output)
    _print(
        {
            "n": inst.n,
            "list_sizes": sorted({len(l) for l in inst.lists}),
            "max_color_degree": listcover.max_color_degree(inst),
            "output": args.output,
        }
    )
    return 0


def _cmd_export_dot(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    _export_dot(g, args.output)
    _print({"output": args.output})
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    out = _report(g, args.output)
    _print(out)
    return 0


# == parser ==================================================================


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="noit",
        description="Construct, check, certify, and decompose vertex-"
        "partitioned graphs with no independent transversal.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a construction family")
    g.add_argument("family", choices=FAMILIES)
    for flag in ("d", "m", "k", "n", "r", "l1", "l2", "l3"):
        g.add_argument(f"--{flag}", type=int, default=None)
    g.add_argument("-o", "--output", required=True, help="graph JSON path")
    g.add_argument("--cert", default=None, help="also write the certificate here")
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("check", help="run a check on a graph file")
    c.add_argument("what", choices=("it", "minimal", "stats", "listcover", "abc"))
    c.add_argument("graph")
    c.add_argument("--budget", type=int, default=None, help="search node budget")
    c.set_defaults(func=_cmd_check)

    v = sub.add_parser("certify", help="verify a certificate file")
    v.add_argument("cert")
    v.add_argument("--against", default=None, help="graph JSON the replay must match")
    v.add_argument(
        "--cross-validate",
        action="store_true",
        help="also search the final graph exhaustively and compare verdicts",
    )
    v.add_argument("--budget", type=int, default=None, help="final-search node budget")
    v.add_argument(
        "--base-budget", type=int, default=None, help="per-base-piece node budget"
    )
    v.set_defaults(func=_cmd_certify)

    d = sub.add_parser("decompose", help="decompose a qualifying graph")
    d.add_argument("graph")
    d.add_argument("-o", "--output", required=True, help="certificate JSON path")
    d.add_argument("--budget", type=int, default=None)
    d.set_defaults(func=_cmd_decompose)

    co = sub.add_parser("cover", help="list instance -> cover graph")
    co.add_argument("instance")
    co.add_argument("-o", "--output", required=True)
    co.set_defaults(func=_cmd_cover)

    re = sub.add_parser("recover", help="cover graph -> list instance")
    re.add_argument("graph")
    re.add_argument("-o", "--output", required=True)
    re.set_defaults(func=_cmd_recover)

    e = sub.add_parser("export-dot", help="write DOT with block clusters")
    e.add_argument("graph")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=_cmd_export_dot)

    rp = sub.add_parser(
        "report", help="write per-block CSV and a PNG figure for a graph"
    )
    rp.add_argument("graph")
    rp.add_argument(
        "-o", "--output", required=True, help="output prefix (.csv/.png appended)"
    )
    rp.set_defaults(func=_cmd_report)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BaseBudgetExceeded as exc:
        _err(exc)
        return 3
    except BudgetExceededError as exc:
        _err(exc)
        return 3
    except CertificateError as exc:
        _err(exc)
        return 1
    except InvalidInput as exc:
        _err(exc)
        return 2
    except NoitError as exc:
        _err(exc)
        return 2
    except OSError as exc:
        _err(exc)
        return 2


def _err(exc: Exception) -> None:
    sys.stderr.write(
        json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    )


if __name__ == "__main__":
    sys.exit(main())
