"""Batch command-line front end.

Exit status: 0 success, 2 invalid input, 3 budget exceeded, 4 conjecture violated.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .algebra import conv, inflate, is_layered, layers, perm_poset
from .classes import Basis, CountCache, count_avoiders, count_brute, default_cache_path, wilf_classes
from .compositions import INTERPRETATIONS, composition_report, count_123_avoiding_by_cuts
from .conjectures import (VIOLATED, bona_sweep, check_bona, check_burstein, parity_conjectures,
                          stankova_west_crossing)
from .errors import BudgetExceeded, InvalidInput
from .growth import check_supermultiplicative, gr_lower_bound, is_antichain
from .perm import parse_perm
from .recurrence import DEFAULT_MARGIN, fit_recurrence, read_terms, search_recurrence
from .stacksort import (MACHINE_NOTE, count_west_sortable, fibonacci_parity_count, general_sortable,
                        greedy_stack_sort, parity_report, replay, shortest_unsortable, west_sortable)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_VIOLATED = 0, 2, 3, 4

log = logging.getLogger("permlab")


@dataclass
class RunConfig:
    workers: int = 1
    node_limit: int = 2 * 10**9
    search_node_cap: int = 10**8
    cache: str | None = None
    format: str = "plain"
    seed: int = 0
    opt_in_long: bool = False

    def reproducible(self) -> dict:
        """The settings that can change a result. Worker count and cache location cannot."""
        d = asdict(self)
        for k in ("workers", "cache", "format"):
            d.pop(k)
        d["cache_enabled"] = self.cache is not None
        return d


class Result:
    """A subcommand outcome: structured payload, plain-text rendering, exit status."""

    def __init__(self, payload, text: str, status: int = EXIT_OK):
        self.payload = payload
        self.text = text
        self.status = status


def _table(rows, headers) -> str:
    cells = [[str(h) for h in headers]] + [[("" if c is None else str(c)) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ---------------------------------------------------------------- subcommands


def cmd_count(args, cfg, cache):
    basis = Basis.parse(args.basis)
    seq = count_avoiders(basis, args.max_n, workers=cfg.workers, node_limit=cfg.node_limit, cache=cache)
    payload = seq.to_dict()
    payload["antichain"] = basis.is_antichain
    if args.check_brute:
        brute = [count_brute(basis, n) for n in range(1, min(args.max_n, args.check_brute) + 1)]
        payload["brute_force"] = [str(b) for b in brute]
        payload["brute_force_agrees"] = list(seq.terms[:len(brute)]) == brute
    text = f"Av({basis.compact()}): " + ", ".join(map(str, seq.terms))
    if args.check_brute:
        text += f"\nbrute-force filter agrees up to n = {len(brute)}: {payload['brute_force_agrees']}"
    return Result(payload, text)


def cmd_wilf(args, cfg, cache):
    sources = args.patterns or ([args.basis] if args.basis else [])
    if not sources:
        raise InvalidInput("no patterns given")
    if args.bases:
        items = [Basis.parse(p) for p in sources]
    else:
        items = [Basis([q]) for p in sources for q in Basis.parse(p)]
    part = wilf_classes(items, args.max_n, workers=cfg.workers, cache=cache)
    lines = [f"{len(part)} class{'' if len(part) == 1 else 'es'} (equal counting sequences up to n = {args.max_n})"]
    for terms, members in part.classes:
        lines.append("  " + " ".join(m.compact() for m in members) + "  :  " + ", ".join(map(str, terms)))
    return Result(part.to_dict(), "\n".join(lines))


def cmd_conv(args, cfg, cache):
    p = parse_perm(args.perm)
    c = conv(p)
    poset = perm_poset(p)
    payload = {"perm": str(p), "conv": str(c), "layers": layers(c), "rank": list(poset.rank[1:]),
               "covers": [list(e) for e in poset.covers()], "is_layered": is_layered(p)}
    text = c.compact()
    if args.poset:
        text += "\n" + poset.export()
    return Result(payload, text)


def cmd_inflate(args, cfg, cache):
    skel = parse_perm(args.skeleton)
    blocks = [parse_perm(b) for b in args.blocks]
    q = inflate(skel, blocks)
    return Result({"skeleton": str(skel), "blocks": [str(b) for b in blocks], "result": str(q)}, str(q))


def cmd_stack(args, cfg, cache):
    a = args.action
    if a == "sort":
        p = parse_perm(args.perm)
        out = p
        for _ in range(args.stacks):
            out = greedy_stack_sort(out)
        return Result({"perm": str(p), "passes": args.stacks, "output": str(out),
                       "west_sortable": west_sortable(p, args.stacks)}, out.compact())
    if a == "count-west":
        c = count_west_sortable(args.max_len, args.stacks, workers=cfg.workers)
        return Result({"n": args.max_len, "stacks": args.stacks, "count": str(c)}, str(c))
    if a == "parity":
        rows = parity_report(args.stacks, args.max_len, workers=cfg.workers)
        bad = any(r.mismatch for r in rows)
        text = _table([(r.n, r.count, r.parity, r.predicted or "-", "MISMATCH" if r.mismatch else "")
                       for r in rows], ["n", "count", "parity", "predicted", ""])
        return Result({"stacks": args.stacks, "rows": [r.to_dict() for r in rows]}, text,
                      EXIT_VIOLATED if bad else EXIT_OK)
    if a == "fibonacci":
        rows = [fibonacci_parity_count(m) for m in range(1, args.max_len + 1)]
        payload = [{"m": m, "count": c, "fibonacci": f} for m, (c, f) in enumerate(rows, start=1)]
        return Result(payload, _table([(d["m"], d["count"], d["fibonacci"]) for d in payload],
                                      ["m", "count", "F_m"]))
    if a == "general":
        p = parse_perm(args.perm)
        res = general_sortable(p, args.stacks, node_cap=cfg.search_node_cap)
        if res.sortable is None:
            raise BudgetExceeded(f"search for {p} exceeded {cfg.search_node_cap} nodes")
        payload = {"perm": str(p), "stacks": args.stacks, "sortable": res.sortable,
                   "witness": [list(m) for m in res.witness] if res.witness else None,
                   "witness_replays": replay(p, args.stacks, res.witness) if res.witness else None,
                   "machine": MACHINE_NOTE}
        return Result(payload, "sortable" if res.sortable else "unsortable")
    if a == "shortest-unsortable":
        s = shortest_unsortable(args.stacks, args.max_len, node_cap=cfg.search_node_cap,
                                workers=cfg.workers)
        if s.length is None:
            text = f"none up to {args.max_len}"
        else:
            text = f"length {s.length}, {len(s.perms)} permutations\n" + "\n".join(p.compact() for p in s.perms)
        return Result(s.to_dict(), text + f"\n[{MACHINE_NOTE}]")
    raise InvalidInput(f"unknown stack action {a!r}")


def cmd_growth(args, cfg, cache):
    basis = Basis.parse(args.basis)
    est = gr_lower_bound(basis, args.max_n, workers=cfg.workers, cache=cache)
    d = est.to_dict()
    text = _table([(r["n"], r["count"], r["root"], r["ratio"] or "-") for r in d["rows"]],
                  ["n", "s_n", "s_n^(1/n)", "s_n/s_(n-1)"])
    text += f"\nlower bound {d['lower_bound']} ({d['label']})"
    if d["reference"]:
        text += f"; reference growth rate {d['reference']}"
    return Result(d, text + f"\n{d['note']}")


def cmd_supermult(args, cfg, cache):
    rep = check_supermultiplicative(parse_perm(args.basis), args.max_n, seed=cfg.seed,
                                    workers=cfg.workers, cache=cache)
    text = f"supermultiplicative up to M = {args.max_n}: {rep.holds} ({rep.construction} witness, " \
           f"{rep.witness_samples} samples)"
    return Result(rep.to_dict(), text, EXIT_OK if rep.holds else EXIT_VIOLATED)


def cmd_antichain(args, cfg, cache):
    res = is_antichain(Basis.parse(args.basis))
    payload = {"antichain": res.is_antichain,
               "pair": None if res.pair is None else [str(x) for x in res.pair]}
    text = "antichain" if res else f"not an antichain: {res.pair[0]} contains {res.pair[1]}"
    return Result(payload, text)


def cmd_fit(args, cfg, cache):
    terms = read_terms(args.file, basis=args.basis)
    if args.search:
        res = search_recurrence(terms, args.order, args.degree, margin=args.margin, offset=args.offset)
        text = res.message + (f"\n{res.recurrence}" if res.recurrence else "")
        return Result(res.to_dict(), text)
    res = fit_recurrence(terms, args.order, args.degree, margin=args.margin, offset=args.offset)
    text = str(res.recurrence) if res.recurrence else \
        f"none: no recurrence of order {args.order} and degree {args.degree} fits {len(terms)} terms"
    return Result(res.to_dict(), text + f"\n(N = {res.N}, order {res.order}, degree {res.degree}, "
                                        f"margin {res.margin}, nullity {res.nullity})")


def cmd_compositions(args, cfg, cache):
    rep = composition_report(args.max_n, INTERPRETATIONS)
    d = rep.to_dict()
    if args.check_cuts:
        cuts = count_123_avoiding_by_cuts(args.max_n)
        d["cut_generation"] = [str(c) for c in cuts]
        d["cut_generation_agrees"] = cuts == rep.brute
    headers = ["n", "brute"] + list(INTERPRETATIONS)
    rows = [[r["n"], r["brute_force"]] + [
        "n/a" if r[k] is None else f"{r[k]}{'' if r[k + '_match'] else ' *'}" for k in INTERPRETATIONS]
        for r in d["rows"]]
    text = _table(rows, headers) + "\n(* coefficient differs from brute force; n/a: interpretation inapplicable)"
    for k, s in rep.series.items():
        if not s.applicable:
            text += f"\n{k}: {s.reason}"
    return Result(d, text)


def cmd_conjecture(args, cfg, cache):
    cid = args.id
    kw = dict(workers=cfg.workers, cache=cache)
    if cid == "burstein":
        rep = check_burstein(args.variant, args.sigma or [], args.max_n, t=args.t,
                             skeleton=args.skeleton, **kw)
    elif cid == "bona":
        if args.perm:
            rep = check_bona(parse_perm(args.perm), args.max_n, **kw)
        else:
            rep = bona_sweep(args.k, args.max_n, **kw)
    elif cid == "stankova-west":
        rep = stankova_west_crossing(args.max_n, opt_in_long=cfg.opt_in_long, **kw)
    elif cid == "parity":
        rep = parity_conjectures(workers=cfg.workers)
    else:
        raise InvalidInput(f"unknown conjecture {cid!r}")
    d = rep.to_dict()
    lines = [f"{rep.id}: {rep.verdict}", f"range: {json.dumps(rep.range, sort_keys=True)}"]
    for w in rep.witnesses:
        lines.append(f"witness: {json.dumps(w, sort_keys=True)}")
    for k, v in rep.counts.items():
        lines.append(f"{k}: " + ", ".join(map(str, v)))
    lines += [f"note: {x}" for x in rep.interpretation_notes]
    return Result(d, "\n".join(lines), EXIT_VIOLATED if rep.verdict == VIOLATED else EXIT_OK)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--cache", default=None,
                        help="count cache file (default: $PERMLAB_CACHE or ~/.cache/permlab/counts.jsonl)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the count cache")
    common.add_argument("--format", choices=["plain", "structured"], default="plain")
    common.add_argument("--opt-in-long", action="store_true", help="allow checks that run for a long time")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled cross-checks")
    common.add_argument("--node-limit", type=int, default=2 * 10**9, help="enumeration node budget")
    common.add_argument("--search-node-cap", type=int, default=10**8,
                        help="per-permutation node cap for general stack sorting")
    common.add_argument("--timing", action="store_true",
                        help="add wall time, worker count and cache location to the output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(
        prog="permlab", description="Permutation-pattern enumeration and conjecture checks.",
        epilog="Environment: PERMLAB_CACHE overrides the default count cache path. "
               "Exit status: 0 ok, 2 invalid input, 3 budget exceeded, 4 conjecture violated.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="count Av(B) for n = 1..N")
    s.add_argument("--basis", required=True, help='patterns separated by ";" e.g. "132" or "53241;43251"')
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--check-brute", type=int, default=0, metavar="N",
                   help="also filter all n! permutations up to this n")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("wilf", parents=[common], help="group patterns by counting sequence up to N")
    s.add_argument("patterns", nargs="*", help="patterns (each may hold several, separated by ';')")
    s.add_argument("--basis", default="", help="alternative to positional patterns")
    s.add_argument("--all", type=int, metavar="K", help="use every pattern of length K")
    s.add_argument("--bases", action="store_true", help="treat each argument as one multi-pattern basis")
    s.add_argument("--max-n", type=int, required=True)
    s.set_defaults(func=cmd_wilf)

    s = sub.add_parser("conv", parents=[common], help="layered hull of a permutation's poset")
    s.add_argument("perm")
    s.add_argument("--poset", action="store_true", help="also print cover relations and ranks")
    s.set_defaults(func=cmd_conv)

    s = sub.add_parser("inflate", parents=[common], help="inflate a skeleton by blocks")
    s.add_argument("skeleton")
    s.add_argument("blocks", nargs="+")
    s.set_defaults(func=cmd_inflate)

    s = sub.add_parser("stack", parents=[common], help="stack sorting")
    s.add_argument("action", choices=["sort", "count-west", "parity", "fibonacci", "general",
                                      "shortest-unsortable"])
    s.add_argument("perm", nargs="?")
    s.add_argument("--stacks", type=int, default=1)
    s.add_argument("--max-len", type=int, default=7)
    s.set_defaults(func=cmd_stack)

    s = sub.add_parser("growth", parents=[common], help="finite-n growth-rate proxies")
    s.add_argument("--basis", required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("supermult", parents=[common], help="check s_(m+n) >= s_m s_n")
    s.add_argument("--basis", required=True, help="a single pattern")
    s.add_argument("--max-n", type=int, required=True, help="bound M on m + n")
    s.set_defaults(func=cmd_supermult)

    s = sub.add_parser("antichain", parents=[common], help="test whether a set is an antichain")
    s.add_argument("--basis", required=True)
    s.set_defaults(func=cmd_antichain)

    s = sub.add_parser("fit", parents=[common], help="fit or search a P-recurrence to a sequence file")
    s.add_argument("--file", required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--margin", type=int, default=DEFAULT_MARGIN)
    s.add_argument("--offset", type=int, default=1, help="index of the first term")
    s.add_argument("--search", action="store_true", help="search all (order, degree) up to the given maxima")
    s.add_argument("--basis", default=None, help="select a basis when reading a count cache")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("compositions", parents=[common], help="123-avoiding compositions vs the series")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--check-cuts", action="store_true", help="cross-check with a second generation order")
    s.set_defaults(func=cmd_compositions)

    s = sub.add_parser("conjecture", parents=[common], help="run a conjecture checker")
    s.add_argument("id", choices=["burstein", "bona", "stankova-west", "parity"])
    s.add_argument("--variant", default="1", choices=["1", "2", "3", "nonlayered"])
    s.add_argument("--sigma", action="append", help="inflation block (repeatable)")
    s.add_argument("--skeleton", default=None)
    s.add_argument("--t", type=int, default=2)
    s.add_argument("--perm", default=None, help="single permutation for bona (default: sweep S_k)")
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--max-n", type=int, default=8)
    s.set_defaults(func=cmd_conjecture)
    return p


def _config(args) -> RunConfig:
    cache = None if args.no_cache else str(args.cache or default_cache_path())
    return RunConfig(workers=max(1, args.workers), node_limit=args.node_limit,
                     search_node_cap=args.search_node_cap, cache=cache, format=args.format,
                     seed=args.seed, opt_in_long=args.opt_in_long)


def _arguments(args) -> dict:
    skip = {"func", "workers", "cache", "no_cache", "format", "opt_in_long", "seed", "node_limit",
            "search_node_cap", "timing", "verbose", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "wilf" and args.all:
        from itertools import permutations
        args.patterns = ["".join(map(str, p)) if args.all < 10 else ",".join(map(str, p))
                         for p in permutations(range(1, args.all + 1))]
    if args.command == "stack" and args.action in ("sort", "general") and not args.perm:
        parser.error(f"stack {args.action} needs a permutation")
    cfg = _config(args)
    cache = CountCache(cfg.cache) if cfg.cache else None
    t0 = time.perf_counter()
    try:
        res = args.func(args, cfg, cache)
    except InvalidInput as e:
        print(f"permlab: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as e:
        msg = f"permlab: budget exceeded: {e}"
        if e.partial is not None:
            msg += f" (verified before the limit: {e.partial})"
        print(msg, file=sys.stderr)
        return EXIT_BUDGET
    elapsed = time.perf_counter() - t0
    if cfg.format == "structured":
        doc = {"command": args.command, "arguments": _arguments(args), "config": cfg.reproducible(),
               "result": res.payload, "exit_status": res.status}
        if args.timing:
            doc["runtime"] = {"seconds": round(elapsed, 3), "workers": cfg.workers, "cache": cfg.cache}
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(res.text)
        if args.timing:
            print(f"[{elapsed:.2f}s, workers={cfg.workers}, cache={cfg.cache}]", file=sys.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
