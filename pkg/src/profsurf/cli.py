"""Command-line driver.

Every command prints one JSON report (or a CSV table with ``--csv``).  Exit
codes: 0 solved / success, 1 no solution, 2 invalid input, 3 cap breach.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from . import fingroup
from .cosetenum import abelianization_invariants, reidemeister_schreier, todd_coxeter
from .diamond import (check_index_conditions, check_modL_conditions, constrained_epi_search,
                      minimal_r, obstruction_scan, quotient_assignment, Ambient, DiamondInstance,
                      Preimage)
from .embedding import (brute_solve, genus_bound, lemma23_frontier, pigeonhole_solve, random_fsep,
                        split_problem)
from .fingroup import CapExceeded, GroupAction, GroupError, Perm
from .groupexpr import GroupExprError, elaborate, pick_action
from .surface import (ParseError, SurfaceAssignment, enumerate_representations, first_surjection,
                      hom_count_character_sum, hom_count_convolution, parse_word)
from .wreath import _nu_from_values, induce_problem, restrict_solution

SCHEMA = "profsurf.report/1"

EXIT_OK, EXIT_NONE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def read_spec_file(path, allowed):
    """``key: value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise InputError(f"{path}:{n}: expected 'key: value'")
            key, value = (s.strip() for s in line.split(":", 1))
            if key not in allowed:
                raise InputError(f"{path}:{n}: unknown key {key!r}")
            if key in out:
                raise InputError(f"{path}:{n}: duplicate key {key!r}")
            out[key] = value
    return out


def parse_element(text, G):
    """An element of ``G``: ``e``, ``k`` (the k-th generator), a word in
    ``g1, g2, ...`` or permutation cycles."""
    text = text.strip()
    if text == "e":
        return G.e
    if re.fullmatch(r"\d+", text):
        k = int(text)
        if not 1 <= k <= len(G.generators):
            raise InputError(f"generator number {k} out of range 1..{len(G.generators)}")
        return G.gen_indices[k - 1]
    if text.startswith("("):
        p = Perm.parse(text)
        if not isinstance(G.identity, Perm):
            raise InputError("permutation given for a non-permutation group")
        d = G.identity.degree
        if p.degree > d:
            raise InputError(f"permutation {text} moves points beyond degree {d}")
        return G.index(Perm(list(p.images) + list(range(p.degree, d))))
    labels = [f"g{i + 1}" for i in range(len(G.generators))]
    word = parse_word(text, labels)
    acc = G.e
    for letter in word:
        s = G.gen_indices[abs(letter) - 1]
        acc = G.mul(acc, s if letter > 0 else G.inv(s))
    return acc


def parse_mu(text, genus, B):
    """``x1=1 y1=e x2=g1*g2^-1 ...``; unnamed generators map to the identity."""
    labels = [f"{c}{i}" for i in range(1, genus + 1) for c in "xy"]
    idx = [B.e] * (2 * genus)
    if text is None:
        asg = first_surjection(genus, B)
        if asg is None:
            raise InputError(f"no surjection from genus {genus} onto {B.name}")
        return asg
    parts = list(re.finditer(r"([xy]\d+)\s*=", text))
    if not parts and text.strip():
        raise InputError(f"cannot read assignment {text!r}")
    for n, m in enumerate(parts):
        end = parts[n + 1].start() if n + 1 < len(parts) else len(text)
        value = text[m.end():end].strip().rstrip(",").strip()
        name = m.group(1)
        if name not in labels:
            raise InputError(f"unknown generator {name} for genus {genus}")
        try:
            idx[labels.index(name)] = parse_element(value, B)
        except (ParseError, GroupError) as exc:
            raise InputError(f"bad value for {name}: {exc}") from None
    return SurfaceAssignment.from_indices(B, idx)


def element_list(G, idx):
    return [str(G.elements[i]) for i in idx]


def subgroup_from_text(text, G):
    gens = [parse_element(t, G) for t in text.split(",") if t.strip()]
    return G.subgroup(indices=gens)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def make_report(args, command, inputs, results, witnesses=None, timings=None):
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "seed": args.seed,
        "results": results,
        "witnesses": witnesses or [],
    }
    if args.timings:
        report["timings"] = timings or {}
    return report


def emit(args, report, table=None):
    if args.csv and table is not None:
        buf = io.StringIO()
        if table:
            fields = list(dict.fromkeys(k for row in table for k in row))
            writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            writer.writerows(table)
        text = buf.getvalue()
    else:
        text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")


def run_jobs(fn, tasks, jobs):
    """Ordered map; the worker count never changes the result order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _solution_dict(sol, group):
    if sol is None:
        return {"found": False}
    return {"found": True, "kind": sol.kind, "path": sol.path, "images": element_list(group, sol.psi.idx)}


def cmd_solve_fsep(args):
    spec = {}
    if args.file:
        spec = read_spec_file(args.file, {"genus", "A", "B", "action", "mu"})
    genus = int(spec.get("genus", args.genus or 0))
    if genus < 1:
        raise InputError("genus must be at least 1")
    A = elaborate(spec.get("A", args.A))
    B = elaborate(spec.get("B", args.B))
    action = pick_action(spec.get("action", args.action), B, A)
    mu = parse_mu(spec.get("mu", args.mu), genus, B)
    if not mu.is_surjective():
        raise InputError("mu is not surjective")
    e = split_problem(mu, A, action)
    t0 = time.perf_counter()
    results = {
        "genus": genus,
        "group_order": e.group.order,
        "kernel_order": e.kernel.order,
        "bound": genus_bound(A.order),
        "bound_met": genus >= genus_bound(A.order),
        "mu": element_list(B, mu.idx),
    }
    timings = {}
    verdicts = []
    if args.method in ("brute", "both"):
        sol = brute_solve(e, "existence")
        results["brute"] = _solution_dict(sol, e.group)
        verdicts.append(sol is not None)
        if args.count:
            results["brute"]["count"] = brute_solve(e, "count")
        timings["brute"] = time.perf_counter() - t0
    if args.method in ("pigeonhole", "both"):
        t1 = time.perf_counter()
        sol = pigeonhole_solve(e, enforce_bound=False)
        results["pigeonhole"] = _solution_dict(sol, e.group)
        verdicts.append(sol is not None)
        timings["pigeonhole"] = time.perf_counter() - t1
    results["agree"] = len(set(verdicts)) == 1
    results["solved"] = all(verdicts) and results["agree"]
    inputs = {"A": A.name, "B": B.name, "action": spec.get("action", args.action), "method": args.method}
    emit(args, make_report(args, "solve-fsep", inputs, results, timings=timings))
    return EXIT_OK if results["solved"] else EXIT_NONE


def cmd_rs(args):
    genus = args.genus
    G = elaborate(args.target)
    mu = parse_mu(args.mu, genus, G)
    sub = args.subgroup
    if sub == "kernel":
        K = G.trivial_subgroup()
    elif sub == "stabilizer":
        if not isinstance(G.identity, Perm):
            raise InputError("stabilizer needs a permutation group")
        K = fingroup.Subgroup(G, frozenset(i for i, p in enumerate(G.elements) if p.images[0] == 0))
    elif sub == "whole":
        K = G.whole()
    else:
        K = subgroup_from_text(sub, G)
    t0 = time.perf_counter()
    table = todd_coxeter(genus, by_hom=(mu, K))
    sp = reidemeister_schreier(table)
    ab = abelianization_invariants(sp)
    results = {
        "index": table.index,
        "table_ok": table.check(),
        "schreier_generators": sp.ngens,
        "relators": sp.nrelators,
        "deficiency": sp.deficiency,
        "predicted_genus": sp.predicted_genus,
        "abelianization_rank": ab.free_rank,
        "torsion": list(ab.torsion),
        "computed_genus": ab.free_rank // 2,
    }
    results["match"] = (ab.torsion_free and ab.free_rank == 2 * sp.predicted_genus
                        and sp.ngens == table.index * (2 * genus - 1) + 1 and sp.nrelators == table.index)
    inputs = {"genus": genus, "target": G.name, "subgroup": sub, "mu": element_list(G, mu.idx)}
    emit(args, make_report(args, "rs", inputs, results, timings={"total": time.perf_counter() - t0}))
    return EXIT_OK if results["match"] else EXIT_NONE


def cmd_count_homs(args):
    G = elaborate(args.target)
    t0 = time.perf_counter()
    brute = enumerate_representations(args.genus, G, surjective_only=args.surjective, count_only=True)
    results = {"brute": brute}
    if not args.surjective:
        results["convolution"] = hom_count_convolution(args.genus, G)
        results["character_sum"] = hom_count_character_sum(args.genus, G)
        if args.genus == 1:
            results["order_times_classes"] = G.order * len(G.conjugacy_classes())
        results["agree"] = len({v for k, v in results.items()}) == 1
    else:
        results["agree"] = True
    inputs = {"genus": args.genus, "target": G.name, "surjective": args.surjective}
    emit(args, make_report(args, "count-homs", inputs, results, timings={"total": time.perf_counter() - t0}))
    return EXIT_OK if results["agree"] else EXIT_NONE


def _diamond_from_file(path):
    spec = read_spec_file(path, {"genus", "G", "mu", "G0", "G1", "G2", "Abar", "action"})
    for key in ("genus", "G", "mu", "G0", "G1", "G2"):
        if key not in spec:
            raise InputError(f"{path}: missing key {key!r}")
    G = elaborate(spec["G"])
    mu = parse_mu(spec["mu"], int(spec["genus"]), G)
    G0, G1, G2 = (subgroup_from_text(spec[k], G) for k in ("G0", "G1", "G2"))
    Abar = elaborate(spec["Abar"]) if "Abar" in spec else None
    act = pick_action(spec.get("action", "trivial"), G0.as_group(), Abar) if Abar else None
    amb = Ambient(mu, Preimage(mu, G0), Preimage(mu, G1), Preimage(mu, G2))
    return amb, DiamondInstance(G, G0, G1, G2, Abar=Abar, action=act, name=path)


def cmd_diamond(args):
    from .instances import DIAMONDS
    if args.builtin:
        if args.builtin not in DIAMONDS:
            raise InputError(f"unknown instance {args.builtin!r}; choose from {sorted(DIAMONDS)}")
        amb, d = DIAMONDS[args.builtin]()
    elif args.instance:
        amb, d = _diamond_from_file(args.instance)
    else:
        raise InputError("give --instance FILE or --builtin NAME")
    t0 = time.perf_counter()
    modl = check_modL_conditions(d)
    idx = check_index_conditions(amb)
    results = {
        "modL": modl,
        "index": {"indices": idx["indices"], "conditions": idx["conditions"], "all": idx["all"]},
        "soundness": (not idx["all"]) or check_modL_conditions(idx["mod_L"])["all"],
    }
    witnesses = []
    if d.Abar is not None and modl["all"]:
        scan = obstruction_scan(d)
        witnesses = scan.pop("witnesses")
        results["obstruction"] = scan
    if d.Abar is not None:
        W = d.wreath()
        q = quotient_assignment(amb)
        found = constrained_epi_search(W, amb.mu, q)
        results["constrained_search"] = {
            "quotient_order": q.target.order,
            "wreath_order": W.group.order,
            "pruned_by_order": found.pruned_by_order,
            "candidates": found.candidates,
            "solutions": [element_list(W.group, s.idx) for s in found.solutions],
        }
        if "obstruction" in results:
            results["agreement"] = (not results["obstruction"]["obstructed"]) or not found.solutions
    inputs = {"instance": args.builtin or args.instance}
    emit(args, make_report(args, "diamond", inputs, results, witnesses, {"total": time.perf_counter() - t0}))
    return EXIT_OK


def _induced_from_file(path):
    spec = read_spec_file(path, {"genus", "G", "mu", "G0", "A", "G1", "action", "nu"})
    for key in ("genus", "G", "mu", "G0", "A", "G1", "nu"):
        if key not in spec:
            raise InputError(f"{path}: missing key {key!r}")
    G = elaborate(spec["G"])
    mu = parse_mu(spec["mu"], int(spec["genus"]), G)
    gens = [parse_element(t, G) for t in spec["G0"].split(",") if t.strip()]
    G0 = G.subgroup(indices=gens)
    A = elaborate(spec["A"])
    G1 = elaborate(spec["G1"])
    action1 = pick_action(spec.get("action", "trivial"), G1, A)
    images = [parse_element(t, G1) for t in spec["nu"].split(",") if t.strip()]
    if len(images) != len(gens):
        raise InputError("nu needs one image per listed generator of G0")
    H = G0.as_group()
    nu = _nu_from_values(H, G1, [(H.index(G.elements[g]), x) for g, x in zip(gens, images)])
    return induce_problem(mu, G0, A, action1, nu=nu)


def cmd_induce(args):
    from .instances import INDUCED
    if args.builtin:
        if args.builtin not in INDUCED:
            raise InputError(f"unknown instance {args.builtin!r}; choose from {sorted(INDUCED)}")
        ip = INDUCED[args.builtin]()
    elif args.instance:
        ip = _induced_from_file(args.instance)
    else:
        raise InputError("give --instance FILE or --builtin NAME")
    t0 = time.perf_counter()
    e = ip.problem
    results = {
        "wreath_order": e.group.order,
        "expected_order": ip.wreath.expected_order(),
        "N_index": ip.table.index,
        "schreier_generators": ip.schreier.ngens,
        "relators": ip.schreier.nrelators,
    }
    sols = brute_solve(e, "all") if args.all else None
    first = sols[0] if sols else (brute_solve(e, "existence") if sols is None else None)
    results["solvable"] = first is not None
    witnesses = []
    if first is not None:
        r = restrict_solution(ip, first)
        witnesses.append({"psi": element_list(e.group, first.psi.idx),
                          "restricted": element_list(ip.target.group, r.images)})
        results["first_restriction"] = {"proper": r.proper, "lifts_mu1": r.lifts_mu1,
                                        "relators_hold": r.relators_hold}
    if sols is not None:
        rs = [restrict_solution(ip, s) for s in sols]
        results["proper_solutions"] = len(sols)
        results["restrict_properly"] = sum(r.proper and r.lifts_mu1 and r.relators_hold for r in rs)
    inputs = {"instance": args.builtin or args.instance, "all": args.all}
    emit(args, make_report(args, "induce", inputs, results, witnesses, {"total": time.perf_counter() - t0}))
    return EXIT_OK if results["solvable"] else EXIT_NONE


def _frontier_row(task):
    a_text, b_text, act_text, genus = task
    A, B = elaborate(a_text), elaborate(b_text)
    action = pick_action(act_text, B, A)
    return lemma23_frontier(A, B, action, genus, min_genus=genus)[0]


def _oracle_row(task):
    seed, i, max_order, max_genus = task
    rng = random.Random(f"{seed}:{i}")
    e = random_fsep(rng, max_order=max_order, max_genus=max_genus)
    brute = brute_solve(e, "existence")
    ph = pigeonhole_solve(e, enforce_bound=False)
    return {
        "instance": i,
        "A": e.A.name,
        "B": e.B.name,
        "genus": e.genus,
        "group_order": e.group.order,
        "brute": brute is not None,
        "pigeonhole": ph is not None,
        "path": ph.path if ph else "",
        "agree": (brute is None) == (ph is None),
    }


def cmd_experiment(args):
    t0 = time.perf_counter()
    if args.name == "lemma23-frontier":
        A, B = elaborate(args.A), elaborate(args.B)
        pick_action(args.action, B, A)  # validate before fanning out
        tasks = [(args.A, args.B, args.action, g) for g in range(args.min_genus, args.max_genus + 1)]
        rows = run_jobs(_frontier_row, tasks, args.jobs)
        bound = genus_bound(A.order)
        results = {
            "bound": bound,
            "minimal_r": minimal_r(A.order),
            "rows": rows,
            "all_solvable_at_bound": all(r.get("solvable") for r in rows if r["genus"] >= bound),
        }
        ok = results["all_solvable_at_bound"]
        inputs = {"A": A.name, "B": B.name, "action": args.action,
                  "min_genus": args.min_genus, "max_genus": args.max_genus}
    elif args.name == "oracle":
        tasks = [(args.seed, i, args.max_order, args.max_genus) for i in range(args.instances)]
        rows = run_jobs(_oracle_row, tasks, args.jobs)
        results = {"rows": rows, "instances": len(rows), "disagreements": sum(not r["agree"] for r in rows)}
        ok = results["disagreements"] == 0
        inputs = {"instances": args.instances, "max_order": args.max_order, "max_genus": args.max_genus}
    else:
        raise InputError(f"unknown experiment {args.name!r}")
    flat = [{k: v for k, v in r.items()} for r in rows]
    emit(args, make_report(args, f"experiment {args.name}", inputs, results,
                           timings={"total": time.perf_counter() - t0}), table=flat)
    return EXIT_OK if ok else EXIT_NONE


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="group closure cap")
    common.add_argument("--json", metavar="PATH", help="also write the report here")
    common.add_argument("--csv", action="store_true", help="print tables as CSV")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")

    p = argparse.ArgumentParser(prog="profsurf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-fsep", parents=[common], help="solve a split embedding problem")
    s.add_argument("--file")
    s.add_argument("--genus", type=int)
    s.add_argument("--A", default="C2")
    s.add_argument("--B", default="C2")
    s.add_argument("--action", default="trivial")
    s.add_argument("--mu")
    s.add_argument("--method", choices=["brute", "pigeonhole", "both"], default="both")
    s.add_argument("--count", action="store_true")
    s.set_defaults(func=cmd_solve_fsep)

    for name in ("rs", "genus"):
        s = sub.add_parser(name, parents=[common], help="Reidemeister-Schreier for a finite-index subgroup")
        s.add_argument("--genus", type=int, required=True)
        s.add_argument("--target", required=True)
        s.add_argument("--subgroup", default="kernel",
                       help="kernel, stabilizer, whole, or generators of the target")
        s.add_argument("--mu")
        s.set_defaults(func=cmd_rs)

    s = sub.add_parser("count-homs", parents=[common], help="count homomorphisms from a surface group")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--surjective", action="store_true")
    s.set_defaults(func=cmd_count_homs)

    s = sub.add_parser("diamond", parents=[common], help="diamond conditions and obstruction scan")
    s.add_argument("--instance")
    s.add_argument("--builtin")
    s.set_defaults(func=cmd_diamond)

    s = sub.add_parser("induce", parents=[common], help="induced problem and restriction of solutions")
    s.add_argument("--instance")
    s.add_argument("--builtin")
    s.add_argument("--all", action="store_true", help="enumerate and restrict every proper solution")
    s.set_defaults(func=cmd_induce)

    s = sub.add_parser("experiment", parents=[common], help="run a sampled or swept experiment")
    s.add_argument("name", choices=["lemma23-frontier", "oracle"])
    s.add_argument("--A", default="C2")
    s.add_argument("--B", default="C1")
    s.add_argument("--action", default="trivial")
    s.add_argument("--min-genus", type=int, default=1)
    s.add_argument("--max-genus", type=int, default=16)
    s.add_argument("--instances", type=int, default=200)
    s.add_argument("--max-order", type=int, default=12)
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    saved_cap = fingroup.DEFAULT_CAP
    if args.cap is not None:
        fingroup.DEFAULT_CAP = args.cap
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GroupExprError, ParseError, InputError, GroupError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        fingroup.DEFAULT_CAP = saved_cap


if __name__ == "__main__":
    sys.exit(main())
