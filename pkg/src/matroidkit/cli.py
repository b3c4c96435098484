"""Command-line entry point: ``matroidkit VERB ...``.

Exit codes: 0 success, 1 negative result, 2 usage or input error,
3 capacity exceeded.  Reports go to standard output as JSON.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .core import CapacityError, Matroid, MatroidError, loads

OK, NEGATIVE, USAGE, CAPACITY = 0, 1, 2, 3


class Negative(Exception):
    """Raised after a report is printed to request exit code 1."""


def emit(doc) -> None:
    click.echo(json.dumps(doc, sort_keys=True))


def _read(source: str | None, family: str | None) -> Matroid:
    from .families import generate, parse_family

    if family:
        return generate(parse_family(family))
    if source is None or source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise MatroidError(f"cannot read {source}: {exc.strerror}") from None
    return loads(text)


def _write_dot(path: str | None, text: str | None) -> None:
    if path and text:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _labels(M: Matroid, mask: int) -> list[str]:
    return sorted(M.labels(mask))


class Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except Negative:
            ctx.exit(NEGATIVE)
        except CapacityError as exc:
            click.echo(json.dumps({"error": "capacity", "message": str(exc)}), err=True)
            ctx.exit(CAPACITY)
        except MatroidError as exc:
            click.echo(json.dumps({"error": "input", "message": str(exc)}), err=True)
            ctx.exit(USAGE)


source_arg = click.argument("source", required=False)
family_opt = click.option("--family", help="Build the input from a family, e.g. free_swirl5.")
k_opt = click.option("-k", "--k", "k", type=int, default=5, show_default=True)
dot_opt = click.option("--dot", type=click.Path(dir_okay=False, writable=True),
                       help="Also write a DOT drawing to this file.")
json_opt = click.option("--json", "as_json", is_flag=True,
                        help="JSON lines only; skip the readable lines on stderr.")


@click.group(cls=Group, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--cap", type=int, help="Ground-set cap (same as MATROID_CAP).")
def main(cap):
    """Exact structural computations on small matroids."""
    if cap is not None:
        os.environ["MATROID_CAP"] = str(cap)


@main.command()
@click.argument("family")
@click.argument("params", nargs=-1)
@click.option("--q", type=int, help="Also emit a representation over GF(q).")
def gen(family, params, q):
    """Print a family member as matroid JSON."""
    from .families import generate, generate_rep, parse_family

    spec = parse_family(family, *params)
    M = generate(spec)
    doc = M.to_dict()
    if q is not None:
        mat = generate_rep(spec, q)
        if mat is None:
            emit({"family": family, "q": q, "representable": False})
            raise Negative
        doc = {**doc, "backend": {"kind": "linear", "q": q, "matrix": mat.entries.tolist()}}
    emit(doc)


@main.command()
@source_arg
@family_opt
def analyze(source, family):
    """Connectivity, 3-separations, fans and quads."""
    from .connectivity import enumerate_3seps, is_3_connected, is_connected, low_separation
    from .structures import find_fans_quads, recognize_wheel_whirl

    M = _read(source, family)
    doc = {"name": M.name, "size": M.n, "rank": M.rank(M.full),
           "connected": is_connected(M), "three_connected": is_3_connected(M)}
    if doc["three_connected"]:
        seps = enumerate_3seps(M)
        doc["three_separations"] = [s.to_dict(M) for s in seps]
        rep = find_fans_quads(M)
        doc["fans"] = [f.to_dict(M) for f in rep.fans]
        doc["quads"] = [_labels(M, q.elements) for q in rep.quads]
        doc["wheel_whirl"] = list(recognize_wheel_whirl(M))
    else:
        doc["low_separation"] = _labels(M, low_separation(M, 3))
    emit(doc)


@main.command()
@source_arg
@family_opt
@click.option("--petals", help="Classify these petals: 'a,b|c,d|...'.")
@click.option("--min-petals", type=int, default=4, show_default=True)
@dot_opt
def flowers(source, family, petals, min_petals, dot):
    """Classify a flower, or list the swirl-like flowers."""
    from .flowers import classify_flower, flower_to_dot, swirl_like_flowers

    M = _read(source, family)
    if petals:
        rep = classify_flower(M, [p.split(",") for p in petals.split("|")])
        emit(rep.to_dict(M))
        _write_dot(dot, flower_to_dot(M, rep) if rep.is_flower else None)
        if not rep.is_flower:
            raise Negative
        return
    reps = swirl_like_flowers(M, min_petals)
    emit({"flowers": [r.to_dict(M) for r in reps]})
    if reps:
        _write_dot(dot, flower_to_dot(M, reps[0]))


@main.command()
@source_arg
@family_opt
@k_opt
@dot_opt
def coherence(source, family, k, dot):
    """Is the matroid k-coherent?  Exit 1 with the fracture when not."""
    from .flowers import coherence_report, find_k_fracture, flower_to_dot

    M = _read(source, family)
    rep = coherence_report(M, k)
    emit(rep)
    if rep.get("fracture") and dot:
        _write_dot(dot, flower_to_dot(M, find_k_fracture(M, k)))
    if not rep["coherent"]:
        raise Negative


@main.command()
@source_arg
@family_opt
@click.option("--element", "-e", multiple=True, help="Restrict to these elements.")
@click.option("--method", type=click.Choice(["cut", "exhaustive"]), default="cut",
              show_default=True)
def freedom(source, family, element, method):
    """Fixed and cofixed elements and clone classes."""
    from .freedom import clonal_analysis, freedom_report, is_cofixed, is_fixed

    M = _read(source, family)
    if not element:
        emit(freedom_report(M).to_dict())
        return
    cls, _ = clonal_analysis(M)
    out = {}
    for e in element:
        i = M.index(e)
        out[e] = {"fixed": is_fixed(M, i, method=method).fixed,
                  "cofixed": is_cofixed(M, i, method=method).fixed,
                  "clone_class": next(j for j, c in enumerate(cls) if c >> i & 1)}
    emit(out)


@main.command()
@source_arg
@family_opt
@k_opt
@click.option("--profile", is_flag=True, help="Include the per-element profile.")
def skeleton(source, family, k, profile):
    """Is the matroid a k-skeleton?"""
    from .skeleton import element_profile, is_k_skeleton

    M = _read(source, family)
    v = is_k_skeleton(M, k)
    doc = {"k": k, **v.to_dict()}
    if profile:
        doc["profile"] = [p.to_dict() for p in element_profile(M, k)]
    emit(doc)
    if not v:
        raise Negative


@main.command()
@source_arg
@family_opt
@k_opt
@click.option("--bundle", type=click.Path(dir_okay=False, writable=True),
              help="Write the failure bundle here when no move exists.")
def chain(source, family, k, bundle):
    """Reduce a k-skeleton by legal moves of at most four elements."""
    from .skeleton import ChainError, chain_reduce

    M = _read(source, family)
    try:
        steps = chain_reduce(M, k)
    except ChainError as exc:
        emit({"k": k, "ok": False, "error": str(exc)})
        if bundle and exc.bundle:
            with open(bundle, "w") as fh:
                json.dump(exc.bundle, fh, sort_keys=True)
        raise Negative from None
    emit({"k": k, "ok": True, "steps": [s.to_dict() for s in steps]})


@main.command()
@source_arg
@family_opt
@click.option("--q", type=int, required=True, help="Field order.")
@click.option("--count", is_flag=True, help="Only print the number of classes.")
@click.option("--budget", type=int, help="Search node budget.")
def reps(source, family, q, count, budget):
    """Inequivalent representations over GF(q)."""
    from .fields import gf
    from .gfrep import enumerate_inequivalent

    M = _read(source, family)
    found = enumerate_inequivalent(M, gf(q), budget=budget)
    if count:
        emit({"count": len(found)})
    else:
        emit({"q": q, "count": len(found),
              "representations": [r.to_dict() for r in found]})
    if not found:
        raise Negative


CHECKS = ("connectivity-meet", "skew-coskew", "delta-wye", "strand-fixedness", "loose-fixedness",
          "clonal-bridging", "linking", "skeleton-no-fan", "skeleton-duality")


@main.command("verify-lemma")
@click.argument("check", type=click.Choice(CHECKS))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-size", type=int, default=10, show_default=True)
def verify_lemma(check, seed, max_size):
    """Check one structural identity over the catalog; exit 1 on counterexamples."""
    from . import acceptance as A
    from .catalog import catalog

    cat = catalog(max_size)
    if check in ("connectivity-meet", "skew-coskew"):
        key = "meet" if check == "connectivity-meet" else "skew"
        bad = [n for n, M in cat.items() if A.connectivity_violations(M)[key]]
        doc = {"checked": len(cat), "counterexamples": bad}
    elif check == "delta-wye":
        from .structures import delta_y_clauses, triangles

        bad, n = [], 0
        for name, M in cat.items():
            for T in triangles(M):
                n += 1
                if not all(delta_y_clauses(M, T).values()):
                    bad.append([name, _labels(M, T)])
        doc = {"checked": n, "counterexamples": bad}
    elif check == "strand-fixedness":
        n, bad = A.strand_disagreements(cat)
        doc = {"checked": n, "counterexamples": bad}
    elif check == "loose-fixedness":
        n, bad = A.loose_fixedness_failures()
        doc = {"checked": n, "counterexamples": bad}
    elif check == "clonal-bridging":
        ok, detail = A.check_bridging(seed)
        doc = {"checked": 100, "counterexamples": [] if ok else [detail], "detail": detail}
    elif check == "linking":
        pairs = A.linking_pairs(seed)
        bad = [[M.name, _labels(M, X), _labels(M, Y)] for M, X, Y in pairs
               if not A.verify_linking(M, X, Y)]
        doc = {"checked": len(pairs), "counterexamples": bad}
    else:
        passing, fans, dual_bad = A.skeleton_hygiene(cat)
        bad = fans if check == "skeleton-no-fan" else dual_bad
        doc = {"checked": len(cat), "skeletons": passing, "counterexamples": bad}
    doc = {"check": check, "seed": seed, **doc}
    emit(doc)
    if doc["counterexamples"]:
        raise Negative


@main.command()
@click.option("--suite", default="all", show_default=True,
              help="'all' or a comma-separated list of criterion numbers.")
@click.option("--seed", type=int, default=0, show_default=True)
@json_opt
def acceptance(suite, seed, as_json):
    """Run the acceptance criteria; one JSON line each, then a summary."""
    from .acceptance import CRITERIA, run

    if suite == "all":
        numbers = sorted(CRITERIA)
    else:
        try:
            numbers = [int(x) for x in suite.split(",")]
        except ValueError:
            raise click.BadParameter("expected 'all' or numbers", param_hint="--suite") from None
        unknown = [n for n in numbers if n not in CRITERIA]
        if unknown:
            raise click.BadParameter(f"unknown criteria {unknown}", param_hint="--suite")
    failed = 0
    for res in run(numbers, seed):
        emit(res.to_dict())
        if not as_json:
            click.echo(res.line(), err=True)
        failed += not res.passed
    emit({"summary": True, "passed": len(numbers) - failed, "failed": failed})
    if failed:
        raise Negative


if __name__ == "__main__":  # pragma: no cover
    main()
