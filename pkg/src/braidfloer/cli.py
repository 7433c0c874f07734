"""Command-line interface, braid-text parsing, and result envelopes.

Commands: homology, normalform, maslov, flow, properness, forcing.  Inputs
come as a JSON document (file or inline flags); outputs are deterministic
JSON envelopes.  Exit codes: 0 success, 2 improper class, 3 degeneracy
errors, 1 anything else.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import pipeline
from .errors import (
    AmbiguousDiagramError,
    BraidInputError,
    DegenerateCrossingError,
    ImproperClassError,
    StationaryDegenerateError,
)
from .flow import evolve, find_stationary, fitted_recurrence
from .garside import left_normal_form, twist_padding
from .maslov import (
    annulus_hamiltonian,
    constant_family,
    integrate_path,
    permuted_cz_index,
    rotation_family,
    sampled_family,
)
from .words import BraidWord, StrandPermutation, exponent_sum

CACHE_ENV = "BRAIDFLOER_CACHE_DIR"
COMMANDS = ("homology", "normalform", "maslov", "flow", "properness", "forcing")

_TOKEN = re.compile(r"^s(\d+)(')?$")


def parse_braid_text(text: str) -> BraidWord:
    """Parse `n=<strands>; s1 s2' ...`; a trailing apostrophe inverts."""
    head, _, body = text.partition(";")
    head = head.strip()
    if not head.startswith("n="):
        raise BraidInputError(f"missing strand header in {text!r}")
    try:
        strands = int(head[2:])
    except ValueError:
        raise BraidInputError(f"bad strand count in {head!r}") from None
    letters = []
    for pos, tok in enumerate(body.split()):
        m = _TOKEN.match(tok)
        if not m:
            raise BraidInputError(f"unknown token {tok!r} at position {pos}")
        idx = int(m.group(1))
        if not 1 <= idx <= strands - 1:
            raise BraidInputError(
                f"generator index {idx} out of range at position {pos}"
            )
        letters.append((idx, -1 if m.group(2) else 1))
    return BraidWord(strands, tuple(letters))


def format_braid_text(w: BraidWord) -> str:
    toks = [f"s{i}" + ("'" if s < 0 else "") for i, s in w.letters]
    return f"n={w.strands};" + (" " + " ".join(toks) if toks else "")


@dataclass(frozen=True)
class JobSpec:
    command: str
    document: dict
    period: int | None = None
    period_check: bool = True
    cache_dir: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise BraidInputError(f"unknown command {self.command!r}")


@dataclass
class ResultEnvelope:
    job: str
    version: str
    provenance: list[str]
    payload: dict
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "job": self.job,
                "version": self.version,
                "provenance": self.provenance,
                "payload": self.payload,
                "warnings": self.warnings,
            },
            sort_keys=True,
            indent=2,
        )


def _job_hash(job: JobSpec) -> str:
    doc = {
        "command": job.command,
        "document": job.document,
        "period": job.period,
        "period_check": job.period_check,
        "seed": job.seed,
        "version": pipeline.TOOL_VERSION,
    }
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _relative_spec(doc: dict) -> pipeline.RelativeBraidSpec:
    rel = doc.get("relative", doc)
    if "cyclic" in rel:
        c = rel["cyclic"]
        kwargs = {}
        if "radii" in c:
            kwargs["radii"] = tuple(Fraction(str(r)) for r in c["radii"])
        if "phases" in c:
            kwargs["phases"] = tuple(float(p) for p in c["phases"])
        return pipeline.cyclic_spec(
            tuple(c["inner"]), tuple(c["outer"]), int(c["ell"]),
            label=c.get("label", ""), **kwargs,
        )
    if "word" in rel:
        w = rel["word"]
        return pipeline.word_spec(
            parse_braid_text(w["text"]), w["free"], label=w.get("label", "")
        )
    raise BraidInputError("relative braid document needs a 'cyclic' or 'word' block")


def _geometric_relative(doc: dict):
    """DiscreteRelativeBraid for the flow commands (cyclic specs only here)."""
    spec = _relative_spec(doc)
    if spec.presentation == "cyclic":
        rb, _, _ = pipeline._realize_cyclic(spec, None)
        return spec, rb
    rb, _, _ = pipeline._realize_word(spec, None)
    return spec, rb


def _maslov_payload(doc: dict) -> dict:
    m = doc.get("maslov", doc)
    kind = m.get("family", {}).get("kind", "constant")
    fam_doc = m.get("family", {})
    tau = float(m.get("tau", 1.0))
    if kind == "rotation":
        fam = rotation_family(int(fam_doc.get("k", 1)), int(fam_doc.get("n", 1)), tau)
    elif kind == "constant":
        fam = constant_family(np.asarray(fam_doc["matrix"], dtype=float))
    elif kind == "table":
        fam = sampled_family(fam_doc["times"], fam_doc["matrices"])
    elif kind == "annulus":
        model = annulus_hamiltonian(
            eps=float(fam_doc.get("eps", 0.1)),
            delta=float(fam_doc.get("delta", 0.1)),
            outward=bool(fam_doc.get("outward", True)),
        )
        if model.degenerate:
            raise DegenerateCrossingError("annulus model has a degenerate circle of equilibria")
        return {
            "critical_points": [
                {
                    "action": c.action,
                    "angle": c.angle,
                    "hessian": c.hessian.tolist(),
                    "morse_index": c.morse_index,
                }
                for c in model.critical_points
            ],
            "cz_indices": model.cz_indices(tau),
        }
    else:
        raise BraidInputError(f"unknown family kind {kind!r}")
    sigma = m.get("sigma")
    perm = StrandPermutation(tuple(sigma)) if sigma else None
    path = integrate_path(fam, tau)
    idx = permuted_cz_index(path, perm, b=float(m["b"]) if "b" in m else None)
    return {
        "twice_value": idx.twice_value,
        "value": idx.twice_value / 2,
        "drift": path.drift,
        "crossings": [
            {
                "time": r.time,
                "kernel_dimension": r.kernel_dimension,
                "signature": r.signature,
                "endpoint": r.endpoint,
            }
            for r in idx.crossings
        ],
    }


def run(job: JobSpec) -> ResultEnvelope:
    """Dispatch a job; deterministic for identical inputs and versions."""
    cache_dir = job.cache_dir or os.environ.get(CACHE_ENV)
    job_key = _job_hash(job)
    if cache_dir:
        cached = Path(cache_dir) / f"job-{job_key}.json"
        if cached.exists():
            doc = json.loads(cached.read_text())
            return ResultEnvelope(**doc)

    warnings: list[str] = []
    provenance: list[str] = []
    doc = job.document
    if job.command == "normalform":
        w = parse_braid_text(doc["braid"]["text"]) if "braid" in doc else parse_braid_text(doc["text"])
        nf = left_normal_form(w)
        pad = twist_padding(w)
        payload = {
            "input": format_braid_text(w),
            "strands": w.strands,
            "exponent_sum": exponent_sum(w),
            "infimum": nf.infimum,
            "canonical_length": len(nf.factors),
            "factors": [f.letters() for f in nf.factors],
            "g": pad.g,
            "positive_word": format_braid_text(pad.positive_word),
        }
    elif job.command == "homology":
        spec = _relative_spec(doc)
        result = pipeline.braid_floer_homology(
            spec, period=job.period, period_check=job.period_check, cache_dir=cache_dir
        )
        payload = result.payload()
        provenance.append(result.betti.provenance)
        warnings.append(
            "degree identification with the Floer invariant is conjecture-mediated"
        )
    elif job.command == "properness":
        _, rb = _geometric_relative(doc)
        from .complex import enumerate_component

        comp = enumerate_component(rb)
        payload = {
            "proper": comp.proper,
            "crossing_number": comp.crossing_number,
            "witness": comp.collapse_witness,
        }
    elif job.command == "forcing":
        spec = _relative_spec(doc)
        payload = pipeline.forcing_report(
            spec, period_cap=int(doc.get("period_cap", 12)), cache_dir=cache_dir
        )
        provenance.append("conjecture-shifted")
    elif job.command == "flow":
        spec, rb = _geometric_relative(doc)
        fdoc = doc.get("flow", {})
        recurrence = fitted_recurrence(rb.skeleton)
        state = evolve(rb, recurrence, horizon=float(fdoc.get("horizon", 20.0)))
        payload = {
            "trace": [[s, c] for s, c in state.trace],
            "converged": state.converged,
            "steps": state.steps_accepted,
        }
        if fdoc.get("stationary", True):
            import random as _random

            sols, warns = find_stationary(
                rb, recurrence, rng=_random.Random(job.seed)
            )
            warnings.extend(warns)
            payload["stationary"] = [
                {"values": [float(v) for v in u], "residual": r} for u, r in sols
            ]
    elif job.command == "maslov":
        payload = _maslov_payload(doc)
    else:  # pragma: no cover - guarded by JobSpec
        raise BraidInputError(job.command)

    env = ResultEnvelope(job_key, pipeline.TOOL_VERSION, provenance, payload, warnings)
    if cache_dir:
        path = Path(cache_dir)
        path.mkdir(parents=True, exist_ok=True)
        tmp = path / f".job-{job_key}.tmp"
        tmp.write_text(
            json.dumps(
                {
                    "job": env.job,
                    "version": env.version,
                    "provenance": env.provenance,
                    "payload": env.payload,
                    "warnings": env.warnings,
                },
                sort_keys=True,
            )
        )
        tmp.replace(path / f"job-{job_key}.json")
    return env


def _csv_trace(trace, stream) -> None:
    stream.write("s,crossings\n")
    for s, c in trace:
        stream.write(f"{s},{c}\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="braidfloer",
        description="Braid Floer homology of relative braid classes on the disc.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="JSON input document (path or '-')")
    parser.add_argument("--text", help="braid text for normalform, e.g. \"n=3; s1 s2'\"")
    parser.add_argument("--inner", nargs=2, type=int, metavar=("N", "M"))
    parser.add_argument("--outer", nargs=2, type=int, metavar=("N", "M"))
    parser.add_argument("--ell", type=int)
    parser.add_argument("--period", type=int, default=None)
    parser.add_argument("--period-check", dest="period_check", action="store_true", default=True)
    parser.add_argument("--no-period-check", dest="period_check", action="store_false")
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print the full envelope")
    parser.add_argument("--output", help="write the envelope JSON to a file")
    parser.add_argument("--trace-csv", help="write the flow trace as CSV")
    args = parser.parse_args(argv)

    try:
        if args.input:
            raw = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
            document = json.loads(raw)
        else:
            document = {}
            if args.text:
                document["braid"] = {"text": args.text}
                document["text"] = args.text
            if args.inner and args.outer and args.ell is not None:
                document["relative"] = {
                    "cyclic": {"inner": args.inner, "outer": args.outer, "ell": args.ell}
                }
        job = JobSpec(
            args.command, document, args.period, args.period_check, args.cache_dir, args.seed
        )
        env = run(job)
    except ImproperClassError as exc:
        print(f"improper class: {exc}", file=sys.stderr)
        if exc.witness:
            print(json.dumps({"witness": exc.witness}, sort_keys=True), file=sys.stderr)
        return 2
    except (DegenerateCrossingError, StationaryDegenerateError, AmbiguousDiagramError) as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if env.payload.get("proper") is False:
        out = env.to_json()
        print(out)
        return 2
    out = env.to_json() if args.json else json.dumps(env.payload, sort_keys=True, indent=2)
    if args.output:
        Path(args.output).write_text(out + "\n")
    if args.trace_csv and "trace" in env.payload:
        with open(args.trace_csv, "w") as fh:
            _csv_trace(env.payload["trace"], fh)
    print(out)
    for w in env.warnings:
        print(f"note: {w}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
