"""Command-line interface: distributions, enhancement grids, law checks, verify.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 I/O or
parse failure.  Output is byte-identical for identical configuration:
probabilities carry 12 significant digits, enhancements 6.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import verify as verify_mod
from ._parallel import worker_count
from .arrangements import ModeOccupation, assignment_to_occupation
from .errors import InvalidArrangementError, MatrixFileError, MultiportError
from .linalg import fourier_matrix, is_unitary, load_matrix_file
from .scattering import (
    Species,
    batch_probabilities,
    OutputSet,
    format_sig,
    mixed_state_distribution,
    output_distribution,
    parse_species,
    round_sig,
    zero_threshold,
)
from .suppression import classify_grid, law_verdict
from .errors import SoundnessViolationError


def parse_arrangement(text: str, n: int | None = None) -> ModeOccupation:
    """Occupation "0,1,2,0,1,2" or assignment "d:2,3,3,5,6,6" (needs n)."""
    if text.startswith("d:"):
        if n is None:
            raise InvalidArrangementError("assignment form 'd:...' needs --n")
        body = text[2:].strip()
        entries = [int(tok) for tok in body.split(",")] if body else []
        return assignment_to_occupation(entries, n)
    return ModeOccupation.parse(text)


# user-facing config keys that differ from click parameter names
_CONFIG_KEY_MAP = {"input": "input_", "output": "output_", "format": "fmt"}


def _load_config(ctx: click.Context, param: click.Parameter, value):
    if value is None:
        return None
    try:
        data = json.loads(Path(value).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read config {value}: {exc}", err=True)
        sys.exit(3)
    if not isinstance(data, dict):
        click.echo(f"error: config {value} must hold a JSON object", err=True)
        sys.exit(3)
    mapped = {}
    for key, val in data.items():
        norm = str(key).replace("-", "_")
        mapped[_CONFIG_KEY_MAP.get(norm, norm)] = val
    ctx.default_map = {**(ctx.default_map or {}), **mapped}
    return value


def _config_option(fn):
    return click.option("--config", type=click.Path(), is_eager=True, expose_value=False,
                        callback=_load_config,
                        help="JSON file with defaults for the options of this command.")(fn)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MatrixFileError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except MultiportError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    return wrapper


def _resolve_matrix(matrix: str, n: int | None) -> tuple[np.ndarray, str, int]:
    if matrix == "fourier":
        if n is None:
            raise InvalidArrangementError("the fourier matrix needs --n or an occupation input")
        return fourier_matrix(n), f"fourier:{n}", n
    path = matrix[5:] if matrix.startswith("file:") else matrix
    u = load_matrix_file(path)
    size = u.shape[0]
    if n is not None and n != size:
        raise InvalidArrangementError(f"matrix file has n={size}, but --n {n} was given")
    if not is_unitary(u, 1e-8):
        raise InvalidArrangementError(f"matrix in {path} is not unitary within 1e-8")
    return u, f"file:{path}", size


def _emit(text: str, out: str) -> None:
    if out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _species_option(fn):
    return click.option("--species", default="boson", show_default=True,
                        help="distinguishable | boson | fermion (or D/B/F).")(fn)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="multiport")
def main() -> None:
    """Exact many-particle scattering probabilities and suppression laws."""


@main.command()
@_config_option
@click.option("--matrix", default="fourier", show_default=True,
              help="'fourier' or a JSON matrix file path (optionally 'file:PATH').")
@click.option("--n", "n", type=int, default=None, help="Number of modes.")
@click.option("--input", "input_", default=None, help="Input arrangement, e.g. 1,1 or d:1,2.")
@click.option("--mixed", is_flag=True,
              help="Average over all nonequivalent inputs instead of a single one.")
@click.option("--particles", "-N", "particles", type=int, default=None,
              help="Particle number N (only with --mixed).")
@click.option("--pauli", is_flag=True, help="Restrict mixed-state inputs to Pauli arrangements.")
@_species_option
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--group-by-class", is_flag=True, help="Group outputs by equivalence class.")
@click.option("--out", default="-", show_default=True, help="Output path or '-' for stdout.")
@_guard
def distribution(matrix, n, input_, mixed, particles, pauli, species, fmt,
                 group_by_class, out) -> None:
    """Full output distribution for one input arrangement (or a mixed state)."""
    sp = parse_species(species)
    if mixed:
        if input_ is not None:
            raise InvalidArrangementError("--mixed replaces --input; give only one")
        if particles is None:
            raise InvalidArrangementError("--mixed needs --particles")
        u, label, n = _resolve_matrix(matrix, n)
        table = mixed_state_distribution(u, particles, sp,
                                         pauli_only=pauli or sp is Species.FERMION,
                                         group_by_class=group_by_class, matrix_label=label)
    else:
        if input_ is None:
            raise InvalidArrangementError("need --input (or --mixed)")
        occ = parse_arrangement(input_, n)
        u, label, n = _resolve_matrix(matrix, n if n is not None else occ.n)
        if occ.n != n:
            raise InvalidArrangementError(f"input has {occ.n} modes, matrix has {n}")
        if sp is Species.FERMION and not occ.is_pauli:
            raise InvalidArrangementError("fermionic input must have at most one particle per mode")
        table = output_distribution(u, occ, sp, group_by_class=group_by_class, matrix_label=label)
    if fmt == "json":
        _emit(json.dumps(table.to_json_dict(), indent=2) + "\n", out)
    else:
        _emit(table.to_csv_text(), out)


@main.command()
@_config_option
@click.option("--n", type=int, required=True, help="Number of modes.")
@click.option("--particles", "-N", "particles", type=int, required=True, help="Particle number N.")
@_species_option
@click.option("--pauli", is_flag=True, help="Restrict to Pauli arrangements (required for fermions).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", default="-", show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (default: MPI_THREADS or CPU count).")
@_guard
def enhancement(n, particles, species, pauli, fmt, out, threads) -> None:
    """Enhancement grid over all inequivalent class pairs of the Fourier multiport."""
    sp = parse_species(species)
    if sp is Species.FERMION and not pauli:
        raise InvalidArrangementError("fermionic grids need --pauli")
    records, violations = classify_grid(fourier_matrix(n), n, particles, sp,
                                        pauli_only=pauli, threads=threads)
    if violations:
        raise SoundnessViolationError(f"{len(violations)} soundness violations")
    from .arrangements import enumerate_classes

    classes = enumerate_classes(n, particles, pauli_only=pauli)
    if fmt == "json":
        doc = {
            "matrix": f"fourier:{n}",
            "species": sp.value,
            "n": n,
            "particles": particles,
            "pauli_only": bool(pauli),
            "classes": [
                {"occupation": cls.representative.to_string(), "multiplicity": cls.members}
                for cls in classes
            ],
            "cells": [
                {
                    "input": rec.input.to_string(),
                    "output": rec.output.to_string(),
                    "probability": round_sig(rec.probability, 12),
                    "enhancement": None if rec.enhancement is None else round_sig(rec.enhancement, 6),
                    "law": rec.law,
                    "tag": rec.tag,
                }
                for rec in records
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", out)
    else:
        lines = [f"# matrix=fourier:{n} species={sp.value} particles={particles} pauli={str(bool(pauli)).lower()}",
                 "input,output,probability,enhancement,law,tag"]
        for rec in records:
            enh = "" if rec.enhancement is None else format_sig(rec.enhancement, 6)
            lines.append(f"\"{rec.input.to_string()}\",\"{rec.output.to_string()}\","
                         f"{format_sig(rec.probability, 12)},{enh},{rec.law},{rec.tag}")
        _emit("\n".join(lines) + "\n", out)


def _verdict_dict(v) -> dict:
    return {
        "suppressed_by_law": v.suppressed_by_law,
        "direction": v.direction.value,
        "q": v.q_value,
        "m": v.period_m,
        "p": v.repetitions_p,
        "fermion_case": v.fermion_case.value,
        "applicable": v.applicable,
    }


@main.command()
@_config_option
@click.option("--n", type=int, default=None, help="Number of modes.")
@click.option("--input", "input_", required=True, help="Input arrangement.")
@click.option("--output", "output_", default=None, help="Output arrangement; omit to scan all outputs.")
@_species_option
@click.option("--check", is_flag=True, help="Also compute the exact probability and flag soundness.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", default="-", show_default=True)
@_guard
def suppression(n, input_, output_, species, check, fmt, out) -> None:
    """Suppression-law verdicts for one transition or a full output scan."""
    sp = parse_species(species)
    occ_r = parse_arrangement(input_, n)
    n = n if n is not None else occ_r.n
    if occ_r.n != n:
        raise InvalidArrangementError(f"input has {occ_r.n} modes, expected n={n}")
    if sp is Species.FERMION and not occ_r.is_pauli:
        raise InvalidArrangementError("fermionic input must have at most one particle per mode")
    from .arrangements import enumerate_occupations

    if output_ is not None:
        outs = [parse_arrangement(output_, n)]
    else:
        outs = list(enumerate_occupations(n, occ_r.total, pauli_only=sp is Species.FERMION))
    u = fourier_matrix(n) if check else None
    thr = zero_threshold(n, occ_r.total)
    results = []
    probs = None
    if check:
        outset = OutputSet(n, outs)
        probs = batch_probabilities(u, occ_r, outset, sp)
    for i, occ_s in enumerate(outs):
        verdict = law_verdict(occ_r, occ_s, n, sp)
        entry = {"output": occ_s.to_string(), **_verdict_dict(verdict)}
        if check:
            p = float(probs[i])
            entry["probability"] = round_sig(p, 12)
            entry["sound"] = (not verdict.suppressed_by_law) or p < thr
        results.append(entry)
    if fmt == "json":
        doc = {"matrix": f"fourier:{n}", "species": sp.value, "input": occ_r.to_string(),
               "results": results}
        _emit(json.dumps(doc, indent=2) + "\n", out)
    else:
        cols = ["output", "suppressed_by_law", "direction", "q", "m", "p", "fermion_case", "applicable"]
        if check:
            cols += ["probability", "sound"]
        lines = [f"# matrix=fourier:{n} species={sp.value} input={occ_r.to_string()}",
                 ",".join(cols)]
        for entry in results:
            cells = []
            for c in cols:
                v = entry[c]
                if isinstance(v, bool):
                    cells.append(str(v).lower())
                elif c == "probability":
                    cells.append(format_sig(v, 12))
                elif c == "output":
                    cells.append(f"\"{v}\"")
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        _emit("\n".join(lines) + "\n", out)


@main.command()
@_config_option
@click.option("--suite", type=click.Choice(list(verify_mod.SUITES)), default="quick", show_default=True)
@click.option("--seed", type=int, default=1, show_default=True, help="Seed for random-unitary checks.")
@click.option("--perturb-phase", type=float, default=0.0, show_default=True,
              help="Inject a phase error into the Fourier matrix (negative control).")
@click.option("--threads", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@_guard
def verify(suite, seed, perturb_phase, threads, fmt) -> None:
    """Run a verification suite; exit 1 if any check fails."""
    results = verify_mod.run_suite(suite, seed=seed, perturb_phase=perturb_phase,
                                   threads=worker_count(threads))
    failed = [r for r in results if not r.passed]
    if fmt == "json":
        click.echo(json.dumps({
            "suite": suite,
            "passed": not failed,
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }, indent=2))
    else:
        for r in results:
            click.echo(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        click.echo(f"{len(results)} checks: {len(results) - len(failed)} passed, {len(failed)} failed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
