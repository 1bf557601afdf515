"""The eight acceptance criteria, each at its stated tolerance.

Every test records a single PASS/FAIL line, printed at the end of the run
and also written to stdout immediately.
"""

from __future__ import annotations

import hashlib
import json
import os
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from pseudolinear.cli import EXIT_OBSTRUCTION, EXIT_OK, run
from pseudolinear.errors import EquivalenceViolated, NoObstruction, NotComplete
from pseudolinear.extension import extend_to_arrangement, verify_arrangement
from pseudolinear.forbidden import classify_config, extract_forbidden, verify_standalone
from pseudolinear.ingest import serialize_drawing
from pseudolinear.kn import find_b_configuration, theorem4_crosscheck, validate_good_drawing
from pseudolinear.obstruction import find_obstruction
from pseudolinear.oracle import all_obstruction_curves, brute_force_obstruction
from pseudolinear.stringset import remove_vertex

FIX = Path(__file__).resolve().parents[1] / "fixtures"
SUBCOMMANDS = ["validate", "check", "extend", "kn-b", "extract-forbidden", "render"]


def verdict(log, number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    log.append(line)
    print(line)


# -- 1 -------------------------------------------------------------------------


def _is_forest(ss) -> bool:
    m = ss.plane_map()
    return len(m.edges) == len(m.vertices) - len(m.outer_faces)


def test_criterion_1_fixture_truths(acceptance_log, corpus, tmp_path, capsys):
    expected = {
        "FIX_B": EXIT_OBSTRUCTION,
        "FIX_W": EXIT_OBSTRUCTION,
        "FIX_TRI": EXIT_OBSTRUCTION,
        "FIX_K4X_OUT": EXIT_OBSTRUCTION,
        "FIX_X": EXIT_OK,
        "FIX_PAR": EXIT_OK,
        "FIX_K4X_IN": EXIT_OK,
        "FIX_FOREST": EXIT_OK,
    }
    paths = {name: FIX / f"{name}.json" for name in expected}
    # every forest-shaped instance of the corpus as well
    for inst in corpus:
        if _is_forest(inst.stringset()):
            p = tmp_path / f"{inst.name}.json"
            p.write_bytes(serialize_drawing(inst.doc()))
            paths[inst.name] = p
            expected[inst.name] = EXIT_OK
    failures, slowest = [], 0.0
    for name, path in paths.items():
        t0 = time.perf_counter()
        code = run(["check", str(path)])
        dt = time.perf_counter() - t0
        out = json.loads(capsys.readouterr().out)
        slowest = max(slowest, dt)
        if code != expected[name] or dt >= 1.0:
            failures.append(f"{name}: exit {code} in {dt:.3f}s")
        elif code == EXIT_OBSTRUCTION and len(out["obstruction"]["rainbows"]) > 2:
            failures.append(f"{name}: {len(out['obstruction']['rainbows'])} rainbows")
    ok = not failures
    with capsys.disabled():
        verdict(acceptance_log, 1, ok, f"{len(paths)} drawings ({len(paths) - 8} forest-shaped corpus instances), slowest {slowest:.3f}s")
    assert ok, failures


# -- 2 -------------------------------------------------------------------------


def test_criterion_2_oracle_equivalence(acceptance_log, corpus, capsys):
    t0 = time.perf_counter()
    mismatches, obstructed = [], 0
    for inst in corpus:
        ss = inst.stringset()
        a = find_obstruction(ss) is not None
        b = brute_force_obstruction(ss, vertex_cap=16) is not None
        obstructed += b
        if a != b:
            mismatches.append(inst.name)
    dt = time.perf_counter() - t0
    ok = len(corpus) >= 300 and not mismatches and dt < 60
    with capsys.disabled():
        verdict(
            acceptance_log,
            2,
            ok,
            f"{len(corpus)} instances, {obstructed} obstructed, {len(mismatches)} mismatches, {dt:.1f}s",
        )
    assert ok, mismatches


# -- 3 and 4 -------------------------------------------------------------------


@dataclass
class ExtensionRun:
    instances: int = 0
    states: int = 0
    failures: list = field(default_factory=list)
    traces: list = field(default_factory=list)
    seconds: float = 0.0


def _at_most_one_meeting(ss) -> bool:
    met: dict[frozenset, int] = {}
    for p in ss.incident:
        ids = sorted(ss.string_ids_at(p))
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                k = frozenset((a, b))
                met[k] = met.get(k, 0) + 1
    return all(v <= 1 for v in met.values())


@pytest.fixture(scope="module")
def extension_run(corpus):
    res = ExtensionRun()
    t0 = time.perf_counter()
    for inst in corpus:
        ss = inst.stringset()
        if find_obstruction(ss) is not None:
            continue
        res.instances += 1

        def on_state(state, rec, name=inst.name):
            res.states += 1
            if brute_force_obstruction(state, vertex_cap=200) is not None:
                res.failures.append(f"{name}: obstruction after {rec and rec.kind}")
            if not _at_most_one_meeting(state):
                res.failures.append(f"{name}: two strings meet twice after {rec and rec.kind}")

        try:
            arr, trace = extend_to_arrangement(ss, on_state=on_state)
        except Exception as exc:  # recorded, not raised: the criterion counts failures
            res.failures.append(f"{inst.name}: {type(exc).__name__}: {exc}")
            continue
        problems = verify_arrangement(arr)
        if problems:
            res.failures.append(f"{inst.name}: {problems[0]}")
        res.traces.append((inst.name, trace))
    res.seconds = time.perf_counter() - t0
    return res


def test_criterion_3_extension_soundness(acceptance_log, extension_run, capsys):
    r = extension_run
    ok = r.instances > 0 and not r.failures and r.seconds < 300
    with capsys.disabled():
        verdict(
            acceptance_log,
            3,
            ok,
            f"{r.instances} obstruction-free instances, {r.states} states checked by the oracle, "
            f"{len(r.failures)} failures, {r.seconds:.1f}s",
        )
    assert ok, r.failures[:5]


def test_criterion_4_step_monotonicity(acceptance_log, extension_run, capsys):
    bad, relaxed, worst = [], 0, 0.0
    for name, trace in extension_run.traces:
        for rec in trace.steps:
            if rec.pairs_after < rec.pairs_before:
                bad.append(f"{name}: pair count dropped at a {rec.kind} step")
            if rec.kind == "exterior-meeting" and rec.pairs_after <= rec.pairs_before:
                bad.append(f"{name}: exterior-meeting without a new pair")
        relaxed += len(trace.relaxations)
        if len(trace.steps) > trace.nominal_budget:
            bad.append(f"{name}: {len(trace.steps)} steps > budget {trace.nominal_budget}")
        if trace.nominal_budget:
            worst = max(worst, len(trace.steps) / trace.nominal_budget)
    ok = not bad and len(extension_run.traces) == extension_run.instances
    steps = sum(len(t.steps) for _, t in extension_run.traces)
    with capsys.disabled():
        verdict(
            acceptance_log,
            4,
            ok,
            f"{steps} steps, {relaxed} non-increasing disentangle steps logged, "
            f"max steps/budget {worst:.2f}",
        )
    assert ok, bad[:5]


# -- 5 -------------------------------------------------------------------------


def test_criterion_5_removal_correspondence(acceptance_log, corpus, capsys):
    t0 = time.perf_counter()
    checks, bad = 0, []
    for inst in corpus[:120]:
        ss = inst.stringset()
        for x in ss.plane_map().outer_vertices():
            sub = remove_vertex(ss, x)
            a = all_obstruction_curves(ss, avoid={x}, vertex_cap=None)
            b = all_obstruction_curves(sub, vertex_cap=None)
            exists_a = brute_force_obstruction(ss, vertex_cap=None, avoid={x}) is not None
            exists_b = brute_force_obstruction(sub, vertex_cap=None) is not None
            checks += 1
            if a != b or exists_a != exists_b or exists_a != bool(a):
                bad.append(f"{inst.name} - {x}")
    dt = time.perf_counter() - t0
    ok = not bad and checks > 0
    with capsys.disabled():
        verdict(acceptance_log, 5, ok, f"120 instances, {checks} outer vertices, {len(bad)} disagreements, {dt:.1f}s")
    assert ok, bad[:5]


# -- 6 -------------------------------------------------------------------------


def test_criterion_6_theorem4(acceptance_log, good_corpus, capsys):
    violated, b_count = [], 0
    for name, doc in good_corpus.items():
        gd = validate_good_drawing(doc.to_stringset())
        try:
            rep = theorem4_crosscheck(gd)
        except EquivalenceViolated as exc:
            violated.append(f"{name}: {exc}")
            continue
        b = find_b_configuration(gd)
        b_count += b is not None
        if (b is None) != (brute_force_obstruction(gd.sigma, vertex_cap=None) is None) or rep.pseudolinear != (b is None):
            violated.append(name)
    ok = len(good_corpus) >= 12 and {"FIX_K4X_OUT", "FIX_K4X_IN"} <= set(good_corpus) and not violated
    with capsys.disabled():
        verdict(acceptance_log, 6, ok, f"{len(good_corpus)} good drawings, {b_count} with B, {len(violated)} violations")
    assert ok, violated


# -- 7 -------------------------------------------------------------------------


def test_criterion_7_extraction(acceptance_log, good_corpus, cat, capsys):
    drawings = dict(good_corpus)
    for name in ("FIX_B", "FIX_W", "FIX_TRI", "FIX_DOT3"):
        drawings[name] = cat[name]
    bad, classes = [], {}
    for name, doc in drawings.items():
        try:
            cfg = extract_forbidden(doc.to_stringset())
        except NoObstruction:
            continue
        r, m = classify_config(cfg)
        ok, rb = verify_standalone(cfg)
        classes[name] = (r, m)
        if r > 2 or not ok:
            bad.append(f"{name}: r={r}, standalone rainbows {len(rb)}")
    ok = bool(classes) and not bad
    summary = ", ".join(f"{k}={v}" for k, v in sorted(classes.items()))
    with capsys.disabled():
        verdict(acceptance_log, 7, ok, f"{len(classes)} non-pseudolinear drawings: {summary}")
    assert ok, bad


# -- 8 -------------------------------------------------------------------------

_SWEEP = r"""
import hashlib, io, sys, tempfile, os, contextlib
from pathlib import Path
from pseudolinear.cli import run
fix = Path(sys.argv[1]); subs = sys.argv[2].split(",")
h = hashlib.sha256()
with tempfile.TemporaryDirectory() as d:
    for f in sorted(fix.glob("*.json")):
        for sub in subs:
            out, svg = Path(d) / "out", Path(d) / "pic.svg"
            args = [sub, str(f), "-o", str(out), "--trace"]
            if sub in ("check", "extend", "extract-forbidden"):
                args += ["--svg", str(svg)]
            err = io.StringIO()
            with contextlib.redirect_stderr(err):
                code = run(args)
            h.update(f"{f.name} {sub} {code}\n".encode())
            for p in (out, svg):
                if p.exists():
                    h.update(p.read_bytes()); p.unlink()
            h.update(err.getvalue().encode())
    out = Path(d) / "corpus"
    run(["corpus", "--count", "25", "-o", str(out)])
    for p in sorted(out.iterdir()):
        h.update(p.name.encode() + p.read_bytes())
print(h.hexdigest())
"""


def test_criterion_8_determinism(acceptance_log, capsys):
    digests = []
    for hashseed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run(
            [sys.executable, "-c", _SWEEP, str(FIX), ",".join(SUBCOMMANDS)],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 0, proc.stderr
        digests.append(proc.stdout.strip())
    n_fix = len(list(FIX.glob("*.json")))
    ok = len(set(digests)) == 1
    with capsys.disabled():
        verdict(
            acceptance_log,
            8,
            ok,
            f"{len(SUBCOMMANDS)} subcommands x {n_fix} fixtures + corpus, 3 processes with different hash seeds, "
            f"{len(set(digests))} distinct digest(s)",
        )
    assert ok, digests
