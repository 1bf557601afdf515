"""Command-line front end.

Exit codes: 0 success (pseudolinear), 10 obstruction found, 2 invalid input,
3 internal inconsistency, 4 vertex cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import CapExceeded, InternalInconsistency, InvalidInput, PseudolinearError
from .extension import extend_to_arrangement, verify_arrangement
from .fixtures import DEFAULT_SEED, random_corpus
from .forbidden import classify_config, extract_forbidden, verify_standalone
from .ingest import dumps, load_drawing, serialize_drawing
from .kn import theorem4_crosscheck, validate_good_drawing
from .obstruction import find_obstruction
from .oracle import brute_force_obstruction
from .render import render_arrangement_svg, render_svg
from .stringset import validate_general_position

EXIT_OK = 0
EXIT_OBSTRUCTION = 10
EXIT_INVALID = 2
EXIT_INTERNAL = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    svg: str | None = None
    oracle: bool = False
    cap: int = 16
    trace: bool = False
    seed: int = DEFAULT_SEED
    count: int = 300
    good: bool = False
    arrangement: bool = False

    def __post_init__(self):
        if self.cap < 3:
            raise InvalidInput("--cap must be at least 3")


def _emit(cfg: RunConfig, obj) -> None:
    data = dumps(obj)
    if cfg.output:
        Path(cfg.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _load(cfg: RunConfig):
    doc = load_drawing(cfg.input)
    return doc, doc.to_stringset()


def _search(cfg: RunConfig, ss):
    if cfg.oracle:
        return brute_force_obstruction(ss, vertex_cap=cfg.cap)
    return find_obstruction(ss, cap=cfg.cap)


def _report_json(rep, with_trace: bool) -> dict:
    out = rep.to_json()
    if not with_trace:
        out.pop("trace", None)
    return out


def cmd_validate(cfg: RunConfig) -> int:
    doc, ss = _load(cfg)
    rep = validate_general_position(ss)
    out = {
        "valid": rep.ok,
        "strings": len(ss.strings),
        "points": len(ss.incident),
        "crossings": rep.crossings,
        "violations": [str(v) for v in rep.violations],
    }
    if cfg.good or doc.graph_vertices is not None:
        gd = validate_good_drawing(ss, doc.graph_vertices)
        out["good"] = True
        out["graph_vertices"] = list(gd.vertices)
    _emit(cfg, out)
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_check(cfg: RunConfig) -> int:
    _, ss = _load(cfg)
    rep = _search(cfg, ss)
    if cfg.svg:
        Path(cfg.svg).write_bytes(render_svg(ss, rep))
    _emit(cfg, {"pseudolinear": rep is None, "obstruction": None if rep is None else _report_json(rep, cfg.trace)})
    return EXIT_OK if rep is None else EXIT_OBSTRUCTION


def cmd_extend(cfg: RunConfig) -> int:
    _, ss = _load(cfg)
    rep = _search(cfg, ss)
    if rep is not None:
        _emit(cfg, {"pseudolinear": False, "obstruction": _report_json(rep, cfg.trace)})
        return EXIT_OBSTRUCTION
    arr, trace = extend_to_arrangement(ss)
    problems = verify_arrangement(arr)
    if problems:
        raise InternalInconsistency("; ".join(problems))
    out = {"pseudolinear": True, "arrangement": arr.to_json()}
    if cfg.trace:
        out["trace"] = trace.to_json()
    if cfg.svg:
        Path(cfg.svg).write_bytes(render_arrangement_svg(arr))
    _emit(cfg, out)
    return EXIT_OK


def cmd_kn_b(cfg: RunConfig) -> int:
    doc, ss = _load(cfg)
    gd = validate_good_drawing(ss, doc.graph_vertices)
    rep = theorem4_crosscheck(gd, cap=cfg.cap)
    out = rep.to_json()
    if not cfg.trace and out["obstruction"] is not None:
        out["obstruction"].pop("trace", None)
    _emit(cfg, out)
    return EXIT_OK if rep.pseudolinear else EXIT_OBSTRUCTION


def cmd_extract_forbidden(cfg: RunConfig) -> int:
    doc, ss = _load(cfg)
    gd = validate_good_drawing(ss, doc.graph_vertices)
    conf = extract_forbidden(gd, vertex_cap=cfg.cap)
    ok, rb = verify_standalone(conf)
    if not ok:
        raise InternalInconsistency(f"extracted configuration has {len(rb)} rainbows")
    out = conf.to_json()
    r, m = classify_config(conf)
    out["standalone_obstruction"] = True
    if cfg.svg:
        alone = conf.standalone()
        Path(cfg.svg).write_bytes(render_svg(alone, None, title=f"forbidden r={r} m={m}"))
    _emit(cfg, out)
    return EXIT_OK


def cmd_render(cfg: RunConfig) -> int:
    _, ss = _load(cfg)
    target = cfg.svg or cfg.output
    if cfg.arrangement:
        rep = _search(cfg, ss)
        if rep is not None:
            data = render_svg(ss, rep)
            code = EXIT_OBSTRUCTION
        else:
            arr, _ = extend_to_arrangement(ss)
            data = render_arrangement_svg(arr)
            code = EXIT_OK
    else:
        rep = _search(cfg, ss)
        data = render_svg(ss, rep)
        code = EXIT_OK
    if target:
        Path(target).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return code


def cmd_corpus(cfg: RunConfig) -> int:
    corpus = random_corpus(cfg.count, seed=cfg.seed)
    if cfg.output:
        d = Path(cfg.output)
        d.mkdir(parents=True, exist_ok=True)
        for inst in corpus:
            (d / f"{inst.name}.json").write_bytes(serialize_drawing(inst.doc()))
        index = {"seed": cfg.seed, "count": len(corpus), "instances": [f"{i.name}.json" for i in corpus]}
        (d / "index.json").write_bytes(dumps(index))
    else:
        from .ingest import doc_to_json

        sys.stdout.buffer.write(dumps({"seed": cfg.seed, "instances": [doc_to_json(i.doc()) for i in corpus]}))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "extend": cmd_extend,
    "kn-b": cmd_kn_b,
    "extract-forbidden": cmd_extract_forbidden,
    "render": cmd_render,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudolinear", description="Pseudolinearity of string sets and drawings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", help="drawing document (JSON)")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.add_argument("--cap", type=int, default=16, help="vertex cap for exhaustive search (default 16)")
        sp.add_argument("--oracle", action="store_true", help="use the exhaustive cycle search")
        sp.add_argument("--trace", action="store_true", help="include the search or extension trace")
        sp.add_argument("--svg", help="also write an SVG picture here")

    sp = sub.add_parser("validate", help="general position, and good-drawing conditions with --good")
    common(sp)
    sp.add_argument("--good", action="store_true", help="also check the good-drawing conditions")
    common(sub.add_parser("check", help="is the string set pseudolinear?"))
    common(sub.add_parser("extend", help="extend to a pseudoline arrangement"))
    common(sub.add_parser("kn-b", help="B configuration and its agreement with the obstruction search"))
    common(sub.add_parser("extract-forbidden", help="forbidden subconfiguration of a good drawing"))
    sp = sub.add_parser("render", help="SVG picture")
    common(sp)
    sp.add_argument("--arrangement", action="store_true", help="draw the extended arrangement")
    sp = sub.add_parser("corpus", help="generate the random instance corpus")
    common(sp, needs_input=False)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--count", type=int, default=300)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "input"})
        return COMMANDS[cfg.command](cfg)
    except CapExceeded as exc:
        return _fail(exc, EXIT_CAP)
    except InternalInconsistency as exc:
        return _fail(exc, EXIT_INTERNAL)
    except InvalidInput as exc:
        return _fail(exc, EXIT_INVALID)
    except PseudolinearError as exc:
        return _fail(exc, EXIT_INTERNAL)
    except OSError as exc:
        return _fail(exc, EXIT_INVALID)


def _fail(exc: BaseException, code: int) -> int:
    sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}).decode())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
