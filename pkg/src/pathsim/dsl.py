"""Line-oriented experiment files (``.exp``).

One statement per line, ``#`` starts a comment::

    phase phi1 = pi/2          # stage-1 phase on R's b' arm
    phase phi3 = -pi/4         # stage-3 phase on R's b' arm
    detect L 1                 # stage 1 or 3, per photon
    detect R 3
    geometry paper-default     # preset, or explicit events:
    geometry R@BS3' 5 10       #   label t x
    model sum-threshold lambda = 0
    sweep phi1 0 2pi 360       # name from to steps (endpoints included)
    seed 42
    samples 100000

Angles are decimals or rational multiples of pi (``pi``, ``3pi/4``,
``-2*pi``); the latter stay exact through compilation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .angles import Angle, PiMultiple, format_angle, parse_angle
from .engine import Scenario
from .hidden import NonlocalOutcomeModel, make_model
from .relativity import EVENT_LABELS, PRESETS, R_BS3, ApparatusGeometry, SpacetimeEvent, preset_geometry

PHASE_NAMES = ("phi1", "phi3")
MODEL_PARAMS = {
    "local": ("lambda", "local"),
    "sum-threshold": ("lambda", "local"),
    "threshold": ("lambda", "local", "w_local", "w_phi1", "w_phi3"),
}
KEYWORDS = ("phase", "detect", "geometry", "model", "sweep", "seed", "samples")
_TOKEN_RE = re.compile(r"=|[^\s=]+")
_INT_RE = re.compile(r"^\d+$")


@dataclass(frozen=True)
class SourceText:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str
    token: str = ""

    def format(self, origin: str = "<string>") -> str:
        where = f"{origin}:{self.line}:{self.column}"
        return f"{where}: {self.message}" + (f" (at {self.token!r})" if self.token else "")


class DslError(ValueError):
    def __init__(self, errors, origin: str = "<string>"):
        self.errors = list(errors)
        self.origin = origin
        super().__init__("\n".join(e.format(origin) for e in self.errors))


class CompileError(ValueError):
    pass


# Statements.  ``line`` is kept for error reporting but ignored by equality.

@dataclass(frozen=True)
class SetPhase:
    name: str
    value: Angle
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Detect:
    side: str
    stage: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GeometryPreset:
    name: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GeometryEvent:
    label: str
    t: float
    x: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModelChoice:
    name: str
    params: tuple[tuple[str, Angle], ...] = ()
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(sorted(self.params)))


@dataclass(frozen=True)
class SweepSpec:
    name: str
    start: Angle
    stop: Angle
    steps: int
    line: int = field(default=0, compare=False)

    def grid(self) -> list[Angle]:
        """``steps`` points from ``start`` to ``stop`` inclusive; exact if both ends are."""
        if self.steps == 1:
            return [self.start]
        exact = isinstance(self.start, PiMultiple) and isinstance(self.stop, PiMultiple)
        if exact:
            a, b = self.start.coeff, self.stop.coeff
            return [PiMultiple(a + (b - a) * Fraction(k, self.steps - 1)) for k in range(self.steps)]
        a, b = float(self.start), float(self.stop)
        return [a + (b - a) * k / (self.steps - 1) for k in range(self.steps)]


@dataclass(frozen=True)
class Seed:
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Samples:
    value: int
    line: int = field(default=0, compare=False)


Statement = SetPhase | Detect | GeometryPreset | GeometryEvent | ModelChoice | SweepSpec | Seed | Samples

_RANK = {SetPhase: 0, Detect: 1, GeometryPreset: 2, GeometryEvent: 3, ModelChoice: 4, SweepSpec: 5, Seed: 6, Samples: 7}


def _sort_key(st) -> tuple:
    sub = {
        SetPhase: lambda s: s.name,
        Detect: lambda s: s.side,
        GeometryEvent: lambda s: EVENT_LABELS.index(s.label),
    }.get(type(st), lambda s: 0)(st)
    return (_RANK[type(st)], sub)


def _slot(st) -> tuple:
    # Statements sharing a slot are duplicates.
    return _sort_key(st)


@dataclass(frozen=True, eq=False)
class ExperimentAst:
    statements: tuple = ()

    def canonical(self) -> tuple:
        return tuple(sorted(self.statements, key=_sort_key))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExperimentAst) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def find(self, kind) -> list:
        return [s for s in self.statements if isinstance(s, kind)]


# --- parsing ---------------------------------------------------------------

class _LineParser:
    def __init__(self, lineno: int, tokens: list[tuple[int, str]], errors: list[ParseError]):
        self.lineno = lineno
        self.tokens = tokens
        self.pos = 1
        self.errors = errors
        self.failed = False

    def error(self, message: str, tok: tuple[int, str] | None = None) -> None:
        col, text = tok if tok is not None else self.tokens[0]
        self.errors.append(ParseError(self.lineno, col, message, text))
        self.failed = True

    def next(self, what: str) -> tuple[int, str] | None:
        if self.pos >= len(self.tokens):
            col, text = self.tokens[-1]
            self.error(f"expected {what}", (col, text))
            return None
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def angle(self, what: str) -> Angle | None:
        tok = self.next(what)
        if tok is None:
            return None
        try:
            return parse_angle(tok[1])
        except ValueError:
            self.error(f"malformed {what}: expected a decimal or a rational multiple of pi", tok)
            return None

    def number(self, what: str) -> float | None:
        tok = self.next(what)
        if tok is None:
            return None
        try:
            value = float(tok[1])
        except ValueError:
            value = float("nan")
        if value != value or value in (float("inf"), float("-inf")):
            self.error(f"malformed number for {what}", tok)
            return None
        return value

    def integer(self, what: str, upper: int | None = None) -> int | None:
        tok = self.next(what)
        if tok is None:
            return None
        if not _INT_RE.match(tok[1]) or (upper is not None and int(tok[1]) >= upper):
            bound = f" below {upper}" if upper is not None else ""
            self.error(f"{what} must be a non-negative integer{bound}", tok)
            return None
        return int(tok[1])

    def expect(self, text: str) -> bool:
        tok = self.next(f"'{text}'")
        if tok is None:
            return False
        if tok[1] != text:
            self.error(f"expected '{text}'", tok)
            return False
        return True

    def finish(self) -> None:
        if not self.failed and self.pos < len(self.tokens):
            self.error("unexpected token", self.tokens[self.pos])


def _parse_statement(p: _LineParser):
    keyword = p.tokens[0][1]
    line = p.lineno
    if keyword == "phase":
        tok = p.next("phase name")
        if tok is None:
            return None
        if tok[1] not in PHASE_NAMES:
            p.error(f"unknown phase name; expected one of {', '.join(PHASE_NAMES)}", tok)
            return None
        if not p.expect("="):
            return None
        value = p.angle("phase value")
        return None if value is None else SetPhase(tok[1], value, line)

    if keyword == "detect":
        side = p.next("side L or R")
        if side is None:
            return None
        if side[1] not in ("L", "R"):
            p.error("side must be L or R", side)
            return None
        stage = p.next("stage")
        if stage is None:
            return None
        if stage[1] not in ("1", "3"):
            p.error("stage must be 1 or 3", stage)
            return None
        return Detect(side[1], int(stage[1]), line)

    if keyword == "geometry":
        tok = p.next("preset name or event label")
        if tok is None:
            return None
        if tok[1] in PRESETS:
            return GeometryPreset(tok[1], line)
        if tok[1] not in EVENT_LABELS:
            p.error(f"unknown geometry preset or event label; labels are {', '.join(EVENT_LABELS)}", tok)
            return None
        t = p.number("event time")
        x = None if t is None else p.number("event position")
        return None if x is None else GeometryEvent(tok[1], t, x, line)

    if keyword == "model":
        tok = p.next("model name")
        if tok is None:
            return None
        if tok[1] not in MODEL_PARAMS:
            p.error(f"unknown model; expected one of {', '.join(MODEL_PARAMS)}", tok)
            return None
        allowed = MODEL_PARAMS[tok[1]]
        params: dict[str, Angle] = {}
        while p.pos < len(p.tokens) and not p.failed:
            key = p.next("parameter name")
            if key[1] not in allowed:
                p.error(f"unknown parameter for model {tok[1]}; allowed: {', '.join(allowed)}", key)
                break
            if key[1] in params:
                p.error(f"duplicate parameter {key[1]}", key)
                break
            if not p.expect("="):
                break
            value = p.angle(f"value of {key[1]}")
            if value is None:
                break
            params[key[1]] = value
        return None if p.failed else ModelChoice(tok[1], tuple(params.items()), line)

    if keyword == "sweep":
        tok = p.next("phase name")
        if tok is None:
            return None
        if tok[1] not in PHASE_NAMES:
            p.error(f"unknown phase name; expected one of {', '.join(PHASE_NAMES)}", tok)
            return None
        start = p.angle("sweep start")
        stop = None if start is None else p.angle("sweep stop")
        steps = None if stop is None else p.integer("sweep steps")
        if steps is None:
            return None
        if steps < 1:
            p.error("sweep steps must be at least 1", p.tokens[p.pos - 1])
            return None
        return SweepSpec(tok[1], start, stop, steps, line)

    if keyword == "seed":
        value = p.integer("seed", upper=2**64)
        return None if value is None else Seed(value, line)

    if keyword == "samples":
        value = p.integer("samples")
        return None if value is None else Samples(value, line)

    p.error(f"unknown keyword; expected one of {', '.join(KEYWORDS)}")
    return None


def _duplicate_message(st) -> str:
    if isinstance(st, SetPhase):
        return f"duplicate assignment to {st.name}"
    if isinstance(st, Detect):
        return f"duplicate detect statement for side {st.side}"
    if isinstance(st, GeometryEvent):
        return f"duplicate geometry event {st.label}"
    keyword = {GeometryPreset: "geometry preset", ModelChoice: "model", SweepSpec: "sweep"}.get(
        type(st), type(st).__name__.lower()
    )
    return f"duplicate {keyword} statement"


def parse(src: SourceText | str) -> ExperimentAst:
    """Parse a whole file; raises :class:`DslError` carrying every error found."""
    if isinstance(src, str):
        src = SourceText(src)
    errors: list[ParseError] = []
    statements = []
    seen: dict[tuple, object] = {}
    for lineno, raw in enumerate(src.text.splitlines(), start=1):
        code = raw.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(code)]
        if not tokens:
            continue
        p = _LineParser(lineno, tokens, errors)
        st = _parse_statement(p)
        p.finish()
        if st is None or p.failed:
            continue
        slot = _slot(st)
        if slot in seen:
            p.error(_duplicate_message(st), tokens[0])
            continue
        seen[slot] = st
        statements.append(st)
    if errors:
        raise DslError(errors, src.origin)
    return ExperimentAst(tuple(statements))


def load(path) -> ExperimentAst:
    path = Path(path)
    return parse(SourceText(path.read_text(encoding="utf-8"), str(path)))


# --- printing --------------------------------------------------------------

def _format_number(x: float) -> str:
    return repr(float(x))


def _format_statement(st) -> str:
    if isinstance(st, SetPhase):
        return f"phase {st.name} = {format_angle(st.value)}"
    if isinstance(st, Detect):
        return f"detect {st.side} {st.stage}"
    if isinstance(st, GeometryPreset):
        return f"geometry {st.name}"
    if isinstance(st, GeometryEvent):
        return f"geometry {st.label} {_format_number(st.t)} {_format_number(st.x)}"
    if isinstance(st, ModelChoice):
        params = "".join(f" {k} = {format_angle(v)}" for k, v in st.params)
        return f"model {st.name}{params}"
    if isinstance(st, SweepSpec):
        return f"sweep {st.name} {format_angle(st.start)} {format_angle(st.stop)} {st.steps}"
    if isinstance(st, Seed):
        return f"seed {st.value}"
    if isinstance(st, Samples):
        return f"samples {st.value}"
    raise TypeError(f"not a statement: {st!r}")


def print_canonical(ast: ExperimentAst) -> str:
    return "".join(_format_statement(st) + "\n" for st in ast.canonical())


# --- compilation -----------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    """Everything the engine needs, with defaults filled in."""

    scenario: Scenario
    geometry: ApparatusGeometry
    model_name: str
    model: NonlocalOutcomeModel = field(compare=False)
    lam: Angle = 0.0
    local_setting: Angle = 0.0
    seed: int = 0
    samples: int = 0
    sweep: SweepSpec | None = None

    @property
    def grid(self) -> list[Angle]:
        return self.sweep.grid() if self.sweep else []


def compile_ast(ast: ExperimentAst) -> Experiment:
    """Apply defaults (phases 0, both photons at stage 1, ``paper-default``
    geometry, ``sum-threshold`` model, seed 0, no sampling) and validate."""
    phases = {s.name: s.value for s in ast.find(SetPhase)}
    stages = {s.side: s.stage for s in ast.find(Detect)}
    scenario = Scenario(
        phases.get("phi1", PiMultiple(0)),
        phases.get("phi3", PiMultiple(0)),
        stages.get("L", 1),
        stages.get("R", 1),
    )

    presets = ast.find(GeometryPreset)
    events = ast.find(GeometryEvent)
    if events:
        base = dict(PRESETS[presets[0].name]) if presets else {}
        base.update({e.label: SpacetimeEvent(e.t, e.x, e.label) for e in events})
        try:
            geometry = ApparatusGeometry(base, name=presets[0].name if presets else None)
        except ValueError as exc:
            raise CompileError(str(exc)) from None
    else:
        geometry = preset_geometry(presets[0].name if presets else "paper-default")

    if stages.get("R") == 3 and R_BS3 not in geometry:
        raise CompileError(f"'detect R 3' requires a {R_BS3} event in the geometry")

    models = ast.find(ModelChoice)
    choice = models[0] if models else ModelChoice("sum-threshold")
    params = dict(choice.params)
    lam = params.pop("lambda", 0.0)
    local = params.pop("local", 0.0)
    model = make_model(choice.name, **{k: float(v) for k, v in params.items()})

    seeds, samples, sweeps = ast.find(Seed), ast.find(Samples), ast.find(SweepSpec)
    return Experiment(
        scenario=scenario,
        geometry=geometry,
        model_name=choice.name,
        model=model,
        lam=lam,
        local_setting=local,
        seed=seeds[0].value if seeds else 0,
        samples=samples[0].value if samples else 0,
        sweep=sweeps[0] if sweeps else None,
    )


compile = compile_ast
