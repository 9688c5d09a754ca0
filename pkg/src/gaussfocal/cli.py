"""Experiment runner: presets, custom inputs, reporting.

The command line exposes three subcommands.  ``run`` executes a named
preset (rank loci of symmetric/generic/skew matrices, the exceptional
27-coordinate cubic, or the moving-line family in P^6), ``custom`` runs
the same pipeline on a user-supplied variety, and ``sweep`` runs every
preset back to back.  Each trial samples a point, computes the Gauss
fibre and its first-order family, and measures the focal divisor; the
integers that come out are compared against a frozen expectation table
shipped as package data.

Exit codes: 0 all checks pass, 2 expectation/invariant failure,
3 degeneracy retries exhausted, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from time import perf_counter

from .fieldcore import (
    Fp,
    Rng,
    derive_seed,
    is_probable_prime,
    random_prime,
    vecmat,
)
from .focal import (
    ChartFailed,
    CharTooSmall,
    ContainmentFailed,
    DegenerateLines,
    ExtractionFailed,
    FocalReport,
    NonVanishingTransversalComponent,
    NotDegenerate,
    ProfileDisagreement,
    char_kernel_at_point,
    characteristic_matrix,
    chart_independence,
    check_bounds,
    extract_reduced_power,
    fiber_family_chart,
    focal_profile,
    focal_report,
    form_zero_point,
    hyperband_chart,
)
from .gaussmap import (
    FiberVerificationFailed,
    SingularSamplePoint,
    fiber_codim_data,
    gauss_fiber,
    tangent_space,
)
from .mpoly import SparsePoly, restrict_to_line, up_roots
from .varieties import (
    DegenerateSurface,
    InconsistentDim,
    MatrixShape,
    RankDeficientSample,
    VarietySpec,
    WitnessPoint,
    albert_cubic,
    hyperband_dims,
    hyperband_family,
    rank_locus_spec,
    variety_dim,
)

DEFAULT_SEED = 1729
_SCORZA_M = (2, 3, 4, 5)
_MIN_PRIME = 1 << 32


class InputError(ValueError):
    """Anything wrong with arguments or input files (exit code 4)."""


class ParseError(InputError):
    """Syntax error in an expression or spec file, with its position."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class ArityError(InputError):
    """A variable index beyond the declared ambient dimension."""


# --- expression parsing ---------------------------------------------------------
#
# Grammar:  expr   := term (('+'|'-') term)*
#           term   := factor ('*' factor)*
#           factor := ('+'|'-') factor | atom ('^' INT)?
#           atom   := VAR | INT | '(' expr ')'
# Variables are x0..xN; whitespace is free; everything else is an error.


def _tokenize(src):
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, None, line, col))
            col += 1
            i += 1
            continue
        if ch == "x":
            j = i + 1
            while j < len(src) and src[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable needs an index, like x0", line, col)
            tokens.append(("var", int(src[i + 1:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            tokens.append(("int", int(src[i:j]), line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("end", None, line, col))
    return tokens


class _ExprParser:
    def __init__(self, tokens, nvars):
        self.tokens = tokens
        self.pos = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        kind, _, line, col = self.peek()
        shown = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"{message}, found {shown}", line, col)

    def expr(self):
        poly = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            poly = poly.add(rhs if op == "+" else rhs.scale(-1))
        return poly

    def term(self):
        poly = self.factor()
        while self.peek()[0] == "*":
            self.take()
            poly = poly.mul(self.factor())
        return poly

    def factor(self):
        kind = self.peek()[0]
        if kind in "+-":
            op = self.take()[0]
            inner = self.factor()
            return inner if op == "+" else inner.scale(-1)
        poly = self.atom()
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] != "int":
                self.fail("expected an integer exponent after '^'")
            power = self.take()[1]
            out = SparsePoly(self.nvars, {(0,) * self.nvars: 1})
            for _ in range(power):
                out = out.mul(poly)
            return out
        return poly

    def atom(self):
        kind, value, line, col = self.peek()
        if kind == "var":
            self.take()
            if value >= self.nvars:
                raise ArityError(
                    f"x{value} exceeds the ambient dimension "
                    f"(variables run x0..x{self.nvars - 1})")
            e = tuple(1 if t == value else 0 for t in range(self.nvars))
            return SparsePoly(self.nvars, {e: 1})
        if kind == "int":
            self.take()
            return SparsePoly(self.nvars, {(0,) * self.nvars: value})
        if kind == "(":
            self.take()
            poly = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return poly
        self.fail("expected a variable, number or '('")


def parse_expression(src: str, nvars: int) -> SparsePoly:
    parser = _ExprParser(_tokenize(src), nvars)
    poly = parser.expr()
    if parser.peek()[0] != "end":
        parser.fail("unexpected trailing input")
    return SparsePoly(nvars, {e: c for e, c in poly.terms.items() if c})


def homogeneous_degree(poly: SparsePoly):
    """The common total degree of all terms, or None if they disagree
    (or the polynomial is zero)."""
    degrees = {sum(e) for e in poly.terms}
    return degrees.pop() if len(degrees) == 1 else None


# --- spec files -----------------------------------------------------------------


_SHAPES = {
    "symmetric": lambda rows, cols: MatrixShape.symmetric(rows),
    "generic": MatrixShape.generic,
    "skew": lambda rows, cols: MatrixShape.skew(rows),
}


def _parsed_generator(src, nvars, what):
    if not isinstance(src, str):
        raise InputError(f"{what} must be a string expression")
    poly = parse_expression(src, nvars)
    if not poly.terms:
        raise InputError(f"{what} is identically zero: {src!r}")
    if homogeneous_degree(poly) is None:
        raise InputError(f"{what} is not homogeneous: {src!r}")
    return poly


def _pencil_sampler(prog):
    """Sample a smooth point of a hypersurface via roots along pencils."""

    def sampler(rng, fp):
        nv = prog.arity
        for _ in range(32):
            a = [rng.field(fp.p) for _ in range(nv)]
            d = [rng.field(fp.p) for _ in range(nv)]
            roots = up_roots(restrict_to_line(prog, a, d, fp), fp, rng)
            if not roots:
                continue
            t = sorted(roots)[0]
            x = [(av + t * dv) % fp.p for av, dv in zip(a, d)]
            if any(x) and any(prog.grad(x, fp)):
                return WitnessPoint(x)
        raise RankDeficientSample("no smooth pencil point on the hypersurface")

    return sampler


def parse_spec_file(path) -> VarietySpec:
    """Load a custom variety: either a matrix rank locus or an explicit
    homogeneous hypersurface with optional singular-locus generators."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read spec file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}",
                         exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise InputError("spec file must hold a JSON object")
    if ("matrix" in data) == ("ambient_dim" in data):
        raise InputError(
            "spec needs exactly one of 'matrix' or 'ambient_dim'")

    if "matrix" in data:
        desc = data["matrix"]
        kind = desc.get("shape")
        if kind not in _SHAPES:
            raise InputError(f"unknown matrix shape {kind!r} "
                             "(use symmetric, generic or skew)")
        rows, cols = desc.get("rows"), desc.get("cols", desc.get("rows"))
        if not (isinstance(rows, int) and isinstance(cols, int)
                and rows >= 2 and cols >= 2):
            raise InputError("matrix rows/cols must be integers >= 2")
        if kind in ("symmetric", "skew") and rows != cols:
            raise InputError(f"{kind} matrices must be square")
        rb = data.get("rank_bound")
        if not isinstance(rb, int) or rb < 1:
            raise InputError("rank_bound must be a positive integer")
        if kind == "skew" and rb % 2:
            raise InputError("skew matrices have even rank; "
                             "use an even rank_bound")
        try:
            return rank_locus_spec(_SHAPES[kind](rows, cols), rb, name=p.stem)
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    ambient = data["ambient_dim"]
    if not isinstance(ambient, int) or ambient < 2:
        raise InputError("ambient_dim must be an integer >= 2")
    nvars = ambient + 1
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError("'generators' must be a non-empty list")
    if len(gens) > 1:
        raise InputError(
            "explicit specs support exactly one generator (a hypersurface); "
            "multi-generator varieties have no general point sampler — "
            "use the matrix form for rank loci")
    polys = [_parsed_generator(g, nvars, "generator") for g in gens]
    progs = [q.compile() for q in polys]
    singular = None
    if "singular_generators" in data:
        sg = data["singular_generators"]
        if not isinstance(sg, list) or not sg:
            raise InputError("'singular_generators' must be a non-empty list")
        sprogs = [_parsed_generator(g, nvars, "singular generator").compile()
                  for g in sg]
        singular = VarietySpec(p.stem + "-singular", ambient, sprogs,
                               None, None)
    return VarietySpec(p.stem, ambient, progs, singular,
                       _pencil_sampler(progs[0]))


# --- experiment registry --------------------------------------------------------


class ExperimentConfig:
    __slots__ = ("experiment", "m", "prime", "prime_count", "trials", "lines",
                 "seed", "features", "verify", "spec_path")

    def __init__(self, experiment, m=None, prime=None, prime_count=2,
                 trials=3, lines=8, seed=DEFAULT_SEED, features=(),
                 verify="basic", spec_path=None):
        self.experiment = experiment
        self.m = m
        self.prime = prime
        self.prime_count = prime_count
        self.trials = trials
        self.lines = lines
        self.seed = seed
        self.features = tuple(features)
        self.verify = verify
        self.spec_path = spec_path


class ExperimentPlan:
    __slots__ = ("label", "kind", "spec", "expect")

    def __init__(self, label, kind, spec, expect):
        self.label = label
        self.kind = kind
        self.spec = spec
        self.expect = expect


_EXPECTATIONS = None


def expectations() -> dict:
    global _EXPECTATIONS
    if _EXPECTATIONS is None:
        text = (resources.files("gaussfocal") / "data" /
                "expectations.json").read_text()
        _EXPECTATIONS = json.loads(text)
    return _EXPECTATIONS


def expectation_for(name, m):
    entry = expectations().get(name)
    if entry is not None and m is not None:
        entry = entry[str(m)]
    return entry


_SCORZA_SHAPES = {
    "scorza-sy-sym": lambda m: (MatrixShape.symmetric(m + 1), 2),
    "scorza-sy-gen": lambda m: (MatrixShape.generic(m + 1, m + 1), 2),
    "scorza-sy-skew": lambda m: (MatrixShape.skew(2 * m + 2), 4),
    "scorza-max-sym": lambda m: (MatrixShape.symmetric(m + 1), m),
    "scorza-max-gen": lambda m: (MatrixShape.generic(m + 1, m + 1), m),
    "scorza-max-skew": lambda m: (MatrixShape.skew(2 * m + 2), 2 * m),
}

_SEVERI_SHAPES = {
    "severi-2": (MatrixShape.symmetric(3), 2),
    "severi-4": (MatrixShape.generic(3, 3), 2),
    "severi-8": (MatrixShape.skew(6), 4),
}


def _validate_config(cfg):
    for feature in cfg.features:
        if feature != "albert":
            raise InputError(f"unknown feature {feature!r}")
    if cfg.verify not in ("basic", "full"):
        raise InputError("verify level must be 'basic' or 'full'")
    if not isinstance(cfg.trials, int) or cfg.trials < 1:
        raise InputError("trials must be a positive integer")
    if not isinstance(cfg.lines, int) or cfg.lines < 1:
        raise InputError("lines must be a positive integer")
    if cfg.prime is not None:
        if not isinstance(cfg.prime, int) or not is_probable_prime(cfg.prime):
            raise InputError(f"{cfg.prime} is not prime")
        if cfg.prime < _MIN_PRIME:
            raise InputError("the prime must be at least 2^32 so random "
                             "sampling stays generic")
    elif not 1 <= cfg.prime_count <= 8:
        raise InputError("prime count must be between 1 and 8")


def build_plan(cfg: ExperimentConfig) -> ExperimentPlan:
    _validate_config(cfg)
    name = cfg.experiment
    if cfg.spec_path is not None:
        spec = parse_spec_file(cfg.spec_path)
        return ExperimentPlan(f"custom-{spec.name}", "rank", spec, None)
    if name in _SCORZA_SHAPES:
        m = 3 if cfg.m is None else cfg.m
        if m not in _SCORZA_M:
            raise InputError(f"{name} supports m in {list(_SCORZA_M)}")
        shape, rb = _SCORZA_SHAPES[name](m)
        spec = rank_locus_spec(shape, rb, name=f"{name}-m{m}")
        return ExperimentPlan(f"{name}-m{m}", "rank", spec,
                              expectation_for(name, m))
    if cfg.m is not None:
        raise InputError("--m applies only to the scorza presets")
    if name in _SEVERI_SHAPES:
        shape, rb = _SEVERI_SHAPES[name]
        spec = rank_locus_spec(shape, rb, name=name)
        return ExperimentPlan(name, "rank", spec, expectation_for(name, None))
    if name == "severi-16":
        if "albert" not in cfg.features:
            raise InputError("severi-16 needs '--features albert'")
        return ExperimentPlan(name, "rank", albert_cubic(name),
                              expectation_for(name, None))
    if name == "hyperband":
        return ExperimentPlan(name, "hyperband", None,
                              expectation_for(name, None))
    raise InputError(f"unknown experiment {name!r}")


def sweep_labels(features):
    labels = [("severi-2", None), ("severi-4", None), ("severi-8", None)]
    if "albert" in features:
        labels.append(("severi-16", None))
    labels += [(name, 3) for name in _SCORZA_SHAPES]
    labels.append(("hyperband", None))
    return labels


def derive_primes(seed: int, count: int):
    """Word-size primes derived deterministically from the master seed."""
    rng = Rng(derive_seed(seed, 0x9E37))
    out = []
    while len(out) < count:
        p = random_prime(rng)
        if p not in out:
            out.append(p)
    return out


# --- the pipeline ---------------------------------------------------------------


_CHECK_KEYS = ("n", "dim_x", "c", "r", "k", "focal_degree", "mu",
               "reduced_degree", "quadric_rank", "sing_containment")


def _verify_record(record, expect):
    where = (f"{record['experiment']} trial {record['trial']} "
             f"(p={record['prime']})")
    fails = []
    if expect:
        for key in _CHECK_KEYS:
            if key in expect and record[key] != expect[key]:
                fails.append(f"{where}: {key} = {record[key]}, "
                             f"expected {expect[key]}")
    degree = record["focal_degree"]
    if degree is not None and degree != record["r"]:
        fails.append(f"{where}: focal degree {degree} differs from the "
                     f"Gauss rank {record['r']}")
    mu, red = record["mu"], record["reduced_degree"]
    if None not in (mu, red, degree) and mu * red != degree:
        fails.append(f"{where}: mu * reduced degree = {mu * red} != {degree}")
    for bname, status in record["bounds"].items():
        if status == "Fail":
            fails.append(f"{where}: bound {bname} failed")
    return fails


def _proportional(u, v, fp):
    if not any(u) or not any(v):
        return False
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if (u[i] * v[j] - u[j] * v[i]) % fp.p:
                return False
    return True


def _record(plan, prime, seed_t, trial, n, dim_x, c, r, k, rep,
            containment, wall):
    return {
        "experiment": plan.label,
        "prime": prime,
        "seed": seed_t,
        "trial": trial,
        "n": n,
        "dim_x": dim_x,
        "c": c,
        "r": r,
        "k": k,
        "focal_degree": rep.degree,
        "mu": rep.mu,
        "reduced_degree": rep.reduced_degree,
        "quadric_rank": rep.q_rank,
        "sing_containment": containment,
        "bounds": {b.name: b.status for b in rep.bounds},
        "wall_time": round(wall, 6),
    }


def _rank_trial(plan, cfg, fp, prime, trial, dim_x, c):
    seed_t = derive_seed(cfg.seed, prime, trial)
    rng = Rng(seed_t)
    start = perf_counter()
    spec = plan.spec
    failures = []
    pt = spec.sampler(rng, fp)
    frame = tangent_space(spec, pt.coords, fp, dim_x)
    fib = gauss_fiber(spec, frame, fp, rng)
    if fib.k == 0:
        rep = FocalReport(r=fib.r, c=c)
        rep.bounds = check_bounds(rep)
        containment = "Skipped"
    else:
        chart = fiber_family_chart(fib, fp, rng)
        charm = characteristic_matrix(chart, frame, fp)
        rep = focal_report(spec, fib, charm, fp, rng, c=c,
                           witnesses=pt.witnesses, lines=cfg.lines)
        containment = rep.containment.status if rep.containment else "Skipped"
        if rep.extraction_error:
            failures.append(f"{plan.label}: extraction failed: "
                            f"{rep.extraction_error}")
        if cfg.verify == "full" and not chart_independence(fib, frame, fp, rng):
            failures.append(f"{plan.label}: two independent charts gave "
                            "non-proportional focal forms")
    record = _record(plan, prime, seed_t, trial, spec.ambient_dim, dim_x, c,
                     fib.r, fib.k, rep, containment, perf_counter() - start)
    return record, failures


def _hyperband_trial(plan, cfg, fp, prime, trial):
    seed_t = derive_seed(cfg.seed, prime, trial)
    rng = Rng(seed_t)
    start = perf_counter()
    failures = []
    fam = hyperband_family(rng, fp)
    dim_x, dim_f = hyperband_dims(fam, fp, rng)
    c = dim_x - dim_f
    chart = hyperband_chart(fam, fp)
    charm = characteristic_matrix(chart, None, fp)
    profile, degree = focal_profile(charm, fp, rng, lines=cfg.lines)
    rep = FocalReport(r=charm.r, degree=degree, profile=profile, c=c)
    containment = "Skipped"
    kernel = None
    if len(profile) == 1:
        rep.mu, rep.reduced_degree = profile[0]
        try:
            form = extract_reduced_power(charm, rep.mu, rep.reduced_degree,
                                         fp, rng)
            rep.reduced_form = form
            t0 = form_zero_point(form, fp, rng)
            if t0 is not None:
                kernel = char_kernel_at_point(charm, t0, fp)
                rep.kernel_at_focus = kernel
                focus = vecmat(t0, chart.basis, fp)
                if _proportional(focus, fam.predictor(), fp):
                    containment = "Pass"
                else:
                    containment = "Fail"
                    failures.append(f"{plan.label}: computed focus differs "
                                    "from the marked surface point")
        except ExtractionFailed as exc:
            rep.extraction_error = str(exc)
            failures.append(f"{plan.label}: extraction failed: {exc}")
    rep.bounds = check_bounds(rep)
    expect = plan.expect
    if expect:
        if [list(pair) for pair in profile] != expect["profile"]:
            failures.append(f"{plan.label}: profile {list(profile)} != "
                            f"expected {expect['profile']}")
        if kernel != expect["kernel_at_focus"]:
            failures.append(f"{plan.label}: kernel at the focus is {kernel}, "
                            f"expected {expect['kernel_at_focus']}")
        if dim_f != expect["dim_f"]:
            failures.append(f"{plan.label}: dim F = {dim_f}, "
                            f"expected {expect['dim_f']}")
    if cfg.verify == "full":
        fam2 = hyperband_family(rng, fp)
        charm2 = characteristic_matrix(hyperband_chart(fam2, fp), None, fp)
        profile2, _ = focal_profile(charm2, fp, rng, lines=cfg.lines)
        if profile2 != profile:
            failures.append(f"{plan.label}: a second random family gave "
                            f"profile {profile2} instead of {profile}")
    record = _record(plan, prime, seed_t, trial, 6, dim_x, c, charm.r,
                     chart.k, rep, containment, perf_counter() - start)
    return record, failures


def _witness_battery(plan, fp, rng, samples=25):
    spec = plan.spec
    for _ in range(samples):
        pt = spec.sampler(rng, fp)
        for g in spec.generators:
            if g.eval(pt.coords, fp) != 0:
                return [f"{plan.label}: a generator misses a sampled point"]
    return []


def run_experiment(cfg: ExperimentConfig):
    """All trials of one experiment; returns (records, failure messages)."""
    plan = build_plan(cfg)
    if cfg.prime is not None:
        primes = [cfg.prime]
    else:
        primes = derive_primes(cfg.seed, cfg.prime_count)
    records, failures = [], []
    for prime in sorted(primes):
        fp = Fp(prime)
        if plan.kind == "rank":
            rng_dim = Rng(derive_seed(cfg.seed, prime, 1 << 20))
            dim_x = variety_dim(plan.spec, fp, rng_dim)
            c = fiber_codim_data(plan.spec, dim_x, fp, rng_dim)
            if cfg.verify == "full":
                failures += _witness_battery(plan, fp, rng_dim)
            for trial in range(cfg.trials):
                record, fails = _rank_trial(plan, cfg, fp, prime, trial,
                                            dim_x, c)
                records.append(record)
                failures += fails + _verify_record(record, plan.expect)
        else:
            for trial in range(cfg.trials):
                record, fails = _hyperband_trial(plan, cfg, fp, prime, trial)
                records.append(record)
                failures += fails + _verify_record(record, plan.expect)
    records.sort(key=lambda rec: (rec["experiment"], rec["prime"],
                                  rec["trial"]))
    return records, failures


# --- reporting ------------------------------------------------------------------


_TABLE_COLUMNS = (
    ("experiment", "experiment"),
    ("N", "n"),
    ("dimX", "dim_x"),
    ("r", "r"),
    ("k", "k"),
    ("mu", "mu"),
    ("red.deg", "reduced_degree"),
    ("rank q", "quadric_rank"),
    ("contain", "sing_containment"),
    ("bounds", "bounds"),
)


def _cell(record, key):
    value = record[key]
    if key == "bounds":
        return "".join(status[0] for status in value.values()) or "-"
    return "-" if value is None else str(value)


def _strip_time(record):
    return {k: v for k, v in record.items() if k != "wall_time"}


def emit_report(records, failures, json_mode=False, jsonl_out=None,
                stream=None):
    stream = sys.stdout if stream is None else stream
    if jsonl_out is not None:
        with open(jsonl_out, "a") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True) + "\n")
    if json_mode:
        stream.write(json.dumps([_strip_time(r) for r in records],
                                indent=2, sort_keys=True) + "\n")
    else:
        rows = [[_cell(r, key) for _, key in _TABLE_COLUMNS] for r in records]
        headers = [title for title, _ in _TABLE_COLUMNS]
        widths = [max(len(h), *(len(row[i]) for row in rows)) if rows
                  else len(h) for i, h in enumerate(headers)]
        stream.write("  ".join(h.ljust(w) for h, w in zip(headers, widths))
                     .rstrip() + "\n")
        for row in rows:
            stream.write("  ".join(cell.ljust(w) for cell, w
                                   in zip(row, widths)).rstrip() + "\n")
        if failures:
            stream.write(f"verdict: FAIL ({len(failures)} problems)\n")
        elif records and all(r["k"] == 0 for r in records):
            stream.write("verdict: PASS — non-degenerate Gauss map "
                         "(point fibres, no focal divisor)\n")
        else:
            noun = "record" if len(records) == 1 else "records"
            stream.write(f"verdict: PASS ({len(records)} {noun})\n")
    for message in failures:
        print(f"problem: {message}", file=sys.stderr)


# --- entry point ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_common(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--prime", type=int, default=None,
                       help="run over this one prime")
    group.add_argument("--primes", type=int, default=2, dest="prime_count",
                       metavar="K", help="number of derived primes")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--trials", type=int, default=3,
                     help="sampled points per prime")
    sub.add_argument("--lines", type=int, default=8,
                     help="profile consensus lines")
    out = sub.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true",
                     help="emit a JSON array instead of the table")
    out.add_argument("--jsonl-out", metavar="FILE", default=None,
                     help="append one JSON record per trial to FILE")
    sub.add_argument("--verify", choices=("basic", "full"), default="basic")
    sub.add_argument("--features", nargs="*", default=(), metavar="NAME",
                     help="optional features (albert)")


def _build_parser():
    parser = _Parser(prog="gaussfocal",
                     description="Focal divisors of Gauss-degenerate "
                                 "varieties over big prime fields.")
    subs = parser.add_subparsers(dest="command")
    run = subs.add_parser("run", help="run one preset experiment")
    run.add_argument("experiment")
    run.add_argument("--m", type=int, default=None,
                     help="size parameter for the scorza presets")
    _add_common(run)
    custom = subs.add_parser("custom", help="run a user-supplied variety")
    custom.add_argument("--spec", required=True, metavar="FILE")
    _add_common(custom)
    sweep = subs.add_parser("sweep", help="run every preset")
    _add_common(sweep)
    return parser


def _config_from_args(ns, experiment=None, m=None, spec_path=None):
    return ExperimentConfig(
        experiment,
        m=m,
        prime=ns.prime,
        prime_count=ns.prime_count,
        trials=ns.trials,
        lines=ns.lines,
        seed=ns.seed,
        features=tuple(ns.features),
        verify=ns.verify,
        spec_path=spec_path,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise InputError("pick a command: run, custom or sweep")
        if ns.command == "sweep":
            records, failures = [], []
            for name, m in sweep_labels(tuple(ns.features)):
                cfg = _config_from_args(ns, experiment=name, m=m)
                recs, fails = run_experiment(cfg)
                records += recs
                failures += fails
            records.sort(key=lambda rec: (rec["experiment"], rec["prime"],
                                          rec["trial"]))
        elif ns.command == "custom":
            cfg = _config_from_args(ns, spec_path=ns.spec)
            records, failures = run_experiment(cfg)
        else:
            cfg = _config_from_args(ns, experiment=ns.experiment, m=ns.m)
            records, failures = run_experiment(cfg)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except (RankDeficientSample, SingularSamplePoint, ChartFailed,
            DegenerateLines, DegenerateSurface, InconsistentDim,
            CharTooSmall) as err:
        print(f"degeneracy: {err}", file=sys.stderr)
        return 3
    except (FiberVerificationFailed, ProfileDisagreement, ContainmentFailed,
            NonVanishingTransversalComponent, NotDegenerate) as err:
        print(f"invariant violation: {err}", file=sys.stderr)
        return 2
    try:
        emit_report(records, failures, json_mode=ns.json,
                    jsonl_out=ns.jsonl_out)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
