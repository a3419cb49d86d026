"""The Hilbert-function engine and the closed-form verification procedures.

A configuration imposes linear conditions on the degree-d forms of its
ambient P^n; stacking one row block per component gives the conditions
matrix, whose rank is HF(X, d) and whose kernel dimension is dim (I_X)_d.
Genericity is randomized: dimension queries take the best (maximum) rank
over independent trials and flag any disagreement between trials.

On top of the engine sit the paper-scale verifiers: critical line counts,
the auxiliary-family parameter identities, the sundial-scheme statements,
bipolynomiality sweeps, hyperplane-splitting (Castelnuovo) checks, and
two-regime transition profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .geometry import GenericSampler, Subspace, random_subspace
from .linalg import ExactMatrix, Field, PrimeField, RowReducer
from .polyspace import (
    directional_derivative_row,
    evaluation_row,
    monomial_count,
    restriction_matrix,
)
from .schemes import (
    Component,
    ConfigTemplate,
    Configuration,
    JetPoint,
    LinearSpace,
    ReducedPoint,
    residual as scheme_residual,
    trace as scheme_trace,
    template,
)

DEFAULT_TRIALS = 3

ConfigFamily = Union[Configuration, ConfigTemplate, Callable[[GenericSampler], Configuration]]


class PostulationError(ValueError):
    """Base class for postulation usage errors."""


# ---------------------------------------------------------------------------
# Conditions matrices
# ---------------------------------------------------------------------------


def _jet_directions(jet: JetPoint) -> list[tuple]:
    """Directions completing the jet's point to a basis of its space's cone.

    The point itself is excluded: its derivative row is a multiple of the
    evaluation row (Euler), so dropping it gives exactly dim(T)+1 rows.
    """
    cols = jet.directions.columns()
    sol = jet.directions.matrix.solve(jet.point.coords)
    drop = next(i for i, v in enumerate(sol) if v)
    return [col for i, col in enumerate(cols) if i != drop]


def component_rows(comp: Component, degree: int, field: Field) -> list[tuple]:
    """The block of condition rows one component contributes in one degree."""
    if isinstance(comp, LinearSpace):
        return [tuple(r) for r in restriction_matrix(comp.space.param, degree, field).rows()]
    if isinstance(comp, ReducedPoint):
        return [evaluation_row(comp.point.coords, degree, field)]
    rows = [evaluation_row(comp.point.coords, degree, field)]
    if degree >= 1:
        for direction in _jet_directions(comp):
            rows.append(directional_derivative_row(comp.point.coords, direction, degree, field))
    return rows


@dataclass(frozen=True)
class ConditionsMatrix:
    """Stacked condition rows of a configuration in one degree; one row block
    per component, in configuration order."""

    config: Configuration
    degree: int
    matrix: ExactMatrix
    blocks: tuple[tuple[int, int], ...]

    @property
    def hf(self) -> int:
        return self.matrix.rank()

    @property
    def ideal_dim(self) -> int:
        return self.matrix.kernel_dim()


def conditions_matrix(config: Configuration, degree: int) -> ConditionsMatrix:
    if degree < 0:
        raise PostulationError("degree must be nonnegative")
    ncols = monomial_count(config.ambient_dim + 1, degree)
    rows: list[tuple] = []
    blocks: list[tuple[int, int]] = []
    for comp in config.components:
        start = len(rows)
        rows.extend(component_rows(comp, degree, config.field))
        blocks.append((start, len(rows)))
    matrix = ExactMatrix(rows, config.field, ncols=ncols)
    return ConditionsMatrix(config, degree, matrix, tuple(blocks))


# ---------------------------------------------------------------------------
# Hilbert function / ideal dimension with trials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertRecord:
    ambient: int
    degree: int
    hf: int
    ideal_dim: int
    expected_ideal_dim: int | None
    trials_agreed: bool

    @property
    def matches_expected(self) -> bool:
        return self.expected_ideal_dim is None or self.ideal_dim == self.expected_ideal_dim


def _instantiate(family: ConfigFamily, sampler: GenericSampler, trial: int) -> Configuration:
    if isinstance(family, Configuration):
        return family
    if isinstance(family, ConfigTemplate):
        return family.instantiate(sampler.split("trial", trial))
    return family(sampler.split("trial", trial))


def ideal_dim(
    family: ConfigFamily,
    degree: int,
    *,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
    expected: int | None = None,
) -> HilbertRecord:
    """dim (I_X)_d for a configuration, template, or builder callable.

    Templates/builders are re-instantiated with a fresh generic sample per
    trial; the reported value uses the maximum rank (= minimum kernel), and
    `trials_agreed` records whether every trial matched.  For a template
    the naive expected dimension is filled in automatically.
    """
    if trials < 1:
        raise PostulationError("need at least one trial")
    if sampler is None:
        sampler = GenericSampler()
    if isinstance(family, Configuration):
        trials = 1
    ranks = []
    ambient = None
    for t in range(trials):
        config = _instantiate(family, sampler, t)
        ambient = config.ambient_dim
        ranks.append(conditions_matrix(config, degree).hf)
    total = monomial_count(ambient + 1, degree)
    hf = max(ranks)
    if expected is None and isinstance(family, ConfigTemplate):
        expected = max(0, total - family.condition_count(degree))
    return HilbertRecord(
        ambient=ambient,
        degree=degree,
        hf=hf,
        ideal_dim=total - hf,
        expected_ideal_dim=expected,
        trials_agreed=len(set(ranks)) == 1,
    )


def hilbert_function(family: ConfigFamily, degree: int, **kwargs) -> int:
    return ideal_dim(family, degree, **kwargs).hf


def expected_ideal_dim(
    n: int,
    degree: int,
    linear_dims: Sequence[int] = (),
    *,
    points: int = 0,
    sundials: int = 0,
    conics: int = 0,
) -> int:
    """Naive expected dim (I)_d: ambient dimension minus the disjoint-union
    condition count (sundials count 2d+2, degenerate conics 2d+1)."""
    total = monomial_count(n + 1, degree)
    spent = sum(monomial_count(m + 1, degree) for m in linear_dims)
    spent += points
    if degree == 0:
        spent += sundials + conics
    else:
        spent += sundials * (2 * degree + 2) + conics * (2 * degree + 1)
    return max(0, total - spent)


# ---------------------------------------------------------------------------
# Critical counts
# ---------------------------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class MixedConicParams:
    """Even-degree auxiliary family in P^3: conics + lines + points.

    `off_quadric_points` is the number of simple points kept off the
    auxiliary quadric in the splitting argument; it is meaningful for
    degrees > 2 (the degree-2 instance needs no such points)."""

    conics: int
    lines: int
    points: int
    off_quadric_points: int


@dataclass(frozen=True)
class EmbeddedConicParams:
    """Odd-degree auxiliary family in P^3: one conic with an embedded point
    plus lines and points, at the floor and ceiling line counts."""

    lines_floor: int
    lines_ceil: int
    points: int
    off_quadric_points: int


@dataclass(frozen=True)
class HyperplaneSplit:
    """Counts for splitting plane + s lines along a hyperplane: how many
    lines stay generic, how many leftover interpolation points the residual
    needs, and how many lines move into the hyperplane at s = floor."""

    kept_lines: int
    leftover: int
    specialized_floor: int


@dataclass(frozen=True)
class CriticalParams:
    """The integer invariants of one (n, d) cell.

    with_plane_floor/ceil are the line counts where the expected dimension
    of plane + s lines crosses zero; lines_only_floor/ceil the same without
    the plane.  with_plane_floor_prev is the floor count one degree down
    (the count of lines kept off the hyperplane when specializing)."""

    ambient: int
    degree: int
    with_plane_floor: int
    with_plane_ceil: int
    with_plane_floor_prev: int
    lines_only_floor: int
    lines_only_ceil: int
    mixed_conics: MixedConicParams | None
    embedded_conic: EmbeddedConicParams | None
    split: HyperplaneSplit


def _mixed_conic_params(d: int) -> MixedConicParams:
    points = math.comb(d + 3, 4) // d
    conics = math.comb(d + 3, 4) - d * points
    lines = Fraction(math.comb(d + 3, 3) - conics * (2 * d + 1) - points, d + 1)
    if lines.denominator != 1:
        raise PostulationError(f"non-integral line count in mixed-conic family at d={d}")
    lines = int(lines)
    off = math.comb(d + 1, 3) - (conics + lines) * (d - 1)
    return MixedConicParams(conics, lines, points, off)


def _embedded_conic_params(d: int) -> EmbeddedConicParams:
    points = Fraction(math.comb(d + 3, 4), d)
    if points.denominator != 1:
        raise PostulationError(f"non-integral point count in embedded-conic family at d={d}")
    points = int(points)
    lines_floor = math.comb(d + 4, 4) // (d + 1) - points - 2
    lines_ceil = _ceil_div(math.comb(d + 4, 4), d + 1) - points - 2
    off = math.comb(d + 1, 3) - lines_floor * (d - 1)
    return EmbeddedConicParams(lines_floor, lines_ceil, points, off)


def critical_params(n: int, d: int) -> CriticalParams:
    if n < 3 or d < 1:
        raise PostulationError("critical counts need n >= 3 and d >= 1")
    ambient = math.comb(n + d, n)
    plane_conditions = math.comb(d + 2, 2)
    numerator = ambient - plane_conditions
    with_plane_floor = numerator // (d + 1)
    with_plane_ceil = _ceil_div(numerator, d + 1)
    prev_numerator = math.comb(n + d - 1, n) - math.comb(d + 1, 2)
    with_plane_floor_prev = prev_numerator // d
    leftover = prev_numerator - with_plane_floor_prev * d
    specialized = with_plane_floor - with_plane_floor_prev - 2 * leftover
    mixed = _mixed_conic_params(d) if d >= 2 and d % 8 in (0, 2, 4) else None
    embedded = (
        _embedded_conic_params(d)
        if (d % 2 == 1 and d >= 3) or d % 8 == 6
        else None
    )
    return CriticalParams(
        ambient=n,
        degree=d,
        with_plane_floor=with_plane_floor,
        with_plane_ceil=with_plane_ceil,
        with_plane_floor_prev=with_plane_floor_prev,
        lines_only_floor=ambient // (d + 1),
        lines_only_ceil=_ceil_div(ambient, d + 1),
        mixed_conics=mixed,
        embedded_conic=embedded,
        split=HyperplaneSplit(with_plane_floor_prev, leftover, specialized),
    )


@dataclass(frozen=True)
class LemmaParamReport:
    """Outcome of sweeping the closed-form parameter identities."""

    d_max: int
    ambients: tuple[int, ...]
    checks: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_lemma_params(d_max: int, *, ambients: Sequence[int] = (5, 6, 7, 8)) -> LemmaParamReport:
    """Check every applicable parameter identity for d <= d_max.

    Mixed-conic family (even d, d mod 8 in {0,2,4}): the line count is an
    integer and, for d > 2, the off-quadric point count x satisfies
    0 <= x < points.  Embedded-conic family (odd d >= 3 or d mod 8 == 6):
    the point count is an integer, the floor line count is positive, and
    0 <= x < points.  For each ambient n in `ambients` and 2 <= d <= d_max,
    the hyperplane-split counts satisfy specialized >= 0, leftover <= d-1,
    and leftover <= kept (the residual has enough generic points to pair
    with every trace conic).
    """
    if d_max < 2:
        raise PostulationError("d_max must be at least 2")
    violations: list[str] = []
    checks = 0
    for d in range(2, d_max + 1):
        if d % 8 in (0, 2, 4):
            pts = math.comb(d + 3, 4) // d
            conics = math.comb(d + 3, 4) - d * pts
            lines = Fraction(math.comb(d + 3, 3) - conics * (2 * d + 1) - pts, d + 1)
            checks += 1
            if lines.denominator != 1:
                violations.append(f"mixed-conics d={d}: line count {lines} not integral")
                continue
            if d > 2:
                x = math.comb(d + 1, 3) - (conics + int(lines)) * (d - 1)
                checks += 1
                if not 0 <= x < pts:
                    violations.append(f"mixed-conics d={d}: x={x} outside [0, {pts})")
        if (d % 2 == 1 and d >= 3) or d % 8 == 6:
            pts = Fraction(math.comb(d + 3, 4), d)
            checks += 1
            if pts.denominator != 1:
                violations.append(f"embedded-conic d={d}: point count {pts} not integral")
                continue
            lines_floor = math.comb(d + 4, 4) // (d + 1) - int(pts) - 2
            checks += 1
            if lines_floor <= 0:
                violations.append(f"embedded-conic d={d}: floor line count {lines_floor} <= 0")
            x = math.comb(d + 1, 3) - lines_floor * (d - 1)
            checks += 1
            if not 0 <= x < int(pts):
                violations.append(f"embedded-conic d={d}: x={x} outside [0, {int(pts)})")
    for n in ambients:
        for d in range(2, d_max + 1):
            cp = critical_params(n, d)
            split = cp.split
            checks += 3
            if split.specialized_floor < 0:
                violations.append(
                    f"split n={n} d={d}: specialized count {split.specialized_floor} < 0"
                )
            if split.leftover > d - 1:
                violations.append(f"split n={n} d={d}: leftover {split.leftover} > d-1")
            if split.leftover > split.kept_lines:
                violations.append(
                    f"split n={n} d={d}: leftover {split.leftover} exceeds kept lines "
                    f"{split.kept_lines}"
                )
    return LemmaParamReport(d_max, tuple(ambients), checks, tuple(violations))


# ---------------------------------------------------------------------------
# Sundial-scheme statements
# ---------------------------------------------------------------------------


def build_w(n: int, d: int, variant: Union[str, tuple] = "S") -> ConfigTemplate:
    """The sundial-scheme families used by the line-degeneration statements.

    variant "S"  -> (d-1) sundials + (t - 2(d-1)) generic lines,
    variant "S*" -> (d-1) sundials + (t* - 2(d-1)) generic lines,
    variant (a, b, c) -> a sundials + b conics + b points + c lines,
    all in P^n, with t/t* the lines-only critical counts.
    """
    cp = critical_params(n, d)
    t_floor, t_ceil = cp.lines_only_floor, cp.lines_only_ceil
    if t_floor < 2 * (d - 1):
        raise PostulationError(
            f"lines-only count t={t_floor} < 2(d-1) at (n={n}, d={d}); "
            "the sundial family does not fit"
        )
    if variant == "S":
        return template(n, sundials=d - 1, lines=t_floor - 2 * (d - 1))
    if variant == "S*":
        return template(n, sundials=d - 1, lines=t_ceil - 2 * (d - 1))
    if isinstance(variant, tuple) and len(variant) == 3:
        a, b, c = variant
        if a < 0 or b < 0 or c < 0:
            raise PostulationError("family counts must be nonnegative")
        if a + b > d - 1:
            raise PostulationError(f"a+b = {a + b} exceeds d-1 = {d - 1}")
        if c > t_floor - 2 * (a + b):
            raise PostulationError(f"c = {c} exceeds t - 2(a+b) = {t_floor - 2 * (a + b)}")
        return template(n, sundials=a, conics=b, points=b, lines=c)
    raise PostulationError(f"unknown family variant {variant!r}")


@dataclass(frozen=True)
class StatementCheck:
    ambient: int
    degree: int
    variant: Union[str, tuple]
    computed: int
    expected: int
    trials_agreed: bool

    @property
    def passed(self) -> bool:
        return self.computed == self.expected and self.trials_agreed


def verify_statement(
    n: int,
    d: int,
    variant: Union[str, tuple] = "S",
    *,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
) -> StatementCheck:
    """Check that one sundial-scheme family imposes independent conditions."""
    family = build_w(n, d, variant)
    cp = critical_params(n, d)
    total = monomial_count(n + 1, d)
    if variant == "S":
        expected = total - cp.lines_only_floor * (d + 1)
    elif variant == "S*":
        expected = 0
    else:
        a, b, c = variant
        expected = total - (2 * a + 2 * b + c) * (d + 1)
    rec = ideal_dim(family, d, trials=trials, sampler=sampler)
    return StatementCheck(n, d, variant, rec.ideal_dim, expected, rec.trials_agreed)


# ---------------------------------------------------------------------------
# Bipolynomiality sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    ambient: int
    degree: int
    count: int
    hf: int
    ideal_dim: int
    expected: int
    trials_agreed: bool

    @property
    def passed(self) -> bool:
        return self.ideal_dim == self.expected and self.trials_agreed


def default_count_bracket(n: int, d: int, family: str) -> list[int]:
    """The default s-values bracketing both regimes: {floor-1, floor, ceil, ceil+1}."""
    cp = critical_params(n, d)
    if family == "plane-lines":
        lo, hi = cp.with_plane_floor, cp.with_plane_ceil
    else:
        lo, hi = cp.lines_only_floor, cp.lines_only_ceil
    return sorted({max(0, lo - 1), lo, hi, hi + 1})


def line_count_sweep(
    n: int,
    d: int,
    counts: Sequence[int],
    *,
    with_plane: bool,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
) -> list[SweepRow]:
    """Ranks of plane(+optional) + s lines for every requested s, in one
    incremental elimination pass per trial."""
    if sampler is None:
        sampler = GenericSampler()
    if not isinstance(sampler.field, PrimeField):
        raise PostulationError("line sweeps run in prime mode")
    wanted = sorted(set(counts))
    if not wanted or wanted[0] < 0:
        raise PostulationError("line counts must be nonnegative")
    total = monomial_count(n + 1, d)
    ranks: dict[int, list[int]] = {s: [] for s in wanted}
    for t in range(trials):
        trial_sampler = sampler.split("sweep-trial", t)
        reducer = RowReducer(total, sampler.field)
        base_template = template(n, planes=1) if with_plane else template(n)
        base = base_template.instantiate(trial_sampler.split("base"))
        for comp in base.components:
            reducer.add_rows(component_rows(comp, d, sampler.field))
        line_sampler = trial_sampler.split("lines")
        if 0 in ranks:
            ranks[0].append(reducer.rank)
        for s in range(1, wanted[-1] + 1):
            line = random_subspace(line_sampler.split(s), n, 1)
            reducer.add_rows(component_rows(LinearSpace(line), d, sampler.field))
            if s in ranks:
                ranks[s].append(reducer.rank)
    rows = []
    plane_dims = [2] if with_plane else []
    for s in wanted:
        expected = expected_ideal_dim(n, d, plane_dims + [1] * s)
        hf = max(ranks[s])
        rows.append(
            SweepRow(n, d, s, hf, total - hf, expected, len(set(ranks[s])) == 1)
        )
    return rows


def verify_bipolynomial(
    n: int,
    degrees: Sequence[int],
    family: Union[str, Callable[[int], ConfigTemplate]] = "plane-lines",
    *,
    counts: Sequence[int] | None = None,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
) -> list[SweepRow]:
    """Sweep (d, s) cells and compare dim (I)_d against the expected value.

    `family` is "plane-lines", "lines", or a callable s -> template for
    custom shapes.  With no explicit counts, each degree uses the default
    bracket around its critical counts.
    """
    if sampler is None:
        sampler = GenericSampler()
    rows: list[SweepRow] = []
    for d in degrees:
        cell_counts = counts if counts is not None else (
            default_count_bracket(n, d, family) if isinstance(family, str) else None
        )
        if cell_counts is None:
            raise PostulationError("custom families need explicit counts")
        cell_sampler = sampler.split("bipoly", n, d)
        if isinstance(family, str):
            if family not in ("plane-lines", "lines"):
                raise PostulationError(f"unknown family {family!r}")
            rows.extend(
                line_count_sweep(
                    n,
                    d,
                    cell_counts,
                    with_plane=(family == "plane-lines"),
                    trials=trials,
                    sampler=cell_sampler,
                )
            )
        else:
            for s in cell_counts:
                rec = ideal_dim(family(s), d, trials=trials, sampler=cell_sampler.split(s))
                rows.append(
                    SweepRow(n, d, s, rec.hf, rec.ideal_dim, rec.expected_ideal_dim, rec.trials_agreed)
                )
    return rows


# ---------------------------------------------------------------------------
# Hyperplane splitting (Castelnuovo) and transition profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CastelnuovoCheck:
    degree: int
    full_dim: int
    residual_dim: int
    trace_dim: int

    @property
    def holds(self) -> bool:
        return self.full_dim <= self.residual_dim + self.trace_dim


def castelnuovo_check(
    config: Configuration,
    hyperplane: Subspace,
    degree: int,
    *,
    trials: int = 1,
) -> CastelnuovoCheck:
    """dim (I_X)_d <= dim (I_{Res_H X})_{d-1} + dim (I_{Tr_H X})_d for a
    concrete configuration and hyperplane."""
    if degree < 1:
        raise PostulationError("the splitting inequality needs degree >= 1")
    full = ideal_dim(config, degree, trials=trials).ideal_dim
    res = ideal_dim(scheme_residual(config, hyperplane), degree - 1, trials=trials).ideal_dim
    tr = ideal_dim(scheme_trace(config, hyperplane), degree, trials=trials).ideal_dim
    return CastelnuovoCheck(degree, full, res, tr)


@dataclass(frozen=True)
class TransitionRow:
    degree: int
    hf: int
    ambient_poly: int
    component_poly: int

    @property
    def regime(self) -> str:
        amb = self.hf == self.ambient_poly
        comp = self.hf == self.component_poly
        if amb and comp:
            return "both"
        if amb:
            return "ambient"
        if comp:
            return "component"
        return "neither"


@dataclass(frozen=True)
class TransitionProfile:
    """HF(X, d) for d = 0..d_max against the two candidate polynomials.

    Reports (never asserts) whether an ambient-polynomial prefix and a
    component-polynomial suffix tile the whole degree range."""

    ambient: int
    rows: tuple[TransitionRow, ...]
    last_ambient_degree: int | None
    first_component_degree: int | None
    transition_degree: int | None
    two_regime: bool
    findings: tuple[str, ...]


def transition_profile(
    family: ConfigFamily,
    d_max: int,
    *,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
    component_poly: Callable[[int], int] | None = None,
) -> TransitionProfile:
    if d_max < 1:
        raise PostulationError("profile needs d_max >= 1")
    if component_poly is None:
        if isinstance(family, ConfigTemplate):
            component_poly = family.condition_count
        else:
            raise PostulationError("non-template families need an explicit component polynomial")
    rows = []
    ambient = None
    for d in range(d_max + 1):
        rec = ideal_dim(family, d, trials=trials, sampler=sampler)
        ambient = rec.ambient
        rows.append(
            TransitionRow(d, rec.hf, monomial_count(ambient + 1, d), component_poly(d))
        )
    last_ambient = max((r.degree for r in rows if r.hf == r.ambient_poly), default=None)
    first_component = min((r.degree for r in rows if r.hf == r.component_poly), default=None)
    transition = None
    for k in range(-1, d_max + 1):
        if all(r.hf == r.ambient_poly for r in rows if r.degree <= k) and all(
            r.hf == r.component_poly for r in rows if r.degree > k
        ):
            transition = k
            break
    findings = tuple(
        f"degree {r.degree}: HF={r.hf} matches neither polynomial "
        f"(ambient {r.ambient_poly}, components {r.component_poly})"
        for r in rows
        if r.regime == "neither"
    )
    return TransitionProfile(
        ambient=ambient,
        rows=tuple(rows),
        last_ambient_degree=last_ambient,
        first_component_degree=first_component,
        transition_degree=transition,
        two_regime=transition is not None,
        findings=findings,
    )
