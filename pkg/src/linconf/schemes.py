"""Scheme components and configurations, plus the hyperplane residual/trace
calculus for the supported component kinds.

Components are linear spaces, reduced points, and jet points.  A jet point
is the first-order neighborhood of a point restricted to the directions of
a subspace through it (with the full ambient space it is the usual double
point).  Two composite builders assemble these pieces:

* a degenerate conic -- two lines meeting in one point;
* an (m+2)-dimensional sundial -- a line meeting an m-plane in a point P,
  together with the jet of P along a generic (m+2)-space containing both.
  A sundial is a flat limit of a disjoint line + m-plane pair and imposes
  the same number of conditions in every degree.

The residual of a configuration with respect to a hyperplane H (the ideal
quotient by H's equation) and the trace (the schematic intersection with
H, rewritten inside H) are computed by component-wise rules; they cover
exactly the shapes needed here, and a jet whose whole direction space lies
in H is rejected rather than guessed at.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

from .geometry import (
    EmptyIntersection,
    GenericSampler,
    GeometryError,
    ProjPoint,
    Subspace,
    contains,
    contains_sub,
    in_hyperplane_coords,
    intersect_hyperplane,
    random_line_through,
    random_point,
    random_point_on,
    random_subspace,
    random_subspace_in,
    span,
)
from .linalg import Field

SCHEMA_VERSION = 1


class SchemeError(ValueError):
    """Base class for configuration usage errors."""


class UnsupportedResidual(SchemeError):
    """Residual of a jet point whose whole direction space lies in H."""


@dataclass(frozen=True)
class LinearSpace:
    space: Subspace
    label: str = ""


@dataclass(frozen=True)
class ReducedPoint:
    point: ProjPoint
    label: str = ""


@dataclass(frozen=True)
class JetPoint:
    """First-order vanishing at `point` along the directions of `directions`."""

    point: ProjPoint
    directions: Subspace
    label: str = ""

    def __post_init__(self):
        if not contains(self.directions, self.point):
            raise SchemeError("jet point must lie on its direction space")


Component = Union[LinearSpace, ReducedPoint, JetPoint]


def _component_ambient(comp: Component) -> int:
    if isinstance(comp, LinearSpace):
        return comp.space.ambient_dim
    if isinstance(comp, ReducedPoint):
        return comp.point.ambient_dim
    return comp.point.ambient_dim


def _component_field(comp: Component) -> Field:
    if isinstance(comp, LinearSpace):
        return comp.space.field
    return comp.point.field


@dataclass(frozen=True)
class Configuration:
    """Finite union of components in one P^n (duplicates permitted; the rank
    computation resolves any dependency)."""

    ambient_dim: int
    components: tuple[Component, ...]
    field: Field

    def __post_init__(self):
        for comp in self.components:
            if _component_ambient(comp) != self.ambient_dim:
                raise SchemeError("component ambient dimensions disagree")
            if _component_field(comp) != self.field:
                raise SchemeError("component field modes disagree")

    def labels(self) -> tuple[str, ...]:
        return tuple(getattr(c, "label", "") for c in self.components)

    def extend(self, extra: Sequence[Component]) -> "Configuration":
        return Configuration(self.ambient_dim, self.components + tuple(extra), self.field)

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class SundialSpec:
    """The parts of one sundial, with their incidences validated."""

    ambient: int
    plane_dim: int
    line: Subspace
    plane: Subspace
    point: ProjPoint
    tangent: Subspace

    def __post_init__(self):
        m = self.plane_dim
        if self.plane.dim != m or self.line.dim != 1:
            raise SchemeError("sundial parts have wrong dimensions")
        if not (contains(self.line, self.point) and contains(self.plane, self.point)):
            raise SchemeError("sundial point must lie on the line and the plane")
        if contains_sub(self.plane, self.line):
            raise SchemeError("sundial line must not lie inside the plane")
        if self.tangent.dim != m + 2:
            raise SchemeError("sundial tangent space must have dimension m + 2")
        if not (contains_sub(self.tangent, self.line) and contains_sub(self.tangent, self.plane)):
            raise SchemeError("sundial tangent space must contain line and plane")

    def components(self, label: str = "sundial") -> tuple[Component, ...]:
        return (
            LinearSpace(self.line, f"{label}.line"),
            LinearSpace(self.plane, f"{label}.plane"),
            JetPoint(self.point, self.tangent, f"{label}.jet"),
        )


def sample_sundial(
    sampler: GenericSampler,
    n: int,
    m: int = 1,
    *,
    inside: Subspace | None = None,
) -> SundialSpec:
    """Draw a generic (m+2)-dimensional sundial in P^n.

    With `inside` given (a hyperplane), the line and the plane are drawn
    inside it while the jet's direction space sticks out -- the
    specialization used by the hyperplane-splitting arguments.
    """
    if m < 1:
        raise SchemeError("sundial plane dimension must be >= 1")
    if n < m + 2:
        raise SchemeError(f"a {m + 2}-dimensional sundial needs ambient >= {m + 2}")
    if inside is not None and inside.dim < m + 1:
        raise SchemeError("the carrier subspace is too small for the sundial body")
    if inside is not None:
        plane = random_subspace_in(sampler, inside, m)
    else:
        plane = random_subspace(sampler, n, m)
    point = random_point_on(sampler, plane)
    line = random_line_through(sampler, point, inside=inside, avoid=plane)
    body = span([line, plane])
    while True:
        extra = random_point(sampler, n)
        if contains(body, extra):
            continue
        if inside is not None and contains(inside, extra):
            continue
        tangent = span([body, extra])
        break
    return SundialSpec(n, m, line, plane, point, tangent)


def make_sundial(sampler: GenericSampler, n: int, m: int = 1, *, label: str = "sundial") -> Configuration:
    spec = sample_sundial(sampler, n, m)
    return Configuration(n, spec.components(label), sampler.field)


def sample_degenerate_conic(
    sampler: GenericSampler,
    n: int,
    *,
    inside: Subspace | None = None,
) -> tuple[Subspace, Subspace, ProjPoint]:
    """Two lines meeting in exactly one point, otherwise generic."""
    if n < 2:
        raise SchemeError("a degenerate conic needs ambient >= 2")
    if inside is not None:
        point = random_point_on(sampler, inside)
    else:
        point = random_point(sampler, n)
    first = random_line_through(sampler, point, inside=inside)
    while True:
        second = random_line_through(sampler, point, inside=inside)
        if span([first, second]).dim == 2:
            return first, second, point


def make_degenerate_conic(sampler: GenericSampler, n: int, *, label: str = "conic") -> Configuration:
    first, second, point = sample_degenerate_conic(sampler, n)
    comps = (
        LinearSpace(first, f"{label}.line1@{list(point.coords)}"),
        LinearSpace(second, f"{label}.line2@{list(point.coords)}"),
    )
    return Configuration(n, comps, sampler.field)


def _check_hyperplane(config: Configuration, hyp: Subspace):
    if hyp.ambient_dim != config.ambient_dim:
        raise SchemeError("hyperplane ambient dimension differs from the configuration")
    if hyp.dim != config.ambient_dim - 1:
        raise SchemeError("residual/trace need a hyperplane")
    if hyp.field != config.field:
        raise SchemeError("hyperplane field mode differs from the configuration")


def residual(config: Configuration, hyp: Subspace) -> Configuration:
    """Component-wise ideal quotient by the hyperplane's equation.

    Linear pieces inside H vanish from the residual; pieces off H survive
    unchanged; a jet point sitting on H with directions sticking out leaves
    its reduced support point behind.
    """
    _check_hyperplane(config, hyp)
    kept: list[Component] = []
    for comp in config.components:
        if isinstance(comp, LinearSpace):
            if not contains_sub(hyp, comp.space):
                kept.append(comp)
        elif isinstance(comp, ReducedPoint):
            if not contains(hyp, comp.point):
                kept.append(comp)
        else:
            if not contains(hyp, comp.point):
                kept.append(comp)
            elif contains_sub(hyp, comp.directions):
                raise UnsupportedResidual(
                    "jet point with all directions inside the hyperplane"
                )
            else:
                kept.append(ReducedPoint(comp.point, comp.label))
    return Configuration(config.ambient_dim, tuple(kept), config.field)


def trace(config: Configuration, hyp: Subspace) -> Configuration:
    """Schematic intersection with the hyperplane, in H's own coordinates.

    A jet point on H keeps a jet along its sectioned direction space even
    when retained components through the point already absorb it; the rank
    computation eliminates the redundancy.
    """
    _check_hyperplane(config, hyp)
    kept: list[Component] = []
    for comp in config.components:
        if isinstance(comp, LinearSpace):
            if contains_sub(hyp, comp.space):
                kept.append(LinearSpace(in_hyperplane_coords(comp.space, hyp), comp.label))
            else:
                try:
                    section = intersect_hyperplane(comp.space, hyp)
                except EmptyIntersection:
                    continue
                inner = in_hyperplane_coords(section, hyp)
                if inner.dim == 0:
                    kept.append(ReducedPoint(inner.point(), comp.label))
                else:
                    kept.append(LinearSpace(inner, comp.label))
        elif isinstance(comp, ReducedPoint):
            if contains(hyp, comp.point):
                kept.append(ReducedPoint(in_hyperplane_coords(comp.point, hyp), comp.label))
        else:
            if not contains(hyp, comp.point):
                continue
            if contains_sub(hyp, comp.directions):
                section = comp.directions
            else:
                section = intersect_hyperplane(comp.directions, hyp)
            inner_pt = in_hyperplane_coords(comp.point, hyp)
            inner_dirs = in_hyperplane_coords(section, hyp)
            if inner_dirs.dim == 0:
                kept.append(ReducedPoint(inner_pt, comp.label))
            else:
                kept.append(JetPoint(inner_pt, inner_dirs, comp.label))
    return Configuration(config.ambient_dim - 1, tuple(kept), config.field)


# ---------------------------------------------------------------------------
# Templates: structural descriptions instantiated per trial.
# ---------------------------------------------------------------------------

_KINDS = ("linear", "point", "sundial", "degenerate-conic")


@dataclass(frozen=True)
class ComponentSpec:
    """One entry of the JSON configuration schema.

    Explicit coordinates (`basis` for linear pieces, `coords` for points)
    pin the component; otherwise it is sampled generically per trial.
    """

    kind: str
    dim: int | None = None
    m: int = 1
    basis: tuple | None = None
    coords: tuple | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemeError(f"unknown component kind {self.kind!r}")
        if self.kind == "linear" and self.dim is None and self.basis is None:
            raise SchemeError("linear component needs a dimension or explicit basis")
        if self.kind == "sundial" and self.m < 1:
            raise SchemeError("sundial plane dimension must be >= 1")
        if self.basis is not None and self.kind != "linear":
            raise SchemeError("explicit basis only applies to linear components")
        if self.coords is not None and self.kind != "point":
            raise SchemeError("explicit coords only apply to point components")


@dataclass(frozen=True)
class ConfigTemplate:
    """A configuration shape: instantiate with a sampler to get coordinates.

    `condition_count` is the naive disjoint-union bookkeeping (the Hilbert
    polynomial of the shape when no components are forced to intersect):
    C(d+m, m) per m-dimensional linear piece, 1 per point, 2d+2 per sundial
    and 2d+1 per degenerate conic.
    """

    ambient_dim: int
    parts: tuple[ComponentSpec, ...] = ()

    def __post_init__(self):
        n = self.ambient_dim
        for part in self.parts:
            if part.kind == "linear" and part.dim is not None and not 0 <= part.dim <= n:
                raise SchemeError(f"linear dim {part.dim} out of range for P^{n}")
            if part.kind == "sundial" and n < part.m + 2:
                raise SchemeError(f"sundial m={part.m} does not fit in P^{n}")

    def plus(self, *parts: ComponentSpec) -> "ConfigTemplate":
        return ConfigTemplate(self.ambient_dim, self.parts + parts)

    def instantiate(self, sampler: GenericSampler) -> Configuration:
        n = self.ambient_dim
        comps: list[Component] = []
        for idx, part in enumerate(self.parts):
            sub = sampler.split("component", idx)
            label = part.label or f"{part.kind}[{idx}]"
            if part.kind == "linear":
                if part.basis is not None:
                    param = [list(col) for col in zip(*part.basis)]
                    comps.append(LinearSpace(Subspace(param, sampler.field), label))
                else:
                    comps.append(LinearSpace(random_subspace(sub, n, part.dim), label))
            elif part.kind == "point":
                if part.coords is not None:
                    comps.append(ReducedPoint(ProjPoint(part.coords, sampler.field), label))
                else:
                    comps.append(ReducedPoint(random_point(sub, n), label))
            elif part.kind == "sundial":
                comps.extend(sample_sundial(sub, n, part.m).components(label))
            else:
                first, second, point = sample_degenerate_conic(sub, n)
                comps.append(LinearSpace(first, f"{label}.line1"))
                comps.append(LinearSpace(second, f"{label}.line2"))
        return Configuration(n, tuple(comps), sampler.field)

    def condition_count(self, degree: int) -> int:
        from .polyspace import monomial_count

        total = 0
        for part in self.parts:
            if part.kind == "linear":
                dim = part.dim if part.dim is not None else len(part.basis) - 1
                total += monomial_count(dim + 1, degree)
            elif part.kind == "point":
                total += 1
            elif part.kind == "sundial":
                total += 2 * degree + 2 if degree > 0 else 1
            else:
                total += 2 * degree + 1 if degree > 0 else 1
        return total

    def hilbert_polynomial(self, degree: int) -> int:
        return self.condition_count(degree)

    def to_json(self) -> dict:
        comps = []
        for part in self.parts:
            entry: dict = {"kind": part.kind}
            if part.kind == "linear":
                if part.basis is not None:
                    entry["basis"] = [list(b) for b in part.basis]
                else:
                    entry["dim"] = part.dim
            if part.kind == "sundial":
                entry["m"] = part.m
            if part.coords is not None:
                entry["coords"] = list(part.coords)
            if part.label:
                entry["label"] = part.label
            comps.append(entry)
        return {"schema": SCHEMA_VERSION, "n": self.ambient_dim, "components": comps}

    @staticmethod
    def from_json(obj: dict) -> "ConfigTemplate":
        if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise SchemeError(f"unsupported schema version {obj.get('schema')!r}")
        if "n" not in obj:
            raise SchemeError("configuration JSON needs an ambient dimension 'n'")
        parts = []
        for entry in obj.get("components", []):
            kind = entry.get("kind")
            basis = entry.get("basis")
            coords = entry.get("coords")
            parts.append(
                ComponentSpec(
                    kind=kind,
                    dim=entry.get("dim"),
                    m=entry.get("m", 1),
                    basis=tuple(tuple(b) for b in basis) if basis is not None else None,
                    coords=tuple(coords) if coords is not None else None,
                    label=entry.get("label", ""),
                )
            )
        return ConfigTemplate(int(obj["n"]), tuple(parts))

    @staticmethod
    def loads(text: str) -> "ConfigTemplate":
        return ConfigTemplate.from_json(json.loads(text))


def template(
    n: int,
    *,
    planes: int = 0,
    lines: int = 0,
    points: int = 0,
    sundials: int = 0,
    conics: int = 0,
    sundial_m: int = 1,
    plane_dim: int = 2,
) -> ConfigTemplate:
    """Convenience builder for the standard generic shapes."""
    parts: list[ComponentSpec] = []
    parts += [ComponentSpec("linear", dim=plane_dim, label=f"plane[{i}]") for i in range(planes)]
    parts += [ComponentSpec("linear", dim=1, label=f"line[{i}]") for i in range(lines)]
    parts += [ComponentSpec("sundial", m=sundial_m, label=f"sundial[{i}]") for i in range(sundials)]
    parts += [ComponentSpec("degenerate-conic", label=f"conic[{i}]") for i in range(conics)]
    parts += [ComponentSpec("point", label=f"point[{i}]") for i in range(points)]
    return ConfigTemplate(n, tuple(parts))
