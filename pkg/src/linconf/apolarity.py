"""Polynomial decomposition via duality with configurations of subspaces.

A group of k independent dual linear forms generates a subring whose
degree-d part sits inside the full degree-d space; under the standard
differentiation pairing that part is exactly the perp of the degree-d
ideal slice of a (k-1)-dimensional linear subspace.  Summing subrings over
several groups therefore fills the whole degree-d space exactly when the
dual configuration of subspaces lies on no degree-d hypersurface.

`decomposable` answers that question and cross-checks every call against
the duality identity: rank(stacked subring spans) + dim(I_dual)_d must
equal the full space dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence

from .geometry import GenericSampler, Subspace
from .linalg import ExactMatrix, Field, GF_DEFAULT
from .polyspace import monomial_count, substitution_matrix
from .postulation import DEFAULT_TRIALS, conditions_matrix
from .schemes import SCHEMA_VERSION, Configuration, LinearSpace


class ApolarityError(ValueError):
    """Base class for decomposition-instance usage errors."""


class DependentGenerators(ApolarityError):
    """A form group's generators are linearly dependent."""


class DualityMismatch(ApolarityError):
    """The subring-span rank disagrees with the dual configuration's rank."""


def _role_for(size: int) -> str:
    return {2: "pair", 3: "triple"}.get(size, "general")


@dataclass(frozen=True)
class FormGroup:
    """Concrete group of independent dual linear forms."""

    generators: tuple[tuple, ...]
    role: str = ""

    def __post_init__(self):
        if not self.generators:
            raise ApolarityError("a form group needs at least one generator")
        if not self.role:
            object.__setattr__(self, "role", _role_for(len(self.generators)))

    @property
    def size(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class GroupSpec:
    """Shape of one group: its size, with optional pinned generators."""

    size: int
    generators: tuple[tuple, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ApolarityError("group size must be positive")
        if self.generators is not None and len(self.generators) != self.size:
            raise ApolarityError("explicit generators disagree with the group size")


@dataclass(frozen=True)
class DecompositionInstance:
    """Which sums of subrings should fill degree `degree` of n+1 dual variables."""

    ambient_dim: int
    groups: tuple[GroupSpec, ...]
    degree: int

    def __post_init__(self):
        for g in self.groups:
            if g.size > self.ambient_dim + 1:
                raise ApolarityError(
                    f"group of size {g.size} exceeds {self.ambient_dim + 1} variables"
                )

    @property
    def certified_shape(self) -> bool:
        """True for the shapes the covering theorems handle: any number of
        pairs with at most one triple."""
        sizes = sorted(g.size for g in self.groups)
        triples = sizes.count(3)
        pairs = sizes.count(2)
        return pairs + triples == len(sizes) and triples <= 1

    def to_json(self) -> dict:
        groups = []
        for g in self.groups:
            entry: dict = {"size": g.size}
            if g.generators is not None:
                entry["generators"] = [list(v) for v in g.generators]
            groups.append(entry)
        return {
            "schema": SCHEMA_VERSION,
            "n": self.ambient_dim,
            "d": self.degree,
            "groups": groups,
        }

    @staticmethod
    def from_json(obj: dict) -> "DecompositionInstance":
        if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ApolarityError(f"unsupported schema version {obj.get('schema')!r}")
        groups = []
        for entry in obj.get("groups", []):
            gens = entry.get("generators")
            groups.append(
                GroupSpec(
                    size=int(entry["size"]),
                    generators=tuple(tuple(v) for v in gens) if gens is not None else None,
                )
            )
        return DecompositionInstance(int(obj["n"]), tuple(groups), int(obj.get("d", 1)))

    @staticmethod
    def loads(text: str) -> "DecompositionInstance":
        return DecompositionInstance.from_json(json.loads(text))


def realize_groups(
    inst: DecompositionInstance, sampler: GenericSampler | None = None
) -> tuple[FormGroup, ...]:
    """Pin every group's generators, sampling the unspecified ones."""
    if sampler is None:
        sampler = GenericSampler()
    n = inst.ambient_dim
    out = []
    for idx, spec in enumerate(inst.groups):
        if spec.generators is not None:
            out.append(FormGroup(spec.generators))
            continue
        sub = sampler.split("group", idx)
        while True:
            gens = tuple(sub.vector(n + 1) for _ in range(spec.size))
            if ExactMatrix(gens, sampler.field).rank() == spec.size:
                out.append(FormGroup(gens))
                break
    return tuple(out)


def subring_span_matrix(group: FormGroup, degree: int, field: Field = GF_DEFAULT) -> ExactMatrix:
    """Rows spanning the degree-d part of the subring the group generates."""
    if degree < 1:
        raise ApolarityError("subring spans need degree >= 1")
    if ExactMatrix(group.generators, field).rank() != group.size:
        raise DependentGenerators("form group generators are linearly dependent")
    return substitution_matrix(group.generators, degree, field)


def dual_group_subspace(group: FormGroup, field: Field = GF_DEFAULT) -> Subspace:
    """The linear subspace whose degree-1 ideal slice is the perp of the group.

    Under the differentiation pairing the perp of span{l_1..l_k} is the
    coefficient-wise orthogonal complement, and the vanishing locus of that
    complement is spanned by the generator vectors themselves; so the dual
    subspace is parametrized by the generators (dimension k-1).
    """
    if ExactMatrix(group.generators, field).rank() != group.size:
        raise DependentGenerators("form group generators are linearly dependent")
    param = [[gen[i] for gen in group.generators] for i in range(len(group.generators[0]))]
    return Subspace(param, field)


def dual_configuration(
    inst: DecompositionInstance,
    sampler: GenericSampler | None = None,
    *,
    groups: Sequence[FormGroup] | None = None,
) -> Configuration:
    """The configuration of subspaces dual to the instance's groups."""
    if sampler is None:
        sampler = GenericSampler()
    if groups is None:
        groups = realize_groups(inst, sampler)
    comps = tuple(
        LinearSpace(dual_group_subspace(g, sampler.field), f"dual[{i}]({g.role})")
        for i, g in enumerate(groups)
    )
    return Configuration(inst.ambient_dim, comps, sampler.field)


@dataclass(frozen=True)
class DecompositionAnswer:
    degree: int
    decomposable: bool
    defect: int
    certified: bool
    trials_agreed: bool


def decomposable(
    inst: DecompositionInstance,
    *,
    trials: int = DEFAULT_TRIALS,
    sampler: GenericSampler | None = None,
) -> DecompositionAnswer:
    """Do the instance's subring sums fill the whole degree-d space?

    The defect is the codimension of the sum, computed as dim (I_dual)_d of
    the dual configuration and cross-checked against the directly stacked
    subring spans on every trial.
    """
    if sampler is None:
        sampler = GenericSampler()
    if inst.degree < 1:
        raise ApolarityError("decomposability is a question about degree >= 1")
    total = monomial_count(inst.ambient_dim + 1, inst.degree)
    ranks = []
    for t in range(trials):
        trial_sampler = sampler.split("apolar-trial", t)
        groups = realize_groups(inst, trial_sampler)
        config = dual_configuration(inst, trial_sampler, groups=groups)
        config_rank = conditions_matrix(config, inst.degree).hf
        span_rank = ExactMatrix.vstack(
            [subring_span_matrix(g, inst.degree, trial_sampler.field) for g in groups]
        ).rank()
        if span_rank != config_rank:
            raise DualityMismatch(
                f"span rank {span_rank} != configuration rank {config_rank} "
                f"(trial {t}); duality identity violated"
            )
        ranks.append(config_rank)
    best = max(ranks)
    defect = total - best
    return DecompositionAnswer(
        degree=inst.degree,
        decomposable=defect == 0,
        defect=defect,
        certified=inst.certified_shape,
        trials_agreed=len(set(ranks)) == 1,
    )


def at_degree(inst: DecompositionInstance, degree: int) -> DecompositionInstance:
    return replace(inst, degree=degree)
