"""
Experiments behind the CLI subcommands and `run` directives

Each class wires one library operation into the run -> normalize ->
validate pipeline. Every row of every table carries the property it checks.
"""
import logging
import numbers
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from silverlab.coalitions import (
    ChoiceFunction,
    CoalitionFamily,
    DensityPlus,
    Dictator,
    Majority,
    OpenSetApprox,
    has_silver_property,
    h_almost_anti_democratic,
    h_almost_irrelevant,
    is_anti_democratic,
    is_irrelevant,
)
from silverlab.constructions import baire, forcing, treefile
from silverlab.constructions.kary import MonochromeResult, monochromatize, verify_monochrome
from silverlab.constructions.oracles import DenseOracle, preset, random_family
from silverlab.density import (
    density_bounds,
    density_table,
    disjoint_triples,
    find_triples,
    triples_needed,
)
from silverlab.exceptions import CapExceededError, ScenarioError
from silverlab.experiments.base import ExperimentBase, argument
from silverlab.seqcore import (
    Arithmetic,
    CoalitionDescriptor,
    Complement,
    Cylinder,
    Finite,
    PartialAssignment,
    Periodic,
    cylinder_member,
)
from silverlab.swr import certificate
from silverlab.swr.derivations import (
    Derivation,
    DerivationStep,
    UtilityStream,
    check_derivation,
)
from silverlab.swr.welfare import CASES, VARIANTS, case_witness

log = logging.getLogger(__name__)


def decade_horizons(horizon: int) -> Tuple[int, ...]:
    """10, 100, ... below `horizon`, then `horizon` itself"""
    out = []
    n = 10
    while n < horizon:
        out.append(n)
        n *= 10
    return tuple(out) + (int(horizon),)


def _common(keywords: dict) -> dict:
    return {"seed": int(keywords.get("seed", 0) or 0)}


def _choice(value: Optional[str], allowed: Sequence[str], key: str) -> Optional[str]:
    if value is not None and value not in allowed:
        raise ScenarioError(f"{key} must be one of {tuple(allowed)}, got {value!r}")
    return value


def _condition(doc, positional, keywords, index=0) -> PartialAssignment:
    return argument(doc, positional, keywords, index, "f", PartialAssignment)


class DensityExperiment(ExperimentBase):
    """
    Attributes
    ----------
    coalition: CoalitionDescriptor
        The set being measured

    horizons: Tuple[int, ...] = (10, 100, 1000, 10000)
        Values of n at which alpha_n is sampled
    """

    name = "density"
    cites = "alpha_n(a) = |a ∩ [0, n]| / n and the upper density of a"
    horizons: Tuple[int, ...] = (10, 100, 1000, 10000)

    def __init__(
        self,
        coalition: CoalitionDescriptor,
        horizons: Optional[Sequence[int]] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.coalition = coalition
        if horizons is not None:
            self.horizons = tuple(int(h) for h in horizons)

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        a = argument(doc, positional, keywords, 0, "a", CoalitionDescriptor)
        horizons = keywords.get("horizons")
        horizon = argument(None, positional, keywords, 1, "horizon", int, None)
        if horizons is None and horizon is not None:
            horizons = decade_horizons(horizon)
        return cls(a, horizons, **_common(keywords))

    @classmethod
    def example(cls):
        return cls(Complement(Arithmetic(0, 3)), (10, 100, 1000))

    def run(self):
        return (
            density_table(self.coalition, self.horizons),
            density_bounds(self.coalition, self.horizons),
        )

    def normalize(self, data) -> pd.DataFrame:
        table, bounds = data
        rows = [
            self.row(
                f"alpha_{r.n}",
                f"{r.alpha} ({r.alpha_float:.6f})",
                r.within_bound,
                n=r.n,
                alpha=r.alpha,
                exact=r.exact,
                error_bound=r.error_bound,
            )
            for r in table.itertuples(index=False)
        ]
        rows.append(self.row(f"bounds {self.coalition}", str(bounds), True))
        return pd.DataFrame(rows)


class TriplesExperiment(ExperimentBase):
    """
    Attributes
    ----------
    coalition: CoalitionDescriptor
        The set scanned for {h, h+1, h+2}

    horizon: int
        Last coordinate scanned; defaults to `Settings.triple_horizon`
    """

    name = "triples"
    cites = "consecutive triples {h, h+1, h+2} inside the coalition"

    def __init__(self, coalition: CoalitionDescriptor, horizon: Optional[int] = None, **kwargs):
        super().__init__(**kwargs)
        self.coalition = coalition
        self.horizon = int(horizon) if horizon else self.settings.triple_horizon

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        a = argument(doc, positional, keywords, 0, "a", CoalitionDescriptor)
        horizon = argument(None, positional, keywords, 1, "horizon", int, None)
        return cls(a, horizon, **_common(keywords))

    @classmethod
    def example(cls):
        return cls(Periodic("1110"), 300)

    def run(self):
        triples = find_triples(self.coalition, self.horizon)
        return triples, disjoint_triples(triples)

    def promised(self) -> Optional[int]:
        """Disjoint triples guaranteed for purely periodic sets with density >= 3/4"""
        skel = self.coalition.skeleton()
        density = self.coalition.density()
        if density is None or density < Fraction(3, 4) or skel.prefix or not skel.exact:
            return None
        return triples_needed(len(skel.period), self.horizon)

    def normalize(self, data) -> pd.DataFrame:
        triples, disjoint = data
        needed = self.promised()
        verdict = f"{len(triples)} triples ({len(disjoint)} disjoint) up to {self.horizon}"
        if needed is not None:
            verdict += f", at least {needed} promised"
        row = self.row(
            f"triples {self.coalition}",
            verdict,
            needed is None or len(disjoint) >= needed,
            count=len(triples),
            disjoint=len(disjoint),
            first=",".join(str(h) for h in disjoint[:5]),
            needed="" if needed is None else needed,
        )
        return pd.DataFrame([row])


class IrrelevanceExperiment(ExperimentBase):
    """
    Attributes
    ----------
    F: ChoiceFunction
        The choice function under test

    b: CoalitionDescriptor
        The coalition; `f` must leave exactly b free on F's support

    f: PartialAssignment
        Fixes the votes of everybody outside b

    B: Optional[OpenSetApprox] = None
        When set, irrelevance is decided on N_f ∩ B only

    expect: Optional[str] = None
        "irrelevant" or "relevant"; a different verdict fails the check
    """

    name = "irrelevance"
    cites = "b is irrelevant for F at f: F is constant on N_f"

    def __init__(
        self,
        F: ChoiceFunction,
        b: CoalitionDescriptor,
        f: PartialAssignment,
        B: Optional[OpenSetApprox] = None,
        expect: Optional[str] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.F, self.b, self.f, self.B = F, b, f, B
        self.expect = _choice(expect, ("irrelevant", "relevant"), "expect")

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        F = argument(doc, positional, keywords, 0, "F", ChoiceFunction)
        f = _condition(doc, positional, keywords, 2)
        b = argument(None, positional, keywords, 1, "b", CoalitionDescriptor, None)
        if b is None:
            b = f.free
        B = argument(None, positional, keywords, 3, "B", OpenSetApprox, None)
        expect = argument(None, positional, keywords, None, "expect", str, None)
        return cls(F, b, f, B, expect, **_common(keywords))

    @classmethod
    def example(cls):
        b = Complement(Finite(frozenset({1, 2})))
        f = PartialAssignment(2, b, ((1, 1), (2, 1)))
        return cls(Majority((0, 1, 2)), b, f, expect="irrelevant")

    def run(self):
        if self.B is None:
            return is_irrelevant(self.F, self.b, self.f)
        return h_almost_irrelevant(self.F, self.b, self.f, self.B)

    def _witness_ok(self, verdict) -> bool:
        y, z = verdict.witness
        depth = max(self.F.support) + 1
        cyl = Cylinder(self.f)
        return (
            self.F.eval(y) != self.F.eval(z)
            and cylinder_member(y, cyl, depth).agrees
            and cylinder_member(z, cyl, depth).agrees
        )

    def normalize(self, verdict) -> pd.DataFrame:
        ok = verdict.irrelevant or self._witness_ok(verdict)
        if self.expect is not None:
            ok = ok and verdict.irrelevant == (self.expect == "irrelevant")
        y, z = verdict.witness if verdict.witness else ("", "")
        row = self.row(
            f"irrelevance of {self.b} for {self.F}",
            str(verdict),
            ok,
            searched=verdict.searched,
            value="" if verdict.value is None else verdict.value,
            y=str(y),
            z=str(z),
        )
        return pd.DataFrame([row])


class AntiDemocracyExperiment(ExperimentBase):
    """
    Attributes
    ----------
    F: ChoiceFunction
        The choice function under test

    family: CoalitionFamily = DensityPlus(9/10)
        Coalitions counted as not small

    B: Optional[OpenSetApprox] = None
        When set, the finite-depth variant on N_f ∩ B is decided instead
    """

    name = "antidem"
    cites = "anti-democratic: some coalition of the family is irrelevant"

    def __init__(
        self,
        F: ChoiceFunction,
        family: Optional[CoalitionFamily] = None,
        B: Optional[OpenSetApprox] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.F = F
        self.family = family if family is not None else DensityPlus(Fraction(9, 10))
        self.B = B

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        F = argument(doc, positional, keywords, 0, "F", ChoiceFunction)
        family = argument(None, positional, keywords, 1, "family", CoalitionFamily, None)
        if family is None and doc is not None:
            families = doc.all_of(CoalitionFamily)
            family = families[0][1] if families else None
        B = argument(None, positional, keywords, 2, "B", OpenSetApprox, None)
        return cls(F, family, B, **_common(keywords))

    @classmethod
    def example(cls):
        return cls(Dictator(0), DensityPlus(Fraction(9, 10)))

    def run(self):
        if self.B is None:
            return is_anti_democratic(self.F, self.family)
        return h_almost_anti_democratic(self.F, self.family, self.B)

    def normalize(self, verdict) -> pd.DataFrame:
        row = self.row(
            f"{self.F} over {self.family}",
            str(verdict),
            verdict.found,
            coalition="" if verdict.coalition is None else verdict.coalition.to_text(),
            value="" if verdict.verdict is None else verdict.verdict.value,
            tried=verdict.tried,
        )
        return pd.DataFrame([row])


def preset_family(name: str, rounds: int, seed: int = 0) -> List[DenseOracle]:
    """Preset `name` instantiated for D_0, ..., D_rounds; "random" draws seeded patterns"""
    if name == "random":
        return list(random_family(np.random.default_rng(seed), rounds + 1))
    return [preset(name, i) for i in range(rounds + 1)]


class BuildTreeExperiment(ExperimentBase):
    """
    Attributes
    ----------
    oracles: Sequence[DenseOracle]
        D_0, D_1, ...; the last one is reused past the end

    delta: Fraction = 3/4
        Target proportion of splitting levels

    rounds: int = 3
        Rounds of the construction after round 0

    tree_out: Optional[str] = None
        File the final tree is written to, in the tree text format
    """

    name = "build_tree"
    cites = "terminals of T_n lie in D_n and |Lev(T_n)| / ht(T_n) >= delta(1 - 1/n)"

    def __init__(
        self,
        oracles: Sequence[DenseOracle],
        delta: Fraction = Fraction(3, 4),
        rounds: int = 3,
        tree_out: Optional[str] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.oracles = list(oracles)
        self.delta = Fraction(delta)
        self.rounds = int(rounds)
        self.tree_out = tree_out

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        delta = argument(None, positional, keywords, 0, "delta", numbers.Rational, Fraction(3, 4))
        rounds = argument(None, positional, keywords, 1, "rounds", int, 3)
        oracle = keywords.get("oracle")
        listed = [v for v in positional[2:] if isinstance(v, DenseOracle)]
        if isinstance(oracle, str):
            listed = preset_family(oracle, rounds, _common(keywords)["seed"])
        elif isinstance(oracle, DenseOracle):
            listed = [oracle]
        elif oracle is not None:
            raise ScenarioError(f"oracle must be a preset name or an oracle, got {oracle!r}")
        if not listed and doc is not None:
            listed = [v for _, v in doc.all_of(DenseOracle)]
        if not listed:
            listed = preset_family("ones", rounds)
        return cls(listed, delta, rounds, keywords.get("tree_out"), **_common(keywords))

    @classmethod
    def example(cls):
        return cls(preset_family("ones", 2), Fraction(3, 4), 2)

    def run(self):
        result = forcing.build_delta_tree(self.oracles, self.delta, self.rounds)
        if self.tree_out:
            cap = self.settings.enumeration_cap
            if result.tree.n_terminals() > cap:
                raise CapExceededError("tree text terminals", result.tree.n_terminals(), cap)
            treefile.dump(result.tree, self.tree_out)
        return result

    def normalize(self, result) -> pd.DataFrame:
        rows = []
        for r in result.audit().to_dict("records"):
            method = r.pop("check")
            verdict = f"lev={r['lev']} ht={r['ht']} ratio={r['ratio']}"
            if r["bound"]:
                verdict += f" >= {r['bound']}"
            verdict += f", terminals {'ok' if r['terminals_ok'] else 'FAILED'} ({method})"
            ok = r["ratio_ok"] and r["terminals_ok"]
            rows.append(self.row(f"round {r['round']}", verdict, ok, **r))
        return pd.DataFrame(rows)


class EscapeExperiment(ExperimentBase):
    """
    Attributes
    ----------
    f: PartialAssignment
        A Silver condition over the naturals

    depth: int = 60
        The escape recursion runs through the first free coordinate past
        `depth`; membership is checked to this depth

    bound: Optional[int] = None
        Stem and value bound of the C_n search, `depth` when unset
    """

    name = "escape"
    cites = "a point of N_f outside C_n for n = a_0 + 2"

    def __init__(self, f: PartialAssignment, depth: int = 60, bound: Optional[int] = None, **kwargs):
        super().__init__(**kwargs)
        self.f = f
        self.depth = int(depth)
        self.bound = int(bound) if bound else self.depth

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        f = _condition(doc, positional, keywords)
        depth = argument(None, positional, keywords, 1, "depth", int, 60)
        bound = argument(None, positional, keywords, 2, "bound", int, None)
        return cls(f, depth, bound, **_common(keywords))

    @classmethod
    def example(cls):
        f = PartialAssignment(None, Arithmetic(3, 2), ((0, 1), (1, 0), (2, 2)))
        return cls(f, 30)

    def run(self):
        w = baire.escape_witness(self.f, self.depth)
        member = cylinder_member(w.x, Cylinder(self.f), self.depth)
        cn = baire.in_Cn(w.x, w.level, self.bound, self.bound)
        return w, member, cn

    def normalize(self, data) -> pd.DataFrame:
        w, member, cn = data
        x = str(w.x)
        rows = [
            self.row("stages", f"{len(w.stages)} stages clear of C_{w.level}", True, x=x),
            self.row("x in N_f", str(member), member.agrees, x=x),
            self.row(f"x outside C_{w.level}", str(cn), not cn.inside, x=x),
        ]
        return pd.DataFrame(rows)


class WitnessFExperiment(ExperimentBase):
    """
    Attributes
    ----------
    f: PartialAssignment
        A Silver condition; the "out" side needs values in the naturals

    side: str = "both"
        "in", "out" or "both"

    levels: int = 5
        Levels n checked on each side

    depth: int = 60
        Depth of the escape point on the "out" side
    """

    name = "witness_f"
    cites = "N_f meets F and N_f is not contained in F"

    def __init__(
        self, f: PartialAssignment, side: str = "both", levels: int = 5, depth: int = 60, **kwargs
    ):
        super().__init__(**kwargs)
        self.f = f
        self.side = _choice(side, ("in", "out", "both"), "side")
        self.levels = int(levels)
        self.depth = int(depth)

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        f = _condition(doc, positional, keywords)
        side = argument(None, positional, keywords, 1, "side", str, "both")
        levels = argument(None, positional, keywords, 2, "levels", int, 5)
        depth = argument(None, positional, keywords, 3, "depth", int, 60)
        return cls(f, side, levels, depth, **_common(keywords))

    @classmethod
    def example(cls):
        f = PartialAssignment(None, Arithmetic(3, 1), ((0, 1), (1, 0), (2, 2)))
        return cls(f, "both", 3, 30)

    def run(self):
        inside = outside = None
        if self.side in ("in", "both"):
            inside = baire.witness_in_F(self.f, self.levels)
        if self.side in ("out", "both"):
            outside = baire.witness_out_F(self.f, self.levels, self.depth)
        return inside, outside

    def normalize(self, data) -> pd.DataFrame:
        inside, outside = data
        rows = []
        if inside is not None:
            for n, result in inside.checks:
                rows.append(self.row(f"x in G_{n}", str(result), result.agrees, point=str(inside.x)))
        if outside is not None:
            point = str(outside.y)
            member = cylinder_member(outside.y, Cylinder(self.f), self.depth)
            rows.append(self.row("y in N_f", str(member), member.agrees, point=point))
            for result in outside.results:
                check = f"y outside F_{result.level}"
                rows.append(self.row(check, str(result), not result.inside, point=point))
        return pd.DataFrame(rows)


class SwrWitnessExperiment(ExperimentBase):
    """
    Attributes
    ----------
    f: PartialAssignment
        A binary Silver condition with eventually periodic free set

    delta: Fraction = 3/4
        Density the free set must reach; must lie in (2/3, 1]

    cases: Tuple[str, ...] = ("eo", "oe", "sim")
    variants: Tuple[str, ...] = ("sefa", "pfa")

    cert_out: Optional[str] = None
        Directory receiving one certificate per derivation
    """

    name = "swr_witness"
    cites = "finite anonymity, strong equity and Pareto chains place N_f on both sides of {x : e(x) < o(x)}"
    cases: Tuple[str, ...] = CASES
    variants: Tuple[str, ...] = VARIANTS

    def __init__(
        self,
        f: PartialAssignment,
        delta: Fraction = Fraction(3, 4),
        case: Optional[str] = None,
        variant: Optional[str] = None,
        cert_out: Optional[str] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.f = f
        self.delta = Fraction(delta)
        if _choice(case, CASES, "case"):
            self.cases = (case,)
        if _choice(variant, VARIANTS, "variant"):
            self.variants = (variant,)
        self.cert_out = cert_out

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        f = _condition(doc, positional, keywords)
        delta = argument(None, positional, keywords, 1, "delta", numbers.Rational, Fraction(3, 4))
        case = argument(None, positional, keywords, 2, "case", str, None)
        variant = argument(None, positional, keywords, 3, "variant", str, None)
        return cls(f, delta, case, variant, keywords.get("cert_out"), **_common(keywords))

    @classmethod
    def example(cls):
        return cls(PartialAssignment(2, Periodic("1110")), Fraction(3, 4), "eo", "sefa")

    def run(self):
        bundles = [
            case_witness(self.f, self.delta, case, variant)
            for case in self.cases
            for variant in self.variants
        ]
        if self.cert_out:
            folder = Path(self.cert_out)
            folder.mkdir(parents=True, exist_ok=True)
            for b in bundles:
                for k, (label, d, _) in enumerate(b.derivations):
                    certificate.dump(d, str(folder / f"{b.case}-{b.variant}-{k}.cert"), label)
        return bundles

    def normalize(self, bundles) -> pd.DataFrame:
        rows = []
        for b in bundles:
            head = f"{b.case}/{b.variant}"
            dropped = ",".join(str(c) for c in b.dropped)
            for label, d, check in b.derivations:
                kinds = "+".join(s.kind for s in d.steps)
                rows.append(
                    self.row(f"{head} {label}", str(check), check.valid, steps=kinds, dropped=dropped)
                )
            for name, member in b.membership:
                rows.append(
                    self.row(f"{head} {name} in N_f", str(member), member.agrees, dropped=dropped)
                )
        return pd.DataFrame(rows)


class CheckCertExperiment(ExperimentBase):
    """
    Attributes
    ----------
    source: Union[str, Derivation]
        Path of a certificate file, or a derivation already in memory
    """

    name = "check_cert"
    cites = "a derivation certificate replays step by step"

    def __init__(self, source: Union[str, Derivation], **kwargs):
        super().__init__(**kwargs)
        self.source = source

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        path = argument(None, positional, keywords, 0, "path", str)
        return cls(path, **_common(keywords))

    @classmethod
    def example(cls):
        x = UtilityStream.from_text("0", "1", "01")
        y = UtilityStream.from_text("", "1", "01")
        return cls(Derivation((DerivationStep("P", x, y, "<"),), "<"))

    def run(self):
        d = self.source
        if not isinstance(d, Derivation):
            d = certificate.load(d)
        return d, check_derivation(d)

    def normalize(self, data) -> pd.DataFrame:
        d, check = data
        label = self.source if isinstance(self.source, str) else "derivation"
        row = self.row(
            label,
            str(check),
            check.valid,
            steps=len(d.steps),
            failing_step="" if check.valid else check.step,
        )
        return pd.DataFrame([row])


class ForcingExperiment(ExperimentBase):
    """
    Attributes
    ----------
    mode: str = "meet"
        "meet" runs a generic stage over dense oracles, "densify" audits
        the densification ratios along a spine map

    count: int = 10
        Seeded random pattern oracles used when none are given

    height: int = 3
        Height of the full binary tree the generic stage starts from

    f: PartialAssignment
        Source condition of the spine map, free set 1110 repeating by default

    delta: Fraction = 3/4
    ks: Tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    """

    name = "forcing"
    cites = "generic stages meet every dense set; densify reaches delta(1 - 2^-k)"
    count: int = 10
    height: int = 3
    ks: Tuple[int, ...] = (1, 2, 3, 4, 5, 6)

    def __init__(
        self,
        mode: str = "meet",
        oracles: Sequence[DenseOracle] = (),
        f: Optional[PartialAssignment] = None,
        delta: Fraction = Fraction(3, 4),
        count: Optional[int] = None,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.mode = _choice(mode, ("meet", "densify"), "mode")
        self.oracles = list(oracles)
        self.f = f if f is not None else PartialAssignment(2, Periodic("1110"))
        self.delta = Fraction(delta)
        if count:
            self.count = int(count)

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        mode = argument(None, positional, keywords, 0, "mode", str, "meet")
        f = argument(None, positional, keywords, None, "f", PartialAssignment, None)
        delta = argument(None, positional, keywords, None, "delta", numbers.Rational, Fraction(3, 4))
        count = argument(None, positional, keywords, None, "count", int, None)
        listed = [v for v in positional[1:] if isinstance(v, DenseOracle)]
        if not listed and doc is not None:
            listed = [v for _, v in doc.all_of(DenseOracle)]
        return cls(mode, listed, f, delta, count, **_common(keywords))

    @classmethod
    def example(cls):
        return cls("meet", count=3)

    def run(self):
        if self.mode == "meet":
            oracles = self.oracles or random_family(np.random.default_rng(self.seed), self.count)
            start = forcing.root(2).graft_cube(self.height)
            return start, forcing.generic_stage(start, oracles), oracles
        spine = forcing.SpineMap(self.f)
        tree, audit = forcing.densify_audit(forcing.root(2), self.delta, self.ks, spine)
        return spine, tree, audit

    def normalize(self, data) -> pd.DataFrame:
        if self.mode == "meet":
            start, tree, oracles = data
            rows = []
            for o in oracles:
                check = forcing.check_terminals(tree, o)
                rows.append(self.row(f"meets {o}", str(check), check.ok))
            rows.append(
                self.row(
                    "end-extension",
                    f"height {start.height} -> {tree.height}",
                    forcing.end_extends(tree, start),
                )
            )
            return pd.DataFrame(rows)

        spine, tree, audit = data
        rows = [
            self.row(f"densify k={r.k}", f"ratio {r.ratio} >= {r.bound}", r.ok, added=r.added, ht=r.ht)
            for r in audit.itertuples(index=False)
        ]
        ratios = [Fraction(r) for r in audit["ratio"]]
        rows.append(
            self.row(
                "monotone ratios",
                " <= ".join(str(r) for r in ratios),
                all(a <= b for a, b in zip(ratios, ratios[1:])),
            )
        )
        rows.append(self.row("spine map", "φ̄ invariants to depth 8", spine.check(8)))
        return pd.DataFrame(rows)


class MonochromeExperiment(ExperimentBase):
    """
    Attributes
    ----------
    F: ChoiceFunction
        A K-valued choice function

    f: PartialAssignment
        The starting Silver condition, the empty assignment by default
    """

    name = "monochrome"
    cites = "Silver property: F is constant on some N_g <= N_f"

    def __init__(self, F: ChoiceFunction, f: Optional[PartialAssignment] = None, **kwargs):
        super().__init__(**kwargs)
        self.F = F
        self.f = f if f is not None else PartialAssignment.empty(F.alphabet)

    @classmethod
    def from_scenario(cls, doc, positional, keywords):
        F = argument(doc, positional, keywords, 0, "F", ChoiceFunction)
        f = argument(None, positional, keywords, 1, "f", PartialAssignment, None)
        if f is None and doc is not None:
            conditions = doc.all_of(PartialAssignment)
            f = conditions[0][1] if conditions else None
        return cls(F, f, **_common(keywords))

    @classmethod
    def example(cls):
        return cls(Majority((0, 1, 2, 3, 4), 0, 3))

    def run(self):
        c = Cylinder(self.f)
        return c, monochromatize(self.F, c), has_silver_property(self.F, c)

    def normalize(self, data) -> pd.DataFrame:
        c, result, (sub, value) = data
        depth = max(self.F.support) + 1 if self.F.support else 1
        rows = [
            self.row(
                f"stage {i}",
                f"kept {list(st.kept)} of {list(st.block)}, fixed {dict(st.fixed)}",
                True,
            )
            for i, st in enumerate(result.stages)
        ]
        rows.append(
            self.row(
                "monochrome",
                f"F = {result.value} on {result.cylinder.assignment}",
                verify_monochrome(self.F, result)
                and result.cylinder.is_subcylinder(c, depth),
            )
        )
        rows.append(
            self.row(
                "silver-property",
                f"F = {value} on {sub.assignment}",
                verify_monochrome(self.F, MonochromeResult(sub, value, ()))
                and sub.is_subcylinder(c, depth),
            )
        )
        return pd.DataFrame(rows)
