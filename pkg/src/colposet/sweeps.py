"""Seeded batch runs of the verifiers, shared by the scripts and the tests."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .algebra import QQ, Ring
from .chromatic import AlgebraM, all_graphs, euler_check
from .coloured import Gluing, dual_coloured
from .complexes import (build_C, cohomology, cube_ses, gluing_complexes, homology, is_quasi_isomorphism,
                        verify_les, verify_main, verify_ses)
from .generate import random_colouring, random_graded_poset, random_instance, random_morphism
from .khovanov import khovanov_table, standard_diagrams


@dataclass(frozen=True)
class MainSweepConfig:
    seeds: int = 50
    ranks: tuple[int, ...] = (1, 2, 3, 4)
    max_fiber_rank: int = 3
    rings: tuple[str, ...] = ("Q", "Fp:2", "Fp:3", "Z")


@dataclass(frozen=True)
class LesSweepConfig:
    morphism_seeds: int = 20
    split_seeds: int = 10
    max_fiber_rank: int = 3
    max_lattice_rank: int = 4


@dataclass(frozen=True)
class DualitySweepConfig:
    seeds: int = 20
    max_fiber_rank: int = 2


@dataclass(frozen=True)
class ChromaticSweepConfig:
    max_vertices: int = 4
    max_edges: int = 6
    algebra_ranks: tuple[int, ...] = (1, 2, 3)
    with_homology: bool = False


@dataclass(frozen=True)
class KhovanovConfig:
    diagrams: tuple[str, ...] = field(default_factory=lambda: tuple(sorted(standard_diagrams())))
    ring: str = "Z"


@dataclass
class SweepRow:
    label: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


def main_theorem_sweep(cfg: MainSweepConfig = MainSweepConfig()) -> list[SweepRow]:
    rows = []
    for name in cfg.rings:
        ring = Ring.parse(name)
        for seed in range(cfg.seeds):
            r = cfg.ranks[seed % len(cfg.ranks)]
            t0 = time.perf_counter()
            rep = verify_main(random_instance(seed, r, cfg.max_fiber_rank, ring))
            betti = homology_summary(rep.c_homology)
            rows.append(SweepRow(f"{name} seed={seed} r={r}", rep.ok, "; ".join(rep.failures) or betti,
                                 time.perf_counter() - t0))
    return rows


def homology_summary(h) -> str:
    parts = []
    for n, b, t in h.table():
        summands = ([f"R^{b}"] if b else []) + [f"Z/{k}" for k in t]
        parts.append(f"H{n}=" + "+".join(summands))
    return " ".join(parts) or "acyclic"


def les_sweep(cfg: LesSweepConfig = LesSweepConfig()) -> list[SweepRow]:
    rows = []
    for seed in range(cfg.morphism_seeds):
        src, tgt, m = random_morphism(seed, cfg.max_fiber_rank, QQ)
        g = Gluing.from_morphism(src, tgt, m)
        rep = verify_les(g)
        pi_ok, bad = is_quasi_isomorphism(gluing_complexes(g).pi)
        rows.append(SweepRow(f"morphism seed={seed} |P1|={len(src.carrier)} |P2|={len(tgt.carrier)}",
                             rep.ok and pi_ok, "; ".join(rep.failures) + (f" pi fails in {bad}" if bad else "")))
    for seed in range(cfg.split_seeds):
        r = 1 + seed % cfg.max_lattice_rank
        cp = random_instance(seed, r, cfg.max_fiber_rank, QQ)
        for ell in range(1, r + 1):
            g = Gluing.from_boolean_split(cp, ell)
            les, cube = verify_les(g), verify_ses(*cube_ses(g))
            rows.append(SweepRow(f"split seed={seed} r={r} ell={ell}", les.ok and cube.ok,
                                 "; ".join(les.failures + cube.failures)))
    return rows


def duality_sweep(cfg: DualitySweepConfig = DualitySweepConfig()) -> list[SweepRow]:
    """Compare ``dim H_k(P^op)`` of the dual colouring with ``dim H^(n-k)(P)``."""
    rows = []
    for seed in range(cfg.seeds):
        p = random_graded_poset(random.Random(seed))
        cp = random_colouring(p, seed, cfg.max_fiber_rank, QQ)
        n = p.rank_of(p.top)
        lhs = homology(build_C(dual_coloured(cp)))
        rhs = cohomology(build_C(cp))
        left = [lhs.betti.get(k, 0) for k in range(n + 1)]
        right = [rhs.betti.get(n - k, 0) for k in range(n + 1)]
        rows.append(SweepRow(f"seed={seed} |P|={len(p)} n={n}", left == right, f"op {left} vs {right}"))
    return rows


def chromatic_sweep(cfg: ChromaticSweepConfig = ChromaticSweepConfig()) -> list[SweepRow]:
    rows = []
    for m in cfg.algebra_ranks:
        alg = AlgebraM.truncated_polynomial(m)
        for g in all_graphs(cfg.max_vertices, cfg.max_edges):
            rep = euler_check(g, alg, with_homology=cfg.with_homology)
            rows.append(SweepRow(f"m={m} n={g.n} edges={list(g.edges)}", rep.ok,
                                 f"P={rep.chromatic_value} states={rep.state_sum} chains={rep.chain_euler}"))
    return rows


def khovanov_tables(cfg: KhovanovConfig = KhovanovConfig()) -> dict[str, dict]:
    diagrams = standard_diagrams()
    ring = Ring.parse(cfg.ring)
    return {name: khovanov_table(diagrams[name], ring) for name in cfg.diagrams}
