"""Executable checks of the identities between mixed multiplicities.

Each check computes two sides independently through the module operations
and compares them as exact integers (tables entry-wise).  A failed
precondition makes a check "inapplicable", never "fail"; an exhausted search
bound makes it "error".
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bhattacharya import (BhattacharyaFunction, Config, certified_base,
                           certify_from, confirm_run, degree_check, mixed_table)
from .errors import InputError, ResourceError
from .filtration import (ADIC, Filtration, adic, first_term_product,
                         integral_closure)
from .module import (ModuleModel, ht_positive, local_length_at_min_prime,
                     module_dim, q_value, rank, saturate_module)
from .monomial import MonomialIdeal, PrimeSupport, maximal_ideal, minimalize
from .newton import is_integrally_closed
from .rees import rees_direct, rees_filtration_direct, rees_via_sum

log = logging.getLogger(__name__)

KINDS = ("thm23i", "thm23ii", "cor24", "cor25", "cor26", "cor27", "cor3b", "prop22")

PASS, FAIL, INAPPLICABLE, ERROR = "pass", "fail", "inapplicable", "error"


@dataclass(frozen=True)
class CheckInstance:
    kind: str
    payload: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown check kind {self.kind!r}")


@dataclass
class CheckReport:
    kind: str
    summary: str
    left: object
    right: object
    verdict: str
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "summary": self.summary, "left": self.left,
                "right": self.right, "verdict": self.verdict,
                "provenance": self.provenance}


def table_json(entries: dict) -> list:
    return [{"type": list(k), "value": v} for k, v in entries.items()]


def _filt_str(Fs) -> str:
    return "[" + ", ".join(str(F) for F in Fs) + "]"


def _scaled(entries: dict, c: int) -> dict:
    return {k: c * v for k, v in entries.items()}


def _added(a: dict, b: dict) -> dict:
    if a.keys() != b.keys():
        raise AssertionError("tables with different types cannot be added")
    return {k: a[k] + b[k] for k in a}


def prime_module(p: PrimeSupport, d: int) -> ModuleModel:
    """A/p for a monomial prime p."""
    gens = [tuple(int(i == j) for j in range(d)) for i in sorted(p.vars)]
    return ModuleModel.cyclic(MonomialIdeal.of(d, gens))


# individual checks ----------------------------------------------------------

def _check_thm23i(p: dict, config: Config) -> CheckReport:
    F, Fs, M = p["F"], list(p["Fs"]), p["M"]
    left = mixed_table(F, Fs, M, config)
    right = mixed_table(F.adic_reduction(), [G.adic_reduction() for G in Fs], M, config)
    vacuous = all(G.kind == ADIC or is_integrally_closed(G.base) for G in (F, *Fs))
    return CheckReport(
        "thm23i", f"F={F} FF={_filt_str(Fs)} M={M}",
        table_json(left.entries), table_json(right.entries),
        PASS if left.entries == right.entries else FAIL,
        {"filtration_side": left.provenance, "reduction_side": right.provenance,
         "vacuous": vacuous})


def _rees_cross_routes(J, Fs, M, config) -> dict:
    """Direct profile routes, where they are cheap enough to run."""
    routes = {}
    if M.dim <= 2:
        r = rees_direct([G.base for G in Fs], J, M, config.n_max)
        routes["direct_reductions"] = {"value": r.value, "n_max": r.n_max,
                                       "degree": r.detected_degree,
                                       "degree_flag": r.degree_flag}
        if len(Fs) == 1 and any(G.kind != ADIC for G in Fs):
            r = rees_filtration_direct(Fs, J, M, config.n_max, config)
            routes["direct_filtrations"] = {"value": r.value, "n_max": r.n_max,
                                            "degree": r.detected_degree,
                                            "degree_flag": r.degree_flag}
    return routes


def _check_rees_pair(kind, J, Fs, M, config, vacuous=None) -> CheckReport:
    left = rees_via_sum(J, Fs, M, config)
    right = rees_via_sum(J, [G.adic_reduction() for G in Fs], M, config)
    routes = _rees_cross_routes(J, Fs, M, config)
    ok = left == right and all(r["value"] == right for r in routes.values())
    prov = {"cross_routes": routes}
    if vacuous is not None:
        prov["vacuous"] = vacuous
    return CheckReport(kind, f"J={J} FF={_filt_str(Fs)} M={M}", left, right,
                       PASS if ok else FAIL, prov)


def _check_thm23ii(p: dict, config: Config) -> CheckReport:
    Fs = list(p["Fs"])
    vacuous = all(G.kind == ADIC or is_integrally_closed(G.base) for G in Fs)
    return _check_rees_pair("thm23ii", p["J"], Fs, p["M"], config, vacuous)


def _check_cor27(p: dict, config: Config) -> CheckReport:
    I = p["I"]
    d = I.dim
    M = ModuleModel.free(d)
    if not ht_positive(I, M):
        raise InputError(f"{I} has height zero")
    return _check_rees_pair("cor27", maximal_ideal(d), [integral_closure(I)], M, config,
                            is_integrally_closed(I))


def _check_cor24(p: dict, config: Config) -> CheckReport:
    J, Fs, M = p["J"], list(p["Fs"]), p["M"]
    if M.dim > 2:
        raise InputError("direct Rees profile check is limited to d <= 2")
    r = rees_direct([G.base for G in Fs], J, M, config.n_max)
    right = rees_via_sum(J, Fs, M, config)
    return CheckReport("cor24", f"J={J} FF={_filt_str(Fs)} M={M}", r.value, right,
                       PASS if r.value == right else FAIL,
                       {"n_max": r.n_max, "detected_degree": r.detected_degree,
                        "expected_degree": r.expected_degree,
                        "degree_flag": r.degree_flag})


def cor25_branch(W1: ModuleModel, W2: ModuleModel, I: MonomialIdeal) -> tuple:
    """("i", None) or ("ii", k) for the dominating summand index k in {1, 2}."""
    dims = []
    for W in (W1, W2):
        q_value(W, I)  # raises when I is inside sqrt(Ann W)
        dims.append(module_dim(saturate_module(W, I)))
    if dims[0] == dims[1]:
        return "i", None
    return "ii", 1 if dims[0] > dims[1] else 2


def _check_cor25(p: dict, config: Config) -> CheckReport:
    F, Fs, W1, W2, J = p["F"], list(p["Fs"]), p["W1"], p["W2"], p["J"]
    W3 = W1.direct_sum(W2)
    I = first_term_product(Fs)
    branch, k = cor25_branch(W1, W2, I)
    t1, t2, t3 = (mixed_table(F, Fs, W, config) for W in (W1, W2, W3))
    if branch == "i":
        want = _added(t1.entries, t2.entries)
    else:
        want = (t1, t2)[k - 1].entries
    left = {"a": table_json(t3.entries)}
    right = {"a": table_json(want)}
    parts = [f"{branch}(a)"]
    ok = t3.entries == want
    if all(ht_positive(I, W) for W in (W1, W2, W3)):
        r1, r2, r3 = (rees_via_sum(J, Fs, W, config) for W in (W1, W2, W3))
        rw = r1 + r2 if branch == "i" else (r1, r2)[k - 1]
        left["b"], right["b"] = r3, rw
        parts.append(f"{branch}(b)")
        ok = ok and r3 == rw
    return CheckReport("cor25", f"F={F} FF={_filt_str(Fs)} W1={W1} W2={W2} J={J}",
                       left, right, PASS if ok else FAIL,
                       {"branches": parts, "dominant": k, "q": t3.q})


def associated_primes_pi(M: ModuleModel, I: MonomialIdeal) -> list:
    """Minimal primes p of Ann Mbar with dim A/p = dim Mbar."""
    Mbar = saturate_module(M, I)
    if Mbar.is_zero:
        q_value(M, I)  # raises the undefined-multiplicity error
    top = module_dim(Mbar)
    return [p for p in Mbar.min_primes if M.dim - len(p.vars) == top]


def _check_cor26(p: dict, config: Config) -> CheckReport:
    F, Fs, M = p["F"], list(p["Fs"]), p["M"]
    I = first_term_product(Fs)
    left = mixed_table(F, Fs, M, config)
    total = None
    weights = []
    for pr in associated_primes_pi(M, I):
        w = local_length_at_min_prime(M, pr)
        weights.append({"prime": sorted(pr.vars), "length": w})
        t = _scaled(mixed_table(F, Fs, prime_module(pr, M.dim), config).entries, w)
        total = t if total is None else _added(total, t)
    return CheckReport("cor26", f"F={F} FF={_filt_str(Fs)} M={M}",
                       table_json(left.entries), table_json(total),
                       PASS if left.entries == total else FAIL,
                       {"primes": weights, "q": left.q})


def _check_cor3b(p: dict, config: Config) -> CheckReport:
    F, Fs, M = p["F"], list(p["Fs"]), p["M"]
    r = rank(M)
    if r <= 0:
        raise InputError(f"module {M} has rank 0")
    left = mixed_table(F, Fs, M, config)
    right = _scaled(mixed_table(F, Fs, ModuleModel.free(M.dim), config).entries, r)
    return CheckReport("cor3b", f"F={F} FF={_filt_str(Fs)} M={M}",
                       table_json(left.entries), table_json(right),
                       PASS if left.entries == right else FAIL, {"rank": r})


def _check_prop22(p: dict, config: Config) -> CheckReport:
    F, Fs, M = p["F"], list(p["Fs"]), p["M"]
    ok, q, G = degree_check(F, Fs, M, config)
    return CheckReport("prop22", f"F={F} FF={_filt_str(Fs)} M={M}", ok, True,
                       PASS if ok else FAIL,
                       {"q": q, "base": list(G.base), "window": G.window})


_CHECKS: dict = {
    "thm23i": _check_thm23i, "thm23ii": _check_thm23ii, "cor24": _check_cor24,
    "cor25": _check_cor25, "cor26": _check_cor26, "cor27": _check_cor27,
    "cor3b": _check_cor3b, "prop22": _check_prop22,
}


def _validate_payload(c: CheckInstance) -> None:
    p = c.payload
    need = {"thm23i": "F Fs M", "thm23ii": "J Fs M", "cor24": "J Fs M",
            "cor25": "F Fs W1 W2 J", "cor26": "F Fs M", "cor27": "I",
            "cor3b": "F Fs M", "prop22": "F Fs M"}[c.kind].split()
    missing = [k for k in need if k not in p]
    if missing:
        raise InputError(f"{c.kind} payload is missing {missing}")


def run_check(c: CheckInstance, config: Config = Config()) -> CheckReport:
    try:
        _validate_payload(c)
        report = _CHECKS[c.kind](c.payload, config)
    except InputError as exc:
        return CheckReport(c.kind, _payload_summary(c.payload), None, None,
                           INAPPLICABLE, {"reason": str(exc)})
    except ResourceError as exc:
        return CheckReport(c.kind, _payload_summary(c.payload), None, None,
                           ERROR, {"reason": str(exc)})
    report.provenance["config"] = config.to_dict()
    return report


def _payload_summary(p: dict) -> str:
    parts = []
    for k in sorted(p):
        v = p[k]
        parts.append(f"{k}={_filt_str(v) if isinstance(v, (list, tuple)) else v}")
    return " ".join(parts)


def base_invariance(F: Filtration, Fs, M: ModuleModel, config: Config = Config()) -> tuple:
    """Tables at the certified base and at a second, independently certified base.

    The second certification starts right after the first confirmation run.
    Returns (first, second, base, second_base).
    """
    B = BhattacharyaFunction(F, Fs, M, config.t_max)
    base, c_star, _, first = certified_base(B, config.stabilization_bound)
    start = base + confirm_run(B.q)
    b2, second = certify_from(B, start, start + c_star + 4 * B.q + 8, confirm_run(B.q))
    return first, second, base, b2


# corpus ---------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusProfile:
    max_dim: int = 3
    max_degree: int = 5
    max_s: int = 2


class _Gen:
    """Random instance builder over a seeded numpy generator."""

    def __init__(self, rng: np.random.Generator, prof: CorpusProfile):
        self.rng = rng
        self.prof = prof

    def int(self, lo: int, hi: int) -> int:
        return int(self.rng.integers(lo, hi + 1))

    def monomial(self, d: int, lo: int, hi: int) -> tuple:
        deg = self.int(lo, hi)
        cuts = sorted(self.int(0, deg) for _ in range(d - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [deg])]
        return tuple(parts)

    def m_primary(self, d: int, extra: int = 2) -> MonomialIdeal:
        top = self.prof.max_degree
        gens = [tuple(self.int(1, top) if j == i else 0 for j in range(d)) for i in range(d)]
        for _ in range(self.int(0, extra)):
            gens.append(self.monomial(d, 1, top))
        return minimalize(gens, d)

    def ideal(self, d: int) -> MonomialIdeal:
        """m-primary about half the time, otherwise 1-2 random monomials."""
        if self.rng.random() < 0.5:
            return self.m_primary(d)
        gens = [self.monomial(d, 1, self.prof.max_degree) for _ in range(self.int(1, 2))]
        return minimalize(gens, d)

    def torsion_ideal(self, d: int) -> MonomialIdeal:
        return minimalize([self.monomial(d, 1, 3) for _ in range(self.int(1, 2))], d)

    def filtration(self, I: MonomialIdeal, closure_bias: float = 0.5) -> Filtration:
        return integral_closure(I) if self.rng.random() < closure_bias else adic(I)

    def module(self, d: int) -> ModuleModel:
        choice = self.int(0, 2)
        if choice == 0:
            return ModuleModel.free(d)
        Q = ModuleModel.cyclic(self.torsion_ideal(d))
        return Q if choice == 1 else ModuleModel.free(d).direct_sum(Q)

    def dim(self, cap: int | None = None) -> int:
        return self.int(1, min(self.prof.max_dim, cap or self.prof.max_dim))

    def s(self) -> int:
        return self.int(1, self.prof.max_s)


def _applicable(kind: str, p: dict) -> bool:
    """Cheap precondition screen used while sampling."""
    try:
        if kind == "cor27":
            return ht_positive(p["I"], ModuleModel.free(p["I"].dim))
        I = first_term_product(p["Fs"])
        if kind in ("thm23ii", "cor24"):
            return ht_positive(I, p["M"])
        if kind == "cor25":
            branch, _ = cor25_branch(p["W1"], p["W2"], I)
            return branch == p.pop("_branch")
        q_value(p["M"], I)
        return True
    except InputError:
        return False


def _closure_bases(kind: str, p: dict) -> list:
    if kind == "cor27":
        return [p["I"]]
    bases = [G.base for G in p["Fs"]]
    if kind == "thm23i":
        bases.append(p["F"].base)
    return bases


def _make(kind: str, g: _Gen, d: int, s: int) -> dict:
    if kind == "thm23i":
        return {"F": integral_closure(g.m_primary(d)),
                "Fs": [integral_closure(g.ideal(d)) for _ in range(s)], "M": g.module(d)}
    if kind == "thm23ii":
        return {"J": g.m_primary(d),
                "Fs": [integral_closure(g.ideal(d)) for _ in range(s)], "M": g.module(d)}
    if kind == "cor27":
        return {"I": g.ideal(d)}
    Fs = [g.filtration(g.ideal(d)) for _ in range(s)]
    if kind == "cor24":
        return {"J": g.m_primary(d), "Fs": Fs, "M": g.module(d)}
    F = g.filtration(g.m_primary(d))
    if kind == "cor25":
        if d >= 2 and g.rng.random() < 0.5:
            # branch (ii): a torsion summand of strictly smaller dimension
            r = g.int(1, d - 1)
            small = ModuleModel.cyclic(minimalize(
                [tuple(g.int(1, 3) if j == i else 0 for j in range(d)) for i in range(r)], d))
            big = g.module(d)
            W1, W2 = (small, big) if g.rng.random() < 0.5 else (big, small)
            branch = "ii"
        else:
            W1 = g.module(d)
            W2 = ModuleModel.free(d) if g.rng.random() < 0.5 else g.module(d)
            branch = "i"
        return {"F": F, "Fs": Fs, "W1": W1, "W2": W2, "J": g.m_primary(d), "_branch": branch}
    if kind == "cor3b":
        M = ModuleModel.free(d, g.int(1, 3))
        if g.rng.random() < 0.7:
            M = M.direct_sum(ModuleModel.cyclic(g.torsion_ideal(d)))
    elif kind == "cor26":
        # in one variable every torsion module has finite length
        M = ModuleModel.cyclic(g.torsion_ideal(d)) if d > 1 else ModuleModel.free(d)
        if g.rng.random() < 0.3:
            M = M.direct_sum(ModuleModel.cyclic(g.torsion_ideal(d)))
    else:
        M = g.module(d)
    return {"F": F, "Fs": Fs, "M": M}


SAMPLING_TRIES = 24


def generate_instance(kind: str, seed: int, index: int,
                      prof: CorpusProfile = CorpusProfile()) -> tuple:
    """(CheckInstance, vacuous flag) drawn deterministically from (seed, index, kind).

    Draws are repeated until the kind's preconditions hold and, for the
    closure comparisons, some base ideal is not integrally closed.
    """
    rng = np.random.default_rng([seed, index, KINDS.index(kind)])
    g = _Gen(rng, prof)
    d = g.dim(cap=2 if kind == "cor24" else None)
    s = g.s()
    chosen, fallback = None, None
    for _ in range(SAMPLING_TRIES):
        payload = _make(kind, g, d, s)
        if fallback is None:
            fallback = payload
        if not _applicable(kind, payload):
            continue
        if kind in ("thm23i", "thm23ii", "cor27") and all(
                is_integrally_closed(b) for b in _closure_bases(kind, payload)):
            fallback = payload
            continue
        chosen = payload
        break
    vacuous = chosen is None and kind in ("thm23i", "thm23ii", "cor27")
    payload = chosen if chosen is not None else fallback
    payload.pop("_branch", None)
    return CheckInstance(kind, payload), vacuous


def _run_index(args) -> list:
    seed, index, prof, config = args
    out = []
    for kind in KINDS:
        inst, vac = generate_instance(kind, seed, index, prof)
        rep = run_check(inst, config)
        rep.provenance["index"] = index
        if kind in ("thm23i", "thm23ii", "cor27"):
            rep.provenance["vacuous"] = vac or rep.provenance.get("vacuous", False)
            if rep.provenance["vacuous"]:
                log.info("vacuous %s instance at index %d: %s", kind, index, rep.summary)
        if rep.verdict == INAPPLICABLE:
            log.info("inapplicable %s at index %d: %s", kind, index,
                     rep.provenance.get("reason"))
        out.append(rep)
    return out


def run_corpus(seed: int, count: int, profile: CorpusProfile = CorpusProfile(),
               config: Config = Config(), workers: int = 1) -> list:
    """count x len(KINDS) reports, ordered by instance index then kind."""
    if count < 1:
        raise InputError("corpus count must be at least 1")
    if profile.max_dim < 1 or profile.max_s < 1 or profile.max_degree < 1:
        raise InputError(f"invalid corpus profile {profile}")
    jobs = [(seed, i, profile, config) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            batches = list(pool.map(_run_index, jobs))
    else:
        batches = [_run_index(j) for j in jobs]
    return list(itertools.chain.from_iterable(batches))
