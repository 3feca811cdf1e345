"""Randomized and exhaustive checks of clustering properties.

Every check is seeded and deterministic. A check either finds no
counterexample in its sample (``holds-on-sample``), returns a serialized
counterexample that :func:`replay_witness` re-verifies
(``violated-with-witness``), or reports that a search for a counterexample
came up empty (``witness-not-found``).
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .exceptions import BudgetExceeded
from .formats import dendrogram_from_json, dendrogram_to_json, encode_number, space_from_json, space_to_json
from .generators import barbell_k4, random_dendrogram, random_metric, random_ultrametric
from .gromov_hausdorff import gh_exact
from .linkage import sl_mst_oracle
from .methods import AL, CL, SL, MethodId, SLalpha, SLstar, parse_method
from .metric import FiniteMetricSpace, dendrogram_to_ultrametric, refines, validate_metric
from .unchaining import sl_alpha_dendrogram, sl_star_alpha_dendrogram

__all__ = [
    "HOLDS",
    "VIOLATED",
    "NOT_FOUND",
    "PropertyReport",
    "check_A1",
    "check_A1_exhaustive",
    "check_A2",
    "check_A3",
    "check_permutation_invariance",
    "check_richness_roundtrip",
    "check_threshold_collapse",
    "check_sl_oracle",
    "find_refinement_violation",
    "semistability_probe",
    "instability_demo",
    "replay_witness",
    "table",
    "PROPERTY_TABLE_EXPECTED",
]

HOLDS = "holds-on-sample"
VIOLATED = "violated-with-witness"
NOT_FOUND = "witness-not-found"


@dataclass
class PropertyReport:
    property: str
    method: str
    verdict: str
    trials: int
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def _method(m) -> MethodId:
    return m if isinstance(m, MethodId) else parse_method(str(m))


def _subseed(seed, k):
    return seed * 1_000_003 + k


def _matrix(space):
    return [list(r) for r in space.dist]


def _first_gap(u, v, cmp):
    """First pair (i, j) where ``cmp(u[i][j], v[i][j])`` is False."""
    n = len(u.dist)
    for i in range(n):
        for j in range(i + 1, n):
            if not cmp(u.dist[i][j], v.dist[i][j]):
                return i, j
    return None


# -- A1 ---------------------------------------------------------------------

def _a1_violation(method, space):
    return _matrix(method.ultrametric(space)) != _matrix(space)


def check_A1(method, trials: int = 200, max_n: int = 10, seed: int = 0) -> PropertyReport:
    """Ultrametric inputs must come back unchanged."""
    method = _method(method)
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(2, max_n)
        u = random_ultrametric(n, _subseed(seed, k))
        if _a1_violation(method, u):
            return PropertyReport("A1", str(method), VIOLATED, k + 1,
                                  {"kind": "A1", "method": str(method), "space": space_to_json(u)})
    return PropertyReport("A1", str(method), HOLDS, trials)


def check_A1_exhaustive(method, max_n: int = 4, values=(1, 2, 3)) -> PropertyReport:
    """A1 on every ultrametric with up to ``max_n`` points and entries in ``values``."""
    from .generators import all_ultrametrics

    method = _method(method)
    count = 0
    for n in range(1, max_n + 1):
        for u in all_ultrametrics(n, values):
            count += 1
            if _a1_violation(method, u):
                return PropertyReport("A1-exhaustive", str(method), VIOLATED, count,
                                      {"kind": "A1", "method": str(method), "space": space_to_json(u)})
    return PropertyReport("A1-exhaustive", str(method), HOLDS, count)


# -- A3 ---------------------------------------------------------------------

def check_A3(method, trials: int = 200, max_n: int = 10, seed: int = 0) -> PropertyReport:
    """Output ultrametric must dominate the single-linkage one pointwise."""
    method = _method(method)
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(2, max_n)
        space = random_metric(n, _subseed(seed, k))
        gap = _first_gap(method.ultrametric(space), sl_mst_oracle(space), lambda a, b: a >= b)
        if gap is not None:
            return PropertyReport("A3", str(method), VIOLATED, k + 1,
                                  {"kind": "A3", "method": str(method), "space": space_to_json(space),
                                   "pair": list(gap)})
    return PropertyReport("A3", str(method), HOLDS, trials)


# -- A2 ---------------------------------------------------------------------

def _a2_witness(method, space, subset):
    uy = method.ultrametric(space)
    ux = method.ultrametric(space.subspace(subset))
    for a in range(len(subset)):
        for b in range(a + 1, len(subset)):
            i, j = subset[a], subset[b]
            if ux.dist[a][b] < uy.dist[i][j]:
                return {
                    "kind": "A2",
                    "method": str(method),
                    "space": space_to_json(space),
                    "subset": list(subset),
                    "pair": [space.labels[i], space.labels[j]],
                    "u_subset": encode_number(ux.dist[a][b]),
                    "u_full": encode_number(uy.dist[i][j]),
                }
    return None


def _barbell_a2_witness(method):
    _, perturbed = barbell_k4(Fraction(1, 10))
    return _a2_witness(method, perturbed, [0, 4])


def check_A2(method, trials: int = 500, max_n: int = 10, seed: int = 0) -> PropertyReport:
    """Adding points must never increase output distances between old points.

    The direction tested is the failure mode: a violation is a subset ``X``
    of ``Y`` with ``u_X(x, x') < u_Y(x, x')``. For the unchaining methods
    with ``alpha < 3`` the barbell instance is tried first.
    """
    method = _method(method)
    if method.tag in ("SLalpha", "SLstarAlpha") and method.alpha < 3:
        w = _barbell_a2_witness(method)
        if w is not None:
            return PropertyReport("A2", str(method), VIOLATED, 1, w, {"source": "barbell"})
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(3, max_n)
        space = random_metric(n, _subseed(seed, k))
        size = rng.randint(2, n - 1)
        subset = sorted(rng.sample(range(n), size))
        w = _a2_witness(method, space, subset)
        if w is not None:
            return PropertyReport("A2", str(method), VIOLATED, k + 1, w, {"source": "random"})
    return PropertyReport("A2", str(method), HOLDS, trials)


# -- permutation invariance and richness -------------------------------------

def _perm_violation(method, space, perm):
    u = method.ultrametric(space)
    up = method.ultrametric(space.permuted(perm))
    n = space.n
    return any(up.dist[i][j] != u.dist[perm[i]][perm[j]] for i in range(n) for j in range(n))


def check_permutation_invariance(method, trials: int = 200, max_n: int = 10, seed: int = 0) -> PropertyReport:
    method = _method(method)
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(2, max_n)
        space = random_metric(n, _subseed(seed, k))
        perm = list(range(n))
        rng.shuffle(perm)
        if _perm_violation(method, space, perm):
            return PropertyReport("permutation-invariance", str(method), VIOLATED, k + 1,
                                  {"kind": "perm", "method": str(method), "space": space_to_json(space),
                                   "perm": perm})
    return PropertyReport("permutation-invariance", str(method), HOLDS, trials)


def check_richness_roundtrip(method, trials: int = 200, max_n: int = 10, seed: int = 0) -> PropertyReport:
    """Random dendrogram -> its ultrametric -> method -> same dendrogram."""
    method = _method(method)
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(2, max_n)
        theta = random_dendrogram(n, random.Random(_subseed(seed, k)))
        if method.run(dendrogram_to_ultrametric(theta)) != theta:
            return PropertyReport("rich", str(method), VIOLATED, k + 1,
                                  {"kind": "rich", "method": str(method), "dendrogram": dendrogram_to_json(theta)})
    return PropertyReport("rich", str(method), HOLDS, trials)


# -- single linkage against the spanning-tree oracle ---------------------------

def check_sl_oracle(trials: int = 500, max_n: int = 12, seed: int = 0) -> PropertyReport:
    """The recursive single-linkage ultrametric equals the minimax path one."""
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(2, max_n)
        space = random_metric(n, _subseed(seed, k))
        if _first_gap(SL.ultrametric(space), sl_mst_oracle(space), lambda a, b: a == b) is not None:
            return PropertyReport("sl-oracle", "SL", VIOLATED, k + 1,
                                  {"kind": "oracle", "method": "SL", "space": space_to_json(space)})
    return PropertyReport("sl-oracle", "SL", HOLDS, trials)


# -- threshold collapse ------------------------------------------------------

def collapse_alphas(n: int):
    """Smallest integer alphas at which SL(alpha) and SL*(alpha) reduce to SL."""
    return max(1, math.ceil((n - 2) / 2)), max(1, n - 1)


def _collapse_violation(space):
    ref = SL.run(space)
    a_plain, a_star = collapse_alphas(space.n)
    if sl_alpha_dendrogram(space, a_plain) != ref:
        return "plain", a_plain
    if sl_star_alpha_dendrogram(space, a_star) != ref:
        return "star", a_star
    return None


def check_threshold_collapse(trials: int = 200, max_n: int = 10, seed: int = 0, min_n: int = 3) -> PropertyReport:
    rng = random.Random(seed)
    for k in range(trials):
        n = rng.randint(min_n, max_n)
        space = random_metric(n, _subseed(seed, k))
        bad = _collapse_violation(space)
        if bad is not None:
            return PropertyReport("threshold-collapse", "SLalpha/SLstarAlpha", VIOLATED, k + 1,
                                  {"kind": "collapse", "space": space_to_json(space),
                                   "variant": bad[0], "alpha": bad[1]})
    return PropertyReport("threshold-collapse", "SLalpha/SLstarAlpha", HOLDS, trials)


# -- refinement non-monotonicity in alpha --------------------------------------

_ALPHA_PAIRS = [(2, 1), (3, 1), (3, 2), (4, 2), (Fraction(3, 2), 1), (4, 1)]


def _dendrogram_fn(variant):
    if variant == "star":
        return sl_star_alpha_dendrogram
    if variant == "plain":
        return sl_alpha_dendrogram
    raise ValueError(f"variant must be 'star' or 'plain', got {variant!r}")


def _non_refining_levels(theta_a, theta_b):
    """Heights ``t`` where ``theta_a(t)`` does not refine ``theta_b(t)``."""
    ts = sorted(set(theta_a.heights) | set(theta_b.heights))
    return [t for t in ts if not refines(theta_a.at(t), theta_b.at(t))]


def _refine_witness(variant, space, alpha, alpha_p, t, direction):
    return {
        "kind": "refine",
        "variant": variant,
        "space": space_to_json(space),
        "alpha": encode_number(alpha),
        "alpha_prime": encode_number(alpha_p),
        "t": encode_number(t),
        "direction": direction,
    }


def _refine_instance(rng, k, seed):
    kind = ("clustered", "graph", "euclidean")[k % 3]
    # Blocks that diverge between two alphas need dimension >= 2 on both
    # sides, so the planted family goes up to a dozen or more points.
    n = rng.randint(8, 14) if kind == "clustered" else rng.randint(5, 10)
    return random_metric(n, _subseed(seed, k), kind=kind)


def find_refinement_violation(variant: str, budget: int = 10_000, seed: int = 0) -> PropertyReport:
    """Search for ``alpha > alpha'`` with non-nested dendrogram levels.

    Two witnesses are sought: a level where ``theta_alpha`` fails to refine
    ``theta_alpha'`` (``"forward"``) and one where ``theta_alpha'`` fails to
    refine ``theta_alpha`` (``"backward"``). They may come from different
    instances.
    """
    build = _dendrogram_fn(variant)
    rng = random.Random(seed)
    found = {}
    used = 0
    for k in range(budget):
        used = k + 1
        space = _refine_instance(rng, k, seed)
        alpha, alpha_p = _ALPHA_PAIRS[k % len(_ALPHA_PAIRS)]
        ta, tp = build(space, alpha), build(space, alpha_p)
        if "forward" not in found:
            bad = _non_refining_levels(ta, tp)
            if bad:
                found["forward"] = _refine_witness(variant, space, alpha, alpha_p, bad[0], "forward")
        if "backward" not in found:
            bad = _non_refining_levels(tp, ta)
            if bad:
                found["backward"] = _refine_witness(variant, space, alpha, alpha_p, bad[0], "backward")
        if len(found) == 2:
            break
    verdict = VIOLATED if len(found) == 2 else NOT_FOUND
    name = "SLstarAlpha" if variant == "star" else "SLalpha"
    return PropertyReport("refinement-monotone-in-alpha", name, verdict, used, found or None,
                          {"directions_found": sorted(found)})


# -- witness replay ----------------------------------------------------------

def replay_witness(witness: dict) -> bool:
    """Re-run a serialized counterexample; True iff the violation reproduces."""
    kind = witness["kind"]
    if kind == "refine" and "forward" not in witness and "variant" in witness:
        space = space_from_json(witness["space"])
        alpha = _decode(witness["alpha"])
        alpha_p = _decode(witness["alpha_prime"])
        t = _decode(witness["t"])
        build = _dendrogram_fn(witness["variant"])
        ta, tp = build(space, alpha), build(space, alpha_p)
        if witness["direction"] == "forward":
            return not refines(ta.at(t), tp.at(t))
        return not refines(tp.at(t), ta.at(t))
    if kind == "oracle":
        space = space_from_json(witness["space"])
        return _first_gap(SL.ultrametric(space), sl_mst_oracle(space), lambda a, b: a == b) is not None
    if kind == "collapse":
        space = space_from_json(witness["space"])
        return _collapse_violation(space) is not None
    method = _method(witness["method"])
    if kind == "A1":
        return _a1_violation(method, space_from_json(witness["space"]))
    if kind == "A2":
        space = space_from_json(witness["space"])
        return _a2_witness(method, space, witness["subset"]) is not None
    if kind == "A3":
        space = space_from_json(witness["space"])
        return _first_gap(method.ultrametric(space), sl_mst_oracle(space), lambda a, b: a >= b) is not None
    if kind == "perm":
        return _perm_violation(method, space_from_json(witness["space"]), witness["perm"])
    if kind == "rich":
        theta = dendrogram_from_json(witness["dendrogram"])
        return method.run(dendrogram_to_ultrametric(theta)) != theta
    raise ValueError(f"unknown witness kind {kind!r}")


def _decode(v):
    from .formats import decode_number

    return decode_number(v, exact=not isinstance(v, float))


def replay_report(report: PropertyReport) -> bool:
    """Replay every witness attached to a violated report."""
    if report.verdict != VIOLATED:
        return False
    w = report.witness
    if w is None:
        return False
    if "kind" in w:
        return replay_witness(w)
    return all(replay_witness(sub) for sub in w.values())


# -- stability probes ----------------------------------------------------------

def _perturb(base: FiniteMetricSpace, eps, rng: random.Random) -> FiniteMetricSpace:
    n = base.n
    d = [list(r) for r in base.dist]
    exact = not isinstance(eps, float)
    for i in range(n):
        for j in range(i + 1, n):
            step = eps * Fraction(rng.randint(0, 1000), 1000) if exact else eps * rng.random()
            d[i][j] = d[j][i] = d[i][j] + step
    # Nonnegative bumps up to sep keep the triangle inequality; the closure
    # repairs larger ones.
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return validate_metric(base.labels, d, check_triangle=exact)


def semistability_probe(method, base_ultrametric: FiniteMetricSpace, epsilons, seed: int = 0, node_budget: int = 2_000_000):
    """GH distance between the method's output on perturbed copies of an
    ultrametric and its output on the ultrametric itself.

    Returns ``[(eps, value), ...]``; ``value`` is a ``(lower, upper)`` pair
    when the GH search hits its budget. No verdict is drawn.
    """
    method = _method(method)
    rng = random.Random(seed)
    target = method.ultrametric(base_ultrametric)
    out = []
    for eps in epsilons:
        space = _perturb(base_ultrametric, eps, rng)
        try:
            value = gh_exact(method.ultrametric(space), target, node_budget)
        except BudgetExceeded as exc:
            value = (exc.lower, exc.upper)
        out.append((eps, value))
    return out


def instability_demo(eps=Fraction(1, 10), node_budget: int = 2_000_000) -> dict:
    """Barbell instability numbers for SL(1) and SL(3).

    Returns the three GH distances with their closed forms: inputs
    ``eps/2``, SL(1) outputs ``(1+eps)/2``, SL(1) against SL(3) on the
    perturbed input ``1/2``.
    """
    base, perturbed = barbell_k4(eps)
    u = SLalpha(1).ultrametric(base)
    u1 = SLalpha(1).ultrametric(perturbed)
    u3 = SLalpha(3).ultrametric(perturbed)
    got = {
        "inputs": gh_exact(base, perturbed, node_budget),
        "sl1_outputs": gh_exact(u, u1, node_budget),
        "sl1_vs_sl3": gh_exact(u1, u3, node_budget),
    }
    half = Fraction(1, 2) if not isinstance(eps, float) else 0.5
    expected = {
        "inputs": eps * half,
        "sl1_outputs": (1 + eps) * half if eps else 0,
        "sl1_vs_sl3": half if eps else 0,
    }
    tol = 1e-12 if isinstance(eps, float) else 0
    checks = {k: abs(got[k] - expected[k]) <= tol for k in got}
    return {
        "eps": eps,
        "values": got,
        "expected": expected,
        "checks": checks,
        "unstable": bool(eps) and got["sl1_outputs"] >= Fraction(1, 2) and got["inputs"] < Fraction(1, 2),
        "ok": all(checks.values()),
    }


# -- property table ---------------------------------------------------------

PROPERTY_TABLE_ROWS = ("permutation-invariance", "rich", "A1", "A2", "A3")


def table_methods(alpha=2):
    return [SL, CL, AL, SLalpha(alpha), SLstar(alpha)]


PROPERTY_TABLE_EXPECTED = {
    "permutation-invariance": {"SL": True, "CL": True, "AL": True, "SLalpha": True, "SLstarAlpha": True},
    "rich": {"SL": True, "CL": True, "AL": True, "SLalpha": True, "SLstarAlpha": True},
    "A1": {"SL": True, "CL": True, "AL": True, "SLalpha": True, "SLstarAlpha": True},
    "A2": {"SL": True, "CL": False, "AL": False, "SLalpha": False, "SLstarAlpha": False},
    "A3": {"SL": True, "CL": True, "AL": True, "SLalpha": True, "SLstarAlpha": True},
}

_CHECKS = {
    "permutation-invariance": check_permutation_invariance,
    "rich": check_richness_roundtrip,
    "A1": check_A1,
    "A2": check_A2,
    "A3": check_A3,
}


def property_table(trials: int = 200, max_n: int = 10, seed: int = 0, alpha=2, a2_trials: int | None = None) -> dict:
    """Run every property check on every method and compare with the
    expected verdicts.

    An expected property must come out ``holds-on-sample``; an expected
    failure must come out ``violated-with-witness`` with a witness that
    replays.
    """
    rows = []
    mismatches = []
    for prop in PROPERTY_TABLE_ROWS:
        for method in table_methods(alpha):
            n_trials = a2_trials if (prop == "A2" and a2_trials) else trials
            report = _CHECKS[prop](method, n_trials, max_n, seed)
            expected = PROPERTY_TABLE_EXPECTED[prop][method.tag]
            ok = report.verdict == HOLDS if expected else (report.verdict == VIOLATED and replay_report(report))
            rows.append({"expected": "holds" if expected else "fails", "match": ok, **report.to_dict()})
            if not ok:
                mismatches.append((prop, str(method)))
    return {"rows": rows, "mismatches": mismatches, "ok": not mismatches,
            "config": {"trials": trials, "max_n": max_n, "seed": seed, "alpha": encode_number(alpha)}}
