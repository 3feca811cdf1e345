"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import json
import time
from fractions import Fraction

import pytest
from oracles import brute_unchaining, levels_of

from unchain import (
    AL,
    CL,
    SL,
    LinkageKind,
    Partition,
    SLalpha,
    SLstar,
    barbell_k4,
    bridged_k4,
    gh_exact,
    sl_mst_oracle,
    sl_star_alpha_dendrogram,
    standard_linkage_dendrogram,
    validate_metric,
)
from unchain.cli import main
from unchain.metric import TriangleViolation
from unchain.proplab import (
    HOLDS,
    VIOLATED,
    check_A1,
    check_A1_exhaustive,
    check_A3,
    check_permutation_invariance,
    check_richness_roundtrip,
    check_sl_oracle,
    check_threshold_collapse,
    find_refinement_violation,
    replay_report,
    replay_witness,
)

EPS = Fraction(1, 10)
METHODS = [SL, CL, AL, SLalpha(1), SLalpha(2), SLstar(1), SLstar(2)]


@pytest.fixture
def verdict(capsys, request):
    """Call with (ok, detail); prints the line uncaptured, then asserts."""
    def report(ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {request.node.name}: {detail}")
        assert ok, detail
    return report


def _sides(space):
    xs = [i for i, lab in enumerate(space.labels) if lab.startswith("x")]
    ys = [i for i, lab in enumerate(space.labels) if lab.startswith("y")]
    return xs, ys


def _barbell_values(base, pert):
    xs, ys = _sides(pert)
    u1 = SLalpha(1).ultrametric(pert)
    u3 = SLalpha(3).ultrametric(pert)
    u0 = SLalpha(1).ultrametric(base)
    within = {u1.d(i, j) for side in (xs, ys) for i in side for j in side if i != j}
    return {
        "within": within,
        "cross1": {u1.d(i, j) for i in xs for j in ys},
        "cross3": {u3.d(i, j) for i in xs for j in ys},
        "base": set(u0.distance_values()),
    }


def test_criterion_01_barbell_exactness(verdict):
    start = time.perf_counter()
    v = _barbell_values(*barbell_k4(EPS))
    exact_ok = (v["within"] == {1} and v["cross1"] == {Fraction(21, 10)}
                and v["cross3"] == {Fraction(11, 10)} and v["base"] == {1})
    f = _barbell_values(*barbell_k4(0.1))
    close = lambda got, want: len(got) == 1 and abs(next(iter(got)) - want) <= 1e-12  # noqa: E731
    float_ok = close(f["within"], 1) and close(f["cross1"], 2.1) and close(f["cross3"], 1.1) and close(f["base"], 1)
    elapsed = time.perf_counter() - start
    verdict(exact_ok and float_ok and elapsed < 1,
            f"cross SL(1)={', '.join(map(str, sorted(v['cross1'])))} SL(3)={', '.join(map(str, sorted(v['cross3'])))} float ok={float_ok} in {elapsed:.3f}s")


def test_criterion_02_gh_exactness(verdict):
    base, pert = barbell_k4(EPS)
    u, u1, u3 = SLalpha(1).ultrametric(base), SLalpha(1).ultrametric(pert), SLalpha(3).ultrametric(pert)
    cases = [("inputs", base, pert, Fraction(1, 20)), ("SL(1) outputs", u, u1, Fraction(11, 20)),
             ("SL(1) vs SL(3)", u1, u3, Fraction(1, 2))]
    fb, fp = barbell_k4(0.1)
    fu, fu1, fu3 = SLalpha(1).ultrametric(fb), SLalpha(1).ultrametric(fp), SLalpha(3).ultrametric(fp)
    fcases = [fb, fp, 0.05], [fu, fu1, 0.55], [fu1, fu3, 0.5]
    parts, ok = [], True
    for (name, a, b, want), (fa, fbb, fwant) in zip(cases, fcases):
        start = time.perf_counter()
        got = gh_exact(a, b)
        fgot = gh_exact(fa, fbb)
        elapsed = time.perf_counter() - start
        ok &= got == want and abs(fgot - fwant) <= 1e-12 and elapsed < 30
        parts.append(f"{name}={got} ({elapsed:.2f}s)")
    verdict(ok, ", ".join(parts))


def test_criterion_03_a2_witness(verdict):
    _, pert = barbell_k4(EPS)
    z = [pert.index("x0"), pert.index("y0")]
    parts, ok = [], True
    for m in (SLalpha(1), SLstar(1)):
        sub = m.ultrametric(pert.subspace(z)).d(0, 1)
        full = m.ultrametric(pert).d(*z)
        ok &= sub == Fraction(11, 10) and full == Fraction(21, 10) and sub < full
        parts.append(f"{m}: u_Z={sub} < u_X={full}")
    verdict(ok, "; ".join(parts))


def _four_point_metrics(values=(1, 2, 3)):
    pairs = list(itertools.combinations(range(4), 2))
    for combo in itertools.product(values, repeat=len(pairs)):
        d = [[0] * 4 for _ in range(4)]
        for (i, j), w in zip(pairs, combo):
            d[i][j] = d[j][i] = w
        try:
            yield validate_metric(None, d)
        except TriangleViolation:
            continue


def test_criterion_04_oracle_equivalence(verdict):
    report = check_sl_oracle(trials=500, max_n=12, seed=0)
    count = bad = 0
    for space in _four_point_metrics():
        count += 1
        if SL.ultrametric(space).dist != sl_mst_oracle(space).dist:
            bad += 1
    verdict(report.verdict == HOLDS and report.trials >= 500 and bad == 0 and count > 0,
            f"{report.trials} random metrics {report.verdict}; {count} exhaustive 4-point metrics, {bad} mismatches")


def test_criterion_05_a1_suite(verdict):
    parts, ok = [], True
    for m in METHODS:
        r = check_A1(m, trials=200, max_n=10, seed=0)
        e = check_A1_exhaustive(m, max_n=4, values=(1, 2, 3))
        ok &= r.holds and e.holds and r.trials >= 200
        parts.append(f"{m}: {r.verdict}/{e.verdict}({e.trials})")
    verdict(ok, "; ".join(parts))


def test_criterion_06_a3_suite(verdict):
    reports = [check_A3(m, trials=200, max_n=10, seed=0) for m in METHODS]
    verdict(all(r.holds and r.trials >= 200 for r in reports),
            "; ".join(f"{r.method}: {r.verdict}" for r in reports))


def test_criterion_07_threshold_collapse(verdict):
    r = check_threshold_collapse(trials=200, max_n=10, seed=0, min_n=3)
    verdict(r.holds and r.trials >= 200, f"{r.trials} metrics, n in [3, 10]: {r.verdict}")


def test_criterion_08_permutation_and_richness(verdict):
    parts, ok = [], True
    for m in METHODS:
        p = check_permutation_invariance(m, trials=200, max_n=10, seed=0)
        r = check_richness_roundtrip(m, trials=200, max_n=10, seed=0)
        ok &= p.holds and r.holds
        parts.append(f"{m}: {p.verdict}/{r.verdict}")
    verdict(ok, "; ".join(parts))


def test_criterion_09_bridge(verdict):
    bridge = bridged_k4()
    one = Partition.one_block(bridge.n)
    sl = standard_linkage_dendrogram(bridge, LinkageKind.SINGLE)
    sl1 = SLalpha(1).run(bridge)
    star = sl_star_alpha_dendrogram(bridge, 1)
    m = bridge.index("m")
    xs = sorted(i for i, lab in enumerate(bridge.labels) if lab.startswith("x"))
    ys = sorted(i for i, lab in enumerate(bridge.labels) if lab.startswith("y"))
    three = Partition([xs, [m], ys])
    ts = [2, Fraction(5, 2), 3, 4, Fraction(499, 100)]
    ok = (sl.at(2) == one and sl1.at(2) == one
          and all(star.at(t) == three for t in ts) and star.at(5) == one and star.heights[-1] == 5)
    d = bridge.to_lists()
    oracle_ok = (levels_of(star) == brute_unchaining(d, 1, True)
                 and levels_of(sl1) == brute_unchaining(d, 1, False))
    verdict(ok and oracle_ok, f"SL heights {list(sl.heights)}, SL(1) {list(sl1.heights)}, "
                              f"SL*(1) {list(star.heights)}; brute recursion agrees={oracle_ok}")


def test_criterion_10_refinement_non_monotonicity(verdict):
    parts, ok = [], True
    for variant in ("plain", "star"):
        r = find_refinement_violation(variant, budget=10_000, seed=0)
        dirs = r.details["directions_found"]
        replays = r.verdict == VIOLATED and replay_report(r)
        again = r.witness is not None and all(
            replay_witness(json.loads(json.dumps(w))) for w in r.witness.values())
        ok &= replays and again and dirs == ["backward", "forward"] and r.trials <= 10_000
        parts.append(f"{variant}: {dirs} within {r.trials} instances, replay={replays and again}")
    verdict(ok, "; ".join(parts))


def test_criterion_11_table_reproduction(verdict, tmp_path, capsys):
    out = tmp_path / "proplab.json"
    start = time.perf_counter()
    code = main(["proplab", "all", "--out", str(out)])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    data = json.loads(out.read_text())
    table = data["suites"]["table"]
    cells = {(row["property"], row["method"].split("(")[0]): row["match"] for row in table["rows"]}
    verdict(code == 0 and data["ok"] and len(cells) == 25 and all(cells.values()) and elapsed < 600,
            f"exit {code}, {sum(cells.values())}/25 cells match, mismatches={table['mismatches']}, {elapsed:.1f}s")
