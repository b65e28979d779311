"""End-to-end acceptance checks, one PASS/FAIL line each with wall time."""

import time
from contextlib import contextmanager

import numpy as np
from click.testing import CliRunner

from cli_corpus import ANNEX, F, PROFILES, corpus_commands
from conftest import GOLDEN, load_hub
from oracles import byproducts_brute_force, vertex_enumeration
from rreh.cli import main
from rreh.diff import diff_hubs
from rreh.dsl import parse, serialize
from rreh.model import derive_byproducts, expand_hyperedges, validate
from rreh.optimize import (
    ProblemError,
    Status,
    UnreachableDemand,
    build_lp,
    check_solution,
    load_annex,
    make_problem,
    profile_ids,
    resolve_profiles,
    solve,
)
from rreh.optimize.simplex import presolve
from sizing_gen import random_sizing_problem
from random_hubs import random_hub

@contextmanager
def criterion(name, limit):
    state = {"ok": False, "detail": ""}
    t0 = time.perf_counter()
    try:
        yield state
    finally:
        dt = time.perf_counter() - t0
        ok = state["ok"] and dt < limit
        extra = f"; {state['detail']}" if state["detail"] else ""
        print(f"{'PASS' if ok else 'FAIL'} {name} ({dt:.3f} s, limit {limit} s{extra})")
    assert state["ok"], state["detail"]
    assert dt < limit, f"{name} took {dt:.3f} s"


def sets(hub):
    d = hub.derived
    return {n: set(d.get(n)) for n in "CEIBO"}


def codes(rep, level):
    return {f.code for f in getattr(rep, level)}


def test_greenland_reproduction():
    with criterion("greenland derive --set all", 1.0) as st:
        res = CliRunner().invoke(main, ["derive", "--set", "all", F["greenland"]])
        got = sets(load_hub("greenland.rreh"))
        want = {"C": {"electricity", "H2O", "H2", "O2"}, "E": {"H2"}, "I": {"H2O"}, "B": {"O2"}, "O": set()}
        st["ok"] = res.exit_code == 0 and got == want and "B = {O2}" in res.stdout
        st["detail"] = "" if st["ok"] else f"derived {got}"


def test_algeria_ch4_reproduction():
    with criterion("algeria CH4 corrected sets and verbatim findings", 1.0) as st:
        got = sets(load_hub("algeria_ch4_corrected.rreh"))
        want = {"E": {"CH4"}, "I": {"sea water"}, "B": {"O2", "heat"}, "O": set()}
        ok = all(got[k] == v for k, v in want.items())
        rep = validate(load_hub("algeria_ch4_verbatim.rreh"))
        e002 = [f for f in rep.errors if f.code == "E002" and "H2" in f.subject and "DAC" in f.message]
        w002 = [f for f in rep.warnings if f.code == "W002" and f.subject == "C" and "sea water" in f.message]
        st["ok"] = ok and bool(e002) and bool(w002)
        st["detail"] = "" if st["ok"] else f"sets {got}, E002 {len(e002)}, W002 {len(w002)}"


def test_nh3_ch4_comparison():
    with criterion("NH3/CH4 diff golden table", 1.0) as st:
        res = CliRunner().invoke(main, ["diff", F["algeria_ch4_corrected"], F["algeria_nh3_corrected"]])
        golden = (GOLDEN / "diff_ch4_nh3.txt").read_text(encoding="utf-8")
        rep = diff_hubs(load_hub("algeria_ch4_corrected.rreh"), load_hub("algeria_nh3_corrected.rreh"))
        d = rep.delta
        ok = d("E").only_left == ("CH4",) and d("E").only_right == ("NH3",)
        ok &= d("B").only_left == () and d("B").only_right == ("Ar",)
        ok &= all(d(n).same for n in ("L", "I", "O"))
        st["ok"] = ok and res.stdout == golden
        st["detail"] = "" if st["ok"] else "table or deltas differ"


def test_australia_walkthrough():
    with criterion("australia sets and design steps 1, 6", 1.0) as st:
        got = sets(load_hub("australia_ch3oh.rreh"))
        want = {"O": {"CH3OH"}, "B": {"O2", "heat"}, "I": {"sea water"}, "E": {"CH3OH"}}
        res = CliRunner().invoke(main, ["design", "--from", F["australia_ch3oh"]])
        heads = [l for l in res.stdout.splitlines() if l.startswith("# Step ")]
        steps_ok = len(heads) == 7 and "[satisfied]" in heads[0] and "[satisfied]" in heads[5]
        st["ok"] = all(got[k] == v for k, v in want.items()) and steps_ok
        st["detail"] = "" if st["ok"] else f"sets {got}, heads {heads}"


def test_hyperedge_expansion_property():
    with criterion("hyperedge expansion and byproduct oracle", 30.0) as st:
        rng = np.random.default_rng(11)
        bad = 0
        for _ in range(1000):
            g = random_hub(rng, max_techs=12, max_edges=20).graph
            count = sum(len(e.producers) * len(e.consumers) for e in g.edges)
            if len(expand_hyperedges(g)) != count or list(derive_byproducts(g)) != byproducts_brute_force(g):
                bad += 1
        st["ok"] = bad == 0
        st["detail"] = f"1000 graphs, {bad} disagreements"


def test_dsl_round_trip_property():
    with criterion("DSL round trip", 30.0) as st:
        rng = np.random.default_rng(12)
        bad = 0
        for _ in range(1000):
            hub = random_hub(rng, with_asserts=True)
            if parse(serialize(hub)).hub != hub:
                bad += 1
        st["ok"] = bad == 0
        st["detail"] = f"1000 hubs, {bad} mismatches"


def test_lp_oracle_equivalence():
    with criterion("LP oracle equivalence", 60.0) as st:
        rng = np.random.default_rng(2024)
        accepted = mismatches = check_failures = optimal = 0
        worst = {"conservation": 0.0, "capacity": 0.0, "duality_gap": 0.0}
        while accepted < 200:
            try:
                problem = random_sizing_problem(rng)
            except (ProblemError, UnreachableDemand):
                continue
            model = build_lp(problem)
            ps = presolve(model.lp)
            if not ps.infeasible and ps.lp.n > 8:
                continue
            accepted += 1
            sol = solve(model)
            if ps.infeasible:
                oracle = ("infeasible", None)
            else:
                status, value = vertex_enumeration(ps.lp)
                oracle = (status, None if value is None else value + ps.offset)
            if sol.status.value != oracle[0]:
                mismatches += 1
                continue
            if sol.status is Status.OPTIMAL:
                optimal += 1
                if abs(sol.objective - oracle[1]) > 1e-6 * max(1.0, abs(oracle[1])):
                    mismatches += 1
                c = check_solution(sol)
                for k in worst:
                    worst[k] = max(worst[k], c[k])
                if c["conservation"] > 1e-7 or c["capacity"] > 1e-9 or c["duality_gap"] > 1e-6:
                    check_failures += 1
        st["ok"] = mismatches == 0 and check_failures == 0
        st["detail"] = (
            f"{accepted} problems, {optimal} optimal, {mismatches} oracle mismatches, {check_failures} check failures, "
            + ", ".join(f"worst {k} {v:.1e}" for k, v in worst.items())
        )


def _toy(hub, annex, profile_set):
    h = load_hub(f"{hub}.rreh")
    econ = load_annex(ANNEX[annex])
    profiles = resolve_profiles(profile_ids(h, econ), econ.steps, PROFILES / profile_set, None)
    return solve(make_problem(h, econ, profiles))


def test_toy_uniform():
    with criterion("toy optimum, uniform availability = 20", 1.0) as st:
        sol = _toy("toy_wind_h2", "toy_wind_h2", "toy")
        st["ok"] = sol.optimal and abs(sol.objective - 20) <= 1e-6 * 20
        st["detail"] = f"objective {sol.objective}"


def test_toy_half():
    with criterion("toy optimum, half availability = 30", 1.0) as st:
        sol = _toy("toy_wind_h2", "toy_wind_h2", "toy_half")
        st["ok"] = sol.optimal and abs(sol.objective - 30) <= 1e-6 * 30
        st["detail"] = f"objective {sol.objective}"


def test_toy_free_battery():
    with criterion("toy with free battery < 30", 1.0) as st:
        sol = _toy("toy_wind_h2_battery", "toy_wind_h2_battery", "toy_half")
        st["ok"] = sol.optimal and sol.objective < 30 * (1 - 1e-6)
        st["detail"] = f"objective {sol.objective}"


def test_cli_determinism():
    with criterion("CLI determinism over the fixture corpus", 120.0) as st:
        runner = CliRunner()
        differing = []
        cmds = corpus_commands()
        for args, _ in cmds:
            a, b = runner.invoke(main, args), runner.invoke(main, args)
            if (a.exit_code, a.stdout_bytes, a.stderr_bytes) != (b.exit_code, b.stdout_bytes, b.stderr_bytes):
                differing.append(" ".join(args))
        st["ok"] = not differing
        st["detail"] = f"{len(cmds)} commands, {len(differing)} differing"
