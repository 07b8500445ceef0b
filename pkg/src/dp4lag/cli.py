"""Command-line verification pipeline emitting schema-versioned JSON reports.

Verbs: ``sections``, ``verify``, ``pencil``, ``probe``, ``special-directions``,
``dictionary``, ``pipeline``.  Every verb consumes the same configuration
schema (one of ``theta``, ``points``, ``ab``), echoes it in the report, and
exits 0 when every mathematical check passed, 1 when one failed, and 2 on
invalid input.  Rationals are serialized as ``p/q`` strings so the report
loses no exactness; with a fixed seed the report bytes are reproducible
(timing, the one nondeterministic quantity, goes to stderr only).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import levels, linalg, pencil, sections, symplectic
from .exactpoly import parse_rat, rat_str, to_text
from .pencil import ConfigError, PencilError, PointConfig
from .sections import SectionSpaceError

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2

DEFAULT_THETA = ("0", "1", "-1", "2", "-2")


class InputError(ValueError):
    """Invalid configuration file or flags (exit code 2)."""


def _rat_seq(values: Sequence[Fraction]) -> list[str]:
    return [rat_str(v) for v in values]


def load_config(path: Optional[str]) -> dict:
    """Parse the run configuration; default is the canonical theta fixture."""
    if path is None:
        raw = {"theta": list(DEFAULT_THETA)}
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError("config must be a JSON object")
    keys = set(raw) & {"theta", "points", "ab"}
    if len(keys) != 1 or set(raw) - {"theta", "points", "ab"}:
        raise InputError("config must contain exactly one of: theta, points, ab")
    try:
        if "theta" in raw:
            theta = [parse_rat(str(t)) for t in raw["theta"]]
            if len(theta) != 5:
                raise InputError("theta needs exactly five rationals")
            return {"theta": theta}
        if "points" in raw:
            points = [[parse_rat(str(c)) for c in p] for p in raw["points"]]
            if len(points) != 5 or any(len(p) != 3 for p in points):
                raise InputError("points needs five homogeneous triples")
            return {"points": points}
        ab = [parse_rat(str(c)) for c in raw["ab"]]
        if len(ab) != 2:
            raise InputError("ab needs exactly two rationals")
        return {"ab": ab}
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed rational in config: {exc}") from exc


def config_echo(cfg: dict) -> dict:
    if "theta" in cfg:
        return {"theta": _rat_seq(cfg["theta"])}
    if "points" in cfg:
        return {"points": [_rat_seq(p) for p in cfg["points"]]}
    return {"ab": _rat_seq(cfg["ab"])}


def build_point_config(cfg: dict) -> PointConfig:
    if "theta" in cfg:
        return PointConfig.from_theta(cfg["theta"])
    if "points" in cfg:
        return pencil.normalize_config(cfg["points"])
    return PointConfig.from_ab(*cfg["ab"])


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "pass": bool(ok), "detail": detail}


def _report(command: str, cfg: dict, seed: int, checks: list[dict], result: dict) -> dict:
    return {
        "schema_version": "1",
        "command": command,
        "seed": seed,
        "config": config_echo(cfg),
        "checks": checks,
        "overall_pass": all(c["pass"] for c in checks),
        "result": result,
    }


def _serialize_basis(basis: sections.SectionBasis) -> dict:
    return {
        "H": {"f": to_text(basis.H.f), "g": to_text(basis.H.g), "h": to_text(basis.H.h)},
        "G": {"f": to_text(basis.G.f), "g": to_text(basis.G.g), "h": to_text(basis.G.h)},
    }


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def cmd_sections(cfg: dict, args) -> dict:
    config = build_point_config(cfg)
    checks = []
    if args.plane_only:
        dim = sections.section_space_dimension(config, 0)
        checks.append(_check("plane_dimension", dim == 27, f"kernel dimension {dim}, expected 27"))
        result = {"row_count": 18, "kernel_dimension": dim, "configuration": config.to_json()}
        return _report("sections", cfg, args.seed, checks, result)
    system = sections.assemble_system(config)
    basis = sections.kernel_basis(system, config)
    verified = all(r.evaluate(basis.H) == 0 and r.evaluate(basis.G) == 0 for r in system.rows)
    transport = sections.chart_transport_check(basis.H) and sections.chart_transport_check(basis.G)
    checks.append(_check("kernel_dimension", True, "kernel dimension 2"))
    checks.append(_check("rows_annihilate_basis", verified, "all 53 rows vanish on H and G"))
    checks.append(_check("chart_transport", transport, "basis fields regular in the opposite chart"))
    result = {
        "row_count": len(system),
        "kernel_dimension": 2,
        "configuration": config.to_json(),
        "basis": _serialize_basis(basis),
        "dimension_profile": [sections.section_space_dimension(config, k) for k in range(6)],
    }
    return _report("sections", cfg, args.seed, checks, result)


def cmd_verify(cfg: dict, args) -> dict:
    config = build_point_config(cfg)
    started = time.monotonic()
    cert = symplectic.involutivity_certificate(config, seed=args.seed)
    if getattr(args, "debug_corrupt_basis", False):
        # negative-control path: perturb one coefficient and recompute R
        slots = cert.basis.H.slots()
        slots[0] += 1
        corrupted = sections.SymField.from_slots(slots)
        bad_r = symplectic.poisson_R(corrupted, cert.basis.G)
        from .exactpoly import poly_eval

        bad_samples = tuple(
            (q, poly_eval(bad_r, dict(zip(("x", "y", "u", "v"), q)))) for q, _ in cert.sample_checks
        )
        cert = symplectic.InvolutivityCertificate(
            config=config,
            basis=cert.basis,
            R_poly=bad_r,
            is_zero=bad_r.is_zero(),
            sample_checks=bad_samples,
        )
    checks = [
        _check("bracket_identically_zero", cert.is_zero, f"R = {to_text(cert.R_poly)[:120]}"),
        _check(
            "sample_evaluations_zero",
            cert.is_zero and all(v == 0 for _, v in cert.sample_checks),
            f"{len(cert.sample_checks)} redundant samples",
        ),
    ]
    result = {
        "configuration": config.to_json(),
        "R": to_text(cert.R_poly),
        "is_zero": cert.is_zero,
        "samples": [
            {"point": _rat_seq(q), "value": rat_str(v)} for q, v in cert.sample_checks
        ],
    }
    if args.symbolic:
        sym = symplectic.symbolic_involutivity((1, -1))
        checks.append(_check("symbolic_bracket_zero", sym.is_zero, "R = 0 with (a, b) symbolic"))
        checks.append(
            _check(
                "symbolic_degeneracy_locus_nonzero",
                not sym.degeneracy_locus.is_zero(),
                "pivot product does not vanish identically",
            )
        )
        result["symbolic"] = {
            "branch": _rat_seq(sym.branch),
            "reduced_dimension": sym.reduced_dimension,
            "is_zero": sym.is_zero,
            "degeneracy_locus": to_text(sym.degeneracy_locus),
        }
    print(f"verify: {time.monotonic() - started:.3f}s", file=sys.stderr)
    return _report("verify", cfg, args.seed, checks, result)


def cmd_pencil(cfg: dict, args) -> dict:
    if "theta" not in cfg:
        raise InputError("the pencil verb needs the theta input form")
    theta = cfg["theta"]
    pen = pencil.standard_dp4_quadrics(theta)
    char = pencil.characteristic_polynomial(pen)
    members = pencil.singular_members(pen)
    coranks = [pencil.member_corank(pen, m.theta) for m in members]
    config = PointConfig.from_theta(theta)
    lines = pencil.enumerate_lines()
    numerology = pencil.zeta_numerology()
    checks = [
        _check(
            "characteristic_roots",
            sorted(m.theta for m in members) == sorted(theta),
            "root multiset equals theta",
        ),
        _check("singular_coranks", all(c == 1 for c in coranks), f"coranks {coranks}"),
        _check("sixteen_lines", len(lines) == 16, "1 + 5 + 10 line classes"),
        _check(
            "vmrt_sums",
            all(pencil.vmrt_class_sum(i) for i in range(1, 6)),
            "dual-class sums equal twice the tautological class",
        ),
        _check(
            "numerology",
            numerology["zeta_cubed"] == -4
            and numerology["base_multiplicity"] == 1
            and numerology["euler_characteristic_blowup"] == 48,
            str({k: str(v) for k, v in numerology.items()}),
        ),
    ]
    result = {
        "characteristic_polynomial": to_text(char),
        "det_q1": rat_str(pen.det_q1()),
        "singular_members": [
            {"theta": rat_str(m.theta), "parameter": _rat_seq(m.parameter), "corank": c}
            for m, c in zip(members, coranks)
        ],
        "veronese_points": [[rat_str(c) for c in p] for p in pencil.veronese_points(theta)],
        "configuration": config.to_json(),
        "lines": [{"label": l.label, "d": l.d, "m": list(l.m)} for l in lines],
    }
    return _report("pencil", cfg, args.seed, checks, result)


def _basis_for(cfg: dict) -> tuple[PointConfig, sections.SectionBasis]:
    config = build_point_config(cfg)
    basis = sections.kernel_basis(sections.assemble_system(config), config)
    return config, basis


def _generic_samples(basis, rng: random.Random, count: int):
    out = []
    while len(out) < count:
        x0 = (
            Fraction(rng.randint(-30, 30), rng.randint(1, 7)),
            Fraction(rng.randint(-30, 30), rng.randint(1, 7)),
        )
        e = (Fraction(rng.randint(-20, 20)), Fraction(rng.randint(-20, 20)))
        if e == (0, 0):
            continue
        if levels.is_generic_sample(basis, e, x0):
            out.append((x0, e))
    return out


def _serialize_fiber_line(line) -> dict:
    entry: dict = {"multiplicity": line.multiplicity, "alive": line.alive}
    if line.direction is not None:
        entry["kind"] = "rational_line"
        entry["direction"] = _rat_seq(line.direction)
        if line.radius_square is not None:
            entry["radius_square"] = rat_str(line.radius_square)
    else:
        entry["kind"] = "conjugate_lines"
        entry["quadric"] = _rat_seq(line.conjugate_quadric)
    return entry


def cmd_probe(cfg: dict, args) -> dict:
    config, basis = _basis_for(cfg)
    rng = random.Random(args.seed)
    samples = _generic_samples(basis, rng, 12)
    fibers = []
    all_generic_ok = True
    for x0, e in samples:
        rep = levels.fiber_count(basis, e, x0)
        ok = rep.status is levels.FiberStatus.FOUR_POINTS and len(rep.involution_pairs or ()) == 2
        all_generic_ok = all_generic_ok and ok
        fibers.append(
            {
                "base_point": _rat_seq(x0),
                "direction": _rat_seq(e),
                "status": rep.status.value,
                "involution_orbits": len(rep.involution_pairs or ()),
                "solutions": [_serialize_fiber_line(line) for line in rep.solution_data],
            }
        )
    e_generic = (Fraction(3), Fraction(7))
    delta = levels.chart_discriminant(basis, e_generic)
    red = levels.reducibility_test(basis, e_generic)
    checks = [
        _check("generic_fibers_four_points", all_generic_ok, f"{len(samples)} seeded samples"),
        _check("discriminant_degree", delta.total_degree() <= 8, f"degree {delta.total_degree()}"),
        _check("generic_member_irreducible", not red.reducible, "discriminant is not a square"),
    ]
    result = {
        "configuration": config.to_json(),
        "fibers": fibers,
        "generic_direction": _rat_seq(e_generic),
        "chart_discriminant": to_text(delta),
        "reducible": red.reducible,
    }
    if args.tangency:
        reports = []
        tangency_ok = True
        for i, j in itertools.combinations(range(1, 6), 2):
            rep = levels.line_tangency_check(basis, e_generic, (i, j))
            tangency_ok = tangency_ok and rep.has_tangency_witness()
            reports.append(
                {
                    "pair": [i, j],
                    "gcd_degree": rep.gcd_degree,
                    "witnesses": [rat_str(w) for w in rep.witnesses],
                }
            )
        checks.append(_check("line_tangencies", tangency_ok, "repeated root on each of the 10 joins"))
        result["tangency"] = reports
    return _report("probe", cfg, args.seed, checks, result)


def cmd_special_directions(cfg: dict, args) -> dict:
    config, basis = _basis_for(cfg)
    sd = levels.special_directions(basis, config)
    rng = random.Random(args.seed)
    special = set(sd.directions)
    decoys = []
    while len(decoys) < 10:
        e = (Fraction(rng.randint(-30, 30)), Fraction(rng.randint(-30, 30)))
        if e == (0, 0):
            continue
        prim = linalg.primitive_integer_vector(list(e))
        e = (Fraction(prim[0]), Fraction(prim[1]))
        if e in special or e in decoys:
            continue
        decoys.append(e)
    table = []
    verdicts = {}
    for e in list(sd.directions) + decoys:
        red = levels.reducibility_test(basis, e)
        verdicts[e] = red.reducible
        entry = {
            "direction": _rat_seq(e),
            "special": e in special,
            "reducible": red.reducible,
        }
        if red.sqrt is not None:
            entry["sqrt"] = to_text(red.sqrt)
        table.append(entry)
    checks = [
        _check("five_distinct_directions", len(special) == 5, str([_rat_seq(d) for d in sd.directions])),
        _check(
            "reducible_exactly_on_special",
            all(verdicts[e] == (e in special) for e in verdicts),
            "square discriminant exactly on the five special directions",
        ),
    ]
    result = {
        "configuration": config.to_json(),
        "directions": [_rat_seq(d) for d in sd.directions],
        "witnesses": [
            [
                {
                    "node": _rat_seq(w.node),
                    "pairing": [list(w.pairing[0]), list(w.pairing[1])],
                }
                for w in group
            ]
            for group in sd.witnesses
        ],
        "reducibility_table": table,
    }
    return _report("special-directions", cfg, args.seed, checks, result)


def cmd_dictionary(cfg: dict, args) -> dict:
    if "theta" not in cfg:
        raise InputError("the dictionary verb needs the theta input form")
    theta = cfg["theta"]
    config, basis = _basis_for(cfg)
    sd = levels.special_directions(basis, config)
    params = [(Fraction(1), Fraction(t)) for t in theta]
    match = pencil.match_directions_to_parameters(sd.directions, params)
    residual_zero = all(r == 0 for r in match["held_out_residuals"])
    cross_ok = True
    for quad in itertools.combinations(range(5), 4):
        cr_dir = pencil.cross_ratio(*[sd.directions[k] for k in quad])
        cr_par = pencil.cross_ratio(*[params[match["permutation"][k]] for k in quad])
        if cr_dir[0] * cr_par[1] != cr_dir[1] * cr_par[0]:
            cross_ok = False
    checks = [
        _check("mobius_zero_residual", residual_zero, "exact on the two held-out pairs"),
        _check("cross_ratios_match", cross_ok, "all five 4-subsets"),
    ]
    result = {
        "configuration": config.to_json(),
        "directions": [_rat_seq(d) for d in sd.directions],
        "parameters": [_rat_seq(p) for p in params],
        "matching": list(match["permutation"]),
        "mobius": [[rat_str(x) for x in row] for row in match["matrix"]],
    }
    return _report("dictionary", cfg, args.seed, checks, result)


def cmd_pipeline(cfg: dict, args) -> dict:
    if "theta" not in cfg:
        raise InputError("the pipeline verb needs the theta input form")
    theta = cfg["theta"]
    checks: list[dict] = []
    result: dict = {}
    rng = random.Random(args.seed)

    # stage 1: pencil
    pen = pencil.standard_dp4_quadrics(theta)
    members = pencil.singular_members(pen)
    checks.append(
        _check(
            "pencil_roots_and_coranks",
            sorted(m.theta for m in members) == sorted(theta)
            and all(pencil.member_corank(pen, m.theta) == 1 for m in members),
            "root multiset and corank-1 singular members",
        )
    )
    config = PointConfig.from_theta(theta)
    result["pencil"] = {
        "characteristic_polynomial": to_text(pencil.characteristic_polynomial(pen)),
        "singular_parameters": [_rat_seq(m.parameter) for m in members],
        "ab": _rat_seq(config.ab),
    }

    # stage 2: sections
    plane_dim = sections.section_space_dimension(config, 0)
    checks.append(_check("plane_dimension_27", plane_dim == 27, f"measured {plane_dim}"))
    basis = sections.kernel_basis(sections.assemble_system(config), config)
    profile = [sections.section_space_dimension(config, k) for k in range(6)]
    checks.append(_check("kernel_dimension_2", profile[5] == 2, f"dimension profile {profile}"))
    result["sections"] = {"dimension_profile": profile, "basis": _serialize_basis(basis)}

    # stage 3: involutivity, for this config and a seeded random sweep
    cert = symplectic.involutivity_certificate(config, seed=args.seed)
    checks.append(_check("involutivity_R_zero", cert.is_zero, "bracket polynomial vanishes"))
    result["involutivity"] = {
        "is_zero": cert.is_zero,
        "samples": len(cert.sample_checks),
    }
    sweep_ok = True
    swept = 0
    while swept < 20:
        a = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        b = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        try:
            random_config = PointConfig.from_ab(a, b)
        except ValueError:
            continue
        random_basis = sections.kernel_basis(sections.assemble_system(random_config), random_config)
        sweep_ok = sweep_ok and symplectic.poisson_R(random_basis.H, random_basis.G).is_zero()
        swept += 1
    checks.append(_check("random_config_sweep", sweep_ok, "kernel dimension 2 and R = 0 for 20 random configs"))
    theta_sweep_ok = True
    for _ in range(20):
        sample = set()
        while len(sample) < 5:
            sample.add(Fraction(rng.randint(-10, 10), rng.randint(1, 4)))
        sample_pencil = pencil.standard_dp4_quadrics(sorted(sample))
        sample_members = pencil.singular_members(sample_pencil)
        theta_sweep_ok = theta_sweep_ok and [m.theta for m in sample_members] == sorted(sample)
        theta_sweep_ok = theta_sweep_ok and all(
            pencil.member_corank(sample_pencil, m.theta) == 1 for m in sample_members
        )
    checks.append(_check("random_theta_sweep", theta_sweep_ok, "roots and coranks for 20 random theta tuples"))
    if args.symbolic:
        sym = symplectic.symbolic_involutivity((1, -1))
        checks.append(
            _check(
                "symbolic_involutivity",
                sym.is_zero and not sym.degeneracy_locus.is_zero(),
                f"degeneracy locus {to_text(sym.degeneracy_locus)[:80]}",
            )
        )
        result["symbolic"] = {
            "is_zero": sym.is_zero,
            "degeneracy_locus": to_text(sym.degeneracy_locus),
        }
    else:
        checks.append(_check("symbolic_involutivity", True, "skipped (enable with --symbolic)"))

    # stage 4: numerology and line combinatorics
    numerology = pencil.zeta_numerology()
    lines = pencil.enumerate_lines()
    anticanonical = pencil.anticanonical_class()
    found = set()
    for d in range(-2, 3):
        for m in itertools.product((-1, 0, 1), repeat=5):
            candidate = pencil.DivisorClass(d, m)
            if candidate.self_intersection() == -1 and candidate.dot(anticanonical) == 1:
                found.add((d, m))
    checks.append(
        _check(
            "sixteen_lines_lattice_search",
            found == {(l.d, l.m) for l in lines} and len(lines) == 16,
            "exhaustive search over the small lattice box",
        )
    )
    partition_ok = True
    for i in range(1, 6):
        fib1 = next(f for f in pencil.conic_fibrations() if f.i == i and f.j == 1)
        fib2 = next(f for f in pencil.conic_fibrations() if f.i == i and f.j == 2)
        used = [c for f in (fib1, fib2) for pair in f.singular_fibers for c in pair]
        partition_ok = partition_ok and sorted((c.d, c.m) for c in used) == sorted((c.d, c.m) for c in lines)
    checks.append(
        _check(
            "numerology",
            numerology["zeta_cubed"] == -4
            and numerology["base_multiplicity"] == 1
            and numerology["euler_characteristic_blowup"] == 48
            and all(pencil.vmrt_class_sum(i) for i in range(1, 6)),
            "tautological-class intersection numbers",
        )
    )
    checks.append(_check("fibration_partitions", partition_ok, "each index splits the 16 lines 8 + 8"))

    # stage 5: special directions and reducibility
    sd = levels.special_directions(basis, config)
    checks.append(_check("five_special_directions", len(set(sd.directions)) == 5, str([_rat_seq(d) for d in sd.directions])))
    reducible_ok = all(levels.reducibility_test(basis, d).reducible for d in sd.directions)
    decoys = []
    while len(decoys) < 10:
        e = (Fraction(rng.randint(-30, 30)), Fraction(rng.randint(-30, 30)))
        if e == (0, 0):
            continue
        prim = linalg.primitive_integer_vector(list(e))
        e = (Fraction(prim[0]), Fraction(prim[1]))
        if e in set(sd.directions) or e in decoys:
            continue
        decoys.append(e)
    reducible_ok = reducible_ok and not any(levels.reducibility_test(basis, e).reducible for e in decoys)
    checks.append(_check("reducibility_exactly_on_special", reducible_ok, "5 squares among 15 sampled directions"))
    result["special_directions"] = [_rat_seq(d) for d in sd.directions]
    result["reducibility_table"] = [
        {"direction": _rat_seq(d), "reducible": True} for d in sd.directions
    ] + [{"direction": _rat_seq(e), "reducible": False} for e in decoys]

    # stage 6: fiber statuses
    nodes = [(i, w.node) for i, group in enumerate(sd.witnesses, start=1) for w in group]
    grid_ok = True
    for (i, node), (k, d) in itertools.product(nodes, enumerate(sd.directions, start=1)):
        rep = levels.fiber_count(basis, d, node)
        if (rep.status is levels.FiberStatus.WHOLE_LINE) != (i == k):
            grid_ok = False
    generic_ok = True
    for x0, e in _generic_samples(basis, rng, 50):
        rep = levels.fiber_count(basis, e, x0)
        if rep.status is not levels.FiberStatus.FOUR_POINTS or len(rep.involution_pairs or ()) != 2:
            generic_ok = False
    checks.append(_check("fiber_generic_grid", generic_ok, "50 generic samples, four points each"))
    checks.append(
        _check(
            "node_grid_biconditional",
            grid_ok,
            f"whole_line exactly on matching pairs over {len(nodes)} x 5 cells",
        )
    )

    # stage 7: dictionary and ambient branch model
    params = [(Fraction(1), Fraction(t)) for t in theta]
    try:
        match = pencil.match_directions_to_parameters(sd.directions, params)
        dict_ok = all(r == 0 for r in match["held_out_residuals"])
        result["dictionary"] = {"matching": list(match["permutation"])}
    except ValueError:
        dict_ok = False
    checks.append(_check("dictionary_mobius", dict_ok, "exact Moebius matching"))
    theta6 = next(Fraction(k) for k in range(3, 100) if Fraction(k) not in [Fraction(t) for t in theta])
    ranks = levels.branch_model_ranks(theta, theta6)
    checks.append(
        _check(
            "branch_curve_on_surface",
            ranks["branch_curve_on_surface"] and ranks["rank_branch_triple"] == 3,
            str(ranks),
        )
    )

    if args.tangency:
        e_generic = next(e for e in decoys if not levels.reducibility_test(basis, e).reducible)
        tangency_ok = True
        for i, j in itertools.combinations(range(1, 6), 2):
            rep = levels.line_tangency_check(basis, e_generic, (i, j))
            tangency_ok = tangency_ok and rep.has_tangency_witness()
        checks.append(_check("line_tangencies", tangency_ok, "repeated root on each of the 10 joins"))
    else:
        checks.append(_check("line_tangencies", True, "skipped (enable with --tangency)"))

    return _report("pipeline", cfg, args.seed, checks, result)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dp4lag",
        description="Exact verification toolkit for the cotangent Lagrangian fibration "
        "of a degree-4 del Pezzo surface.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (theta | points | ab); default is the canonical theta fixture")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized redundant checks")
    common.add_argument("--out", help="also write the JSON report to this path")
    sections_p = sub.add_parser("sections", parents=[common], help="constraint system and kernel basis")
    sections_p.add_argument("--plane-only", action="store_true", help="only the 18 plane rows (dimension 27)")
    verify_p = sub.add_parser("verify", parents=[common], help="involutivity certificate")
    verify_p.add_argument("--symbolic", action="store_true", help="add the symbolic (a, b) tier")
    verify_p.add_argument("--debug-corrupt-basis", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("pencil", parents=[common], help="characteristic polynomial and line classes")
    probe_p = sub.add_parser("probe", parents=[common], help="fiber statuses and discriminants")
    probe_p.add_argument("--tangency", action="store_true", help="add the line-tangency tier")
    sub.add_parser("special-directions", parents=[common], help="node witnesses and reducibility table")
    sub.add_parser("dictionary", parents=[common], help="match directions to singular parameters")
    pipeline_p = sub.add_parser("pipeline", parents=[common], help="run the full verification pipeline")
    pipeline_p.add_argument("--symbolic", action="store_true", help="include the symbolic tier")
    pipeline_p.add_argument("--tangency", action="store_true", help="include the tangency tier")
    return parser


_VERBS = {
    "sections": cmd_sections,
    "verify": cmd_verify,
    "pencil": cmd_pencil,
    "probe": cmd_probe,
    "special-directions": cmd_special_directions,
    "dictionary": cmd_dictionary,
    "pipeline": cmd_pipeline,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        report = _VERBS[args.command](cfg, args)
    except (InputError, ConfigError, PencilError, SectionSpaceError) as exc:
        error = {"error": str(exc), "exit_code": EXIT_BAD_INPUT}
        print(json.dumps(error, indent=2, sort_keys=True))
        return EXIT_BAD_INPUT
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    return EXIT_PASS if report["overall_pass"] else EXIT_CHECK_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
