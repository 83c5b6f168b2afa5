"""Verification suites run by ``bergman-lab verify``.

Each suite returns a :class:`SuiteResult` of :class:`~.quadrature.CheckResult`
rows.  Statistical rows use the 4-sigma rule; algebraic rows compare a
maximum error against a fixed tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry, kernels, lqk, maps, operators, quadrature
from .errors import NotInRange
from .kernels import VolumeConstant
from .operators import ONE, ONE_PLUS_ABS_X1_SQ, Poly
from .quadrature import CheckResult

SUITES = ("eq1", "reproducing", "isometry", "operator-laws", "bell", "deck-invariance",
          "lqk-roots")


@dataclass
class SuiteResult:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks], "info": self.info}


@dataclass
class VerifyOptions:
    samples: int = 10**6
    seed: int = 0
    threads: int = 1
    vol_samples: int = 10**7
    sigmas: float = quadrature.SIGMA_RULE
    tol_rel: float = 1e-9
    tol_coef: float = operators.COEF_TOL
    tol_crit: float = maps.EPS_CRIT


def algebraic(name: str, max_err: float, tol: float, detail: dict | None = None) -> CheckResult:
    return CheckResult(name, max_err, 0.0, 0.0, tol, bool(max_err <= tol), detail or {})


def boolean(name: str, ok: bool, detail: dict | None = None) -> CheckResult:
    return CheckResult(name, float(not ok), 0.0, 0.0, 0.0, bool(ok), detail or {})


def _max_coef(p: Poly) -> float:
    return max((abs(c) for _, c in p.items()), default=0.0)


def _sub(seed, *tags):
    return (seed, *tags)


# ---------------------------------------------------------------------------
# eq1: change of variables


def eq1_integrands(m: maps.ProperMapDescriptor) -> dict[str, callable]:
    last = m.target.dimension - 1
    return {
        "1": lambda x: np.ones(x.shape[:-1]),
        f"|x{last + 1}|^2": lambda x: np.abs(x[..., last]) ** 2,
        "x1*conj(x1)": lambda x: (x[..., 0] * np.conj(x[..., 0])).real,
    }


def suite_eq1(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("eq1")
    for mi, m in enumerate((maps.TETRA_MAP, maps.SYM2_MAP)):
        for fi, (fname, f) in enumerate(eq1_integrands(m).items()):
            for wi, w in enumerate((ONE, ONE_PLUS_ABS_X1_SQ)):
                chk = quadrature.change_of_variables_check(
                    m, f, w, opt.samples, _sub(opt.seed, 1, mi, fi, wi), opt.threads,
                    name=f"eq1[{m.name.value}, f={fname}, w={w.name}]")
                res.checks.append(_resigma(chk, opt.sigmas))
    return res


def _resigma(chk: CheckResult, sigmas: float) -> CheckResult:
    if sigmas == quadrature.SIGMA_RULE:
        return chk
    thr = sigmas * chk.stderr
    chk.threshold, chk.passed = thr, bool(chk.deviation < thr)
    return chk


# ---------------------------------------------------------------------------
# reproducing property


RII_POINTS = [(0.1, 0.0, 0.0), (0.2 - 0.1j, 0.1j, 0.15), (-0.1, 0.25, -0.2 + 0.1j)]
TETRA_POINTS = [(0.1, 0.2, 0.01), (-0.2j, 0.15, 0.05 + 0.05j), (0.3, -0.1, 0.1j)]


def rii_test_polys() -> dict[str, Poly]:
    w11, w22, w = Poly.gens(3)
    return {"1": Poly.const(1.0), "w11": w11, "w22": w22, "w": w, "w11*w+w22^2": w11 * w + w22**2}


def tetra_test_polys() -> dict[str, Poly]:
    x1, x2, x3 = Poly.gens(3)
    return {"1": Poly.const(1.0), "x1": x1, "x2": x2, "x3": x3, "x1*x2": x1 * x2}


def volume_pair(opt: VerifyOptions) -> tuple[VolumeConstant, VolumeConstant]:
    va = kernels.rii_volume(opt.vol_samples, _sub(opt.seed, 2, 0), opt.threads)
    vb = kernels.rii_volume(opt.vol_samples, _sub(opt.seed, 2, 1), opt.threads)
    return va, vb


def reproducing_checks(K: kernels.KernelDescriptor, polys: dict[str, Poly], z, n: int,
                       seed, threads: int, V: VolumeConstant | None,
                       sigmas: float = quadrature.SIGMA_RULE) -> list[CheckResult]:
    """Reproduce every polynomial at ``z`` on one shared sample stream."""
    z = np.asarray(z, dtype=np.complex128)

    def against_kernel(f: Poly):
        return lambda w: f.eval(w) * K(z, w)

    fns = [against_kernel(f) for f in polys.values()]
    ests = quadrature.mc_integrate_many(K.domain, fns, n, seed, threads)
    out = []
    for (name, f), est in zip(polys.items(), ests):
        se = est.stderr
        if V is not None and V.stderr:
            se = math.hypot(se, abs(est.value) * V.stderr / V.value)
        out.append(quadrature.compare(
            f"reproducing[{K.domain.name.value}, f={name}, z={geometry_tuple(z)}]",
            est.value, complex(f.eval(z)), se,
            {"mc_stderr": est.stderr, "n": n}, sigmas))
    return out


def geometry_tuple(z) -> str:
    return "(" + ", ".join(f"{complex(c):.3g}" for c in np.ravel(z)) + ")"


def suite_reproducing(opt: VerifyOptions, volumes=None) -> SuiteResult:
    res = SuiteResult("reproducing")
    va, vb = volumes or volume_pair(opt)
    res.info["volume"] = va.to_dict()
    res.info["volume_second_seed"] = vb.to_dict()
    res.info["volume_over_pi3"] = va.value / math.pi**3
    res.checks.append(quadrature.compare("volume seed stability", va.value, vb.value,
                                         math.hypot(va.stderr, vb.stderr),
                                         {"n": opt.vol_samples}, opt.sigmas))
    res.checks.append(boolean("0 < V < pi^3", 0 < va.value < math.pi**3))
    k_rii = kernels.rii_kernel(va, check=False)
    k_tet = kernels.tetrablock_kernel(va, check=False)
    for i, z in enumerate(RII_POINTS):
        res.checks += reproducing_checks(k_rii, rii_test_polys(), z, opt.samples,
                                         _sub(opt.seed, 3, 0, i), opt.threads, va, opt.sigmas)
    for i, z in enumerate(TETRA_POINTS):
        res.checks += reproducing_checks(k_tet, tetra_test_polys(), z, opt.samples,
                                         _sub(opt.seed, 3, 1, i), opt.threads, va, opt.sigmas)
    res.checks += reproducing_checks(kernels.disc_kernel(), {"1": Poly.const(1.0, 1)}, (0.3,),
                                     opt.samples, _sub(opt.seed, 3, 2), opt.threads, None,
                                     opt.sigmas)
    return res


# ---------------------------------------------------------------------------
# isometry / contraction


def suite_isometry(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("isometry")
    x1, x2, x3 = Poly.gens(3)
    fs = {"1": Poly.const(1.0), "x1": x1, "x3^2": x3**2, "x1*x2*x3": x1 * x2 * x3}
    for fi, (fname, f) in enumerate(fs.items()):
        for wi, w in enumerate((ONE, ONE_PLUS_ABS_X1_SQ)):
            chk = quadrature.isometry_check(maps.TETRA_MAP, f, w, opt.samples,
                                            _sub(opt.seed, 4, fi, wi), opt.threads,
                                            name=f"isometry[tetra, f={fname}, w={w.name}]")
            res.checks.append(_resigma(chk, opt.sigmas))
    z11, _z22, z = Poly.gens(3)
    gs = {"z11": z11, "z": z, "z11*z+z^2": z11 * z + z**2}
    for gi, (gname, g) in enumerate(gs.items()):
        chk = quadrature.contraction_check(maps.TETRA_MAP, g, ONE, opt.samples,
                                           _sub(opt.seed, 5, gi), opt.threads,
                                           name=f"contraction[tetra, g={gname}]")
        chk.threshold = opt.sigmas * chk.stderr
        chk.passed = bool(complex(chk.value).real - complex(chk.expected).real <= chk.threshold)
        res.checks.append(chk)
    return res


# ---------------------------------------------------------------------------
# operator laws


def operator_law_errors(m: maps.ProperMapDescriptor, tol: float) -> dict[str, float]:
    """Maximum coefficient errors of the operator identities for ``m``."""
    nv_src = m.source.dimension
    nv_tgt = m.target.dimension
    errs = {"P^2 = P (deg <= 8)": 0.0, "P o Gamma = Gamma (deg <= 6)": 0.0,
            "Gamma* o Gamma = id (deg <= 6)": 0.0}
    for g in operators.monomials(nv_src, 8):
        p = operators.project_generic(g, m)
        errs["P^2 = P (deg <= 8)"] = max(errs["P^2 = P (deg <= 8)"],
                                         _max_coef(operators.project_generic(p, m) - p))
    for f in operators.monomials(nv_tgt, 6):
        gf = operators.gamma_apply(f, m)
        errs["P o Gamma = Gamma (deg <= 6)"] = max(
            errs["P o Gamma = Gamma (deg <= 6)"], _max_coef(operators.project_generic(gf, m) - gf))
        back = operators.gamma_star_apply(gf, m, tol)
        errs["Gamma* o Gamma = id (deg <= 6)"] = max(
            errs["Gamma* o Gamma = id (deg <= 6)"], _max_coef(back - f))
    return errs


def tetra_parity_errors() -> dict[str, float]:
    mism_generic = 0.0
    range_failures = 0
    for g in operators.monomials(3, 8):
        mism_generic = max(mism_generic, _max_coef(
            operators.project_tetra(g) - operators.project_generic(g, maps.TETRA_MAP)))
        odd = next(iter(g.terms))[2] % 2 == 1
        try:
            operators.gamma_star_apply(g, maps.TETRA_MAP)
            in_range = True
        except NotInRange:
            in_range = False
        fixed = operators.project_tetra(g) == g
        if not (in_range == odd == fixed == operators.in_tetra_range(g)):
            range_failures += 1
    for f in operators.monomials(3, 6):
        if not operators.in_tetra_range(operators.gamma_apply(f, maps.TETRA_MAP)):
            range_failures += 1
    return {"project_tetra = project_generic (deg <= 8)": mism_generic,
            "range(Gamma) parity characterisation (deg <= 8)": float(range_failures)}


def suite_operator_laws(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("operator-laws")
    for m in (maps.TETRA_MAP, maps.SYM2_MAP):
        for law, err in operator_law_errors(m, opt.tol_coef).items():
            res.checks.append(algebraic(f"{law} [{m.name.value}]", err, opt.tol_coef))
    for law, err in tetra_parity_errors().items():
        res.checks.append(algebraic(f"{law} [tetra]", err, opt.tol_coef))
    return res


# ---------------------------------------------------------------------------
# Bell identity


def bell_relative_errors(n_pairs: int, seed, threads: int = 1,
                         V: VolumeConstant = lqk.UNIT_VOLUME) -> dict[str, np.ndarray]:
    pts = geometry.sample_uniform(geometry.RII, 2 * n_pairs, seed, threads).points
    z, w = pts[:n_pairs], pts[n_pairs:]
    K_rii = kernels.rii_kernel(V, check=False)
    bell = kernels.bell_pushforward(K_rii, maps.TETRA_MAP, z, w)
    x, y = maps.forward(maps.TETRA_MAP, z), maps.forward(maps.TETRA_MAP, w)
    closed = kernels.kernel_tetrablock_closed(x, y, V, check=False)
    quotient = kernels.kernel_tetrablock_quotient(z, w, V)
    # displayed form: conj(J(w)) K_E = sum_k K(pi^k(pi z), w) J pi^k(pi z)
    inv = maps.local_inverses(maps.TETRA_MAP, x)
    ij = maps.inverse_jacobians(maps.TETRA_MAP, x)
    rhs = sum(K_rii(inv[k], w) * ij[k] for k in range(2))
    lhs = np.conj(maps.jacobian(maps.TETRA_MAP, w)) * closed
    return {"bell_vs_closed": np.abs(bell - closed) / np.abs(closed),
            "quotient_vs_closed": np.abs(quotient - closed) / np.abs(closed),
            "displayed_identity": np.abs(lhs - rhs) / np.abs(lhs)}


def suite_bell(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("bell")
    n = max(1, opt.samples)
    errs = bell_relative_errors(n, _sub(opt.seed, 6), opt.threads)
    for name, e in errs.items():
        res.checks.append(algebraic(f"{name} [tetra, {n} pairs]", float(e.max()), opt.tol_rel,
                                    {"pairs": n, "median": float(np.median(e))}))
    res.info["pairs"] = n
    # sym2 has no closed form: Hermitian symmetry and diagonal positivity of the pushforward
    m = min(n, 10_000)
    pts = geometry.sample_uniform(geometry.BIDISC, 2 * m, _sub(opt.seed, 7), opt.threads).points
    zs, ws = pts[:m], pts[m:]
    kb = kernels.polydisc_kernel(2)
    kab = kernels.bell_pushforward(kb, maps.SYM2_MAP, zs, ws)
    kba = kernels.bell_pushforward(kb, maps.SYM2_MAP, ws, zs)
    herm = float(np.max(np.abs(kab - np.conj(kba)) / np.abs(kab)))
    res.checks.append(algebraic(f"sym2 pushforward Hermitian [{m} pairs]", herm, opt.tol_rel))
    diag = kernels.bell_pushforward(kb, maps.SYM2_MAP, zs, zs)
    res.checks.append(boolean("sym2 pushforward diagonal real positive",
                              bool(np.all(diag.real > 0) and
                                   np.max(np.abs(diag.imag) / diag.real) < opt.tol_rel)))
    # continuity of the closed form across x1 x2 = x3
    x0 = np.array([0.2 + 0.1j, -0.3, 0.0])
    x0[2] = x0[0] * x0[1]
    y0 = np.array([0.1, 0.2j, 0.05])
    V = lqk.UNIT_VOLUME
    k0 = kernels.kernel_tetrablock_closed(x0, y0, V)
    gaps = []
    for delta in (1e-3, 1e-6, 1e-9):
        xd = x0.copy()
        xd[2] -= delta
        gaps.append(abs(kernels.kernel_tetrablock_closed(xd, y0, V) - k0) / abs(k0))
    ok = gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-6
    res.checks.append(boolean("closed form continuous across the critical set", ok,
                              {"relative_gaps": gaps}))
    return res


# ---------------------------------------------------------------------------
# deck invariance


def suite_deck(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("deck-invariance")
    n = min(max(opt.samples, 500), 10_000)
    rii = geometry.sample_uniform(geometry.RII, n, _sub(opt.seed, 8), opt.threads)
    bid = geometry.sample_uniform(geometry.BIDISC, n, _sub(opt.seed, 9), opt.threads)
    rep = maps.deck_invariance_check(maps.TETRA_MAP, maps.tetra_deck_group(), rii)
    res.checks.append(boolean("tetra with U_E", rep.passed, rep.to_dict()))
    rep = maps.deck_invariance_check(maps.SYM2_MAP, maps.swap_group(), bid)
    res.checks.append(boolean("sym2 with S2", rep.passed, rep.to_dict()))
    wrong = maps.TransformGroup((np.eye(3), np.diag([-1.0, 1.0, 1.0])), name="diag(-1,1,1)")
    rep = maps.deck_invariance_check(maps.TETRA_MAP, wrong, rii)
    res.checks.append(boolean("tetra with wrong group is rejected",
                              (not rep.passed) and rep.counterexample is not None, rep.to_dict()))
    for m, batch in ((maps.TETRA_MAP, rii), (maps.SYM2_MAP, bid)):
        x = maps.forward(m, batch.points)
        inv = maps.local_inverses(m, x, opt.tol_crit)
        ij = maps.inverse_jacobians(m, x, opt.tol_crit)
        chain = max(float(np.max(np.abs(ij[k] * maps.jacobian(m, inv[k]) - 1.0)))
                    for k in range(m.multiplicity))
        res.checks.append(algebraic(f"chain rule [{m.name.value}, {n} samples]", chain, 1e-10))
        rt = max(float(np.max(np.abs(maps.forward(m, inv[k]) - x)
                              / np.maximum(1.0, np.abs(x))))
                 for k in range(m.multiplicity))
        res.checks.append(algebraic(f"forward o local inverse = id [{m.name.value}]", rt, 1e-12))
        res.checks.append(boolean(f"multiplicity [{m.name.value}]", inv.shape[0] == m.multiplicity))
        img_ok = bool(np.all(geometry.is_member(m.target, x)))
        res.checks.append(boolean(f"images are members [{m.name.value}]", img_ok))
    return res


# ---------------------------------------------------------------------------
# Lu Qi-Keng


def suite_lqk(opt: VerifyOptions) -> SuiteResult:
    res = SuiteResult("lqk-roots")
    roots = lqk.isolate_axis_roots()
    inside = [r for r in roots if r.in_disc]
    res.checks.append(algebraic("axis polynomial residual", max(r.residual for r in roots), 1e-12))
    expected = sorted([1j / math.sqrt(3), -1j / math.sqrt(3)], key=lambda c: c.imag)
    got = sorted([r.root for r in inside], key=lambda c: c.imag)
    err = max(abs(a - b) for a, b in zip(got, expected)) if len(got) == 2 else math.inf
    res.checks.append(algebraic("in-disc roots are +-i/sqrt(3)", err, 1e-15))
    z0sq = (inside[0].root ** 2).real
    res.checks.append(boolean("z0^2 = -1/3 lies in (-1, 0)", -1 < z0sq < 0, {"z0_squared": z0sq}))
    for r in (0.7, 0.8, 0.9):
        cert = lqk.interior_zero_pair(r)
        res.checks.append(boolean(f"pair r={r} interior", cert.interior, cert.to_dict()))
        res.checks.append(algebraic(f"pair r={r} closed-form residual", cert.relative_residual,
                                    opt.tol_rel))
        res.checks.append(algebraic(f"pair r={r} Bell residual",
                                    cert.extra["bell_relative_residual"], 1e-8))
    ratio = lqk.rii_min_kernel_ratio(100_000, opt.seed)
    res.checks.append(CheckResult("R_II kernel zero-free: min |K| V > 1e-6", ratio, 1e-6, 0.0,
                                  1e-6, bool(ratio > 1e-6), {"pairs": 100_000}))
    w = maps.phik_isometry_falsifier(3)
    res.checks.append(boolean("k=3 witness (0.4, 0.4, 0.4) with gap > 0.1",
                              w.point == (0.4, 0.4, 0.4) and w.gap > 0.1, w.to_dict()))
    res.checks.append(algebraic("k=3 rotated norm = sqrt(0.48)",
                                abs(w.norm_after - math.sqrt(0.48)), 1e-12))
    pts = geometry.sample_uniform(geometry.RII, 10_000, _sub(opt.seed, 10)).points
    rotated = maps.rotate_offdiag(pts, -1.0)  # zeta = exp(2 pi i / 2)
    k2 = float(np.max(np.abs(geometry.opnorm(pts) - geometry.opnorm(rotated))))
    res.checks.append(algebraic("k=2 rotation preserves the norm", k2, 1e-14))
    return res


RUNNERS = {
    "eq1": suite_eq1,
    "reproducing": suite_reproducing,
    "isometry": suite_isometry,
    "operator-laws": suite_operator_laws,
    "bell": suite_bell,
    "deck-invariance": suite_deck,
    "lqk-roots": suite_lqk,
}


def verify_all(opt: VerifyOptions, suites=SUITES) -> list[SuiteResult]:
    return [RUNNERS[s](opt) for s in suites]
