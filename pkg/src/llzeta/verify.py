"""Seeded property suites checking the library's identities against each other.

Each suite returns a :class:`SuiteReport` listing every checked identity with
its measured defect and the bound it must stay under.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import cmath
import inspect
import math

import numpy as np

from .analytic import (commutator_monodromy, monodromy_a_formula, monodromy_a_numeric, monodromy_z_formula,
                       monodromy_z_numeric, residue_formula, residue_numeric, z_loop)
from .contour import ContourSpec, choose_rho, eval_zeta_k, hankel_I
from .seqspace import (PowerTail, TruncatedSeq, WeightFamily, connect_path, dist_to_cross, hyperplanes_meeting_ball,
                       max_abs_arg, path_dist_to_cross, weighted_norm)
from .series import PeriodicParams, abscissa_estimate, eval_er_series
from .taylor import _Rate, _sup_ratio, dirichlet_eval, dirichlet_perturb_ok, domain_classify, taylor_coefficient, taylor_continue

TWO_PI_I = 2j * math.pi


@dataclass
class Check:
    name: str
    defect: float
    bound: float

    @property
    def passed(self):
        return bool(self.defect <= self.bound)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    def add(self, name, defect, bound):
        self.checks.append(Check(name, float(defect), float(bound)))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def max_defect(self):
        return max((c.defect for c in self.checks), default=0.0)

    def lines(self):
        for c in self.checks:
            yield f"{'PASS' if c.passed else 'FAIL'}  {c.name}  defect={c.defect:.3e}  bound={c.bound:.1e}"


# ---------------------------------------------------------------- random parameters


def random_irrational_a(rng, upper=True):
    """A parameter safely away from Z[1/k] (real part generic, optional positive imaginary part)."""
    re = rng.uniform(0.05, 0.95)
    im = rng.uniform(0.0, 0.3) if upper and rng.random() < 0.5 else 0.0
    return complex(re, im)


def random_params(rng, k=None, rational_share=0.5):
    k = k or int(rng.integers(1, 4))
    a = []
    for _ in range(k):
        if rng.random() < rational_share:
            a.append(Fraction(int(rng.integers(0, k)), k))
        else:
            a.append(random_irrational_a(rng))
    z = tuple(complex(rng.uniform(-0.4, 0.8), rng.uniform(-0.2, 0.2)) for _ in range(k))
    return PeriodicParams(k, tuple(a), z)


# ---------------------------------------------------------------- suites


def suite_contour_identities(rng, tol=1e-9, cases=6):
    rep = []
    for i in range(cases):
        k = int(rng.integers(1, 4))
        j = int(rng.integers(1, k + 1))
        zj = complex(rng.uniform(-0.4, 0.8), rng.uniform(-0.2, 0.2))
        a = random_irrational_a(rng)
        rho = min(choose_rho(PeriodicParams(k, (a,) * k, (zj,) * k)), 0.5)
        lhs = hankel_I(j, a, zj, 0.0, ContourSpec(rho=rho), k=k)
        rhs = TWO_PI_I / (1.0 - cmath.exp(TWO_PI_I * k * a))
        rep.append((f"I(s=0) k={k} j={j} a={a:.4g}", abs(lhs - rhs), tol * max(1.0, abs(rhs))))
        l = int(rng.integers(0, k))
        ar = Fraction(l, k)
        v = hankel_I(j, ar, zj, 1.0, ContourSpec(rho=min(0.5, math.pi / k)), k=k)
        rep.append((f"I(s=1) k={k} j={j} a={l}/{k}", abs(v - TWO_PI_I / k), tol))
        s = complex(rng.uniform(-3, 3), rng.uniform(-4, 4))
        v1 = hankel_I(j, a, zj, s, ContourSpec(rho=rho), k=k)
        v2 = hankel_I(j, a, zj, s, ContourSpec(rho=0.6 * rho), k=k)
        rep.append((f"rho-independence s={s:.3g}", abs(v1 - v2), tol * max(1.0, abs(v1))))
        p = random_params(rng)
        s = complex(rng.uniform(2.0, 4.0), rng.uniform(-5, 5))
        ser = eval_zeta_k(p, s, 1e-12, method="series").value
        con = eval_zeta_k(p, s, 1e-12, method="contour").value
        rep.append((f"series vs contour k={p.k} s={s:.3g}", abs(ser - con), tol * max(1.0, abs(ser))))
    return rep


def suite_residues(rng, tol=1e-7, cases=6):
    rep = []
    for i in range(cases):
        p = random_params(rng)
        f = residue_formula(p)
        for z in (p.z, tuple(complex(rng.uniform(-0.4, 0.8), rng.uniform(-0.2, 0.2)) for _ in range(p.k))):
            q = PeriodicParams(p.k, p.a, z)
            rep.append((f"residue k={q.k} a={_fmt(q.a)}", abs(residue_numeric(q) - f), tol))
    return rep


def suite_monodromy(rng, tol=1e-6, cases=4):
    rep = []
    for i in range(cases):
        p = random_params(rng, rational_share=0.3)
        j = int(rng.integers(1, p.k + 1))
        pb = int(rng.integers(0, 3))
        s = complex(rng.uniform(-2, 3), rng.uniform(-2, 2))
        f = monodromy_z_formula(p, s, j, pb)
        n = monodromy_z_numeric(p, s, j, pb).value
        rep.append((f"z-monodromy k={p.k} j={j} p={pb} s={s:.3g}", abs(n - f), tol * max(1.0, abs(f))))
        m = int(rng.integers(-2, 4))
        n = monodromy_z_numeric(p, m, j, pb).value
        rep.append((f"integer-s z-monodromy s={m}", abs(n), 1e-9 * max(1.0, abs(eval_zeta_k(p, m + 0.5).value))))
    for i in range(2):
        p = random_params(rng, k=2, rational_share=0.0)
        s = complex(rng.uniform(1.5, 3), rng.uniform(-2, 2))
        g1, g2 = z_loop(p, 1, 0), z_loop(p, 2, int(rng.integers(0, 2)))
        rep.append((f"commutator loops s={s:.3g}", abs(commutator_monodromy(p, s, (g1, g2)).value), tol))
    for i in range(2):
        k = int(rng.integers(1, 3))
        l = int(rng.integers(0, k))
        v = rng.uniform(0.002, 0.02)
        u = rng.uniform(0.15, 0.4)
        a = complex(l / k + v, -u)
        p = PeriodicParams(k, (a,) + tuple(random_irrational_a(rng) for _ in range(k - 1)), (0.2,) * k)
        s = complex(rng.uniform(1.5, 3), rng.uniform(-1, 1))
        f = monodromy_a_formula(p, s, 1, l)
        n = monodromy_a_numeric(p, s, 1, l)
        # the loop difference carries an extra 2 pi i relative to the closed form
        rep.append((f"a-monodromy / (2 pi i) k={k} l={l} s={s:.3g}", abs(n / TWO_PI_I - f), tol * max(1.0, abs(f))))
    return rep


def _fmt(a):
    return "(" + ",".join(str(x) if isinstance(x, Fraction) else f"{complex(x):.3g}" for x in a) + ")"


def _ones(N):
    return TruncatedSeq.from_tail(PowerTail(1.0), N, WeightFamily.ones())


def _inv_n(N):
    return TruncatedSeq.from_tail(PowerTail(1.0, 1.0), N)


def suite_taylor(rng, tol=1e-9, cases=4, N=40, M=200):
    rep = []
    n = np.arange(1, N + 1)
    b, z = _ones(N), _inv_n(N)
    for i in range(cases):
        beta = rng.uniform(0.1, 0.6)
        eta = rng.choice([0.5, 1.0, 1.5])
        ph = rng.uniform(0, 2 * math.pi, N)
        w = TruncatedSeq(beta * np.exp(-eta * n) / n * np.exp(1j * ph))
        s = complex(rng.uniform(2.5, 4), rng.uniform(-3, 3))
        inc = taylor_continue(b, z, w, s, M=M, tol=0.1 * tol).value
        zw = TruncatedSeq(z.entries + w.entries, z.weight, z.tail)
        ser = eval_er_series(b, zw, s, tol).value - eval_er_series(b, z, s, tol).value
        rep.append((f"taylor vs series s={s:.3g}", abs(inc - ser), 3 * tol))
        P1 = taylor_coefficient(b, z, s, 1)(w)
        errs = []
        for eps in (1e-2, 1e-3):
            we = TruncatedSeq(eps * w.entries)
            errs.append(abs(taylor_continue(b, z, we, s, tol=1e-15).value / eps - P1))
        # second-order remainder: the defect shrinks tenfold with eps
        rep.append((f"degree-1 rate s={s:.3g}", abs(errs[1] / errs[0] - 0.1) if errs[0] > 0 else 0.0, 0.02))
        wt = TruncatedSeq.from_tail(PowerTail(beta, 1.0, float(eta)), N)
        d = domain_classify(z, wt)
        # entire(beta, eta) must pass the polydisk test for every smaller eta
        worst = -math.inf if d.kind == "entire" else 1.0
        for e2 in (0.1, 0.5 * d.eta, 0.9 * d.eta):
            worst = max(worst, _sup_ratio(wt, _Rate(1.0 + e2, 0.0)) / dist_to_cross(z) - 1.0)
        ok = worst < 0
        rep.append((f"domain nesting beta={beta:.3g} eta={eta}", 0.0 if ok else 1.0, 0.0))
    return rep


def _random_seq(rng, N, weight):
    r = weight(np.arange(1, N + 1))
    return TruncatedSeq(r * rng.uniform(0.2, 5.0, N) * np.exp(1j * rng.uniform(0, 2 * math.pi, N)), weight)


_WEIGHTS = (WeightFamily.ones(), WeightFamily.inverse_n(), WeightFamily.exp_neg_n(), WeightFamily.inverse_n_pow(2.0))


def suite_seqspace(rng, tol=1e-9, cases=10, N=100, M=None):
    rep = []
    for i in range(cases):
        wt = _WEIGHTS[int(rng.integers(0, len(_WEIGHTS)))]
        w, z = _random_seq(rng, N, wt), _random_seq(rng, N, wt)
        ratios = np.abs(z.entries) / wt(np.arange(1, N + 1))
        rep.append((f"dist formula [{wt.kind}]", abs(dist_to_cross(z) - ratios.min()), 1e-15 * ratios.min()))
        rep.append((f"dist <= norm [{wt.kind}]", max(0.0, dist_to_cross(z) - weighted_norm(z)), 0.0))
        path = connect_path(w, z, 64)
        lo = min(dist_to_cross(w), dist_to_cross(z))
        rep.append((f"path distance bound [{wt.kind}]", max(0.0, lo - path_dist_to_cross(path)), tol))
        rep.append((f"argument cap 3 pi [{wt.kind}]", max(0.0, max_abs_arg(path) - 3 * math.pi), 0.0))
        z0 = _random_seq(rng, N, WeightFamily.inverse_n())
        rho = WeightFamily.exp_neg_n() if rng.random() < 0.5 else WeightFamily.inverse_n_pow(3.0)
        C1, C2 = sorted(rng.uniform(0.5, 20.0, 2))
        h1 = hyperplanes_meeting_ball(z0, rho, C1)
        h2 = hyperplanes_meeting_ball(z0, rho, C2)
        big = TruncatedSeq(np.concatenate([z0.entries, _random_seq(rng, 2 * N, WeightFamily.inverse_n()).entries[N:]]))
        h1b = hyperplanes_meeting_ball(big, rho, C1)
        rep.append((f"two-crosses monotone/stable [{rho.kind}]", 0.0 if set(h1) <= set(h2) and h1 == h1b else 1.0, 0.0))
    return rep


def suite_dirichlet(rng, tol=1e-6):
    rep = []
    one = lambda n: np.ones(n.size)
    alt = lambda n: np.where(n % 2 == 1, 1.0, -1.0)
    ln = lambda n: np.log(n)
    lin = lambda n: n.astype(np.float64)
    rep.append(("zeta(2)", abs(dirichlet_eval(one, ln, 2, tol).value - math.pi ** 2 / 6), 2 * tol))
    rep.append(("eta(2)", abs(dirichlet_eval(alt, ln, 2, tol).value - math.pi ** 2 / 12), 2 * tol))
    rep.append(("geometric s=1", abs(dirichlet_eval(one, lin, 1, tol).value - 1 / (math.e - 1)), 2 * tol))
    s = complex(rng.uniform(1.5, 3), rng.uniform(-3, 3))
    ref = eval_zeta_k(PeriodicParams(1, (0,), (0,)), s, 1e-12).value
    rep.append((f"zeta({s:.3g})", abs(dirichlet_eval(one, ln, s, tol).value - ref), 2 * tol))
    rep.append(("abscissa classical", abs(abscissa_estimate(one, ln, 10 ** 5).sigma - 1.0), 0.05))
    rep.append(("abscissa alternating", abs(abscissa_estimate(alt, ln, 10 ** 5).sigma), 0.05))
    rep.append(("perturb: mu = lambda", 0.0 if dirichlet_perturb_ok(ln, ln, 1.0, 1.0, 500) else 1.0, 0.0))
    rep.append(("perturb: sqrt scaling fails", 0.0 if not dirichlet_perturb_ok(ln, lambda n: np.log(n) / 2, 1.0, 1.0, 500) else 1.0, 0.0))
    return rep


SUITES = {
    "contour-identities": suite_contour_identities,
    "monodromy": suite_monodromy,
    "residues": suite_residues,
    "taylor": suite_taylor,
    "seqspace": suite_seqspace,
    "dirichlet": suite_dirichlet,
}


def run_suite(name, seed=0, tol=None, **opts):
    """Run a named suite; ``tol`` overrides the suite's default bound.

    Extra options (``cases``, ``N``, ``M``) go to suites that take them.
    """
    if name not in SUITES:
        raise KeyError(name)
    rng = np.random.default_rng(seed)
    fn = SUITES[name]
    params = inspect.signature(fn).parameters
    kw = {k: v for k, v in opts.items() if k in params and v is not None}
    if tol is not None:
        kw["tol"] = tol
    rep = SuiteReport(name, seed)
    for r in fn(rng, **kw):
        rep.add(*r)
    return rep
