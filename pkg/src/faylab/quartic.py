"""Smooth plane quartics (genus-3 canonical curves): hyperplane sections,
adjoint differentials, the residue-sum identity, the hyperplane ratio
invariant, and tangent-line reconstruction.

All computations are exact algebra on lifts; nothing here touches the
theta machinery.  Section-valued quantities are realized through adjoint
differentials m du / F_v in per-point affine charts; quantities exposed to
identities are always chart-free ratios or residues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class QuarticError(Exception):
    pass


class TangentOrSingularLine(QuarticError):
    pass


class DegenerateForm(QuarticError):
    pass


class NotSmooth(QuarticError):
    pass


class BadChart(QuarticError):
    pass


class NotAZero(QuarticError):
    pass


class HigherOrderZero(QuarticError):
    pass


class DegenerateRatios(QuarticError):
    pass


MONOMIALS = tuple((i, j, 4 - i - j) for i in range(5) for j in range(5 - i))


class PlaneQuartic:
    """Homogeneous quartic F(X0, X1, X2) given by monomial coefficients."""

    def __init__(self, coefficients, curve_id="quartic", validate=True,
                 probes=200):
        self.curve_id = curve_id
        self.coeffs = np.zeros(len(MONOMIALS), dtype=complex)
        index = {m: k for k, m in enumerate(MONOMIALS)}
        for mono, c in coefficients.items():
            if tuple(mono) not in index:
                raise ValueError(f"bad quartic monomial {mono}")
            self.coeffs[index[tuple(mono)]] = complex(c)
        if not np.any(self.coeffs):
            raise DegenerateForm("zero quartic")
        self._grad_data = [self._derivative_data(axis) for axis in range(3)]
        self._hess_data = [[self._derivative_data(a, b) for b in range(3)]
                           for a in range(3)]
        if validate:
            self.assert_smooth(probes)

    def _derivative_data(self, *axes):
        monos = []
        coeffs = []
        for m, c in zip(MONOMIALS, self.coeffs):
            e = list(m)
            fac = 1.0
            ok = True
            for ax in axes:
                if e[ax] == 0:
                    ok = False
                    break
                fac *= e[ax]
                e[ax] -= 1
            if ok and c != 0:
                monos.append(tuple(e))
                coeffs.append(fac * c)
        return monos, np.array(coeffs, dtype=complex)

    @staticmethod
    def _eval_monos(monos, coeffs, X):
        X = np.asarray(X, dtype=complex)
        out = 0.0 + 0.0j
        for (i, j, k), c in zip(monos, coeffs):
            out = out + c * X[..., 0]**i * X[..., 1]**j * X[..., 2]**k
        return out

    def value(self, X):
        return self._eval_monos(MONOMIALS, self.coeffs, X)

    def grad(self, X):
        return np.array([self._eval_monos(*self._grad_data[a], X)
                         for a in range(3)])

    def hess(self, X, a, b):
        return self._eval_monos(*self._hess_data[a][b], X)

    def assert_smooth(self, probes=200, seed=20240720):
        """Random-line smoothness probe: every probe line must meet the
        quartic in 4 distinct points with nonvanishing gradient."""
        rng = np.random.default_rng(seed)
        for _ in range(probes):
            l = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            try:
                pts = line_section(self, l)
            except TangentOrSingularLine as ex:
                raise NotSmooth(f"probe line degenerate: {ex}")
            for p in pts:
                gn = np.linalg.norm(self.grad(p.lift))
                if gn < 1e-8 * np.linalg.norm(self.coeffs) * np.linalg.norm(p.lift)**3:
                    raise NotSmooth("vanishing gradient on a probe line")

    def __repr__(self):
        return f"PlaneQuartic({self.curve_id!r})"


@dataclass
class QuarticPoint:
    """A point of the quartic as a lift vector in C^3."""

    lift: np.ndarray

    def normalized(self):
        a = int(np.argmax(np.abs(self.lift)))
        return self.lift / self.lift[a], a


def _line_basis(l):
    l = np.asarray(l, dtype=complex)
    if np.linalg.norm(l) == 0:
        raise DegenerateForm("zero linear form")
    a = int(np.argmax(np.abs(l)))
    others = [i for i in range(3) if i != a]
    basis = []
    for o in others:
        v = np.zeros(3, dtype=complex)
        v[o] = 1.0
        v[a] = -l[o] / l[a]
        basis.append(v)
    return basis[0], basis[1]


def _restrict_quartic(C4: PlaneQuartic, u, v):
    """Coefficients c_m of F(s u + t v) = sum_m c_m s^(4-m) t^m."""
    lin = [np.array([u[a], v[a]], dtype=complex) for a in range(3)]
    total = np.zeros(5, dtype=complex)
    for (i, j, k), c in zip(MONOMIALS, C4.coeffs):
        if c == 0:
            continue
        poly = np.array([1.0 + 0j])
        for a, e in enumerate((i, j, k)):
            for _ in range(e):
                poly = np.convolve(poly, lin[a])
        total[:len(poly)] += c * poly
    return total


def _newton_polish(coeffs, lam):
    p = np.polyval(coeffs, lam)
    dp = np.polyval(np.polyder(coeffs), lam)
    if dp != 0:
        lam = lam - p / dp
    return lam


def line_section(C4: PlaneQuartic, l, multiplicity_tol=1e-7):
    """The 4 points of {l = 0} on the quartic, via companion-matrix roots
    of the restricted binary form plus one Newton polish step."""
    u, v = _line_basis(l)
    c = _restrict_quartic(C4, u, v)
    scale = np.abs(c).max()
    if scale == 0:
        raise DegenerateForm("line lies on the quartic")
    pts = []
    lams = []
    if abs(c[0]) > 1e-12 * scale:
        roots = np.roots(c)
        roots = [_newton_polish(c, r) for r in roots]
        lams = list(roots)
        pts = [QuarticPoint(lam * u + v) for lam in lams]
    else:
        # root(s) at t = 0: work in the reversed chart for the rest
        rev = c[::-1]
        nz = np.trim_zeros(rev, "b")
        roots = np.roots(nz[::-1]) if len(nz) > 1 else []
        roots = [_newton_polish(c, r) for r in roots]
        lams = list(roots)
        pts = [QuarticPoint(lam * u + v) for lam in lams]
        for _ in range(4 - len(roots)):
            lams.append(np.inf)
            pts.append(QuarticPoint(u.astype(complex)))
    if len(pts) != 4:
        raise TangentOrSingularLine("restricted quartic degenerated")
    # projective chordal distances between roots
    def chord(l1, l2):
        if np.isinf(l1) and np.isinf(l2):
            return 0.0
        if np.isinf(l1) or np.isinf(l2):
            return 1.0 / np.sqrt(1.0 + min(abs(l1), abs(l2))**2)
        return abs(l1 - l2) / np.sqrt((1 + abs(l1)**2) * (1 + abs(l2)**2))
    for i in range(4):
        for j in range(i + 1, 4):
            if chord(lams[i], lams[j]) < multiplicity_tol:
                raise TangentOrSingularLine("multiple intersection point")
    return pts


_EVEN_PERMS = {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


def _chart_parity(alpha, upos, vpos):
    return 1.0 if (alpha, upos, vpos) in _EVEN_PERMS else -1.0


def chart_of(C4: PlaneQuartic, P: QuarticPoint):
    """Affine chart (alpha = normalizing axis, upos, vpos) with F_v != 0.

    The adjoint form is m (X_a dX_b - X_b dX_a)/F_c for even permutations
    (a, b, c); charts with odd (alpha, u, v) carry a sign so every chart
    realizes the same global differential.
    """
    lift, alpha = P.normalized()
    g = C4.grad(lift)
    others = [i for i in range(3) if i != alpha]
    vpos = max(others, key=lambda i: abs(g[i]))
    upos = [i for i in others if i != vpos][0]
    if abs(g[vpos]) < 1e-10 * np.linalg.norm(C4.coeffs):
        raise BadChart("both chart derivatives vanish (singular point?)")
    return alpha, upos, vpos


def form_value(C4: PlaneQuartic, m, P: QuarticPoint):
    """Adjoint differential value: the du coefficient at P of the 1-form
    attached to the linear form m (parity-corrected m(P)/F_v(P))."""
    lift, _ = P.normalized()
    alpha, upos, vpos = chart_of(C4, P)
    m = np.asarray(m, dtype=complex)
    return complex(_chart_parity(alpha, upos, vpos) * (m @ lift)
                   / C4.grad(lift)[vpos])


def eta_prime(C4: PlaneQuartic, l, P: QuarticPoint, zero_tol=1e-9):
    """Derivative along the curve of the vanishing 1-form l du / F_v at its
    zero P, in the du^2 frame of P's chart."""
    lift, _ = P.normalized()
    l = np.asarray(l, dtype=complex)
    lval = l @ lift
    if abs(lval) > zero_tol * np.linalg.norm(l) * np.linalg.norm(lift):
        raise NotAZero("the form does not vanish at the point")
    alpha, upos, vpos = chart_of(C4, P)
    g = C4.grad(lift)
    vprime = -g[upos] / g[vpos]
    dl_du = l[upos] + l[vpos] * vprime
    dFv_du = C4.hess(lift, vpos, upos) + C4.hess(lift, vpos, vpos) * vprime
    out = _chart_parity(alpha, upos, vpos) * (dl_du / g[vpos]
                                              - lval * dFv_du / g[vpos]**2)
    scale = np.linalg.norm(l) / max(abs(g[vpos]), 1e-300)
    if abs(out) < 1e-9 * scale:
        raise HigherOrderZero("zero of the section is not simple")
    return complex(out)


def l_of_v(C4: PlaneQuartic, l, P: QuarticPoint):
    """The lift-quadratic quantity l(v_P) for a form l vanishing at P,
    realized as lift_alpha^2 * F_v^2 * eta'.  Chart-free: the ratio
    Q(lift)/l(v_P) is the residue of Q du / (F_v l) at P."""
    lift = P.lift
    alpha, upos, vpos = chart_of(C4, P)
    norm = lift / lift[alpha]
    Pn = QuarticPoint(norm)
    fv = C4.grad(norm)[vpos]
    return complex(lift[alpha]**2 * fv**2 * eta_prime(C4, l, Pn))


def check_canprop(C4: PlaneQuartic, l, Q):
    """Residue-sum identity: sum over the section {l=0} of Q(P)/l(v_P) = 0.

    Q is a 3x3 symmetric coefficient matrix.  Each term is the residue of
    the twisted form Q du/(F_v l); the sum is reported relative to the
    largest term.
    """
    Q = np.asarray(Q, dtype=complex)
    pts = line_section(C4, l)
    terms = []
    for P in pts:
        qv = P.lift @ Q @ P.lift
        terms.append(qv / l_of_v(C4, l, P))
    total = sum(terms)
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0, 0.0
    return abs(total), abs(total) / scale


def check_cor2(C4: PlaneQuartic, l, m1, m2):
    """Three-term residue identity: for a line section {x, y, z, t} and
    adjoint forms m1, m2 vanishing at t,

        sum over {x,y,z} of eta_1(P) eta_2(P) / eta'(P) = 0.
    """
    pts = line_section(C4, l)
    t = pts[3]
    terms = []
    for P in pts[:3]:
        e1 = form_value(C4, m1, P)
        e2 = form_value(C4, m2, P)
        Pn = QuarticPoint(P.normalized()[0])
        terms.append(e1 * e2 / eta_prime(C4, l, Pn))
    total = sum(terms)
    scale = max(abs(tm) for tm in terms)
    if scale == 0.0:
        return 0.0, 0.0
    return abs(total), abs(total) / scale


def _plane_coords(u, v, lift):
    """Coordinates (s, t) with lift = s u + t v (least squares on C^3)."""
    Mat = np.stack([u, v], axis=1)
    sol, *_ = np.linalg.lstsq(Mat, lift, rcond=None)
    return sol


def ratio_r(C4: PlaneQuartic, x_lift, y_lift, l):
    """The hyperplane ratio r(x~, y~, H) computed two ways.

    (a) through the section divisor: with H section = {x, y, D1, D2} and
    L_i the forms on H vanishing at D_i,
        r = L1(y~) L2(y~) / (L1(x~) L2(x~));
    (b) through the tangent machinery: r = -l(v_y~) / l(v_x~).
    Returns (r_divisor, r_tangent).
    """
    pts = line_section(C4, l)
    u, v = _line_basis(l)
    coords = [_plane_coords(u, v, p.lift) for p in pts]
    cx = _plane_coords(u, v, np.asarray(x_lift, dtype=complex))
    cy = _plane_coords(u, v, np.asarray(y_lift, dtype=complex))
    # identify which section points are x and y
    def match(c):
        best, second = None, None
        for i, cc in enumerate(coords):
            d = abs(c[0] * cc[1] - c[1] * cc[0]) / (np.linalg.norm(c) * np.linalg.norm(cc))
            if best is None or d < best[0]:
                second = best
                best = (d, i)
            elif second is None or d < second[0]:
                second = (d, i)
        if best[0] > 1e-6:
            raise QuarticError("lift does not lie on the hyperplane section")
        return best[1]
    ix, iy = match(cx), match(cy)
    if ix == iy:
        raise QuarticError("x and y identify the same section point")
    d_idx = [i for i in range(4) if i not in (ix, iy)]
    L = []
    for i in d_idx:
        sD, tD = coords[i]
        L.append(lambda c, sD=sD, tD=tD: c[0] * tD - c[1] * sD)
    r_div = (L[0](cy) * L[1](cy)) / (L[0](cx) * L[1](cx))
    r_tan = -l_of_v(C4, l, QuarticPoint(np.asarray(y_lift, dtype=complex))) \
        / l_of_v(C4, l, QuarticPoint(np.asarray(x_lift, dtype=complex)))
    return complex(r_div), complex(r_tan)


def reconstruct_tangent_coords(a_seq, b_seq, tol=1e-10):
    """Tangent coordinates from hyperplane ratios: the continued-product
    formula

        (1 : (b2-b1)/(a2-b2) : ... :
         prod (a_i - b_{i-1})(b_{i+1} - b_i) / (b_i - b_{i-1})(a_{i+1} - b_{i+1}))

    for sequences a_i, b_i of length g-2 >= 1 (1-indexed as displayed).
    """
    a = [complex(v) for v in a_seq]
    b = [complex(v) for v in b_seq]
    if len(a) != len(b) or not a:
        raise ValueError("need equal nonempty ratio sequences")
    m = len(a)
    scale = max(max(abs(v) for v in a), max(abs(v) for v in b), 1.0)
    out = [1.0 + 0.0j]
    if m == 1:
        return out
    den = a[1] - b[1]
    if abs(den) < tol * scale:
        raise DegenerateRatios("a2 - b2 too small")
    out.append(out[0] * (b[1] - b[0]) / den)
    for i in range(1, m - 1):          # u_{i+2}/u_{i+1} in 0-based terms
        d1 = b[i] - b[i - 1]
        d2 = a[i + 1] - b[i + 1]
        if min(abs(d1), abs(d2)) < tol * scale:
            raise DegenerateRatios("degenerate ratio denominators")
        ratio = (a[i] - b[i - 1]) * (b[i + 1] - b[i]) / (d1 * d2)
        out.append(out[-1] * ratio)
    return out


def projective_distance(p, q):
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    M = np.outer(p, q)
    num = np.abs(M - M.T).max()
    return float(num / (np.linalg.norm(p) * np.linalg.norm(q)))


# ---------------------------------------------------------------------------
# samplers and identity runners


def _random_form(rng):
    return rng.standard_normal(3) + 1j * rng.standard_normal(3)


def _random_quadric(rng):
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return 0.5 * (M + M.T)


def _form_through(rng, points):
    """Random linear form vanishing at the given lifts (<= 2 of them)."""
    A = np.stack([np.asarray(p, dtype=complex) for p in points])
    # basis of the null space of A
    _, s, vh = np.linalg.svd(A)
    null = vh[len(points):].conj()
    w = rng.standard_normal(len(null)) + 1j * rng.standard_normal(len(null))
    return w @ null


def canprop_residual(C4: PlaneQuartic, rng):
    for _ in range(20):
        try:
            return check_canprop(C4, _random_form(rng), _random_quadric(rng))
        except (TangentOrSingularLine, HigherOrderZero, NotAZero):
            continue
    raise QuarticError("could not sample a transversal line")


def cor2_residual(C4: PlaneQuartic, rng):
    for _ in range(20):
        l = _random_form(rng)
        try:
            pts = line_section(C4, l)
        except TangentOrSingularLine:
            continue
        t_lift = pts[3].lift
        jstar = int(np.argmax(np.abs(t_lift)))
        ms = []
        for _ in range(2):
            r = _random_form(rng)
            m = r.copy()
            m[jstar] -= (r @ t_lift) / t_lift[jstar]
            ms.append(m)
        try:
            return check_cor2(C4, l, ms[0], ms[1])
        except (HigherOrderZero, NotAZero):
            continue
    raise QuarticError("could not sample a cor2 configuration")


def ratio_dual_residual(C4: PlaneQuartic, rng):
    for _ in range(20):
        l = _random_form(rng)
        try:
            pts = line_section(C4, l)
            scales = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            x_lift = pts[0].lift * scales[0]
            y_lift = pts[1].lift * scales[1]
            r_div, r_tan = ratio_r(C4, x_lift, y_lift, l)
        except (TangentOrSingularLine, HigherOrderZero, NotAZero, QuarticError):
            continue
        return abs(r_div - r_tan), abs(r_div - r_tan) / abs(r_div)
    raise QuarticError("could not sample a ratio configuration")


def tangent_reconstruction_residual(C4: PlaneQuartic, rng):
    """Genus-3 tangent reconstruction from hyperplane-section ratios.

    Through two points of the plane there is a single line, so the
    two-point d-ratio of the general reconstruction corollary is only
    divisor-measurable for genus >= 4.  At genus 3 the tangent direction
    (l0(v_x) : l1(v_x)) is instead recovered from two section-side ratio
    instances: for each line l_i through x pick another section point y_i,
    measure r_i = r(x~, y_i~, l_i) from the residual divisor, and invert

        l_i(v_x~) = -l_i(v_{y_i}~) / r_i.

    The result must match the direct tangent-machinery values.
    """
    for _ in range(40):
        l0 = _random_form(rng)
        try:
            sec0 = line_section(C4, l0)
        except TangentOrSingularLine:
            continue
        x, y0 = sec0[0], sec0[1]
        l1 = _form_through(rng, [x.lift])
        try:
            sec1 = line_section(C4, l1)
        except TangentOrSingularLine:
            continue
        # find a section point of l1 distinct from x
        y1 = None
        for p in sec1:
            if projective_distance(p.lift, x.lift) > 1e-6:
                y1 = p
                break
        if y1 is None:
            continue
        try:
            c0 = ratio_r(C4, x.lift, y0.lift, l0)[0]
            c1 = ratio_r(C4, x.lift, y1.lift, l1)[0]
            B0 = l_of_v(C4, l0, y0)
            B1 = l_of_v(C4, l1, y1)
            direct = np.array([l_of_v(C4, l0, x), l_of_v(C4, l1, x)])
        except (TangentOrSingularLine, HigherOrderZero, NotAZero, QuarticError):
            continue
        recon = np.array([-B0 / c0, -B1 / c1])
        dist = projective_distance(recon, direct)
        return dist, dist
    raise QuarticError("could not sample a reconstruction configuration")


def reconstruct_synthetic_residual(rng, length=5):
    """Oracle for the continued-product formula: choose u, v, feed the
    ratios a_i = -v_i/u_i, b_i = -(sum v)/(sum u); output must be
    proportional to u."""
    for _ in range(20):
        u = rng.standard_normal(length) + 1j * rng.standard_normal(length)
        v = rng.standard_normal(length) + 1j * rng.standard_normal(length)
        a = [-v[i] / u[i] for i in range(length)]
        b = [-(v[:i + 1].sum()) / (u[:i + 1].sum()) for i in range(length)]
        try:
            coords = reconstruct_tangent_coords(a, b)
        except DegenerateRatios:
            continue
        dist = projective_distance(np.array(coords), u / u[0])
        return dist, dist
    raise QuarticError("synthetic oracle kept hitting degenerate ratios")


# quartic identity registry (consumed by identities.run_suite)

from .identities import IdentitySpec  # noqa: E402  (cycle-free: late import)

QUARTIC_IDENTITIES = {
    "canprop": IdentitySpec(
        name="canprop", kind="quartic", runner=canprop_residual,
        trials={"fermat": 200, "quartic-generic": 100},
        tol={"fermat": 1e-9, "quartic-generic": 1e-8}),
    "cor2_three_term": IdentitySpec(
        name="cor2_three_term", kind="quartic", runner=cor2_residual,
        trials={"fermat": 100, "quartic-generic": 50},
        tol={"fermat": 1e-9, "quartic-generic": 1e-8}),
    "ratio_dual": IdentitySpec(
        name="ratio_dual", kind="quartic", runner=ratio_dual_residual,
        trials={"fermat": 200, "quartic-generic": 100},
        tol={"fermat": 1e-9, "quartic-generic": 1e-8}),
    "tangent_reconstruction": IdentitySpec(
        name="tangent_reconstruction", kind="quartic",
        runner=tangent_reconstruction_residual,
        trials={"fermat": 100, "quartic-generic": 100},
        tol={"fermat": 1e-8, "quartic-generic": 1e-8}),
    "reconstruct_synthetic": IdentitySpec(
        name="reconstruct_synthetic", kind="quartic",
        runner=lambda env, rng: reconstruct_synthetic_residual(rng),
        trials={"fermat": 100, "quartic-generic": 100},
        tol={"fermat": 1e-10, "quartic-generic": 1e-10}),
}
