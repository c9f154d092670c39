"""Fundamental-domain simplices for GL_n and their stabilizer patterns.

Stabilizers are compact open modulo the center, hence infinite; they are
represented intensionally by entry-wise valuation lower bounds plus the
unit-determinant-mod-center constraint.  Exhaustive enumeration happens
only on residue-level images, inside the audit operations.
"""

from __future__ import annotations

import itertools

from .errors import CapExceeded, NotInvertible, PrecisionExhausted
from .lang import gl_elements
from .rings import DEFAULT_GROUP_CAP, FiniteField, Mat


def fundamental_simplices(n):
    """All 2^n - 1 nonempty vertex subsets, smallest-first canonical order.

    Vertex i is the homothety class of the standard lattice with the
    first i basis vectors scaled by p.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    out = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            out.append(combo)
    return out


class ValuationPattern:
    """Entry-wise valuation lower bounds defining a stabilizer mod center.

    g belongs iff for the central exponent i forced by the determinant
    (v(det g) = -n*i), every entry satisfies v(g_jk) + i >= m_jk.
    """

    __slots__ = ("n", "entries")

    def __init__(self, entries):
        self.entries = tuple(tuple(int(x) for x in row) for row in entries)
        self.n = len(self.entries)

    def conjugate(self, diag_exponents):
        """Pattern of diag(p^e) * G * diag(p^e)^-1."""
        e = list(diag_exponents)
        return ValuationPattern(
            [[self.entries[i][j] + e[i] - e[j] for j in range(self.n)]
             for i in range(self.n)])

    def intersect(self, other):
        return ValuationPattern(
            [[max(a, b) for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)])

    def __eq__(self, other):
        return isinstance(other, ValuationPattern) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ValuationPattern({self.entries})"


def vertex_pattern(k, n):
    """Stabilizer pattern of vertex k: diag(p 1_k, 1_{n-k}) GL_n(O) (..)^-1."""
    e = [1] * k + [0] * (n - k)
    return ValuationPattern([[e[i] - e[j] for j in range(n)] for i in range(n)])


def stabilizer_pattern(simplex, n):
    """Intersection of the vertex stabilizer patterns over the simplex."""
    pat = vertex_pattern(simplex[0], n)
    for k in simplex[1:]:
        pat = pat.intersect(vertex_pattern(k, n))
    return pat


def conjugate_pattern(pattern, diag_exponents):
    return pattern.conjugate(diag_exponents)


def pattern_intersect(p1, p2):
    return p1.intersect(p2)


def membership(g, pattern):
    """Valuation test after removing the central p-power.

    The central exponent is pinned by requiring the centered determinant
    to be a unit; raises PrecisionExhausted when the truncated entries
    cannot decide the test.
    """
    n = g.size
    ring = g.ring
    det = g.det()
    vdet = det.valuation()
    if vdet >= ring.n:
        raise PrecisionExhausted("determinant not visible at this precision")
    vdet += n * g.offset
    if vdet % n:
        return False
    i = -vdet // n
    for r in range(n):
        for c in range(n):
            v = g.rows[r][c].valuation()
            saturated = v >= ring.n
            v += g.offset + i
            need = pattern.entries[r][c]
            if saturated:
                if v < need:
                    raise PrecisionExhausted(
                        "entry is zero at working precision but the pattern "
                        f"needs valuation >= {need}")
                continue
            if v < need:
                return False
    return True


# ---------------------------------------------------------------------------
# Iwasawa decomposition g = b * k

def _pivot_divide(entry, pivot):
    """entry / pivot when v(entry) >= v(pivot); exact in the truncated ring."""
    u, v = pivot.unit_part()
    return entry.divide_exact_p_power(v) * u.inverse()


def iwasawa_decompose(g):
    """g = b * k with b upper triangular and k integral with unit det.

    Column operations (exact over the ring: swaps and integral shears)
    are applied to clear each row left of a minimal-valuation pivot,
    working bottom row up; ties break to the leftmost pivot.
    """
    n = g.size
    ring = g.ring
    work = [list(row) for row in g.rows]
    emat = [list(row) for row in Mat.identity(ring, n).rows]

    def col_swap(a, b):
        for r in range(n):
            work[r][a], work[r][b] = work[r][b], work[r][a]
            emat[r][a], emat[r][b] = emat[r][b], emat[r][a]

    def col_add(dst, src, c):
        for r in range(n):
            work[r][dst] = work[r][dst] + c * work[r][src]
            emat[r][dst] = emat[r][dst] + c * emat[r][src]

    for i in range(n - 1, 0, -1):
        vals = [work[i][j].valuation() for j in range(i + 1)]
        best = min(vals)
        if best >= ring.n:
            raise PrecisionExhausted("pivot row vanishes at working precision")
        piv = vals.index(best)  # leftmost minimal valuation
        if piv != i:
            col_swap(piv, i)
        pivot = work[i][i]
        for j in range(i):
            if work[i][j].is_zero():
                continue
            c = -_pivot_divide(work[i][j], pivot)
            col_add(j, i, c)
            if not work[i][j].is_zero():
                raise PrecisionExhausted("shear failed to clear the entry")
    e = Mat(ring, emat)
    try:
        k = e.inverse()
    except NotInvertible:
        raise PrecisionExhausted("collected column operations not invertible")
    b = Mat(ring, work, g.offset)
    return b, k


# ---------------------------------------------------------------------------
# residue-level audits

def _residue_lower_equal_diag(field, n):
    """Lower triangular matrices with one repeated unit on the diagonal."""
    units = [a for a in field.elements() if not a.is_zero()]
    els = list(field.elements())
    out = []
    below = [(r, c) for r in range(n) for c in range(n) if r > c]
    for a in units:
        for fill in itertools.product(els, repeat=len(below)):
            rows = [[a if r == c else field.zero() for c in range(n)]
                    for r in range(n)]
            for (r, c), val in zip(below, fill):
                rows[r][c] = val
            out.append(Mat(field, rows))
    return out


def _residue_upper_triangular(field, n):
    units = [a for a in field.elements() if not a.is_zero()]
    els = list(field.elements())
    above = [(r, c) for r in range(n) for c in range(n) if r < c]
    out = []
    for diag in itertools.product(units, repeat=n):
        for fill in itertools.product(els, repeat=len(above)):
            rows = [[diag[r] if r == c else field.zero() for c in range(n)]
                    for r in range(n)]
            for (r, c), val in zip(above, fill):
                rows[r][c] = val
            out.append(Mat(field, rows))
    return out


def audit_ub_factorization(n, p, cap=DEFAULT_GROUP_CAP):
    """Does (lower-triangular-equal-diagonal) * (upper triangular) cover
    the whole residue group?  Reports the product-set size and any
    elements not of the form u*b."""
    field = FiniteField(p, 1)
    g_all = gl_elements(field, n, cap=cap)
    u_set = _residue_lower_equal_diag(field, n)
    b_set = _residue_upper_triangular(field, n)
    if len(u_set) * len(b_set) > cap:
        raise CapExceeded("product-set enumeration exceeds cap")
    products = {u * b for u in u_set for b in b_set}
    missing = sorted((g for g in g_all if g not in products),
                     key=lambda m: m.coeff_key())
    return {
        "group_order": len(g_all),
        "u_order": len(u_set),
        "b_order": len(b_set),
        "product_set_size": len(products),
        "covers": not missing,
        "counterexamples": missing,
    }


def audit_self_normalizing(n, p, subgroup=None, cap=DEFAULT_GROUP_CAP):
    """Normalizer of the residue image of the lower-equal-diagonal group
    (or a supplied subgroup) inside GL_n(F_p)."""
    field = FiniteField(p, 1)
    g_all = gl_elements(field, n, cap=cap)
    u_set = set(subgroup if subgroup is not None
                else _residue_lower_equal_diag(field, n))
    normalizer = [g for g in g_all
                  if {g * u * g.inverse() for u in u_set} == u_set]
    return {
        "group_order": len(g_all),
        "u_order": len(u_set),
        "normalizer_order": len(normalizer),
        "self_normalizing": set(normalizer) == u_set,
    }


def ub_product_identity_gl3():
    """Symbolic check of the 3x3 (lower-equal-diagonal) * (upper) product.

    Returns True iff the expanded product matches the expected closed
    form entry by entry.
    """
    import sympy

    a, d, g, h = sympy.symbols("a d g h")
    a2, b2, c2, e2, f2, k2 = sympy.symbols("a2 b2 c2 e2 f2 k2")
    u = sympy.Matrix([[a, 0, 0], [d, a, 0], [g, h, a]])
    b = sympy.Matrix([[a2, b2, c2], [0, e2, f2], [0, 0, k2]])
    expected = sympy.Matrix([
        [a * a2, a * b2, a * c2],
        [d * a2, d * b2 + a * e2, d * c2 + a * f2],
        [g * a2, g * b2 + h * e2, g * c2 + h * f2 + a * k2],
    ])
    return sympy.simplify(u * b - expected) == sympy.zeros(3, 3)
