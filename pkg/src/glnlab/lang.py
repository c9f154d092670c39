"""Galois actions on matrix groups, the Lang map, and twisted conjugacy.

Groups are handled by exhaustive enumeration below a hard size cap, so
every statement verified here (surjectivity counts, H^1 triviality, the
norm-vs-conjugacy matching) is exact, never sampled.
"""

from __future__ import annotations

import itertools

from .errors import (
    CapExceeded,
    MatchFailure,
    NoTrivialization,
    NotACocycle,
    NotFound,
)
from .rings import (
    DEFAULT_FIELD_CAP,
    DEFAULT_GROUP_CAP,
    FiniteField,
    Mat,
    TruncatedLocalRing,
    is_prime,
)


def factor_prime_power(q):
    """(p, v) with q = p^v, or raise ValueError."""
    for p in range(2, q + 1):
        if q % p == 0:
            v = 0
            m = q
            while m % p == 0:
                m //= p
                v += 1
            if m == 1 and is_prime(p):
                return p, v
            raise ValueError(f"{q} is not a prime power")
    raise ValueError(f"{q} is not a prime power")


class GaloisModule:
    """An enumerated matrix group with a cyclic Frobenius action.

    ``sigma`` maps group elements to group elements and has order
    dividing ``d``.
    """

    def __init__(self, elements, sigma, d, ring=None, size=None):
        self.elements = list(elements)
        self.sigma = sigma
        self.d = d
        self.ring = ring
        self.size = len(self.elements) if size is None else size

    def identity(self):
        e = self.elements[0]
        return Mat.identity(e.ring, e.size)


def gl_elements(ring, s, cap=DEFAULT_GROUP_CAP):
    """All of GL_s over an enumerable finite ring, by exhaustive scan."""
    try:
        nel = ring.size()
    except AttributeError:
        nel = ring.q
    if nel ** (s * s) > cap:
        raise CapExceeded(
            f"enumerating {nel}^{s * s} candidate matrices exceeds cap {cap}")
    els = list(ring.elements())
    out = []
    for entries in itertools.product(els, repeat=s * s):
        m = Mat(ring, [entries[i * s:(i + 1) * s] for i in range(s)])
        if m.is_invertible():
            out.append(m)
    return out


def gl_module(ring, s, sigma_exponent=1, cap=DEFAULT_GROUP_CAP):
    """GL_s over a finite field or truncated local ring with entrywise
    Frobenius^sigma_exponent as the Galois action."""
    d = ring.d // _gcd(ring.d, sigma_exponent)
    sig = (lambda m: m.sigma(sigma_exponent))
    module = GaloisModule(gl_elements(ring, s, cap=cap), sig, d, ring=ring)
    module.sigma_exponent = sigma_exponent % ring.d or ring.d
    return module


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# semidirect product elements

class SemidirectElement:
    """(sigma^a, g) with (s^a, g)(s^b, h) = (s^{a+b}, g * sigma^a(h))."""

    __slots__ = ("power", "matrix", "module")

    def __init__(self, power, matrix, module):
        self.power = power % module.d
        self.matrix = matrix
        self.module = module

    def _sig(self, m, e):
        for _ in range(e % self.module.d):
            m = self.module.sigma(m)
        return m

    def __mul__(self, other):
        return SemidirectElement(
            self.power + other.power,
            self.matrix * self._sig(other.matrix, self.power),
            self.module)

    def inverse(self):
        inv = self._sig(self.matrix.inverse(), -self.power % self.module.d)
        return SemidirectElement(-self.power, inv, self.module)

    def __eq__(self, other):
        return (isinstance(other, SemidirectElement)
                and self.power == other.power and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.power, self.matrix))


# ---------------------------------------------------------------------------
# the Lang map

def lang_map(x, module):
    """x^-1 * sigma(x)."""
    return x.inverse() * module.sigma(x)


def lang_image(module):
    return {lang_map(x, module) for x in module.elements}


def twisted_norm(a, module, m):
    """a * sigma(a) * ... * sigma^{m-1}(a)."""
    acc = a
    cur = a
    for _ in range(m - 1):
        cur = module.sigma(cur)
        acc = acc * cur
    return acc


def twisted_classes(module):
    """Partition of the group under a ~ v * a * sigma(v)^-1.

    Returns a list of dicts with canonical (coeff-key-least) represen-
    tative, orbit size, and the orbit itself.
    """
    sig_inv = {}
    for v in module.elements:
        sig_inv[v] = module.sigma(v).inverse()
    seen = set()
    classes = []
    for a in module.elements:
        if a in seen:
            continue
        orbit = {v * a * sig_inv[v] for v in module.elements}
        seen |= orbit
        rep = min(orbit, key=lambda m: m.coeff_key())
        classes.append({"representative": rep, "size": len(orbit),
                        "orbit": orbit})
    return classes


def ordinary_classes(elements):
    """Plain conjugacy classes of an enumerated group."""
    inv = {g: g.inverse() for g in elements}
    seen = set()
    classes = []
    for a in elements:
        if a in seen:
            continue
        orbit = {g * a * inv[g] for g in elements}
        seen |= orbit
        rep = min(orbit, key=lambda m: m.coeff_key())
        classes.append({"representative": rep, "size": len(orbit),
                        "orbit": orbit})
    return classes


# ---------------------------------------------------------------------------
# Lang preimages via extension fields

def embed_field(small, big):
    """Canonical embedding F_{p^m} -> F_{p^M}, m | M.

    Sends the generator to the lex-least root of the small modulus in
    the big field; any such root works since the embeddings are Galois-
    conjugate and commute with every p-power map.
    """
    if small.p != big.p or big.d % small.d:
        raise ValueError("no embedding between these fields")
    if small.d == 1:
        img = big.one()
        return lambda a, img=img: big.from_int(a.coeffs[0])
    root = None
    for cand in sorted(big.elements(), key=lambda e: e.coeffs):
        acc = big.zero()
        power = big.one()
        for c in small.modulus:
            if c:
                acc = acc + big.from_int(c) * power
            power = power * cand
        if acc.is_zero():
            root = cand
            break
    if root is None:
        raise ArithmeticError("modulus has no root in the big field")

    powers = [big.one()]
    for _ in range(small.d - 1):
        powers.append(powers[-1] * root)

    def emb(a):
        acc = big.zero()
        for c, rp in zip(a.coeffs, powers):
            if c:
                acc = acc + big.from_int(c) * rp
        return acc

    return emb


def _solve_kernel_gfp(rows, p):
    """Basis of the kernel of a matrix over Z/p (rows = list of row lists)."""
    if not rows:
        return []
    ncols = len(rows[0])
    rows = [list(r) for r in rows]
    pivots = {}
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for c, rr in pivots.items():
            vec[c] = (-rows[rr][fc]) % p
        basis.append(vec)
    return basis


def lang_preimage(y, module, max_extension=None, kernel_cap=1 << 20):
    """Solve x^-1 sigma(x) = y over extensions of the module's field.

    Only supported for GL_s over a finite field.  The equation
    sigma(x) = x*y is F_p-linear in the entries of x, so each extension
    degree is a kernel computation plus a search for an invertible
    kernel element.  Returns (x, extension_degree, big_field, embedding).
    """
    field = module.ring
    if not isinstance(field, FiniteField):
        raise NotFound("preimage search implemented over finite fields only")
    p, m = field.p, field.d
    s = y.size
    sig_exp = getattr(module, "sigma_exponent", 1)
    if max_extension is None:
        # the order bound q^d - 1 = |field| - 1 is always sufficient
        max_extension = max(1, field.q - 1)
    for e in range(1, max_extension + 1):
        if p**(m * e) > DEFAULT_FIELD_CAP:
            break
        big = FiniteField(p, m * e)
        emb = embed_field(field, big)
        ybig = Mat(big, [[emb(a) for a in row] for row in y.rows])
        x = _lang_solve_linear(ybig, big, s, sig_exp, kernel_cap)
        if x is not None:
            return x, e, big, emb
    raise NotFound("no Lang preimage within the extension bound")


def _lang_solve_linear(ybig, big, s, sig_exp, kernel_cap):
    """Invertible solution of sigma(x) = x*y over the big field, if any."""
    p, M = big.p, big.d
    nvars = s * s * M
    basis_elems = []
    for i in range(s):
        for j in range(s):
            for k in range(M):
                coeffs = tuple(1 if t == k else 0 for t in range(M))
                basis_elems.append((i, j, big.element(coeffs)))

    rows = []
    for (i, j, b) in basis_elems:
        zero = big.zero()
        mat = Mat(big, [[b if (i, j) == (r, c) else zero for c in range(s)]
                        for r in range(s)])
        img = mat.sigma(sig_exp) + (mat * ybig).scale(big.from_int(-1))
        col = []
        for r in range(s):
            for c in range(s):
                col.extend(img.rows[r][c].coeffs)
        rows.append(col)
    # rows currently hold images of basis vectors; transpose to the matrix
    # acting on coordinate columns
    mat_rows = [[rows[v][eq] for v in range(nvars)] for eq in range(nvars)]
    kernel = _solve_kernel_gfp(mat_rows, p)
    if not kernel:
        return None
    if p**len(kernel) > kernel_cap:
        raise CapExceeded("kernel too large to scan for an invertible point")
    for combo in itertools.product(range(p), repeat=len(kernel)):
        if not any(combo):
            continue
        vec = [0] * nvars
        for c, bvec in zip(combo, kernel):
            if c:
                vec = [(x + c * y) % p for x, y in zip(vec, bvec)]
        entries = []
        for idx in range(s * s):
            entries.append(big.element(tuple(vec[idx * M:(idx + 1) * M])))
        x = Mat(big, [entries[i * s:(i + 1) * s] for i in range(s)])
        if x.is_invertible():
            return x
    return None


# ---------------------------------------------------------------------------
# H^1 for cyclic actions

def h1_cyclic(module):
    """Cocycles c with c sigma(c) ... sigma^{d-1}(c) = 1 and their classes
    under c ~ a^-1 c sigma(a)."""
    ident = module.identity()
    cocycles = [c for c in module.elements
                if twisted_norm(c, module, module.d) == ident]
    cocycle_set = set(cocycles)
    seen = set()
    classes = []
    for c in cocycles:
        if c in seen:
            continue
        orbit = set()
        for a in module.elements:
            t = a.inverse() * c * module.sigma(a)
            orbit.add(t)
        orbit &= cocycle_set
        seen |= orbit
        rep = min(orbit, key=lambda m: m.coeff_key())
        classes.append({"representative": rep, "size": len(orbit),
                        "contains_identity": ident in orbit})
    return {
        "cocycle_count": len(cocycles),
        "cocycles": cocycles,
        "classes": classes,
        "h1_size": len(classes),
    }


def congruence_kernel_module(p, d, a, b, s, cap=DEFAULT_GROUP_CAP):
    """The group 1 + p^a M_s at precision b (so p^a O / p^b O entries),
    with the lifted Frobenius action."""
    ring = TruncatedLocalRing(p, b, d)
    pa = p**a
    step = p**(b - a)
    per_entry = step**d
    if per_entry ** (s * s) > cap:
        raise CapExceeded("congruence kernel enumeration exceeds cap")
    entry_values = [ring.element(tuple(pa * t for t in coeffs))
                    for coeffs in itertools.product(range(step), repeat=d)]
    ident = Mat.identity(ring, s)
    out = []
    for entries in itertools.product(entry_values, repeat=s * s):
        delta = Mat(ring, [entries[i * s:(i + 1) * s] for i in range(s)])
        out.append(ident + delta)
    return GaloisModule(out, lambda m: m.sigma(1), d, ring=ring)


def h1_level_tower(s, p, d, max_level, cap=DEFAULT_GROUP_CAP):
    """|H^1| for GL_s at each truncation level and for the congruence
    kernels between consecutive levels, plus level-compatibility."""
    report = {"levels": [], "kernels": [], "compatible": True}
    prev_cocycles = None
    for n in range(1, max_level + 1):
        ring = TruncatedLocalRing(p, n, d)
        module = gl_module(ring, s, cap=cap)
        res = h1_cyclic(module)
        report["levels"].append({"level": n, "group_order": module.size,
                                 "h1_size": res["h1_size"],
                                 "cocycle_count": res["cocycle_count"]})
        if prev_cocycles is not None:
            # reduction must carry level-n cocycles to level-(n-1) cocycles
            low = TruncatedLocalRing(p, n - 1, d)
            reduced = {
                Mat(low, [[low.element(a.coeffs) for a in row]
                          for row in c.rows])
                for c in res["cocycles"]}
            if not reduced <= set(prev_cocycles):
                report["compatible"] = False
        prev_cocycles = res["cocycles"]
    for a in range(1, max_level):
        module = congruence_kernel_module(p, d, a, a + 1, s, cap=cap)
        res = h1_cyclic(module)
        report["kernels"].append({"from_level": a, "to_level": a + 1,
                                  "group_order": module.size,
                                  "h1_size": res["h1_size"]})
    return report


def descend_conjugator(g, u_module):
    """Given g with sigma^-1(g)^-1 g in U, return g1 = g*u fixed by sigma.

    u is found by exhaustive trivialization of the cocycle in U; if no
    trivializer exists the H^1 obstruction is reported, not patched.
    """
    sig_inv_g = _sigma_power(g, u_module, u_module.d - 1)
    c = sig_inv_g.inverse() * g
    members = set(u_module.elements)
    ident = u_module.identity()
    if c == ident:
        return g
    if c not in members:
        raise NotACocycle("sigma^-1(g)^-1 * g does not lie in U")
    for u in u_module.elements:
        if _sigma_power(u, u_module, u_module.d - 1) * u.inverse() == c:
            g1 = g * u
            if u_module.sigma(g1) == g1:
                return g1
    raise NoTrivialization("cocycle has no trivialization in U")


def _sigma_power(m, module, e):
    for _ in range(e % module.d):
        m = module.sigma(m)
    return m


# ---------------------------------------------------------------------------
# the norm-matching bijection between plain and twisted classes

def char_poly(m):
    """Characteristic polynomial coefficients (low degree first, monic).

    Coefficient of X^k is (-1)^{s-k} * (sum of (s-k)x(s-k) principal
    minors); computed exactly over the entry ring.
    """
    s = m.size
    ring = m.ring
    coeffs = []
    for k in range(s + 1):
        r = s - k  # minor size
        if r == 0:
            coeffs.append(ring.one())
            continue
        acc = None
        for rows in itertools.combinations(range(s), r):
            sub = [[m.rows[i][j] for j in rows] for i in rows]
            term = m._det(sub)
            acc = term if acc is None else acc + term
        if (s - k) % 2:
            acc = -acc
        coeffs.append(acc)
    return tuple(coeffs)


def dm_bijection_check(s, q, n, cap=DEFAULT_GROUP_CAP):
    """Match plain conjugacy classes of GL_s(F_q) with twisted classes of
    GL_s(F_{q^n}) under the q-power Frobenius.

    For each twisted class representative A: solve X^-1 sigma(X) = A
    over an extension, form Y = X sigma^n(X^-1) (sigma-fixed, so an
    F_q point), and locate Y's plain class.  The induced map must be a
    bijection; a characteristic-polynomial cross-check (N(A) is
    conjugate to Y^-1) and an explicit conjugator search confirm each
    match.
    """
    p, v = factor_prime_power(q)
    base = FiniteField(p, v)
    ext = FiniteField(p, v * n)
    plain = ordinary_classes(gl_elements(base, s, cap=cap))
    module = gl_module(ext, s, sigma_exponent=v, cap=cap)
    twisted = twisted_classes(module)

    matches = []
    used = set()
    for cl in twisted:
        a = cl["representative"]
        x, e, big, _ = lang_preimage(a, module)
        # Y = X sigma^n(X^-1), fixed by the q-power map
        xinv = x.inverse()
        y = x * _frob_power(xinv, v * n)
        if _frob_power(y, v) != y:
            raise MatchFailure("norm construction did not land in GL_s(F_q)")
        y_small = _pullback_matrix(y, base, big)
        plain_cl = next(c for c in plain if y_small in c["orbit"])
        if id(plain_cl) in used:
            raise MatchFailure("two twisted classes hit the same plain class")
        used.add(id(plain_cl))

        # cross-check: N(A) = A sigma(A)...sigma^{n-1}(A) is conjugate to
        # the inverse of Y inside GL_s(F_{q^n})
        na = twisted_norm(a, module, n)
        target = Mat(ext, [[emb_small_to_ext(base, ext, c)
                            for c in row] for row in y_small.inverse().rows])
        if char_poly(na) != char_poly(target):
            raise MatchFailure("characteristic polynomial prefilter failed")
        conj = next((g for g in module.elements
                     if g * na * g.inverse() == target), None)
        if conj is None:
            raise MatchFailure("no explicit conjugator found")
        matches.append({
            "twisted_rep": a,
            "plain_rep": plain_cl["representative"],
            "extension_degree": e,
            "char_poly": tuple(c.coeffs for c in char_poly(na)),
        })
    bijective = len(used) == len(plain) == len(twisted)
    if not bijective:
        raise MatchFailure(
            f"{len(twisted)} twisted vs {len(plain)} plain classes")
    return {
        "plain_class_count": len(plain),
        "twisted_class_count": len(twisted),
        "bijective": bijective,
        "matches": matches,
    }


_EMBED_CACHE = {}


def emb_small_to_ext(small, ext, a):
    key = (small.p, small.d, ext.d)
    if key not in _EMBED_CACHE:
        _EMBED_CACHE[key] = embed_field(small, ext)
    return _EMBED_CACHE[key](a)


def _frob_power(m, e):
    return Mat(m.ring, [[a.frobenius(e) for a in row] for row in m.rows],
               m.offset)


def _pullback_matrix(m, small, big):
    """Invert the canonical embedding entrywise (entries must lie in the
    image of the small field)."""
    emb = embed_field(small, big)
    table = {emb(a): a for a in small.elements()}
    try:
        return Mat(small, [[table[a] for a in row] for row in m.rows])
    except KeyError:
        raise MatchFailure("matrix entry is not in the base field") from None
