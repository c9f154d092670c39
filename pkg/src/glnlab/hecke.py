"""The spherical Hecke algebra for GL_n (n = 1, 2; n = 3 gated) and the
transform onto Weyl-invariants of the cocharacter group algebra.

Double cosets are indexed by weakly decreasing integer vectors; all
computations are exact, done p-locally over Q (matrix entries are
rationals whose valuations drive every membership test) with
coefficients in Laurent polynomials in a formal square root of q.
Haar normalization: vol(GL_n(O)) = vol(N cap GL_n(O)) = 1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    CharacterMismatch,
    PrecisionExhausted,
    UnsupportedRank,
    ZeroEntry,
)
from .rings import HalfPowerLaurent

BIG = 10**9  # stands in for +infinity in valuation comparisons


def vp(x, p):
    """p-adic valuation of a rational; BIG for zero."""
    x = Fraction(x)
    if x == 0:
        return BIG
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _minors_min_valuation(rows, k, p):
    """Minimum valuation over all k x k minors of a rational matrix."""
    n = len(rows)
    best = BIG
    for rr in itertools.combinations(range(n), k):
        for cc in itertools.combinations(range(n), k):
            sub = [[rows[i][j] for j in cc] for i in rr]
            best = min(best, vp(_fr_det(sub), p))
    return best


def _fr_det(rows):
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    acc = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = Fraction(rows[0][j]) * _fr_det(minor)
        acc += -term if j % 2 else term
    return acc


def smith_exponents(rows, p):
    """Elementary divisor exponents (ascending) of a nonsingular rational
    matrix, via gcd valuations of k x k minors."""
    n = len(rows)
    mins = [0]
    for k in range(1, n + 1):
        mins.append(_minors_min_valuation(rows, k, p))
    return tuple(mins[k] - mins[k - 1] for k in range(1, n + 1))


def is_dominant(lam):
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


# ---------------------------------------------------------------------------
# coset decomposition

def coset_decompose(lam, n, p, precision=24):
    """Representatives g_i with K p^lam K = union of g_i K (disjoint).

    Enumerates upper-triangular Hermite forms with p-power diagonal and
    keeps those whose elementary divisors are exactly lam.  Exact; the
    precision parameter only bounds the size of cocharacters accepted.
    """
    if n not in (1, 2, 3):
        raise UnsupportedRank(f"rank {n} not supported")
    lam = tuple(lam)
    if len(lam) != n or not is_dominant(lam):
        raise ValueError("need a weakly decreasing integer vector of length n")
    if max(abs(c) for c in lam) > precision:
        raise PrecisionExhausted("cocharacter exceeds the precision budget")
    shift = lam[-1]
    m = tuple(c - shift for c in lam)
    total = sum(m)
    target = tuple(sorted(m))
    reps = []
    scale = Fraction(p)**shift
    for diag in itertools.product(range(total + 1), repeat=n):
        if sum(diag) != total:
            continue
        ranges = []
        for i in range(n):
            for j in range(i + 1, n):
                ranges.append(range(p**diag[i]))
        for fill in itertools.product(*ranges):
            rows = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = Fraction(p)**diag[i]
            idx = 0
            for i in range(n):
                for j in range(i + 1, n):
                    rows[i][j] = Fraction(fill[idx])
                    idx += 1
            if smith_exponents(rows, p) == target:
                reps.append(tuple(tuple(x * scale for x in r) for r in rows))
    return reps


def _in_gln_o(rows, p):
    """Membership in GL_n(Z_p): integral entries and unit determinant."""
    for r in rows:
        for x in r:
            if vp(x, p) < 0:
                return False
    return vp(_fr_det([list(r) for r in rows]), p) == 0


def _mat_mul_fr(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


def _diag_p_power(lam, p):
    n = len(lam)
    return tuple(tuple(Fraction(p)**lam[i] if i == j else Fraction(0)
                       for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Hecke elements

class HeckeElement:
    """Finitely supported function on double cosets, coefficients in the
    formal sqrt-q Laurent ring."""

    def __init__(self, n, p, support=None):
        self.n = n
        self.p = p
        self.q = p
        self.support = {}
        if support:
            for lam, c in support.items():
                if isinstance(c, int):
                    c = HalfPowerLaurent(self.q, c)
                if not c.is_zero():
                    self.support[tuple(lam)] = c

    @classmethod
    def basis(cls, lam, p):
        lam = tuple(lam)
        if not is_dominant(lam):
            raise ValueError("basis elements are indexed by dominant vectors")
        return cls(len(lam), p, {lam: 1})

    @classmethod
    def unit(cls, n, p):
        return cls(n, p, {(0,) * n: 1})

    def bound(self):
        if not self.support:
            return 0
        return max(max(abs(c) for c in lam) for lam in self.support)

    def __add__(self, other):
        out = dict(self.support)
        for lam, c in other.support.items():
            out[lam] = out.get(lam, HalfPowerLaurent(self.q)) + c
        return HeckeElement(self.n, self.p, out)

    def scale(self, c):
        return HeckeElement(self.n, self.p,
                            {lam: v * c for lam, v in self.support.items()})

    def __eq__(self, other):
        return (isinstance(other, HeckeElement)
                and (self.n, self.p) == (other.n, other.p)
                and self.support == other.support)

    def __repr__(self):
        terms = ", ".join(f"{lam}: {c}" for lam, c in sorted(self.support.items()))
        return f"HeckeElement(n={self.n}, p={self.p}, {{{terms}}})"


def _dominant_range(lo, hi, n, total):
    """Dominant vectors with entries in [lo, hi] and fixed coordinate sum."""
    out = []
    for lam in itertools.product(range(hi, lo - 1, -1), repeat=n):
        if sum(lam) == total and is_dominant(lam):
            out.append(lam)
    return out


def convolve(f, g, precision=24):
    """Convolution with vol(K) = 1, by coset-product membership counting."""
    if (f.n, f.p) != (g.n, g.p):
        raise ValueError("mismatched rank or prime")
    n, p = f.n, f.p
    out = {}
    for lam, cf in f.support.items():
        reps_f = coset_decompose(lam, n, p, precision)
        for mu, cg in g.support.items():
            reps_g = coset_decompose(mu, n, p, precision)
            lo = lam[-1] + mu[-1]
            hi = lam[0] + mu[0]
            total = sum(lam) + sum(mu)
            for nu in _dominant_range(lo, hi, n, total):
                x_inv = _diag_p_power(tuple(-c for c in nu), p)
                count = 0
                for gf in reps_f:
                    for gg in reps_g:
                        prod = _mat_mul_fr(x_inv, _mat_mul_fr(gf, gg))
                        if _in_gln_o(prod, p):
                            count += 1
                if count:
                    coeff = (cf * cg) * count
                    out[nu] = out.get(nu, HalfPowerLaurent(p)) + coeff
    return HeckeElement(n, p, out)


# ---------------------------------------------------------------------------
# modulus character

def modulus_delta_exponent(a, n):
    """Exponent e with delta(diag(p^a_i * units)) = q^e."""
    return -sum(a[i] * (n + 1 - 2 * (i + 1)) for i in range(n))


def _volume_exponent_by_count(c, p):
    """vol(p^c O) as q^e with vol(O) = 1, read off a finite cell count.

    Cells of width p^-L tiling the window p^min(c,0) O are tested for
    membership of their base point in p^c O; the count must come out an
    exact power of p.
    """
    L = abs(c) + 1
    m = min(c, 0)
    # cosets of p^L O inside the window p^m O, base points k * p^m
    inside = sum(1 for k in range(p**(L - m))
                 if vp(Fraction(k) * Fraction(p)**m, p) >= c)
    total = p**L  # cosets of p^L O making up O
    e = 0
    num, den = inside, total
    while num > den:
        num, e = num // p, e + 1
    while num < den:
        num, e = num * p, e - 1
    if num != den:
        raise ArithmeticError("cell count is not a power of p")
    return e


def modulus_delta(a, n, q):
    """delta(t) as an exact power of q, cross-checked against a counting
    model of the conjugation Jacobian on the unipotent coordinates."""
    e = modulus_delta_exponent(a, n)
    e_counted = 0
    for i in range(n):
        for j in range(i + 1, n):
            # coordinate x_ij scales by p^(a_i - a_j)
            e_counted += _volume_exponent_by_count(a[i] - a[j], q)
    if e_counted != e:
        raise ArithmeticError(
            f"counted modulus exponent {e_counted} != closed form {e}")
    return HalfPowerLaurent.v_power(q, 2 * e)


def modulus_delta_half(a, n, q):
    """delta^{1/2}(t) as a formal half power of q."""
    modulus_delta(a, n, q)  # runs the counting cross-check
    return HalfPowerLaurent.v_power(q, modulus_delta_exponent(a, n))


# ---------------------------------------------------------------------------
# the transform

class SatakeImage:
    """Element of the group algebra of Z^n with formal sqrt-q coefficients."""

    def __init__(self, n, q, coeffs=None):
        self.n = n
        self.q = q
        self.coeffs = {}
        if coeffs:
            for lam, c in coeffs.items():
                if isinstance(c, int):
                    c = HalfPowerLaurent(q, c)
                if not c.is_zero():
                    self.coeffs[tuple(lam)] = c

    def weyl_invariant(self):
        for lam, c in self.coeffs.items():
            for perm in itertools.permutations(lam):
                if self.coeffs.get(perm, HalfPowerLaurent(self.q)) != c:
                    return False
        return True

    def __add__(self, other):
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, HalfPowerLaurent(self.q)) + c
        return SatakeImage(self.n, self.q, out)

    def __mul__(self, other):
        out = {}
        zero = HalfPowerLaurent(self.q)
        for lam, c in self.coeffs.items():
            for mu, d in other.coeffs.items():
                nu = tuple(a + b for a, b in zip(lam, mu))
                out[nu] = out.get(nu, zero) + c * d
        return SatakeImage(self.n, self.q, out)

    def __eq__(self, other):
        return (isinstance(other, SatakeImage)
                and (self.n, self.q) == (other.n, other.q)
                and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = ", ".join(f"{lam}: {c}" for lam, c in sorted(self.coeffs.items()))
        return f"SatakeImage(n={self.n}, q={self.q}, {{{terms}}})"


def _shell_measure(c, q):
    """Measure of the valuation-c shell of the field, vol(O) = 1."""
    return Fraction(q)**(-c) * (1 - Fraction(1, q))


def _ball_measure(c, q):
    """Measure of {v >= c}."""
    return Fraction(q)**(-c)


def _integral_gl2(lam, support, q):
    """Exact unipotent integral of f(t n(x)) for t = p^lam, by valuation
    shells of the single coordinate."""
    total = Fraction(0)
    for mu, coeff_weight in support:
        if lam[0] + lam[1] != mu[0] + mu[1]:
            continue
        lo = min(mu)  # required minimum elementary divisor exponent
        a = min(lam)
        if a < lo:
            continue
        if a == lo:
            measure = _ball_measure(lo - lam[0], q)
        else:
            measure = _shell_measure(lo - lam[0], q)
        total += coeff_weight * measure
    return total


def _integral_gl3(lam, support, q):
    """Exact unipotent integral for rank 3.

    Coordinates (x, y, z) of the unipotent matrix are summed over
    valuation shells; the extra parameter w = v(xz - y) (which the 2x2
    minors depend on) is handled by an exact joint measure, with
    saturation buckets standing in for all larger valuations.
    """
    sums = {sum(mu) for mu, _ in support}
    if sum(lam) not in sums:
        return Fraction(0)
    mu_min = min(min(mu) for mu, _ in support)
    pair_min = min(sorted(mu)[0] + sorted(mu)[1] for mu, _ in support)
    a_lo = mu_min - lam[0]
    b_lo = mu_min - lam[0]
    c_lo = mu_min - lam[1]
    hi = max(max(abs(m) for m in mu) for mu, _ in support) \
        + max(abs(l) for l in lam) + 2
    sat = hi + 1  # saturation bucket: any valuation >= sat acts like BIG

    def axis(lo):
        vals = [(v, _shell_measure(v, q)) for v in range(lo, sat)]
        vals.append((BIG, _ball_measure(sat, q)))
        return vals

    total = Fraction(0)
    for a, ma in axis(a_lo):
        for c, mc in axis(c_lo):
            s = a + c if a != BIG and c != BIG else BIG
            for b, mb in axis(b_lo):
                # joint cases for w = v(xz - y); each case carries the
                # measure of the y-set {v(y) = b, v(xz - y) = w}
                if b == s and s != BIG:
                    # ultrametric tie: w >= b, distributed over shells
                    tie = (_ball_measure(b, q) * (1 - Fraction(2, q))
                           if q > 2 else Fraction(0))
                    w_cases = [(b, tie)]
                    for w in range(b + 1, sat):
                        w_cases.append((w, _shell_measure(w, q)))
                    w_cases.append((BIG, _ball_measure(sat, q)))
                else:
                    # w is forced to min(s, b); measure is that of the shell
                    w_cases = [(min(s, b), mb)]
                for w, mw in w_cases:
                    measure = ma * mc * mw
                    d1 = min(lam[0], lam[1], lam[2],
                             _sat_add(lam[0], a), _sat_add(lam[0], b),
                             _sat_add(lam[1], c))
                    d12 = min(lam[0] + lam[1],
                              _sat_add(lam[0] + lam[1], c),
                              _sat_add(lam[0] + lam[1], w),
                              lam[0] + lam[2],
                              _sat_add(lam[0] + lam[2], a),
                              lam[1] + lam[2])
                    divisors = (d1, d12 - d1, sum(lam) - d12)
                    for mu, coeff_weight in support:
                        if divisors == tuple(sorted(mu)):
                            total += coeff_weight * measure
    return total


def _sat_add(x, y):
    return BIG if (x >= BIG or y >= BIG) else x + y


def satake_transform(f, box_bound=None, enable_rank3=False):
    """The transform f -> f-hat on the box |lam_i| <= bound.

    Each value is delta^{1/2}(p^lam) times the exact unipotent integral;
    the result is checked Weyl-invariant before being returned.
    """
    n, q = f.n, f.q
    if n == 3 and not enable_rank3:
        raise UnsupportedRank("rank 3 transform is behind the feature gate")
    if n not in (1, 2, 3):
        raise UnsupportedRank(f"rank {n} not supported")
    b = f.bound() if box_bound is None else box_bound
    coeffs = {}
    for lam in itertools.product(range(-b, b + 1), repeat=n):
        if n == 1:
            val = f.support.get(lam)
            if val is not None:
                coeffs[lam] = val
            continue
        # per-mu so each coefficient of f weighs its own integral
        acc = HalfPowerLaurent(q)
        for mu in f.support:
            single = [(mu, Fraction(1))]
            part = (_integral_gl2(lam, single, q) if n == 2
                    else _integral_gl3(lam, single, q))
            if part:
                acc = acc + f.support[mu] * part
        if not acc.is_zero():
            half = HalfPowerLaurent.v_power(
                q, modulus_delta_exponent(lam, n))
            coeffs[lam] = half * acc
    image = SatakeImage(n, q, coeffs)
    if not image.weyl_invariant():
        raise ArithmeticError("transform produced a non-invariant image")
    return image


def satake_by_coset_count(f, box_bound=None, precision=24):
    """Independent oracle: f-hat(lam) = delta^{1/2} * #{i : p^-lam g_i in
    N(F) * GL_n(O)}, using the coset decomposition directly."""
    n, q = f.n, f.q
    b = f.bound() if box_bound is None else box_bound
    coeffs = {}
    for lam in itertools.product(range(-b, b + 1), repeat=n):
        acc = HalfPowerLaurent(q)
        t_inv = _diag_p_power(tuple(-c for c in lam), f.p)
        for mu, cmu in f.support.items():
            count = 0
            for g in coset_decompose(mu, n, f.p, precision):
                h = _mat_mul_fr(t_inv, g)
                if _in_unipotent_times_k(h, f.p):
                    count += 1
            if count:
                acc = acc + cmu * count
        if not acc.is_zero():
            half = HalfPowerLaurent.v_power(q, modulus_delta_exponent(lam, n))
            coeffs[lam] = half * acc
    return SatakeImage(n, q, coeffs)


def _in_unipotent_times_k(rows, p):
    """h in N(F) * GL_n(O): column reduction leaves unit diagonal."""
    n = len(rows)
    work = [list(r) for r in rows]
    for i in range(n - 1, 0, -1):
        piv = None
        best = BIG
        for j in range(i + 1):
            v = vp(work[i][j], p)
            if v < best:
                best, piv = v, j
        if best >= BIG:
            return False
        if piv != i:
            for r in range(n):
                work[r][piv], work[r][i] = work[r][i], work[r][piv]
        for j in range(i):
            if work[i][j] == 0:
                continue
            cfac = -work[i][j] / work[i][i]
            if vp(cfac, p) < 0:
                return False
            for r in range(n):
                work[r][j] += cfac * work[r][i]
    # h = b * k with b the left factor; h in N K iff all of b's diagonal
    # valuations vanish
    return all(vp(work[i][i], p) == 0 for i in range(n))


# ---------------------------------------------------------------------------
# evaluation characters

def chi_t(image, tvals):
    """Substitute e_lam -> prod t_i^lam_i; returns a sympy expression in
    the entries of t and the formal square root v of q."""
    import sympy

    if any(t == 0 for t in tvals):
        raise ZeroEntry("torus values must be nonzero")
    v = sympy.Symbol("v")
    acc = sympy.Integer(0)
    for lam, c in image.coeffs.items():
        coeff = sympy.Rational(c.a) + sympy.Rational(c.b) * v
        mono = sympy.Integer(1)
        for t, e in zip(tvals, lam):
            mono *= sympy.sympify(t)**e
        acc += coeff * mono
    return sympy.expand(acc)


# ---------------------------------------------------------------------------
# the rank-1 twisted algebra

class UnitCharacter:
    """Character of O_K^* / (1 + P^c) for c in {0, 1}.

    c = 0 is the trivial character; c = 1 takes a residue field and an
    exponent k, acting as zeta^(k * dlog u) on units.
    """

    def __init__(self, conductor=0, field=None, exponent=0):
        if conductor not in (0, 1):
            raise ValueError("only conductors 0 and 1 are supported")
        self.conductor = conductor
        self.field = field
        self.exponent = exponent
        if conductor == 1:
            if field is None:
                raise ValueError("conductor-1 characters need a residue field")
            self.order = field.q - 1
            self._dlog = self._discrete_log_table()

    def _discrete_log_table(self):
        gen = None
        for a in sorted(self.field.units(), key=lambda e: e.coeffs):
            seen = set()
            cur = a
            for _ in range(self.order):
                seen.add(cur)
                cur = cur * a
            if len(seen) == self.order:
                gen = a
                break
        table = {}
        cur = self.field.one()
        for k in range(self.order):
            table[cur] = k
            cur = cur * gen
        return table

    def value_exponent(self, u):
        """phi(u) as an exponent of the primitive (q-1)-th root of unity."""
        if self.conductor == 0:
            return 0
        return (self.exponent * self._dlog[u]) % self.order

    def value(self, u):
        import sympy
        if self.conductor == 0:
            return sympy.Integer(1)
        k = self.value_exponent(u)
        return sympy.exp(2 * sympy.pi * sympy.I * k / self.order)

    def __eq__(self, other):
        return (isinstance(other, UnitCharacter)
                and self.conductor == other.conductor
                and self.exponent == getattr(other, "exponent", None)
                and self.field == other.field)


class Gl1TwistedElement:
    """Finitely supported combination of the twisted shell indicators 1_m."""

    def __init__(self, phi, support=None):
        import sympy
        self.phi = phi
        self.support = {}
        if support:
            for m, c in support.items():
                c = sympy.sympify(c)
                if c != 0:
                    self.support[int(m)] = c

    @classmethod
    def basis(cls, m, phi):
        return cls(phi, {m: 1})

    def __eq__(self, other):
        return (isinstance(other, Gl1TwistedElement)
                and self.phi == other.phi and self.support == other.support)

    def __repr__(self):
        return f"Gl1TwistedElement({dict(sorted(self.support.items()))})"


def gl1_twisted_convolve(f, g):
    """1_a * 1_b = 1_{a+b} with vol(O^*) = 1; the twist cancels in the
    convolution integrand."""
    import sympy
    if f.phi != g.phi:
        raise CharacterMismatch("cannot convolve across different twists")
    out = {}
    for a, ca in f.support.items():
        for b, cb in g.support.items():
            out[a + b] = sympy.expand(out.get(a + b, 0) + ca * cb)
    return Gl1TwistedElement(f.phi, out)


def gl1_convolution_by_finite_sum(f, g):
    """Oracle: evaluate (f * g)(p^s w) by the level-1 finite model of K^*.

    Elements are (valuation, unit residue); each unit residue class has
    measure 1/(q - 1).  Returns the support dict recovered from the
    evaluations, which must match the algebraic convolution.
    """
    import sympy
    phi = f.phi
    if phi.conductor == 0:
        units = [None]
        measure = sympy.Integer(1)

        def fval(func, m, u):
            return func.support.get(m, sympy.Integer(0))
    else:
        units = list(phi.field.units())
        measure = sympy.Rational(1, len(units))

        def fval(func, m, u):
            return func.support.get(m, sympy.Integer(0)) / phi.value(u)

    lo = min(list(f.support) + [0]) + min(list(g.support) + [0]) - 1
    hi = max(list(f.support) + [0]) + max(list(g.support) + [0]) + 1
    out = {}
    for s in range(lo, hi + 1):
        # evaluate at z = p^s * 1
        acc = sympy.Integer(0)
        for a in sorted(f.support):
            for u in units:
                lhs = fval(f, a, u)
                if lhs == 0:
                    continue
                if phi.conductor == 0:
                    rhs = fval(g, s - a, None)
                else:
                    rhs = fval(g, s - a, u.inverse())
                acc += measure * lhs * rhs
        acc = sympy.simplify(acc)
        if acc != 0:
            out[s] = sympy.expand(acc)
    return out
