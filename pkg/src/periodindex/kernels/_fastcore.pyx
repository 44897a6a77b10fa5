# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: same semantics as periodindex.kernels.pure, C speed.

Only the F_p hot paths live here; the F_{p^2} helpers are cheap enough in
Python and are shared from the pure module by the kernels package.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memset


cdef inline long long powmod(long long base, long long e, long long m):
    cdef long long r = 1
    base %= m
    while e:
        if e & 1:
            r = (r * base) % m
        base = (base * base) % m
        e >>= 1
    return r


def count_points_fp(long long p, long long c3, long long c2, long long c1, long long c0):
    """Number of projective points on y^2 = c3 x^3 + c2 x^2 + c1 x + c0 over F_p."""
    if p < 3:
        raise ValueError("odd prime required")
    cdef unsigned char *nsol = <unsigned char *> malloc(p)
    if nsol == NULL:
        raise MemoryError()
    memset(nsol, 0, p)
    cdef long long y, x, t, total
    for y in range(p):
        nsol[(y * y) % p] += 1
    c3 %= p; c2 %= p; c1 %= p; c0 %= p
    total = 1
    for x in range(p):
        t = (c3 * x + c2) % p
        t = (t * x + c1) % p
        t = (t * x + c0) % p
        total += nsol[t]
    free(nsol)
    return total


cdef struct Pt:
    long long x
    long long y
    int inf


cdef inline Pt pt_add(Pt P, Pt Q, long long A, long long p):
    cdef Pt R
    cdef long long lam, x3, y3
    if P.inf:
        return Q
    if Q.inf:
        return P
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            R.inf = 1
            R.x = 0; R.y = 0
            return R
        lam = ((3 * ((P.x * P.x) % p) + A) % p) * powmod((2 * P.y) % p, p - 2, p) % p
    else:
        lam = ((Q.y - P.y) % p + p) % p * powmod(((Q.x - P.x) % p + p) % p, p - 2, p) % p
    x3 = ((lam * lam) % p - P.x - Q.x) % p
    x3 = (x3 + p) % p
    y3 = (lam * ((P.x - x3 + p) % p)) % p
    y3 = (y3 - P.y + p) % p
    R.inf = 0
    R.x = x3
    R.y = y3
    return R


cdef inline int mul_is_zero(long long k, Pt P, long long A, long long p):
    cdef Pt R
    R.inf = 1; R.x = 0; R.y = 0
    while k:
        if k & 1:
            R = pt_add(R, P, A, p)
        P = pt_add(P, P, A, p)
        k >>= 1
    return R.inf


def torsion_count_fp(long long p, long long A, long long B, long long m):
    """#E[m](F_p) for E: y^2 = x^3 + Ax + B, by enumerating all points."""
    A = (A % p + p) % p
    B = (B % p + p) % p
    cdef long long *root = <long long *> malloc(p * sizeof(long long))
    if root == NULL:
        raise MemoryError()
    cdef long long y, x, t, count
    for x in range(p):
        root[x] = -1
    for y in range(p):
        root[(y * y) % p] = y
    count = 1
    cdef Pt P
    for x in range(p):
        t = ((x * x) % p * x + A * x + B) % p
        if t == 0:
            P.inf = 0; P.x = x; P.y = 0
            if mul_is_zero(m, P, A, p):
                count += 1
        else:
            y = root[t]
            if y < 0:
                continue
            P.inf = 0; P.x = x; P.y = y
            if mul_is_zero(m, P, A, p):
                count += 1
            P.y = p - y
            if mul_is_zero(m, P, A, p):
                count += 1
    free(root)
    return count


# ---------------------------------------------------------------------------
# Conic searches (see pure.py for the Hensel bookkeeping that makes the
# three unit-normalized slot scans a complete decision procedure).

_SQ3_TABLE = {}
_SQ3_LIMIT = 150


def _sq3(p):
    tab = _SQ3_TABLE.get(p)
    if tab is None:
        tab = bytearray(p ** 3)
        _fill_squares(tab, p ** 3)
        _SQ3_TABLE[p] = tab
    return tab


def _fill_squares(unsigned char[::1] tab, long long m):
    cdef long long z
    for z in range(m):
        tab[(z * z) % m] = 1


cdef inline int legendre_is_sq(long long u, long long p):
    return powmod(u % p, (p - 1) >> 1, p) == 1


cdef inline int is_square_mod_p3(long long t, long long p):
    if t == 0:
        return 1
    if t % p:
        return legendre_is_sq(t, p)
    t = t / p
    if t % p:
        return 0
    return legendre_is_sq(t / p, p)


def conic_solvable_odd(long long a, long long b, long long p):
    """Primitive liftable solution of z^2 = a x^2 + b y^2 mod p^3 (odd p)?"""
    if a % p == 0 and (a / p) % p == 0:
        raise ValueError("a must be squarefree at p")
    if b % p == 0 and (b / p) % p == 0:
        raise ValueError("b must be squarefree at p")
    cdef long long m = p * p * p
    a = (a % m + m) % m
    b = (b % m + m) % m
    cdef long long x, y, w, c, p2
    cdef unsigned char[::1] sq
    cdef unsigned char *bset
    if p <= _SQ3_LIMIT:
        sq = _sq3(p)
        for y in range(m):
            if sq[(a + b * ((y * y) % m)) % m]:
                return True
        for x in range(m):
            if sq[(a * ((x * x) % m) + b) % m]:
                return True
        bset = <unsigned char *> malloc(m)
        if bset == NULL:
            raise MemoryError()
        memset(bset, 0, m)
        for y in range(m):
            bset[(b * ((y * y) % m)) % m] = 1
        for x in range(m):
            if bset[(1 - a * ((x * x) % m) % m + m) % m]:
                free(bset)
                return True
        free(bset)
        return False
    for y in range(m):
        if is_square_mod_p3((a + b * ((y * y) % m)) % m, p):
            return True
    for x in range(m):
        if is_square_mod_p3((a * ((x * x) % m) + b) % m, p):
            return True
    cdef long long binv = 0
    cdef int b_unit = (b % p != 0)
    if b_unit:
        binv = powmod(b, p * p * (p - 1) - 1, m)
    p2 = p * p
    cdef long long bred = 0
    if not b_unit:
        bred = powmod(b / p, p * (p - 1) - 1, p2)
    for x in range(m):
        w = (1 - a * ((x * x) % m) % m + m) % m
        if b_unit:
            if is_square_mod_p3((w * binv) % m, p):
                return True
        elif w % p == 0:
            c = ((w / p) * bred) % p2
            if c == 0 or (c % p and legendre_is_sq(c, p)):
                return True
    return False


def conic_solvable_two(long long a, long long b):
    """Primitive liftable solution of z^2 = a x^2 + b y^2 mod 2^6?"""
    if a % 4 == 0 or b % 4 == 0:
        raise ValueError("a, b must be squarefree at 2")
    cdef long long m = 64
    a = (a % m + m) % m
    b = (b % m + m) % m
    cdef unsigned char sq[64]
    cdef unsigned char bset[64]
    cdef long long x, y
    memset(sq, 0, 64)
    memset(bset, 0, 64)
    for y in range(m):
        sq[(y * y) % m] = 1
        bset[(b * y * y) % m] = 1
    for y in range(m):
        if sq[(a + b * y * y) % m]:
            return True
    for x in range(m):
        if sq[(a * x * x + b) % m]:
            return True
    for x in range(m):
        if bset[((1 - a * x * x) % m + m) % m]:
            return True
    return False
