"""Polynomials over a prime field F_p as plain coefficient lists.

A polynomial a_0 + a_1 x + ... + a_n x^n is the list [a_0, ..., a_n] with
a_n != 0; the zero polynomial is []. Only what modulus search and the
circulant criterion need is provided here.
"""


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p
                 for i in range(n)])


def sub(f, g, p):
    return add(f, [(-c) % p for c in g], p)


def mul(f, g, p):
    if not f or not g:
        return []
    r = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                r[i + j] = (r[i + j] + a * b) % p
    return trim(r)


def divmod_(f, g, p):
    g = trim(g)
    if not g:
        raise ZeroDivisionError('polynomial division by zero')
    r = trim(f)
    inv_lc = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        c = r[-1] * inv_lc % p
        s = len(r) - len(g)
        q[s] = c
        for i, b in enumerate(g):
            r[s + i] = (r[s + i] - c * b) % p
        r = trim(r)
    return trim(q), r


def mod(f, g, p):
    return divmod_(f, g, p)[1]


def monic(f, p):
    f = trim(f)
    if not f:
        return f
    inv_lc = pow(f[-1], -1, p)
    return [c * inv_lc % p for c in f]


def gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def powmod(f, e, m, p):
    """f^e mod m over F_p, by square-and-multiply."""
    result = [1]
    base = mod(f, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return mod(result, m, p)


def prime_factors(n):
    fs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


def is_irreducible(f, p):
    """Rabin's test: f of degree k is irreducible over F_p iff
    x^(p^k) = x mod f and gcd(x^(p^(k/r)) - x, f) = 1 for each prime r | k."""
    f = trim(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    for r in prime_factors(k):
        h = sub(powmod(x, p ** (k // r), f, p), x, p)
        if len(gcd(h, f, p)) > 1:
            return False
    return not sub(powmod(x, p ** k, f, p), x, p)


def from_int(n, p):
    """Digits of n in base p, low-to-high."""
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return digits


def to_int(f, p):
    n = 0
    for c in reversed(f):
        n = n * p + c
    return n
