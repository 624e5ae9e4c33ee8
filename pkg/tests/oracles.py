"""Reference computations that share no code with the package under test."""


def euclid_resultant(f, g):
    """Res(f, g) by the Euclidean recurrence, on DensePolynomial inputs.

    Res(f, g) = (-1)^(nm) Res(g, f) and Res(g, f) = lc(g)^(n-k) Res(g, f mod g)
    with n = deg f, m = deg g, k = deg(f mod g); Res(f, c) = c^deg f.
    """
    F = f.field
    sign = F.one
    acc = F.one
    while True:
        n, m = f.degree, g.degree
        if m == 0:
            return sign * acc * g.coeffs[0] ** n
        if n < m:
            if (n * m) % 2:
                sign = -sign
            f, g = g, f
            continue
        r = f % g
        if r.is_zero():
            return F.zero
        # Res(f, g) = (-1)^(nm) lc(g)^(n-k) Res(g, r)
        if (n * m) % 2:
            sign = -sign
        acc = acc * g.lc ** (n - r.degree)
        f, g = g, r
