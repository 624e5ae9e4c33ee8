"""Exact Gaussian elimination over a Field, on element indices."""


def det_inverse(field, rows, want_inverse=True):
    """Return (det, inverse) of a square matrix given as lists of element
    indices. ``inverse`` is None when the matrix is singular or not wanted."""
    n = len(rows)
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError('matrix is not square')
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_inverse else None
    sub, mul = field._sub, field._mul
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return 0, None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            if inv is not None:
                inv[col], inv[pivot] = inv[pivot], inv[col]
            det = field._neg(det)
        pv = a[col][col]
        det = mul(det, pv)
        pinv = field._inv(pv)
        a[col] = [mul(v, pinv) for v in a[col]]
        if inv is not None:
            inv[col] = [mul(v, pinv) for v in inv[col]]
        # Gauss-Jordan when the inverse is wanted, forward elimination otherwise
        targets = range(n) if inv is not None else range(col + 1, n)
        for r in targets:
            if r == col or not a[r][col]:
                continue
            c = a[r][col]
            a[r] = [sub(x, mul(c, y)) for x, y in zip(a[r], a[col])]
            if inv is not None:
                inv[r] = [sub(x, mul(c, y)) for x, y in zip(inv[r], inv[col])]
    return det, inv
