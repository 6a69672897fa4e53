"""Resultants, subresultant remainder sequences and discriminants."""

from __future__ import annotations

from multistat.polycore.multipoly import DomainError, MultiPoly, StructuralError
from multistat.polycore.unipoly import UniPoly


def _to_uni(p, var):
    if isinstance(p, UniPoly):
        if var is not None and p.variable != var:
            raise StructuralError(f"expected a polynomial in {var!r}, got one in {p.variable!r}")
        return p
    if isinstance(p, MultiPoly):
        if var is None:
            raise StructuralError("a variable is required for MultiPoly input")
        return UniPoly.from_multipoly(p, var)
    raise TypeError(f"unsupported polynomial type {type(p).__name__}")


def _unify(a, b):
    if a.params == b.params:
        return a, b
    params = tuple(dict.fromkeys(a.params + b.params))
    return a.align_params(params), b.align_params(params)


def subresultant_prs(a, b):
    """Subresultant remainder sequence of ``a`` and ``b`` (``deg a >= deg b``).

    Returns ``(chain, resultant)`` where ``chain`` starts with ``a, b`` and every
    later member lies in the ideal generated by them.  The resultant follows
    the Collins/Brown recurrences with the sign convention of the Sylvester
    determinant ``det Syl(a, b)``.
    """
    a, b = _unify(a, b)
    if a.is_zero() or b.is_zero():
        raise DomainError("resultant of a zero polynomial")
    params = a.params
    one = MultiPoly.constant(params, 1)
    s = 1
    if a.degree < b.degree:
        a, b = b, a
        if a.degree % 2 == 1 and b.degree % 2 == 1:
            s = -1
    chain = [a, b]
    A, B = a, b
    g = one
    h = one
    while True:
        if B.degree == 0:
            break
        delta = A.degree - B.degree
        if A.degree % 2 == 1 and B.degree % 2 == 1:
            s = -s
        R = A.prem(B)
        A = B
        if R.is_zero():
            B = R
            break
        B = R.exact_div_scalar(g * h ** delta)
        chain.append(B)
        g = A.leading_coefficient()
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exact_div(h ** (delta - 1))
    if B.is_zero():
        return chain, MultiPoly.zero(params)
    dA = A.degree
    if dA == 0:
        res = one
    else:
        lcb = B.leading_coefficient()
        res = (lcb ** dA).exact_div(h ** (dA - 1)) if dA > 1 else lcb
    return chain, res * s


def resultant(a, b, var=None):
    """``res_var(a, b)`` as a polynomial in the remaining parameters."""
    A = _to_uni(a, var)
    B = _to_uni(b, var)
    if A.is_zero() or B.is_zero():
        raise DomainError("resultant of a zero polynomial")
    if A.degree == 0 and B.degree == 0:
        A, B = _unify(A, B)
        return MultiPoly.constant(A.params, 1)
    if A.degree == 0:
        A, B = _unify(A, B)
        return A.leading_coefficient() ** B.degree
    if B.degree == 0:
        A, B = _unify(A, B)
        return B.leading_coefficient() ** A.degree
    return subresultant_prs(A, B)[1]


def degree_one_subresultant(a, b, var=None):
    """A member ``c1*var + c0`` of the remainder sequence, or ``None``."""
    A = _to_uni(a, var)
    B = _to_uni(b, var)
    chain, _ = subresultant_prs(A, B)
    for p in chain[2:]:
        if p.degree == 1:
            return p
    for p in chain[:2]:
        if p.degree == 1:
            return p
    return None


def discriminant(p, var=None):
    """``(-1)**(n(n-1)/2) * res(p, p') / lc(p)``."""
    P = _to_uni(p, var)
    n = P.degree
    if n < 1:
        raise DomainError("discriminant needs degree >= 1")
    if n == 1:
        return MultiPoly.constant(P.params, 1)
    r = resultant(P, P.derivative())
    r = r.exact_div(P.leading_coefficient())
    if (n * (n - 1) // 2) % 2:
        r = -r
    return r


def sylvester_matrix(a, b):
    A = _to_uni(a, None)
    B = _to_uni(b, None)
    A, B = _unify(A, B)
    m, n = A.degree, B.degree
    size = m + n
    zero = MultiPoly.zero(A.params)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(A.coeffs)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(B.coeffs)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_determinant(matrix):
    """Fraction-free determinant of a square matrix of MultiPoly entries."""
    n = len(matrix)
    if n == 0:
        raise DomainError("empty matrix")
    M = [list(r) for r in matrix]
    params = M[0][0].variables
    sign = 1
    prev = MultiPoly.constant(params, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(params)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


def sylvester_resultant(a, b, var=None):
    """Resultant as an explicit Sylvester determinant (slow reference route)."""
    A = _to_uni(a, var)
    B = _to_uni(b, var)
    if A.is_zero() or B.is_zero():
        raise DomainError("resultant of a zero polynomial")
    if A.degree == 0 and B.degree == 0:
        return MultiPoly.constant(_unify(A, B)[0].params, 1)
    return bareiss_determinant(sylvester_matrix(A, B))
