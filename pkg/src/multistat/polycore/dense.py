"""Dense univariate helpers over Q.

Coefficient lists are low-degree first (``c[i]`` multiplies ``x**i``) and hold
``int`` or ``Fraction`` values.  These back the certified root machinery, where
MultiPoly overhead would dominate.
"""

import math
from fractions import Fraction
from functools import reduce

from multistat.exactnum import normalize


def trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def degree(c):
    return len(c) - 1


def derivative(c):
    return [c[i] * i for i in range(1, len(c))]


def primitive_int(c):
    """Scale to coprime integers with a positive leading coefficient."""
    c = trim(c)
    if not c:
        return []
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(x).denominator for x in c), 1)
    ints = [int(Fraction(x) * den) for x in c]
    g = reduce(math.gcd, ints)
    if ints[-1] < 0:
        g = -g
    return [x // g for x in ints]


def monic(c):
    c = trim(c)
    if not c:
        return []
    lc = Fraction(c[-1])
    return [normalize(Fraction(x) / lc) for x in c]


def eval_exact(c, x):
    """Exact value at a rational point (homogenized integer Horner)."""
    if not c:
        return 0
    if isinstance(x, int):
        acc = 0
        for a in reversed(c):
            acc = acc * x + a
        return acc
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    if all(isinstance(a, int) for a in c):
        acc = 0
        qpow = 1
        n = len(c) - 1
        # sum a_i p^i q^(n-i), then divide by q^n
        for a in reversed(c):
            acc = acc * p + a * qpow
            qpow *= q
        return Fraction(acc, q ** n)
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def sign_at(c, x):
    """Sign of the polynomial at a rational point; cheap for integer coefficients."""
    if not c:
        return 0
    if isinstance(x, int):
        v = eval_exact(c, x)
        return (v > 0) - (v < 0)
    x = Fraction(x)
    if all(isinstance(a, int) for a in c):
        p, q = x.numerator, x.denominator
        acc = 0
        qpow = 1
        for a in reversed(c):
            acc = acc * p + a * qpow
            qpow *= q
        return (acc > 0) - (acc < 0)
    v = eval_exact(c, x)
    return (v > 0) - (v < 0)


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a, k):
    return trim([x * k for x in a])


def divmod_field(a, b):
    """Quotient and remainder over Q."""
    a = [Fraction(x) for x in trim(a)]
    b = trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    lb = Fraction(b[-1])
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        t = a[-1] / lb
        q[k] = t
        for i, y in enumerate(b):
            a[i + k] -= t * y
        a = trim(a)
    return [normalize(x) for x in trim(q)], [normalize(x) for x in a]


def prem_int(a, b):
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b`` over Z."""
    a = trim(a)
    b = trim(b)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - 1 - db + 1
    while a and len(a) - 1 >= db:
        k = len(a) - 1 - db
        la = a[-1]
        a = [lb * x for x in a]
        for i, y in enumerate(b):
            a[i + k] -= la * y
        a = trim(a)
        e -= 1
    if e > 0:
        f = lb ** e
        a = [f * x for x in a]
    return a


def gcd(a, b):
    """Monic gcd over Q; ``gcd(p, 0) = monic(p)``."""
    a = primitive_int(a)
    b = primitive_int(b)
    while b:
        r = prem_int(a, b)
        a, b = b, primitive_int(r)
    return monic(a)


def exact_quotient(a, b):
    q, r = divmod_field(a, b)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def squarefree_part(c):
    c = trim(c)
    if not c:
        raise ValueError("zero polynomial has no squarefree part")
    if len(c) <= 2:
        return primitive_int(c)
    g = gcd(c, derivative(c))
    if len(g) == 1:
        return primitive_int(c)
    return primitive_int(exact_quotient(c, g))


def sign_variations(seq):
    last = 0
    count = 0
    for x in seq:
        if x:
            s = 1 if x > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


def taylor_shift(c, a):
    """Coefficients of ``p(x + a)`` (integer ``a`` keeps integer coefficients)."""
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]
    return c


def cauchy_bound(c):
    """Rational bound ``B`` with every real root in ``(-B, B)``."""
    c = trim(c)
    lc = abs(Fraction(c[-1]))
    m = max((abs(Fraction(x)) for x in c[:-1]), default=0)
    return math.floor(1 + m / lc) + 1


def squarefree_decomposition(c):
    """Yun's algorithm: ``[(factor, multiplicity), ...]`` with primitive integer factors.

    The product of ``factor**multiplicity`` equals ``c`` up to a rational scalar.
    """
    c = trim(c)
    if not c:
        raise ValueError("zero polynomial has no squarefree decomposition")
    out = []
    a = primitive_int(c)
    if len(a) == 1:
        return out
    d = derivative(a)
    g = gcd(a, d)
    b = exact_quotient(a, g)
    cc = exact_quotient(d, g)
    dd = sub(cc, derivative(b))
    i = 1
    while len(b) > 1:
        y = gcd(b, dd)
        if len(y) > 1:
            out.append((primitive_int(y), i))
        b = exact_quotient(b, y)
        cc = exact_quotient(dd, y)
        dd = sub(cc, derivative(b))
        i += 1
    return out
