"""Polynomial programs and univariate polynomial utilities.

Multivariate polynomials are handled in two representations.  Dense
symbolic expansion is avoided everywhere it would blow up; instead a
``PolyProgram`` is a straight-line program (a small DAG of arithmetic
nodes, plus determinant and Pfaffian nodes) that can be *evaluated* over
any coefficient ring from ``fieldcore`` -- the prime field, or a dual
extension when derivatives are needed.  Gradients run as a single
reverse sweep over the DAG; Hessian-times-vector products evaluate the
gradient over the dual extension and read off the slope.

``SparsePoly`` is the explicit dict-of-monomials form, used only where
coefficients themselves are the object of interest (recovered divisors,
small quadrics).

Univariate polynomials over F_p are plain ascending coefficient lists.
"""

from __future__ import annotations

from .fieldcore import (
    Fp,
    dual_embed,
    dual_over,
    dual_parts,
    lagrange_interpolate,
    matmul,
)


class CharTooSmall(ArithmeticError):
    """Field characteristic too small for a degree-sensitive routine."""


# --- straight-line programs ---------------------------------------------------


class Expr:
    """Handle to a node inside a ProgramBuilder; supports + - * ** and -x."""

    __slots__ = ("b", "i")

    def __init__(self, builder: "ProgramBuilder", node_id: int):
        self.b = builder
        self.i = node_id

    def _coerce(self, other):
        if isinstance(other, Expr):
            if other.b is not self.b:
                raise ValueError("mixing expressions from different builders")
            return other
        if isinstance(other, int):
            return self.b.c(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.b._add((self.i, o.i))

    __radd__ = __add__

    def __neg__(self):
        return self.b._mul((self.b.c(-1).i, self.i))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.b._add((self.i, (-o).i))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.b._mul((self.i, o.i))

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        if e == 0:
            return self.b.c(1)
        if e == 1:
            return self
        return self.b._node(("pow", self.i, e), self.b.degs[self.i] * e)


class ProgramBuilder:
    """Hash-consing builder for PolyProgram DAGs on a fixed variable count."""

    def __init__(self, arity: int):
        self.arity = arity
        self.nodes = []
        self.degs = []
        self._memo = {}

    def _node(self, node, deg) -> Expr:
        nid = self._memo.get(node)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(node)
            self.degs.append(deg)
            self._memo[node] = nid
        return Expr(self, nid)

    def x(self, i: int) -> Expr:
        if not 0 <= i < self.arity:
            raise IndexError(f"variable index {i} out of range")
        return self._node(("var", i), 1)

    def c(self, v: int) -> Expr:
        return self._node(("const", v), 0)

    def _add(self, ids) -> Expr:
        return self._node(("add", ids), max(self.degs[i] for i in ids))

    def _mul(self, ids) -> Expr:
        return self._node(("mul", ids), sum(self.degs[i] for i in ids))

    def add_many(self, exprs) -> Expr:
        exprs = list(exprs)
        if not exprs:
            return self.c(0)
        if len(exprs) == 1:
            return exprs[0]
        return self._add(tuple(e.i for e in exprs))

    def mul_many(self, exprs) -> Expr:
        exprs = list(exprs)
        if not exprs:
            return self.c(1)
        if len(exprs) == 1:
            return exprs[0]
        return self._mul(tuple(e.i for e in exprs))

    def det(self, grid) -> Expr:
        """Determinant node over an n x n grid of expressions."""
        n = len(grid)
        ids = []
        for row in grid:
            if len(row) != n:
                raise ValueError("determinant grid must be square")
            ids.extend(e.i for e in row)
        deg = sum(max(self.degs[e.i] for e in row) for row in grid)
        return self._node(("det", n, tuple(ids)), deg)

    def pf(self, upper) -> Expr:
        """Pfaffian node from the upper triangle of a skew matrix.

        ``upper[i]`` holds the entries (i, i+1), ..., (i, n-1); the full
        matrix never materializes.
        """
        upper = list(upper)
        while upper and not upper[-1]:
            upper.pop()
        n = len(upper) + 1
        if n % 2:
            raise ValueError("Pfaffian needs even size")
        ids = []
        for i, row in enumerate(upper):
            if len(row) != n - 1 - i:
                raise ValueError("ragged upper triangle")
            ids.extend(e.i for e in row)
        deg = (n // 2) * max((self.degs[i] for i in ids), default=0)
        return self._node(("pf", n, tuple(ids)), deg)

    def build(self, root: Expr) -> "PolyProgram":
        if root.b is not self:
            raise ValueError("root from a different builder")
        return PolyProgram(self.arity, tuple(self.nodes), root.i,
                           self.degs[root.i])


class PolyProgram:
    """Immutable straight-line polynomial program.

    ``degree`` is an upper bound on the total degree; it is exact for
    the homogeneous constructions used throughout (determinants and
    Pfaffians of matrices with equal-degree entries, products, powers).
    """

    __slots__ = ("arity", "nodes", "root", "degree")

    def __init__(self, arity, nodes, root, degree):
        self.arity = arity
        self.nodes = nodes
        self.root = root
        self.degree = degree

    def _forward(self, x, ring):
        vals = [None] * len(self.nodes)
        lift, add, mul = ring.lift, ring.add, ring.mul
        for nid, node in enumerate(self.nodes):
            k = node[0]
            if k == "var":
                vals[nid] = x[node[1]]
            elif k == "const":
                vals[nid] = lift(node[1])
            elif k == "add":
                acc = vals[node[1][0]]
                for c in node[1][1:]:
                    acc = add(acc, vals[c])
                vals[nid] = acc
            elif k == "mul":
                acc = vals[node[1][0]]
                for c in node[1][1:]:
                    acc = mul(acc, vals[c])
                vals[nid] = acc
            elif k == "pow":
                vals[nid] = _ring_pow(vals[node[1]], node[2], ring)
            elif k == "det":
                n, ids = node[1], node[2]
                mat = [[vals[ids[i * n + j]] for j in range(n)]
                       for i in range(n)]
                vals[nid] = det_ring(mat, ring)
            else:  # "pf"
                n, ids = node[1], node[2]
                vals[nid] = _pf_from_flat(ids, vals, n, ring)
        return vals

    def eval(self, x, ring):
        return self._forward(x, ring)[self.root]

    def grad(self, x, ring):
        """Gradient at x via one reverse sweep."""
        vals = self._forward(x, ring)
        nn = len(self.nodes)
        adj = [ring.zero] * nn
        adj[self.root] = ring.one
        out = [ring.zero] * self.arity
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        for nid in range(nn - 1, -1, -1):
            a = adj[nid]
            if is_zero(a):
                continue
            node = self.nodes[nid]
            k = node[0]
            if k == "var":
                out[node[1]] = add(out[node[1]], a)
            elif k == "const":
                pass
            elif k == "add":
                for c in node[1]:
                    adj[c] = add(adj[c], a)
            elif k == "mul":
                ids = node[1]
                m = len(ids)
                pre = [ring.one] * (m + 1)
                for i in range(m):
                    pre[i + 1] = mul(pre[i], vals[ids[i]])
                suf = ring.one
                for i in range(m - 1, -1, -1):
                    adj[ids[i]] = add(adj[ids[i]], mul(a, mul(pre[i], suf)))
                    suf = mul(suf, vals[ids[i]])
            elif k == "pow":
                c, e = node[1], node[2]
                d = mul(ring.lift(e), _ring_pow(vals[c], e - 1, ring))
                adj[c] = add(adj[c], mul(a, d))
            elif k == "det":
                n, ids = node[1], node[2]
                mat = [[vals[ids[i * n + j]] for j in range(n)]
                       for i in range(n)]
                adt = adjugate_ring(mat, ring)
                for i in range(n):
                    for j in range(n):
                        cof = adt[j][i]
                        if not is_zero(cof):
                            t = ids[i * n + j]
                            adj[t] = add(adj[t], mul(a, cof))
            else:  # "pf"
                n, ids = node[1], node[2]
                for pos, cof in _pf_cofactors(ids, vals, n, ring):
                    t = ids[pos]
                    adj[t] = add(adj[t], mul(a, cof))
        return out

    def hess_vec(self, x, v, ring):
        """Hessian-vector product H(x) v, exact over F_p or a dual ring."""
        dring = dual_over(ring)
        eps = dring.eps
        pt = [dring.add(dual_embed(ring, dring, xi),
                        dring.mul(eps, dual_embed(ring, dring, vi)))
              for xi, vi in zip(x, v)]
        g = self.grad(pt, dring)
        return [dual_parts(ring, gi)[1] for gi in g]


def _ring_pow(v, e, ring):
    if e == 0:
        return ring.one
    acc = None
    base = v
    while e:
        if e & 1:
            acc = base if acc is None else ring.mul(acc, base)
        e >>= 1
        if e:
            base = ring.mul(base, base)
    return acc


def _grad_forward(prog, x, ring):
    """Per-coordinate forward-mode gradient; reference oracle for grad()."""
    dring = dual_over(ring)
    eps = dring.eps
    base = [dual_embed(ring, dring, xi) for xi in x]
    out = []
    for i in range(prog.arity):
        pt = list(base)
        pt[i] = dring.add(pt[i], eps)
        out.append(dual_parts(ring, prog.eval(pt, dring))[1])
    return out


# --- determinant / Pfaffian value kernels -------------------------------------


def det_ring(mat, ring):
    """Determinant over an arbitrary commutative ring.

    Over F_p plain elimination is used; otherwise a division-free
    column-by-column subset DP (O(n^2 2^n), fine for the small sizes
    that occur inside programs).
    """
    n = len(mat)
    if n == 0:
        return ring.one
    if n == 1:
        return mat[0][0]
    if isinstance(ring, Fp):
        return _det_field(mat, ring)
    add, mul, is_zero = ring.add, ring.mul, ring.is_zero
    neg = ring.neg
    states = {0: ring.one}
    for j in range(n):
        nxt = {}
        for mask, val in states.items():
            parity = 0
            for i in range(n):
                bit = 1 << i
                if mask & bit:
                    parity ^= 1
                    continue
                a = mat[i][j]
                if is_zero(a):
                    continue
                term = mul(val, a)
                if parity:
                    term = neg(term)
                key = mask | bit
                cur = nxt.get(key)
                nxt[key] = term if cur is None else add(cur, term)
        states = nxt
        if not states:
            return ring.zero
    return states.get((1 << n) - 1, ring.zero)


def _det_field(mat, fp):
    p = fp.p
    a = [row[:] for row in mat]
    n = len(a)
    det = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if a[i][c] % p:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv % p
        ipiv = pow(piv, -1, p)
        for i in range(c + 1, n):
            f = a[i][c] * ipiv % p
            if f:
                ri, rc = a[i], a[c]
                for j in range(c, n):
                    ri[j] = (ri[j] - f * rc[j]) % p
    return det % p


def trace_ring(mat, ring):
    acc = ring.zero
    for i in range(len(mat)):
        acc = ring.add(acc, mat[i][i])
    return acc


def adjugate_ring(mat, ring):
    """Adjugate matrix (transpose of cofactors) via the Faddeev-LeVerrier
    recurrence; divisions touch only the integers 2..n-1."""
    n = len(mat)
    if n == 1:
        return [[ring.one]]
    m_prev = [[ring.one if i == j else ring.zero for j in range(n)]
              for i in range(n)]
    c_prev = ring.neg(trace_ring(mat, ring))
    for k in range(2, n + 1):
        mk = matmul(mat, m_prev, ring)
        for i in range(n):
            mk[i][i] = ring.add(mk[i][i], c_prev)
        if k == n:
            m_prev = mk
            break
        amk = matmul(mat, mk, ring)
        kinv = ring.lift(pow(k, -1, ring.p))
        c_prev = ring.neg(ring.mul(kinv, trace_ring(amk, ring)))
        m_prev = mk
    if n % 2 == 0:
        return [[ring.neg(v) for v in row] for row in m_prev]
    return m_prev


def _upper_pos(i, j, n):
    # flat index of entry (i, j), i < j, in row-major upper triangle
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _pf_rec(idx, entry, ring, memo):
    """Pfaffian over the sorted index tuple ``idx`` (division-free)."""
    if not idx:
        return ring.one
    got = memo.get(idx)
    if got is not None:
        return got
    i0 = idx[0]
    rest = idx[1:]
    acc = ring.zero
    sign = False
    for t, j in enumerate(rest):
        a = entry(i0, j)
        if not ring.is_zero(a):
            sub = _pf_rec(rest[:t] + rest[t + 1:], entry, ring, memo)
            term = ring.mul(a, sub)
            acc = ring.add(acc, ring.neg(term) if sign else term)
        sign = not sign
    memo[idx] = acc
    return acc


def _pf_from_flat(ids, vals, n, ring):
    def entry(i, j):
        return vals[ids[_upper_pos(i, j, n)]]

    return _pf_rec(tuple(range(n)), entry, ring, {})


def _pf_cofactors(ids, vals, n, ring):
    """Partials of the Pfaffian w.r.t. each upper entry.

    d Pf / d a_ij = (-1)^(i+j+1) Pf(matrix with rows/cols i, j removed);
    sub-Pfaffians share one memo table.
    """

    def entry(i, j):
        return vals[ids[_upper_pos(i, j, n)]]

    memo = {}
    full = tuple(range(n))
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            sub_idx = tuple(t for t in full if t != i and t != j)
            cof = _pf_rec(sub_idx, entry, ring, memo)
            if (i + j) % 2 == 0:  # sign (-1)^(i+j+1)
                cof = ring.neg(cof)
            if not ring.is_zero(cof):
                out.append((_upper_pos(i, j, n), cof))
    return out


# --- sparse multivariate polynomials ------------------------------------------


class SparsePoly:
    """Explicit multivariate polynomial: exponent tuple -> integer coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def eval(self, x, ring):
        acc = ring.zero
        for e, c in self.terms.items():
            t = ring.lift(c)
            for xi, ei in zip(x, e):
                if ei:
                    t = ring.mul(t, _ring_pow(xi, ei, ring))
            acc = ring.add(acc, t)
        return acc

    def partial(self, i: int) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = out.get(ne, 0) + c * e[i]
        return SparsePoly(self.nvars, out)

    def scale(self, k: int) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: c * k for e, c in self.terms.items()})

    def add(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePoly(self.nvars, out)

    def mul(self, other: "SparsePoly") -> "SparsePoly":
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(self.nvars, out)

    def reduce(self, p: int) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: c % p for e, c in self.terms.items()})

    def compile(self) -> PolyProgram:
        b = ProgramBuilder(self.nvars)
        parts = []
        for e, c in sorted(self.terms.items()):
            factors = [b.c(c)] if c != 1 else []
            for i, ei in enumerate(e):
                if ei:
                    factors.append(b.x(i) ** ei if ei > 1 else b.x(i))
            if not factors:
                factors = [b.c(c)]
            parts.append(b.mul_many(factors))
        return b.build(b.add_many(parts))


# --- univariate polynomials over F_p (ascending coefficient lists) -----------


def up_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def up_deg(f) -> int:
    return len(f) - 1


def up_add(f, g, fp):
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
           for i in range(n)]
    return up_trim([v % fp.p for v in out])


def up_sub(f, g, fp):
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
           for i in range(n)]
    return up_trim([v % fp.p for v in out])


def up_scale(f, k, fp):
    return up_trim([v * k % fp.p for v in f])


def up_mul(f, g, fp):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return up_trim([v % fp.p for v in out])


def up_eval(f, x, fp):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % fp.p
    return acc


def up_monic(f, fp):
    if not f:
        return []
    return up_scale(f, fp.inv(f[-1]), fp)


def up_divmod(f, g, fp):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    p = fp.p
    r = [v % p for v in f]
    q = [0] * max(0, len(r) - len(g) + 1)
    inv_lead = fp.inv(g[-1])
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * inv_lead % p
        if c:
            q[i - dg] = c
            for j, b in enumerate(g):
                r[i - dg + j] = (r[i - dg + j] - c * b) % p
    return up_trim(q), up_trim(r)


def up_gcd(f, g, fp):
    a, b = up_trim(list(f)), up_trim(list(g))
    while b:
        a, b = b, up_divmod(a, b, fp)[1]
    return up_monic(a, fp)


def up_deriv(f, fp):
    return up_trim([i * f[i] % fp.p for i in range(1, len(f))])


def up_mulmod(f, g, mod, fp):
    return up_divmod(up_mul(f, g, fp), mod, fp)[1]


def up_pow_mod(base, e, mod, fp):
    acc = [1]
    b = up_divmod(base, mod, fp)[1]
    while e:
        if e & 1:
            acc = up_mulmod(acc, b, mod, fp)
        b = up_mulmod(b, b, mod, fp)
        e >>= 1
    return acc


def squarefree_profile(f, fp):
    """Multiplicity profile [(m, d), ...]: distinct irreducible factors of
    multiplicity m contribute total degree d.  Yun's algorithm; requires
    p > deg f so derivatives behave."""
    f = up_trim([v % fp.p for v in f])
    d = up_deg(f)
    if d <= 0:
        return []
    if fp.p <= d:
        raise CharTooSmall(f"characteristic {fp.p} <= degree {d}")
    f = up_monic(f, fp)
    df = up_deriv(f, fp)
    a = up_gcd(f, df, fp)
    b = up_divmod(f, a, fp)[0]
    c = up_divmod(df, a, fp)[0]
    d_ = up_sub(c, up_deriv(b, fp), fp)
    out = {}
    i = 1
    while up_deg(b) > 0:
        g = up_gcd(b, d_, fp)
        dg = up_deg(g)
        if dg > 0:
            out[i] = out.get(i, 0) + dg
        b = up_divmod(b, g, fp)[0]
        c = up_divmod(d_, g, fp)[0]
        d_ = up_sub(c, up_deriv(b, fp), fp)
        i += 1
    return sorted(out.items())


def up_roots(f, fp, rng):
    """All roots of f in F_p (each once), via gcd with x^p - x and
    randomized equal-degree splitting."""
    f = up_monic(up_trim([v % fp.p for v in f]), fp)
    if up_deg(f) <= 0:
        return []
    x = [0, 1]
    xp = up_pow_mod(x, fp.p, f, fp)
    g = up_gcd(up_sub(xp, x, fp), f, fp)
    roots = []
    stack = [g]
    half = (fp.p - 1) // 2
    while stack:
        h = stack.pop()
        d = up_deg(h)
        if d <= 0:
            continue
        if d == 1:
            roots.append(fp.neg(h[0]))
            continue
        while True:
            a = rng.field(fp.p)
            probe = up_pow_mod([a, 1], half, h, fp)
            s = up_gcd(up_sub(probe, [1], fp), h, fp)
            if 0 < up_deg(s) < d:
                stack.append(s)
                stack.append(up_divmod(h, s, fp)[0])
                break
    return roots


def sqrt_mod_p(a, fp):
    """A square root of a in F_p, or None when a is a non-residue."""
    p = fp.p
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c = s, pow(z, q, p)
    t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def restrict_to_line(prog, a, b, fp):
    """Coefficients of t -> prog(a + t b), ascending; [] for the zero poly."""
    d = prog.degree
    if fp.p <= d:
        raise CharTooSmall("not enough field points for the degree")
    pts = []
    for t in range(d + 1):
        x = [(av + t * bv) % fp.p for av, bv in zip(a, b)]
        pts.append((t, prog.eval(x, fp)))
    if all(y == 0 for _, y in pts):
        return []
    return up_trim(lagrange_interpolate(pts, d, fp))
