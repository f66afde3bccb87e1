"""Exact sparse arithmetic in graded polynomial rings truncated at a fixed degree.

Every computation in this package happens in a ring Q[x_1, ..., x_n] where each
variable carries a positive integer grade (its cohomological degree) and all
terms of total grade above a fixed bound ``trunc`` are silently discarded.
Coefficients are exact: Python ints where possible, fractions.Fraction
otherwise.

Representation: a monomial is packed into a single integer, 8 bits per
exponent, so that monomial multiplication is integer addition.  Terms are
bucketed by total grade, which makes truncation, homogeneous component
extraction and graded degree caps cheap.  Polynomials are immutable after
construction and all operations are pure functions; values can be shared
freely between threads.
"""

from __future__ import annotations

from fractions import Fraction

_EXP_BITS = 8
_EXP_MAX = (1 << _EXP_BITS) - 1


class ContextMismatch(TypeError):
    """Operands live in different variable contexts."""


class GradeError(ValueError):
    """A grading constraint was violated (bad truncation, binding, component)."""


class NonUnitSeries(ValueError):
    """A series whose degree-0 part is not 1 was used where a unit is required."""


class NonIntegralCoefficient(ValueError):
    """A polynomial expected to be integral has a fractional coefficient."""

    def __init__(self, monomial, value):
        self.monomial = monomial
        self.value = value
        super().__init__(f"non-integral coefficient {value} on {monomial}")


def _norm(c):
    """Collapse integral Fractions to int; keep everything else as is."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Context:
    """An ordered list of graded variables plus the truncation degree.

    ``variables`` is a sequence of (name, grade) pairs.  Variables are interned
    per context: polynomials from different contexts never mix (the nested
    base/Quot-scheme rings of the inductive algorithm make silent mixing the
    dominant bug risk, so it is a hard error).

    ``caps`` optionally bounds the total grade carried by a subset of the
    variables: a list of (variable name tuple, bound) pairs.  Terms exceeding a
    cap are discarded exactly like terms above ``trunc``.  Callers use this to
    keep only base-degree <= u coefficients alive during pushforward assembly.
    """

    __slots__ = (
        "names", "grades", "trunc", "index", "_shifts", "_caps",
        "_grade_memo", "_cap_memos",
    )

    def __init__(self, variables, trunc, caps=()):
        names = tuple(n for n, _ in variables)
        grades = tuple(int(g) for _, g in variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if any(g < 1 for g in grades):
            raise GradeError("variable grades must be >= 1")
        if not 0 <= trunc <= _EXP_MAX:
            raise GradeError(f"trunc must lie in [0, {_EXP_MAX}]")
        self.names = names
        self.grades = grades
        self.trunc = trunc
        self.index = {n: i for i, n in enumerate(names)}
        self._shifts = tuple(i * _EXP_BITS for i in range(len(names)))
        self._grade_memo = {0: 0}
        self._caps = []
        self._cap_memos = []
        for group, bound in caps:
            mask = 0
            for n in group:
                mask |= _EXP_MAX << self._shifts[self.index[n]]
            self._caps.append((mask, int(bound)))
            self._cap_memos.append({0: 0})

    @property
    def nvars(self):
        return len(self.names)

    def pack(self, exps):
        key = 0
        for e, s in zip(exps, self._shifts):
            if e:
                if e > _EXP_MAX:
                    raise GradeError("exponent overflow")
                key |= e << s
        return key

    def unpack(self, key):
        return tuple((key >> s) & _EXP_MAX for s in self._shifts)

    def monomial_grade(self, key):
        g = self._grade_memo.get(key)
        if g is None:
            g = sum(e * gr for e, gr in zip(self.unpack(key), self.grades))
            self._grade_memo[key] = g
        return g

    def within_caps(self, key):
        for (mask, bound), memo in zip(self._caps, self._cap_memos):
            part = key & mask
            g = memo.get(part)
            if g is None:
                g = sum(e * gr for e, gr in zip(self.unpack(part), self.grades))
                memo[part] = g
            if g > bound:
                return False
        return True

    def monomial_str(self, key):
        parts = []
        for n, e in zip(self.names, self.unpack(key)):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts) if parts else "1"

    def compatible_prefix_of(self, other):
        """True when self's variables are an initial segment of other's."""
        k = self.nvars
        return other.names[:k] == self.names and other.grades[:k] == self.grades

    def __repr__(self):
        return f"Context({len(self.names)} vars, trunc={self.trunc})"


class GradedPoly:
    """Sparse polynomial with exact coefficients, truncated beyond ctx.trunc.

    ``terms`` maps total grade -> {packed monomial -> coefficient}; no zero
    coefficients and no empty buckets are stored.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def constant(cls, ctx, c):
        c = _norm(c)
        if not c:
            return cls(ctx, {})
        return cls(ctx, {0: {0: c}})

    @classmethod
    def one(cls, ctx):
        return cls.constant(ctx, 1)

    @classmethod
    def variable(cls, ctx, name, coeff=1):
        i = ctx.index[name]
        g = ctx.grades[i]
        if g > ctx.trunc:
            return cls.zero(ctx)
        return cls(ctx, {g: {1 << ctx._shifts[i]: _norm(coeff)}})

    @classmethod
    def from_terms(cls, ctx, items):
        """Build from an iterable of (exponent tuple, coefficient)."""
        out = {}
        for exps, c in items:
            key = ctx.pack(exps)
            d = ctx.monomial_grade(key)
            if d > ctx.trunc or not ctx.within_caps(key):
                continue
            bucket = out.setdefault(d, {})
            c0 = bucket.get(key, 0) + c
            if c0:
                bucket[key] = _norm(c0)
            elif key in bucket:
                del bucket[key]
        return cls(ctx, {d: b for d, b in out.items() if b})

    # -- inspection --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def max_degree(self):
        return max(self.terms) if self.terms else 0

    def min_degree(self):
        return min(self.terms) if self.terms else 0

    def is_homogeneous(self):
        return len(self.terms) <= 1

    def nterms(self):
        return sum(len(b) for b in self.terms.values())

    def coefficient(self, exps):
        key = self.ctx.pack(exps)
        return self.terms.get(self.ctx.monomial_grade(key), {}).get(key, 0)

    def constant_term(self):
        return self.terms.get(0, {}).get(0, 0)

    def items(self):
        """Iterate (packed key, coefficient) in no particular order."""
        for bucket in self.terms.values():
            yield from bucket.items()

    def sorted_items(self):
        """Canonical order: by grade, then by exponent tuple."""
        ctx = self.ctx
        for d in sorted(self.terms):
            for key in sorted(self.terms[d], key=ctx.unpack):
                yield key, self.terms[d][key]

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.ctx is not other.ctx:
            raise ContextMismatch("operands from different contexts")

    def __add__(self, other):
        if not isinstance(other, GradedPoly):
            other = GradedPoly.constant(self.ctx, other)
        self._check(other)
        out = {d: dict(b) for d, b in self.terms.items()}
        for d, bucket in other.terms.items():
            tgt = out.setdefault(d, {})
            for key, c in bucket.items():
                c0 = tgt.get(key, 0) + c
                if c0:
                    tgt[key] = _norm(c0)
                elif key in tgt:
                    del tgt[key]
            if not tgt:
                del out[d]
        return GradedPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(
            self.ctx,
            {d: {k: -c for k, c in b.items()} for d, b in self.terms.items()},
        )

    def __sub__(self, other):
        if not isinstance(other, GradedPoly):
            other = GradedPoly.constant(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _norm(c)
        if not c:
            return GradedPoly.zero(self.ctx)
        return GradedPoly(
            self.ctx,
            {d: {k: _norm(v * c) for k, v in b.items()}
             for d, b in self.terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        trunc = ctx.trunc
        capped = bool(ctx._caps)
        within = ctx.within_caps
        out = {}
        for d1, b1 in self.terms.items():
            for d2, b2 in other.terms.items():
                d = d1 + d2
                if d > trunc:
                    continue
                tgt = out.setdefault(d, {})
                get = tgt.get
                for k1, c1 in b1.items():
                    for k2, c2 in b2.items():
                        k = k1 + k2
                        if capped and not within(k):
                            continue
                        c0 = get(k, 0) + c1 * c2
                        if c0:
                            tgt[k] = c0
                        elif k in tgt:
                            del tgt[k]
        for d in [d for d, b in out.items() if not b]:
            del out[d]
        for b in out.values():
            for k, c in b.items():
                if isinstance(c, Fraction) and c.denominator == 1:
                    b[k] = int(c)
        return GradedPoly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = GradedPoly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, GradedPoly):
            if self.is_zero():
                return other == 0
            return self.terms == {0: {0: other}}
        return self.ctx is other.ctx and self.terms == other.terms

    def __ne__(self, other):
        return not self.__eq__(other)

    # -- graded structure ---------------------------------------------------

    def homogeneous_component(self, d):
        """Sum of terms of total grade exactly d."""
        if not 0 <= d <= self.ctx.trunc:
            raise GradeError(f"degree {d} outside [0, {self.ctx.trunc}]")
        bucket = self.terms.get(d)
        if not bucket:
            return GradedPoly.zero(self.ctx)
        return GradedPoly(self.ctx, {d: dict(bucket)})

    def components(self):
        """All (degree, homogeneous part) pairs, ascending."""
        return [(d, GradedPoly(self.ctx, {d: dict(self.terms[d])}))
                for d in sorted(self.terms)]

    def truncate(self, bound):
        return GradedPoly(
            self.ctx,
            {d: dict(b) for d, b in self.terms.items() if d <= bound},
        )

    # -- substitution --------------------------------------------------------

    def substitute(self, bindings):
        """Simultaneous substitution of variables by grade-preserving polys.

        ``bindings`` maps variable names to GradedPolys of this context, each
        homogeneous of exactly that variable's grade.  Unbound variables stay.
        """
        ctx = self.ctx
        if not bindings:
            return self
        sub = {}
        for name, val in bindings.items():
            i = ctx.index[name]
            if not isinstance(val, GradedPoly) or val.ctx is not ctx:
                raise ContextMismatch("binding must live in the same context")
            if val and (not val.is_homogeneous()
                        or val.max_degree() != ctx.grades[i]):
                raise GradeError(
                    f"binding for {name} must be homogeneous of grade "
                    f"{ctx.grades[i]}")
            sub[i] = val
        return self._apply(ctx, sub)

    def evaluate(self, target_ctx, bindings):
        """Ring morphism into ``target_ctx``; every variable must be bound.

        Bindings must be homogeneous of the source variable's grade (in the
        target grading), so the map preserves the graded structure.
        """
        ctx = self.ctx
        sub = {}
        for name in ctx.names:
            if name not in bindings:
                raise GradeError(f"evaluate: variable {name} unbound")
            val = bindings[name]
            if val.ctx is not target_ctx:
                raise ContextMismatch("binding in wrong target context")
            i = ctx.index[name]
            if val and (not val.is_homogeneous()
                        or val.max_degree() != ctx.grades[i]):
                raise GradeError(f"binding for {name} is not grade-preserving")
            sub[i] = val
        return self._apply(target_ctx, sub)

    def _apply(self, target_ctx, sub):
        src = self.ctx
        powers = {i: {0: GradedPoly.one(target_ctx)} for i in sub}
        out = GradedPoly.zero(target_ctx)
        for bucket in self.terms.values():
            for key, c in bucket.items():
                exps = src.unpack(key)
                untouched = [0] * target_ctx.nvars
                factors = []
                for i, e in enumerate(exps):
                    if not e:
                        continue
                    if i in sub:
                        memo = powers[i]
                        if e not in memo:
                            p = memo[max(memo)]
                            for _ in range(max(memo), e):
                                p = p * sub[i]
                            memo[e] = p
                        factors.append(memo[e])
                    else:
                        j = target_ctx.index[src.names[i]]
                        untouched[j] = e
                term = GradedPoly.from_terms(target_ctx, [(tuple(untouched), c)])
                for f in factors:
                    term = term * f
                out = out + term
        return out

    def rename_into(self, target_ctx):
        """Reinterpret in a context of which self's context is a prefix."""
        if self.ctx is target_ctx:
            return self
        if not self.ctx.compatible_prefix_of(target_ctx):
            raise ContextMismatch("contexts are not prefix-compatible")
        out = {}
        for d, b in self.terms.items():
            if d <= target_ctx.trunc:
                out[d] = dict(b)
        return GradedPoly(target_ctx, out)

    # -- integrality ----------------------------------------------------------

    def assert_integral(self):
        """Return self if every coefficient is an integer, else raise.

        A fractional coefficient in a final degeneracy-class formula signals an
        internal bug: the output classes are integral.
        """
        for bucket in self.terms.values():
            for key, c in bucket.items():
                if isinstance(c, Fraction):
                    if c.denominator != 1:
                        raise NonIntegralCoefficient(
                            self.ctx.monomial_str(key), c)
        return self

    def normalized(self):
        """Copy with integral Fractions collapsed to int."""
        return GradedPoly(
            self.ctx,
            {d: {k: _norm(c) for k, c in b.items()}
             for d, b in self.terms.items()},
        )

    def __repr__(self):
        parts = []
        for key, c in self.sorted_items():
            m = self.ctx.monomial_str(key)
            parts.append(f"{c}" if m == "1" else f"{c}*{m}")
            if len(parts) > 24:
                parts.append("...")
                break
        return " + ".join(parts) if parts else "0"


class ChernSeries:
    """A unit series 1 + c_1 + c_2 + ... (a total Chern class).

    Thin wrapper around GradedPoly enforcing the unit condition, with the
    formal inversion needed to divide total Chern classes.
    """

    __slots__ = ("poly",)

    def __init__(self, poly):
        if poly.constant_term() != 1:
            raise NonUnitSeries("degree-0 component must equal 1")
        self.poly = poly

    @classmethod
    def one(cls, ctx):
        return cls(GradedPoly.one(ctx))

    @property
    def ctx(self):
        return self.poly.ctx

    def component(self, d):
        return self.poly.homogeneous_component(d)

    def __mul__(self, other):
        if isinstance(other, ChernSeries):
            return ChernSeries(self.poly * other.poly)
        return self.poly * other

    def __pow__(self, n):
        if n < 0:
            return ChernSeries(invert_unit(self).poly ** (-n))
        return ChernSeries(self.poly ** n)

    def __eq__(self, other):
        if isinstance(other, ChernSeries):
            return self.poly == other.poly
        return self.poly == other

    def __repr__(self):
        return f"ChernSeries({self.poly!r})"


def invert_unit(s):
    """Formal inverse of a unit series, truncated: s * invert_unit(s) = 1.

    Degree-by-degree recurrence t_d = -sum_{j=1..d} s_j t_{d-j}.
    """
    if isinstance(s, GradedPoly):
        s = ChernSeries(s)
    ctx = s.ctx
    s_parts = {d: p for d, p in s.poly.components() if d > 0}
    t_parts = {0: GradedPoly.one(ctx)}
    for d in range(1, ctx.trunc + 1):
        acc = GradedPoly.zero(ctx)
        for j, sj in s_parts.items():
            if j <= d and (d - j) in t_parts:
                acc = acc + sj * t_parts[d - j]
        if acc:
            t_parts[d] = -acc
    total = GradedPoly.zero(ctx)
    for p in t_parts.values():
        total = total + p
    return ChernSeries(total)


def series_from_classes(ctx, classes):
    """Unit series 1 + sum of the given homogeneous class polynomials."""
    total = GradedPoly.one(ctx)
    for p in classes:
        total = total + p
    return ChernSeries(total)
