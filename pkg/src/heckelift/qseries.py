"""Exact truncated q-expansions over Q and over a real quadratic field.

Coefficients are either Fraction or QuadElem (elements a + b*sqrt(D) with a
fixed positive nonsquare D); the two domains never mix silently, promotion
is explicit.  Ring operations truncate to the shorter precision and weight
tags add under multiplication.

The congruence layer reduces coefficients through a chosen prime above a
split rational prime (the root r with r^2 = D picks the prime) and checks
coefficientwise agreement up to a stated bound, recording the theoretical
bound (weight/12 at level one) that would make the truncated check a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import bernoulli, is_prime

__all__ = [
    "QuadElem",
    "QExpansion",
    "SplitPrimeIdeal",
    "eisenstein",
    "delta",
    "to_quadratic",
    "reduce_series",
    "sturm_congruence",
    "hasse_invariant_check",
    "weight24_example",
    "SturmReport",
    "HasseReport",
    "Weight24Report",
]

DEFAULT_PRECISION = 64


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(disc) with exact rational a, b and fixed positive nonsquare disc."""

    a: Fraction
    b: Fraction
    disc: int

    def __post_init__(self):
        if self.disc <= 0 or math.isqrt(self.disc) ** 2 == self.disc:
            raise ValueError("disc must be a positive nonsquare integer")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _check(self, other: "QuadElem") -> None:
        if self.disc != other.disc:
            raise ValueError("mixed quadratic fields")

    def __add__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        return QuadElem(self.a + other.a, self.b + other.b, self.disc)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        return QuadElem(self.a - other.a, self.b - other.b, self.disc)

    def __neg__(self) -> "QuadElem":
        return QuadElem(-self.a, -self.b, self.disc)

    def __mul__(self, other):
        if isinstance(other, QuadElem):
            self._check(other)
            return QuadElem(
                self.a * other.a + self.b * other.b * self.disc,
                self.a * other.b + self.b * other.a,
                self.disc,
            )
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.a * other, self.b * other, self.disc)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.disc)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.disc})"


def _zero_like(sample):
    if isinstance(sample, QuadElem):
        return QuadElem(Fraction(0), Fraction(0), sample.disc)
    return Fraction(0)


def _one_like(sample):
    if isinstance(sample, QuadElem):
        return QuadElem(Fraction(1), Fraction(0), sample.disc)
    return Fraction(1)


class QExpansion:
    """Truncated power series in q with exact coefficients and a weight tag.

    coeffs[n] is the q^n coefficient; precision = number of known
    coefficients.  The coefficient domain (rational, or one fixed quadratic
    field) is validated at construction.
    """

    __slots__ = ("coeffs", "weight")

    def __init__(self, coeffs, weight: int | None = None):
        coeffs = tuple(
            Fraction(c) if isinstance(c, int) else c for c in coeffs
        )
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        disc = None
        for c in coeffs:
            if isinstance(c, QuadElem):
                if disc is None:
                    disc = c.disc
                elif disc != c.disc:
                    raise ValueError("mixed quadratic fields in one series")
            elif not isinstance(c, Fraction):
                raise TypeError(f"unsupported coefficient type {type(c)!r}")
        if disc is not None and any(isinstance(c, Fraction) for c in coeffs):
            raise ValueError("rational and quadratic coefficients cannot mix")
        self.coeffs = coeffs
        self.weight = weight

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def disc(self) -> int | None:
        c = self.coeffs[0]
        return c.disc if isinstance(c, QuadElem) else None

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def truncate(self, precision: int) -> "QExpansion":
        if precision > self.precision:
            raise ValueError("cannot extend a truncated series")
        return QExpansion(self.coeffs[:precision], self.weight)

    def _common(self, other: "QExpansion") -> int:
        if self.disc != other.disc:
            raise ValueError("coefficient domains differ")
        return min(self.precision, other.precision)

    @staticmethod
    def _merge_add_weight(w1, w2):
        if w1 is None:
            return w2
        if w2 is None or w1 == w2:
            return w1
        return None

    def __add__(self, other: "QExpansion") -> "QExpansion":
        n = self._common(other)
        return QExpansion(
            tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])),
            self._merge_add_weight(self.weight, other.weight),
        )

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        n = self._common(other)
        return QExpansion(
            tuple(a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])),
            self._merge_add_weight(self.weight, other.weight),
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadElem)):
            return self.scale(other)
        n = self._common(other)
        zero = _zero_like(self.coeffs[0])
        out = [zero] * n
        for i, a in enumerate(self.coeffs[:n]):
            if isinstance(a, Fraction) and a == 0:
                continue
            if isinstance(a, QuadElem) and a.is_zero():
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                out[i + j] = out[i + j] + a * b
        w = (
            self.weight + other.weight
            if self.weight is not None and other.weight is not None
            else None
        )
        return QExpansion(tuple(out), w)

    def scale(self, c) -> "QExpansion":
        if isinstance(c, int):
            c = Fraction(c)
        if isinstance(c, QuadElem) and self.disc is None:
            raise ValueError("promote the series with to_quadratic first")
        if isinstance(c, Fraction) and self.disc is not None:
            c = QuadElem(c, Fraction(0), self.disc)
        return QExpansion(tuple(c * a for a in self.coeffs), self.weight)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QExpansion":
        if e < 0:
            raise ValueError("negative powers are not supported")
        one = _one_like(self.coeffs[0])
        zero = _zero_like(self.coeffs[0])
        w = 0 if self.weight is not None else None
        out = QExpansion((one,) + (zero,) * (self.precision - 1), w)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QExpansion)
            and self.coeffs == other.coeffs
            and self.weight == other.weight
        )

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:4])
        return f"QExpansion([{head}, ...], precision={self.precision}, weight={self.weight})"


def to_quadratic(series: QExpansion, disc: int) -> QExpansion:
    """Promote a rational series into the coefficient field Q(sqrt(disc))."""
    if series.disc is not None:
        if series.disc != disc:
            raise ValueError("series already lives in a different field")
        return series
    return QExpansion(
        tuple(QuadElem(c, Fraction(0), disc) for c in series.coeffs), series.weight
    )


def _divisor_power_sums(k: int, precision: int) -> list[Fraction]:
    sums = [Fraction(0)] * precision
    for d in range(1, precision):
        dk = Fraction(d**k)
        for n in range(d, precision, d):
            sums[n] += dk
    return sums


def eisenstein(k: int, precision: int = DEFAULT_PRECISION) -> QExpansion:
    """The normalised weight-k Eisenstein series
    1 - (2k/B_k) * sum sigma_{k-1}(n) q^n, with exact rational coefficients."""
    if k % 2 or k < 2:
        raise ValueError("the weight must be even and at least 2")
    factor = Fraction(-2 * k) / bernoulli(k)
    sums = _divisor_power_sums(k - 1, precision)
    coeffs = [Fraction(1)] + [factor * sums[n] for n in range(1, precision)]
    return QExpansion(tuple(coeffs), weight=k)


def delta(precision: int = DEFAULT_PRECISION) -> QExpansion:
    """The discriminant cusp form q * prod (1 - q^n)^24 (weight 12).

    The eta factor is expanded by the pentagonal number series, then raised
    to the 24th power by repeated squaring.
    """
    eta = [Fraction(0)] * precision
    j = 0
    while True:
        done = True
        for jj in (j, -j) if j else (0,):
            e = jj * (3 * jj - 1) // 2
            if e < precision:
                eta[e] += Fraction(-1 if jj % 2 else 1)
                done = False
        if done:
            break
        j += 1
    eta24 = QExpansion(tuple(eta)) ** 24
    coeffs = (Fraction(0),) + eta24.coeffs[: precision - 1]
    return QExpansion(coeffs, weight=12)


@dataclass(frozen=True)
class SplitPrimeIdeal:
    """One of the two primes above ell in Q(sqrt(disc)): the root r with
    r^2 = disc mod ell selects the reduction sqrt(disc) -> r."""

    ell: int
    root: int
    disc: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if not 0 <= self.root < self.ell:
            raise ValueError("root must be reduced modulo ell")
        if (self.root * self.root - self.disc) % self.ell:
            raise ValueError(f"{self.root}^2 is not {self.disc} modulo {self.ell}")

    def conjugate(self) -> "SplitPrimeIdeal":
        return SplitPrimeIdeal(self.ell, (-self.root) % self.ell, self.disc)

    def reduce(self, value) -> int:
        if isinstance(value, QuadElem):
            if value.disc != self.disc:
                raise ValueError("element from a different field")
            frac = value.a + value.b * self.root
        else:
            frac = Fraction(value)
        if frac.denominator % self.ell == 0:
            raise ValueError(f"denominator not invertible modulo {self.ell}")
        return (
            frac.numerator
            * pow(frac.denominator, -1, self.ell)
            % self.ell
        )

    def __str__(self) -> str:
        return f"({self.ell}, sqrt({self.disc}) - {self.root})"


def split_roots(disc: int, ell: int) -> tuple[int, int]:
    """The two square roots of disc modulo a split odd prime ell, ascending."""
    roots = sorted(r for r in range(ell) if (r * r - disc) % ell == 0)
    if len(roots) != 2:
        raise ValueError(f"{ell} is not split in Q(sqrt({disc}))")
    return roots[0], roots[1]


def reduce_series(series: QExpansion, ideal, bound: int) -> tuple[int, ...]:
    """Coefficients 0..bound reduced through the ideal (or a rational prime)."""
    if bound >= series.precision:
        raise ValueError(
            f"series precision {series.precision} is below the bound {bound}"
        )
    if isinstance(ideal, SplitPrimeIdeal):
        return tuple(ideal.reduce(series[n]) for n in range(bound + 1))
    ell = int(ideal)
    out = []
    for n in range(bound + 1):
        c = series[n]
        if isinstance(c, QuadElem):
            raise ValueError("quadratic coefficients need a SplitPrimeIdeal")
        if c.denominator % ell == 0:
            raise ValueError(f"denominator not invertible modulo {ell}")
        out.append(c.numerator * pow(c.denominator, -1, ell) % ell)
    return tuple(out)


@dataclass(frozen=True)
class SturmReport:
    congruent: bool
    first_mismatch: int | None
    bound: int
    theoretical_bound: int | None
    modulus: str

    def __str__(self) -> str:
        status = "pass" if self.congruent else f"fail at q^{self.first_mismatch}"
        extra = (
            f"; level-1 proof bound {self.theoretical_bound}"
            if self.theoretical_bound is not None
            else ""
        )
        return f"congruence mod {self.modulus} to q^{self.bound}: {status}{extra}"


def sturm_congruence(f: QExpansion, g: QExpansion, ideal, bound: int) -> SturmReport:
    """Coefficientwise congruence of two series up to the bound, modulo a
    rational prime or a chosen split prime.

    Weight tags, when both are present, must agree modulo ell - 1 (the
    congruence-compatible weights); the recorded theoretical bound is
    max(weight)/12, the level-one index beyond which agreement of the
    truncations proves congruence of the forms.
    """
    ell = ideal.ell if isinstance(ideal, SplitPrimeIdeal) else int(ideal)
    theoretical = None
    if f.weight is not None and g.weight is not None:
        if (f.weight - g.weight) % (ell - 1):
            raise ValueError(
                f"weights {f.weight}, {g.weight} are incompatible modulo {ell - 1}"
            )
        theoretical = max(f.weight, g.weight) // 12
    rf = reduce_series(f, ideal, bound)
    rg = reduce_series(g, ideal, bound)
    mismatch = next((n for n in range(bound + 1) if rf[n] != rg[n]), None)
    return SturmReport(
        congruent=mismatch is None,
        first_mismatch=mismatch,
        bound=bound,
        theoretical_bound=theoretical,
        modulus=str(ideal),
    )


@dataclass(frozen=True)
class HasseReport:
    p: int
    q: int
    weight: int
    precision: int
    ok: bool
    first_offending: int | None

    def __str__(self) -> str:
        if self.ok:
            return (
                f"E_{self.weight} = 1 mod {self.p * self.q} "
                f"to q^{self.precision - 1}: pass"
            )
        return (
            f"E_{self.weight} = 1 mod {self.p * self.q}: "
            f"fails at q^{self.first_offending}"
        )


def hasse_invariant_check(
    p: int, q: int, precision: int = DEFAULT_PRECISION, weight: int | None = None
) -> HasseReport:
    """Check that the Eisenstein series of weight lcm(p-1, q-1) is 1 modulo
    p*q: every higher coefficient has numerator divisible by p*q and
    denominator prime to p*q.

    A different weight may be supplied as a negative control.
    """
    for ell in (p, q):
        if ell == 2 or not is_prime(ell):
            raise ValueError(f"{ell} must be an odd prime")
    if p == q:
        raise ValueError("the primes must be distinct")
    if weight is None:
        weight = math.lcm(p - 1, q - 1)
    series = eisenstein(weight, precision)
    pq = p * q
    offending = None
    for n in range(1, precision):
        c = series[n]
        if c.numerator % pq or math.gcd(c.denominator, pq) != 1:
            offending = n
            break
    return HasseReport(p, q, weight, precision, offending is None, offending)


@dataclass(frozen=True)
class Weight24Report:
    disc: int
    precision: int
    alpha: QuadElem
    alpha_prime: QuadElem
    p5: SplitPrimeIdeal
    p7: SplitPrimeIdeal
    labelling: str
    congruences: tuple[tuple[str, SturmReport], ...]
    q_is_one_mod_5: bool
    alpha_product: Fraction
    residues: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def ok(self) -> bool:
        return self.q_is_one_mod_5 and all(r.congruent for _, r in self.congruences)


WEIGHT24_DISC = 144169


def weight24_example(precision: int = DEFAULT_PRECISION) -> Weight24Report:
    """The two level-one weight-24 eigenforms against the discriminant form.

    Builds f = 24*alpha*Delta^2 + E4^3*Delta and its conjugate f' over
    Q(sqrt(144169)), fixes the prime above 7 with the smaller root, labels f
    by the congruence Delta = f at that prime, and verifies the congruence
    suite at both primes above 5 and 7.  The prime above 5 written p5 is the
    one compatible with the labelling (the choice is forced by requiring
    Delta = f mod p5); f and f' are congruent mod 5 through the matched pair
    of conjugate primes.  Raises if any asserted congruence breaks.
    """
    if precision < 10:
        raise ValueError("precision must be at least 10")
    D = WEIGHT24_DISC
    dlt = delta(precision)
    e4 = eisenstein(4, precision)
    base = to_quadratic((e4**3) * dlt, D)
    d2 = to_quadratic(dlt * dlt, D)

    half = Fraction(1, 2)
    alpha_plus = QuadElem(-13 * half, half, D)
    alpha_minus = QuadElem(-13 * half, -half, D)

    def build(alpha):
        return d2.scale(24 * alpha) + base

    r7_small, r7_big = split_roots(D, 7)
    p7 = SplitPrimeIdeal(7, r7_small, D)
    bound = precision - 1

    f_plus = build(alpha_plus)
    f_minus = build(alpha_minus)
    dlt_q = to_quadratic(dlt, D)
    plus_matches = sturm_congruence(dlt_q, f_plus, p7, bound).congruent
    minus_matches = sturm_congruence(dlt_q, f_minus, p7, bound).congruent
    if plus_matches == minus_matches:
        raise AssertionError("exactly one weight-24 form must match Delta mod p7")
    if plus_matches:
        alpha, alpha_prime = alpha_plus, alpha_minus
        f, f_prime = f_plus, f_minus
        labelling = "f carries alpha = (-13 + sqrt(144169))/2"
    else:
        alpha, alpha_prime = alpha_minus, alpha_plus
        f, f_prime = f_minus, f_plus
        labelling = "f carries alpha = (-13 - sqrt(144169))/2"
    p7_conj = p7.conjugate()

    r5a, r5b = split_roots(D, 5)
    candidates = [SplitPrimeIdeal(5, r, D) for r in (r5a, r5b)]
    matching = [
        ideal
        for ideal in candidates
        if sturm_congruence(dlt_q, f, ideal, bound).congruent
    ]
    if len(matching) != 1:
        raise AssertionError("exactly one prime above 5 must satisfy Delta = f")
    p5 = matching[0]
    p5_conj = p5.conjugate()

    congruences = (
        ("Delta = f mod p5", sturm_congruence(dlt_q, f, p5, bound)),
        ("Delta = f mod p7", sturm_congruence(dlt_q, f, p7, bound)),
        ("Delta = f' mod p5'", sturm_congruence(dlt_q, f_prime, p5_conj, bound)),
        ("Delta = f' mod p7'", sturm_congruence(dlt_q, f_prime, p7_conj, bound)),
        (
            # f and f' are congruent mod 5 through the matched conjugate pair
            # of primes: both reduce to Delta
            "f mod p5 = f' mod p5'",
            SturmReport(
                congruent=reduce_series(f, p5, bound)
                == reduce_series(f_prime, p5_conj, bound),
                first_mismatch=None,
                bound=bound,
                theoretical_bound=2,
                modulus=f"{p5} paired with {p5_conj}",
            ),
        ),
    )

    e4_mod5 = reduce_series(e4, 5, bound)
    q_is_one = all(c == 0 for c in e4_mod5[1:]) and e4_mod5[0] == 1

    alpha_product = alpha.a * alpha.a - alpha.b * alpha.b * D

    report = Weight24Report(
        disc=D,
        precision=precision,
        alpha=alpha,
        alpha_prime=alpha_prime,
        p5=p5,
        p7=p7,
        labelling=labelling,
        congruences=congruences,
        q_is_one_mod_5=q_is_one,
        alpha_product=alpha_product,
        residues=tuple(
            (name, reduce_series(series, ideal, min(9, bound)))
            for name, series, ideal in (
                ("Delta mod p5", dlt_q, p5),
                ("f mod p5", f, p5),
                ("f' mod p5'", f_prime, p5_conj),
                ("Delta mod p7", dlt_q, p7),
                ("f mod p7", f, p7),
                ("f' mod p7'", f_prime, p7_conj),
            )
        ),
    )
    if not report.ok:
        broken = [name for name, r in congruences if not r.congruent]
        raise AssertionError(f"asserted congruences failed: {broken}")
    if alpha_product != Fraction(-36000):
        raise AssertionError(f"alpha * alpha' = {alpha_product}, expected -36000")
    return report
