"""Finitely presented modules and the Steinitz form over quadratic orders."""
from dataclasses import dataclass, field

from .ideals import ideal_power, unit_ideal, is_maximal
from .intmat import SnfResult, integer_kernel, smith_normal_form
from .rings import LaurentZ, QuadOrder, ZZ, ZZLoc

__all__ = [
    "FpModule", "SteinitzModule", "SnfResult", "smith_normal_form", "direct_sum",
    "steinitz_to_presentation", "zero_module", "free_module", "cyclic_module",
    "presentation_lattice", "relation_snf", "mu_local", "reduce_relations",
]


@dataclass(frozen=True)
class FpModule:
    """Lambda^gens modulo the span of the relation columns.

    ``relations`` is a tuple of columns, each a tuple of ``gens`` ring elements.
    """
    ring: object
    gens: int
    relations: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.gens < 1:
            raise ValueError("a presentation needs at least one generator")
        cols = []
        for col in self.relations:
            col = tuple(self.ring.coerce(x) for x in col)
            if len(col) != self.gens:
                raise ValueError(f"relation column has {len(col)} entries, expected {self.gens}")
            cols.append(col)
        object.__setattr__(self, "relations", tuple(cols))

    @classmethod
    def from_rows(cls, ring, rows, label=""):
        """Build from a matrix given as a list of rows (one per generator)."""
        g = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = tuple(tuple(rows[i][j] for i in range(g)) for j in range(ncols))
        return cls(ring, g, cols, label)

    @property
    def rows(self):
        return [[col[i] for col in self.relations] for i in range(self.gens)]

    @property
    def ncols(self):
        return len(self.relations)

    def cleared_relations(self):
        """Relation columns multiplied by a power of x so that no exponent is negative.

        Over LaurentZ this does not change the module (x is a unit); other rings
        return the columns unchanged.
        """
        if not isinstance(self.ring, LaurentZ):
            return self.relations
        out = []
        for col in self.relations:
            lo = min((e.min_exp for e in col if e), default=0)
            out.append(tuple(e.shift(-lo) if lo < 0 else e for e in col))
        return tuple(out)

    def __str__(self):
        return self.label or f"FpModule({self.ring}, g={self.gens}, {self.ncols} relations)"


def zero_module(ring):
    return FpModule(ring, 1, ((ring.one,),), "0")


def free_module(ring, rank):
    return FpModule(ring, rank, (), f"free^{rank}")


def cyclic_module(ring, relations, label=""):
    """Lambda / (relations) on one generator."""
    return FpModule(ring, 1, tuple((r,) for r in relations), label)


def direct_sum(a, b):
    if a.ring != b.ring:
        raise ValueError("direct sum of modules over different rings")
    z = a.ring.zero
    cols = [tuple(c) + (z,) * b.gens for c in a.relations]
    cols += [(z,) * a.gens + tuple(c) for c in b.relations]
    label = f"{a.label} + {b.label}" if a.label and b.label else ""
    return FpModule(a.ring, a.gens + b.gens, tuple(cols), label)


def relation_snf(m, transforms=False):
    """SNF of an integer presentation (ZZ or ZZ[1/S])."""
    if not isinstance(m.ring, (ZZ, ZZLoc)):
        raise TypeError("integer presentation expected")
    return smith_normal_form(m.rows, nrows=m.gens, transforms=transforms)


def presentation_lattice(m):
    """Underlying Z-lattice data (n, relation vectors, action matrix or None).

    For a quadratic order the generator e_i contributes coordinates 2i (for
    e_i) and 2i+1 (for w*e_i); every relation column contributes itself and
    w times itself.
    """
    R = m.ring
    if isinstance(R, (ZZ, ZZLoc)):
        return m.gens, [list(c) for c in m.relations], None
    if isinstance(R, QuadOrder):
        n = 2 * m.gens
        vecs = []
        for col in m.relations:
            v = [0] * n
            wv = [0] * n
            for i, (a, b) in enumerate(col):
                v[2 * i], v[2 * i + 1] = a, b
                wa, wb = R.mul((a, b), R.omega)
                wv[2 * i], wv[2 * i + 1] = wa, wb
            vecs += [v, wv]
        W = R.action_matrix()
        A = [[0] * n for _ in range(n)]
        for i in range(m.gens):
            for r in range(2):
                for c in range(2):
                    A[2 * i + r][2 * i + c] = W[r][c]
        return n, vecs, A
    raise TypeError(f"no finite Z-rank lattice for modules over {R}")


@dataclass(frozen=True)
class SteinitzModule:
    """T + Lambda^(rank-1) + I over a quadratic order.

    ``torsion`` is a tuple of (maximal ideal, exponent); ``rank`` is the
    projective rank (0 for a torsion module, in which case the ideal is unused).
    """
    ring: QuadOrder
    torsion: tuple = ()
    rank: int = 1
    ideal: object = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.ring, QuadOrder):
            raise TypeError("Steinitz form is only available over quadratic orders")
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        tors = []
        for P, k in self.torsion:
            if not is_maximal(self.ring, P):
                raise ValueError(f"torsion ideal {P} is not maximal")
            if k < 1:
                raise ValueError("torsion exponents must be positive")
            tors.append((P, k))
        tors.sort(key=lambda t: (t[0].norm, t[0].hnf_rows, t[1]))
        object.__setattr__(self, "torsion", tuple(tors))
        ideal = self.ideal if self.ideal is not None else unit_ideal(self.ring)
        object.__setattr__(self, "ideal", ideal)

    def __str__(self):
        return self.label or f"SteinitzModule({self.ring}, rank={self.rank}, {len(self.torsion)} torsion parts)"

    @property
    def free_rank_minus_one(self):
        return max(self.rank - 1, 0)

    @property
    def torsion_order(self):
        out = 1
        for P, k in self.torsion:
            out *= P.norm ** k
        return out


def _ideal_syzygies(ring, ideal):
    """Z-basis of the kernel of Lambda^2 -> I, (x, y) -> x*alpha + y*beta."""
    alpha, beta = ideal.elements()
    images = []
    for g in (alpha, beta):
        images.append(list(g))
        images.append(list(ring.mul(g, ring.omega)))
    # columns of A are images of the Z-basis (1, w) of each copy of Lambda
    A = [[images[j][i] for j in range(4)] for i in range(2)]
    ker = integer_kernel(A, 4)
    return [((v[0], v[1]), (v[2], v[3])) for v in ker]


def steinitz_to_presentation(s):
    R = s.ring
    blocks = []
    for P, k in s.torsion:
        J = ideal_power(R, P, k)
        blocks.append(FpModule(R, 1, tuple((e,) for e in J.elements())))
    if s.rank >= 1:
        for _ in range(s.rank - 1):
            blocks.append(free_module(R, 1))
        I = s.ideal
        if I.basis == ((1, 0), (0, 1)):
            blocks.append(free_module(R, 1))
        else:
            blocks.append(FpModule(R, 2, tuple(_ideal_syzygies(R, I))))
    if not blocks:
        return zero_module(R)
    out = blocks[0]
    for b in blocks[1:]:
        out = direct_sum(out, b)
    return FpModule(R, out.gens, out.relations, s.label)


def reduce_relations(m, ideal):
    """Relation matrix (rows = generators) reduced into the residue field of ideal."""
    from .ideals import ResidueField
    F = ResidueField(m.ring, ideal)
    return F, [[F.reduce(col[i]) for col in m.relations] for i in range(m.gens)]


def mu_local(m, ideal):
    """dim of M/IM over Lambda/I, i.e. gens minus the rank of the reduced relations."""
    from .polymod import rank_over
    F, rows = reduce_relations(m, ideal)
    if not m.relations:
        return m.gens
    return m.gens - rank_over(F.field, rows)
