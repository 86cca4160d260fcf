"""Finite-dimensional Lie superbialgebras given by structure constants.

An :class:`AlgebraSpec` carries a homogeneous basis, the bracket tensor, an
invariant super-symmetric form, and a polarization: disjoint plus / minus
index lists paired by a duality bijection, plus an optional Cartan block that
is self-paired through the form.  The classical r-matrix is

    r = sum over pairs  g+ (x) g-   +   (1/2) sum_{a,b cartan} (Bc^-1)_ab  t_a (x) t_b

where Bc is the form restricted to the Cartan block.  With an empty Cartan
list this is literally the Manin-triple tensor sum g+_i (x) g-_i; the Cartan
rule is the quotient presentation of the double when both halves share the
Cartan (sl(2) with r = e (x) f + (1/4) h (x) h is the basic example).

Everything is validated numerically: super-antisymmetry, the super-Jacobi
identity, invariance and non-degeneracy of the form, isotropy of the
polarization blocks, the duality pairing <g-_i, g+_j> = delta_ij, and the
homomorphism property of every registered representation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .supercore import (
    GradedMatrix,
    SuperSpace,
    koszul_flip,
    place_pair,
    place_single,
    tensor_product_op,
)

__all__ = [
    "AlgebraSpec",
    "Representation",
    "ValidationReport",
    "validate_spec",
    "r_tensor",
    "r_op_tensor",
    "r_matrix_terms",
    "classical_r",
    "rho_r_in_rep",
    "casimir_in_rep",
    "cybe_residual",
    "check_s_compatible",
    "builtin_algebra",
    "tensor_square_rep",
    "serialize_algebra",
    "save_algebra",
    "load_algebra",
    "AlgebraFileError",
    "AlgebraParseError",
    "AlgebraSchemaError",
    "AlgebraAxiomError",
]


@dataclass(frozen=True)
class Representation:
    name: str
    space: SuperSpace
    matrices: tuple

    @property
    def dim(self):
        return self.space.dim


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    name: str
    labels: tuple
    parities: tuple
    brackets: np.ndarray          # c[i,j,k]:  [g_i, g_j] = sum_k c[i,j,k] g_k
    form: np.ndarray              # B[i,j] = <g_i, g_j>
    plus: tuple
    minus: tuple
    cartan: tuple = ()
    dual_pairing: tuple = ()      # pairs (plus index, minus index), 0-based
    reps: dict = field(default_factory=dict)

    def __post_init__(self):
        d = len(self.labels)
        if d == 0:
            raise ValueError("empty basis")
        if len(self.parities) != d:
            raise ValueError("parities length mismatch")
        if self.brackets.shape != (d, d, d):
            raise ValueError("bracket tensor must be (d, d, d)")
        if self.form.shape != (d, d):
            raise ValueError("form must be (d, d)")
        seen = set(self.plus) | set(self.minus) | set(self.cartan)
        if len(self.plus) + len(self.minus) + len(self.cartan) != len(seen):
            raise ValueError("polarization lists must be disjoint")
        if seen != set(range(d)):
            raise ValueError("polarization must cover every basis index")
        if len(self.dual_pairing) != len(self.plus) or len(self.plus) != len(self.minus):
            raise ValueError("dual pairing must biject plus with minus")
        if {p for p, _ in self.dual_pairing} != set(self.plus):
            raise ValueError("pairing must cover the plus block")
        if {m for _, m in self.dual_pairing} != set(self.minus):
            raise ValueError("pairing must cover the minus block")

    @property
    def dim(self):
        return len(self.labels)

    def rep(self, name):
        try:
            return self.reps[name]
        except KeyError:
            raise KeyError(f"algebra {self.name!r} has no representation {name!r}") from None


@dataclass
class CheckItem:
    check: str
    where: str
    residual: float

    def ok(self, tol):
        return self.residual <= tol


@dataclass
class ValidationReport:
    items: list

    @property
    def max_residual(self):
        return max((it.residual for it in self.items), default=0.0)

    def ok(self, tol=1e-10):
        return all(it.ok(tol) for it in self.items)

    def failures(self, tol=1e-10):
        return [it for it in self.items if not it.ok(tol)]

    def __str__(self):
        lines = [f"{it.check:<22s} {it.where:<18s} {it.residual:.3e}" for it in self.items]
        return "\n".join(lines)


def _argmax_abs(arr):
    if arr.size == 0:
        return 0.0, ()
    flat = np.argmax(np.abs(arr))
    idx = np.unravel_index(flat, arr.shape)
    return float(np.abs(arr[idx])), idx


def validate_spec(spec: AlgebraSpec) -> ValidationReport:
    """Run every algebra axiom and report per-check residuals."""
    c = spec.brackets
    B = spec.form
    p = np.array(spec.parities)
    d = spec.dim
    sgn = (-1.0) ** np.outer(p, p)
    items = []

    def add(check, arr):
        res, idx = _argmax_abs(np.asarray(arr))
        items.append(CheckItem(check, str(idx), res))

    # bracket parity closure: c[i,j,k] = 0 unless |k| = |i| + |j|
    bad = ((p[:, None, None] + p[None, :, None] + p[None, None, :]) % 2) == 1
    add("bracket-parity", c * bad)

    # super-antisymmetry
    add("antisymmetry", c + sgn[:, :, None] * np.swapaxes(c, 0, 1))

    # super-Jacobi
    t1 = np.einsum("jkm,iml->ijkl", c, c)
    t2 = np.einsum("ijm,mkl->ijkl", c, c)
    t3 = np.einsum("ikm,jml->ijkl", c, c) * sgn[:, :, None, None]
    add("jacobi", t1 - t2 - t3)

    # form: super-symmetric, even, invariant, non-degenerate
    add("form-supersymmetric", B - sgn * B.T)
    add("form-even", B * (np.not_equal.outer(p, p)))
    add("form-invariant", np.einsum("ijm,mk->ijk", c, B) - np.einsum("jkm,im->ijk", c, B))
    try:
        add("form-nondegenerate", B @ np.linalg.inv(B) - np.eye(d))
    except np.linalg.LinAlgError:
        items.append(CheckItem("form-nondegenerate", "singular", float("inf")))

    # polarization
    pl, mi = list(spec.plus), list(spec.minus)
    add("isotropy-plus", B[np.ix_(pl, pl)] if pl else np.zeros(0))
    add("isotropy-minus", B[np.ix_(mi, mi)] if mi else np.zeros(0))
    if spec.dual_pairing:
        pair = np.array([[B[m_, p_] for p_, _ in spec.dual_pairing]
                         for _, m_ in spec.dual_pairing])
        add("dual-pairing", pair - np.eye(len(spec.dual_pairing)))
    if spec.cartan:
        ca = list(spec.cartan)
        add("cartan-abelian", c[np.ix_(ca, ca)])
        try:
            Bc = B[np.ix_(ca, ca)]
            add("cartan-nondegenerate", Bc @ np.linalg.inv(Bc) - np.eye(len(ca)))
        except np.linalg.LinAlgError:
            items.append(CheckItem("cartan-nondegenerate", "singular", float("inf")))

    # representations
    for name, rep in spec.reps.items():
        mats = rep.matrices
        worst_par = 0.0
        worst_hom = 0.0
        for i in range(d):
            worst_par = max(worst_par, mats[i].parity_part(1 - spec.parities[i]).inf_norm())
        for i in range(d):
            for j in range(d):
                img = None
                for k in range(d):
                    if c[i, j, k] != 0:
                        piece = mats[k].scale(c[i, j, k])
                        img = piece if img is None else img + piece
                comm = mats[i] @ mats[j] - (mats[j] @ mats[i]).scale(sgn[i, j])
                diff = comm if img is None else comm - img
                worst_hom = max(worst_hom, diff.inf_norm())
        items.append(CheckItem("rep-parity", name, worst_par))
        items.append(CheckItem("rep-homomorphism", name, worst_hom))

    return ValidationReport(items)


# -- r-matrices ------------------------------------------------------------


def r_tensor(spec: AlgebraSpec):
    """The classical r-matrix as a list of (coeff, i, j) pure tensors."""
    terms = [(1.0 + 0j, p_, m_) for p_, m_ in spec.dual_pairing]
    if spec.cartan:
        ca = list(spec.cartan)
        Bc_inv = np.linalg.inv(spec.form[np.ix_(ca, ca)])
        for a in range(len(ca)):
            for b in range(len(ca)):
                coeff = 0.5 * Bc_inv[a, b]
                if coeff != 0:
                    terms.append((complex(coeff), ca[a], ca[b]))
    return terms


def r_op_tensor(spec: AlgebraSpec, terms=None):
    """Koszul flip of the r tensor: sum c (-1)^{|i||j|} g_j (x) g_i."""
    terms = r_tensor(spec) if terms is None else terms
    p = spec.parities
    return [(c * (-1.0) ** (p[i] * p[j]), j, i) for c, i, j in terms]


def r_matrix_terms(spec, rep, rep2=None, terms=None):
    """Evaluate abstract pure tensors to (coeff, matrix, matrix) triples."""
    rep2 = rep if rep2 is None else rep2
    terms = r_tensor(spec) if terms is None else terms
    return [(c, rep.matrices[i], rep2.matrices[j]) for c, i, j in terms]


def _assemble(spec, rep, rep2, terms):
    out = None
    for c, i, j in terms:
        piece = tensor_product_op(rep.matrices[i], rep2.matrices[j]).scale(c)
        out = piece if out is None else out + piece
    if out is None:
        VV = rep.space.tensor(rep2.space)
        return GradedMatrix.zeros(VV, VV)
    return out


def classical_r(spec, rep, rep2=None, terms=None):
    """The r-matrix on V (x) V' (Koszul-signed tensor of rep matrices)."""
    rep2 = rep if rep2 is None else rep2
    return _assemble(spec, rep, rep2, r_tensor(spec) if terms is None else terms)


def rho_r_in_rep(spec, rep, terms=None):
    """Image of rho_r = sum x_m y_m for r = sum x_m (x) y_m."""
    terms = r_tensor(spec) if terms is None else terms
    out = None
    for c, i, j in terms:
        piece = (rep.matrices[i] @ rep.matrices[j]).scale(c)
        out = piece if out is None else out + piece
    if out is None:
        return GradedMatrix.zeros(rep.space, rep.space)
    return out


def casimir_in_rep(spec, rep, rep2=None, terms=None):
    """Image of the invariant tensor r + r^op."""
    rep2 = rep if rep2 is None else rep2
    terms = r_tensor(spec) if terms is None else terms
    return _assemble(spec, rep, rep2, terms) + _assemble(spec, rep, rep2, r_op_tensor(spec, terms))


def cybe_residual(spec, rep, terms=None):
    """Max-norm of [r12,r13] + [r12,r23] + [r13,r23] on the rep's triple tensor."""
    mats = r_matrix_terms(spec, rep, rep, terms)
    r12 = place_pair(mats, 1, 2, 3)
    r13 = place_pair(mats, 1, 3, 3)
    r23 = place_pair(mats, 2, 3, 3)

    def comm(a, b):
        return a @ b - b @ a

    lhs = comm(r12, r13) + comm(r12, r23) + comm(r13, r23)
    return lhs.inf_norm()


def check_s_compatible(s, spec, rep, terms=None):
    """Max-norm of [s^(1) + s^(2), r] on V (x) V; s must be even."""
    if s.operator_parity() != 0:
        raise ValueError("s must be parity-even")
    r = classical_r(spec, rep, rep, terms)
    s_diag = place_single(s, 1, 2) + place_single(s, 2, 2)
    return (s_diag @ r - r @ s_diag).inf_norm()


def tensor_square_rep(rep: Representation) -> Representation:
    """The rep on V (x) V by x -> x^(1) + x^(2) (signed placement)."""
    mats = tuple(place_single(m, 1, 2) + place_single(m, 2, 2) for m in rep.matrices)
    return Representation(rep.name + "2", rep.space.tensor(rep.space), mats)


# -- built-ins ---------------------------------------------------------------


def _matrix(space, entries):
    data = np.zeros((space.dim, space.dim), dtype=complex)
    for (i, j), v in entries.items():
        data[i, j] = v
    return GradedMatrix(space, space, data)


def builtin_algebra(name: str) -> AlgebraSpec:
    """Built-in exemplars: sl2 (all even) and gl11 (two odd generators)."""
    if name == "sl2":
        d = 3  # basis e, h, f
        c = np.zeros((d, d, d), dtype=complex)
        E, H, F = 0, 1, 2
        c[H, E, E] = 2.0
        c[E, H, E] = -2.0
        c[H, F, F] = -2.0
        c[F, H, F] = 2.0
        c[E, F, H] = 1.0
        c[F, E, H] = -1.0
        B = np.zeros((d, d))
        B[E, F] = B[F, E] = 1.0
        B[H, H] = 2.0
        space = SuperSpace.from_parities([0, 0])
        rep = Representation(
            "vector", space,
            (_matrix(space, {(0, 1): 1.0}),                 # e
             _matrix(space, {(0, 0): 1.0, (1, 1): -1.0}),   # h
             _matrix(space, {(1, 0): 1.0})))                # f
        return AlgebraSpec(
            name="sl2", labels=("e", "h", "f"), parities=(0, 0, 0),
            brackets=c, form=B.astype(complex),
            plus=(E,), minus=(F,), cartan=(H,), dual_pairing=((E, F),),
            reps={"vector": rep})

    if name == "gl11":
        d = 4  # basis h1, h2, e, f with e, f odd
        H1, H2, E, F = 0, 1, 2, 3
        c = np.zeros((d, d, d), dtype=complex)
        c[H1, E, E] = 1.0
        c[E, H1, E] = -1.0
        c[H2, E, E] = -1.0
        c[E, H2, E] = 1.0
        c[H1, F, F] = -1.0
        c[F, H1, F] = 1.0
        c[H2, F, F] = 1.0
        c[F, H2, F] = -1.0
        # [e,f] = ef + fe = h1 + h2; odd-odd bracket is symmetric
        c[E, F, H1] = c[E, F, H2] = 1.0
        c[F, E, H1] = c[F, E, H2] = 1.0
        B = np.zeros((d, d))
        # minus the supertrace form of the vector rep; this sign makes the
        # duality <g-, g+> = +1 hold with r-summand +e (x) f and CYBE exact
        B[H1, H1] = -1.0
        B[H2, H2] = 1.0
        B[E, F] = -1.0
        B[F, E] = 1.0
        space = SuperSpace.from_parities([0, 1])
        rep = Representation(
            "vector", space,
            (_matrix(space, {(0, 0): 1.0}),   # h1
             _matrix(space, {(1, 1): 1.0}),   # h2
             _matrix(space, {(0, 1): 1.0}),   # e
             _matrix(space, {(1, 0): 1.0})))  # f
        return AlgebraSpec(
            name="gl11", labels=("h1", "h2", "e", "f"), parities=(0, 0, 1, 1),
            brackets=c, form=B.astype(complex),
            plus=(E,), minus=(F,), cartan=(H1, H2), dual_pairing=((E, F),),
            reps={"vector": rep})

    raise KeyError(f"unknown built-in algebra {name!r}")


# -- file format -------------------------------------------------------------


class AlgebraFileError(Exception):
    code = "file"


class AlgebraParseError(AlgebraFileError):
    code = "parse"


class AlgebraSchemaError(AlgebraFileError):
    code = "schema"


class AlgebraAxiomError(AlgebraFileError):
    code = "axiom"


def _real(x, what):
    if abs(complex(x).imag) > 0:
        raise ValueError(f"{what} must be real in the file format")
    return float(complex(x).real)


def serialize_algebra(spec: AlgebraSpec) -> dict:
    """JSON document for an algebra; indices are 1-based in the file."""
    d = spec.dim
    p = np.array(spec.parities)
    sgn = (-1.0) ** np.outer(p, p)
    brackets = []
    for i in range(d):
        for j in range(i, d):
            coeffs = [{"k": k + 1, "value": _real(spec.brackets[i, j, k], "bracket")}
                      for k in range(d) if spec.brackets[i, j, k] != 0]
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
            # sanity: the stored half determines the rest
            if i != j and np.any(spec.brackets[j, i] != -sgn[i, j] * spec.brackets[i, j]):
                raise ValueError("bracket tensor is not super-antisymmetric")
    reps = {}
    for name, rep in spec.reps.items():
        mats = [[[[float(z.real), float(z.imag)] for z in row] for row in m.data]
                for m in rep.matrices]
        reps[name] = {"parities": list(rep.space.parities), "matrices": mats}
    return {
        "name": spec.name,
        "basis": [{"label": l, "parity": int(q)} for l, q in zip(spec.labels, spec.parities)],
        "brackets": brackets,
        "form": [[_real(x, "form entry") for x in row] for row in spec.form],
        "plus": [i + 1 for i in spec.plus],
        "minus": [i + 1 for i in spec.minus],
        "dual_pairing": [[a + 1, b + 1] for a, b in spec.dual_pairing],
        "cartan": [i + 1 for i in spec.cartan],
        "reps": reps,
    }


def save_algebra(spec: AlgebraSpec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_algebra(spec), fh, indent=1)


def _schema_fail(msg):
    raise AlgebraSchemaError(msg)


def algebra_from_dict(doc: dict) -> AlgebraSpec:
    if not isinstance(doc, dict):
        _schema_fail("top level must be an object")
    for key in ("name", "basis", "brackets", "form", "plus", "minus", "dual_pairing"):
        if key not in doc:
            _schema_fail(f"missing field {key!r}")
    basis = doc["basis"]
    if not isinstance(basis, list) or not basis:
        _schema_fail("basis must be a nonempty array")
    labels, parities = [], []
    for ent in basis:
        if not isinstance(ent, dict) or "label" not in ent or "parity" not in ent:
            _schema_fail("basis entries need label and parity")
        if ent["parity"] not in (0, 1):
            _schema_fail(f"parity must be 0 or 1, got {ent['parity']!r}")
        labels.append(str(ent["label"]))
        parities.append(int(ent["parity"]))
    d = len(labels)
    p = np.array(parities)
    sgn = (-1.0) ** np.outer(p, p)

    def index(v, what):
        if not isinstance(v, int) or not (1 <= v <= d):
            _schema_fail(f"{what} index {v!r} out of range 1..{d}")
        return v - 1

    c = np.zeros((d, d, d), dtype=complex)
    for ent in doc["brackets"]:
        i = index(ent.get("i"), "bracket i")
        j = index(ent.get("j"), "bracket j")
        if j < i:
            _schema_fail("brackets must store only i <= j")
        for co in ent.get("coeffs", []):
            k = index(co.get("k"), "bracket k")
            c[i, j, k] = float(co["value"])
        if i != j:
            c[j, i] = -sgn[i, j] * c[i, j]

    form = np.array(doc["form"], dtype=float)
    if form.shape != (d, d):
        _schema_fail(f"form must be {d}x{d}")

    plus = tuple(index(v, "plus") for v in doc["plus"])
    minus = tuple(index(v, "minus") for v in doc["minus"])
    cartan = tuple(index(v, "cartan") for v in doc.get("cartan", []))
    pairing = tuple((index(a, "pairing"), index(b, "pairing"))
                    for a, b in doc["dual_pairing"])

    reps = {}
    for name, rent in doc.get("reps", {}).items():
        rp = rent.get("parities")
        if not isinstance(rp, list) or any(q not in (0, 1) for q in rp):
            _schema_fail(f"rep {name!r}: parities must be 0/1 array")
        space = SuperSpace.from_parities(rp)
        mats = []
        for mdata in rent.get("matrices", []):
            arr = np.array(mdata, dtype=float)
            if arr.shape != (space.dim, space.dim, 2):
                _schema_fail(f"rep {name!r}: matrices must be dense with [re, im] entries")
            mats.append(GradedMatrix(space, space, arr[..., 0] + 1j * arr[..., 1]))
        if len(mats) != d:
            _schema_fail(f"rep {name!r}: need one matrix per basis element")
        reps[name] = Representation(name, space, tuple(mats))

    try:
        return AlgebraSpec(doc["name"], tuple(labels), tuple(parities), c,
                           form.astype(complex), plus, minus, cartan, pairing, reps)
    except ValueError as exc:
        _schema_fail(str(exc))


def load_algebra(path, tol=1e-10) -> AlgebraSpec:
    """Load and fully validate an algebra file; see serialize_algebra for the schema."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise AlgebraParseError(str(exc)) from exc
    spec = algebra_from_dict(doc)
    report = validate_spec(spec)
    bad = report.failures(tol)
    if bad:
        worst = max(bad, key=lambda it: it.residual)
        raise AlgebraAxiomError(
            f"axiom violation: {worst.check} at {worst.where}, residual {worst.residual:.3e}")
    return spec
