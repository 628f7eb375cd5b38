"""System matrices (AMDs): transfer functions, irreducibility, Fuhrmann and
Rosenbrock system equivalence, reduction to matrix-fraction form, least
order, and decoupling zeros.

Exact algorithms require polynomial blocks; quasi-polynomial AMDs get an
evaluable transfer closure and delegate numeric analysis to `holomat`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import polymat, ratmat
from .errors import AnalysisError, InputError, NotCoprimeError, SingularMatrixError
from .exactalg import Poly
from .polymat import PolyMat
from .ratmat import Divisor, RatMat

__all__ = [
    "Amd",
    "FseWitness",
    "RseWitness",
    "DecouplingReport",
    "LeastOrderReport",
    "transfer_function",
    "is_irreducible",
    "verify_fse",
    "verify_rse",
    "fse_to_rse",
    "rse_to_fse",
    "compose_rse",
    "invert_rse",
    "to_rmf",
    "to_lmf",
    "equate_irreducible",
    "amd_order",
    "least_order_check",
    "decouple",
    "LAYOUTS",
]

# block arrangements accepted on input; all normalize to [[A, B], [-C, D]]
LAYOUTS = ("standard", "flipped", "flipped-neg-b", "neg-b", "neg-a")


class Amd:
    """Analytic matrix description [[A, B], [-C, D]] with regular state
    block A; transfer function D + C A^{-1} B."""

    __slots__ = ("A", "B", "C", "D", "ring")

    def __init__(self, A, B, C, D, ring="polynomial"):
        if ring not in ("polynomial", "rational", "quasipoly"):
            raise InputError(f"unknown ring tag {ring!r}")
        if ring != "quasipoly":
            A, B, C, D = (_as_polymat(blk) for blk in (A, B, C, D))
        r = A.rows
        if A.cols != r:
            raise InputError("state block must be square")
        if B.rows != r or C.cols != r or C.rows != D.rows or B.cols != D.cols:
            raise InputError("inconsistent AMD block dimensions")
        if ring != "quasipoly":
            if polymat.det(A).is_zero:
                raise SingularMatrixError("state block is singular")
        else:
            from . import holomat

            if not holomat.qp_is_regular(A):
                raise SingularMatrixError("state block appears singular")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("Amd is immutable")

    @property
    def state_dim(self) -> int:
        return self.A.rows

    @property
    def output_dim(self) -> int:
        return self.C.rows

    @property
    def input_dim(self) -> int:
        return self.B.cols

    @staticmethod
    def from_layout_blocks(tl, tr, bl, br, layout="standard",
                           ring="polynomial") -> "Amd":
        """Build from the four literal blocks of a system matrix written in
        one of the accepted arrangements."""
        if layout == "standard":
            a, b, c, d = tl, tr, -bl, br
        elif layout == "flipped":
            a, b, c, d = br, bl, -tr, tl
        elif layout == "flipped-neg-b":
            a, b, c, d = br, -bl, tr, tl
        elif layout == "neg-b":
            a, b, c, d = tl, -tr, bl, br
        elif layout == "neg-a":
            a, b, c, d = -tl, tr, bl, br
        else:
            raise InputError(f"unknown layout {layout!r}")
        return Amd(a, b, c, d, ring=ring)

    def system_matrix(self) -> PolyMat:
        if self.ring == "quasipoly":
            raise InputError("polynomial system matrix of a quasipoly AMD")
        return PolyMat.block([[self.A, self.B], [-self.C, self.D]])

    def __eq__(self, other):
        if not isinstance(other, Amd):
            return NotImplemented
        return (self.ring == other.ring and self.A == other.A
                and self.B == other.B and self.C == other.C
                and self.D == other.D)

    def __hash__(self):
        return hash((self.A, self.B, self.C, self.D, self.ring))

    def __repr__(self):
        return (f"Amd(r={self.state_dim}, m={self.output_dim}, "
                f"n={self.input_dim}, ring={self.ring})")


def _as_polymat(block) -> PolyMat:
    if isinstance(block, PolyMat):
        return block
    if isinstance(block, RatMat):
        # rational-ring AMDs are accepted when the entries are polynomial;
        # genuinely rational blocks have no exact Smith-form theory here
        if not block.is_polynomial:
            raise InputError("AMD blocks must have polynomial entries")
        return block.to_polymat()
    return PolyMat(block)


def transfer_function(H: Amd):
    """Schur complement D + C A^{-1} B; exact for polynomial/rational AMDs,
    an evaluable closure for quasipoly AMDs."""
    if H.ring == "quasipoly":
        from . import holomat

        return holomat.qp_transfer_closure(H)
    a_inv = RatMat.from_polymat(H.A).inverse()
    c = RatMat.from_polymat(H.C)
    b = RatMat.from_polymat(H.B)
    return RatMat.from_polymat(H.D) + c @ a_inv @ b


def is_irreducible(H: Amd) -> bool:
    """A, C right coprime and A, B left coprime."""
    if H.ring == "quasipoly":
        raise InputError("use holomat.regional_coprime for quasipoly AMDs")
    ok_out, _ = polymat.are_right_coprime(H.A, H.C)
    if not ok_out:
        return False
    ok_in, _ = polymat.are_left_coprime(H.A, H.B)
    return ok_in


@dataclass(frozen=True)
class FseWitness:
    """Fuhrmann witness: [[M, 0], [X, I]] H1 = H2 [[N, Y], [0, I]] with
    M, A2 left coprime and A1, N right coprime."""

    M: PolyMat
    N: PolyMat
    X: PolyMat
    Y: PolyMat


@dataclass(frozen=True)
class RseWitness:
    """Rosenbrock witness at padding size p: M, N unimodular p x p and
    [[M, 0], [X, I]] (I ⊕ H1) [[N, Y], [0, I]] = I ⊕ H2."""

    M: PolyMat
    N: PolyMat
    X: PolyMat
    Y: PolyMat
    p: int


def verify_fse(H1: Amd, H2: Amd, w: FseWitness) -> bool:
    r, ell = H1.state_dim, H2.state_dim
    m, n = H1.output_dim, H1.input_dim
    if H2.output_dim != m or H2.input_dim != n:
        raise InputError("AMDs have different input/output dimensions")
    if (w.M.rows, w.M.cols) != (ell, r) or (w.N.rows, w.N.cols) != (ell, r):
        raise InputError("witness M/N blocks have wrong shape")
    if (w.X.rows, w.X.cols) != (m, r) or (w.Y.rows, w.Y.cols) != (ell, n):
        raise InputError("witness X/Y blocks have wrong shape")
    left = PolyMat.block([
        [w.M, PolyMat.zeros(ell, m)],
        [w.X, PolyMat.identity(m)],
    ]) @ H1.system_matrix()
    right = H2.system_matrix() @ PolyMat.block([
        [w.N, w.Y],
        [PolyMat.zeros(n, r), PolyMat.identity(n)],
    ])
    if left != right:
        return False
    ok_a, _ = polymat.are_left_coprime(w.M, H2.A)
    if not ok_a:
        return False
    ok_b, _ = polymat.are_right_coprime(H1.A, w.N)
    return ok_b


def verify_rse(H1: Amd, H2: Amd, w: RseWitness) -> bool:
    r, ell = H1.state_dim, H2.state_dim
    m, n = H1.output_dim, H1.input_dim
    p = w.p
    if p < max(r, ell):
        raise InputError("padding size below both state dimensions")
    if not (polymat.is_unimodular(w.M) and polymat.is_unimodular(w.N)):
        return False
    mid1 = PolyMat.block([
        [PolyMat.identity(p - r), PolyMat.zeros(p - r, r + n)],
        [PolyMat.zeros(r + m, p - r), H1.system_matrix()],
    ])
    mid2 = PolyMat.block([
        [PolyMat.identity(p - ell), PolyMat.zeros(p - ell, ell + n)],
        [PolyMat.zeros(ell + m, p - ell), H2.system_matrix()],
    ])
    left = PolyMat.block([
        [w.M, PolyMat.zeros(p, m)],
        [w.X, PolyMat.identity(m)],
    ])
    right = PolyMat.block([
        [w.N, w.Y],
        [PolyMat.zeros(n, p), PolyMat.identity(n)],
    ])
    return left @ mid1 @ right == mid2


def fse_to_rse(H1: Amd, H2: Amd, w: FseWitness) -> RseWitness:
    """Constructive half of the fse = rse theorem, padding at p = r + ell."""
    r, ell = H1.state_dim, H2.state_dim
    # Bezout certificates from the two coprimeness side conditions
    x_hat, y_hat = polymat.solve_bezout(
        H2.A.transpose(), w.M.transpose(), PolyMat.identity(ell))
    x_hat, y_hat = x_hat.transpose(), y_hat.transpose()  # A2 X̂ + M Ŷ = I
    x_til, y_til = polymat.solve_bezout(w.N, H1.A, PolyMat.identity(r))
    # left factor [[-X̃, Ỹ], [A2, M]]; correct it to make the product with
    # [[-N, X̂], [A1, Ŷ]] exactly the identity
    w_blk = (-x_til) @ x_hat + y_til @ y_hat
    x_til = x_til + w_blk @ H2.A
    y_til = y_til - w_blk @ w.M
    m_rse = PolyMat.block([[-x_til, y_til], [H2.A, w.M]])
    x_rse = (-H2.C).hstack(w.X)
    n_prime = PolyMat.block([
        [-x_til, y_til @ H1.A],
        [PolyMat.identity(ell), w.N],
    ])
    y_prime = (y_til @ H1.B).vstack(w.Y)
    # the proof identity reads X (I ⊕ H1) = (I ⊕ H2) Y'; invert the right
    # factor to land on the Def. sse shape
    n_inv = polymat.inverse_unimodular(n_prime)
    return RseWitness(M=m_rse, N=n_inv, X=x_rse, Y=-(n_inv @ y_prime),
                      p=r + ell)


def rse_to_fse(H1: Amd, H2: Amd, w: RseWitness) -> FseWitness:
    """Read the Fuhrmann witness off the conformal corner blocks."""
    r, ell = H1.state_dim, H2.state_dim
    p = w.p
    m22 = w.M.submatrix(slice(p - ell, None), slice(p - r, None))
    # rewrite L (I ⊕ H1) R = I ⊕ H2 as L (I ⊕ H1) = (I ⊕ H2) R^{-1} and
    # read the corner blocks of R^{-1}
    n_conv = polymat.inverse_unimodular(w.N)
    y_conv = -(n_conv @ w.Y)
    n22 = n_conv.submatrix(slice(p - ell, None), slice(p - r, None))
    x2 = w.X.submatrix(slice(None), slice(p - r, None))
    y2 = y_conv.submatrix(slice(p - ell, None), slice(None))
    return FseWitness(M=m22, N=n22, X=x2, Y=y2)


def invert_rse(w: RseWitness) -> RseWitness:
    m_inv = polymat.inverse_unimodular(w.M)
    n_inv = polymat.inverse_unimodular(w.N)
    return RseWitness(M=m_inv, N=n_inv, X=-(w.X @ m_inv),
                      Y=-(n_inv @ w.Y), p=w.p)


def _pad_rse(w: RseWitness, p: int) -> RseWitness:
    if p == w.p:
        return w
    k = p - w.p
    eye = PolyMat.identity(k)
    return RseWitness(
        M=PolyMat.block([[eye, PolyMat.zeros(k, w.p)],
                         [PolyMat.zeros(w.p, k), w.M]]),
        N=PolyMat.block([[eye, PolyMat.zeros(k, w.p)],
                         [PolyMat.zeros(w.p, k), w.N]]),
        X=PolyMat.zeros(w.X.rows, k).hstack(w.X),
        Y=PolyMat.zeros(k, w.Y.cols).vstack(w.Y),
        p=p,
    )


def compose_rse(w12: RseWitness, w23: RseWitness) -> RseWitness:
    """Witness for H1 ~ H3 from witnesses H1 ~ H2 and H2 ~ H3."""
    p = max(w12.p, w23.p)
    a, b = _pad_rse(w12, p), _pad_rse(w23, p)
    return RseWitness(
        M=b.M @ a.M,
        N=a.N @ b.N,
        X=b.X @ a.M + a.X,
        Y=a.N @ b.Y + a.Y,
        p=p,
    )


def to_rmf(H: Amd):
    """Reduce an AMD with left coprime (A, B) to an RMF-system matrix
    [[D_R, I], [-N_R, 0]], returning the fse witness."""
    if H.ring == "quasipoly":
        raise InputError("to_rmf needs polynomial blocks")
    a, b, c, d = H.A, H.B, H.C, H.D
    r, n = H.state_dim, H.input_dim
    ok, _ = polymat.are_left_coprime(a, b)
    if not ok:
        raise NotCoprimeError("state and input blocks are not left coprime")
    # complete [A B] to a unimodular T = [[A, B], [-N, -Y]]
    c1, c2 = polymat.coprime_completion(a.transpose(), b.transpose())
    n_blk, y_blk = -c1.transpose(), -c2.transpose()
    t = PolyMat.block([[a, b], [-n_blk, -y_blk]])
    t_inv = polymat.inverse_unimodular(t)
    t1 = t_inv.submatrix(slice(0, r), slice(0, r))
    t2 = t_inv.submatrix(slice(0, r), slice(r, None))
    m_blk = t_inv.submatrix(slice(r, None), slice(0, r))
    d_r = t_inv.submatrix(slice(r, None), slice(r, None))
    n_r = d @ d_r - c @ t2
    x_blk = c @ t1 - d @ m_blk
    s = Amd(A=d_r, B=PolyMat.identity(n), C=n_r,
            D=PolyMat.zeros(H.output_dim, n), ring=H.ring)
    return s, FseWitness(M=m_blk, N=n_blk, X=x_blk, Y=y_blk)


def to_lmf(H: Amd):
    """Reduce an AMD with right coprime (A, C) to an LMF-system matrix
    [[D_L, N_L], [-I, 0]], returning the fse witness."""
    if H.ring == "quasipoly":
        raise InputError("to_lmf needs polynomial blocks")
    a, b, c, d = H.A, H.B, H.C, H.D
    r, m, n = H.state_dim, H.output_dim, H.input_dim
    ok, _ = polymat.are_right_coprime(a, c)
    if not ok:
        raise NotCoprimeError("state and output blocks are not right coprime")
    # complete [A; -C] to a unimodular T = [[A, N̂], [-C, Ŷ]]
    n_hat, y_hat = polymat.coprime_completion(a, -c)
    t = PolyMat.block([[a, n_hat], [-c, y_hat]])
    t_inv = polymat.inverse_unimodular(t)
    m_blk = t_inv.submatrix(slice(r, None), slice(0, r))
    d_l = t_inv.submatrix(slice(r, None), slice(r, None))
    n_l = d_l @ d + m_blk @ b
    s = Amd(A=d_l, B=n_l, C=PolyMat.identity(m),
            D=PolyMat.zeros(m, n), ring=H.ring)
    w = FseWitness(M=m_blk, N=c, X=PolyMat.zeros(m, r), Y=-d)
    return s, w


def equate_irreducible(H1: Amd, H2: Amd):
    """Fse witness between two irreducible AMDs with the same transfer
    function (Rosenbrock's theorem); None when the transfers differ."""
    if H1.ring == "quasipoly" or H2.ring == "quasipoly":
        raise InputError("equate_irreducible needs polynomial blocks")
    if not (is_irreducible(H1) and is_irreducible(H2)):
        raise InputError("equate_irreducible needs irreducible AMDs")
    if transfer_function(H1) != transfer_function(H2):
        return None
    s1, w1 = to_rmf(H1)
    s2, w2 = to_rmf(H2)
    mfd1 = ratmat.Mfd(N=s1.C, D=s1.A, side="right", coprime=True)
    mfd2 = ratmat.Mfd(N=s2.C, D=s2.A, side="right", coprime=True)
    t_r = ratmat.mfd_unit_relator(mfd1, mfd2)
    n = H1.input_dim
    w_s1_s2 = FseWitness(M=PolyMat.identity(n), N=t_r,
                         X=PolyMat.zeros(H1.output_dim, n),
                         Y=PolyMat.zeros(n, n))
    r1 = fse_to_rse(H1, s1, w1)
    r_mid = fse_to_rse(s1, s2, w_s1_s2)
    r2 = invert_rse(fse_to_rse(H2, s2, w2))
    combined = compose_rse(compose_rse(r1, r_mid), r2)
    w = rse_to_fse(H1, H2, combined)
    if not verify_fse(H1, H2, w):
        raise AnalysisError("constructed equivalence witness failed to verify")
    return w


def amd_order(H: Amd) -> Divisor:
    """∂_A: the divisor of zeros of det A."""
    if H.ring == "quasipoly":
        raise InputError("amd_order needs polynomial blocks")
    return Divisor.of_zeros(polymat.det(H.A))


@dataclass(frozen=True)
class LeastOrderReport:
    irreducible: bool
    order: Divisor
    transfer_least_order: Divisor
    is_least: bool


def least_order_check(H: Amd) -> LeastOrderReport:
    """The three equivalent least-order characterizations, evaluated and
    cross-checked."""
    irr = is_irreducible(H)
    order = amd_order(H)
    nu = ratmat.least_order(transfer_function(H))
    is_least = order == nu
    if is_least != irr:
        raise AnalysisError("least-order equivalences disagree")
    return LeastOrderReport(irreducible=irr, order=order,
                            transfer_least_order=nu, is_least=is_least)


@dataclass(frozen=True)
class DecouplingReport:
    input_decoupling: Divisor
    output_decoupling: Divisor
    io_decoupling: frozenset
    decoupling: frozenset
    reduced: Amd
    QL: PolyMat
    QR: PolyMat


def decouple(H: Amd) -> DecouplingReport:
    """Strip decoupling zeros: A = Q_L Â Q_R with the reduced AMD
    irreducible and the transfer function unchanged."""
    if H.ring == "quasipoly":
        raise InputError("decouple needs polynomial blocks")
    a, b, c, d = H.A, H.B, H.C, H.D
    left = polymat.gcld(a, b)
    q_l, a_tilde, b_hat = left.D, left.Q1, left.Q2
    right = polymat.gcrd(a_tilde, c)
    q_r, a_hat, c_hat = right.D, right.Q1, right.Q2
    reduced = Amd(A=a_hat, B=b_hat, C=c_hat, D=d, ring=H.ring)

    input_div = Divisor.of_zeros(polymat.det(q_l))
    out_gcrd = polymat.gcrd(a, c).D
    output_div = Divisor.of_zeros(polymat.det(out_gcrd))
    sigma_qr = Divisor.of_zeros(polymat.det(q_r)).points()
    io_set = frozenset(output_div.points() - sigma_qr)
    dec_set = frozenset(input_div.points() | sigma_qr)

    if not is_irreducible(reduced):
        raise AnalysisError("reduced AMD is not irreducible")
    if transfer_function(reduced) != transfer_function(H):
        raise AnalysisError("decoupling changed the transfer function")
    poles = ratmat.least_order(transfer_function(H)).points()
    if amd_order(H).points() != poles | dec_set:
        raise AnalysisError("spectrum of A is not poles plus decoupling set")
    return DecouplingReport(
        input_decoupling=input_div,
        output_decoupling=output_div,
        io_decoupling=io_set,
        decoupling=dec_set,
        reduced=reduced,
        QL=q_l,
        QR=q_r,
    )
