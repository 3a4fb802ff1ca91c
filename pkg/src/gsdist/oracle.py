"""Brute-force stabilizer tableau used to cross-check graph rules and frames.

Each generator is a Pauli ``i**k * prod_q X_q**x_q Z_q**z_q`` stored as the
triple ``(x, z, k)`` with bit-packed ``x`` and ``z`` over tableau positions.
Nothing here consults :mod:`gsdist.graph`; neighborhoods needed for local
complementation are read off the stabilizer group itself.
"""

from __future__ import annotations

from typing import Iterable, Literal, Sequence

import numpy as np

from gsdist.errors import ForcedOutcomeImpossible, SizeMismatch, UnknownQubit

Pauli = tuple[int, int, int]
PauliBasis = Literal["X", "Y", "Z"]

_IDENTITY: Pauli = (0, 0, 0)


def pauli_mul(p: Pauli, q: Pauli) -> Pauli:
    x1, z1, k1 = p
    x2, z2, k2 = q
    # Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1
    return x1 ^ x2, z1 ^ z2, (k1 + k2 + 2 * (z1 & x2).bit_count()) % 4


def commutes(p: Pauli, q: Pauli) -> bool:
    return ((p[0] & q[1]) ^ (p[1] & q[0])).bit_count() % 2 == 0


def sign_of(p: Pauli) -> int:
    """+1 or -1 for a Hermitian Pauli."""
    d = (p[2] - (p[0] & p[1]).bit_count()) % 4
    if d == 0:
        return 1
    if d == 2:
        return -1
    raise ValueError("Pauli is not Hermitian")


def single(basis: str, pos: int, sign: int = 1) -> Pauli:
    b = 1 << pos
    k = 0 if sign == 1 else 2
    if basis == "X":
        return b, 0, k
    if basis == "Z":
        return 0, b, k
    if basis == "Y":
        return b, b, (1 + k) % 4
    raise ValueError(f"unknown Pauli {basis!r}")


def _remove_bit(v: int, j: int) -> int:
    low = v & ((1 << j) - 1)
    return low | ((v >> (j + 1)) << j)


class StabilizerTableau:
    """Stabilizer state on labeled qubits.

    Labels are arbitrary hashable qubit ids; position ``i`` in the bit masks
    corresponds to ``labels[i]``. Measured qubits are projected and removed.
    """

    def __init__(self, labels: Sequence[int], generators: Sequence[Pauli]):
        if len(labels) != len(generators):
            raise SizeMismatch("need one generator per qubit")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate qubit labels")
        self.labels: list[int] = list(labels)
        self.gens: list[Pauli] = [tuple(g) for g in generators]  # type: ignore[misc]
        self._pos = {q: i for i, q in enumerate(self.labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def plus_state(cls, labels: Iterable[int]) -> StabilizerTableau:
        labels = list(labels)
        return cls(labels, [(1 << i, 0, 0) for i in range(len(labels))])

    @classmethod
    def from_graph(cls, G) -> StabilizerTableau:
        """Graph state stabilizers ``K_v = X_v Z_{N(v)}`` with all signs ``+``."""
        labels = sorted(G.vertices)
        pos = {v: i for i, v in enumerate(labels)}
        gens = []
        for v in labels:
            z = 0
            for w in G.neighbors(v):
                z |= 1 << pos[w]
            gens.append((1 << pos[v], z, 0))
        return cls(labels, gens)

    def copy(self) -> StabilizerTableau:
        return StabilizerTableau(self.labels, self.gens)

    def pos(self, q: int) -> int:
        try:
            return self._pos[q]
        except KeyError:
            raise UnknownQubit(q) from None

    def add_qubit(self, q: int) -> None:
        """Tensor in a fresh ``|+>`` on label ``q``."""
        if q in self._pos:
            raise ValueError(f"qubit {q} already present")
        self._pos[q] = len(self.labels)
        self.labels.append(q)
        self.gens.append((1 << self._pos[q], 0, 0))

    # -- unitaries -----------------------------------------------------------

    def _conjugate(self, images: dict[int, tuple[Pauli, Pauli]]) -> None:
        mask = 0
        for j in images:
            mask |= 1 << j
        order = sorted(images)
        out = []
        for x, z, k in self.gens:
            local: Pauli = _IDENTITY
            for j in order:
                if (x >> j) & 1:
                    local = pauli_mul(local, images[j][0])
                if (z >> j) & 1:
                    local = pauli_mul(local, images[j][1])
            out.append(((x & ~mask) | local[0], (z & ~mask) | local[1], (k + local[2]) % 4))
        self.gens = out

    def apply_cz(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError("CZ needs two distinct qubits")
        i, j = self.pos(a), self.pos(b)
        bi, bj = 1 << i, 1 << j
        self._conjugate({i: ((bi, bj, 0), (0, bi, 0)), j: ((bj, bi, 0), (0, bj, 0))})

    def apply_pauli(self, basis: str, q: int) -> None:
        if basis == "I":
            return
        p = single(basis, self.pos(q))
        self.gens = [g if commutes(g, p) else (g[0], g[1], (g[2] + 2) % 4) for g in self.gens]

    def apply_sqrt_x(self, q: int) -> None:
        """Conjugate by ``exp(-i pi/4 X)``: ``X -> X``, ``Z -> -Y``."""
        j = self.pos(q)
        b = 1 << j
        self._conjugate({j: ((b, 0, 0), (b, b, 3))})

    def apply_sqrt_z(self, q: int) -> None:
        """Conjugate by ``exp(+i pi/4 Z)``: ``X -> -Y``, ``Z -> Z``."""
        j = self.pos(q)
        b = 1 << j
        self._conjugate({j: ((b, b, 3), (0, b, 0))})

    def apply_lc(self, v: int, neighbors: Iterable[int] | None = None) -> None:
        """Local Clifford realizing local complementation at ``v``.

        Neighborhood defaults to the one read from the current state.
        """
        nb = list(self.graph_neighbors(v) if neighbors is None else neighbors)
        self.apply_sqrt_x(v)
        for w in nb:
            self.apply_sqrt_z(w)

    # -- group queries -------------------------------------------------------

    def _solve(self, target: int, width_mask: int, key) -> list[int] | None:
        """Indices of generators whose ``key`` vectors XOR to ``target``."""
        basis: dict[int, tuple[int, int]] = {}
        for idx, g in enumerate(self.gens):
            vec, comb = key(g) & width_mask, 1 << idx
            while vec:
                lead = vec.bit_length() - 1
                if lead not in basis:
                    basis[lead] = (vec, comb)
                    break
                bv, bc = basis[lead]
                vec ^= bv
                comb ^= bc
        vec, comb = target, 0
        while vec:
            lead = vec.bit_length() - 1
            if lead not in basis:
                return None
            bv, bc = basis[lead]
            vec ^= bv
            comb ^= bc
        return [i for i in range(len(self.gens)) if (comb >> i) & 1]

    def _product(self, idxs: Iterable[int]) -> Pauli:
        p = _IDENTITY
        for i in idxs:
            p = pauli_mul(p, self.gens[i])
        return p

    def express(self, p: Pauli) -> list[int] | None:
        """Generator indices whose product equals ``p`` up to sign, if any."""
        n = self.n
        full = (1 << (2 * n)) - 1
        return self._solve(p[0] | (p[1] << n), full, lambda g: g[0] | (g[1] << n))

    def contains(self, p: Pauli) -> bool:
        """True iff ``p`` (with its phase) lies in the stabilizer group."""
        idxs = self.express(p)
        if idxs is None:
            return False
        return self._product(idxs)[2] % 4 == p[2] % 4

    def graph_neighbors(self, v: int) -> list[int]:
        """Neighbors of ``v`` if the state is a graph state up to Pauli-Z signs."""
        j = self.pos(v)
        n = self.n
        idxs = self._solve(1 << j, (1 << n) - 1, lambda g: g[0])
        if idxs is None:
            raise ValueError("state has no stabilizer with X-support {v}")
        x, z, _ = self._product(idxs)
        if x != 1 << j or (z >> j) & 1:
            raise ValueError("state is not in graph form at this qubit")
        return [self.labels[i] for i in range(n) if (z >> i) & 1]

    def is_valid(self) -> bool:
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                if not commutes(self.gens[i], self.gens[j]):
                    return False
        try:
            for g in self.gens:
                sign_of(g)
        except ValueError:
            return False
        basis: dict[int, int] = {}
        for x, z, _ in self.gens:
            vec = x | (z << n)
            while vec:
                lead = vec.bit_length() - 1
                if lead not in basis:
                    basis[lead] = vec
                    break
                vec ^= basis[lead]
            else:
                return False
        return True

    # -- measurement ---------------------------------------------------------

    def measure(
        self,
        basis: PauliBasis,
        q: int,
        forced_outcome: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> int:
        """Measure ``basis`` on ``q``, project, and drop ``q`` from the tableau.

        Returns the outcome bit (0 for the ``+1`` eigenvalue).
        """
        j = self.pos(q)
        m = single(basis, j)
        anti = [i for i, g in enumerate(self.gens) if not commutes(g, m)]
        if anti:
            p = anti[0]
            for i in anti[1:]:
                self.gens[i] = pauli_mul(self.gens[i], self.gens[p])
            if forced_outcome is None:
                rng = rng if rng is not None else np.random.default_rng()
                outcome = int(rng.integers(2))
            else:
                outcome = int(forced_outcome)
            self.gens[p] = (m[0], m[1], (m[2] + 2 * outcome) % 4)
        else:
            idxs = self.express(m)
            assert idxs, "a commuting Pauli must lie in the group up to sign"
            prod = self._product(idxs)
            outcome = 0 if prod[2] == m[2] else 1
            if forced_outcome is not None and int(forced_outcome) != outcome:
                raise ForcedOutcomeImpossible(f"outcome on {q} is deterministically {outcome}")
            p = idxs[0]
            self.gens[p] = prod
        b = 1 << j
        gp = self.gens[p]
        for i, g in enumerate(self.gens):
            if i != p and ((g[0] | g[1]) & b):
                self.gens[i] = pauli_mul(g, gp)
        del self.gens[p]
        self.gens = [(_remove_bit(x, j), _remove_bit(z, j), k) for x, z, k in self.gens]
        del self.labels[j]
        self._pos = {lab: i for i, lab in enumerate(self.labels)}
        return outcome

    def __repr__(self) -> str:
        return f"StabilizerTableau(labels={self.labels}, gens={[self.pauli_str(g) for g in self.gens]})"

    def pauli_str(self, g: Pauli) -> str:
        chars = []
        for i in range(self.n):
            xb, zb = (g[0] >> i) & 1, (g[1] >> i) & 1
            chars.append("IXZY"[xb + 2 * zb])
        return ("+" if sign_of(g) == 1 else "-") + "".join(chars)


def from_graph(G) -> StabilizerTableau:
    return StabilizerTableau.from_graph(G)


def apply_gate(T: StabilizerTableau, gate: tuple) -> StabilizerTableau:
    """Return a copy of ``T`` with one gate applied.

    ``gate`` is ``("CZ", a, b)``, ``("LC", v)``, ``("LC", v, neighbors)`` or
    ``(P, v)`` with ``P`` in ``"XYZ"``.
    """
    out = T.copy()
    kind = gate[0]
    if kind == "CZ":
        out.apply_cz(gate[1], gate[2])
    elif kind == "LC":
        out.apply_lc(gate[1], gate[2] if len(gate) > 2 else None)
    elif kind in ("X", "Y", "Z", "I"):
        out.apply_pauli(kind, gate[1])
    else:
        raise ValueError(f"unknown gate {kind!r}")
    return out


def measure_pauli(
    T: StabilizerTableau,
    basis: PauliBasis,
    v: int,
    forced_outcome: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[StabilizerTableau, int]:
    out = T.copy()
    outcome = out.measure(basis, v, forced_outcome, rng)
    return out, outcome


def stabilizer_equal(T1: StabilizerTableau, T2: StabilizerTableau) -> bool:
    """True iff both tableaus generate the same signed stabilizer group."""
    if T1.n != T2.n:
        raise SizeMismatch(f"{T1.n} vs {T2.n} qubits")
    if set(T1.labels) != set(T2.labels):
        return False
    perm = [T1.pos(q) for q in T2.labels]
    for x, z, k in T2.gens:
        nx = nz = 0
        for i, pi in enumerate(perm):
            nx |= ((x >> i) & 1) << pi
            nz |= ((z >> i) & 1) << pi
        if not T1.contains((nx, nz, k)):
            return False
    return True
